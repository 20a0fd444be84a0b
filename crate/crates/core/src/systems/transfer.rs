use crate::error::{Error, Result};

/// `G(y) = Σ_{i=0}^{j(y)−1} F(h(S^i y))`, the coboundary transferred along
/// an orbit equivalence with time change `j`.
pub fn transfer_coboundary<Y: Clone, Z>(
    f_eval: impl Fn(&Z) -> f64,
    h: impl Fn(&Y) -> Z,
    j_fn: impl Fn(&Y) -> i64,
    s_step: impl Fn(&Y) -> Y,
    y: &Y,
) -> Result<f64> {
    let j = j_fn(y);
    if j < 0 {
        return Err(Error::NegativeTimeChange(j));
    }
    let mut point = y.clone();
    let mut sum = 0.0;
    for i in 0..j {
        sum += f_eval(&h(&point));
        if i + 1 < j {
            point = s_step(&point);
        }
    }
    Ok(sum)
}
