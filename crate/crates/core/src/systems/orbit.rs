use std::io::Write;

use super::point::TorusPoint;
use super::spec::SkewSpec;
use crate::arithmetic::Frac128;
use crate::error::Result;

/// Folds `observer` over `x₀, T x₀, …, T^N x₀` in constant memory.
pub fn orbit_fold<A>(
    spec: &SkewSpec,
    x0: &TorusPoint,
    n: u64,
    init: A,
    mut observer: impl FnMut(A, u64, &[Frac128]) -> A,
) -> Result<A> {
    spec.check_dim(x0.dim())?;
    let mut x = x0.clone();
    let mut acc = observer(init, 0, &x.coords);
    for i in 1..=n {
        spec.step_in_place(&mut x.coords);
        acc = observer(acc, i, &x.coords);
    }
    Ok(acc)
}

/// CSV rows `step,x1,…,xd` for every `every`-th orbit point up to `N`.
pub fn write_orbit_csv(
    spec: &SkewSpec,
    x0: &TorusPoint,
    n: u64,
    every: u64,
    out: &mut impl Write,
) -> std::io::Result<()> {
    let every = every.max(1);
    let header: Vec<String> = (1..=spec.dim()).map(|i| format!("x{i}")).collect();
    writeln!(out, "step,{}", header.join(","))?;
    let rows = orbit_fold(spec, x0, n, Vec::new(), |mut rows, i, x| {
        if i % every == 0 {
            let cols: Vec<String> = x.iter().map(|c| c.to_f64().to_string()).collect();
            rows.push(format!("{i},{}", cols.join(",")));
        }
        rows
    })
    .map_err(std::io::Error::other)?;
    for r in rows {
        writeln!(out, "{r}")?;
    }
    Ok(())
}
