use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use skewlab::arithmetic::{recommended_eps, select_subsequence};
use skewlab::fourier::{build_chain, cesaro_at_zero, eps_advisory, sup_growth_probe, CoboundaryChain, SparseSeries};
use skewlab::rpk::{rp_bruteforce_finite, rp_certify_torus, rp_product_project, FiniteSystem, TorusOutcome};
use skewlab::systems::{
    build_combined, build_lemma31_t, build_r, build_s, build_sprime, build_two_coboundary, build_zd_family, PiMap,
    SkewSpec, Update,
};
use skewlab::verify::{
    coboundary_residual, commutation_residual, conjugacy_residual, eigenfunction_residual, halton_points,
    unique_ergodicity_probe, Character,
};

use crate::artifacts::*;
use crate::config::{ExperimentConfig, FiniteSource, SystemConfig, SCHEMA};

/// Threshold for every identity-class residual.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// What a command prints; `ok == false` maps to a nonzero exit.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<String>,
    pub ok: bool,
}

fn build_chains(cfg: &ExperimentConfig) -> Result<Vec<CoboundaryChain>> {
    let eps = cfg.eps();
    let mut alphas = vec![cfg.alpha()?];
    if matches!(cfg.system, SystemConfig::Combined { .. }) {
        alphas.push(cfg.beta()?);
    }
    alphas
        .into_iter()
        .map(|a| {
            let sub = select_subsequence(a, eps, cfg.count, cfg.n_max)?;
            Ok(build_chain(&sub, a, cfg.chain_length)?)
        })
        .collect()
}

/// The system and, for a zd-family, all of its members.
fn build_system(cfg: &ExperimentConfig, chains: &[CoboundaryChain]) -> Result<(SkewSpec, Vec<SkewSpec>)> {
    let c = &chains[0];
    let alpha = c.alpha;
    let spec = match cfg.system {
        SystemConfig::S { k } => build_s(k, alpha)?,
        SystemConfig::Lemma31T { k, j } => build_lemma31_t(k, j, &c.f, alpha)?,
        SystemConfig::R { k } => build_r(k + 1, &c.f, alpha, cfg.beta()?)?,
        SystemConfig::TwoCob { k, l } => build_two_coboundary(k + 1, l, &c.f, alpha, cfg.beta()?)?,
        SystemConfig::Combined { k, j, l } => build_combined(k, j, l, &chains[1].f, &c.f, alpha, chains[1].alpha)?,
        SystemConfig::ZdFamily { k, j, ref constants } => {
            let family = build_zd_family(&build_lemma31_t(k, j, &c.f, alpha)?, constants)?;
            return Ok((family[0].clone(), family));
        }
    };
    Ok((spec, Vec::new()))
}

/// For each member, the series-free system it is conjugate to and the map `π`.
fn conjugacy_targets(
    cfg: &ExperimentConfig,
    chains: &[CoboundaryChain],
    members: usize,
) -> Result<Vec<(SkewSpec, PiMap)>> {
    let c = &chains[0];
    let alpha = c.alpha;
    let one = |t: SkewSpec, pi: PiMap| Ok(vec![(t, pi)]);
    match cfg.system {
        SystemConfig::S { k } => one(build_s(k, alpha)?, PiMap::identity()),
        SystemConfig::Lemma31T { k, j } => one(build_s(k, alpha)?, PiMap::new(j, &c.g[..k - j])),
        SystemConfig::R { k } => one(build_sprime(k + 1, alpha, cfg.beta()?)?, PiMap::new(1, &c.g[..k])),
        SystemConfig::TwoCob { k, l } => {
            let zero = SparseSeries::zero("0");
            one(
                build_two_coboundary(k + 1, l, &zero, alpha, cfg.beta()?)?,
                PiMap::two_coboundary(k + 1, l, &c.g)?,
            )
        }
        SystemConfig::Combined { k, j, l } => {
            let b = &chains[1];
            let target = SkewSpec::product(&build_s(k, alpha)?, &build_s(k, b.alpha)?)?;
            let pi = PiMap::interleaved(&[PiMap::new(l, &c.g[..k - l]), PiMap::new(j, &b.g[..k - j])]);
            one(target, pi)
        }
        SystemConfig::ZdFamily { k, j, ref constants } => {
            let pi = PiMap::new(j, &c.g[..k - j]);
            constants
                .iter()
                .take(members)
                .map(|&cst| {
                    let mut u = build_s(k, alpha)?.updates().to_vec();
                    u[j] = Update {
                        constant: u[j].constant + cst,
                        ..u[j].clone()
                    };
                    Ok((SkewSpec::new(u)?, pi.clone()))
                })
                .collect()
        }
    }
}

fn describe_chain(out: &mut String, label: &str, c: &CoboundaryChain, samples: usize) {
    let s = &c.subseq;
    let last = s.entries.last().map_or(0, |e| e.n);
    let _ = writeln!(
        out,
        "chain over {label}: eps {} r0 {} entries {} largest n_r {last}",
        s.eps,
        s.r0,
        s.len()
    );
    let _ = writeln!(
        out,
        "  f: |coeffs|_1 {:.6e}  l2 {:.6e}",
        c.f.abs_coeff_sum(),
        c.f.l2_norm()
    );
    for g in &c.g {
        let _ = writeln!(
            out,
            "  {}: |coeffs|_1 {:.6e}  l2 {:.6e}",
            g.label(),
            g.abs_coeff_sum(),
            g.l2_norm()
        );
    }
    let _ = writeln!(out, "  coefficient residual {:.3e}", c.coefficient_residual());
    let _ = writeln!(
        out,
        "  coboundary residual ({samples} samples) {:.3e}",
        coboundary_residual(c, samples)
    );
}

/// Builds the chain(s) and the system; writes `chain.json` and `spec.json`.
pub fn cmd_build(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Outcome> {
    cfg.validate()?;
    let mut outcome = Outcome {
        ok: true,
        ..Outcome::default()
    };
    if let Some(msg) = eps_advisory(cfg.eps(), cfg.chain_length) {
        outcome.warnings.push(msg);
    }
    let chains = build_chains(cfg)?;
    let (spec, family) = build_system(cfg, &chains)?;

    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    write_json(
        &out_dir.join(CHAIN_FILE),
        &ChainFile {
            schema: SCHEMA,
            chains: chains.clone(),
        },
    )?;
    write_json(
        &out_dir.join(SPEC_FILE),
        &SpecFile {
            schema: SCHEMA,
            kind: cfg.system.kind().to_string(),
            spec: spec.clone(),
            family,
        },
    )?;

    let t = &mut outcome.text;
    let _ = writeln!(t, "system {} on T^{}", cfg.system.kind(), spec.dim());
    let _ = writeln!(
        t,
        "eps {} (recommended {} for L = {})",
        cfg.eps(),
        recommended_eps(cfg.chain_length),
        cfg.chain_length
    );
    for (c, label) in chains.iter().zip(["alpha", "beta"]) {
        describe_chain(t, label, c, cfg.verify.samples);
    }
    let _ = writeln!(t, "wrote {} and {}", CHAIN_FILE, SPEC_FILE);
    Ok(outcome)
}

fn load_built(cfg: &ExperimentConfig, out_dir: &Path) -> Result<(Vec<CoboundaryChain>, SpecFile)> {
    let chain_path = out_dir.join(CHAIN_FILE);
    let spec_path = out_dir.join(SPEC_FILE);
    let chains: ChainFile = read_json(&chain_path)?;
    check_schema(chains.schema, &chain_path)?;
    let spec: SpecFile = read_json(&spec_path)?;
    check_schema(spec.schema, &spec_path)?;
    if spec.kind != cfg.system.kind() {
        bail!(
            "{} holds a {} system, config selects {}",
            spec_path.display(),
            spec.kind,
            cfg.system.kind()
        );
    }
    let expected = if matches!(cfg.system, SystemConfig::Combined { .. }) {
        2
    } else {
        1
    };
    if chains.chains.len() != expected {
        bail!(
            "{} holds {} chains, expected {expected}",
            chain_path.display(),
            chains.chains.len()
        );
    }
    if chains.chains[0].alpha != cfg.alpha()? {
        bail!("{} was built for a different alpha", chain_path.display());
    }
    if chains.chains.iter().any(|c| c.len() < cfg.chain_length) {
        bail!("{} is shorter than L = {}", chain_path.display(), cfg.chain_length);
    }
    Ok((chains.chains, spec))
}

/// Runs the selected probes on the built files; writes `report.json` and the
/// CSV data. `ok` is false iff an identity-class residual reaches
/// [`IDENTITY_TOLERANCE`].
pub fn cmd_verify(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Outcome> {
    cfg.validate()?;
    let v = &cfg.verify;
    let mut report = Report {
        schema: SCHEMA,
        system: cfg.system.kind().to_string(),
        checks: Vec::new(),
        ergodicity: None,
        sup_growth: Vec::new(),
        cesaro: Vec::new(),
    };
    let mut outcome = Outcome::default();

    if !v.is_empty() {
        let (chains, spec_file) = load_built(cfg, out_dir)?;
        let members: Vec<SkewSpec> = if spec_file.family.is_empty() {
            vec![spec_file.spec.clone()]
        } else {
            spec_file.family.clone()
        };
        let n = v.samples;

        if v.coboundary {
            for (c, label) in chains.iter().zip(["alpha", "beta"]) {
                let name = format!("coboundary[{label}]");
                report
                    .checks
                    .push(Check::below(name, coboundary_residual(c, n), IDENTITY_TOLERANCE));
            }
        }
        if v.conjugacy {
            let targets = conjugacy_targets(cfg, &chains, members.len())?;
            if targets.len() != members.len() {
                bail!("{} members in {SPEC_FILE}, {} in config", members.len(), targets.len());
            }
            for (i, (m, (target, pi))) in members.iter().zip(&targets).enumerate() {
                let r = conjugacy_residual(m, target, pi, n)?;
                report
                    .checks
                    .push(Check::below(format!("conjugacy[{i}]"), r, IDENTITY_TOLERANCE));
            }
        }
        for &[en, em] in &v.eigenfunction {
            let r = eigenfunction_residual(&members[0], en, em, chains[0].g1(), cfg.beta()?, n)?;
            report
                .checks
                .push(Check::below(format!("eigenfunction[{en},{em}]"), r, IDENTITY_TOLERANCE));
        }
        if v.commutation {
            for a in 0..members.len() {
                for b in a + 1..members.len() {
                    let r = commutation_residual(&members[a], &members[b], n)?;
                    report
                        .checks
                        .push(Check::below(format!("commutation[{a},{b}]"), r, IDENTITY_TOLERANCE));
                }
            }
        }
        if let Some(b) = &v.birkhoff {
            let spec = &members[0];
            let starts = if b.starts.is_empty() {
                halton_points(spec.dim(), 5)
            } else {
                b.starts.clone()
            };
            let chars: Vec<Character> = b.chars.iter().cloned().map(Character::new).collect();
            let e = unique_ergodicity_probe(cfg.system.kind(), spec, &chars, &starts, &b.checkpoints)?;
            write_text(&out_dir.join(BIRKHOFF_CSV), &e.to_csv())?;
            report.ergodicity = Some(e);
        }
        if !v.sup_growth.is_empty() {
            report.sup_growth = sup_growth_probe(&chains[0], &v.sup_growth)?;
            let mut csv = String::from("M,value\n");
            for (m, val) in &report.sup_growth {
                let _ = writeln!(csv, "{m},{val}");
            }
            write_text(&out_dir.join(SUP_GROWTH_CSV), &csv)?;
        }
        if !v.cesaro.is_empty() {
            report.cesaro = v
                .cesaro
                .iter()
                .map(|&big_n| (big_n, cesaro_at_zero(&chains[0], big_n)))
                .collect();
            let mut csv = String::from("N,value\n");
            for (big_n, val) in &report.cesaro {
                let _ = writeln!(csv, "{big_n},{val}");
            }
            write_text(&out_dir.join(CESARO_CSV), &csv)?;
        }
    }

    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    write_json(&out_dir.join(REPORT_FILE), &report)?;
    outcome.ok = report.passed();
    outcome.text = render_report(&report);
    Ok(outcome)
}

fn render_report(r: &Report) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "report for {}", r.system);
    if r.checks.is_empty() && r.ergodicity.is_none() && r.sup_growth.is_empty() && r.cesaro.is_empty() {
        let _ = writeln!(t, "  nothing selected");
    }
    for c in &r.checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        let _ = writeln!(t, "  {mark} {:<22} {:.3e} (< {:e})", c.name, c.value, c.threshold);
    }
    if let Some(e) = &r.ergodicity {
        for s in &e.summaries {
            let slope = s.decay_slope.map_or("-".to_string(), |x| format!("{x:.3}"));
            let _ = writeln!(
                t,
                "  birkhoff char {:<8} max|avg| {:.3e} spread {:.3e} slope {slope}",
                s.char.label(),
                s.max_abs,
                s.spread
            );
        }
    }
    if let (Some(first), Some(last)) = (r.sup_growth.first(), r.sup_growth.last()) {
        let _ = writeln!(
            t,
            "  sup growth {:.4} at M = {} .. {:.4} at M = {}",
            first.1, first.0, last.1, last.0
        );
    }
    if let (Some(first), Some(last)) = (r.cesaro.first(), r.cesaro.last()) {
        let _ = writeln!(
            t,
            "  cesaro at 0: {:.4} at N = {} .. {:.4} at N = {}",
            first.1, first.0, last.1, last.0
        );
    }
    t
}

/// Certifies the configured pairs; writes `certificates.json`.
pub fn cmd_rpk(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Outcome> {
    cfg.validate()?;
    let r = &cfg.rpk;
    let mut file = CertificateFile {
        schema: SCHEMA,
        system: cfg.system.kind().to_string(),
        torus: Vec::new(),
        finite: Vec::new(),
    };
    let mut t = String::new();

    if !r.pairs.is_empty() {
        let spec_path = out_dir.join(SPEC_FILE);
        let spec_file: SpecFile = read_json(&spec_path)?;
        check_schema(spec_file.schema, &spec_path)?;
        let spec = &spec_file.spec;
        for p in &r.pairs {
            let outcome = rp_certify_torus(spec, (&p.x, &p.y), r.k, r.delta, r.n_bound, r.grid)?;
            let projection = match (&outcome, r.project) {
                (TorusOutcome::Certified(c), true) => Some(rp_product_project(spec, c)?),
                _ => None,
            };
            let line = match &outcome {
                TorusOutcome::Certified(c) => format!("certified with n = {:?}", c.n),
                TorusOutcome::NoWitnessFound(w) => match &w.obstruction {
                    Some(o) => format!("no witness; {}", o.note),
                    None => "no witness within the search bounds".to_string(),
                },
            };
            let _ = writeln!(t, "torus pair {:?} / {:?}: {line}", p.x.to_f64s(), p.y.to_f64s());
            file.torus.push(TorusEntry {
                x: p.x.clone(),
                y: p.y.clone(),
                k: r.k,
                outcome,
                projection,
            });
        }
    }
    for run in &r.finite {
        let sys = match &run.system {
            FiniteSource::Cyclic { n, shift } => FiniteSystem::cyclic_rotation(*n, *shift)?,
            FiniteSource::Path(p) => read_json(p)?,
        };
        let pairs = rp_bruteforce_finite(&sys, run.k, run.delta, run.n_bound)?;
        let diagonal = pairs.len() == sys.size() && pairs.iter().all(|(a, b)| a == b);
        let _ = writeln!(
            t,
            "finite {} k {} delta {}: {} pairs{}",
            run.system.label(),
            run.k,
            run.delta,
            pairs.len(),
            if diagonal { " (the diagonal)" } else { "" }
        );
        file.finite.push(FiniteEntry {
            system: run.system.label(),
            k: run.k,
            delta: run.delta,
            n_bound: run.n_bound,
            pairs,
        });
    }
    if file.torus.is_empty() && file.finite.is_empty() {
        let _ = writeln!(t, "no pairs configured");
    }

    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    write_json(&out_dir.join(CERT_FILE), &file)?;
    Ok(Outcome {
        text: t,
        warnings: Vec::new(),
        ok: true,
    })
}

/// Summarizes whichever of `report.json` and `certificates.json` exist into
/// `summary.txt`.
pub fn cmd_report(_cfg: &ExperimentConfig, out_dir: &Path) -> Result<Outcome> {
    let report_path = out_dir.join(REPORT_FILE);
    let cert_path = out_dir.join(CERT_FILE);
    let mut t = String::new();
    let mut ok = true;
    let mut found = false;
    if report_path.exists() {
        let r: Report = read_json(&report_path)?;
        check_schema(r.schema, &report_path)?;
        t.push_str(&render_report(&r));
        ok &= r.passed();
        found = true;
    }
    if cert_path.exists() {
        let c: CertificateFile = read_json(&cert_path)?;
        check_schema(c.schema, &cert_path)?;
        let certified = c.torus.iter().filter(|e| e.outcome.certificate().is_some()).count();
        let obstructed = c
            .torus
            .iter()
            .filter(|e| matches!(&e.outcome, TorusOutcome::NoWitnessFound(w) if w.obstruction.is_some()))
            .count();
        let _ = writeln!(
            t,
            "certificates for {}: {} torus pairs, {certified} certified, {obstructed} ruled out by invariance",
            c.system,
            c.torus.len()
        );
        for f in &c.finite {
            let _ = writeln!(
                t,
                "  finite {} k {} delta {}: {} pairs",
                f.system,
                f.k,
                f.delta,
                f.pairs.len()
            );
        }
        found = true;
    }
    if !found {
        bail!("neither {} nor {} exists", report_path.display(), cert_path.display());
    }
    write_text(&out_dir.join(SUMMARY_FILE), &t)?;
    Ok(Outcome {
        text: t,
        warnings: Vec::new(),
        ok,
    })
}
