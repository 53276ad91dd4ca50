//! Invariant suites behind the verify command. Each check owns a stable
//! identifier; a run prints one human line per check to stderr, emits a
//! machine-readable JSON summary on stdout, writes the same summary to a
//! file, and fails with exit code 1 when any check fails.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use zgb_core::bernoulli::BernoulliTable;
use zgb_core::circle::{sample_circle_symmetric, GammaCircle};
use zgb_core::laurent::{laurent_coeffs, parity_orthogonality_check, q_coeffs_closed_form};
use zgb_core::nullcond::hardy_z;
use zgb_core::zeta::{
    check_factor_identity, dirichlet_oracle, evaluate_zeta, f_gb, q_of, q_of_prime, reflect_zeta,
    EvalParams,
};
use zgb_core::{Result as CoreResult, C64};

use crate::commands::{make_table, SCHEMA_VERSION};
use crate::config::RunConfig;
use crate::emit::{f17, to_json, write_file};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Identity,
    Symmetry,
    Orthogonality,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Identity => "identity",
            Suite::Symmetry => "symmetry",
            Suite::Orthogonality => "orthogonality",
            Suite::All => "all",
        }
    }
}

#[derive(Serialize)]
struct CheckRec {
    id: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyRecord {
    schema_version: u32,
    command: &'static str,
    suite: &'static str,
    poisoned: bool,
    passed: bool,
    checks: Vec<CheckRec>,
}

type Check = (bool, String);

fn run_check(f: impl FnOnce() -> CoreResult<Check>) -> Check {
    match f() {
        Ok(outcome) => outcome,
        Err(e) => (false, format!("error: {e}")),
    }
}

fn factor_identity_grid(cfg: &RunConfig, table: &BernoulliTable) -> CoreResult<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let re = rng.random_range(-0.49..=0.49);
        let mag = rng.random_range(0.05..=30.0);
        let im = if rng.random_range(0..2) == 0 {
            mag
        } else {
            -mag
        };
        let s = C64::new(0.5 + re, im);
        let params = EvalParams::auto(s, cfg.tol, table)?;
        worst = worst.max(check_factor_identity(s, &params, table)?);
    }
    Ok((
        worst < 1e-10,
        format!("max residual {} over 200 seeded strip points", f17(worst)),
    ))
}

fn dirichlet_agreement(cfg: &RunConfig, table: &BernoulliTable) -> CoreResult<Check> {
    let mut worst = 0.0f64;
    for &x in &[2.0, 3.0, 4.0, 6.0] {
        for &y in &[-19.0, -7.0, 0.0, 7.0, 19.0] {
            let s = C64::new(x, y);
            let params = EvalParams::auto(s, cfg.tol, table)?;
            let fast = evaluate_zeta(s, &params, table)?.value;
            let slow = dirichlet_oracle(s, 5_000)?;
            worst = worst.max((fast - slow).norm());
        }
    }
    Ok((
        worst < 1e-10,
        format!("max |fast - direct sum| = {} over 20 points", f17(worst)),
    ))
}

fn reflection_agreement(cfg: &RunConfig, table: &BernoulliTable) -> CoreResult<Check> {
    let mut worst = 0.0f64;
    for &x in &[-0.3, 0.1] {
        for &y in &[2.0, 9.0, 16.0, 23.0, 30.0] {
            let s = C64::new(x, y);
            let params = EvalParams::auto(s, cfg.tol, table)?;
            let direct = evaluate_zeta(s, &params, table)?.value;
            let reflected = reflect_zeta(s, cfg.tol, table)?.value;
            worst = worst.max((direct - reflected).norm());
        }
    }
    Ok((
        worst < 1e-8,
        format!("max |direct - reflected| = {} over 10 points", f17(worst)),
    ))
}

fn euler_values(cfg: &RunConfig, table: &BernoulliTable) -> CoreResult<Check> {
    let pi = std::f64::consts::PI;
    let targets = [
        (C64::new(2.0, 0.0), pi * pi / 6.0),
        (C64::new(4.0, 0.0), pi.powi(4) / 90.0),
    ];
    let mut worst = 0.0f64;
    for (s, want) in targets {
        let params = EvalParams::auto(s, cfg.tol, table)?;
        let got = evaluate_zeta(s, &params, table)?.value;
        worst = worst.max((got - C64::new(want, 0.0)).norm());
    }
    Ok((
        worst < 1e-12,
        format!("max deviation from closed forms = {}", f17(worst)),
    ))
}

fn q_reflection(_cfg: &RunConfig, _table: &BernoulliTable) -> CoreResult<Check> {
    let mut worst = 0.0f64;
    for i in 0..5 {
        for j in 0..5 {
            let s = C64::new(-1.5 + f64::from(i), 0.4 + 1.7 * f64::from(j));
            let a = q_of(s)?;
            let b = q_of(C64::new(1.0, 0.0) - s)?;
            worst = worst.max((a - b).norm());
        }
    }
    Ok((
        worst == 0.0,
        format!("max |Q(s) - Q(1-s)| = {} (exact zero expected)", f17(worst)),
    ))
}

fn conjugation(cfg: &RunConfig, table: &BernoulliTable) -> CoreResult<Check> {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 1..4 {
            let s = C64::new(-0.8 + f64::from(i), 3.0 * f64::from(j));
            let params = EvalParams::auto(s, cfg.tol, table)?;
            let plain = evaluate_zeta(s, &params, table)?.value;
            let mirrored = evaluate_zeta(s.conj(), &params, table)?.value;
            worst = worst.max((mirrored - plain.conj()).norm());
        }
    }
    Ok((
        worst < 1e-13,
        format!("max |zeta(conj s) - conj zeta(s)| = {}", f17(worst)),
    ))
}

fn hardy_reality(cfg: &RunConfig, table: &BernoulliTable) -> CoreResult<Check> {
    let mut worst = 0.0f64;
    for &t in &[2.0, 7.5, 13.0, 21.3, 29.8] {
        let a = hardy_z(t, cfg.tol, table)?;
        let b = hardy_z(-t, cfg.tol, table)?;
        worst = worst.max((a - b).abs());
    }
    Ok((
        worst < 1e-10,
        format!(
            "max |Z(t) - Z(-t)| = {} (realification bound held)",
            f17(worst)
        ),
    ))
}

fn cross_parity_modes(cfg: &RunConfig, table: &BernoulliTable) -> CoreResult<Check> {
    let mut worst = 0.0f64;
    for &rho in &[0.25, 2.0] {
        let circle = GammaCircle::new(rho, 128)?;
        let params = circle.eval_params(cfg.tol, table)?;
        let samples = sample_circle_symmetric(
            |sp| f_gb(C64::new(0.5 + sp.re, sp.im), &params, table).map(|e| e.value),
            &circle,
        )?;
        for m in 0..=3 {
            let (a, b) = parity_orthogonality_check(&samples, &circle, m)?;
            worst = worst.max(a).max(b);
        }
    }
    Ok((
        worst == 0.0,
        format!(
            "max cross-parity mode = {} (exact zero expected)",
            f17(worst)
        ),
    ))
}

fn coefficient_reality(cfg: &RunConfig, table: &BernoulliTable) -> CoreResult<Check> {
    let circle = GammaCircle::new(1.0, 128)?;
    let params = circle.eval_params(cfg.tol, table)?;
    let mut worst = 0.0f64;
    let fgb = sample_circle_symmetric(
        |sp| f_gb(C64::new(0.5 + sp.re, sp.im), &params, table).map(|e| e.value),
        &circle,
    )?;
    let q = sample_circle_symmetric(q_of_prime, &circle)?;
    for samples in [&fgb, &q] {
        let series = laurent_coeffs(samples, &circle, 10, 10)?;
        for (_, c) in series.iter() {
            worst = worst.max(c.im.abs());
        }
    }
    Ok((
        worst == 0.0,
        format!("max |Im c_k| = {} (exact zero expected)", f17(worst)),
    ))
}

fn q_parity_structure(_cfg: &RunConfig, _table: &BernoulliTable) -> CoreResult<Check> {
    let mut worst_even = 0.0f64;
    let mut worst_odd = 0.0f64;
    for (rho, k, window) in [(0.25, 64u32, 8u32), (1.0, 256, 12)] {
        let circle = GammaCircle::new(rho, k)?;
        let samples = sample_circle_symmetric(q_of_prime, &circle)?;
        let series = laurent_coeffs(&samples, &circle, window, window)?;
        for (deg, c) in series.iter() {
            if deg.rem_euclid(2) == 1 {
                worst_odd = worst_odd.max(c.norm());
            } else {
                let want = q_coeffs_closed_form(circle.annulus(), deg);
                worst_even = worst_even.max((c - C64::new(want, 0.0)).norm());
            }
        }
    }
    Ok((
        worst_odd == 0.0 && worst_even < 1e-10,
        format!(
            "max odd coefficient = {}, max even deviation from closed form = {}",
            f17(worst_odd),
            f17(worst_even)
        ),
    ))
}

type CheckFn = fn(&RunConfig, &BernoulliTable) -> CoreResult<Check>;

const IDENTITY_CHECKS: &[(&str, CheckFn)] = &[
    ("identity.factor_identity_grid", factor_identity_grid),
    ("identity.dirichlet_agreement", dirichlet_agreement),
    ("identity.reflection_agreement", reflection_agreement),
    ("identity.euler_values", euler_values),
];

const SYMMETRY_CHECKS: &[(&str, CheckFn)] = &[
    ("symmetry.q_reflection", q_reflection),
    ("symmetry.conjugation", conjugation),
    ("symmetry.hardy_reality", hardy_reality),
];

const ORTHOGONALITY_CHECKS: &[(&str, CheckFn)] = &[
    ("orthogonality.cross_parity_modes", cross_parity_modes),
    ("orthogonality.coefficient_reality", coefficient_reality),
    ("orthogonality.q_parity_structure", q_parity_structure),
];

pub fn cmd_verify(cfg: &RunConfig, suite: Suite, poison: bool) -> Result<(), CliError> {
    let mut table = make_table(cfg)?;
    if poison {
        table.poison_even_for_tests(2, 1.0);
    }
    let selected: Vec<&(&str, CheckFn)> = match suite {
        Suite::Identity => IDENTITY_CHECKS.iter().collect(),
        Suite::Symmetry => SYMMETRY_CHECKS.iter().collect(),
        Suite::Orthogonality => ORTHOGONALITY_CHECKS.iter().collect(),
        Suite::All => IDENTITY_CHECKS
            .iter()
            .chain(SYMMETRY_CHECKS)
            .chain(ORTHOGONALITY_CHECKS)
            .collect(),
    };
    let mut checks = Vec::with_capacity(selected.len());
    let mut all_passed = true;
    for (id, f) in selected {
        let (passed, detail) = run_check(|| f(cfg, &table));
        eprintln!("[{}] {id}: {detail}", if passed { "PASS" } else { "FAIL" });
        all_passed &= passed;
        checks.push(CheckRec { id, passed, detail });
    }
    let record = VerifyRecord {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        suite: suite.name(),
        poisoned: poison,
        passed: all_passed,
        checks,
    };
    let json = format!("{}\n", to_json(&record)?);
    write_file(
        &cfg.output_dir,
        &format!("verify_{}.json", suite.name()),
        &json,
    )?;
    print!("{json}");
    if all_passed {
        Ok(())
    } else {
        Err(CliError::Verify)
    }
}
