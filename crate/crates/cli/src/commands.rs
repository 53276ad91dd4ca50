//! The compute commands: eval, coeffs, decompose, scan, quartet-map,
//! figures. Each prints a deterministic summary to stdout and, where a
//! table is produced, writes CSV and JSON files into the output
//! directory.

use serde::Serialize;

use zgb_core::bernoulli::BernoulliTable;
use zgb_core::circle::{sample_circle_symmetric, GammaCircle};
use zgb_core::laurent::{laurent_coeffs, stable_coeffs, LaurentSeries};
use zgb_core::nullcond::{
    quartet_grid_scan, scan_critical_line, NullConditionProbe, ZeroCandidate,
};
use zgb_core::zeta::{evaluate_zeta, f_gb, q_of_prime, EvalParams};
use zgb_core::{CoreError, C64};

use crate::config::RunConfig;
use crate::emit::{f17, slug, to_json, write_file, CsvTable};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct ComplexRec {
    re: f64,
    im: f64,
}

impl From<C64> for ComplexRec {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct ParamsRec {
    n: u32,
    mu_max: u32,
    tol: f64,
}

impl From<&EvalParams<f64>> for ParamsRec {
    fn from(p: &EvalParams<f64>) -> Self {
        Self {
            n: p.n,
            mu_max: p.mu_max,
            tol: p.tol,
        }
    }
}

pub fn make_table(cfg: &RunConfig) -> Result<BernoulliTable, CliError> {
    Ok(BernoulliTable::new(cfg.bernoulli_depth)?)
}

#[derive(Serialize)]
struct EvalRecord {
    schema_version: u32,
    command: &'static str,
    s: ComplexRec,
    value: ComplexRec,
    error_estimate: f64,
    meets_tol: bool,
    params: ParamsRec,
}

pub fn cmd_eval(cfg: &RunConfig, literal: &str) -> Result<(), CliError> {
    let s = crate::parse::parse_complex(literal).map_err(CliError::Usage)?;
    let table = make_table(cfg)?;
    let params = EvalParams::auto(s, cfg.tol, &table)?;
    let est = evaluate_zeta(s, &params, &table)?;
    let record = EvalRecord {
        schema_version: SCHEMA_VERSION,
        command: "eval",
        s: s.into(),
        value: est.value.into(),
        error_estimate: est.error_estimate,
        meets_tol: est.meets_tol,
        params: ParamsRec {
            n: params.n,
            mu_max: est.used_mu.max(1),
            tol: params.tol,
        },
    };
    println!("{}", to_json(&record)?);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FunctionKind {
    /// The continued factor function, sampled as F_GB(1/2 + s').
    Fgb,
    /// The pole factor Q, sampled as Q(1/2 + s').
    Q,
}

impl FunctionKind {
    fn name(self) -> &'static str {
        match self {
            FunctionKind::Fgb => "fgb",
            FunctionKind::Q => "q",
        }
    }
}

struct Extraction {
    series: LaurentSeries<f64>,
    k_used: u32,
    drift: Option<f64>,
    params: EvalParams<f64>,
}

fn extract_series(
    cfg: &RunConfig,
    table: &BernoulliTable,
    function: FunctionKind,
    rho: f64,
    window: u32,
    k: Option<u32>,
) -> Result<Extraction, CliError> {
    let params = EvalParams::auto_for_radius(rho, cfg.tol, table)?;
    let mut f = |sp: C64| -> zgb_core::Result<C64> {
        match function {
            FunctionKind::Fgb => {
                f_gb(C64::new(0.5 + sp.re, sp.im), &params, table).map(|e| e.value)
            }
            FunctionKind::Q => q_of_prime(sp),
        }
    };
    match k {
        Some(k) => {
            let circle = GammaCircle::new(rho, k)?;
            let samples = sample_circle_symmetric(&mut f, &circle)?;
            let series = laurent_coeffs(&samples, &circle, window, window)?;
            Ok(Extraction {
                series,
                k_used: k,
                drift: None,
                params,
            })
        }
        None => {
            let run = stable_coeffs(&mut f, rho, window, window, cfg.k_max)?;
            Ok(Extraction {
                series: run.series,
                k_used: run.k_used,
                drift: Some(run.drift),
                params,
            })
        }
    }
}

#[derive(Serialize)]
struct CoeffRow {
    k: i32,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct CoeffsRecord {
    schema_version: u32,
    command: &'static str,
    function: &'static str,
    rho: f64,
    annulus: String,
    k_used: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    drift: Option<f64>,
    params: ParamsRec,
    window: (i32, i32),
    rows: Vec<CoeffRow>,
}

fn coeff_rows(series: &LaurentSeries<f64>) -> Vec<CoeffRow> {
    series
        .iter()
        .map(|(k, c)| CoeffRow {
            k,
            re: c.re,
            im: c.im,
        })
        .collect()
}

fn coeff_metadata(t: &mut CsvTable, record: &CoeffsRecord) {
    t.meta("schema_version", record.schema_version.to_string())
        .meta("command", record.command)
        .meta("function", record.function)
        .meta("rho", f17(record.rho))
        .meta("annulus", &record.annulus)
        .meta("k_used", record.k_used.to_string())
        .meta(
            "drift",
            record.drift.map(f17).unwrap_or_else(|| "none".into()),
        )
        .meta("n", record.params.n.to_string())
        .meta("mu_max", record.params.mu_max.to_string())
        .meta("tol", f17(record.params.tol));
}

pub fn cmd_coeffs(
    cfg: &RunConfig,
    function: FunctionKind,
    rho: f64,
    window: u32,
    k: Option<u32>,
) -> Result<(), CliError> {
    let table = make_table(cfg)?;
    let ex = extract_series(cfg, &table, function, rho, window, k)?;
    let record = CoeffsRecord {
        schema_version: SCHEMA_VERSION,
        command: "coeffs",
        function: function.name(),
        rho,
        annulus: ex.series.annulus().to_string(),
        k_used: ex.k_used,
        drift: ex.drift,
        params: (&ex.params).into(),
        window: ex.series.window(),
        rows: coeff_rows(&ex.series),
    };
    let mut csv = CsvTable::new();
    coeff_metadata(&mut csv, &record);
    csv.header(&["k", "re", "im"]);
    for row in &record.rows {
        csv.row(&[row.k.to_string(), f17(row.re), f17(row.im)]);
    }
    let base = format!("coeffs_{}_rho{}", record.function, slug(rho));
    let csv_path = write_file(&cfg.output_dir, &format!("{base}.csv"), &csv.finish())?;
    let json_path = write_file(
        &cfg.output_dir,
        &format!("{base}.json"),
        &format!("{}\n", to_json(&record)?),
    )?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    println!(
        "rows: {} (window {}..{}), annulus {}, K = {}",
        record.rows.len(),
        record.window.0,
        record.window.1,
        record.annulus,
        record.k_used
    );
    Ok(())
}

#[derive(Serialize)]
struct ParityRow {
    k: i32,
    re_sym: f64,
    im_sym: f64,
    re_anti: f64,
    im_anti: f64,
}

#[derive(Serialize)]
struct DecomposeRecord {
    schema_version: u32,
    command: &'static str,
    function: &'static str,
    rho: f64,
    annulus: String,
    k_used: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    drift: Option<f64>,
    params: ParamsRec,
    window: (i32, i32),
    rows: Vec<ParityRow>,
}

pub fn cmd_decompose(
    cfg: &RunConfig,
    function: FunctionKind,
    rho: f64,
    window: u32,
    k: Option<u32>,
) -> Result<(), CliError> {
    let table = make_table(cfg)?;
    let ex = extract_series(cfg, &table, function, rho, window, k)?;
    let (sym, anti) = ex.series.split_parity();
    let (lo, hi) = ex.series.window();
    let rows: Vec<ParityRow> = (lo..=hi)
        .map(|k| {
            let s = sym.coeff(k);
            let a = anti.coeff(k);
            ParityRow {
                k,
                re_sym: s.re,
                im_sym: s.im,
                re_anti: a.re,
                im_anti: a.im,
            }
        })
        .collect();
    let record = DecomposeRecord {
        schema_version: SCHEMA_VERSION,
        command: "decompose",
        function: function.name(),
        rho,
        annulus: ex.series.annulus().to_string(),
        k_used: ex.k_used,
        drift: ex.drift,
        params: (&ex.params).into(),
        window: (lo, hi),
        rows,
    };
    let mut csv = CsvTable::new();
    csv.meta("schema_version", record.schema_version.to_string())
        .meta("command", record.command)
        .meta("function", record.function)
        .meta("rho", f17(rho))
        .meta("annulus", &record.annulus)
        .meta("k_used", record.k_used.to_string())
        .header(&["k", "re_sym", "im_sym", "re_anti", "im_anti"]);
    for row in &record.rows {
        csv.row(&[
            row.k.to_string(),
            f17(row.re_sym),
            f17(row.im_sym),
            f17(row.re_anti),
            f17(row.im_anti),
        ]);
    }
    let base = format!("decompose_{}_rho{}", record.function, slug(rho));
    let csv_path = write_file(&cfg.output_dir, &format!("{base}.csv"), &csv.finish())?;
    let json_path = write_file(
        &cfg.output_dir,
        &format!("{base}.json"),
        &format!("{}\n", to_json(&record)?),
    )?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    Ok(())
}

#[derive(Serialize)]
struct ProbeRec {
    rho: f64,
    alpha: f64,
}

#[derive(Serialize)]
struct ResidualRec {
    probe: ProbeRec,
    r_as_real: f64,
    r_as_imag: f64,
    r_sym: f64,
    r_total: f64,
    n_used: u32,
    mu_used: u32,
}

impl From<&zgb_core::nullcond::ResidualReport<f64>> for ResidualRec {
    fn from(r: &zgb_core::nullcond::ResidualReport<f64>) -> Self {
        Self {
            probe: ProbeRec {
                rho: r.probe.rho(),
                alpha: r.probe.alpha(),
            },
            r_as_real: r.r_as_real,
            r_as_imag: r.r_as_imag,
            r_sym: r.r_sym,
            r_total: r.r_total,
            n_used: r.n_used,
            mu_used: r.mu_used,
        }
    }
}

#[derive(Serialize)]
struct CandidateRec {
    rho: f64,
    bracket: (f64, f64),
    oracle_ordinate: f64,
    close_pair_warning: bool,
    residuals: ResidualRec,
}

impl From<&ZeroCandidate<f64>> for CandidateRec {
    fn from(c: &ZeroCandidate<f64>) -> Self {
        Self {
            rho: c.rho,
            bracket: c.bracket,
            oracle_ordinate: c.oracle_ordinate,
            close_pair_warning: c.close_pair_warning,
            residuals: (&c.residuals).into(),
        }
    }
}

#[derive(Serialize)]
struct ScanRecord {
    schema_version: u32,
    command: &'static str,
    rho_min: f64,
    rho_max: f64,
    step: f64,
    tol: f64,
    candidate_count: usize,
    candidates: Vec<CandidateRec>,
}

pub fn cmd_scan(cfg: &RunConfig, rho_min: f64, rho_max: f64, step: f64) -> Result<(), CliError> {
    if !rho_min.is_finite() || !rho_max.is_finite() || !step.is_finite() {
        return Err(CliError::Usage("scan bounds must be finite".into()));
    }
    if !(rho_min > 0.0) || rho_max <= rho_min || step <= 0.0 {
        return Err(CliError::Usage(format!(
            "scan needs 0 < rho_min < rho_max and step > 0, got {rho_min} {rho_max} step {step}"
        )));
    }
    let table = make_table(cfg)?;
    let candidates = scan_critical_line(rho_min, rho_max, step, cfg.tol, &table)?;
    let record = ScanRecord {
        schema_version: SCHEMA_VERSION,
        command: "scan",
        rho_min,
        rho_max,
        step,
        tol: cfg.tol,
        candidate_count: candidates.len(),
        candidates: candidates.iter().map(CandidateRec::from).collect(),
    };
    let name = format!(
        "scan_{}_{}_{}.json",
        slug(rho_min),
        slug(rho_max),
        slug(step)
    );
    let path = write_file(&cfg.output_dir, &name, &format!("{}\n", to_json(&record)?))?;
    for c in &record.candidates {
        println!(
            "candidate rho = {} oracle = {}{}",
            f17(c.rho),
            f17(c.oracle_ordinate),
            if c.close_pair_warning {
                " [close-pair warning]"
            } else {
                ""
            }
        );
    }
    println!("candidates: {}", record.candidate_count);
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct QuartetRecord {
    schema_version: u32,
    command: &'static str,
    rho: f64,
    alpha_count: u32,
    tol: f64,
    rows: Vec<ResidualRec>,
}

pub fn cmd_quartet_map(cfg: &RunConfig, rho: f64, alpha_count: u32) -> Result<(), CliError> {
    let table = make_table(cfg)?;
    let probe = NullConditionProbe::for_radius(rho, cfg.tol, &table)?;
    let reports = quartet_grid_scan(rho, alpha_count, &probe)?;
    let record = QuartetRecord {
        schema_version: SCHEMA_VERSION,
        command: "quartet-map",
        rho,
        alpha_count,
        tol: cfg.tol,
        rows: reports.iter().map(ResidualRec::from).collect(),
    };
    let mut csv = CsvTable::new();
    csv.meta("schema_version", record.schema_version.to_string())
        .meta("command", record.command)
        .meta("rho", f17(rho))
        .meta("alpha_count", alpha_count.to_string())
        .meta("tol", f17(cfg.tol))
        .header(&[
            "alpha",
            "epsilon",
            "eta",
            "r_as_real",
            "r_as_imag",
            "r_sym",
            "r_total",
        ]);
    for (report, row) in reports.iter().zip(&record.rows) {
        csv.row(&[
            f17(row.probe.alpha),
            f17(report.probe.epsilon()),
            f17(report.probe.eta()),
            f17(row.r_as_real),
            f17(row.r_as_imag),
            f17(row.r_sym),
            f17(row.r_total),
        ]);
    }
    let base = format!("quartet_rho{}_a{}", slug(rho), alpha_count);
    let csv_path = write_file(&cfg.output_dir, &format!("{base}.csv"), &csv.finish())?;
    let json_path = write_file(
        &cfg.output_dir,
        &format!("{base}.json"),
        &format!("{}\n", to_json(&record)?),
    )?;
    let canonical = record.rows.last().expect("grid is nonempty");
    let min_r_total = record
        .rows
        .iter()
        .map(|r| r.r_total)
        .fold(f64::INFINITY, f64::min);
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    println!(
        "canonical r_total = {}, grid minimum = {}",
        f17(canonical.r_total),
        f17(min_r_total)
    );
    Ok(())
}

/// Negative-even-mode tail over the circle of radius `rho`:
/// `sum_{m>=1} (4 z^2)^{-m}` at `z = rho e^(i theta)`, summed until the
/// terms fall below rounding.
fn figure_series(z: C64) -> Result<C64, CliError> {
    let w = (z * z * 4.0).inv();
    let mut term = w;
    let mut sum = w;
    for _ in 0..1_000_000 {
        term *= w;
        sum += term;
        if term.norm() <= 1e-18 * sum.norm().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
    }
    Err(CliError::Core(CoreError::internal(format!(
        "circle series failed to converge at z = {z}"
    ))))
}

pub fn cmd_figures(cfg: &RunConfig, rho: f64, points: u32) -> Result<(), CliError> {
    if !rho.is_finite() || rho <= 0.5 {
        return Err(CliError::Core(CoreError::AnnulusMismatch {
            context: format!("circle data needs the outer region rho > 1/2, got rho = {rho}"),
        }));
    }
    if points < 4 {
        return Err(CliError::Usage(format!(
            "need at least 4 circle points, got {points}"
        )));
    }
    let mut csv = CsvTable::new();
    csv.meta("schema_version", SCHEMA_VERSION.to_string())
        .meta("command", "figures")
        .meta("rho", f17(rho))
        .meta("points", points.to_string())
        .header(&[
            "theta",
            "re",
            "im",
            "abs",
            "re_closed",
            "im_closed",
            "abs_closed",
            "abs_diff",
        ]);
    let mut max_diff = 0.0f64;
    for j in 0..points {
        let theta = 2.0 * std::f64::consts::PI * f64::from(j) / f64::from(points);
        let z = C64::new(rho * theta.cos(), rho * theta.sin());
        let series = figure_series(z)?;
        let s = C64::new(0.5 + z.re, z.im);
        let closed = C64::new(0.25, 0.0) / (s * (s - 1.0));
        let diff = (series - closed).norm();
        max_diff = max_diff.max(diff);
        csv.row(&[
            f17(theta),
            f17(series.re),
            f17(series.im),
            f17(series.norm()),
            f17(closed.re),
            f17(closed.im),
            f17(closed.norm()),
            f17(diff),
        ]);
    }
    let name = format!("figures_rho{}_n{points}.csv", slug(rho));
    let path = write_file(&cfg.output_dir, &name, &csv.finish())?;
    println!("wrote {}", path.display());
    println!("max row disagreement = {}", f17(max_diff));
    Ok(())
}
