//! The four subcommands. Each returns the text to write and an exit status.

use std::fmt::Write as _;

use dft_hermite_core::{
    build_basis_with, convergence_errors, dot, hermitian_norm, oracle_deviation, verify_basis, Ball, BasisSet,
    BuildOptions, Construction, ConvergenceReport, DftOperator, FourierPairReport, Magnitude, PrecisionContext, Real,
    Scalar, SeedFamily, VerificationReport,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Command, ConstructionChoice, Format, RunConfig};
use crate::export::{available_digits, basis_rows, format_entry, render_table, ExportError, ExportSettings};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// A check reported a violation.
    CheckFailed,
    /// Printing the requested digits would not be faithful.
    InsufficientPrecision,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::CheckFailed => 1,
            Status::InsufficientPrecision => 3,
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub output: String,
    /// Human-readable notes for standard error.
    pub messages: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Core(#[from] dft_hermite_core::Error),
    #[error(transparent)]
    Export(#[from] ExportError),
}

pub fn run(config: &RunConfig) -> Result<Outcome, CommandError> {
    let ctx = PrecisionContext::new(config.digits)?.with_track_error(config.track_error);
    match (config.command, config.track_error) {
        (Command::Generate, false) => generate::<Real>(config, &ctx),
        (Command::Generate, true) => generate::<Ball>(config, &ctx),
        (Command::Verify, false) => verify::<Real>(config, &ctx),
        (Command::Verify, true) => verify::<Ball>(config, &ctx),
        (Command::Convergence, _) => convergence(config, &ctx),
        (Command::Seeds, _) => seeds(config, &ctx),
    }
}

fn constructions(choice: ConstructionChoice) -> &'static [Construction] {
    match choice {
        ConstructionChoice::Recurrence => &[Construction::Recurrence],
        ConstructionChoice::GramSchmidt => &[Construction::GramSchmidt],
        ConstructionChoice::Both => &[Construction::Recurrence, Construction::GramSchmidt],
    }
}

fn build<S: Scalar>(
    config: &RunConfig,
    construction: Construction,
    ctx: &PrecisionContext,
) -> Result<BasisSet<S>, CommandError> {
    let options = BuildOptions { construction, sign_convention: config.sign_convention, ..BuildOptions::default() };
    Ok(build_basis_with::<S>(config.n_dim, ctx, options)?)
}

/// Observed loss from the last vector of every column: its eigen-residual and its overlaps
/// with all other vectors. Costs `O(N^2)` instead of the full `O(N^3)` verification.
pub fn spot_check_loss<S: Scalar>(basis: &BasisSet<S>, ctx: &PrecisionContext) -> Result<f64, CommandError> {
    let f = DftOperator::<S>::new(basis.n_dim(), ctx)?;
    let one = S::one(ctx);
    let mut worst = Magnitude::ZERO;
    for m in 0..4 {
        let Some(&n) = basis.column(m).last() else { continue };
        let v = basis.vector(n);
        let image = f.forward_real(v, ctx)?;
        let target = v.to_complex(ctx).mul_neg_i_pow(basis.eigenvalue(n).power());
        worst = worst.max(Magnitude::of(&hermitian_norm(&image.sub(&target))));
        for (j, w) in basis.vectors().iter().enumerate() {
            let d = dot(v, w)?;
            worst = worst.max(Magnitude::of(&if j == n { d.sub(&one) } else { d }));
        }
    }
    Ok((worst.log10() - ctx.unit_roundoff_log10()).max(0.0))
}

fn export_rows<S: Scalar>(
    basis: &BasisSet<S>,
    settings: &ExportSettings,
    ctx: &PrecisionContext,
) -> Result<Vec<Vec<String>>, CommandError> {
    let loss = spot_check_loss(basis, ctx)?.max(basis.precision_loss_estimate().unwrap_or(0.0));
    let available = available_digits(basis, loss, ctx);
    Ok(basis_rows(basis, settings, available, ctx)?)
}

fn generate<S: Scalar>(config: &RunConfig, ctx: &PrecisionContext) -> Result<Outcome, CommandError> {
    let settings = ExportSettings::new(config.max_output_digits, config.zero_print_exponent);
    let mut tables = Vec::new();
    for &construction in constructions(config.construction) {
        let basis = build::<S>(config, construction, ctx)?;
        match export_rows(&basis, &settings, ctx) {
            Ok(rows) => tables.push(rows),
            Err(CommandError::Export(e @ ExportError::InsufficientPrecision { .. })) => {
                return Ok(Outcome {
                    status: Status::InsufficientPrecision,
                    output: String::new(),
                    messages: vec![format!("{e} ({} construction)", construction.name())],
                });
            }
            Err(e) => return Err(e),
        }
    }
    let mut messages = Vec::new();
    let mut status = Status::Success;
    if tables.len() == 2 && tables[0] != tables[1] {
        status = Status::CheckFailed;
        let differing = tables[0].iter().zip(&tables[1]).filter(|(a, b)| a != b).count();
        messages.push(format!("recurrence and Gram-Schmidt tables differ in {differing} rows"));
    }
    Ok(Outcome { status, output: render_table(&tables[0], config.format), messages })
}

#[derive(Debug, Serialize)]
struct Measure {
    log10: Option<f64>,
    display: String,
}

impl From<Magnitude> for Measure {
    fn from(m: Magnitude) -> Self {
        Self { log10: m.log10().is_finite().then_some(m.log10()), display: m.to_string() }
    }
}

#[derive(Debug, Serialize)]
struct ConstructionReport {
    construction: &'static str,
    passed: bool,
    max_ortho_residual: Measure,
    worst_ortho_pair: (usize, usize),
    max_eigen_residual: Measure,
    worst_eigen_index: usize,
    max_symmetry_residual: Measure,
    width_violations: Vec<(usize, usize, usize)>,
    column_count_violations: Vec<(usize, usize, usize, usize)>,
    label_counts: [usize; 4],
    expected_dims: [usize; 4],
    dims_match: bool,
    ghost_vector_used: bool,
    precision_loss_digits: Option<f64>,
    observed_loss_digits: f64,
    recurrence_loss_proxy: Option<f64>,
    max_error_radius: Option<Measure>,
}

#[derive(Debug, Serialize)]
struct PairReport {
    /// Judged on the relative residuals.
    passed: bool,
    u_residual: Measure,
    u_relative: Measure,
    worst_u: Option<usize>,
    v_residual: Measure,
    v_relative: Measure,
    worst_v: Option<usize>,
}

impl PairReport {
    fn new(r: &FourierPairReport, tolerance: f64) -> Self {
        Self {
            passed: r.max_relative_log10() <= tolerance,
            u_residual: Magnitude::from_log10(r.u_residual_log10).into(),
            u_relative: Magnitude::from_log10(r.u_relative_log10).into(),
            worst_u: r.worst_u,
            v_residual: Magnitude::from_log10(r.v_residual_log10).into(),
            v_relative: Magnitude::from_log10(r.v_relative_log10).into(),
            worst_v: r.worst_v,
        }
    }
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    schema_version: u32,
    n_dim: usize,
    digits: u32,
    track_error: bool,
    tolerance_log10: f64,
    passed: bool,
    constructions: Vec<ConstructionReport>,
    oracle_deviation: Option<Measure>,
    fourier_pairs: PairReport,
}

/// Residual bound `10^-(digits - loss - 20)`, with the loss taken as the larger of the
/// measured value and the `N/2` envelope.
pub fn verify_tolerance_log10(n_dim: usize, digits: u32, measured_loss: Option<f64>) -> f64 {
    let envelope = n_dim.div_ceil(2) as f64;
    let loss = measured_loss.filter(|l| l.is_finite()).map_or(envelope, |l| l.max(envelope));
    -(f64::from(digits) - loss - 20.0)
}

fn verify<S: Scalar>(config: &RunConfig, ctx: &PrecisionContext) -> Result<Outcome, CommandError> {
    let mut bases = Vec::new();
    let mut reports: Vec<VerificationReport> = Vec::new();
    for &construction in constructions(config.construction) {
        let basis = build::<S>(config, construction, ctx)?;
        reports.push(verify_basis(&basis, ctx)?);
        bases.push(basis);
    }
    let worst_loss = reports
        .iter()
        .filter_map(|r| if config.track_error { r.precision_loss_digits } else { None })
        .fold(None, |acc: Option<f64>, l| Some(acc.map_or(l, |a| a.max(l))));
    let tolerance = verify_tolerance_log10(config.n_dim, config.digits, worst_loss);
    let deviation = if bases.len() == 2 { Some(oracle_deviation(&bases[0], &bases[1])?) } else { None };
    let family = SeedFamily::<Real>::new(config.n_dim, ctx)?;
    let pairs = PairReport::new(&family.check_fourier_pairs(ctx)?, 30.0 - f64::from(config.digits));

    let constructions: Vec<ConstructionReport> = reports
        .iter()
        .zip(&bases)
        .map(|(r, b)| ConstructionReport {
            construction: b.construction().name(),
            passed: r.passed(tolerance),
            max_ortho_residual: r.max_ortho_residual.into(),
            worst_ortho_pair: r.worst_ortho_pair,
            max_eigen_residual: r.max_eigen_residual.into(),
            worst_eigen_index: r.worst_eigen_index,
            max_symmetry_residual: r.max_symmetry_residual.into(),
            width_violations: r.width_violations.iter().map(|w| (w.index, w.expected, w.found)).collect(),
            column_count_violations: r
                .column_count_violations
                .iter()
                .map(|c| (c.column, c.width, c.expected, c.found))
                .collect(),
            label_counts: r.label_counts,
            expected_dims: r.expected_dims,
            dims_match: r.dims_match,
            ghost_vector_used: b.ghost_used(),
            precision_loss_digits: r.precision_loss_digits,
            observed_loss_digits: r.observed_loss_digits,
            recurrence_loss_proxy: r.recurrence_loss_proxy,
            max_error_radius: r.max_error_radius.map(Measure::from),
        })
        .collect();
    let oracle_ok = deviation.is_none_or(|d| d.at_most(tolerance));
    let passed = constructions.iter().all(|c| c.passed) && pairs.passed && oracle_ok;
    let report = VerifyReport {
        schema_version: REPORT_SCHEMA_VERSION,
        n_dim: config.n_dim,
        digits: config.digits,
        track_error: config.track_error,
        tolerance_log10: tolerance,
        passed,
        constructions,
        oracle_deviation: deviation.map(Measure::from),
        fourier_pairs: pairs,
    };
    let output = match config.format {
        Format::Json => json(&report),
        Format::Tsv | Format::Csv => verify_text(&report),
    };
    Ok(Outcome { status: if passed { Status::Success } else { Status::CheckFailed }, output, messages: Vec::new() })
}

fn verify_text(r: &VerifyReport) -> String {
    let mut s = String::new();
    let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
    let _ = writeln!(s, "N = {}, {} digits, tolerance 1e{:.0}", r.n_dim, r.digits, r.tolerance_log10);
    for c in &r.constructions {
        let _ = writeln!(s, "[{}] {}", c.construction, mark(c.passed));
        let _ = writeln!(s, "  orthonormality residual  {} at {:?}", c.max_ortho_residual.display, c.worst_ortho_pair);
        let _ =
            writeln!(s, "  eigen-equation residual  {} at n = {}", c.max_eigen_residual.display, c.worst_eigen_index);
        let _ = writeln!(s, "  recurrence symmetry      {}", c.max_symmetry_residual.display);
        let _ = writeln!(s, "  width violations         {}", c.width_violations.len());
        let _ = writeln!(s, "  column count violations  {}", c.column_count_violations.len());
        let _ = writeln!(s, "  multiplicities           {:?} (expected {:?})", c.label_counts, c.expected_dims);
        if let Some(loss) = c.precision_loss_digits {
            let _ = writeln!(s, "  precision loss           {loss:.1} digits");
        }
        if let Some(radius) = &c.max_error_radius {
            let _ = writeln!(s, "  max error radius         {}", radius.display);
        }
    }
    if let Some(d) = &r.oracle_deviation {
        let _ = writeln!(s, "oracle deviation           {}", d.display);
    }
    let p = &r.fourier_pairs;
    let _ = writeln!(
        s,
        "fourier pairs              {} (relative u {}, v {})",
        mark(p.passed),
        p.u_relative.display,
        p.v_relative.display
    );
    let _ = writeln!(s, "result                     {}", mark(r.passed));
    s
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
struct ConvergenceJson<'a> {
    schema_version: u32,
    digits: u32,
    dims: &'a [usize],
    rows: Vec<ConvergenceRowJson>,
}

#[derive(Debug, Serialize)]
struct ConvergenceRowJson {
    order: usize,
    errors: Vec<f64>,
    ratios: Vec<f64>,
    monotone: bool,
    exponent: Option<f64>,
    fit_residual: Option<f64>,
}

/// `e_n(N)` for every requested order and dimension, the dimensions running in parallel.
pub fn convergence_table(
    orders: &[usize],
    dims: &[usize],
    ctx: &PrecisionContext,
) -> Result<ConvergenceReport, CommandError> {
    let digits = ctx.digits();
    let errors = dims
        .par_iter()
        .map(|&n_dim| {
            let local = PrecisionContext::new(digits)?;
            let basis = build_basis_with::<Real>(n_dim, &local, BuildOptions::default())?;
            convergence_errors(&basis, orders, &local)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConvergenceReport::from_errors(orders, dims, &errors))
}

fn convergence(config: &RunConfig, ctx: &PrecisionContext) -> Result<Outcome, CommandError> {
    let report = convergence_table(&config.orders, &config.dims, ctx)?;
    let output = match config.format {
        Format::Json => json(&ConvergenceJson {
            schema_version: REPORT_SCHEMA_VERSION,
            digits: config.digits,
            dims: &report.dims,
            rows: report
                .rows
                .iter()
                .map(|r| ConvergenceRowJson {
                    order: r.order,
                    errors: r.errors.clone(),
                    ratios: r.ratios.clone(),
                    monotone: r.monotone,
                    exponent: r.fit.map(|f| f.exponent),
                    fit_residual: r.fit.map(|f| f.residual),
                })
                .collect(),
        }),
        Format::Tsv | Format::Csv => {
            let sep = if config.format == Format::Tsv { "\t" } else { "," };
            let mut header = vec!["order".to_string()];
            header.extend(report.dims.iter().map(|d| format!("N={d}")));
            header.extend(report.dims.windows(2).map(|w| format!("ratio {}/{}", w[0], w[1])));
            header.extend(["exponent".to_string(), "fit_residual".to_string(), "monotone".to_string()]);
            let mut s = header.join(sep);
            s.push('\n');
            for r in &report.rows {
                let mut cells = vec![r.order.to_string()];
                cells.extend(r.errors.iter().map(|e| format!("{e:.6e}")));
                cells.extend(r.ratios.iter().map(|q| format!("{q:.4}")));
                cells.push(r.fit.map_or("-".into(), |f| format!("{:.4}", f.exponent)));
                cells.push(r.fit.map_or("-".into(), |f| format!("{:.2e}", f.residual)));
                cells.push(r.monotone.to_string());
                s.push_str(&cells.join(sep));
                s.push('\n');
            }
            s
        }
    };
    let status = if report.rows.iter().all(|r| r.monotone) { Status::Success } else { Status::CheckFailed };
    Ok(Outcome { status, output, messages: Vec::new() })
}

#[derive(Debug, Serialize)]
struct SeedsJson {
    schema_version: u32,
    n_dim: usize,
    digits: u32,
    s: Vec<String>,
    alpha: Vec<String>,
    beta: Vec<Option<String>>,
    t: Vec<String>,
    u: Vec<Vec<String>>,
    v: Vec<Option<Vec<String>>>,
    checks: Vec<SeedCheck>,
}

#[derive(Debug, Serialize)]
struct SeedCheck {
    name: &'static str,
    value: Measure,
    tolerance_log10: f64,
    passed: bool,
}

fn seeds(config: &RunConfig, ctx: &PrecisionContext) -> Result<Outcome, CommandError> {
    let family = SeedFamily::<Real>::new(config.n_dim, ctx)?;
    let settings = ExportSettings::new(config.max_output_digits, config.zero_print_exponent);
    let fmt = |x: &Real| format_entry(x, &settings, ctx);
    let digits = f64::from(config.digits);
    let pairs = family.check_fourier_pairs(ctx)?;
    let check = |name, log10: f64, tolerance_log10: f64| SeedCheck {
        name,
        value: Magnitude::from_log10(log10).into(),
        tolerance_log10,
        passed: log10 <= tolerance_log10,
    };
    let checks = vec![
        check("S identities (relative)", family.s_identity_residual_log10(ctx), 20.0 - digits),
        check("closed vs product forms (relative)", family.closed_form_deviation_log10()?, 20.0 - digits),
        check("F u_n = u_(floor(N/2)-n) (relative)", pairs.u_relative_log10, 30.0 - digits),
        check("F v_n = -i v_(ceil(N/2)-n) (relative)", pairs.v_relative_log10, 30.0 - digits),
    ];
    let index = family.index_set();
    let table = SeedsJson {
        schema_version: REPORT_SCHEMA_VERSION,
        n_dim: config.n_dim,
        digits: config.digits,
        s: family.s_table().iter().map(fmt).collect(),
        alpha: family.u_range().map(|n| family.alpha_of(n).map(|a| fmt(&a))).collect::<Result<_, _>>()?,
        beta: (0..index.half_ceil()).map(|n| family.beta_of(n).ok().map(|b| fmt(&b))).collect(),
        t: index.iter().map(|k| fmt(&family.t_of(k))).collect(),
        u: family
            .u_range()
            .map(|n| family.u_closed(n).map(|u| u.entries().iter().map(fmt).collect()))
            .collect::<Result<_, _>>()?,
        v: (0..index.half_ceil())
            .map(|n| family.v_closed(n).ok().map(|v| v.entries().iter().map(fmt).collect()))
            .collect(),
        checks,
    };
    let passed = table.checks.iter().all(|c| c.passed);
    let output = match config.format {
        Format::Json => json(&table),
        Format::Tsv | Format::Csv => {
            seeds_text(&table, index.iter(), if config.format == Format::Tsv { "\t" } else { "," })
        }
    };
    Ok(Outcome { status: if passed { Status::Success } else { Status::CheckFailed }, output, messages: Vec::new() })
}

fn seeds_text(t: &SeedsJson, ks: impl Iterator<Item = i64> + Clone, sep: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# S(k){sep}k = 0..{}", t.n_dim - 1);
    for (k, v) in t.s.iter().enumerate() {
        let _ = writeln!(s, "{k}{sep}{v}");
    }
    let _ = writeln!(s, "# alpha_n");
    for (n, v) in t.alpha.iter().enumerate() {
        let _ = writeln!(s, "{n}{sep}{v}");
    }
    let _ = writeln!(s, "# beta_n");
    for (n, v) in t.beta.iter().enumerate() {
        if let Some(v) = v {
            let _ = writeln!(s, "{n}{sep}{v}");
        }
    }
    let _ = writeln!(s, "# t_k");
    for (k, v) in ks.clone().zip(&t.t) {
        let _ = writeln!(s, "{k}{sep}{v}");
    }
    let header: Vec<String> = ks.map(|k| k.to_string()).collect();
    let _ = writeln!(s, "# u_n{sep}{}", header.join(sep));
    for (n, row) in t.u.iter().enumerate() {
        let _ = writeln!(s, "{n}{sep}{}", row.join(sep));
    }
    let _ = writeln!(s, "# v_n{sep}{}", header.join(sep));
    for (n, row) in t.v.iter().enumerate() {
        if let Some(row) = row {
            let _ = writeln!(s, "{n}{sep}{}", row.join(sep));
        }
    }
    let _ = writeln!(s, "# checks");
    for c in &t.checks {
        let flag = if c.passed { "ok" } else { "VIOLATION" };
        let _ = writeln!(s, "{}{sep}{}{sep}{flag}", c.name, c.value.display);
    }
    s
}
