//! Decimal table export and import.
//!
//! Entries are printed in scientific notation `d.ddd...e<exp>` (lowercase `e`, no plus
//! sign). An entry below `10^zero_exponent` in magnitude prints as the single character
//! `0`. Otherwise it gets `min(max_output_digits, accuracy_digits + E + 1)` significant
//! digits, where `E = floor(log10 |x|)`, so that no digit below `10^-accuracy_digits` is
//! ever printed.

use std::cmp::Ordering;

use dft_hermite_core::{BasisSet, PrecisionContext, Real, Scalar};
use serde::{Deserialize, Serialize};

use crate::config::Format;

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("insufficient precision: {required} faithful digits needed, about {available:.1} available")]
    InsufficientPrecision { required: u32, available: f64 },
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("entry {0:?} is not a decimal number")]
    BadEntry(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportSettings {
    pub max_output_digits: u32,
    pub zero_exponent: i64,
    /// Absolute accuracy, in digits, that every printed digit must respect.
    pub accuracy_digits: u32,
}

impl ExportSettings {
    pub fn new(max_output_digits: u32, zero_exponent: i64) -> Self {
        let accuracy_digits = max_output_digits.max(zero_exponent.unsigned_abs() as u32);
        Self { max_output_digits, zero_exponent, accuracy_digits }
    }

    /// Margin demanded beyond `accuracy_digits` before anything is printed.
    pub const GUARD_DIGITS: u32 = 2;

    pub fn required_digits(&self) -> u32 {
        self.accuracy_digits + Self::GUARD_DIGITS
    }
}

/// Render one value.
pub fn format_entry(x: &Real, settings: &ExportSettings, ctx: &PrecisionContext) -> String {
    let magnitude = x.abs();
    let zero_bound = Real::pow10(settings.zero_exponent, ctx);
    if x.is_zero() || magnitude.cmp_value(&zero_bound) == Some(Ordering::Less) {
        return "0".to_string();
    }
    let mut exponent = decimal_exponent(&magnitude, ctx);
    loop {
        let sig = sig_digits(settings, exponent);
        let scaled = magnitude.mul(&Real::pow10(sig - 1 - exponent, ctx)).round_to_integer();
        let limit = Real::pow10(sig, ctx);
        if scaled.cmp_value(&limit) != Some(Ordering::Less) {
            exponent += 1;
            continue;
        }
        let (mut digits, len) = scaled.decimal_digits(ctx).expect("nonzero finite integer");
        digits.truncate(len.max(0) as usize);
        digits.resize(sig as usize, 0);
        let mut out = String::with_capacity(digits.len() + 8);
        if x.is_negative() {
            out.push('-');
        }
        out.push(char::from(b'0' + digits[0]));
        if digits.len() > 1 {
            out.push('.');
            out.extend(digits[1..].iter().map(|&d| char::from(b'0' + d)));
        }
        out.push('e');
        out.push_str(&exponent.to_string());
        return out;
    }
}

fn sig_digits(settings: &ExportSettings, exponent: i64) -> i64 {
    (i64::from(settings.max_output_digits)).min(i64::from(settings.accuracy_digits) + exponent + 1).max(1)
}

/// `floor(log10 |x|)` for `x > 0`, decided exactly.
fn decimal_exponent(x: &Real, ctx: &PrecisionContext) -> i64 {
    let mut e = x.log10_abs().floor() as i64;
    while x.cmp_value(&Real::pow10(e, ctx)) == Some(Ordering::Less) {
        e -= 1;
    }
    while x.cmp_value(&Real::pow10(e + 1, ctx)) != Some(Ordering::Less) {
        e += 1;
    }
    e
}

/// Digits of absolute accuracy guaranteed for the basis entries.
///
/// With error balls this is read off the radii; otherwise it is the working precision minus
/// the given loss estimate and a guard of five digits.
pub fn available_digits<S: Scalar>(basis: &BasisSet<S>, loss_digits: f64, ctx: &PrecisionContext) -> f64 {
    let radius = basis
        .vectors()
        .iter()
        .flat_map(|v| v.entries().iter().map(Scalar::radius_log10))
        .fold(f64::NEG_INFINITY, f64::max);
    if radius > f64::NEG_INFINITY {
        -radius
    } else {
        -ctx.unit_roundoff_log10() - loss_digits - 5.0
    }
}

/// Rows `T_0 .. T_{N-1}`, columns `k = lo .. hi`.
pub fn basis_rows<S: Scalar>(
    basis: &BasisSet<S>,
    settings: &ExportSettings,
    available: f64,
    ctx: &PrecisionContext,
) -> Result<Vec<Vec<String>>, ExportError> {
    if available < f64::from(settings.required_digits()) {
        return Err(ExportError::InsufficientPrecision { required: settings.required_digits(), available });
    }
    Ok(basis
        .vectors()
        .iter()
        .map(|v| v.entries().iter().map(|x| format_entry(&x.midpoint(), settings, ctx)).collect())
        .collect())
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    schema_version: u32,
    n_dim: usize,
    rows: Vec<Vec<String>>,
}

pub const TABLE_SCHEMA_VERSION: u32 = 1;

/// Serialize a table; TSV and CSV end every row with `\n`.
pub fn render_table(rows: &[Vec<String>], format: Format) -> String {
    match format {
        Format::Tsv | Format::Csv => {
            let sep = if format == Format::Tsv { "\t" } else { "," };
            let mut out = String::new();
            for row in rows {
                out.push_str(&row.join(sep));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let table = JsonTable { schema_version: TABLE_SCHEMA_VERSION, n_dim: rows.len(), rows: rows.to_vec() };
            let mut s = serde_json::to_string_pretty(&table).expect("serializable");
            s.push('\n');
            s
        }
    }
}

pub fn parse_table(text: &str, format: Format) -> Result<Vec<Vec<String>>, ExportError> {
    let rows: Vec<Vec<String>> = match format {
        Format::Tsv | Format::Csv => {
            let sep = if format == Format::Tsv { '\t' } else { ',' };
            text.lines().filter(|l| !l.is_empty()).map(|l| l.split(sep).map(str::to_string).collect()).collect()
        }
        Format::Json => {
            serde_json::from_str::<JsonTable>(text).map_err(|e| ExportError::Malformed(e.to_string()))?.rows
        }
    };
    let n = rows.len();
    if n < 2 || rows.iter().any(|r| r.len() != n) {
        return Err(ExportError::Malformed(format!("expected a square table, got {n} rows")));
    }
    Ok(rows)
}

pub fn parse_entries(rows: &[Vec<String>], ctx: &PrecisionContext) -> Result<Vec<Vec<Real>>, ExportError> {
    rows.iter()
        .map(|row| {
            row.iter().map(|s| Real::parse_decimal(s, ctx).ok_or_else(|| ExportError::BadEntry(s.clone()))).collect()
        })
        .collect()
}
