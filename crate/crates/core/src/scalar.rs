use core::cmp::Ordering;
use core::fmt;

use alloc::string::String;
use alloc::vec::Vec;

use astro_float::{BigFloat, Radix, RoundingMode, Sign};

use crate::context::PrecisionContext;

use core::f64::consts::LOG10_2;
const RM: RoundingMode = RoundingMode::ToEven;

/// Real scalar field used by every construction in the crate.
///
/// Implemented by [`Real`] (plain multiprecision) and [`crate::Ball`] (midpoint plus a
/// rigorous error radius). Binary operations run at the larger of the two operand
/// precisions; values created from a context use the context's precision.
pub trait Scalar: Clone + fmt::Debug + Send + Sync + 'static {
    fn from_i64(value: i64, ctx: &PrecisionContext) -> Self;
    /// Lift an exactly known value.
    fn from_real(value: &Real) -> Self;
    fn pi(ctx: &PrecisionContext) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn sin(&self, ctx: &PrecisionContext) -> Self;
    fn cos(&self, ctx: &PrecisionContext) -> Self;
    fn exp(&self, ctx: &PrecisionContext) -> Self;

    /// True when the (mid)value is exactly zero.
    fn is_zero(&self) -> bool;
    /// True when the value is known to be exactly zero (no error radius either).
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn is_negative(&self) -> bool;
    fn is_finite(&self) -> bool;
    /// log10 of the magnitude of the (mid)value; `-inf` for zero.
    fn log10_abs(&self) -> f64;
    fn to_f64(&self) -> f64;
    fn midpoint(&self) -> Real;
    /// log10 of the error radius; `-inf` when no error is tracked.
    fn radius_log10(&self) -> f64 {
        f64::NEG_INFINITY
    }

    fn zero(ctx: &PrecisionContext) -> Self {
        Self::from_i64(0, ctx)
    }

    fn one(ctx: &PrecisionContext) -> Self {
        Self::from_i64(1, ctx)
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_real(&Real::from_i64_bits(k, 64)))
    }

    fn div_i64(&self, k: i64) -> Self {
        self.div(&Self::from_real(&Real::from_i64_bits(k, 64)))
    }

    /// `|self| <= 10^log10_bound`, decided on the midpoint.
    fn abs_below(&self, log10_bound: f64) -> bool {
        self.log10_abs() <= log10_bound
    }
}

/// Multiprecision real number at a fixed binary precision.
#[derive(Clone)]
pub struct Real {
    value: BigFloat,
    bits: usize,
}

impl Real {
    pub(crate) fn from_i64_bits(v: i64, bits: usize) -> Self {
        Self { value: BigFloat::from_i64(v, bits), bits }
    }

    pub fn from_f64(v: f64, ctx: &PrecisionContext) -> Self {
        Self { value: BigFloat::from_f64(v, ctx.bits()), bits: ctx.bits() }
    }

    pub fn as_bigfloat(&self) -> &BigFloat {
        &self.value
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// `10^exp10` at the context precision.
    pub fn pow10(exp10: i64, ctx: &PrecisionContext) -> Self {
        let p = ctx.bits();
        let ten = BigFloat::from_i64(10, p);
        let mag = ten.powi(exp10.unsigned_abs() as usize, p, RM);
        let value = if exp10 >= 0 { mag } else { BigFloat::from_i64(1, p).div(&mag, p, RM) };
        Self { value, bits: p }
    }

    /// Parse a decimal literal such as `-1.25e-3` or `0`.
    pub fn parse_decimal(text: &str, ctx: &PrecisionContext) -> Option<Self> {
        let p = ctx.bits();
        let value = ctx.with_consts(|cc| BigFloat::parse(text.trim(), Radix::Dec, p, RM, cc));
        if value.is_nan() || value.is_inf() {
            return None;
        }
        Some(Self { value, bits: p })
    }

    /// Round to the nearest integer (ties to even).
    pub fn round_to_integer(&self) -> Self {
        Self { value: self.value.round(0, RM), bits: self.bits }
    }

    /// Decimal digits `d_1 d_2 ...` and exponent `e` with `|self| = 0.d_1 d_2 ... * 10^e`.
    /// Returns `None` for zero and non-finite values.
    pub fn decimal_digits(&self, ctx: &PrecisionContext) -> Option<(Vec<u8>, i64)> {
        if self.value.is_zero() || !self.is_finite() {
            return None;
        }
        let converted = ctx.with_consts(|cc| self.value.convert_to_radix(Radix::Dec, RoundingMode::None, cc));
        let (_, digits, e) = converted.ok()?;
        Some((digits, i64::from(e)))
    }

    /// Full-precision decimal rendering, for debugging.
    pub fn to_decimal_string(&self, ctx: &PrecisionContext) -> String {
        ctx.with_consts(|cc| self.value.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| String::from("NaN"))
    }

    pub fn cmp_value(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }

    /// `(top mantissa word, binary exponent)` with `|self| = top/2^64 * 2^e` up to truncation.
    pub(crate) fn top_word(&self) -> Option<(u64, i64)> {
        if self.value.is_zero() {
            return None;
        }
        let (words, _, _, exponent, _) = self.value.as_raw_parts()?;
        let top = *words.last()?;
        Some((top, i64::from(exponent)))
    }

    pub(crate) fn inexact(&self) -> bool {
        self.value.inexact()
    }

    fn prec(&self, rhs: &Self) -> usize {
        self.bits.max(rhs.bits)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({:e})", self.to_f64())
    }
}

impl Scalar for Real {
    fn from_i64(value: i64, ctx: &PrecisionContext) -> Self {
        Self::from_i64_bits(value, ctx.bits())
    }

    fn from_real(value: &Real) -> Self {
        value.clone()
    }

    fn pi(ctx: &PrecisionContext) -> Self {
        let p = ctx.bits();
        let value = ctx.with_consts(|cc| cc.pi(p, RM));
        Self { value, bits: p }
    }

    fn add(&self, rhs: &Self) -> Self {
        let p = self.prec(rhs);
        Self { value: self.value.add(&rhs.value, p, RM), bits: p }
    }

    fn sub(&self, rhs: &Self) -> Self {
        let p = self.prec(rhs);
        Self { value: self.value.sub(&rhs.value, p, RM), bits: p }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let p = self.prec(rhs);
        Self { value: self.value.mul(&rhs.value, p, RM), bits: p }
    }

    fn div(&self, rhs: &Self) -> Self {
        let p = self.prec(rhs);
        Self { value: self.value.div(&rhs.value, p, RM), bits: p }
    }

    fn neg(&self) -> Self {
        Self { value: self.value.neg(), bits: self.bits }
    }

    fn abs(&self) -> Self {
        Self { value: self.value.abs(), bits: self.bits }
    }

    fn sqrt(&self) -> Self {
        Self { value: self.value.sqrt(self.bits, RM), bits: self.bits }
    }

    fn sin(&self, ctx: &PrecisionContext) -> Self {
        let p = self.bits;
        Self { value: ctx.with_consts(|cc| self.value.sin(p, RM, cc)), bits: p }
    }

    fn cos(&self, ctx: &PrecisionContext) -> Self {
        let p = self.bits;
        Self { value: ctx.with_consts(|cc| self.value.cos(p, RM, cc)), bits: p }
    }

    fn exp(&self, ctx: &PrecisionContext) -> Self {
        let p = self.bits;
        Self { value: ctx.with_consts(|cc| self.value.exp(p, RM, cc)), bits: p }
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn is_negative(&self) -> bool {
        !self.value.is_zero() && self.value.is_negative()
    }

    fn is_finite(&self) -> bool {
        !self.value.is_nan() && !self.value.is_inf()
    }

    fn log10_abs(&self) -> f64 {
        if !self.is_finite() {
            return f64::INFINITY;
        }
        match self.top_word() {
            None => f64::NEG_INFINITY,
            Some((top, e)) => libm::log10(top as f64 / 18_446_744_073_709_551_616.0) + e as f64 * LOG10_2,
        }
    }

    fn to_f64(&self) -> f64 {
        if !self.is_finite() {
            return f64::NAN;
        }
        match self.top_word() {
            None => 0.0,
            Some((top, e)) => {
                let mag = libm::ldexp(top as f64, (e - 64).clamp(-2000, 2000) as i32);
                if self.value.sign() == Some(Sign::Neg) {
                    -mag
                } else {
                    mag
                }
            }
        }
    }

    fn midpoint(&self) -> Real {
        self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(50).unwrap()
    }

    #[test]
    fn field_operations() {
        let c = ctx();
        let three = Real::from_i64(3, &c);
        let four = Real::from_i64(4, &c);
        assert_eq!(three.add(&four).to_f64(), 7.0);
        assert_eq!(three.sub(&four).to_f64(), -1.0);
        assert_eq!(three.mul(&four).to_f64(), 12.0);
        assert!((three.div(&four).to_f64() - 0.75).abs() < 1e-15);
        assert_eq!(four.sqrt().to_f64(), 2.0);
        assert!(three.neg().is_negative());
        assert!(!Real::zero(&c).is_negative());
    }

    #[test]
    fn log10_and_conversion() {
        let c = ctx();
        let x = Real::from_f64(1e-5, &c);
        assert!((x.log10_abs() + 5.0).abs() < 1e-12);
        assert!((x.to_f64() - 1e-5).abs() < 1e-20);
        assert_eq!(Real::zero(&c).log10_abs(), f64::NEG_INFINITY);
        let tiny = Real::pow10(-400, &c);
        assert!((tiny.log10_abs() + 400.0).abs() < 1e-9);
    }

    #[test]
    fn pi_and_trig() {
        let c = ctx();
        let pi = Real::pi(&c);
        assert!((pi.to_f64() - core::f64::consts::PI).abs() < 1e-15);
        let half = pi.div_i64(6).sin(&c);
        assert!(half.sub(&Real::from_f64(0.5, &c)).log10_abs() < -48.0);
        let one = Real::zero(&c).exp(&c);
        assert_eq!(one.to_f64(), 1.0);
    }

    #[test]
    fn sine_is_exactly_odd() {
        let c = ctx();
        let x = Real::pi(&c).div_i64(7);
        assert!(x.sin(&c).add(&x.neg().sin(&c)).is_zero());
    }

    #[test]
    fn decimal_round_trip() {
        let c = ctx();
        let x = Real::parse_decimal("-1.25e-3", &c).unwrap();
        assert_eq!(x.to_f64(), -1.25e-3);
        let (digits, e) = Real::parse_decimal("-37.5", &c).unwrap().decimal_digits(&c).unwrap();
        assert_eq!(digits, [3, 7, 5]);
        assert_eq!(e, 2);
        assert!(Real::parse_decimal("0", &c).unwrap().is_zero());
        assert!(Real::parse_decimal("abc", &c).is_none());
    }
}
