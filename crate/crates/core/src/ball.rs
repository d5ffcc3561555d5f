//! Midpoint-radius arithmetic.
//!
//! A [`Ball`] is a multiprecision midpoint `m` together with an upper bound `r` on
//! `|x - m|` for the exact value `x` it stands for. Every operation widens the radius
//! by the propagated input error plus the rounding error of the midpoint, so the
//! radius of a final result bounds the total accumulated error. Midpoints are rounded
//! to nearest; the radii are kept in a small float-with-exponent type that is only
//! ever rounded upwards.

use core::fmt;

use crate::context::PrecisionContext;
use crate::scalar::{Real, Scalar};

use core::f64::consts::LOG10_2;
/// Relative slack applied to every radius computation (covers f64 rounding).
const SLACK: f64 = 1.0 + 1.0 / (1u64 << 50) as f64;

/// Nonnegative magnitude `mant * 2^exp`, `mant` in `[0.5, 1)` or exactly zero.
#[derive(Clone, Copy, PartialEq)]
pub(crate) struct Mag {
    mant: f64,
    exp: i64,
}

impl Mag {
    pub(crate) const ZERO: Mag = Mag { mant: 0.0, exp: 0 };
    pub(crate) const INFINITE: Mag = Mag { mant: f64::INFINITY, exp: 0 };

    fn normalize(mant: f64, exp: i64) -> Mag {
        if mant == 0.0 {
            return Mag::ZERO;
        }
        if !mant.is_finite() {
            return Mag::INFINITE;
        }
        let (m, e) = libm::frexp(mant);
        Mag { mant: m, exp: exp + i64::from(e) }
    }

    fn is_infinite(self) -> bool {
        !self.mant.is_finite()
    }

    fn is_zero(self) -> bool {
        self.mant == 0.0
    }

    /// Upper bound of `|x|`.
    pub(crate) fn upper(x: &Real) -> Mag {
        match x.top_word() {
            None => Mag::ZERO,
            Some((top, e)) => Mag::normalize((top as f64 + 2.0) / 18_446_744_073_709_551_616.0 * SLACK, e),
        }
    }

    /// Lower bound of `|x|`.
    fn lower(x: &Real) -> Mag {
        match x.top_word() {
            None => Mag::ZERO,
            Some((top, e)) => Mag::normalize(top as f64 / 18_446_744_073_709_551_616.0 / SLACK, e),
        }
    }

    /// `2^exp`.
    fn pow2(exp: i64) -> Mag {
        Mag { mant: 0.5, exp: exp + 1 }
    }

    fn add(self, rhs: Mag) -> Mag {
        if self.is_infinite() || rhs.is_infinite() {
            return Mag::INFINITE;
        }
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let shift = (small.exp - big.exp).max(-1100) as i32;
        Mag::normalize((big.mant + libm::ldexp(small.mant, shift)) * SLACK, big.exp)
    }

    fn mul(self, rhs: Mag) -> Mag {
        if self.is_infinite() || rhs.is_infinite() {
            return Mag::INFINITE;
        }
        if self.is_zero() || rhs.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalize(self.mant * rhs.mant * SLACK, self.exp + rhs.exp)
    }

    /// Upper bound of `self / rhs`; infinite when `rhs` is zero.
    fn div(self, rhs: Mag) -> Mag {
        if rhs.is_zero() || self.is_infinite() {
            return Mag::INFINITE;
        }
        if self.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalize(self.mant / rhs.mant * SLACK, self.exp - rhs.exp)
    }

    /// Lower bound of `self - rhs`, or `None` when it is not positive.
    fn sub_lower(self, rhs: Mag) -> Option<Mag> {
        if self.is_infinite() || rhs.is_infinite() || self.is_zero() {
            return None;
        }
        if rhs.is_zero() {
            return Some(self);
        }
        if rhs.exp > self.exp {
            return None;
        }
        let shift = (rhs.exp - self.exp).max(-1100) as i32;
        let diff = (self.mant - libm::ldexp(rhs.mant, shift) * SLACK) / SLACK;
        (diff > 0.0).then(|| Mag::normalize(diff, self.exp))
    }

    /// Upper bound of `sqrt(self)` for an upper-bound input; lower bound for a lower one
    /// (within the slack).
    fn sqrt(self, round_up: bool) -> Mag {
        if self.is_zero() || self.is_infinite() {
            return self;
        }
        let (m, e) = if self.exp % 2 == 0 { (self.mant, self.exp) } else { (self.mant * 2.0, self.exp - 1) };
        let root = libm::sqrt(m);
        let root = if round_up { root * SLACK } else { root / SLACK };
        Mag::normalize(root, e / 2)
    }

    fn scale(self, factor: f64) -> Mag {
        self.mul(Mag::normalize(factor, 0))
    }

    pub(crate) fn log10(self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else if self.is_infinite() {
            f64::INFINITY
        } else {
            libm::log10(self.mant) + self.exp as f64 * LOG10_2
        }
    }

    fn exceeds_one(self) -> bool {
        self.is_infinite() || (!self.is_zero() && (self.exp > 1 || (self.exp == 1 && self.mant > 0.5)))
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "10^{:.2}", self.log10())
    }
}

/// A multiprecision midpoint with a rigorous error radius.
#[derive(Clone)]
pub struct Ball {
    mid: Real,
    rad: Mag,
}

impl Ball {
    pub fn exact(mid: Real) -> Self {
        Self { mid, rad: Mag::ZERO }
    }

    /// Ball around `mid` with radius `10^log10_radius` (rounded up).
    pub fn with_radius_log10(mid: Real, log10_radius: f64) -> Self {
        let e = libm::ceil(log10_radius / LOG10_2) as i64;
        Self { mid, rad: Mag::pow2(e) }
    }

    pub fn mid(&self) -> &Real {
        &self.mid
    }

    /// True when the radius is finite.
    pub fn is_bounded(&self) -> bool {
        !self.rad.is_infinite()
    }

    /// Rounding error bound of a freshly computed midpoint.
    fn rounding(result: &Real) -> Mag {
        if result.inexact() {
            Mag::upper(result).mul(Mag::pow2(1 - result.bits() as i64))
        } else {
            Mag::ZERO
        }
    }

    fn finish(mid: Real, propagated: Mag) -> Self {
        let rad = propagated.add(Self::rounding(&mid));
        Self { mid, rad }
    }

    fn lipschitz_one(mid: Real, input: Mag) -> Self {
        // Transcendental midpoints are correctly rounded but flagged conservatively.
        let rounding = Mag::upper(&mid).mul(Mag::pow2(1 - mid.bits() as i64));
        Self { mid, rad: input.add(rounding) }
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ball({:e} +/- {:?})", self.mid.to_f64(), self.rad)
    }
}

impl Scalar for Ball {
    fn from_i64(value: i64, ctx: &PrecisionContext) -> Self {
        Self::exact(Real::from_i64(value, ctx))
    }

    fn from_real(value: &Real) -> Self {
        Self::exact(value.clone())
    }

    fn pi(ctx: &PrecisionContext) -> Self {
        Self::lipschitz_one(Real::pi(ctx), Mag::ZERO)
    }

    fn add(&self, rhs: &Self) -> Self {
        Self::finish(self.mid.add(&rhs.mid), self.rad.add(rhs.rad))
    }

    fn sub(&self, rhs: &Self) -> Self {
        Self::finish(self.mid.sub(&rhs.mid), self.rad.add(rhs.rad))
    }

    fn mul(&self, rhs: &Self) -> Self {
        let a = Mag::upper(&self.mid);
        let b = Mag::upper(&rhs.mid);
        let propagated = a.mul(rhs.rad).add(b.mul(self.rad)).add(self.rad.mul(rhs.rad));
        Self::finish(self.mid.mul(&rhs.mid), propagated)
    }

    fn div(&self, rhs: &Self) -> Self {
        let quotient = self.mid.div(&rhs.mid);
        if self.rad.is_zero() && rhs.rad.is_zero() {
            return Self::finish(quotient, Mag::ZERO);
        }
        // |x/y - q| <= (r1 + |q| r2) / (|m2| - r2)
        let propagated = match Mag::lower(&rhs.mid).sub_lower(rhs.rad) {
            Some(den) => self.rad.add(Mag::upper(&quotient).mul(rhs.rad)).div(den),
            None => Mag::INFINITE,
        };
        Self::finish(quotient, propagated)
    }

    fn neg(&self) -> Self {
        Self { mid: self.mid.neg(), rad: self.rad }
    }

    fn abs(&self) -> Self {
        Self { mid: self.mid.abs(), rad: self.rad }
    }

    fn sqrt(&self) -> Self {
        let root = self.mid.sqrt();
        if self.rad.is_zero() {
            return Self::finish(root, Mag::ZERO);
        }
        // |sqrt(x) - sqrt(m)| <= r / sqrt(m)
        let propagated = self.rad.div(Mag::lower(&self.mid).sqrt(false));
        Self::finish(root, propagated)
    }

    fn sin(&self, ctx: &PrecisionContext) -> Self {
        let value = self.mid.sin(ctx);
        if self.rad.is_zero() && value.is_zero() {
            return Self::exact(value);
        }
        Self::lipschitz_one(value, self.rad)
    }

    fn cos(&self, ctx: &PrecisionContext) -> Self {
        Self::lipschitz_one(self.mid.cos(ctx), self.rad)
    }

    fn exp(&self, ctx: &PrecisionContext) -> Self {
        let value = self.mid.exp(ctx);
        // |exp(m + d) - exp(m)| <= exp(m) |d| e^|d| <= 3 exp(m) r for r <= 1
        let propagated =
            if self.rad.exceeds_one() { Mag::INFINITE } else { Mag::upper(&value).mul(self.rad).scale(3.0) };
        Self::lipschitz_one(value, propagated)
    }

    fn is_zero(&self) -> bool {
        self.mid.is_zero()
    }

    fn is_exact_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    fn is_negative(&self) -> bool {
        self.mid.is_negative()
    }

    fn is_finite(&self) -> bool {
        self.mid.is_finite()
    }

    fn log10_abs(&self) -> f64 {
        self.mid.log10_abs()
    }

    fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    fn midpoint(&self) -> Real {
        self.mid.clone()
    }

    fn radius_log10(&self) -> f64 {
        self.rad.log10()
    }
}
