use core::cell::RefCell;
use core::fmt;

use astro_float::Consts;

use crate::error::{Error, Result};

use core::f64::consts::LOG10_2;
use core::f64::consts::LOG2_10;

/// Working precision and numerical-zero policy shared by every computation.
///
/// The context also owns the constant cache (`pi` and friends) used by the
/// transcendental functions, so it is `Send` but not `Sync`: give each thread its own.
pub struct PrecisionContext {
    digits: u32,
    zero_threshold_log10: f64,
    track_error: bool,
    bits: usize,
    consts: RefCell<Consts>,
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 30;

    /// Context with `digits` decimal digits and the default relative zero
    /// threshold `10^(-digits/2)`.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::PrecisionTooLow(digits));
        }
        let raw_bits = libm::ceil(f64::from(digits) * LOG2_10) as usize;
        let bits = raw_bits.div_ceil(64) * 64;
        let consts = Consts::new().map_err(|_| Error::NonFinite("constant cache"))?;
        Ok(Self {
            digits,
            zero_threshold_log10: -f64::from(digits) / 2.0,
            track_error: false,
            bits,
            consts: RefCell::new(consts),
        })
    }

    /// Default working precision for dimension `n_dim`: `max(64, ceil(N/2) + 60)`.
    ///
    /// The recurrence loses roughly 0.43 digits per basis vector, so `N/2` leaves headroom.
    pub fn default_digits(n_dim: usize) -> u32 {
        let linear = n_dim.div_ceil(2) as u32 + 60;
        linear.max(64)
    }

    pub fn with_zero_threshold_log10(mut self, log10: f64) -> Result<Self> {
        if !log10.is_finite() || log10 >= 0.0 {
            return Err(Error::InvalidZeroThreshold(log10));
        }
        self.zero_threshold_log10 = log10;
        Ok(self)
    }

    pub fn with_track_error(mut self, on: bool) -> Self {
        self.track_error = on;
        self
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Mantissa length in bits (the decimal request rounded up to whole 64-bit words).
    pub fn bits(&self) -> usize {
        self.bits
    }

    /// log10 of the relative zero threshold.
    pub fn zero_threshold_log10(&self) -> f64 {
        self.zero_threshold_log10
    }

    pub fn track_error(&self) -> bool {
        self.track_error
    }

    /// log10 of the unit roundoff `2^(1 - bits)`.
    pub fn unit_roundoff_log10(&self) -> f64 {
        (1.0 - self.bits as f64) * LOG10_2
    }

    pub(crate) fn with_consts<R>(&self, f: impl FnOnce(&mut Consts) -> R) -> R {
        f(&mut self.consts.borrow_mut())
    }
}

impl Clone for PrecisionContext {
    fn clone(&self) -> Self {
        let consts = Consts::new().expect("constant cache allocation");
        Self {
            digits: self.digits,
            zero_threshold_log10: self.zero_threshold_log10,
            track_error: self.track_error,
            bits: self.bits,
            consts: RefCell::new(consts),
        }
    }
}

impl fmt::Debug for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrecisionContext")
            .field("digits", &self.digits)
            .field("bits", &self.bits)
            .field("zero_threshold_log10", &self.zero_threshold_log10)
            .field("track_error", &self.track_error)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_precision() {
        assert_eq!(PrecisionContext::new(29).unwrap_err(), Error::PrecisionTooLow(29));
        assert!(PrecisionContext::new(30).is_ok());
    }

    #[test]
    fn bits_cover_requested_digits() {
        let ctx = PrecisionContext::new(100).unwrap();
        assert!(ctx.bits() as f64 * LOG10_2 >= 100.0);
        assert_eq!(ctx.bits() % 64, 0);
        assert_eq!(ctx.zero_threshold_log10(), -50.0);
    }

    #[test]
    fn zero_threshold_must_be_below_one() {
        let ctx = PrecisionContext::new(40).unwrap();
        assert!(ctx.clone().with_zero_threshold_log10(0.0).is_err());
        assert!(ctx.clone().with_zero_threshold_log10(f64::NAN).is_err());
        assert_eq!(ctx.with_zero_threshold_log10(-7.5).unwrap().zero_threshold_log10(), -7.5);
    }

    #[test]
    fn default_policy() {
        assert_eq!(PrecisionContext::default_digits(8), 64);
        assert_eq!(PrecisionContext::default_digits(256), 188);
        assert_eq!(PrecisionContext::default_digits(1024), 572);
    }
}
