use crate::context::PrecisionContext;
use crate::scalar::Scalar;

/// Complex number over a [`Scalar`] field.
#[derive(Clone, Debug)]
pub struct Complex<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> Complex<S> {
    pub fn new(re: S, im: S) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: S, ctx: &PrecisionContext) -> Self {
        Self { re, im: S::zero(ctx) }
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self { re: S::zero(ctx), im: S::zero(ctx) }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        Self { re: self.re.mul(k), im: self.im.mul(k) }
    }

    pub fn neg(&self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: self.im.neg() }
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> Self {
        Self { re: self.im.neg(), im: self.re.clone() }
    }

    /// Multiply by `(-i)^power`.
    pub fn mul_neg_i_pow(&self, power: usize) -> Self {
        match power % 4 {
            0 => self.clone(),
            1 => self.mul_i().neg(),
            2 => self.neg(),
            _ => self.mul_i(),
        }
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self) -> S {
        self.re.square().add(&self.im.square())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Real;

    #[test]
    fn powers_of_minus_i() {
        let ctx = PrecisionContext::new(30).unwrap();
        let one = Complex::from_real(Real::one(&ctx), &ctx);
        let expected = [(1.0, 0.0), (0.0, -1.0), (-1.0, 0.0), (0.0, 1.0), (1.0, 0.0)];
        for (p, (re, im)) in expected.iter().enumerate() {
            let z = one.mul_neg_i_pow(p);
            assert_eq!((z.re.to_f64(), z.im.to_f64()), (*re, *im), "(-i)^{p}");
        }
        let z = Complex::new(Real::from_i64(1, &ctx), Real::from_i64(2, &ctx));
        let w = z.mul(&z.conj());
        assert_eq!((w.re.to_f64(), w.im.to_f64()), (5.0, 0.0));
        assert_eq!(z.norm_sqr().to_f64(), 5.0);
    }
}
