use crate::error::{Error, Result};

/// The centered index set `I_N = { -ceil(N/2)+1, ..., floor(N/2) }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    n_dim: usize,
    lo: i64,
    hi: i64,
}

impl IndexSet {
    pub fn new(n_dim: usize) -> Result<Self> {
        if n_dim < 2 {
            return Err(Error::InvalidDimension(n_dim));
        }
        let n = n_dim as i64;
        Ok(Self { n_dim, lo: -((n + 1) / 2) + 1, hi: n / 2 })
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// `floor(N/2)`.
    pub fn half_floor(&self) -> usize {
        self.n_dim / 2
    }

    /// `ceil(N/2)`.
    pub fn half_ceil(&self) -> usize {
        self.n_dim.div_ceil(2)
    }

    /// Reduce any integer into `I_N` modulo `N`.
    pub fn reduce(&self, k: i64) -> i64 {
        (k - self.lo).rem_euclid(self.n_dim as i64) + self.lo
    }

    /// Storage offset of `k` (after reduction).
    pub fn offset(&self, k: i64) -> usize {
        (k - self.lo).rem_euclid(self.n_dim as i64) as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + Clone {
        self.lo..=self.hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn bounds_match_examples() {
        let seven = IndexSet::new(7).unwrap();
        assert_eq!((seven.lo(), seven.hi()), (-3, 3));
        let six = IndexSet::new(6).unwrap();
        assert_eq!((six.lo(), six.hi()), (-2, 3));
        let two = IndexSet::new(2).unwrap();
        assert_eq!(two.iter().collect::<Vec<_>>(), [0, 1]);
    }

    #[test]
    fn rejects_small_dimensions() {
        assert_eq!(IndexSet::new(1), Err(Error::InvalidDimension(1)));
        assert_eq!(IndexSet::new(0), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn reduction_is_periodic() {
        let six = IndexSet::new(6).unwrap();
        assert_eq!(six.reduce(-3), 3);
        assert_eq!(six.reduce(4), -2);
        assert_eq!(six.reduce(9), 3);
        assert_eq!(six.offset(-2), 0);
        assert_eq!(six.offset(3), 5);
    }

    proptest::proptest! {
        #[test]
        fn index_set_has_n_points(n in 2usize..500) {
            let set = IndexSet::new(n).unwrap();
            proptest::prop_assert_eq!((set.hi() - set.lo() + 1) as usize, n);
            proptest::prop_assert!(set.lo() <= 0 && set.hi() >= 0);
        }

        #[test]
        fn reduce_lands_in_range(n in 2usize..100, k in -10_000i64..10_000) {
            let set = IndexSet::new(n).unwrap();
            let r = set.reduce(k);
            proptest::prop_assert!(set.lo() <= r && r <= set.hi());
            proptest::prop_assert_eq!((k - r).rem_euclid(n as i64), 0);
        }
    }
}
