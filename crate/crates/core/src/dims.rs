use crate::error::{Error, Result};

/// Multiplicities of the four DFT eigenspaces `E_m = { a : F a = (-i)^m a }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EigenspaceDims {
    pub n_dim: usize,
    /// `dim E_0 .. dim E_3`.
    pub dims: [usize; 4],
    /// Smallest width present in each eigenspace, `K_m = floor((N + 2 + m) / 4)`.
    pub k_thresholds: [usize; 4],
}

impl EigenspaceDims {
    pub fn new(n_dim: usize) -> Result<Self> {
        if n_dim < 2 {
            return Err(Error::InvalidDimension(n_dim));
        }
        let k = |m: usize| (n_dim + 2 + m) / 4;
        let k_thresholds = [k(0), k(1), k(2), k(3)];
        let half_floor = n_dim / 2;
        let half_ceil = n_dim.div_ceil(2);
        let dims = [
            half_floor + 1 - k_thresholds[0],
            half_ceil - k_thresholds[1],
            half_floor + 1 - k_thresholds[2],
            half_ceil - k_thresholds[3],
        ];
        Ok(Self { n_dim, dims, k_thresholds })
    }

    pub fn dim(&self, m: usize) -> usize {
        self.dims[m % 4]
    }

    pub fn k(&self, m: usize) -> usize {
        self.k_thresholds[m % 4]
    }

    /// Largest admissible width in column `m`: `floor(N/2)` for even `m`,
    /// `ceil(N/2) - 1` for odd `m`.
    pub fn max_width(&self, m: usize) -> usize {
        if m.is_multiple_of(2) {
            self.n_dim / 2
        } else {
            self.n_dim.div_ceil(2) - 1
        }
    }

    /// `dim(E_m ∩ S_n) = max(n - K_m + 1, 0)` for widths `n` in the admissible range.
    pub fn dim_below_width(&self, m: usize, n: usize) -> usize {
        (n + 1).saturating_sub(self.k(m))
    }

    /// Multiplicities as given by the residue of `N` modulo 4 (`N = 4L + r`).
    pub fn by_residue(n_dim: usize) -> [usize; 4] {
        let l = n_dim / 4;
        match n_dim % 4 {
            0 => [l + 1, l, l, l.saturating_sub(1)],
            1 => [l + 1, l, l, l],
            2 => [l + 1, l, l + 1, l],
            _ => [l + 1, l + 1, l + 1, l],
        }
    }

    /// Width of `T_n` in the minimal basis: `floor((N + n + 2) / 4)`.
    pub fn basis_width(&self, n: usize) -> usize {
        (self.n_dim + n + 2) / 4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        assert_eq!(EigenspaceDims::new(8).unwrap().dims, [3, 2, 2, 1]);
        assert_eq!(EigenspaceDims::new(5).unwrap().dims, [2, 1, 1, 1]);
        assert_eq!(EigenspaceDims::new(6).unwrap().dims, [2, 1, 2, 1]);
        assert_eq!(EigenspaceDims::new(7).unwrap().dims, [2, 2, 2, 1]);
        assert_eq!(EigenspaceDims::new(4).unwrap().dims, [2, 1, 1, 0]);
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(EigenspaceDims::new(2).unwrap().dims, [1, 0, 1, 0]);
        assert_eq!(EigenspaceDims::new(3).unwrap().dims, [1, 1, 1, 0]);
        assert!(EigenspaceDims::new(1).is_err());
    }

    #[test]
    fn k_thresholds_and_widths() {
        let d = EigenspaceDims::new(7).unwrap();
        assert_eq!(d.k_thresholds, [2, 2, 2, 3]);
        let d = EigenspaceDims::new(17).unwrap();
        assert_eq!(d.basis_width(16), 8);
    }

    proptest::proptest! {
        #[test]
        fn closed_form_matches_residue_table(n in 2usize..2000) {
            let d = EigenspaceDims::new(n).unwrap();
            proptest::prop_assert_eq!(d.dims.iter().sum::<usize>(), n);
            proptest::prop_assert_eq!(d.dims, EigenspaceDims::by_residue(n));
        }
    }
}
