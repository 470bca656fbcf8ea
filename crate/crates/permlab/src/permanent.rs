//! Exact permanent kernels and multiset minors.
//!
//! The workhorse is Ryser's inclusion-exclusion formula driven by a Gray
//! code, which visits every nonempty column subset while updating the row
//! sums by a single column per step: O(2^n * n) for an n x n matrix.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::GaussianMatrix;

/// Hard cap for the Ryser kernel; 2^30 subset steps is the practical limit.
pub const MAX_PERMANENT_ORDER: usize = 30;
/// Cap for the n! reference evaluation.
pub const MAX_NAIVE_ORDER: usize = 9;

/// Ryser evaluation on a row-major slice. Callers guarantee `m.len() == n*n`
/// and `1 <= n <= MAX_PERMANENT_ORDER`.
pub(crate) fn ryser_slice(m: &[Complex<f64>], n: usize) -> Complex<f64> {
    debug_assert_eq!(m.len(), n * n);
    debug_assert!(n >= 1 && n <= MAX_PERMANENT_ORDER);
    let mut row_sums = vec![Complex::new(0.0, 0.0); n];
    let mut total = Complex::new(0.0, 0.0);
    let steps: u64 = 1u64 << n;
    let mut popcount: u32 = 0;
    for k in 1..steps {
        // Gray code: bit `j` of the subset flips at step k.
        let j = k.trailing_zeros() as usize;
        let added = (k ^ (k >> 1)) >> j & 1 == 1;
        if added {
            popcount += 1;
            for i in 0..n {
                row_sums[i] += m[i * n + j];
            }
        } else {
            popcount -= 1;
            for i in 0..n {
                row_sums[i] -= m[i * n + j];
            }
        }
        let mut prod = Complex::new(1.0, 0.0);
        for s in &row_sums {
            prod *= s;
        }
        // (-1)^(n - |S|)
        if (n as u32 - popcount) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

fn require_square(m: &GaussianMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::invalid(format!(
            "permanent requires a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.rows())
}

/// Exact permanent via Ryser's formula with Gray-code subset iteration.
pub fn permanent(m: &GaussianMatrix) -> Result<Complex<f64>> {
    let n = require_square(m)?;
    if n > MAX_PERMANENT_ORDER {
        return Err(Error::capacity(format!(
            "permanent kernel is limited to n <= {MAX_PERMANENT_ORDER}, got {n}"
        )));
    }
    Ok(ryser_slice(m.entries(), n))
}

/// Reference permanent: direct sum over all n! permutations. Exists to
/// cross-check the Ryser kernel and is deliberately independent of it.
pub fn permanent_naive(m: &GaussianMatrix) -> Result<Complex<f64>> {
    let n = require_square(m)?;
    if n > MAX_NAIVE_ORDER {
        return Err(Error::capacity(format!(
            "naive permanent is limited to n <= {MAX_NAIVE_ORDER}, got {n}"
        )));
    }
    let mut total = Complex::new(0.0, 0.0);
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm, iterative.
    let mut c = vec![0usize; n];
    let mut add = |p: &[usize]| {
        let mut prod = Complex::new(1.0, 0.0);
        for (i, &j) in p.iter().enumerate() {
            prod *= m.get(i, j);
        }
        total += prod;
    };
    add(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            add(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}

/// A size-n multiset of column indices from `{1, ..., m}` with its
/// combinatorial weight `mu = 1 / (r_1! ... r_k!)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultisetOutcome {
    ambient_cols: usize,
    parts: Vec<usize>, // sorted ascending, 1-based
}

impl MultisetOutcome {
    /// Build from 1-based column indices; the parts are sorted.
    pub fn new(ambient_cols: usize, mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::invalid("a multiset outcome must have size >= 1"));
        }
        for &p in &parts {
            if p == 0 || p > ambient_cols {
                return Err(Error::invalid(format!(
                    "part {p} out of range 1..={ambient_cols}"
                )));
            }
        }
        parts.sort_unstable();
        Ok(MultisetOutcome { ambient_cols, parts })
    }

    /// Number of columns of the ambient matrix.
    pub fn ambient_cols(&self) -> usize {
        self.ambient_cols
    }

    /// Multiset size n.
    pub fn size(&self) -> usize {
        self.parts.len()
    }

    /// Sorted 1-based column indices, with repetition.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Multiplicities r_1..r_k of the distinct parts, in part order.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut iter = self.parts.iter();
        let mut current = *iter.next().expect("nonempty");
        let mut count = 1usize;
        for &p in iter {
            if p == current {
                count += 1;
            } else {
                out.push(count);
                current = p;
                count = 1;
            }
        }
        out.push(count);
        out
    }

    /// Exact denominator of mu: the product of the multiplicity factorials.
    pub fn mu_denominator(&self) -> u128 {
        self.multiplicities()
            .iter()
            .map(|&r| (1..=r as u128).product::<u128>())
            .product()
    }

    /// `mu(S) = 1 / (r_1! ... r_k!)` as a double.
    pub fn mu(&self) -> f64 {
        1.0 / self.mu_denominator() as f64
    }

    /// `true` when every part occurs exactly once.
    pub fn is_collision_free(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] != w[1])
    }

    /// Render as `a-b-c` (used in CSV tables, where commas are unavailable).
    pub fn label(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// The n x n minor of `a` whose j-th column is column `parts[j]` of `a`
/// (columns repeated according to multiplicity).
pub fn minor(a: &GaussianMatrix, s: &MultisetOutcome) -> Result<GaussianMatrix> {
    if s.ambient_cols() != a.cols() {
        return Err(Error::invalid(format!(
            "outcome is over {} columns but the matrix has {}",
            s.ambient_cols(),
            a.cols()
        )));
    }
    if s.size() != a.rows() {
        return Err(Error::invalid(format!(
            "outcome size {} does not match row count {}",
            s.size(),
            a.rows()
        )));
    }
    let zero_based: Vec<usize> = s.parts().iter().map(|&p| p - 1).collect();
    a.select_columns(&zero_based)
}

/// `perm(A A*)` where `A*` is the conjugate transpose: the normalization
/// constant of the BosonSampling distribution of `A`. Real for any `A`.
pub fn gram_permanent(a: &GaussianMatrix) -> Result<f64> {
    let n = a.rows();
    if n > MAX_PERMANENT_ORDER {
        return Err(Error::capacity(format!(
            "gram permanent is limited to n <= {MAX_PERMANENT_ORDER}, got {n}"
        )));
    }
    let mut gram = vec![Complex::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex::new(0.0, 0.0);
            for k in 0..a.cols() {
                acc += a.get(i, k) * a.get(j, k).conj();
            }
            gram[i * n + j] = acc;
        }
    }
    Ok(ryser_slice(&gram, n).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{sample_gaussian, EnsembleKind};

    fn eye(n: usize) -> GaussianMatrix {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        GaussianMatrix::from_real_entries(n, n, entries).unwrap()
    }

    #[test]
    fn identity_and_ones() {
        assert_eq!(permanent(&eye(3)).unwrap().re, 1.0);
        let ones = GaussianMatrix::from_real_entries(3, 3, vec![1.0; 9]).unwrap();
        assert_eq!(permanent(&ones).unwrap().re, 6.0);
    }

    #[test]
    fn two_by_two_formula() {
        // perm [[1,2],[3,4]] = 1*4 + 2*3
        let m = GaussianMatrix::from_real_entries(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(permanent(&m).unwrap().re, 10.0);
    }

    #[test]
    fn naive_matches_ryser_on_random_complex() {
        for seed in 0..10u64 {
            let m = sample_gaussian(5, 5, EnsembleKind::Complex, seed).unwrap();
            let a = permanent(&m).unwrap();
            let b = permanent_naive(&m).unwrap();
            assert!((a - b).norm() <= 1e-9 * b.norm().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn naive_identity_and_zero_row() {
        assert_eq!(permanent_naive(&eye(4)).unwrap().re, 1.0);
        let mut entries = vec![1.0; 9];
        entries[3] = 0.0;
        entries[4] = 0.0;
        entries[5] = 0.0;
        let m = GaussianMatrix::from_real_entries(3, 3, entries).unwrap();
        assert_eq!(permanent_naive(&m).unwrap().re, 0.0);
    }

    #[test]
    fn capacity_and_shape_errors() {
        let m = GaussianMatrix::from_real_entries(2, 3, vec![1.0; 6]).unwrap();
        assert!(permanent(&m).is_err());
        let big = sample_gaussian(10, 10, EnsembleKind::Real, 0).unwrap();
        assert!(permanent_naive(&big).is_err());
    }

    #[test]
    fn multiset_weights() {
        let s = MultisetOutcome::new(4, vec![2, 1, 2]).unwrap();
        assert_eq!(s.parts(), &[1, 2, 2]);
        assert_eq!(s.multiplicities(), vec![1, 2]);
        assert_eq!(s.mu_denominator(), 2);
        assert_eq!(s.mu(), 0.5);
        assert!(!s.is_collision_free());
        assert_eq!(s.label(), "1-2-2");
        assert!(MultisetOutcome::new(3, vec![0]).is_err());
        assert!(MultisetOutcome::new(3, vec![4]).is_err());
    }

    #[test]
    fn minor_identity_and_repeats() {
        let a = sample_gaussian(3, 3, EnsembleKind::Complex, 8).unwrap();
        let s = MultisetOutcome::new(3, vec![1, 2, 3]).unwrap();
        assert_eq!(minor(&a, &s).unwrap().entries(), a.entries());

        let b = GaussianMatrix::from_real_entries(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
            .unwrap();
        let s = MultisetOutcome::new(3, vec![1, 1]).unwrap();
        let m = minor(&b, &s).unwrap();
        assert_eq!(m.get(0, 0).re, 1.0);
        assert_eq!(m.get(0, 1).re, 1.0);
        assert_eq!(m.get(1, 0).re, 4.0);
        assert_eq!(m.get(1, 1).re, 4.0);
        // perm [[1,1],[4,4]] = 1*4 + 1*4, the hand expansion
        assert_eq!(permanent(&m).unwrap().re, 8.0);
    }

    #[test]
    fn minor_dimension_mismatch() {
        let a = sample_gaussian(2, 4, EnsembleKind::Complex, 8).unwrap();
        let wrong_m = MultisetOutcome::new(3, vec![1, 2]).unwrap();
        assert!(minor(&a, &wrong_m).is_err());
        let wrong_n = MultisetOutcome::new(4, vec![1, 2, 3]).unwrap();
        assert!(minor(&a, &wrong_n).is_err());
    }

    #[test]
    fn gram_permanent_basics() {
        // Single row: perm(AA*) = sum |z_j|^2.
        let a = sample_gaussian(1, 5, EnsembleKind::Complex, 21).unwrap();
        let expect: f64 = (0..5).map(|j| a.get(0, j).norm_sqr()).sum();
        assert!((gram_permanent(&a).unwrap() - expect).abs() <= 1e-12 * expect);

        assert!((gram_permanent(&eye(4)).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn gram_imaginary_residue_is_small() {
        let a = sample_gaussian(3, 6, EnsembleKind::Complex, 33).unwrap();
        let n = a.rows();
        let mut gram = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = num_complex::Complex::new(0.0, 0.0);
                for k in 0..a.cols() {
                    acc += a.get(i, k) * a.get(j, k).conj();
                }
                gram.push(acc);
            }
        }
        let p = ryser_slice(&gram, n);
        assert!(p.im.abs() <= 1e-9 * p.re.abs().max(1.0));
        assert!(p.re > 0.0);
    }
}
