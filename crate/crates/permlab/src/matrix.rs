//! Gaussian matrix ensembles and the additive noise model.
//!
//! Matrices are dense, row major and immutable after construction. A matrix
//! of kind [`EnsembleKind::Real`] stores its entries in the same complex grid
//! with zero imaginary parts, so every kernel downstream works on one
//! representation.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

/// Entry distribution of a Gaussian ensemble.
///
/// `Complex` entries have independent real and imaginary parts of variance
/// 1/2 each (total entry variance 1); `Real` entries are standard normals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    Complex,
    Real,
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EnsembleKind::Complex => write!(f, "complex"),
            EnsembleKind::Real => write!(f, "real"),
        }
    }
}

/// Where a sampled matrix came from, for reproducibility audits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub generator: String,
}

/// Noise level `epsilon` together with the correlation `rho = sqrt(1 - epsilon)`.
///
/// The pair is kept together because both parametrizations appear throughout:
/// the noisy matrix is `rho * X + sqrt(epsilon) * U`, and the noise operator
/// attenuates a degree-`k` component by `rho^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParameter {
    epsilon: f64,
    rho: f64,
}

impl NoiseParameter {
    const CONSISTENCY_TOL: f64 = 1e-12;

    /// Build from the noise level; `rho` is derived.
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) || !epsilon.is_finite() {
            return Err(Error::invalid(format!(
                "epsilon must lie in [0, 1], got {epsilon}"
            )));
        }
        Ok(NoiseParameter { epsilon, rho: (1.0 - epsilon).sqrt() })
    }

    /// Build from the correlation; `epsilon` is derived.
    pub fn from_rho(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) || !rho.is_finite() {
            return Err(Error::invalid(format!("rho must lie in [0, 1], got {rho}")));
        }
        Ok(NoiseParameter { epsilon: 1.0 - rho * rho, rho })
    }

    /// Build from an explicit pair, enforcing `rho^2 + epsilon = 1` to 1e-12.
    pub fn new(epsilon: f64, rho: f64) -> Result<Self> {
        let p = Self::from_epsilon(epsilon)?;
        if (rho * rho + epsilon - 1.0).abs() > Self::CONSISTENCY_TOL {
            return Err(Error::invalid(format!(
                "rho^2 + epsilon = {} violates the unit constraint",
                rho * rho + epsilon
            )));
        }
        Ok(NoiseParameter { epsilon, rho: p.rho })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `rho^2 = 1 - epsilon`, the attenuation of one quadratic degree step.
    pub fn rho_sq(&self) -> f64 {
        1.0 - self.epsilon
    }
}

/// Dense complex or real Gaussian matrix with optional sampling provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMatrix {
    rows: usize,
    cols: usize,
    kind: EnsembleKind,
    entries: Vec<Complex<f64>>,
    provenance: Option<Provenance>,
}

impl GaussianMatrix {
    /// Wrap explicit entries (row major). Validates finiteness and, for the
    /// real kind, zero imaginary parts.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        kind: EnsembleKind,
        entries: Vec<Complex<f64>>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be at least 1x1"));
        }
        if entries.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for z in &entries {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::invalid("matrix entries must be finite"));
            }
            if kind == EnsembleKind::Real && z.im != 0.0 {
                return Err(Error::invalid(
                    "real-kind matrices must have zero imaginary parts",
                ));
            }
        }
        Ok(GaussianMatrix { rows, cols, kind, entries, provenance: None })
    }

    /// Convenience constructor for real entries.
    pub fn from_real_entries(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        let entries = entries.into_iter().map(|x| Complex::new(x, 0.0)).collect();
        Self::from_entries(rows, cols, EnsembleKind::Real, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Entry at `(row, col)`, zero based.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<f64> {
        debug_assert!(row < self.rows && col < self.cols);
        self.entries[row * self.cols + col]
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex<f64>] {
        &self.entries
    }

    /// The matrix scaled by a complex constant (provenance is dropped).
    pub fn scaled(&self, c: Complex<f64>) -> Result<Self> {
        let entries = self.entries.iter().map(|z| z * c).collect();
        // Scaling a real matrix by a complex constant leaves the real kind.
        let kind = if self.kind == EnsembleKind::Real && c.im != 0.0 {
            EnsembleKind::Complex
        } else {
            self.kind
        };
        Self::from_entries(self.rows, self.cols, kind, entries)
    }

    /// The matrix with columns reordered as `cols[j']` -> position `j'`
    /// (zero-based source indices).
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        for &c in cols {
            if c >= self.cols {
                return Err(Error::invalid(format!(
                    "column index {c} out of range for {} columns",
                    self.cols
                )));
            }
        }
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &c in cols {
                entries.push(self.get(i, c));
            }
        }
        Self::from_entries(self.rows, cols.len(), self.kind, entries)
    }

    /// Serialize to the interchange JSON form
    /// `{rows, cols, kind, entries: [[re, im], ...]}` (row major).
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&MatrixRepr::from(self))?)
    }

    /// Parse the interchange JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: MatrixRepr = serde_json::from_str(text)?;
        repr.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    kind: EnsembleKind,
    entries: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    provenance: Option<Provenance>,
}

impl From<&GaussianMatrix> for MatrixRepr {
    fn from(m: &GaussianMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            kind: m.kind,
            entries: m.entries.iter().map(|z| (z.re, z.im)).collect(),
            provenance: m.provenance.clone(),
        }
    }
}

impl TryFrom<MatrixRepr> for GaussianMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let entries = r.entries.iter().map(|&(re, im)| Complex::new(re, im)).collect();
        let mut m = GaussianMatrix::from_entries(r.rows, r.cols, r.kind, entries)?;
        m.provenance = r.provenance;
        Ok(m)
    }
}

/// Sample an i.i.d. Gaussian matrix. The same `(rows, cols, kind, seed)`
/// reproduces the same matrix bit for bit on every platform.
pub fn sample_gaussian(
    rows: usize,
    cols: usize,
    kind: EnsembleKind,
    seed: u64,
) -> Result<GaussianMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("matrix dimensions must be at least 1x1"));
    }
    let mut rng = rng::substream(seed, Purpose::MatrixSample, 0);
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        entries.push(match kind {
            EnsembleKind::Complex => rng::complex_entry(&mut rng),
            EnsembleKind::Real => rng::real_entry(&mut rng),
        });
    }
    let mut m = GaussianMatrix::from_entries(rows, cols, kind, entries)?;
    m.provenance = Some(Provenance { seed, generator: rng::GENERATOR_ID.to_string() });
    Ok(m)
}

/// Apply an epsilon-noise: returns `rho * X + sqrt(epsilon) * U` with `U`
/// a fresh matrix of the same kind. `epsilon = 0` returns `X` unchanged.
pub fn apply_noise(
    x: &GaussianMatrix,
    noise: &NoiseParameter,
    seed: u64,
) -> Result<GaussianMatrix> {
    if noise.epsilon() == 0.0 {
        return Ok(x.clone());
    }
    let mut rng = rng::substream(seed, Purpose::NoiseDraw, 0);
    let rho = noise.rho();
    let amp = noise.epsilon().sqrt();
    let entries = x
        .entries
        .iter()
        .map(|z| {
            let u = match x.kind {
                EnsembleKind::Complex => rng::complex_entry(&mut rng),
                EnsembleKind::Real => rng::real_entry(&mut rng),
            };
            rho * z + amp * u
        })
        .collect();
    GaussianMatrix::from_entries(x.rows, x.cols, x.kind, entries)
}

/// Draw a rho-correlated pair `(X, Y)`: both marginals are standard Gaussian
/// ensembles and corresponding entries have covariance `rho`.
pub fn correlated_pair(
    rows: usize,
    cols: usize,
    kind: EnsembleKind,
    noise: &NoiseParameter,
    seed: u64,
) -> Result<(GaussianMatrix, GaussianMatrix)> {
    let mut base = sample_gaussian(rows, cols, kind, seed)?;
    base.provenance = None;
    // Reuse the noise machinery but draw U from the pair-specific stream so
    // a correlated pair never aliases an apply_noise call with the same seed.
    if noise.epsilon() == 0.0 {
        return Ok((base.clone(), base));
    }
    let mut rng = rng::substream(seed, Purpose::PairNoise, 0);
    let rho = noise.rho();
    let amp = noise.epsilon().sqrt();
    let entries: Vec<Complex<f64>> = base
        .entries
        .iter()
        .map(|z| {
            let u = match kind {
                EnsembleKind::Complex => rng::complex_entry(&mut rng),
                EnsembleKind::Real => rng::real_entry(&mut rng),
            };
            rho * z + amp * u
        })
        .collect();
    let noisy = GaussianMatrix::from_entries(rows, cols, kind, entries)?;
    Ok((base, noisy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use rand::Rng;

    fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_gaussian(1, 1, EnsembleKind::Complex, 99).unwrap();
        let b = sample_gaussian(1, 1, EnsembleKind::Complex, 99).unwrap();
        assert_eq!(a.get(0, 0), b.get(0, 0));
        let c = sample_gaussian(1, 1, EnsembleKind::Complex, 100).unwrap();
        assert_ne!(a.get(0, 0), c.get(0, 0));
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(sample_gaussian(0, 3, EnsembleKind::Real, 1).is_err());
        assert!(sample_gaussian(3, 0, EnsembleKind::Real, 1).is_err());
    }

    #[test]
    fn complex_entry_second_moment() {
        // E|z|^2 = 1 over 1e5 samples, within 3 standard errors.
        let xs: Vec<f64> = (0..100_000)
            .map(|i| {
                let m = sample_gaussian(1, 1, EnsembleKind::Complex, 0xA0 + i).unwrap();
                m.get(0, 0).norm_sqr()
            })
            .collect();
        let (mean, se) = mean_and_stderr(&xs);
        assert!((mean - 1.0).abs() <= 3.0 * se, "mean {mean}, stderr {se}");
    }

    #[test]
    fn real_entry_fourth_moment() {
        // E x^4 = 3 for a standard normal.
        let xs: Vec<f64> = (0..100_000)
            .map(|i| {
                let m = sample_gaussian(1, 1, EnsembleKind::Real, 0xB0 + i).unwrap();
                m.get(0, 0).re.powi(4)
            })
            .collect();
        let (mean, se) = mean_and_stderr(&xs);
        assert!((mean - 3.0).abs() <= 3.0 * se, "mean {mean}, stderr {se}");
    }

    #[test]
    fn zero_noise_is_identity() {
        let x = sample_gaussian(3, 4, EnsembleKind::Complex, 5).unwrap();
        let y = apply_noise(&x, &NoiseParameter::from_epsilon(0.0).unwrap(), 77).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn full_noise_decorrelates() {
        let noise = NoiseParameter::from_epsilon(1.0).unwrap();
        let mut prods = Vec::new();
        for i in 0..10_000u64 {
            let x = sample_gaussian(1, 1, EnsembleKind::Real, 0xC0 + i).unwrap();
            let y = apply_noise(&x, &noise, 0xC0 + i).unwrap();
            prods.push(x.get(0, 0).re * y.get(0, 0).re);
        }
        let (mean, se) = mean_and_stderr(&prods);
        assert!(mean.abs() <= 3.0 * se, "mean {mean}, stderr {se}");
    }

    #[test]
    fn noise_preserves_entry_variance() {
        let noise = NoiseParameter::from_epsilon(0.5).unwrap();
        let xs: Vec<f64> = (0..100_000u64)
            .map(|i| {
                let x = sample_gaussian(1, 1, EnsembleKind::Complex, i).unwrap();
                let y = apply_noise(&x, &noise, i).unwrap();
                y.get(0, 0).norm_sqr()
            })
            .collect();
        let (mean, se) = mean_and_stderr(&xs);
        assert!((mean - 1.0).abs() <= 3.0 * se, "mean {mean}, stderr {se}");
    }

    #[test]
    fn correlated_pair_limits() {
        let one = NoiseParameter::from_rho(1.0).unwrap();
        let (x, y) = correlated_pair(2, 2, EnsembleKind::Complex, &one, 3).unwrap();
        assert_eq!(x, y);

        let zero = NoiseParameter::from_rho(0.0).unwrap();
        let mut prods = Vec::new();
        for i in 0..10_000u64 {
            let (x, y) = correlated_pair(1, 1, EnsembleKind::Real, &zero, i).unwrap();
            prods.push(x.get(0, 0).re * y.get(0, 0).re);
        }
        let (mean, se) = mean_and_stderr(&prods);
        assert!(mean.abs() <= 3.0 * se);
    }

    #[test]
    fn correlated_pair_covariance() {
        let noise = NoiseParameter::from_rho(0.8).unwrap();
        let mut prods = Vec::new();
        for i in 0..100_000u64 {
            let (x, y) = correlated_pair(1, 1, EnsembleKind::Real, &noise, i).unwrap();
            prods.push(x.get(0, 0).re * y.get(0, 0).re);
        }
        let (mean, se) = mean_and_stderr(&prods);
        assert!((mean - 0.8).abs() <= 3.0 * se, "mean {mean}, stderr {se}");
    }

    #[test]
    fn noise_parameter_validation() {
        assert!(NoiseParameter::from_epsilon(-0.1).is_err());
        assert!(NoiseParameter::from_epsilon(1.5).is_err());
        assert!(NoiseParameter::new(0.5, 0.9).is_err());
        let p = NoiseParameter::new(0.19, 0.9).unwrap();
        assert_eq!(p.epsilon(), 0.19);
    }

    #[test]
    fn json_round_trip() {
        let m = sample_gaussian(2, 3, EnsembleKind::Complex, 11).unwrap();
        let text = m.to_json().unwrap();
        let back = GaussianMatrix::from_json(&text).unwrap();
        assert_eq!(m, back);
        // Schema spot check.
        assert!(text.contains("\"rows\":2"));
        assert!(text.contains("\"kind\":\"complex\""));
    }

    #[test]
    fn real_kind_rejects_imaginary_entries() {
        let bad = GaussianMatrix::from_entries(
            1,
            1,
            EnsembleKind::Real,
            vec![Complex::new(1.0, 0.5)],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn rng_draw_order_is_row_major() {
        // The documented contract: entries are drawn row by row, and for the
        // complex kind the real part is drawn before the imaginary part.
        let m = sample_gaussian(2, 2, EnsembleKind::Real, 42).unwrap();
        let mut rng = substream(42, Purpose::MatrixSample, 0);
        for i in 0..2 {
            for j in 0..2 {
                let x: f64 = rng.sample(rand_distr::StandardNormal);
                assert_eq!(m.get(i, j).re.to_bits(), x.to_bits());
            }
        }
    }
}
