//! Finite-dimensional complex Banach lattices.
//!
//! A [`LatticeVector`] is a complex vector together with the lattice norm it
//! is measured in. The order is the coordinatewise one: `x >= 0` means every
//! entry is real and nonnegative. All five norm kinds are lattice norms, i.e.
//! monotone in the entrywise modulus, which the cone-distance oracle relies on.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension accepted by [`cone_distance_oracle`].
pub const ORACLE_DIM_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawNormKind")]
pub enum NormKind {
    Ell1,
    Ell2,
    EllInf,
    /// Quadrature realization of an L^p norm: `(sum_k w_k |x_k|^p)^(1/p)`.
    LpQuadrature {
        p: f64,
        nodes: Vec<f64>,
        weights: Vec<f64>,
    },
    /// Sup norm over sampling nodes; every statement in this space is grid-relative.
    GridSup {
        nodes: Vec<f64>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNormKind {
    kind: String,
    p: Option<f64>,
    nodes: Option<Vec<f64>>,
    weights: Option<Vec<f64>>,
}

impl TryFrom<RawNormKind> for NormKind {
    type Error = String;

    fn try_from(raw: RawNormKind) -> std::result::Result<Self, String> {
        let RawNormKind { kind, p, nodes, weights } = raw;
        let norm = match (kind.as_str(), p, nodes, weights) {
            ("ell1", None, None, None) => NormKind::Ell1,
            ("ell2", None, None, None) => NormKind::Ell2,
            ("ell_inf", None, None, None) => NormKind::EllInf,
            ("lp_quadrature", Some(p), Some(nodes), Some(weights)) => NormKind::LpQuadrature { p, nodes, weights },
            ("grid_sup", None, Some(nodes), None) => NormKind::GridSup { nodes },
            (other, ..) => return Err(format!("invalid fields for norm kind `{other}`")),
        };
        norm.validate().map_err(|e| e.to_string())?;
        Ok(norm)
    }
}

impl NormKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            NormKind::Ell1 | NormKind::Ell2 | NormKind::EllInf => Ok(()),
            NormKind::LpQuadrature { p, nodes, weights } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(Error::InvalidNorm(format!("exponent p = {p} must be >= 1")));
                }
                if nodes.len() != weights.len() {
                    return Err(Error::InvalidNorm(format!("{} nodes but {} weights", nodes.len(), weights.len())));
                }
                if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                    return Err(Error::InvalidNorm("quadrature weights must be positive and finite".into()));
                }
                check_increasing(nodes)
            }
            NormKind::GridSup { nodes } => check_increasing(nodes),
        }
    }

    /// Node count for grid-backed kinds.
    pub fn node_count(&self) -> Option<usize> {
        match self {
            NormKind::LpQuadrature { nodes, .. } | NormKind::GridSup { nodes } => Some(nodes.len()),
            _ => None,
        }
    }

    pub fn nodes(&self) -> Option<&[f64]> {
        match self {
            NormKind::LpQuadrature { nodes, .. } | NormKind::GridSup { nodes } => Some(nodes),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            NormKind::Ell1 => "ell1".into(),
            NormKind::Ell2 => "ell2".into(),
            NormKind::EllInf => "ell_inf".into(),
            NormKind::LpQuadrature { p, nodes, .. } => format!("L{p}-quadrature[{}]", nodes.len()),
            NormKind::GridSup { nodes } => format!("grid-sup[{}]", nodes.len()),
        }
    }

    /// Norm of a vector given by its entrywise moduli.
    pub fn norm_of_moduli<I: IntoIterator<Item = f64>>(&self, moduli: I) -> f64 {
        match self {
            NormKind::Ell1 => moduli.into_iter().sum(),
            NormKind::Ell2 => moduli.into_iter().map(|m| m * m).sum::<f64>().sqrt(),
            NormKind::EllInf | NormKind::GridSup { .. } => moduli.into_iter().fold(0.0, f64::max),
            NormKind::LpQuadrature { p, weights, .. } => {
                let s: f64 = moduli.into_iter().zip(weights).map(|(m, w)| w * m.powf(*p)).sum();
                s.powf(1.0 / p)
            }
        }
    }

    /// Composite midpoint rule on `[lo, hi]` with `count` cells.
    pub fn midpoint(p: f64, lo: f64, hi: f64, count: usize) -> NormKind {
        let h = (hi - lo) / count as f64;
        let mut nodes: Vec<f64> = (0..count).map(|k| lo + (k as f64 + 0.5) * h).collect();
        if lo == -hi {
            for k in 0..count / 2 {
                nodes[count - 1 - k] = -nodes[k];
            }
            if count % 2 == 1 {
                nodes[count / 2] = 0.0;
            }
        }
        NormKind::LpQuadrature { p, nodes, weights: vec![h; count] }
    }

    /// Uniform grid with `count` nodes including both endpoints.
    pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> NormKind {
        let mut nodes: Vec<f64> = if count == 1 {
            vec![lo]
        } else {
            (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect()
        };
        if lo == -hi && count > 1 {
            for k in 0..count / 2 {
                nodes[count - 1 - k] = -nodes[k];
            }
            if count % 2 == 1 {
                nodes[count / 2] = 0.0;
            }
        }
        NormKind::GridSup { nodes }
    }
}

fn check_increasing(nodes: &[f64]) -> Result<()> {
    if nodes.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidNorm("nodes must be finite".into()));
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidNorm("nodes must be strictly increasing".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector {
    entries: Vec<Complex64>,
    norm: Arc<NormKind>,
}

impl LatticeVector {
    pub fn new(entries: Vec<Complex64>, norm: NormKind) -> Result<Self> {
        Self::with_shared_norm(entries, Arc::new(norm))
    }

    pub fn with_shared_norm(entries: Vec<Complex64>, norm: Arc<NormKind>) -> Result<Self> {
        norm.validate()?;
        if let Some(count) = norm.node_count() {
            if count != entries.len() {
                return Err(Error::DimensionMismatch { expected: count, actual: entries.len() });
            }
        }
        Ok(Self { entries, norm })
    }

    pub fn from_real(values: &[f64], norm: NormKind) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), norm)
    }

    pub fn zeros(dim: usize, norm: NormKind) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); dim], norm)
    }

    /// Same norm context, new entries. Lengths must agree.
    pub(crate) fn like(&self, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), self.entries.len());
        Self { entries, norm: Arc::clone(&self.norm) }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn norm_kind(&self) -> &NormKind {
        &self.norm
    }

    pub fn shared_norm(&self) -> Arc<NormKind> {
        Arc::clone(&self.norm)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.entries.iter().all(|z| z.re >= -tol && z.im.abs() <= tol)
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        self.like(self.entries.iter().map(|z| z * alpha).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: other.dim() });
        }
        Ok(self.like(self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect()))
    }

    fn map_real(&self, f: impl Fn(Complex64) -> f64) -> Self {
        self.like(self.entries.iter().map(|&z| Complex64::new(f(z), 0.0)).collect())
    }
}

pub fn real_part(x: &LatticeVector) -> LatticeVector {
    x.map_real(|z| z.re)
}

pub fn imag_part(x: &LatticeVector) -> LatticeVector {
    x.map_real(|z| z.im)
}

pub fn complex_modulus(x: &LatticeVector) -> LatticeVector {
    x.map_real(|z| z.norm())
}

/// `(Re x)^+`
pub fn positive_part(x: &LatticeVector) -> LatticeVector {
    x.map_real(|z| z.re.max(0.0))
}

/// `(Re x)^-`
pub fn negative_part(x: &LatticeVector) -> LatticeVector {
    x.map_real(|z| (-z.re).max(0.0))
}

pub fn norm_value(x: &LatticeVector) -> f64 {
    x.norm.norm_of_moduli(x.entries.iter().map(|z| z.norm()))
}

/// Distance to the positive cone, `||-(Re x)^- + i Im x||`.
pub fn cone_distance(x: &LatticeVector) -> f64 {
    x.norm.norm_of_moduli(x.entries.iter().map(|z| entry_cone_gap(*z)))
}

/// Modulus of `-(Re z)^- + i Im z`, the distance of a scalar to `[0, inf)`.
pub fn entry_cone_gap(z: Complex64) -> f64 {
    (-z.re).max(0.0).hypot(z.im)
}

/// Brute-force distance to the cone on a nonnegative grid of step `resolution`.
///
/// The candidate set is the product grid `{0, r, 2r, ..} ^ dim` clipped to
/// twice the largest entry modulus. Every supported norm is monotone in the
/// entrywise modulus, so the product-grid minimum is reached by minimizing each
/// coordinate gap separately; each coordinate is still scanned exhaustively.
pub fn cone_distance_oracle(x: &LatticeVector, resolution: f64) -> Result<f64> {
    if x.dim() > ORACLE_DIM_CAP {
        return Err(Error::DimensionTooLarge { dim: x.dim(), cap: ORACLE_DIM_CAP });
    }
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidArgument(format!("resolution {resolution} must be positive")));
    }
    let bound = 2.0 * x.entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let steps = (bound / resolution).floor() as usize;
    let gaps = x.entries.iter().map(|z| {
        (0..=steps).map(|j| (z - Complex64::new(j as f64 * resolution, 0.0)).norm()).fold(f64::INFINITY, f64::min)
    });
    Ok(x.norm.norm_of_moduli(gaps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn part_extractions() {
        let x = LatticeVector::new(vec![c(3.0, 4.0)], NormKind::Ell2).unwrap();
        assert_eq!(complex_modulus(&x).entries()[0], c(5.0, 0.0));
        let y = LatticeVector::new(vec![c(-2.0, 0.0), c(1.0, 0.0)], NormKind::Ell1).unwrap();
        assert_eq!(positive_part(&y).entries(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(negative_part(&y).entries(), &[c(2.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn norms() {
        let g = LatticeVector::from_real(&[1.0, -3.0, 2.0], NormKind::uniform_grid(-1.0, 1.0, 3)).unwrap();
        assert_eq!(norm_value(&g), 3.0);
        let q = NormKind::LpQuadrature { p: 2.0, nodes: vec![-0.5, 0.5], weights: vec![1.0, 1.0] };
        let x = LatticeVector::new(vec![c(3.0, 0.0), c(0.0, 4.0)], q).unwrap();
        assert!((norm_value(&x) - 5.0).abs() < 1e-15);
        let y = LatticeVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)], NormKind::Ell1).unwrap();
        assert_eq!(norm_value(&y), 2.0);
    }

    #[test]
    fn cone_distance_examples() {
        let x = LatticeVector::from_real(&[0.0, 2.5], NormKind::EllInf).unwrap();
        assert_eq!(cone_distance(&x), 0.0);
        for norm in [NormKind::Ell1, NormKind::Ell2, NormKind::EllInf] {
            let x = LatticeVector::new(vec![c(-3.0, 4.0)], norm).unwrap();
            assert!((cone_distance(&x) - 5.0).abs() < 1e-14);
        }
        let x = LatticeVector::from_real(&[1.0, -2.0], NormKind::Ell1).unwrap();
        assert_eq!(cone_distance(&x), 2.0);
        let zero = LatticeVector::zeros(4, NormKind::Ell2).unwrap();
        assert_eq!(cone_distance(&zero), 0.0);
    }

    #[test]
    fn oracle_scalar_cases() {
        let x = LatticeVector::from_real(&[-1.0], NormKind::Ell1).unwrap();
        assert!((cone_distance_oracle(&x, 1e-3).unwrap() - 1.0).abs() <= 1e-3);
        let pos = LatticeVector::from_real(&[0.25, 1.5, 0.0], NormKind::Ell2).unwrap();
        assert!(cone_distance_oracle(&pos, 1e-3).unwrap() <= 3e-3);
        let big = LatticeVector::zeros(7, NormKind::Ell1).unwrap();
        assert!(matches!(cone_distance_oracle(&big, 1e-3), Err(Error::DimensionTooLarge { dim: 7, cap: 6 })));
    }

    #[test]
    fn oracle_matches_exhaustive_product_scan_in_two_dimensions() {
        // Full product-grid scan, no monotonicity shortcut.
        let res = 0.05;
        let cases = [[c(-0.3, 0.2), c(0.7, -0.4)], [c(0.9, 0.0), c(-1.1, 0.6)], [c(-0.2, -0.9), c(-0.5, 0.1)]];
        for norm in [NormKind::Ell1, NormKind::Ell2, NormKind::EllInf] {
            for case in &cases {
                let x = LatticeVector::new(case.to_vec(), norm.clone()).unwrap();
                let bound = 2.0 * case.iter().map(|z| z.norm()).fold(0.0, f64::max);
                let steps = (bound / res).floor() as usize;
                let mut best = f64::INFINITY;
                for i in 0..=steps {
                    for j in 0..=steps {
                        let y = [c(i as f64 * res, 0.0), c(j as f64 * res, 0.0)];
                        let d = norm.norm_of_moduli(case.iter().zip(&y).map(|(a, b)| (a - b).norm()));
                        best = best.min(d);
                    }
                }
                let oracle = cone_distance_oracle(&x, res).unwrap();
                assert!((oracle - best).abs() < 1e-12, "{norm:?} {case:?}");
            }
        }
    }

    #[test]
    fn invalid_norms_rejected() {
        let bad = NormKind::LpQuadrature { p: 2.0, nodes: vec![0.0, 1.0], weights: vec![1.0, 0.0] };
        assert!(bad.validate().is_err());
        let bad = NormKind::GridSup { nodes: vec![0.0, 0.0] };
        assert!(bad.validate().is_err());
        let bad = NormKind::LpQuadrature { p: 0.5, nodes: vec![0.0], weights: vec![1.0] };
        assert!(bad.validate().is_err());
        let grid = NormKind::uniform_grid(-1.0, 1.0, 3);
        assert!(LatticeVector::from_real(&[1.0, 2.0], grid).is_err());
    }

    #[test]
    fn norm_kind_json_rejects_unknown_fields() {
        let ok: NormKind = serde_json::from_str(r#"{"kind":"grid_sup","nodes":[-1,0,1]}"#).unwrap();
        assert_eq!(ok, NormKind::uniform_grid(-1.0, 1.0, 3));
        assert!(serde_json::from_str::<NormKind>(r#"{"kind":"ell1","extra":1}"#).is_err());
    }
}
