//! Spectra, resolvents, norms, pole orders and Laurent coefficients of
//! complex matrices.

mod qr;
mod svd;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, NormKind};
use crate::matrix::{CMatrix, Lu};

pub use qr::{hessenberg, hessenberg_eigenvalues};
pub use svd::Svd;

/// Largest matrix accepted by the eigensolver.
pub const MAX_DIM: usize = 128;
/// Default numeric-rank tolerance (relative to `||A||`).
pub const DEFAULT_TOL: f64 = 1e-8;
/// Relative pivot threshold below which a resolvent counts as singular.
pub const RESOLVENT_PIVOT_TOL: f64 = 1e-14;
/// Extrapolation nodes `h = 2^-j` for the Laurent coefficient.
pub const LAURENT_STEPS: std::ops::RangeInclusive<i32> = 8..=16;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Repeated according to algebraic multiplicity, sorted by decreasing
    /// modulus and then by argument.
    pub eigenvalues: Vec<Complex64>,
    pub spectral_radius: f64,
    pub solver_tolerance: f64,
}

impl Spectrum {
    /// Distance from `lambda` to the nearest computed eigenvalue.
    pub fn distance(&self, lambda: Complex64) -> f64 {
        self.eigenvalues.iter().map(|z| (z - lambda).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

pub fn eigenvalues(a: &CMatrix, tol: f64) -> Result<Spectrum> {
    check_tol(tol)?;
    let n = a.dim();
    if n > MAX_DIM {
        return Err(Error::DimensionTooLarge { dim: n, cap: MAX_DIM });
    }
    if a.as_slice().iter().any(|z| !z.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let mut eig = hessenberg_eigenvalues(&hessenberg(a))?;
    eig.sort_by(|x, y| y.norm().total_cmp(&x.norm()).then(x.arg().total_cmp(&y.arg())));
    let spectral_radius = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(Spectrum { eigenvalues: eig, spectral_radius, solver_tolerance: tol })
}

/// Matrix of the resolvent `(lambda I - A)^-1`.
pub fn resolvent_matrix(a: &CMatrix, lambda: Complex64) -> Result<CMatrix> {
    Ok(resolvent_lu(a, lambda)?.inverse())
}

fn resolvent_lu(a: &CMatrix, lambda: Complex64) -> Result<Lu> {
    let shifted = a.shifted(lambda);
    let scale = shifted.max_abs().max(f64::MIN_POSITIVE);
    Lu::factor(&shifted, RESOLVENT_PIVOT_TOL * scale, lambda)
}

/// Solves `(lambda I - A) y = x`.
pub fn resolvent_apply(a: &CMatrix, lambda: Complex64, x: &LatticeVector) -> Result<LatticeVector> {
    if x.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), actual: x.dim() });
    }
    let y = resolvent_lu(a, lambda)?.solve(x.entries());
    LatticeVector::with_shared_norm(y, x.shared_norm())
}

pub fn operator_norm(a: &CMatrix, norm: &NormKind) -> Result<f64> {
    let n = a.dim();
    match norm {
        NormKind::Ell1 => Ok((0..n).map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)),
        NormKind::EllInf => Ok((0..n).map(|i| a.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)),
        NormKind::Ell2 => Ok(spectral_norm(a)),
        other => Err(Error::UnsupportedNorm { op: "operator_norm", norm: other.label() }),
    }
}

/// Largest singular value by power iteration on `A* A`, falling back to the
/// Jacobi SVD when the iteration stalls.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    if n == 0 || a.max_abs() == 0.0 {
        return 0.0;
    }
    let ah = a.adjoint();
    // deterministic start with no special structure
    let mut x: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = (k as f64 + 1.0) * 0.618_033_988_749_894_9;
            Complex64::new(1.0 + t.fract(), 0.3 * (t * 1.7).fract())
        })
        .collect();
    let mut estimate = 0.0;
    for _ in 0..2000 {
        let nx = l2(&x);
        x.iter_mut().for_each(|z| *z /= nx);
        let y = ah.mul_vec(&a.mul_vec(&x));
        let next = l2(&y).sqrt();
        if next == 0.0 {
            break;
        }
        if (next - estimate).abs() <= 1e-8 * next {
            // the power iteration can converge to a smaller singular value
            // from an unlucky start; the SVD settles the tie cheaply
            return next.max(estimate);
        }
        estimate = next;
        x = y;
    }
    Svd::compute(a).largest()
}

fn l2(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Number of singular values of `lambda I - A` at most `tol ||A||_2`.
pub fn geometric_multiplicity(a: &CMatrix, lambda: Complex64, tol: f64) -> usize {
    let scale = spectral_norm(a);
    Svd::compute(&a.shifted(lambda)).singular_values.iter().filter(|&&s| s <= tol * scale).count()
}

/// Orthonormal basis of the numeric kernel of `lambda I - A`.
pub fn eigenvectors(a: &CMatrix, lambda: Complex64, tol: f64) -> Vec<Vec<Complex64>> {
    let scale = spectral_norm(a);
    Svd::compute(&a.shifted(lambda)).null_space(tol * scale)
}

/// Eigenvalue `lambda0` refined to the centroid of the computed eigenvalues
/// clustered around it (defective eigenvalues split by about `eps^(1/m)`).
fn refine_eigenvalue(a: &CMatrix, lambda0: Complex64, tol: f64) -> Result<(Complex64, f64)> {
    let spec = eigenvalues(a, tol)?;
    let scale = spectral_norm(a).max(f64::MIN_POSITIVE);
    let radius = tol.sqrt().max(1e-5) * scale.max(lambda0.norm());
    let cluster: Vec<Complex64> = spec.eigenvalues.iter().copied().filter(|z| (z - lambda0).norm() <= radius).collect();
    let smin_given = Svd::compute(&a.shifted(lambda0)).smallest();
    let distance = spec.distance(lambda0);
    if cluster.is_empty() && smin_given > tol * scale {
        return Err(Error::NotAnEigenvalue { lambda: lambda0, distance });
    }
    if cluster.is_empty() {
        return Ok((lambda0, scale));
    }
    let centroid = cluster.iter().sum::<Complex64>() / cluster.len() as f64;
    let smin_centroid = Svd::compute(&a.shifted(centroid)).smallest();
    if smin_given > tol * scale && smin_centroid > tol * scale && distance > radius {
        return Err(Error::NotAnEigenvalue { lambda: lambda0, distance });
    }
    Ok((if smin_centroid < smin_given { centroid } else { lambda0 }, scale))
}

/// Numeric ranks of `(lambda0 I - A)^k` for `k = 1..=dim + 1`.
pub fn rank_sequence(a: &CMatrix, lambda0: Complex64, tol: f64) -> Result<Vec<usize>> {
    let (lambda, scale) = refine_eigenvalue(a, lambda0, tol)?;
    let n = a.dim();
    let b = a.shifted(lambda);
    let bnorm = spectral_norm(&b);
    let mut power = b.clone();
    let mut ranks = Vec::with_capacity(n + 1);
    for k in 1..=n + 1 {
        let threshold = tol * scale * bnorm.powi(k as i32 - 1);
        ranks.push(Svd::compute(&power).rank(threshold));
        if k > 1 && ranks[k - 1] == ranks[k - 2] {
            break;
        }
        power = power.matmul(&b);
    }
    Ok(ranks)
}

/// Order of `lambda0` as a pole of the resolvent: the first `k` with
/// `rank (lambda0 - A)^k = rank (lambda0 - A)^(k+1)`.
pub fn pole_order(a: &CMatrix, lambda0: Complex64, tol: f64) -> Result<usize> {
    check_tol(tol)?;
    let ranks = rank_sequence(a, lambda0, tol)?;
    let m = ranks.windows(2).position(|w| w[0] == w[1]).map_or(ranks.len(), |k| k + 1);
    Ok(m)
}

/// Neville table entry at the best-converged position, with its error estimate.
fn neville_to_zero(h: &[f64], values: &[CMatrix]) -> (CMatrix, f64) {
    let count = h.len();
    let mut table: Vec<Vec<CMatrix>> = vec![values.to_vec()];
    let mut best = (values[count - 1].clone(), f64::INFINITY);
    for k in 1..count {
        let prev = &table[k - 1];
        let mut col = Vec::with_capacity(count - k);
        for i in k..count {
            let (hi, hlo) = (h[i], h[i - k]);
            let a = &prev[i - k + 1];
            let b = &prev[i - k];
            // P_{i,k} = (h_{i-k} P_{i,k-1} - h_i P_{i-1,k-1}) / (h_{i-k} - h_i)
            let entry = CMatrix::from_fn(a.dim(), |r, c| (a[(r, c)] * hlo - b[(r, c)] * hi) / (hlo - hi));
            let err = entry.sub(a).max_abs();
            if err < best.1 {
                best = (entry.clone(), err);
            }
            col.push(entry);
        }
        table.push(col);
    }
    best
}

#[derive(Debug, Clone)]
pub struct LaurentCoefficient {
    pub matrix: CMatrix,
    /// Neville error estimate (max-abs).
    pub extrapolation_error: f64,
    /// `max_j ||(lambda0 - A) Q e_j|| / ||Q||`.
    pub kernel_residual: f64,
}

/// `Q_{-m} = lim_{r -> lambda0+} (r - lambda0)^m R(r, A)` by Richardson
/// extrapolation over `r = lambda0 (1 + 2^-j)`.
pub fn laurent_leading_coefficient(a: &CMatrix, lambda0: f64, m: usize) -> Result<CMatrix> {
    Ok(laurent_with_diagnostics(a, lambda0, m)?.matrix)
}

pub fn laurent_with_diagnostics(a: &CMatrix, lambda0: f64, m: usize) -> Result<LaurentCoefficient> {
    if !(lambda0.is_finite() && lambda0 > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda0 = {lambda0} must be positive")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("pole order must be at least 1".into()));
    }
    let mut hs = Vec::new();
    let mut values = Vec::new();
    for j in LAURENT_STEPS {
        let h = 2f64.powi(-j);
        let r = lambda0 * (1.0 + h);
        let res = resolvent_matrix(a, Complex64::new(r, 0.0))?;
        hs.push(h);
        values.push(res.scale(Complex64::new((lambda0 * h).powi(m as i32), 0.0)));
    }
    let (q, err) = neville_to_zero(&hs, &values);
    let qnorm = q.max_abs();
    if !qnorm.is_finite() || qnorm == 0.0 {
        return Err(Error::Extrapolation(format!(
            "leading coefficient vanished or diverged (max entry {qnorm:e}); pole order {m} is too high"
        )));
    }
    if err > 1e-6 * qnorm {
        return Err(Error::Extrapolation(format!(
            "Neville estimate {err:e} exceeds 1e-6 relative to max entry {qnorm:e}"
        )));
    }
    let image = a.shifted(Complex64::new(lambda0, 0.0)).matmul(&q);
    let qcol = (0..q.dim()).map(|j| l2(&q.column(j))).fold(0.0, f64::max);
    let kernel_residual = (0..q.dim()).map(|j| l2(&image.column(j))).fold(0.0, f64::max) / qcol;
    if kernel_residual > 1e-6 {
        return Err(Error::Extrapolation(format!(
            "columns leave ker(lambda0 - A): relative residual {kernel_residual:e}"
        )));
    }
    Ok(LaurentCoefficient { matrix: q, extrapolation_error: err, kernel_residual })
}

/// Spectral projection `v w* / (w* v)` for a simple eigenvalue, from the
/// right and left kernels. Used as an independent check on the extrapolation.
pub fn simple_eigenprojection(a: &CMatrix, lambda: Complex64, tol: f64) -> Result<CMatrix> {
    let right = eigenvectors(a, lambda, tol);
    let left = eigenvectors(&a.adjoint(), lambda.conj(), tol);
    if right.len() != 1 || left.len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue {lambda} is not geometrically simple ({} right, {} left kernel vectors)",
            right.len(),
            left.len()
        )));
    }
    let (v, w) = (&right[0], &left[0]);
    let denom: Complex64 = w.iter().zip(v).map(|(wi, vi)| wi.conj() * vi).sum();
    if denom.norm() < tol {
        return Err(Error::InvalidArgument(format!("eigenvalue {lambda} is not algebraically simple")));
    }
    Ok(CMatrix::from_fn(v.len(), |i, j| v[i] * w[j].conj() / denom))
}

/// Eigenvalues of modulus at least `spr (1 - tol)`, merged within `tol spr`.
pub fn peripheral_spectrum(spec: &Spectrum, tol: f64) -> Vec<Complex64> {
    if spec.is_empty() {
        return Vec::new();
    }
    let r = spec.spectral_radius;
    if r == 0.0 {
        return vec![ZERO];
    }
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &z in spec.eigenvalues.iter().filter(|z| z.norm() >= r * (1.0 - tol)) {
        match clusters.iter_mut().find(|(c, k)| (c / *k as f64 - z).norm() <= tol * r) {
            Some((c, k)) => {
                *c += z;
                *k += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    let mut out: Vec<Complex64> = clusters.into_iter().map(|(c, k)| c / k as f64).collect();
    out.sort_by(|x, y| x.arg().total_cmp(&y.arg()));
    out
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    Ok(())
}
