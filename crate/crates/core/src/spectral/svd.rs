//! One-sided Jacobi SVD for square complex matrices.

use num_complex::Complex64;

use crate::matrix::CMatrix;

const MAX_SWEEPS: usize = 60;

/// `A = U diag(sigma) V*` with singular values in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    /// Right singular vectors as columns, matching `singular_values`.
    pub v: CMatrix,
}

impl Svd {
    pub fn compute(a: &CMatrix) -> Svd {
        let n = a.dim();
        // columns of A and V, stored column-major for cheap access
        let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
        let mut vcols: Vec<Vec<Complex64>> = (0..n)
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                    let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                    let g = gamma.norm();
                    if g <= f64::EPSILON * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                        continue;
                    }
                    rotated = true;
                    let phase = (gamma / g).conj();
                    let zeta = (beta - alpha) / (2.0 * g);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for m in [&mut cols, &mut vcols] {
                        let (left, right) = m.split_at_mut(q);
                        let (xp, xq) = (&mut left[p], &mut right[0]);
                        for (u, w) in xp.iter_mut().zip(xq.iter_mut()) {
                            let wq = *w * phase;
                            let up = *u;
                            *u = up * c - wq * s;
                            *w = up * s + wq * c;
                        }
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut order: Vec<(f64, usize)> =
            cols.iter().enumerate().map(|(j, c)| (c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), j)).collect();
        order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut v = CMatrix::zeros(n);
        for (k, &(_, j)) in order.iter().enumerate() {
            for i in 0..n {
                v[(i, k)] = vcols[j][i];
            }
        }
        Svd { singular_values: order.iter().map(|o| o.0).collect(), v }
    }

    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn smallest(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    pub fn rank(&self, threshold: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > threshold).count()
    }

    /// Right singular vectors whose singular value is at most `threshold`.
    pub fn null_space(&self, threshold: f64) -> Vec<Vec<Complex64>> {
        let n = self.v.dim();
        self.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= threshold)
            .map(|(k, _)| (0..n).map(|i| self.v[(i, k)]).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_rank_one() {
        let a = CMatrix::diagonal(&[Complex64::new(0.0, 3.0), Complex64::new(-1.0, 0.0), Complex64::new(2.0, 0.0)]);
        let s = Svd::compute(&a);
        assert_eq!(s.singular_values, vec![3.0, 2.0, 1.0]);
        let r = CMatrix::from_fn(4, |i, j| Complex64::new((i + 1) as f64, 0.0) * Complex64::new(1.0, j as f64));
        let s = Svd::compute(&r);
        assert_eq!(s.rank(1e-10 * s.largest()), 1);
        let ns = s.null_space(1e-10 * s.largest());
        assert_eq!(ns.len(), 3);
        for x in ns {
            let y = r.mul_vec(&x);
            assert!(y.iter().map(|z| z.norm()).sum::<f64>() < 1e-10);
        }
    }

    #[test]
    fn frobenius_identity() {
        let a = CMatrix::from_fn(7, |i, j| Complex64::new(((i * 13 + j * 7) % 11) as f64 - 5.0, ((i * j) % 5) as f64));
        let s = Svd::compute(&a);
        let sum: f64 = s.singular_values.iter().map(|x| x * x).sum();
        assert!((sum.sqrt() - a.frobenius_norm()).abs() < 1e-10);
        // A V has orthogonal columns of norm sigma
        let av = a.matmul(&s.v);
        for k in 0..7 {
            let norm: f64 = av.column(k).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - s.singular_values[k]).abs() < 1e-10);
        }
    }
}
