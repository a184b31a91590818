//! Hessenberg reduction and single-shift complex QR (eigenvalues only).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Iterations allowed per eigenvalue before giving up.
pub const ITERATIONS_PER_EIGENVALUE: usize = 60;

/// Householder reduction to upper Hessenberg form (similarity, so the
/// spectrum is unchanged).
pub fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let mut h = a.clone();
    if n < 3 {
        return h;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for i in k + 1..n {
            v[i] /= vnorm;
        }
        // H <- (I - 2vv*) H
        for j in 0..n {
            let s: Complex64 = (k + 1..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            if s == ZERO {
                continue;
            }
            for i in k + 1..n {
                h[(i, j)] -= 2.0 * v[i] * s;
            }
        }
        // H <- H (I - 2vv*)
        for i in 0..n {
            let s: Complex64 = (k + 1..n).map(|j| h[(i, j)] * v[j]).sum();
            if s == ZERO {
                continue;
            }
            for j in k + 1..n {
                h[(i, j)] -= 2.0 * s * v[j].conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// Unitary `G = [[g11, g12], [g21, g22]]` with `G (a, b)^T = (r, 0)^T`.
fn givens(a: Complex64, b: Complex64) -> [Complex64; 4] {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        return [Complex64::new(1.0, 0.0), ZERO, ZERO, Complex64::new(1.0, 0.0)];
    }
    [a.conj() / r, b.conj() / r, -b / r, a / r]
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (m1, m2) = (mean + disc, mean - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Eigenvalues of an upper Hessenberg matrix.
pub fn hessenberg_eigenvalues(h: &CMatrix) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let mut h = h.clone();
    let mut eig = vec![ZERO; n];
    if n == 0 {
        return Ok(eig);
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut rot = Vec::with_capacity(n);
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let sub = h[(l, l - 1)].norm();
            if sub <= f64::EPSILON * scale || sub < f64::MIN_POSITIVE {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > ITERATIONS_PER_EIGENVALUE {
            return Err(Error::NoConvergence { iterations: total, dim: n });
        }
        let mu = if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            let sub = h[(hi, hi - 1)].norm() + if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { 0.0 };
            h[(hi, hi)] + Complex64::new(0.75 * sub, 0.4 * sub)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        rot.clear();
        for k in l..hi {
            let g = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = g[0] * x + g[1] * y;
                h[(k + 1, j)] = g[2] * x + g[3] * y;
            }
            h[(k + 1, k)] = ZERO;
            rot.push(g);
        }
        for (idx, g) in rot.iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 1).min(hi) {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * g[0].conj() + y * g[1].conj();
                h[(i, k + 1)] = x * g[2].conj() + y * g[3].conj();
            }
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
    Ok(eig)
}
