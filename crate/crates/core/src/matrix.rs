//! Dense square complex matrices, row-major, and the JSON wire format
//! `{"n": int, "entries": [[re, im], ...]}`.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub entries: Vec<[f64; 2]>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, actual: data.len() });
        }
        Ok(Self { n, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: row.len() });
            }
            data.extend(row.iter().map(|&v| Complex64::new(v, 0.0)));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| z * alpha).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    /// `lambda I - self`
    pub fn shifted(&self, lambda: Complex64) -> Self {
        let mut m = self.scale(-ONE);
        for i in 0..self.n {
            m[(i, i)] += lambda;
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        (0..self.n).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// `self^k` by repeated squaring; `k = 0` gives the identity.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut result = Self::identity(self.n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.matmul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base);
            }
        }
        result
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson { n: self.n, entries: self.data.iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        if json.entries.len() != json.n * json.n {
            return Err(Error::Schema(format!(
                "matrix with n = {} needs {} entries, found {}",
                json.n,
                json.n * json.n,
                json.entries.len()
            )));
        }
        if json.entries.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Schema("matrix entries must be finite".into()));
        }
        Ok(Self { n: json.n, data: json.entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect() })
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    min_pivot: f64,
}

impl Lu {
    /// Fails with [`Error::SingularResolvent`] (carrying `label`) when a pivot
    /// falls below `threshold`.
    pub fn factor(a: &CMatrix, threshold: f64, label: Complex64) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let (p, pmag) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            if pmag <= threshold || !pmag.is_finite() {
                return Err(Error::SingularResolvent { lambda: label });
            }
            min_pivot = min_pivot.min(pmag);
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Self { lu, perm, min_pivot })
    }

    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.dim();
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * y[j];
            }
            y[i] = s / self.lu[(i, i)];
        }
        y
    }

    pub fn inverse(&self) -> CMatrix {
        let n = self.lu.dim();
        let mut inv = CMatrix::zeros(n);
        let mut e = vec![ZERO; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = ZERO);
            e[j] = ONE;
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.lu.dim();
        let mut det: Complex64 = (0..n).map(|i| self.lu[(i, i)]).product();
        // parity of the permutation
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.perm[i];
                len += 1;
            }
            if len % 2 == 0 {
                det = -det;
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_matches_repeated_product() {
        let a = CMatrix::from_rows(&[
            vec![Complex64::new(0.5, 0.1), Complex64::new(-0.2, 0.0)],
            vec![Complex64::new(0.3, -0.4), Complex64::new(0.9, 0.2)],
        ])
        .unwrap();
        let mut direct = CMatrix::identity(2);
        for _ in 0..7 {
            direct = direct.matmul(&a);
        }
        assert!(a.pow(7).sub(&direct).frobenius_norm() < 1e-14);
        assert_eq!(a.pow(0), CMatrix::identity(2));
    }

    #[test]
    fn lu_solves_and_inverts() {
        let a = CMatrix::from_real_rows(&[&[0.0, 2.0, 1.0], &[1.0, 1.0, 0.0], &[3.0, 0.0, 1.0]]).unwrap();
        let lu = Lu::factor(&a, 1e-14, ONE).unwrap();
        let b = vec![ONE, Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0)];
        let x = lu.solve(&b);
        let r = a.mul_vec(&x);
        for (ri, bi) in r.iter().zip(&b) {
            assert!((ri - bi).norm() < 1e-14);
        }
        assert!(a.matmul(&lu.inverse()).sub(&CMatrix::identity(3)).frobenius_norm() < 1e-14);
        // det = 0*(1-0) - 2*(1-0) + 1*(0-3) = -5
        assert!((lu.determinant() - Complex64::new(-5.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn singular_factorization_reports_label() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        let label = Complex64::new(3.0, 0.0);
        assert_eq!(Lu::factor(&a, 1e-12, label).unwrap_err(), Error::SingularResolvent { lambda: label });
    }

    #[test]
    fn json_round_trip_and_validation() {
        let a = CMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.25, 0.5), Complex64::new(-2.0, 0.0)],
        ])
        .unwrap();
        let text = serde_json::to_string(&a.to_json()).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(CMatrix::from_json(&back).unwrap(), a);
        let short = MatrixJson { n: 2, entries: vec![[1.0, 0.0]] };
        assert!(CMatrix::from_json(&short).is_err());
        assert!(serde_json::from_str::<MatrixJson>(r#"{"n":1,"entries":[[1,0]],"x":2}"#).is_err());
    }
}
