use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::functions::{quadrature_weights, FunctionRep, FunctionalRep, Hat, PowerTerm};
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, NormKind};
use crate::matrix::{CMatrix, Lu};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Off-diagonal dualities above this modulus reject a rank-k model.
pub const DUALITY_TOL: f64 = 1e-10;

/// Default truncation for sequence-space models.
pub const DEFAULT_TRUNCATION: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorModel {
    Dense(DenseModel),
    RankK(RankKModel),
    Diagonal(DiagonalModel),
    WeightedShift(ShiftModel),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseModel {
    pub matrix: CMatrix,
    pub norm: NormKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalModel {
    pub symbol: Vec<Complex64>,
    pub norm: NormKind,
}

/// `(Tx)_{k+1} = w_k x_k`, `(Tx)_0 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftModel {
    pub weights: Vec<Complex64>,
    pub norm: NormKind,
}

/// `T = sum_i f_i (x) phi_i` on a sampled function space over `[-1, 1]`.
///
/// Sampled functionals are moment-corrected: each row is the plain
/// quadrature (or interpolation) row plus a correction in the span of the
/// weighted samples of `f_1..f_k`, chosen so that the rows reproduce the
/// closed-form dualities on the range of `T`. This keeps `apply`, `to_dense`
/// and the closed-form powers consistent even for singular `f_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankKModel {
    functions: Vec<FunctionRep>,
    functionals: Vec<FunctionalRep>,
    space: Arc<NormKind>,
    duality: CMatrix,
    samples: Vec<Vec<Complex64>>,
    rows: Vec<Vec<Complex64>>,
}

impl OperatorModel {
    pub fn dense(matrix: CMatrix, norm: NormKind) -> Result<Self> {
        norm.validate()?;
        check_node_count(&norm, matrix.dim())?;
        Ok(Self::Dense(DenseModel { matrix, norm }))
    }

    pub fn diagonal(symbol: Vec<Complex64>, norm: NormKind) -> Result<Self> {
        norm.validate()?;
        check_node_count(&norm, symbol.len())?;
        Ok(Self::Diagonal(DiagonalModel { symbol, norm }))
    }

    /// `weights` has one entry per coordinate; the last weight is dropped by
    /// truncation.
    pub fn weighted_shift(weights: Vec<Complex64>, norm: NormKind) -> Result<Self> {
        norm.validate()?;
        check_node_count(&norm, weights.len())?;
        Ok(Self::WeightedShift(ShiftModel { weights, norm }))
    }

    pub fn rank_k(functions: Vec<FunctionRep>, functionals: Vec<FunctionalRep>, space: NormKind) -> Result<Self> {
        Ok(Self::RankK(RankKModel::new(functions, functionals, space)?))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            OperatorModel::Dense(_) => "dense",
            OperatorModel::RankK(_) => "rank_k",
            OperatorModel::Diagonal(_) => "diagonal",
            OperatorModel::WeightedShift(_) => "weighted_shift",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            OperatorModel::Dense(d) => d.matrix.dim(),
            OperatorModel::RankK(r) => r.samples.first().map_or(0, Vec::len),
            OperatorModel::Diagonal(d) => d.symbol.len(),
            OperatorModel::WeightedShift(s) => s.weights.len(),
        }
    }

    pub fn norm_kind(&self) -> &NormKind {
        match self {
            OperatorModel::Dense(d) => &d.norm,
            OperatorModel::RankK(r) => &r.space,
            OperatorModel::Diagonal(d) => &d.norm,
            OperatorModel::WeightedShift(s) => &s.norm,
        }
    }

    pub fn apply(&self, x: &LatticeVector) -> Result<LatticeVector> {
        self.check_dim(x)?;
        let out = match self {
            OperatorModel::Dense(d) => d.matrix.mul_vec(x.entries()),
            OperatorModel::RankK(r) => r.combine(&r.coefficients(x.entries()), 1),
            OperatorModel::Diagonal(d) => d.symbol.iter().zip(x.entries()).map(|(s, v)| s * v).collect(),
            OperatorModel::WeightedShift(s) => {
                let n = s.weights.len();
                let mut out = vec![ZERO; n];
                for k in 0..n.saturating_sub(1) {
                    out[k + 1] = s.weights[k] * x.entries()[k];
                }
                out
            }
        };
        Ok(x.like(out))
    }

    /// `T^n x` for `n >= 1` (`n = 0` is accepted for every model except rank-k).
    pub fn power_apply(&self, n: u64, x: &LatticeVector) -> Result<LatticeVector> {
        self.check_dim(x)?;
        if n == 0 {
            return match self {
                OperatorModel::RankK(_) => Err(Error::InvalidArgument(
                    "rank-k powers start at n = 1; the identity is not of finite rank".into(),
                )),
                _ => Ok(x.clone()),
            };
        }
        let out = match self {
            OperatorModel::Dense(d) => d.matrix.pow(n).mul_vec(x.entries()),
            OperatorModel::RankK(r) => r.combine(&r.coefficients(x.entries()), n),
            OperatorModel::Diagonal(d) => {
                d.symbol.iter().zip(x.entries()).map(|(s, v)| complex_powu(*s, n) * v).collect()
            }
            OperatorModel::WeightedShift(s) => {
                let dim = s.weights.len();
                let mut out = vec![ZERO; dim];
                let n = n as usize;
                if n < dim {
                    for k in 0..dim - n {
                        let w: Complex64 = s.weights[k..k + n].iter().product();
                        out[k + n] = w * x.entries()[k];
                    }
                }
                out
            }
        };
        Ok(x.like(out))
    }

    /// `<x', T^n x>` as the bilinear sum `sum_k x'_k (T^n x)_k`, weighted by
    /// the quadrature weights in quadrature spaces.
    pub fn pairing(&self, n: u64, x: &LatticeVector, xprime: &Functional) -> Result<Complex64> {
        let y = if n == 0 { x.clone() } else { self.power_apply(n, x)? };
        xprime.apply(&y)
    }

    pub fn adjoint(&self) -> Result<Self> {
        match self {
            OperatorModel::Dense(d) => Ok(Self::Dense(DenseModel { matrix: d.matrix.adjoint(), norm: d.norm.clone() })),
            other => Err(Error::UnsupportedModel { op: "adjoint", model: other.kind_name() }),
        }
    }

    /// Matrix acting on samples (or truncated coordinates). Sequence models
    /// are truncated to `dimension`; grid-backed models use their own nodes.
    pub fn to_dense(&self, dimension: usize) -> CMatrix {
        match self {
            OperatorModel::Dense(d) => d.matrix.clone(),
            OperatorModel::RankK(r) => r.matrix(),
            OperatorModel::Diagonal(d) => {
                let m = dimension.min(d.symbol.len());
                CMatrix::diagonal(&d.symbol[..m])
            }
            OperatorModel::WeightedShift(s) => {
                let m = dimension.min(s.weights.len());
                let mut a = CMatrix::zeros(m);
                for k in 0..m.saturating_sub(1) {
                    a[(k + 1, k)] = s.weights[k];
                }
                a
            }
        }
    }

    pub fn matrix(&self) -> CMatrix {
        self.to_dense(self.dim())
    }

    /// Matrix of `T^n` on samples or coordinates (`n = 0` gives the identity).
    pub fn power_matrix(&self, n: u64) -> CMatrix {
        if n == 0 {
            return CMatrix::identity(self.dim());
        }
        match self {
            OperatorModel::Dense(d) => d.matrix.pow(n),
            OperatorModel::RankK(r) => r.power_matrix(n),
            OperatorModel::Diagonal(d) => {
                let sym: Vec<Complex64> = d.symbol.iter().map(|s| complex_powu(*s, n)).collect();
                CMatrix::diagonal(&sym)
            }
            OperatorModel::WeightedShift(_) => self.matrix().pow(n),
        }
    }

    fn check_dim(&self, x: &LatticeVector) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: x.dim() });
        }
        Ok(())
    }
}

fn check_node_count(norm: &NormKind, dim: usize) -> Result<()> {
    match norm.node_count() {
        Some(count) if count != dim => Err(Error::DimensionMismatch { expected: count, actual: dim }),
        _ => Ok(()),
    }
}

pub(crate) fn complex_powu(z: Complex64, n: u64) -> Complex64 {
    let mut result = ONE;
    let mut base = z;
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result *= base;
        }
        k >>= 1;
        base *= base;
    }
    result
}

impl RankKModel {
    pub fn new(functions: Vec<FunctionRep>, functionals: Vec<FunctionalRep>, space: NormKind) -> Result<Self> {
        space.validate()?;
        let k = functions.len();
        if k == 0 || functionals.len() != k {
            return Err(Error::InvalidArgument(format!(
                "rank-k model needs matching non-empty lists ({} functions, {} functionals)",
                k,
                functionals.len()
            )));
        }
        let (nodes, explicit) = match &space {
            NormKind::LpQuadrature { p, nodes, weights } => {
                for f in &functions {
                    f.check_lp_integrable(*p)?;
                }
                (nodes.clone(), Some(weights.clone()))
            }
            NormKind::GridSup { nodes } => (nodes.clone(), None),
            other => {
                return Err(Error::InvalidNorm(format!("rank-k models live on function spaces, not {}", other.label())))
            }
        };
        if nodes.first().is_some_and(|&a| a < -1.0) || nodes.last().is_some_and(|&b| b > 1.0) {
            return Err(Error::InvalidNorm("nodes must lie in [-1, 1]".into()));
        }
        for phi in &functionals {
            phi.validate()?;
        }
        let quad = quadrature_weights(&nodes, explicit.as_deref());
        let samples = functions.iter().map(|f| f.sample(&nodes)).collect::<Result<Vec<_>>>()?;
        if samples.iter().flatten().any(|z| !z.is_finite()) {
            return Err(Error::InvalidArgument("function samples must be finite".into()));
        }
        let raw_rows = functionals.iter().map(|phi| phi.sample_row(&nodes, &quad)).collect::<Result<Vec<_>>>()?;

        let mut duality = CMatrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                duality[(i, j)] = match functionals[i].pair_analytic(&functions[j])? {
                    Some(v) => v,
                    None => dot(&raw_rows[i], &samples[j]),
                };
            }
        }
        for i in 0..k {
            for j in 0..k {
                let m = duality[(i, j)].norm();
                if i != j && m > DUALITY_TOL {
                    return Err(Error::NonDiagonalDuality { row: i, col: j, modulus: m });
                }
            }
        }
        let rows = moment_corrected_rows(&raw_rows, &samples, &quad, &duality)?;
        Ok(Self { functions, functionals, space: Arc::new(space), duality, samples, rows })
    }

    pub fn functions(&self) -> &[FunctionRep] {
        &self.functions
    }

    pub fn functionals(&self) -> &[FunctionalRep] {
        &self.functionals
    }

    pub fn space(&self) -> &NormKind {
        &self.space
    }

    pub fn shared_space(&self) -> Arc<NormKind> {
        Arc::clone(&self.space)
    }

    pub fn nodes(&self) -> &[f64] {
        self.space.nodes().expect("function space")
    }

    pub fn rank(&self) -> usize {
        self.functions.len()
    }

    pub fn duality_matrix(&self) -> &CMatrix {
        &self.duality
    }

    /// Eigenvalue parameters `lambda_i = <phi_i, f_i>`.
    pub fn lambdas(&self) -> Vec<Complex64> {
        (0..self.rank()).map(|i| self.duality[(i, i)]).collect()
    }

    /// `<phi_i, x>` for sampled `x`.
    pub fn coefficients(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.rows.iter().map(|r| dot(r, x)).collect()
    }

    /// Closed-form coefficients against an analytic function.
    pub fn coefficients_analytic(&self, g: &FunctionRep) -> Result<Option<Vec<Complex64>>> {
        let mut out = Vec::with_capacity(self.rank());
        for phi in &self.functionals {
            match phi.pair_analytic(g)? {
                Some(v) => out.push(v),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    pub fn coefficients_hat(&self, hat: &Hat) -> Result<Vec<Complex64>> {
        self.functionals.iter().map(|phi| phi.pair_hat(hat)).collect()
    }

    /// Power-term expansion of `T^n g` given the coefficients `<phi_i, g>`.
    /// `None` when some `f_i` is tabulated.
    pub fn power_terms(&self, coefficients: &[Complex64], n: u64) -> Option<Vec<PowerTerm>> {
        let lambdas = self.lambdas();
        let mut out = Vec::new();
        for (i, f) in self.functions.iter().enumerate() {
            let kappa = coefficients[i] * complex_powu(lambdas[i], n.saturating_sub(1));
            for t in f.analytic_terms()? {
                out.push(PowerTerm { coef: t.coef * kappa, ..t });
            }
        }
        Some(out)
    }

    /// Value of `(T^n g)(x)` from the coefficients of `g`.
    pub fn power_value(&self, coefficients: &[Complex64], n: u64, x: f64) -> Result<Complex64> {
        let lambdas = self.lambdas();
        let mut s = ZERO;
        for (i, f) in self.functions.iter().enumerate() {
            let kappa = coefficients[i] * complex_powu(lambdas[i], n.saturating_sub(1));
            s += kappa * f.eval(x, self.nodes())?;
        }
        Ok(s)
    }

    /// `sum_i lambda_i^(n-1) c_i f_i` sampled on the nodes.
    fn combine(&self, coefficients: &[Complex64], n: u64) -> Vec<Complex64> {
        let lambdas = self.lambdas();
        let dim = self.samples[0].len();
        let mut out = vec![ZERO; dim];
        for (i, s) in self.samples.iter().enumerate() {
            let kappa = coefficients[i] * complex_powu(lambdas[i], n - 1);
            if kappa == ZERO {
                continue;
            }
            for (o, v) in out.iter_mut().zip(s) {
                *o += kappa * v;
            }
        }
        out
    }

    fn matrix(&self) -> CMatrix {
        self.power_matrix(1)
    }

    /// `sum_i lambda_i^(n-1) f_i r_i^T` for `n >= 1`.
    pub fn power_matrix(&self, n: u64) -> CMatrix {
        let dim = self.samples[0].len();
        let lambdas = self.lambdas();
        let mut a = CMatrix::zeros(dim);
        for ((f, r), lambda) in self.samples.iter().zip(&self.rows).zip(lambdas) {
            let kappa = complex_powu(lambda, n.saturating_sub(1));
            if kappa == ZERO {
                continue;
            }
            for i in 0..dim {
                let fi = f[i] * kappa;
                for j in 0..dim {
                    a[(i, j)] += fi * r[j];
                }
            }
        }
        a
    }

    /// Samples of `f_1..f_k` on the nodes.
    pub fn function_samples(&self) -> &[Vec<Complex64>] {
        &self.samples
    }

    /// Sampling rows of `phi_1..phi_k`.
    pub fn functional_rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn moment_corrected_rows(
    raw_rows: &[Vec<Complex64>],
    samples: &[Vec<Complex64>],
    quad: &[f64],
    duality: &CMatrix,
) -> Result<Vec<Vec<Complex64>>> {
    let k = samples.len();
    // u_j = quad * conj(f_j); gram[(j, l)] = u_j . f_l
    let u: Vec<Vec<Complex64>> =
        samples.iter().map(|f| f.iter().zip(quad).map(|(v, w)| v.conj() * w).collect()).collect();
    let gram = CMatrix::from_fn(k, |j, l| dot(&u[j], &samples[l]));
    let scale = gram.max_abs().max(f64::MIN_POSITIVE);
    let lu = Lu::factor(&gram.transpose(), 1e-13 * scale, ZERO)
        .map_err(|_| Error::InvalidArgument("functions are linearly dependent on the sampling nodes".into()))?;
    let mut rows = Vec::with_capacity(k);
    for (i, raw) in raw_rows.iter().enumerate() {
        // sum_j alpha_j gram[(j, l)] = duality[(i, l)] - raw . f_l
        let rhs: Vec<Complex64> = (0..k).map(|l| duality[(i, l)] - dot(raw, &samples[l])).collect();
        let alpha = lu.solve(&rhs);
        let mut row = raw.clone();
        for (a, uj) in alpha.iter().zip(&u) {
            for (r, v) in row.iter_mut().zip(uj) {
                *r += a * v;
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// A dual element: a vector paired bilinearly with samples, or a
/// rank-k-style functional evaluated through its sampling row.
#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    Vector(Vec<Complex64>),
    Rep { rep: FunctionalRep, row: Vec<Complex64> },
}

impl Functional {
    pub fn vector(entries: Vec<Complex64>) -> Self {
        Functional::Vector(entries)
    }

    /// Samples a functional representation on `space`.
    pub fn from_rep(rep: FunctionalRep, space: &NormKind) -> Result<Self> {
        rep.validate()?;
        let (nodes, explicit) = match space {
            NormKind::LpQuadrature { nodes, weights, .. } => (nodes.as_slice(), Some(weights.as_slice())),
            NormKind::GridSup { nodes } => (nodes.as_slice(), None),
            other => {
                return Err(Error::InvalidNorm(format!(
                    "functional representations need a function space, not {}",
                    other.label()
                )))
            }
        };
        let quad = quadrature_weights(nodes, explicit);
        let row = rep.sample_row(nodes, &quad)?;
        Ok(Functional::Rep { rep, row })
    }

    pub fn dim(&self) -> usize {
        match self {
            Functional::Vector(v) => v.len(),
            Functional::Rep { row, .. } => row.len(),
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        match self {
            Functional::Vector(v) => v,
            Functional::Rep { row, .. } => row,
        }
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.entries().iter().all(|z| z.re >= -tol && z.im.abs() <= tol)
    }

    /// Pairing with a vector. Quadrature spaces weight plain dual vectors by
    /// the quadrature weights, so that `Vector` entries are densities.
    pub fn apply(&self, y: &LatticeVector) -> Result<Complex64> {
        if y.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: y.dim() });
        }
        Ok(match (self, y.norm_kind()) {
            (Functional::Vector(v), NormKind::LpQuadrature { weights, .. }) => {
                v.iter().zip(y.entries()).zip(weights).map(|((a, b), w)| a * b * w).sum()
            }
            _ => dot(self.entries(), y.entries()),
        })
    }
}

/// Serializable description of an operator model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelDescriptor {
    Dense { n: usize, entries: Vec<[f64; 2]>, norm: NormKind },
    RankK { functions: Vec<FunctionRep>, functionals: Vec<FunctionalRep>, space: NormKind },
    Diagonal { symbol: Vec<Complex64>, norm: NormKind },
    WeightedShift { weights: Vec<Complex64>, norm: NormKind },
}

impl ModelDescriptor {
    pub fn build(&self) -> Result<OperatorModel> {
        match self {
            ModelDescriptor::Dense { n, entries, norm } => {
                let m = CMatrix::from_json(&crate::matrix::MatrixJson { n: *n, entries: entries.clone() })?;
                OperatorModel::dense(m, norm.clone())
            }
            ModelDescriptor::RankK { functions, functionals, space } => {
                OperatorModel::rank_k(functions.clone(), functionals.clone(), space.clone())
            }
            ModelDescriptor::Diagonal { symbol, norm } => OperatorModel::diagonal(symbol.clone(), norm.clone()),
            ModelDescriptor::WeightedShift { weights, norm } => {
                OperatorModel::weighted_shift(weights.clone(), norm.clone())
            }
        }
    }

    pub fn describe(model: &OperatorModel) -> Self {
        match model {
            OperatorModel::Dense(d) => {
                let json = d.matrix.to_json();
                ModelDescriptor::Dense { n: json.n, entries: json.entries, norm: d.norm.clone() }
            }
            OperatorModel::RankK(r) => ModelDescriptor::RankK {
                functions: r.functions.clone(),
                functionals: r.functionals.clone(),
                space: (*r.space).clone(),
            },
            OperatorModel::Diagonal(d) => ModelDescriptor::Diagonal { symbol: d.symbol.clone(), norm: d.norm.clone() },
            OperatorModel::WeightedShift(s) => {
                ModelDescriptor::WeightedShift { weights: s.weights.clone(), norm: s.norm.clone() }
            }
        }
    }
}
