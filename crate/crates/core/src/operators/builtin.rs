//! Concrete models used throughout the catalog and the acceptance suite.

use num_complex::Complex64;

use super::functions::{FunctionRep, FunctionalRep, Hat};
use super::model::OperatorModel;
use crate::error::Result;
use crate::lattice::NormKind;
use crate::matrix::CMatrix;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `T = 1 (x) phi_1 + x (x) phi_2` on a sampled `C([-1, 1])`, with
/// `phi_1 g = 1/2 int g` and `phi_2 g = (g(1) - g(-1)) / 4`.
/// Individually but not uniformly eventually positive.
pub fn rank2_continuous(grid_nodes: usize) -> Result<OperatorModel> {
    OperatorModel::rank_k(
        vec![FunctionRep::Constant { c: c(1.0) }, FunctionRep::Monomial { degree: 1 }],
        vec![
            FunctionalRep::WeightedIntegral { weight: FunctionRep::Constant { c: c(1.0) }, scale: c(0.5) },
            FunctionalRep::PointCombination { points: vec![-1.0, 1.0], coefficients: vec![c(-0.25), c(0.25)] },
        ],
        NormKind::uniform_grid(-1.0, 1.0, grid_nodes),
    )
}

/// Scale of the signed functional that makes `<phi_2, f_2> = 1/2` when
/// `f_2 = sgn(x)|x|^(-1/(2p))`: `c * 2 int_0^1 x^(-1/(2p)) dx = 1/2`.
pub fn signed_functional_scale(p: f64) -> f64 {
    (2.0 * p - 1.0) / (8.0 * p)
}

/// `T = 1 (x) phi_1 + f_2 (x) phi_2` on a midpoint-quadrature `L^p(-1, 1)`,
/// with `f_2 = sgn(x)|x|^(-1/(2p))` and `phi_2 g = c int sgn(x) g`.
/// Weakly but not individually eventually positive.
pub fn rank2_lp(p: f64, cells: usize) -> Result<OperatorModel> {
    OperatorModel::rank_k(
        vec![FunctionRep::Constant { c: c(1.0) }, FunctionRep::SignedPower { a: -1.0 / (2.0 * p) }],
        vec![
            FunctionalRep::WeightedIntegral { weight: FunctionRep::Constant { c: c(1.0) }, scale: c(0.5) },
            FunctionalRep::WeightedIntegral {
                weight: FunctionRep::SignedPower { a: 0.0 },
                scale: c(signed_functional_scale(p)),
            },
        ],
        NormKind::midpoint(p, -1.0, 1.0, cells),
    )
}

/// Positive test function with `<phi_2, g> > 0` for [`rank2_lp`]: `g = 1 + x`.
pub fn rank2_lp_test_function() -> FunctionRep {
    FunctionRep::Combination {
        terms: vec![(c(1.0), FunctionRep::Constant { c: c(1.0) }), (c(1.0), FunctionRep::Monomial { degree: 1 })],
    }
}

/// Hat with peak 1 at `-1`, vanishing at `1`, of integral `eps / 2`.
pub fn left_hat(eps: f64) -> Hat {
    Hat { peak: -1.0, width: eps }
}

/// Point where `a + 2^(1-n) b f_2(x)` equals `-a`:
/// `x_n = -(b / (2 a 2^(n-1)))^(2p)`.
pub fn singular_witness_point(a: f64, b: f64, n: u64, p: f64) -> f64 {
    -(b / (2.0 * a * 2f64.powi(n as i32 - 1))).powf(2.0 * p)
}

/// Multiplication by `-1 + 1/j`, `j = 1..=n`.
pub fn alternating_multiplication(n: usize, norm: NormKind) -> Result<OperatorModel> {
    let symbol = (1..=n).map(|j| c(-1.0 + 1.0 / j as f64)).collect();
    OperatorModel::diagonal(symbol, norm)
}

/// `-1` times the right shift, truncated to `n` coordinates (nilpotent).
pub fn negated_shift(n: usize, norm: NormKind) -> Result<OperatorModel> {
    OperatorModel::weighted_shift(vec![c(-1.0); n], norm)
}

/// `diag(1, i/2)`
pub fn complex_diagonal() -> CMatrix {
    CMatrix::diagonal(&[c(1.0), Complex64::new(0.0, 0.5)])
}

/// Cyclic permutation `e_j -> e_{j+1 mod k}`.
pub fn cycle_permutation(k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(k);
    for j in 0..k {
        m[((j + 1) % k, j)] = c(1.0);
    }
    m
}

/// Kronecker product `a (x) b`.
pub fn kronecker(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (n, m) = (a.dim(), b.dim());
    CMatrix::from_fn(n * m, |i, j| a[(i / m, j / m)] * b[(i % m, j % m)])
}

/// Block diagonal `a (+) b`.
pub fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (n, m) = (a.dim(), b.dim());
    CMatrix::from_fn(n + m, |i, j| {
        if i < n && j < n {
            a[(i, j)]
        } else if i >= n && j >= n {
            b[(i - n, j - n)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
