//! Operator representations with exact power formulas.

pub mod builtin;
pub mod functions;
mod model;

pub use functions::{analyze_real, FunctionRep, FunctionalRep, Hat, PowerTerm, SignAnalysis};
pub(crate) use model::complex_powu as powu;
pub use model::{
    DenseModel, DiagonalModel, Functional, ModelDescriptor, OperatorModel, RankKModel, ShiftModel, DEFAULT_TRUNCATION,
    DUALITY_TOL,
};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Dualities `<phi_i, f_j>` of a rank-k model.
pub fn duality_matrix(t: &OperatorModel) -> Result<CMatrix> {
    match t {
        OperatorModel::RankK(r) => Ok(r.duality_matrix().clone()),
        other => Err(Error::UnsupportedModel { op: "duality_matrix", model: other.kind_name() }),
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::lattice::{LatticeVector, NormKind};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn apply_examples() {
        let t = builtin::alternating_multiplication(4, NormKind::Ell1).unwrap();
        let e1 = LatticeVector::from_real(&[1.0, 0.0, 0.0, 0.0], NormKind::Ell1).unwrap();
        assert!(t.apply(&e1).unwrap().entries().iter().all(|z| z.norm() == 0.0));

        let s = OperatorModel::weighted_shift(vec![c(-1.0, 0.0); 3], NormKind::Ell2).unwrap();
        let e1 = LatticeVector::from_real(&[1.0, 0.0, 0.0], NormKind::Ell2).unwrap();
        assert_eq!(s.apply(&e1).unwrap().entries(), &[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);

        let r = builtin::rank2_continuous(201).unwrap();
        let ones = LatticeVector::from_real(&[1.0; 201], r.norm_kind().clone()).unwrap();
        let y = r.apply(&ones).unwrap();
        assert!(y.entries().iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-13));
    }

    #[test]
    fn rank_k_power_closed_form() {
        let t = builtin::rank2_continuous(201).unwrap();
        let OperatorModel::RankK(r) = &t else { panic!() };
        let g: Vec<f64> = r.nodes().iter().map(|x| (1.5 + x.sin()) * (1.0 + 0.3 * x)).collect();
        let x = LatticeVector::from_real(&g, t.norm_kind().clone()).unwrap();
        let coef = r.coefficients(x.entries());
        let y = t.power_apply(3, &x).unwrap();
        for (k, node) in r.nodes().iter().enumerate() {
            let expect = coef[0] + coef[1] * 0.25 * node;
            assert!((y.entries()[k] - expect).norm() < 1e-13);
        }
        assert!(t.power_apply(0, &x).is_err());
    }

    #[test]
    fn diagonal_power_and_dense_power() {
        let sym = vec![c(0.5, 0.5), c(-1.0, 0.0), c(0.0, 2.0)];
        let t = OperatorModel::diagonal(sym.clone(), NormKind::Ell2).unwrap();
        let x = LatticeVector::new(vec![c(1.0, 0.0), c(2.0, -1.0), c(0.5, 0.0)], NormKind::Ell2).unwrap();
        let y = t.power_apply(5, &x).unwrap();
        for k in 0..3 {
            assert!((y.entries()[k] - sym[k].powu(5) * x.entries()[k]).norm() < 1e-13);
        }
        let d = OperatorModel::dense(builtin::complex_diagonal(), NormKind::Ell1).unwrap();
        let x = LatticeVector::from_real(&[1.0, 1.0], NormKind::Ell1).unwrap();
        let y = d.power_apply(4, &x).unwrap();
        assert!((y.entries()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((y.entries()[1] - c(1.0 / 16.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pairing_examples() {
        let t = OperatorModel::dense(CMatrix::identity(2), NormKind::Ell2).unwrap();
        let e1 = LatticeVector::from_real(&[1.0, 0.0], NormKind::Ell2).unwrap();
        let f = Functional::vector(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(t.pairing(0, &e1, &f).unwrap(), c(1.0, 0.0));

        let n = 6;
        let d = builtin::alternating_multiplication(n, NormKind::Ell1).unwrap();
        let mut en = vec![0.0; n];
        en[n - 1] = 1.0;
        let x = LatticeVector::from_real(&en, NormKind::Ell1).unwrap();
        let xp = Functional::vector(en.iter().map(|&v| c(v, 0.0)).collect());
        for k in 1..=7u64 {
            let expect = (-1.0 + 1.0 / n as f64).powi(k as i32);
            assert!((d.pairing(k, &x, &xp).unwrap().re - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn lp_pairing_with_constant_function() {
        // <psi, T^n 1> = <phi_1, 1><psi, f_1> + 2^(1-n) <phi_2, 1><psi, f_2>, and <phi_2, 1> = 0
        let t = builtin::rank2_lp(2.0, 200).unwrap();
        let OperatorModel::RankK(r) = &t else { panic!() };
        let space = t.norm_kind().clone();
        let ones = LatticeVector::from_real(&vec![1.0; 200], space.clone()).unwrap();
        let coef = r.coefficients(ones.entries());
        assert!((coef[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(coef[1].norm() < 1e-12);
        let psi = Functional::from_rep(
            FunctionalRep::WeightedIntegral { weight: FunctionRep::Monomial { degree: 2 }, scale: c(1.0, 0.0) },
            &space,
        )
        .unwrap();
        let psi_f1 = psi.apply(&LatticeVector::from_real(&vec![1.0; 200], space).unwrap()).unwrap();
        for n in [1u64, 5, 20] {
            let v = t.pairing(n, &ones, &psi).unwrap();
            assert!((v - coef[0] * psi_f1).norm() < 1e-12);
            assert!(v.re > 0.0);
        }
    }

    #[test]
    fn adjoint_examples() {
        let d = OperatorModel::dense(builtin::complex_diagonal(), NormKind::Ell2).unwrap();
        let OperatorModel::Dense(a) = d.adjoint().unwrap() else { panic!() };
        assert_eq!(a.matrix[(1, 1)], c(0.0, -0.5));
        let sym = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 5.0]]).unwrap();
        let s = OperatorModel::dense(sym.clone(), NormKind::Ell2).unwrap();
        let OperatorModel::Dense(a) = s.adjoint().unwrap() else { panic!() };
        assert_eq!(a.matrix, sym);
        let r = builtin::rank2_continuous(11).unwrap();
        assert!(matches!(r.adjoint(), Err(Error::UnsupportedModel { .. })));
    }

    #[test]
    fn to_dense_examples() {
        let d = builtin::alternating_multiplication(50, NormKind::Ell1).unwrap();
        let m = d.to_dense(10);
        assert_eq!(m.dim(), 10);
        assert_eq!(m[(1, 1)], c(-0.5, 0.0));
        // Three-node grid (-1, 0, 1), trapezoid quadrature: the matrix has rank 2.
        let t = builtin::rank2_continuous(3).unwrap();
        let m = t.to_dense(3);
        assert_eq!(numeric_rank(&m), 2);
    }

    fn numeric_rank(m: &CMatrix) -> usize {
        // plain Gaussian row reduction
        let n = m.dim();
        let mut a = m.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..n).max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm())) else { break };
            if a[(p, col)].norm() < 1e-12 {
                continue;
            }
            for j in 0..n {
                let tmp = a[(rank, j)];
                a[(rank, j)] = a[(p, j)];
                a[(p, j)] = tmp;
            }
            for i in rank + 1..n {
                let f = a[(i, col)] / a[(rank, col)];
                for j in 0..n {
                    let v = a[(rank, j)];
                    a[(i, j)] -= f * v;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn non_diagonal_duality_rejected() {
        let err = OperatorModel::rank_k(
            vec![FunctionRep::Constant { c: c(1.0, 0.0) }, FunctionRep::Monomial { degree: 2 }],
            vec![
                FunctionalRep::WeightedIntegral {
                    weight: FunctionRep::Constant { c: c(1.0, 0.0) },
                    scale: c(0.5, 0.0),
                },
                FunctionalRep::PointCombination { points: vec![1.0], coefficients: vec![c(1.0, 0.0)] },
            ],
            NormKind::uniform_grid(-1.0, 1.0, 21),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonDiagonalDuality { .. }));
    }

    #[test]
    fn single_rank_one_duality() {
        let t = OperatorModel::rank_k(
            vec![FunctionRep::Constant { c: c(1.0, 0.0) }],
            vec![FunctionalRep::WeightedIntegral {
                weight: FunctionRep::Constant { c: c(1.0, 0.0) },
                scale: c(0.5, 0.0),
            }],
            NormKind::uniform_grid(-1.0, 1.0, 11),
        )
        .unwrap();
        let d = duality_matrix(&t).unwrap();
        assert_eq!(d.dim(), 1);
        assert!((d[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn descriptor_round_trip() {
        let t = builtin::rank2_lp(2.0, 20).unwrap();
        let text = serde_json::to_string(&ModelDescriptor::describe(&t)).unwrap();
        let back: ModelDescriptor = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), t);
    }
}
