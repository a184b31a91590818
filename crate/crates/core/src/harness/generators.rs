//! Seeded random instances.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::seeded_rng;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::operators::builtin::{cycle_permutation, kronecker};
use crate::spectral::spectral_norm;

/// Largest dimension a generator accepts.
pub const MAX_GENERATED_DIM: usize = 64;
const ATTEMPTS: u64 = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    EventuallyPositive {
        dim: usize,
        gap: f64,
        seed: u64,
    },
    PositiveRandom {
        dim: usize,
        seed: u64,
    },
    CyclicBlock {
        k: usize,
        inner_dim: usize,
        seed: u64,
    },
    /// A built-in catalog entry by name.
    Example {
        name: String,
    },
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        let dim_ok = |d: usize, what: &str| {
            if d == 0 || d > MAX_GENERATED_DIM {
                Err(Error::Schema(format!("{what} = {d} must lie in 1..={MAX_GENERATED_DIM}")))
            } else {
                Ok(())
            }
        };
        match self {
            GeneratorSpec::EventuallyPositive { dim, gap, .. } => {
                dim_ok(*dim, "dim")?;
                if *dim < 2 {
                    return Err(Error::Schema("dim must be at least 2".into()));
                }
                if !(*gap > 0.0 && *gap < 1.0) {
                    return Err(Error::Schema(format!("gap = {gap} must lie in (0, 1)")));
                }
                Ok(())
            }
            GeneratorSpec::PositiveRandom { dim, .. } => dim_ok(*dim, "dim"),
            GeneratorSpec::CyclicBlock { k, inner_dim, .. } => {
                if *k == 0 {
                    return Err(Error::Schema("k must be positive".into()));
                }
                dim_ok(*inner_dim, "inner_dim")?;
                dim_ok(k * inner_dim, "k * inner_dim")
            }
            GeneratorSpec::Example { .. } => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GeneratorSpec::EventuallyPositive { dim, gap, seed } => {
                format!("eventually-positive(dim={dim},gap={gap},seed={seed})")
            }
            GeneratorSpec::PositiveRandom { dim, seed } => format!("positive-random(dim={dim},seed={seed})"),
            GeneratorSpec::CyclicBlock { k, inner_dim, seed } => {
                format!("cyclic-block(k={k},inner_dim={inner_dim},seed={seed})")
            }
            GeneratorSpec::Example { name } => name.clone(),
        }
    }
}

/// `A = P + Q` with `P = v w^T / (w^T v)` strictly positive and `PQ = QP = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventuallyPositive {
    pub matrix: CMatrix,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub projection: CMatrix,
    /// `|Q|_2`, at most `1 - gap`.
    pub q_norm: f64,
    /// Least `n` with `|Q|_2^n < min P_ij`; every power from there on is
    /// entrywise strictly positive.
    pub n0_bound: u64,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn make_eventually_positive(dim: usize, gap: f64, seed: u64) -> Result<EventuallyPositive> {
    GeneratorSpec::EventuallyPositive { dim, gap, seed }.validate()?;
    for attempt in 0..ATTEMPTS {
        let mut rng = seeded_rng(seed, attempt);
        let v: Vec<f64> = (0..dim).map(|_| 0.5 + rng.random::<f64>()).collect();
        let w: Vec<f64> = (0..dim).map(|_| 0.5 + rng.random::<f64>()).collect();
        let wv: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let p = CMatrix::from_fn(dim, |i, j| real(v[i] * w[j] / wv));
        let comp = CMatrix::identity(dim).sub(&p);
        let b = CMatrix::from_row_major(dim, (0..dim * dim).map(|_| real(2.0 * rng.random::<f64>() - 1.0)).collect())?;
        let q0 = comp.matmul(&b).matmul(&comp);
        let q0_norm = spectral_norm(&q0);
        if !(q0_norm > 1e-8) {
            continue;
        }
        let q = q0.scale(real((1.0 - gap) / q0_norm));
        let q_norm = spectral_norm(&q);
        let min_p = p.as_slice().iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let n0_bound = if q_norm < min_p { 0 } else { (min_p.ln() / q_norm.ln()).floor() as u64 + 1 };
        return Ok(EventuallyPositive { matrix: p.add(&q), v, w, projection: p, q_norm, n0_bound });
    }
    Err(Error::Generator(format!("{ATTEMPTS} degenerate draws for dim {dim}, seed {seed}")))
}

/// Entries uniform on `(0, 1]`.
pub fn positive_random(dim: usize, seed: u64) -> Result<CMatrix> {
    GeneratorSpec::PositiveRandom { dim, seed }.validate()?;
    let mut rng = seeded_rng(seed, 0);
    let data = (0..dim * dim).map(|_| real(1.0 - rng.random::<f64>())).collect();
    CMatrix::from_row_major(dim, data)
}

/// `C_k (x) B` with `C_k` the cyclic permutation and `B` strictly positive,
/// so the peripheral spectrum is `spr(B)` times the `k`-th roots of unity.
pub fn cyclic_block(k: usize, inner_dim: usize, seed: u64) -> Result<CMatrix> {
    GeneratorSpec::CyclicBlock { k, inner_dim, seed }.validate()?;
    Ok(kronecker(&cycle_permutation(k), &positive_random(inner_dim, seed)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_and_complement_annihilate() {
        for seed in 0..5 {
            let g = make_eventually_positive(6, 0.4, seed).unwrap();
            let q = g.matrix.sub(&g.projection);
            assert!(g.projection.matmul(&q).max_abs() < 1e-12);
            assert!(q.matmul(&g.projection).max_abs() < 1e-12);
            assert!(g.q_norm <= 0.6 + 1e-12);
            // the bound is sharp enough that the power there is positive
            let pw = g.matrix.pow(g.n0_bound);
            assert!(pw.as_slice().iter().all(|z| z.re > 0.0));
        }
    }

    #[test]
    fn specs_are_validated() {
        assert!(make_eventually_positive(3, 1.0, 0).is_err());
        assert!(make_eventually_positive(1, 0.5, 0).is_err());
        assert!(positive_random(65, 0).is_err());
        assert!(cyclic_block(8, 9, 0).is_err());
        let spec: GeneratorSpec =
            serde_json::from_str(r#"{"kind":"cyclic_block","k":3,"inner_dim":2,"seed":1}"#).unwrap();
        assert_eq!(spec, GeneratorSpec::CyclicBlock { k: 3, inner_dim: 2, seed: 1 });
        assert!(serde_json::from_str::<GeneratorSpec>(r#"{"kind":"positive_random","dim":3,"seed":1,"x":0}"#).is_err());
    }

    #[test]
    fn deterministic() {
        assert_eq!(make_eventually_positive(5, 0.3, 9).unwrap(), make_eventually_positive(5, 0.3, 9).unwrap());
        assert_ne!(positive_random(4, 1).unwrap(), positive_random(4, 2).unwrap());
    }
}
