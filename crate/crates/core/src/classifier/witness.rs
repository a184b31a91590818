//! Independent re-evaluation of refutation witnesses.

use num_complex::Complex64;

use super::*;
use crate::lattice::entry_cone_gap;

fn rank_k<'a>(t: &'a OperatorModel, kind: &str) -> Result<&'a RankKModel> {
    match t {
        OperatorModel::RankK(r) => Ok(r),
        other => {
            Err(Error::InvalidArgument(format!("{kind} witnesses need a rank-k model, not {}", other.kind_name())))
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300)
}

/// Re-evaluates every sample of `w` on `t` and reports whether each one is
/// still a violation (and, for `Decay`, still matches its recorded value).
pub fn recheck_witness(t: &OperatorModel, w: &Witness, tol: f64) -> Result<bool> {
    match w {
        Witness::HatFamily { peak, evaluation_point, samples } => {
            let r = rank_k(t, "hat-family")?;
            for s in samples {
                let coef = r.coefficients_hat(&Hat { peak: *peak, width: s.eps })?;
                let v = r.power_value(&coef, s.n, *evaluation_point)?;
                if !(v.re < 0.0 && close(v.re, s.value)) {
                    return Ok(false);
                }
            }
            Ok(!samples.is_empty())
        }
        Witness::AnalyticPoints { coefficients, points, .. } => {
            let r = rank_k(t, "analytic-point")?;
            for p in points {
                let v = r.power_value(coefficients, p.n, p.x)?;
                if !(v.re < 0.0 && close(v.re, p.value)) {
                    return Ok(false);
                }
            }
            Ok(!points.is_empty())
        }
        Witness::Orbit { vector, functional, row, samples, .. } => {
            let x = LatticeVector::new(vector.clone(), t.norm_kind().clone())?;
            let f = functional.clone().map(Functional::vector);
            for s in samples {
                let y = t.power_apply(s.n, &x)?;
                let scale = norm_value(&y).max(f64::MIN_POSITIVE);
                let violated = match (&f, row) {
                    (Some(f), _) => {
                        let p = f.apply(&y)?;
                        entry_cone_gap(p) > tol * scale
                    }
                    (None, Some(k)) => {
                        // a matrix entry, compared against the size of the power
                        let z: Complex64 = y.entries()[*k];
                        entry_cone_gap(z) > tol * y.entries().iter().map(|v| v.norm()).fold(0.0, f64::max)
                    }
                    (None, None) => cone_distance(&y) > tol * scale,
                };
                if !violated {
                    return Ok(false);
                }
            }
            Ok(!samples.is_empty())
        }
        Witness::Decay { vector, functional, tail } => {
            let spr = model_spectral_radius(t)?;
            if spr <= 0.0 {
                return Err(Error::NotClassifiable { spr });
            }
            let x = LatticeVector::new(vector.clone(), t.norm_kind().clone())?;
            let size = norm_value(&x);
            let f = functional.clone().map(Functional::vector);
            for &(n, recorded) in tail {
                let y = t.power_apply(n, &x)?.scale(Complex64::new(spr.powf(-(n as f64)), 0.0));
                let d = match &f {
                    Some(f) => entry_cone_gap(f.apply(&y)?),
                    None => cone_distance(&y) / size,
                };
                if !(close(d, recorded) || (d - recorded).abs() <= tol) {
                    return Ok(false);
                }
            }
            let max = tail.iter().map(|p| p.1).fold(0.0, f64::max);
            Ok(max >= REFUTE_FACTOR * tol)
        }
    }
}
