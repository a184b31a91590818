//! Where an operator sits among the six eventual / asymptotic positivity
//! notions, with witnesses for every refutation.

mod asymptotic;
mod eventual;
mod witness;

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{cone_distance, norm_value, LatticeVector, NormKind};
use crate::matrix::CMatrix;
use crate::operators::{Functional, Hat, OperatorModel, RankKModel};

pub use asymptotic::{
    classify_asymptotic, delta_n, delta_sequence, model_spectral_radius, AsymptoticVerdicts, DeltaEstimate,
    DeltaStrategy,
};
pub use eventual::{individual_eventual, uniform_eventual, weak_eventual};
pub use witness::recheck_witness;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_EVENTUAL_HORIZON: u64 = 30;
pub const DEFAULT_ASYMPTOTIC_HORIZON: u64 = 200;
/// Random members of the canonical test set.
pub const CANONICAL_RANDOM: usize = 16;
/// A refuting tail must stay at least this many tolerances away from zero.
pub const REFUTE_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Notion {
    UniformEventual,
    IndividualEventual,
    WeakEventual,
    UniformAsymptotic,
    IndividualAsymptotic,
    WeakAsymptotic,
}

impl Notion {
    pub const ALL: [Notion; 6] = [
        Notion::UniformEventual,
        Notion::IndividualEventual,
        Notion::WeakEventual,
        Notion::UniformAsymptotic,
        Notion::IndividualAsymptotic,
        Notion::WeakAsymptotic,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Notion::UniformEventual => "uniform-eventual",
            Notion::IndividualEventual => "individual-eventual",
            Notion::WeakEventual => "weak-eventual",
            Notion::UniformAsymptotic => "uniform-asymptotic",
            Notion::IndividualAsymptotic => "individual-asymptotic",
            Notion::WeakAsymptotic => "weak-asymptotic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case", deny_unknown_fields)]
pub enum Status {
    Confirmed { n0: u64 },
    Refuted { witness: Witness },
    Undetermined { horizon: u64 },
}

impl Status {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, Status::Confirmed { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Status::Refuted { .. })
    }

    pub fn n0(&self) -> Option<u64> {
        match self {
            Status::Confirmed { n0 } => Some(*n0),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Status::Refuted { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Confirmed { .. } => "confirmed",
            Status::Refuted { .. } => "refuted",
            Status::Undetermined { .. } => "undetermined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HatSample {
    pub n: u64,
    pub eps: f64,
    /// `(T^n g_eps)(evaluation_point)`
    pub value: f64,
    /// Value with the hat width halved; a structural violation does not shrink.
    pub value_half_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSample {
    pub n: u64,
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSample {
    pub n: u64,
    /// The pairing (weak) or the worst entry (individual, uniform).
    pub value: Complex64,
    /// Distance of `value` to `[0, inf)`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Witness {
    /// Hats `g_eps` at `peak` with `eps = 2^-(n+1)`, evaluated in closed form.
    HatFamily { peak: f64, evaluation_point: f64, samples: Vec<HatSample> },
    /// Analytic negativity points of `T^n x` for one test vector.
    AnalyticPoints { test_index: usize, coefficients: Vec<Complex64>, points: Vec<PointSample> },
    /// Violations along an orbit `T^n x` (or pairing `<x', T^n x>`), indexed
    /// by matrix coordinates when `row` is given.
    Orbit {
        vector: Vec<Complex64>,
        functional: Option<Vec<Complex64>>,
        row: Option<usize>,
        samples: Vec<OrbitSample>,
        reason: String,
    },
    /// Rescaled orbit that keeps a fixed distance from the cone.
    Decay { vector: Vec<Complex64>, functional: Option<Vec<Complex64>>, tail: Vec<(u64, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositivityVerdict {
    pub notion: Notion,
    pub status: Status,
    /// The d+ sequence behind the verdict, indexed by `n`.
    pub decay: Vec<f64>,
    pub tolerance: f64,
    pub horizon: u64,
    /// Per-test `n0` (individual / weak notions).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_test_n0: Vec<Option<u64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl PositivityVerdict {
    fn new(notion: Notion, status: Status, decay: Vec<f64>, tolerance: f64, horizon: u64) -> Self {
        Self { notion, status, decay, tolerance, horizon, per_test_n0: Vec::new(), notes: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    BasisVectors,
    ZeroOneVectors,
    SeededRandom,
    UserSupplied,
}

/// Finite stand-in for the positive cone and the positive dual cone.
#[derive(Debug, Clone)]
pub struct ConeTestSet {
    pub vectors: Vec<LatticeVector>,
    pub vector_provenance: Vec<Provenance>,
    pub functionals: Vec<Functional>,
    pub functional_provenance: Vec<Provenance>,
}

impl ConeTestSet {
    /// Basis vectors, the all-ones vector and [`CANONICAL_RANDOM`] seeded
    /// random positive vectors, each normalized (functionals in the dual norm).
    pub fn canonical(norm: &NormKind, dim: usize, seed: u64) -> Result<Self> {
        let mut set = Self::empty();
        let shared = Arc::new(norm.clone());
        let mut unit = vec![0.0; dim];
        for j in 0..dim {
            unit[j] = 1.0;
            set.push_generated(&shared, &unit, Provenance::BasisVectors)?;
            unit[j] = 0.0;
        }
        set.push_generated(&shared, &vec![1.0; dim], Provenance::ZeroOneVectors)?;
        let random = Self::random(norm, dim, CANONICAL_RANDOM, seed)?;
        set.extend(random);
        Ok(set)
    }

    /// `count` seeded random positive vectors and functionals, entries
    /// uniform on `(0, 1]` before normalization. Member `k` uses stream `k`.
    pub fn random(norm: &NormKind, dim: usize, count: usize, seed: u64) -> Result<Self> {
        let mut set = Self::empty();
        let shared = Arc::new(norm.clone());
        for k in 0..count {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let v: Vec<f64> = (0..dim).map(|_| 1.0 - rng.random::<f64>()).collect();
            let f: Vec<f64> = (0..dim).map(|_| 1.0 - rng.random::<f64>()).collect();
            set.push_vector(&shared, &v, Provenance::SeededRandom)?;
            set.push_functional(norm, &f, Provenance::SeededRandom)?;
        }
        Ok(set)
    }

    /// User vectors (normalized) and functionals (normalized in the dual norm).
    pub fn user(norm: &NormKind, vectors: &[Vec<f64>], functionals: &[Vec<f64>]) -> Result<Self> {
        let mut set = Self::empty();
        let shared = Arc::new(norm.clone());
        for v in vectors {
            set.push_vector(&shared, v, Provenance::UserSupplied)?;
        }
        for f in functionals {
            set.push_functional(norm, f, Provenance::UserSupplied)?;
        }
        Ok(set)
    }

    pub fn empty() -> Self {
        Self {
            vectors: Vec::new(),
            vector_provenance: Vec::new(),
            functionals: Vec::new(),
            functional_provenance: Vec::new(),
        }
    }

    pub fn extend(&mut self, other: ConeTestSet) {
        self.vectors.extend(other.vectors);
        self.vector_provenance.extend(other.vector_provenance);
        self.functionals.extend(other.functionals);
        self.functional_provenance.extend(other.functional_provenance);
    }

    pub fn dim(&self) -> Option<usize> {
        self.vectors.first().map(LatticeVector::dim)
    }

    fn push_generated(&mut self, norm: &Arc<NormKind>, v: &[f64], prov: Provenance) -> Result<()> {
        self.push_vector(norm, v, prov)?;
        self.push_functional(norm, v, prov)
    }

    fn push_vector(&mut self, norm: &Arc<NormKind>, v: &[f64], prov: Provenance) -> Result<()> {
        if v.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidArgument("test vectors must be positive".into()));
        }
        let x = LatticeVector::with_shared_norm(v.iter().map(|&t| Complex64::new(t, 0.0)).collect(), Arc::clone(norm))?;
        let size = norm_value(&x);
        if size == 0.0 {
            return Err(Error::InvalidArgument("test vectors must be non-zero".into()));
        }
        self.vectors.push(x.scale(Complex64::new(1.0 / size, 0.0)));
        self.vector_provenance.push(prov);
        Ok(())
    }

    fn push_functional(&mut self, norm: &NormKind, f: &[f64], prov: Provenance) -> Result<()> {
        if f.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidArgument("test functionals must be positive".into()));
        }
        let size = dual_norm(norm, f);
        if size == 0.0 {
            return Err(Error::InvalidArgument("test functionals must be non-zero".into()));
        }
        self.functionals.push(Functional::vector(f.iter().map(|&t| Complex64::new(t / size, 0.0)).collect()));
        self.functional_provenance.push(prov);
        Ok(())
    }
}

/// Norm of a dual vector under the pairing used by [`Functional::apply`].
pub fn dual_norm(norm: &NormKind, f: &[f64]) -> f64 {
    let abs = f.iter().map(|t| t.abs());
    match norm {
        NormKind::Ell1 => abs.fold(0.0, f64::max),
        NormKind::Ell2 => abs.map(|t| t * t).sum::<f64>().sqrt(),
        NormKind::EllInf | NormKind::GridSup { .. } => abs.sum(),
        NormKind::LpQuadrature { p, weights, .. } => {
            if *p == 1.0 {
                abs.fold(0.0, f64::max)
            } else {
                let q = *p / (*p - 1.0);
                abs.zip(weights).map(|(t, w)| w * t.powf(q)).sum::<f64>().powf(1.0 / q)
            }
        }
    }
}

/// Entrywise test `Re >= -tol`, `|Im| <= tol` on a matrix.
pub fn matrix_is_positive(m: &CMatrix, tol: f64) -> bool {
    m.as_slice().iter().all(|z| z.re >= -tol && z.im.abs() <= tol)
}

/// Worst entry (largest cone gap) of a matrix: `(row, col, value, gap)`.
pub(crate) fn worst_entry(m: &CMatrix) -> (usize, usize, Complex64, f64) {
    let n = m.dim();
    let mut best = (0, 0, Complex64::new(0.0, 0.0), 0.0);
    for i in 0..n {
        for j in 0..n {
            let g = crate::lattice::entry_cone_gap(m[(i, j)]);
            if g > best.3 {
                best = (i, j, m[(i, j)], g);
            }
        }
    }
    best
}

/// Candidate hat peaks for the analytic witness search: the point masses
/// of every functional and both endpoints, in ascending order.
pub(crate) fn hat_peaks(r: &RankKModel) -> Vec<f64> {
    let mut peaks: Vec<f64> = vec![-1.0, 1.0];
    for phi in r.functionals() {
        peaks.extend(phi.point_masses().into_iter().map(|(p, _)| p));
    }
    peaks.sort_by(f64::total_cmp);
    peaks.dedup();
    peaks
}

/// Relative round-off floor for closed-form values.
pub(crate) const ANALYTIC_GUARD: f64 = 1e3 * f64::EPSILON;

/// Most negative closed-form value of `T^n g_eps` over the hats at `peaks`,
/// as `(peak, point, value, scale)`, for the first peak that goes negative.
pub(crate) fn hat_violation(r: &RankKModel, peaks: &[f64], n: u64, eps: f64) -> Result<Option<(f64, f64, f64)>> {
    for &peak in peaks {
        let hat = Hat { peak, width: eps };
        let coef = r.coefficients_hat(&hat)?;
        let Some(terms) = r.power_terms(&coef, n) else { return Ok(None) };
        let scale: f64 = terms.iter().map(|t| t.coef.norm()).sum();
        let analysis = crate::operators::analyze_real(&terms);
        if let Some((x, v)) = analysis.witness {
            let value = r.power_value(&coef, n, x)?.re;
            if value < -ANALYTIC_GUARD * scale && v < 0.0 {
                return Ok(Some((peak, x, value)));
            }
        }
    }
    Ok(None)
}

/// `T^n >= 0` (entrywise with absolute `tol`, plus the analytic hat search
/// and the canonical test set for rank-k models).
pub fn is_positive_power(t: &OperatorModel, n: u64, tol: f64) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    match t {
        OperatorModel::Diagonal(d) => Ok(d.symbol.iter().all(|s| {
            let z = crate::operators::powu(*s, n);
            z.re >= -tol && z.im.abs() <= tol
        })),
        OperatorModel::RankK(r) => {
            let peaks = hat_peaks(r);
            if hat_violation(r, &peaks, n, 2f64.powi(-(n.min(60) as i32) - 1))?.is_some() {
                return Ok(false);
            }
            let tests = ConeTestSet::canonical(t.norm_kind(), t.dim(), 0)?;
            for x in &tests.vectors {
                let y = t.power_apply(n, x)?;
                if cone_distance(&y) > tol * norm_value(x) {
                    return Ok(false);
                }
                if let Some(terms) = r.power_terms(&r.coefficients(x.entries()), n) {
                    let scale: f64 = terms.iter().map(|t| t.coef.norm()).sum();
                    if crate::operators::analyze_real(&terms).infimum < -(tol + ANALYTIC_GUARD * scale) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        _ => Ok(matrix_is_positive(&t.power_matrix(n), tol)),
    }
}

pub fn is_positive_operator(t: &OperatorModel, tol: f64) -> Result<bool> {
    is_positive_power(t, 1, tol)
}

/// Chains that must not show Confirmed above Refuted.
pub const HIERARCHY: [(Notion, Notion); 7] = [
    (Notion::UniformEventual, Notion::IndividualEventual),
    (Notion::IndividualEventual, Notion::WeakEventual),
    (Notion::UniformAsymptotic, Notion::IndividualAsymptotic),
    (Notion::IndividualAsymptotic, Notion::WeakAsymptotic),
    (Notion::UniformEventual, Notion::UniformAsymptotic),
    (Notion::IndividualEventual, Notion::IndividualAsymptotic),
    (Notion::WeakEventual, Notion::WeakAsymptotic),
];

/// Pairs `(stronger, weaker)` where the stronger notion is Confirmed but
/// the weaker one is Refuted.
pub fn hierarchy_violations(verdicts: &[PositivityVerdict]) -> Vec<(Notion, Notion)> {
    let status = |n: Notion| verdicts.iter().find(|v| v.notion == n).map(|v| &v.status);
    HIERARCHY
        .iter()
        .filter(
            |(hi, lo)| matches!((status(*hi), status(*lo)), (Some(a), Some(b)) if a.is_confirmed() && b.is_refuted()),
        )
        .copied()
        .collect()
}

/// Instances with individual-eventual Confirmed and uniform-asymptotic
/// Refuted; none are expected in finite dimension.
pub fn open_question_flag(verdicts: &[PositivityVerdict]) -> bool {
    let status = |n: Notion| verdicts.iter().find(|v| v.notion == n).map(|v| &v.status);
    matches!(
        (status(Notion::IndividualEventual), status(Notion::UniformAsymptotic)),
        (Some(a), Some(b)) if a.is_confirmed() && b.is_refuted()
    )
}

/// Least `n0` such that `ok[n]` holds for every `n` in `n0..ok.len()`.
pub(crate) fn first_stable(ok: &[bool]) -> usize {
    ok.iter().rposition(|b| !b).map_or(0, |k| k + 1)
}

/// Whether a clean stretch starting at `n0` is long enough to confirm:
/// it must cover at least the last quarter of the horizon.
pub(crate) fn confirms(n0: u64, horizon: u64) -> bool {
    n0 <= horizon - horizon / 4
}

/// `<x'_l, f_i>` for every test functional `l` and every function `f_i` of `r`.
pub(crate) fn rank_k_duals(r: &RankKModel, functionals: &[Functional]) -> Result<Vec<Vec<Complex64>>> {
    functionals
        .iter()
        .map(|f| {
            r.function_samples()
                .iter()
                .map(|s| f.apply(&LatticeVector::with_shared_norm(s.clone(), r.shared_space())?))
                .collect()
        })
        .collect()
}

pub(crate) fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
