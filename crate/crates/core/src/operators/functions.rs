//! Functions and functionals on the interval `[-1, 1]`.
//!
//! Analytic functions are decomposed into [`PowerTerm`]s of the form
//! `coef * |x|^e` on `x > 0` and `coef * sigma * |x|^e` on `x < 0`
//! (`sigma = -1` for odd terms). Products of terms are terms again, so every
//! pairing between analytic functions, weights and hat functions reduces to
//! integrals of single terms, which have closed-form antiderivatives.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DOMAIN: (f64, f64) = (-1.0, 1.0);

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Hat pieces at most this fraction of their distance to 0 are integrated
/// by quadrature.
const NARROW_PIECE: f64 = 1e-2;

/// 10-point Gauss-Legendre nodes and weights on `[-1, 1]` (positive half).
const GL_NODES: [(f64, f64); 5] = [
    (0.148_874_338_981_631_21, 0.295_524_224_714_752_87),
    (0.433_395_394_129_247_2, 0.269_266_719_309_996_36),
    (0.679_409_568_299_024_4, 0.219_086_362_515_982_04),
    (0.865_063_366_688_984_5, 0.149_451_349_150_580_6),
    (0.973_906_528_517_171_7, 0.066_671_344_308_688_14),
];

/// `integral_0^len f(u) du`
fn gauss_legendre(len: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let half = 0.5 * len;
    GL_NODES.iter().map(|&(x, w)| (f(half * (1.0 - x)) + f(half * (1.0 + x))) * (w * half)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionRep {
    Constant {
        c: Complex64,
    },
    Monomial {
        degree: u32,
    },
    /// `x -> sgn(x) |x|^a`
    SignedPower {
        a: f64,
    },
    /// Values at the nodes of the ambient space; linear interpolation between nodes.
    Tabulated {
        values: Vec<Complex64>,
    },
    /// Finite linear combination.
    Combination {
        terms: Vec<(Complex64, FunctionRep)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionalRep {
    /// `g -> scale * integral(weight * g)`
    WeightedIntegral { weight: FunctionRep, scale: Complex64 },
    /// `g -> sum_k coefficients[k] * g(points[k])`
    PointCombination { points: Vec<f64>, coefficients: Vec<Complex64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coef: Complex64,
    pub exponent: f64,
    pub odd: bool,
}

impl PowerTerm {
    pub fn new(coef: Complex64, exponent: f64, odd: bool) -> Self {
        Self { coef, exponent, odd }
    }

    pub fn mul(&self, other: &PowerTerm) -> PowerTerm {
        PowerTerm { coef: self.coef * other.coef, exponent: self.exponent + other.exponent, odd: self.odd != other.odd }
    }

    /// Shape without the coefficient: `|x|^e`, sign-flipped on `x < 0` if odd.
    pub fn shape(&self, x: f64) -> f64 {
        if x == 0.0 {
            return if self.odd {
                0.0
            } else if self.exponent == 0.0 {
                1.0
            } else if self.exponent > 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
        }
        let m = x.abs().powf(self.exponent);
        if x < 0.0 && self.odd {
            -m
        } else {
            m
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        if self.coef == ZERO {
            return ZERO;
        }
        self.coef * self.shape(x)
    }

    /// `integral_{lo}^{hi}` of the term, `lo <= hi` inside the domain.
    pub fn integrate(&self, lo: f64, hi: f64) -> Result<Complex64> {
        if self.coef == ZERO || lo == hi {
            return Ok(ZERO);
        }
        let mut total = 0.0;
        if hi > 0.0 {
            total += power_integral(lo.max(0.0), hi, self.exponent)?;
        }
        if lo < 0.0 {
            let part = power_integral((-hi).max(0.0), -lo, self.exponent)?;
            total += if self.odd { -part } else { part };
        }
        Ok(self.coef * total)
    }
}

/// `integral_a^b t^e dt` for `0 <= a <= b`.
fn power_integral(a: f64, b: f64, e: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a == 0.0 && e <= -1.0 {
        return Err(Error::Domain(format!("integral of |x|^{e} diverges at 0")));
    }
    if e == -1.0 {
        return Ok((b / a).ln());
    }
    let p = e + 1.0;
    let fa = if a == 0.0 { 0.0 } else { a.powf(p) };
    Ok((b.powf(p) - fa) / p)
}

fn sum_terms(terms: &[PowerTerm], x: f64) -> Complex64 {
    terms.iter().map(|t| t.eval(x)).sum()
}

fn integrate_terms(terms: &[PowerTerm], lo: f64, hi: f64) -> Result<Complex64> {
    terms.iter().map(|t| t.integrate(lo, hi)).sum()
}

fn product_terms(a: &[PowerTerm], b: &[PowerTerm]) -> Vec<PowerTerm> {
    a.iter().flat_map(|s| b.iter().map(move |t| s.mul(t))).collect()
}

impl FunctionRep {
    /// Power-term decomposition; `None` when a tabulated part is present.
    pub fn analytic_terms(&self) -> Option<Vec<PowerTerm>> {
        match self {
            FunctionRep::Constant { c } => Some(vec![PowerTerm::new(*c, 0.0, false)]),
            FunctionRep::Monomial { degree } => {
                Some(vec![PowerTerm::new(Complex64::new(1.0, 0.0), f64::from(*degree), degree % 2 == 1)])
            }
            FunctionRep::SignedPower { a } => Some(vec![PowerTerm::new(Complex64::new(1.0, 0.0), *a, true)]),
            FunctionRep::Tabulated { .. } => None,
            FunctionRep::Combination { terms } => {
                let mut out = Vec::new();
                for (w, f) in terms {
                    for t in f.analytic_terms()? {
                        out.push(PowerTerm { coef: t.coef * w, ..t });
                    }
                }
                Some(out)
            }
        }
    }

    pub fn is_analytic(&self) -> bool {
        self.analytic_terms().is_some()
    }

    /// Samples at `nodes`. Tabulated data must match the node count.
    pub fn sample(&self, nodes: &[f64]) -> Result<Vec<Complex64>> {
        match self {
            FunctionRep::Tabulated { values } => {
                if values.len() != nodes.len() {
                    return Err(Error::DimensionMismatch { expected: nodes.len(), actual: values.len() });
                }
                Ok(values.clone())
            }
            FunctionRep::Combination { terms } => {
                let mut out = vec![ZERO; nodes.len()];
                for (w, f) in terms {
                    for (o, v) in out.iter_mut().zip(f.sample(nodes)?) {
                        *o += w * v;
                    }
                }
                Ok(out)
            }
            _ => {
                let terms = self.analytic_terms().expect("analytic variant");
                Ok(nodes.iter().map(|&x| sum_terms(&terms, x)).collect())
            }
        }
    }

    /// Point value; tabulated parts are interpolated on `nodes`.
    pub fn eval(&self, x: f64, nodes: &[f64]) -> Result<Complex64> {
        match self {
            FunctionRep::Tabulated { values } => {
                if values.len() != nodes.len() {
                    return Err(Error::DimensionMismatch { expected: nodes.len(), actual: values.len() });
                }
                Ok(interpolation_row(nodes, x).into_iter().map(|(k, w)| values[k] * w).sum())
            }
            FunctionRep::Combination { terms } => {
                let mut s = ZERO;
                for (w, f) in terms {
                    s += w * f.eval(x, nodes)?;
                }
                Ok(s)
            }
            _ => Ok(sum_terms(&self.analytic_terms().expect("analytic variant"), x)),
        }
    }

    /// Integrability of `|f|^p` near the origin.
    pub fn check_lp_integrable(&self, p: f64) -> Result<()> {
        if let Some(terms) = self.analytic_terms() {
            for t in terms {
                if t.coef != ZERO && t.exponent <= -1.0 / p {
                    return Err(Error::InvalidArgument(format!(
                        "exponent {} is not above -1/p = {}",
                        t.exponent,
                        -1.0 / p
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Linear interpolation weights for `x` on sorted `nodes` (extrapolates linearly
/// outside the node range).
pub fn interpolation_row(nodes: &[f64], x: f64) -> Vec<(usize, f64)> {
    let n = nodes.len();
    if n == 1 {
        return vec![(0, 1.0)];
    }
    if let Some(k) = nodes.iter().position(|&t| t == x) {
        return vec![(k, 1.0)];
    }
    let right = nodes.partition_point(|&t| t < x).clamp(1, n - 1);
    let left = right - 1;
    let theta = (x - nodes[left]) / (nodes[right] - nodes[left]);
    vec![(left, 1.0 - theta), (right, theta)]
}

/// Quadrature weights used to integrate samples: the space's own weights for
/// quadrature spaces, the trapezoid rule for plain grids.
pub fn quadrature_weights(nodes: &[f64], explicit: Option<&[f64]>) -> Vec<f64> {
    if let Some(w) = explicit {
        return w.to_vec();
    }
    let n = nodes.len();
    let mut w = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let h = nodes[k + 1] - nodes[k];
        w[k] += h / 2.0;
        w[k + 1] += h / 2.0;
    }
    w
}

/// Piecewise-linear nonnegative bump with peak 1 at `peak` and support of
/// width `width` on each side that stays inside the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hat {
    pub peak: f64,
    pub width: f64,
}

impl Hat {
    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        (1.0 - (x - self.peak).abs() / self.width).max(0.0)
    }

    pub fn support(&self) -> (f64, f64) {
        ((self.peak - self.width).max(DOMAIN.0), (self.peak + self.width).min(DOMAIN.1))
    }

    /// Linear pieces `(lo, hi, alpha, beta)` meaning `alpha + beta * x` on `[lo, hi]`.
    fn pieces(&self) -> Vec<(f64, f64, f64, f64)> {
        let (lo, hi) = self.support();
        let mut out = Vec::new();
        if lo < self.peak {
            // 1 + (x - peak)/width
            out.push((lo, self.peak, 1.0 - self.peak / self.width, 1.0 / self.width));
        }
        if hi > self.peak {
            out.push((self.peak, hi, 1.0 + self.peak / self.width, -1.0 / self.width));
        }
        out
    }

    /// `integral(hat * sum terms)`: closed form, except on pieces that are
    /// narrow compared with their distance to 0, where the antiderivative
    /// differences cancel and a Gauss-Legendre rule in the offset from the
    /// peak is used instead.
    pub fn integrate_against(&self, terms: &[PowerTerm]) -> Result<Complex64> {
        let x_term = PowerTerm::new(Complex64::new(1.0, 0.0), 1.0, true);
        let mut total = ZERO;
        for (lo, hi, alpha, beta) in self.pieces() {
            let narrow = lo * hi > 0.0 && hi - lo <= NARROW_PIECE * lo.abs().min(hi.abs());
            if narrow {
                let sign = if hi > self.peak { 1.0 } else { -1.0 };
                let reach = if sign > 0.0 { hi - self.peak } else { self.peak - lo };
                total += gauss_legendre(reach, |u| {
                    let x = self.peak + sign * u;
                    let sum: Complex64 = terms.iter().map(|t| t.eval(x)).sum();
                    sum * (1.0 - u / self.width)
                });
                continue;
            }
            for t in terms {
                total += t.integrate(lo, hi)? * alpha + t.mul(&x_term).integrate(lo, hi)? * beta;
            }
        }
        Ok(total)
    }
}

impl FunctionalRep {
    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionalRep::PointCombination { points, coefficients } => {
                if points.len() != coefficients.len() {
                    return Err(Error::DimensionMismatch { expected: points.len(), actual: coefficients.len() });
                }
                if points.iter().any(|p| !(DOMAIN.0..=DOMAIN.1).contains(p)) {
                    return Err(Error::InvalidArgument("point evaluations must lie in [-1, 1]".into()));
                }
                Ok(())
            }
            FunctionalRep::WeightedIntegral { .. } => Ok(()),
        }
    }

    /// Closed-form pairing with an analytic function; `None` if either side
    /// has a tabulated part.
    pub fn pair_analytic(&self, f: &FunctionRep) -> Result<Option<Complex64>> {
        let Some(f_terms) = f.analytic_terms() else { return Ok(None) };
        match self {
            FunctionalRep::WeightedIntegral { weight, scale } => {
                let Some(w_terms) = weight.analytic_terms() else { return Ok(None) };
                let prod = product_terms(&w_terms, &f_terms);
                Ok(Some(scale * integrate_terms(&prod, DOMAIN.0, DOMAIN.1)?))
            }
            FunctionalRep::PointCombination { points, coefficients } => {
                Ok(Some(points.iter().zip(coefficients).map(|(&p, &c)| c * sum_terms(&f_terms, p)).sum()))
            }
        }
    }

    /// Closed-form pairing with a hat function.
    pub fn pair_hat(&self, hat: &Hat) -> Result<Complex64> {
        match self {
            FunctionalRep::WeightedIntegral { weight, scale } => {
                let w_terms = weight
                    .analytic_terms()
                    .ok_or_else(|| Error::InvalidArgument("hat pairing needs an analytic weight".into()))?;
                Ok(scale * hat.integrate_against(&w_terms)?)
            }
            FunctionalRep::PointCombination { points, coefficients } => {
                Ok(points.iter().zip(coefficients).map(|(&p, &c)| c * hat.eval(p)).sum())
            }
        }
    }

    /// Row vector acting on samples at `nodes`.
    pub fn sample_row(&self, nodes: &[f64], quad: &[f64]) -> Result<Vec<Complex64>> {
        let mut row = vec![ZERO; nodes.len()];
        match self {
            FunctionalRep::WeightedIntegral { weight, scale } => {
                let w = weight.sample(nodes)?;
                for k in 0..nodes.len() {
                    row[k] = scale * w[k] * quad[k];
                }
            }
            FunctionalRep::PointCombination { points, coefficients } => {
                for (&p, &c) in points.iter().zip(coefficients) {
                    for (k, theta) in interpolation_row(nodes, p) {
                        row[k] += c * theta;
                    }
                }
            }
        }
        Ok(row)
    }

    /// Point masses `(point, coefficient)` of the functional.
    pub fn point_masses(&self) -> Vec<(f64, Complex64)> {
        match self {
            FunctionalRep::PointCombination { points, coefficients } => {
                points.iter().copied().zip(coefficients.iter().copied()).collect()
            }
            FunctionalRep::WeightedIntegral { .. } => Vec::new(),
        }
    }

    pub fn density_terms(&self) -> Option<Vec<PowerTerm>> {
        match self {
            FunctionalRep::WeightedIntegral { weight, scale } => {
                Some(weight.analytic_terms()?.into_iter().map(|t| PowerTerm { coef: t.coef * scale, ..t }).collect())
            }
            FunctionalRep::PointCombination { .. } => Some(Vec::new()),
        }
    }
}

/// Result of minimizing a real combination of power terms over the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignAnalysis {
    /// Infimum over `[-1, 1]`; `-inf` when a singular term dominates negatively.
    pub infimum: f64,
    /// A point with strictly negative value, when one exists.
    pub witness: Option<(f64, f64)>,
}

/// Minimizes `x -> sum_i Re(coef_i) shape_i(x)` over `[-1, 1] \ {0}`.
///
/// Each half line is reduced to `t -> sum gamma_j t^(e_j)`, `t in (0, 1]`.
/// A negative coefficient on the most singular exponent sends the infimum to
/// `-inf`; for a constant plus one singular power the crossing point is
/// solved exactly, otherwise a halving search locates a negative point.
/// Bounded cases are scanned on a logarithmic grid and refined by golden
/// section search. Only the real parts of the coefficients are used.
pub fn analyze_real(terms: &[PowerTerm]) -> SignAnalysis {
    let mut best = SignAnalysis { infimum: f64::INFINITY, witness: None };
    for side in [1.0f64, -1.0] {
        let mut groups: Vec<(f64, f64)> = Vec::new();
        for t in terms {
            let gamma = t.coef.re * if side < 0.0 && t.odd { -1.0 } else { 1.0 };
            if gamma == 0.0 {
                continue;
            }
            match groups.iter_mut().find(|(e, _)| *e == t.exponent) {
                Some(g) => g.1 += gamma,
                None => groups.push((t.exponent, gamma)),
            }
        }
        groups.retain(|(_, g)| *g != 0.0);
        let half = analyze_half(&groups);
        let (inf, wit) = (half.0, half.1.map(|(t, v)| (side * t, v)));
        if inf < best.infimum {
            best.infimum = inf;
        }
        if let Some((x, v)) = wit {
            if best.witness.is_none_or(|(_, bv)| v < bv) || v == f64::NEG_INFINITY {
                best.witness = Some((x, v));
            }
        }
    }
    if best.infimum == f64::INFINITY {
        best.infimum = 0.0;
    }
    best
}

fn eval_groups(groups: &[(f64, f64)], t: f64) -> f64 {
    groups.iter().map(|(e, g)| g * t.powf(*e)).sum()
}

fn analyze_half(groups: &[(f64, f64)]) -> (f64, Option<(f64, f64)>) {
    if groups.is_empty() {
        return (0.0, None);
    }
    let (e_min, g_min) =
        groups.iter().copied().fold((f64::INFINITY, 0.0), |acc, cur| if cur.0 < acc.0 { cur } else { acc });
    if e_min < 0.0 && g_min < 0.0 {
        let constant: f64 = groups.iter().filter(|(e, _)| *e == 0.0).map(|(_, g)| g).sum();
        let t = if groups.len() <= 2 && groups.iter().all(|(e, _)| *e == 0.0 || *e == e_min) {
            if constant <= 0.0 {
                1.0
            } else {
                (2.0 * constant / -g_min).powf(1.0 / e_min).min(1.0)
            }
        } else {
            let mut t = 1.0;
            let mut steps = 0;
            while eval_groups(groups, t) >= 0.0 && steps < 4000 {
                t *= 0.5;
                steps += 1;
            }
            t
        };
        let v = eval_groups(groups, t);
        return (f64::NEG_INFINITY, (v < 0.0).then_some((t, v)));
    }
    // Bounded below on (0, 1].
    let limit0 =
        if e_min < 0.0 { f64::INFINITY } else { groups.iter().filter(|(e, _)| *e == 0.0).map(|(_, g)| g).sum() };
    let samples = 2000;
    let mut best_t = 1.0;
    let mut best_v = eval_groups(groups, 1.0);
    let mut prev = 1.0;
    let mut best_bracket = (1.0, 1.0);
    for k in 1..=samples {
        let t = 10f64.powf(-14.0 * k as f64 / samples as f64);
        let v = eval_groups(groups, t);
        if v < best_v {
            best_v = v;
            best_t = t;
            best_bracket = (10f64.powf(-14.0 * (k + 1) as f64 / samples as f64), prev);
        }
        prev = t;
    }
    // golden-section refinement inside the bracket
    let (mut a, mut b) = best_bracket;
    if a < b {
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            if eval_groups(groups, c) < eval_groups(groups, d) {
                b = d;
            } else {
                a = c;
            }
        }
        let t = 0.5 * (a + b);
        let v = eval_groups(groups, t);
        if v < best_v {
            best_v = v;
            best_t = t;
        }
    }
    let inf = best_v.min(limit0);
    let witness = if best_v < 0.0 {
        Some((best_t, best_v))
    } else if limit0 < 0.0 {
        // approached at the origin from this side
        let t = 1e-14;
        let v = eval_groups(groups, t);
        (v < 0.0).then_some((t, v))
    } else {
        None
    };
    (inf, witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn closed_form_integrals() {
        // integral_{-1}^{1} x^2 = 2/3, of x = 0, of sgn x |x|^{-1/4} * sgn x |x|^{-1/4} = 2/(1/2+... )
        let x2 = FunctionRep::Monomial { degree: 2 }.analytic_terms().unwrap();
        assert!((integrate_terms(&x2, -1.0, 1.0).unwrap() - c(2.0 / 3.0)).norm() < 1e-15);
        let x1 = FunctionRep::Monomial { degree: 1 }.analytic_terms().unwrap();
        assert!(integrate_terms(&x1, -1.0, 1.0).unwrap().norm() < 1e-15);
        let s = FunctionRep::SignedPower { a: -0.25 }.analytic_terms().unwrap();
        let prod = product_terms(&s, &s);
        // |x|^{-1/2} integrates to 2 * 2 = 4
        assert!((integrate_terms(&prod, -1.0, 1.0).unwrap() - c(4.0)).norm() < 1e-14);
        assert!(PowerTerm::new(c(1.0), -1.0, false).integrate(-1.0, 1.0).is_err());
    }

    #[test]
    fn hat_integrals_match_geometry() {
        let hat = Hat { peak: -1.0, width: 0.25 };
        let one = FunctionRep::Constant { c: c(1.0) }.analytic_terms().unwrap();
        assert!((hat.integrate_against(&one).unwrap() - c(0.125)).norm() < 1e-15);
        assert_eq!(hat.eval(-1.0), 1.0);
        assert_eq!(hat.eval(1.0), 0.0);
        // integral of x * hat on [-1, -0.75]: hat = 1 - (x+1)/0.25
        let x = FunctionRep::Monomial { degree: 1 }.analytic_terms().unwrap();
        let quad: f64 = {
            let n = 100_000;
            let h = 0.25 / n as f64;
            (0..n)
                .map(|k| {
                    let t = -1.0 + (k as f64 + 0.5) * h;
                    t * hat.eval(t) * h
                })
                .sum()
        };
        assert!((hat.integrate_against(&x).unwrap().re - quad).abs() < 1e-9);
        let interior = Hat { peak: 0.5, width: 0.1 };
        assert!((interior.integrate_against(&one).unwrap() - c(0.1)).norm() < 1e-15);
    }

    #[test]
    fn interpolation_is_exact_on_nodes_and_linear_between() {
        let nodes = [-1.0, 0.0, 1.0];
        assert_eq!(interpolation_row(&nodes, 0.0), vec![(1, 1.0)]);
        let row = interpolation_row(&nodes, 0.25);
        assert_eq!(row, vec![(1, 0.75), (2, 0.25)]);
    }

    #[test]
    fn sign_analysis_of_constant_plus_singular_power() {
        // 1 - 0.5 * sgn(x)|x|^{-1/4}: negative near 0 from the right.
        let terms = vec![PowerTerm::new(c(1.0), 0.0, false), PowerTerm::new(c(-0.5), -0.25, true)];
        let a = analyze_real(&terms);
        assert_eq!(a.infimum, f64::NEG_INFINITY);
        let (x, v) = a.witness.unwrap();
        assert!(x > 0.0 && (v + 1.0).abs() < 1e-12);
        // solved point is (0.5 / 2)^4
        assert!((x - 0.25f64.powi(4)).abs() < 1e-15);
    }

    #[test]
    fn sign_analysis_of_linear_function() {
        let terms = vec![PowerTerm::new(c(0.1), 0.0, false), PowerTerm::new(c(0.25), 1.0, true)];
        let a = analyze_real(&terms);
        assert!((a.infimum - (0.1 - 0.25)).abs() < 1e-12);
        let (x, v) = a.witness.unwrap();
        assert!((x + 1.0).abs() < 1e-9 && v < 0.0);
        let positive = vec![PowerTerm::new(c(1.0), 0.0, false), PowerTerm::new(c(0.5), 1.0, true)];
        let a = analyze_real(&positive);
        assert!(a.witness.is_none() && (a.infimum - 0.5).abs() < 1e-9);
    }

    #[test]
    fn sign_analysis_of_interior_minimum() {
        // x^2 - x + 0.2 has minimum -0.05 at x = 0.5
        let terms = vec![
            PowerTerm::new(c(1.0), 2.0, false),
            PowerTerm::new(c(-1.0), 1.0, true),
            PowerTerm::new(c(0.2), 0.0, false),
        ];
        let a = analyze_real(&terms);
        assert!((a.infimum + 0.05).abs() < 1e-10);
        let (x, _) = a.witness.unwrap();
        assert!((x - 0.5).abs() < 1e-5);
    }
}
