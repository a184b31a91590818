//! Built-in example operators with their expected verdicts.

use crate::classifier::Notion;
use crate::error::{Error, Result};
use crate::lattice::NormKind;
use crate::operators::builtin;
use crate::operators::OperatorModel;

use super::generators::{cyclic_block, make_eventually_positive};

/// Expected status label (`confirmed`, `refuted`, `undetermined`) per notion,
/// `None` where the notion is not classifiable.
pub type Expectations = [(Notion, Option<&'static str>); 6];

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub expected: Expectations,
    /// Checks whose pass/fail outcome is pinned.
    pub expected_checks: &'static [(&'static str, bool)],
}

const C: Option<&str> = Some("confirmed");
const R: Option<&str> = Some("refuted");
const U: Option<&str> = Some("undetermined");

const fn expect(e: [Option<&'static str>; 6]) -> Expectations {
    [
        (Notion::UniformEventual, e[0]),
        (Notion::IndividualEventual, e[1]),
        (Notion::WeakEventual, e[2]),
        (Notion::UniformAsymptotic, e[3]),
        (Notion::IndividualAsymptotic, e[4]),
        (Notion::WeakAsymptotic, e[5]),
    ]
}

pub const RANK2_CONTINUOUS: &str = "rank2-continuous";
pub const RANK2_LP: &str = "rank2-lp";
pub const ALTERNATING_L1: &str = "alternating-multiplication-l1";
pub const ALTERNATING_L2: &str = "alternating-multiplication-l2";
pub const NEGATED_SHIFT: &str = "negated-shift";
pub const COMPLEX_DIAGONAL: &str = "complex-diagonal";
pub const CYCLIC_BLOCK: &str = "cyclic-block";
pub const EVENTUALLY_POSITIVE: &str = "eventually-positive";

/// Truncation used by the sequence-space entries.
pub const TRUNCATION: usize = 50;

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: RANK2_CONTINUOUS,
            summary: "rank-2 operator on C[-1,1] (201 nodes): individually, not uniformly, eventually positive",
            expected: expect([R, C, C, C, C, C]),
            expected_checks: &[],
        },
        CatalogEntry {
            name: RANK2_LP,
            summary: "rank-2 operator on L^2(-1,1) (200 cells) with a singular function: weakly, not individually, eventually positive",
            expected: expect([R, R, C, C, C, C]),
            expected_checks: &[],
        },
        CatalogEntry {
            name: ALTERNATING_L1,
            summary: "multiplication by -1 + 1/j on l^1, truncated to 50 coordinates",
            expected: expect([R, R, R, R, R, R]),
            expected_checks: &[("spr-in-spectrum", false)],
        },
        CatalogEntry {
            name: ALTERNATING_L2,
            summary: "multiplication by -1 + 1/j on l^2, truncated to 50 coordinates",
            expected: expect([R, R, R, R, R, R]),
            expected_checks: &[("spr-in-spectrum", false)],
        },
        CatalogEntry {
            name: NEGATED_SHIFT,
            summary: "-1 times the right shift, truncated to 50 coordinates (nilpotent)",
            expected: expect([U, U, U, None, None, None]),
            expected_checks: &[],
        },
        CatalogEntry {
            name: COMPLEX_DIAGONAL,
            summary: "diag(1, i/2): asymptotically but not eventually positive",
            expected: expect([R, R, R, C, C, C]),
            expected_checks: &[("spr-in-spectrum", true), ("positive-eigenvector", true), ("uniform-error-decay", true)],
        },
        CatalogEntry {
            name: CYCLIC_BLOCK,
            summary: "3-cycle tensored with a seeded positive 3x3 block",
            expected: expect([C, C, C, C, C, C]),
            expected_checks: &[("peripheral-cyclicity", true), ("multiplicity-monotonicity", true)],
        },
        CatalogEntry {
            name: EVENTUALLY_POSITIVE,
            summary: "generated P + Q instance, dim 4, gap 0.5, seed 0",
            expected: expect([C, C, C, C, C, C]),
            expected_checks: &[("spr-in-spectrum", true), ("positive-eigenvector", true), ("peripheral-cyclicity", true)],
        },
    ]
}

pub fn catalog_names() -> Vec<&'static str> {
    catalog().iter().map(|e| e.name).collect()
}

pub fn build_example(name: &str) -> Result<OperatorModel> {
    match name {
        RANK2_CONTINUOUS => builtin::rank2_continuous(201),
        RANK2_LP => builtin::rank2_lp(2.0, 200),
        ALTERNATING_L1 => builtin::alternating_multiplication(TRUNCATION, NormKind::Ell1),
        ALTERNATING_L2 => builtin::alternating_multiplication(TRUNCATION, NormKind::Ell2),
        NEGATED_SHIFT => builtin::negated_shift(TRUNCATION, NormKind::Ell1),
        COMPLEX_DIAGONAL => OperatorModel::dense(builtin::complex_diagonal(), NormKind::Ell1),
        CYCLIC_BLOCK => OperatorModel::dense(cyclic_block(3, 3, 1)?, NormKind::Ell1),
        EVENTUALLY_POSITIVE => OperatorModel::dense(make_eventually_positive(4, 0.5, 0)?.matrix, NormKind::Ell1),
        other => Err(Error::Schema(format!("unknown example `{other}`; known: {}", catalog_names().join(", ")))),
    }
}
