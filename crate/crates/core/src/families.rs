//! Seed catalog of small certified patterns and the two recursive border
//! families built from them.
//!
//! The catalog collects order-2 through order-5 base cases with exact
//! realizations and the variable placements that certify them. `gen_bn` and
//! `gen_kn` run the equal-index and unequal-index recursions from their
//! respective seeds, so the banded families they produce are generated, not
//! hard-coded; tests compare the output against the expected band structure.

use serde::{Deserialize, Serialize};

use crate::border::{recursive_border, BorderStep};
use crate::certify::{certify_nilpotent_jacobian, VariablePlacement};
use crate::error::{Error, Result};
use crate::inertia::{refined_inertia, RefinedInertia, DEFAULT_INERTIA_TOL};
use crate::matrix::RationalMatrix;
use crate::pattern::{is_realization, sign_of, SignPattern};
use crate::rational::rat;

/// What a catalog entry claims about its realization, beyond full Jacobian
/// rank: nilpotency, or a specific refined inertia with no nilpotent
/// realization available.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeedKind {
    Nilpotent,
    RefinedInertia { expected: RefinedInertia },
}

/// One catalog entry: a pattern, an exact realization of it, and the
/// variable placement under which the realization certifies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedEntry {
    pub name: String,
    pub pattern: SignPattern,
    pub realization: RationalMatrix,
    pub placement: VariablePlacement,
    #[serde(flatten)]
    pub kind: SeedKind,
}

fn entry(
    name: &str,
    pattern: &str,
    realization: &str,
    placement: Option<&[(usize, usize)]>,
    kind: SeedKind,
) -> SeedEntry {
    let pattern = SignPattern::parse_text(pattern).expect("catalog pattern literal");
    let realization = RationalMatrix::parse_text(realization).expect("catalog matrix literal");
    let placement = match placement {
        Some(positions) => VariablePlacement::new(positions.to_vec()),
        None => VariablePlacement::all_nonzeros(&pattern),
    };
    SeedEntry {
        name: name.to_string(),
        pattern,
        realization,
        placement,
        kind,
    }
}

/// The eight base entries. Entries without a distinguished placement use all
/// nonzero positions as variables.
///
/// `G5` is the only member of its odd-order inertia family included here;
/// the larger members rest on realizations this crate does not construct.
pub fn seed_catalog() -> Vec<SeedEntry> {
    vec![
        entry("T2", "+-\n+-", "1 -1\n1 -1", None, SeedKind::Nilpotent),
        entry(
            "T3",
            "+-0\n+0-\n0+-",
            "1 -1 0\n1/2 0 -1\n0 1/2 -1",
            None,
            SeedKind::Nilpotent,
        ),
        entry(
            "U3",
            "+-+\n+-0\n+0-",
            "3/2 -2 1/2\n1 -1 0\n1/2 0 -1/2",
            None,
            SeedKind::Nilpotent,
        ),
        entry(
            "V3",
            "+-0\n+0-\n+0-",
            "1 -1 0\n1 0 -1\n1 0 -1",
            None,
            SeedKind::Nilpotent,
        ),
        entry(
            "W3",
            "++-\n+0-\n+0-",
            "1 1 -3/2\n1/2 0 -1/2\n1 0 -1",
            None,
            SeedKind::Nilpotent,
        ),
        entry(
            "G5",
            "---00\n+++00\n000--\n0-00-\n-0000",
            "-1 -1 -1 0 0\n2 1 1 0 0\n0 0 0 -1 -1\n0 -1 0 0 -1\n-1 0 0 0 0",
            Some(&[(0, 1), (1, 1), (1, 2), (2, 4), (3, 1)]),
            SeedKind::RefinedInertia {
                expected: RefinedInertia::new(0, 0, 3, 2),
            },
        ),
        entry(
            "T2_PLUS_T2",
            "+-00\n+-00\n00+-\n00+-",
            "1 -1 0 0\n1 -1 0 0\n0 0 1 -2\n0 0 1 -1",
            Some(&[(0, 1), (1, 1), (2, 3), (3, 3)]),
            SeedKind::RefinedInertia {
                expected: RefinedInertia::new(0, 0, 2, 2),
            },
        ),
        entry(
            "B4",
            "0+00\n0-+0\n+00+\n+0-+",
            "0 1 0 0\n0 -1 1 0\n1 0 0 1\n1 0 -1 1",
            None,
            SeedKind::Nilpotent,
        ),
    ]
}

/// Looks up a catalog entry by name.
pub fn seed_by_name(name: &str) -> Option<SeedEntry> {
    seed_catalog().into_iter().find(|e| e.name == name)
}

/// Re-derives every catalog claim from scratch: realization membership in the
/// pattern class, full Jacobian rank under the stored placement, and either
/// nilpotency or the stated refined inertia.
pub fn verify_seed_catalog() -> Result<()> {
    for entry in seed_catalog() {
        let fail = |what: &str| {
            Err(Error::Precondition(format!(
                "catalog entry {}: {what}",
                entry.name
            )))
        };
        if !is_realization(&entry.realization, &entry.pattern)? {
            return fail("realization is outside the pattern class");
        }
        let cert = certify_nilpotent_jacobian(&entry.realization, &entry.placement)?;
        if !cert.full_rank {
            return fail("Jacobian rank fell short of the order");
        }
        match &entry.kind {
            SeedKind::Nilpotent => {
                if !cert.nilpotent {
                    return fail("realization is not nilpotent");
                }
            }
            SeedKind::RefinedInertia { expected } => {
                let inertia = refined_inertia(&entry.realization, DEFAULT_INERTIA_TOL)?;
                if inertia.refined_inertia != *expected {
                    return fail("refined inertia differs from the stated value");
                }
            }
        }
    }
    Ok(())
}

/// Order-n member of the banded family grown from the `B4` seed by repeated
/// equal-index bordering at the last row with v = 0. The result has 3n - 4
/// nonzero entries, all of magnitude 1.
pub fn gen_bn(n: usize) -> Result<(SignPattern, RationalMatrix)> {
    if n < 4 {
        return Err(Error::Precondition(format!(
            "banded equal-index family starts at order 4, requested {n}"
        )));
    }
    let seed = seed_by_name("B4").expect("catalog has B4");
    let step = BorderStep::EqualIndex { k: 3, v: Some(0) };
    let (matrix, _) = recursive_border(&seed.realization, &step, n - 4)?;
    let pattern = sign_of(&matrix)?;
    Ok((pattern, matrix))
}

/// Order-n member of the banded family grown from the `V3` seed by repeated
/// unequal-index bordering with b = 1, k = 0, v = 1 and border row starting
/// at 2. All nonzero entries have magnitude 1.
pub fn gen_kn(n: usize) -> Result<(SignPattern, RationalMatrix)> {
    if n < 4 {
        return Err(Error::Precondition(format!(
            "banded unequal-index family starts at order 4, requested {n}"
        )));
    }
    let seed = seed_by_name("V3").expect("catalog has V3");
    let step = BorderStep::UnequalIndex {
        j: 2,
        k: 0,
        b: rat(1),
        v: Some(1),
    };
    let (matrix, _) = recursive_border(&seed.realization, &step, n - 3)?;
    let pattern = sign_of(&matrix)?;
    Ok((pattern, matrix))
}
