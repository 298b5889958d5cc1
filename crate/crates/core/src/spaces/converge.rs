//! Finite verification of pointwise convergence of comb sequences.

use serde::{Deserialize, Serialize};

use super::{Space, SymbolicPoint, TestPoint};
use crate::error::SpaceError;
use crate::patterns::CombGenerator;
use crate::tree::{meet_len, Seq};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Stabilization {
    /// Values agree with the limit for every tooth `k0 ≤ k ≤ horizon`.
    Stable { k0: usize },
    /// The tooth at the horizon still disagrees with the limit.
    Unstable { violation: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub test: TestPoint,
    pub limit_value: bool,
    #[serde(flatten)]
    pub stabilization: Stabilization,
}

impl ConvergenceReport {
    pub fn k0(&self) -> Option<usize> {
        match self.stabilization {
            Stabilization::Stable { k0 } => Some(k0),
            Stabilization::Unstable { .. } => None,
        }
    }
}

/// A tooth index from which the value at `test` is guaranteed to equal the
/// limit value. Depths are strictly increasing, so `d_k ≥ k` and bounds on
/// depth are bounds on the index.
pub fn teeth_needed(space: &Space, g: &CombGenerator, test: &TestPoint) -> Result<usize, SpaceError> {
    space.check_test(test)?;
    Ok(match test {
        TestPoint::Node(t) => match space {
            Space::K1 { .. } => t.len(),
            Space::KInf { .. } => t.len() + 1,
        },
        TestPoint::Class { branch, .. } if branch == g.branch() => 0,
        TestPoint::Class { branch, .. } => {
            meet_len(&Seq::Branch(branch.clone()), &Seq::Branch(g.branch().clone()))
                .expect("distinct branches split")
                + 1
        }
    })
}

/// Evaluates teeth `0..=horizon` of `g` at each test and reports where the
/// values settle on the limit value.
pub fn verify_convergence(
    g: &CombGenerator,
    space: &Space,
    tests: &[TestPoint],
    horizon: usize,
) -> Result<Vec<ConvergenceReport>, SpaceError> {
    if g.len() <= horizon {
        return Err(SpaceError::GeneratorExhausted {
            horizon,
            needed: horizon + 1,
            available: g.len(),
        });
    }
    let limit = space.limit(g)?;
    let teeth: Vec<SymbolicPoint> = (0..=horizon).map(|k| SymbolicPoint::Node(g.tooth(k))).collect();
    tests
        .iter()
        .map(|test| {
            let limit_value = space.eval(&limit, test)?;
            let mut last_bad = None;
            for (k, tooth) in teeth.iter().enumerate() {
                if space.eval(tooth, test)? != limit_value {
                    last_bad = Some(k);
                }
            }
            let stabilization = match last_bad {
                None => Stabilization::Stable { k0: 0 },
                Some(k) if k == horizon => Stabilization::Unstable { violation: k },
                Some(k) => Stabilization::Stable { k0: k + 1 },
            };
            Ok(ConvergenceReport {
                test: test.clone(),
                limit_value,
                stabilization,
            })
        })
        .collect()
}
