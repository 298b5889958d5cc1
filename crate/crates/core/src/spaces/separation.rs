//! The canonical open family `{V_t, W_t, K∖W_t}` and constructive
//! separation of `odeg + 1` points.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Space, SymbolicPoint, TestPoint};
use crate::error::SpaceError;
use crate::tree::{meet_len, Letter, Seq, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DescriptorRepr", into = "DescriptorRepr")]
pub enum OpenSetDescriptor {
    /// Points taking value 1 at `t` (in `K∞`: points at or above `t`).
    Vt(Word),
    /// The isolated node point at `t`.
    Wt(Word),
    /// Everything except the node point at `t`.
    NotWt(Word),
    WholeSpace,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum DescriptorRepr {
    Vt { t: Vec<Letter> },
    Wt { t: Vec<Letter> },
    NotWt { t: Vec<Letter> },
    WholeSpace,
}

impl TryFrom<DescriptorRepr> for OpenSetDescriptor {
    type Error = SpaceError;
    fn try_from(r: DescriptorRepr) -> Result<Self, Self::Error> {
        Ok(match r {
            DescriptorRepr::Vt { t } => OpenSetDescriptor::Vt(Word::new(t)),
            DescriptorRepr::Wt { t } => OpenSetDescriptor::Wt(Word::new(t)),
            DescriptorRepr::NotWt { t } => OpenSetDescriptor::NotWt(Word::new(t)),
            DescriptorRepr::WholeSpace => OpenSetDescriptor::WholeSpace,
        })
    }
}

impl From<OpenSetDescriptor> for DescriptorRepr {
    fn from(d: OpenSetDescriptor) -> Self {
        match d {
            OpenSetDescriptor::Vt(t) => DescriptorRepr::Vt { t: t.into_letters() },
            OpenSetDescriptor::Wt(t) => DescriptorRepr::Wt { t: t.into_letters() },
            OpenSetDescriptor::NotWt(t) => DescriptorRepr::NotWt { t: t.into_letters() },
            OpenSetDescriptor::WholeSpace => DescriptorRepr::WholeSpace,
        }
    }
}

impl fmt::Display for OpenSetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenSetDescriptor::Vt(t) => write!(f, "V{t}"),
            OpenSetDescriptor::Wt(t) => write!(f, "W{t}"),
            OpenSetDescriptor::NotWt(t) => write!(f, "K\\W{t}"),
            OpenSetDescriptor::WholeSpace => write!(f, "K"),
        }
    }
}

/// Membership of a point in a canonical open set, decided by evaluation.
pub fn contains(
    space: &Space,
    set: &OpenSetDescriptor,
    point: &SymbolicPoint,
) -> Result<bool, SpaceError> {
    space.check_point(point)?;
    let at = |t: &Word| space.eval(point, &TestPoint::Node(t.clone()));
    match (space, set) {
        (_, OpenSetDescriptor::WholeSpace) => Ok(true),
        (Space::K1 { .. }, OpenSetDescriptor::Vt(t)) => at(t),
        (Space::K1 { .. }, OpenSetDescriptor::Wt(t)) => is_isolated_at(space, point, t),
        (Space::K1 { .. }, OpenSetDescriptor::NotWt(t)) => Ok(!is_isolated_at(space, point, t)?),
        (Space::KInf { .. }, OpenSetDescriptor::Wt(t)) => at(t),
        (Space::KInf { .. }, OpenSetDescriptor::NotWt(t)) => Ok(!at(t)?),
        (Space::KInf { .. }, OpenSetDescriptor::Vt(t)) => Ok(match point {
            SymbolicPoint::Node(s) => t.is_prefix_of(s),
            SymbolicPoint::Limit { branch, class } => {
                branch.has_prefix(t)
                    && space.eval(
                        point,
                        &TestPoint::Class {
                            branch: branch.clone(),
                            class: *class,
                        },
                    )?
            }
            SymbolicPoint::Infinity => false,
        }),
    }
}

/// `f(t) = 1` and `f(t⌢i) = 0` for every letter `i`.
fn is_isolated_at(space: &Space, point: &SymbolicPoint, t: &Word) -> Result<bool, SpaceError> {
    if !space.eval(point, &TestPoint::Node(t.clone()))? {
        return Ok(false);
    }
    for i in space.alphabet().letters() {
        if space.eval(point, &TestPoint::Node(t.child(i)))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indices of two descriptors whose intersection is empty for purely
/// syntactic reasons: `W_t` against `K∖W_t`, or `V_s`, `V_t` with `s`, `t`
/// incomparable.
pub fn empty_intersection_witness(sets: &[OpenSetDescriptor]) -> Option<(usize, usize)> {
    use OpenSetDescriptor::*;
    for (a, x) in sets.iter().enumerate() {
        for (b, y) in sets.iter().enumerate().skip(a + 1) {
            let disjoint = match (x, y) {
                (Wt(s), NotWt(t)) | (NotWt(s), Wt(t)) => s == t,
                (Vt(s), Vt(t)) => !s.is_prefix_of(t) && !t.is_prefix_of(s),
                _ => false,
            };
            if disjoint {
                return Some((a, b));
            }
        }
    }
    None
}

/// Assigns each point a canonical open neighbourhood so that the
/// neighbourhoods have empty intersection.
pub fn separate_points(
    space: &Space,
    points: &[SymbolicPoint],
) -> Result<Vec<OpenSetDescriptor>, SpaceError> {
    let expected = space.separation_arity();
    if points.len() != expected {
        return Err(SpaceError::WrongPointCount {
            expected,
            got: points.len(),
        });
    }
    let mut seen = HashSet::new();
    for p in points {
        space.check_point(p)?;
        if !seen.insert(p) {
            return Err(SpaceError::DuplicatePoint(p.to_string()));
        }
    }

    if let Some(pos) = points.iter().position(|p| matches!(p, SymbolicPoint::Node(_))) {
        let SymbolicPoint::Node(t) = &points[pos] else {
            unreachable!()
        };
        return Ok((0..points.len())
            .map(|k| {
                if k == pos {
                    OpenSetDescriptor::Wt(t.clone())
                } else {
                    OpenSetDescriptor::NotWt(t.clone())
                }
            })
            .collect());
    }

    let branches: Vec<Option<_>> = points
        .iter()
        .map(|p| match p {
            SymbolicPoint::Limit { branch, .. } => Some(branch),
            _ => None,
        })
        .collect();
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            let (Some(ya), Some(yb)) = (branches[a], branches[b]) else {
                continue;
            };
            if ya == yb {
                continue;
            }
            let k = meet_len(&Seq::Branch(ya.clone()), &Seq::Branch(yb.clone()))
                .expect("distinct branches split");
            let mut out = vec![OpenSetDescriptor::WholeSpace; points.len()];
            out[a] = OpenSetDescriptor::Vt(ya.prefix(k + 1));
            out[b] = OpenSetDescriptor::Vt(yb.prefix(k + 1));
            return Ok(out);
        }
    }
    Err(SpaceError::Internal(
        "pairwise distinct limit points all share one branch".into(),
    ))
}

/// Checks every point lies in its set and the sets have empty intersection.
pub fn verify_separation(
    space: &Space,
    points: &[SymbolicPoint],
    sets: &[OpenSetDescriptor],
) -> Result<bool, SpaceError> {
    if points.len() != sets.len() {
        return Ok(false);
    }
    for (p, s) in points.iter().zip(sets) {
        if !contains(space, s, p)? {
            return Ok(false);
        }
    }
    Ok(empty_intersection_witness(sets).is_some())
}
