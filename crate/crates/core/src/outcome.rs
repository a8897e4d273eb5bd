use serde::{Deserialize, Serialize};

use crate::{Membership, SolutionSet, Vector};

/// Qualifiers attached to a circumcenter result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "note", rename_all = "snake_case")]
pub enum Note {
    /// The computed point is outside `dom f`, so the intersection with the
    /// domain is empty.
    OutsideDomain,
    /// The dual-space solution is outside `int dom f*`; no primal point
    /// corresponds to it.
    OutsideConjugateDomain,
    /// Newton failed from every start. Not a proof of emptiness.
    NumericalNonexistence { best_residual: f64 },
    /// The returned point failed the post-hoc equidistance check.
    VerificationFailed { gap: f64, tolerance: f64 },
    /// A flat is reported unfiltered; only its particular point was checked
    /// against `dom f`.
    FlatNotIntersectedWithDomain,
}

/// A circumcenter-type answer: the raw solution set plus domain and
/// verification metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub set: SolutionSet,
    /// Domain status of the representative point, when there is one.
    pub membership: Option<Membership>,
    /// Largest equidistance gap at the representative.
    pub gap: Option<f64>,
    pub notes: Vec<Note>,
}

impl Outcome {
    pub(crate) fn empty(notes: Vec<Note>) -> Self {
        Self {
            set: SolutionSet::Empty,
            membership: None,
            gap: None,
            notes,
        }
    }

    /// The unique point, if there is one and it lies in the domain.
    pub fn point(&self) -> Option<&Vector> {
        match (&self.set, self.membership) {
            (SolutionSet::Unique(p), Some(m)) if m.in_domain() => Some(p),
            _ => None,
        }
    }

    /// Empty once intersected with the domain.
    pub fn is_empty(&self) -> bool {
        match &self.set {
            SolutionSet::Empty => true,
            SolutionSet::Unique(_) => !self.membership.is_some_and(Membership::in_domain),
            SolutionSet::Flat { .. } => false,
        }
    }

    pub fn has_note(&self, pred: impl Fn(&Note) -> bool) -> bool {
        self.notes.iter().any(pred)
    }

    /// True when something about the answer deserves a warning status.
    pub fn is_warning(&self) -> bool {
        self.has_note(|n| {
            matches!(
                n,
                Note::NumericalNonexistence { .. } | Note::VerificationFailed { .. }
            )
        })
    }
}
