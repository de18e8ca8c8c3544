//! Exact certificate checkers for operator properties.
//!
//! Monotonicity and the pairing infimum reduce to minimizing a quadratic over
//! a polyhedron, which [`quadratic::minimize`] decides exactly. Maximality
//! uses Minty's criterion, 3* combines a probe sweep with an exact analysis
//! of the recession cones of the graph pieces, and `≃` is set equality in
//! the closed polyhedral model.

mod monotone;
pub mod quadratic;
mod simeq;
mod three_star;

#[cfg(test)]
mod tests;

pub use monotone::{check_maximal, check_monotone};
pub use simeq::{check_lemma2, rint_range_identity, simeq};
pub use three_star::{bh_inf_status, check_3star, probe_pairs, probe_points};

use crate::exact_la::{Rational, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundStatus {
    /// The infimum is finite and equal to `lower_bound`.
    Bounded { lower_bound: Rational },
    /// The objective decreases strictly along `point + t·dir`, `t = 1, 10, 100`.
    /// Both vectors are graph points `(x, u)` stacked.
    Unbounded { point: Vector, dir: Vector },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimeqVerdict {
    pub holds: bool,
    pub closure_equal: bool,
    pub rint_equal: bool,
    pub witness: Option<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneVerdict {
    pub monotone: bool,
    /// Two graph points `(x, u)`, `(y, v)` with `⟨x − y, u − v⟩ < 0`.
    pub witness: Option<((Vector, Vector), (Vector, Vector))>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalVerdict {
    pub maximal: bool,
    /// A point outside `ran(Id + M)`.
    pub witness: Option<Vector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeStarTag {
    Proved,
    Refuted,
    ProbePassed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeStarWitness {
    pub x: Vector,
    pub u: Vector,
    pub point: Vector,
    pub dir: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeStarVerdict {
    pub tag: ThreeStarTag,
    pub witness: Option<ThreeStarWitness>,
    pub probes_used: usize,
    /// For `ProbePassed`: whether the exact recession analysis confirmed the
    /// property beyond the probes.
    pub certified: bool,
}

impl ThreeStarVerdict {
    /// Proved, or passed with the exact recession analysis.
    pub fn holds(&self) -> bool {
        match self.tag {
            ThreeStarTag::Proved => true,
            ThreeStarTag::ProbePassed => self.certified,
            ThreeStarTag::Refuted => false,
        }
    }

    pub fn describe(&self) -> String {
        match self.tag {
            ThreeStarTag::Proved => format!("proved ({} probes)", self.probes_used),
            ThreeStarTag::Refuted => {
                let w = self.witness.as_ref().expect("refutation carries a witness");
                format!("refuted at x={} u={}", w.x, w.u)
            }
            ThreeStarTag::ProbePassed if self.certified => {
                format!("probe-passed ({} probes), recession analysis exact", self.probes_used)
            }
            ThreeStarTag::ProbePassed => format!("probe-passed ({} probes), not certified", self.probes_used),
        }
    }
}
