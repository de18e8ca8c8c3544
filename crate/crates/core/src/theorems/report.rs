use std::fmt;

use crate::analysis::SimeqVerdict;
use crate::exact_la::Vector;
use crate::polyhedra::PolySet;

/// The statements the verifiers check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StatementId {
    /// Range of `A + Σ L_k*∘B_k∘L_k` versus `A(D) + Σ L_k*(ran B_k)`.
    CompositeRange,
    /// `A + B` is onto when `B` is 3* and onto.
    SurjectiveSum,
    /// Domain recovered from finiteness of the pairing infimum.
    DomainDescription,
    /// Range of the Douglas–Rachford displacement versus a candidate set `W`.
    DisplacementRange,
    KuhnTuckerI,
    KuhnTuckerII,
    /// `ran(Id − R_B∘R_A)` versus `2 ran A + 2 ran B`.
    ReflectedComposition,
    /// `C ≃ D ≃ conv D` for sets squeezed between `rint conv D` and `D`.
    HullSandwich,
    RintRangeIdentity,
    /// The unrestricted sum formula `ran(A + B) ≃ ran A + ran B`.
    PlainSumFormula,
}

impl StatementId {
    pub const ALL: [StatementId; 10] = [
        StatementId::CompositeRange,
        StatementId::SurjectiveSum,
        StatementId::DomainDescription,
        StatementId::DisplacementRange,
        StatementId::KuhnTuckerI,
        StatementId::KuhnTuckerII,
        StatementId::ReflectedComposition,
        StatementId::HullSandwich,
        StatementId::RintRangeIdentity,
        StatementId::PlainSumFormula,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatementId::CompositeRange => "composite_range",
            StatementId::SurjectiveSum => "surjective_sum",
            StatementId::DomainDescription => "domain_description",
            StatementId::DisplacementRange => "displacement_range",
            StatementId::KuhnTuckerI => "kt_range_i",
            StatementId::KuhnTuckerII => "kt_range_ii",
            StatementId::ReflectedComposition => "reflected_composition",
            StatementId::HullSandwich => "hull_sandwich",
            StatementId::RintRangeIdentity => "rint_range_identity",
            StatementId::PlainSumFormula => "plain_sum_formula",
        }
    }

    pub fn from_name(s: &str) -> Option<StatementId> {
        StatementId::ALL.into_iter().find(|id| id.name() == s)
    }
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unknown => "unknown",
        }
    }

    pub fn from_name(s: &str) -> Option<Verdict> {
        [Verdict::Pass, Verdict::Fail, Verdict::Unknown]
            .into_iter()
            .find(|v| v.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    Refuted,
    HypothesisFailed,
    Unknown,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
            Status::HypothesisFailed => "hypothesis-failed",
            Status::Unknown => "unknown",
        }
    }

    pub fn from_name(s: &str) -> Option<Status> {
        [Status::Verified, Status::Refuted, Status::HypothesisFailed, Status::Unknown]
            .into_iter()
            .find(|v| v.name() == s)
    }
}

/// Outcome of one verifier run.
///
/// `checks` are the parts of the conclusion other than the main `lhs ≃ rhs`
/// comparison (side containments, algebraic identities, probe sweeps).
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub statement: StatementId,
    pub label: String,
    pub seed: u64,
    pub hypotheses: Vec<Check>,
    pub checks: Vec<Check>,
    pub lhs: Option<PolySet>,
    pub rhs: Option<PolySet>,
    pub conclusion: Option<SimeqVerdict>,
    pub witnesses: Vec<Vector>,
    pub status: Status,
    /// Set on showcase reports whose failure is the documented outcome.
    pub expected_failure: bool,
}

impl Report {
    pub fn new(statement: StatementId, label: impl Into<String>, seed: u64) -> Report {
        Report {
            statement,
            label: label.into(),
            seed,
            hypotheses: Vec::new(),
            checks: Vec::new(),
            lhs: None,
            rhs: None,
            conclusion: None,
            witnesses: Vec::new(),
            status: Status::Unknown,
            expected_failure: false,
        }
    }

    pub fn hypothesis(&mut self, name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) {
        self.hypotheses.push(Check {
            name: name.into(),
            verdict,
            detail: detail.into(),
        });
    }

    pub fn check(&mut self, name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            verdict,
            detail: detail.into(),
        });
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.verdict == Verdict::Pass)
    }

    pub fn conclude(&mut self, lhs: PolySet, rhs: PolySet, verdict: SimeqVerdict) {
        if let Some(w) = &verdict.witness {
            self.witnesses.push(w.clone());
        }
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self.conclusion = Some(verdict);
    }

    /// Derives `status` from the recorded verdicts.
    pub fn finish(mut self) -> Report {
        let hyp = |v| self.hypotheses.iter().any(|h| h.verdict == v);
        let chk = |v| self.checks.iter().any(|h| h.verdict == v);
        let concl_fails = self.conclusion.as_ref().is_some_and(|c| !c.holds);
        self.status = if hyp(Verdict::Fail) {
            Status::HypothesisFailed
        } else if hyp(Verdict::Unknown) {
            Status::Unknown
        } else if concl_fails || chk(Verdict::Fail) {
            Status::Refuted
        } else if chk(Verdict::Unknown) {
            Status::Unknown
        } else {
            Status::Verified
        };
        self
    }
}
