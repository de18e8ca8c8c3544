//! End-to-end verifiers: each checks the hypotheses of a range statement on
//! concrete operators, computes both sides exactly and compares them.

mod builtins;
pub mod random;
mod report;
mod verify;

#[cfg(test)]
mod tests;

pub use builtins::{builtin_scenarios, find_builtin, Builtin};
pub use report::{Check, Report, StatementId, Status, Verdict};
pub use verify::{
    domain_probes, verify_composite_range, verify_displacement_range, verify_domain_description,
    verify_kt_range, verify_plain_sum_formula, verify_reflected_composition, verify_surjective_sum,
    KtVariant, WMode,
};
