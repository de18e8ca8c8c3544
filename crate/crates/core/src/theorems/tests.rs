use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{random_composite_scenario, random_maximal_operator};
use super::*;
use crate::analysis::{bh_inf_status, check_maximal, check_monotone, BoundStatus};
use crate::exact_la::{frac, rat, Matrix, Subspace, Vector};
use crate::operators::{normal_cone_operator, LinearRelation, Operator, Scenario, ScenarioOptions};
use crate::polyhedra::{Polyhedron, PolySet};

fn v(x: &[i64]) -> Vector {
    Vector::from_ints(x)
}

fn opts() -> ScenarioOptions {
    ScenarioOptions::default()
}

fn interval_cone(lo: i64, hi: i64) -> Operator {
    normal_cone_operator(&Polyhedron::bounding_box(&v(&[lo]), &v(&[hi])).unwrap()).unwrap()
}

#[test]
fn catalog_contents() {
    let names: Vec<&str> = builtin_scenarios().iter().map(|b| b.name).collect();
    assert!(names.contains(&"example3_rotation_normalcone"));
    assert!(names.contains(&"theorem2_mode_ii_identity_plus_point"));
    assert!(matches!(find_builtin(""), Err(crate::Error::Input(_))));
    assert!(matches!(find_builtin("nope"), Err(crate::Error::Input(_))));
    let showcase = builtin_scenarios().into_iter().filter(|b| b.expected_failure).count();
    assert_eq!(showcase, 1);
}

#[test]
fn every_builtin_has_its_documented_outcome() {
    for b in builtin_scenarios() {
        let r = b.run(&opts()).unwrap();
        assert_eq!(r.label, b.name);
        if b.expected_failure {
            assert_ne!(r.status, Status::Verified, "{}", b.name);
            assert!(!r.conclusion.as_ref().unwrap().holds);
        } else {
            assert_eq!(r.status, Status::Verified, "{}: {r:?}", b.name);
        }
    }
}

#[test]
fn surjective_zero_plus_identity() {
    let r = verify_surjective_sum(&Operator::zero(2).unwrap(), &Operator::identity(2).unwrap(), &opts()).unwrap();
    assert_eq!(r.status, Status::Verified);
}

#[test]
fn surjective_needs_onto_b() {
    let r = verify_surjective_sum(&Operator::identity(1).unwrap(), &interval_cone(0, 1), &opts()).unwrap();
    let h = r.hypotheses.iter().find(|h| h.name == "ran B = whole space").unwrap();
    assert_eq!(h.verdict, Verdict::Pass);
    let r = verify_surjective_sum(&Operator::identity(1).unwrap(), &Operator::zero(1).unwrap(), &opts()).unwrap();
    assert_eq!(r.status, Status::HypothesisFailed);
}

#[test]
fn domain_description_examples() {
    let m = interval_cone(0, 1);
    let half = Vector::new(vec![frac(1, 2)]);
    assert_eq!(
        bh_inf_status(&m, &half, &v(&[0])).unwrap(),
        BoundStatus::Bounded { lower_bound: rat(0) }
    );
    let ws: Vec<(Vector, Vector)> = crate::analysis::probe_points(&m.range().unwrap())
        .into_iter()
        .map(|w| (v(&[2]), w))
        .collect();
    for (z, w) in &ws {
        assert!(matches!(bh_inf_status(&m, z, w).unwrap(), BoundStatus::Unbounded { .. }));
    }
    let r = verify_domain_description(&m, &ws, &opts()).unwrap();
    assert_eq!(r.status, Status::Verified);
    assert!(r.checks.iter().any(|c| c.detail.contains("probe-verified")));

    let id = Operator::identity(1).unwrap();
    let probes: Vec<(Vector, Vector)> = (-3..=3).map(|i| (v(&[i]), v(&[i]))).collect();
    for (z, w) in &probes {
        assert!(matches!(bh_inf_status(&id, z, w).unwrap(), BoundStatus::Bounded { .. }));
    }
    assert_eq!(verify_domain_description(&id, &probes, &opts()).unwrap().status, Status::Verified);
    assert!(verify_domain_description(&id, &[], &opts()).is_err());
}

#[test]
fn displacement_degenerate_mode() {
    let z = Operator::zero(2).unwrap();
    let r = verify_displacement_range(&z, &z, &WMode::BothThreeStar, &opts()).unwrap();
    assert_eq!(r.status, Status::Verified);
    assert!(r.rhs.unwrap().equal(&PolySet::single(Polyhedron::point(v(&[0, 0])))).unwrap().holds);
}

#[test]
fn displacement_full_range_mode() {
    let r = verify_displacement_range(&Operator::identity(1).unwrap(), &interval_cone(0, 1), &WMode::FullRangeThreeStar, &opts()).unwrap();
    assert_eq!(r.status, Status::Verified);
}

#[test]
fn displacement_custom_errors() {
    let z = Operator::zero(1).unwrap();
    let w = WMode::Custom(PolySet::full(2));
    assert!(verify_displacement_range(&z, &z, &w, &opts()).is_err());
    let w = WMode::Custom(PolySet::full(1));
    let r = verify_displacement_range(&z, &z, &w, &opts()).unwrap();
    assert_eq!(r.status, Status::Unknown);
}

#[test]
fn reflected_identity_pair() {
    let id = Operator::identity(1).unwrap();
    let r = verify_reflected_composition(&id, &id, &opts()).unwrap();
    assert_eq!(r.status, Status::Verified);
}

#[test]
fn kt_rejects_multivalued_relation() {
    let l = LinearRelation::new(1, 1, Subspace::new(2, vec![v(&[0, 1])])).unwrap();
    let id = Operator::identity(1).unwrap();
    assert!(matches!(verify_kt_range(&id, &id, &l, KtVariant::I, &opts()), Err(crate::Error::Input(_))));
}

#[test]
fn non_monotone_a_fails_hypotheses() {
    let a = Operator::from_matrix(&Matrix::from_ints(1, 1, &[-1])).unwrap();
    let s = Scenario::new(a, vec![(LinearRelation::identity(1), Operator::identity(1).unwrap())]).unwrap();
    let r = verify_composite_range(&s).unwrap();
    assert_eq!(r.status, Status::HypothesisFailed);
}

#[test]
fn rotation_as_b_is_not_certified() {
    let rot = Operator::from_matrix(&Matrix::from_ints(2, 2, &[0, -1, 1, 0])).unwrap();
    let s = Scenario::new(Operator::zero(2).unwrap(), vec![(LinearRelation::identity(2), rot)]).unwrap();
    let r = verify_composite_range(&s).unwrap();
    assert_eq!(r.status, Status::HypothesisFailed);
    let h = r.hypotheses.iter().find(|h| h.name == "B_1 3*").unwrap();
    assert!(h.detail.starts_with("refuted"));
}

#[test]
fn status_derivation() {
    let mut r = Report::new(StatementId::CompositeRange, "x", 0);
    r.hypothesis("h", Verdict::Unknown, "");
    r.check("c", Verdict::Fail, "");
    assert_eq!(r.clone().finish().status, Status::Unknown);
    r.hypothesis("g", Verdict::Fail, "");
    assert_eq!(r.finish().status, Status::HypothesisFailed);
    let mut r = Report::new(StatementId::CompositeRange, "x", 0);
    r.check("c", Verdict::Fail, "");
    assert_eq!(r.finish().status, Status::Refuted);
}

#[test]
fn statement_names_round_trip() {
    for id in StatementId::ALL {
        assert_eq!(StatementId::from_name(id.name()), Some(id));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn generated_operators_are_maximal(seed in any::<u64>(), dim in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = random_maximal_operator(&mut rng, dim).unwrap();
        prop_assert!(check_monotone(&op).unwrap().monotone);
        prop_assert!(check_maximal(&op).unwrap().maximal);
    }

    #[test]
    fn composite_reports_are_never_refuted(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = random_composite_scenario(&mut rng).unwrap();
        s.options.seed = seed;
        s.options.chain_samples = 30;
        let r = verify_composite_range(&s).unwrap();
        prop_assert_ne!(r.status, Status::Refuted);
        prop_assert_eq!(r.seed, seed);
    }
}
