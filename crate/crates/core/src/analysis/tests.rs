use num::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::exact_la::{rat, Matrix, Vector};
use crate::operators::{normal_cone_operator, staircase, Operator};
use crate::polyhedra::{HRep, Polyhedron, PolySet, VRep};
use crate::theorems::random::random_maximal_operator;
use crate::theorems::Verdict;

fn v(x: &[i64]) -> Vector {
    Vector::from_ints(x)
}

fn rotation() -> Operator {
    Operator::from_matrix(&Matrix::from_ints(2, 2, &[0, -1, 1, 0])).unwrap()
}

fn horizontal_line() -> Polyhedron {
    Polyhedron::from_h(HRep::new(2).eq(v(&[0, 1]), rat(0))).unwrap()
}

fn interval(lo: i64, hi: i64) -> Polyhedron {
    Polyhedron::bounding_box(&v(&[lo]), &v(&[hi])).unwrap()
}

fn abs_subdifferential() -> Operator {
    staircase(&[v(&[0, -1]), v(&[0, 1])], Some(v(&[-1, 0])), Some(v(&[1, 0]))).unwrap()
}

fn pairing(z: &Vector, w: &Vector, y: &Vector) -> crate::exact_la::Rational {
    let n = z.dim();
    (&y.slice(0, n) - z).dot(&(&y.slice(n, 2 * n) - w))
}

#[test]
fn bh_rotation_unbounded() {
    let s = bh_inf_status(&rotation(), &v(&[0, 0]), &v(&[1, 0])).unwrap();
    let BoundStatus::Unbounded { point, dir } = s else {
        panic!("expected unbounded, got {s:?}");
    };
    let f = |t: i64| pairing(&v(&[0, 0]), &v(&[1, 0]), &point.axpy(&rat(t), &dir));
    assert!(f(1) < f(0) && f(10) < f(1) && f(100) < f(10));
}

#[test]
fn bh_identity_and_zero() {
    let id = Operator::identity(2).unwrap();
    assert!(matches!(
        bh_inf_status(&id, &v(&[3, -1]), &v(&[0, 2])).unwrap(),
        BoundStatus::Bounded { .. }
    ));
    // (x - z)·(x - w) has minimum -|z - w|²/4
    let BoundStatus::Bounded { lower_bound } = bh_inf_status(&id, &v(&[2, 0]), &v(&[0, 0])).unwrap() else {
        panic!()
    };
    assert_eq!(lower_bound, rat(-1));
    let zero = Operator::zero(2).unwrap();
    assert_eq!(
        bh_inf_status(&zero, &v(&[5, 7]), &v(&[0, 0])).unwrap(),
        BoundStatus::Bounded { lower_bound: rat(0) }
    );
}

#[test]
fn monotone_examples() {
    assert!(check_monotone(&rotation()).unwrap().monotone);
    assert!(check_monotone(&normal_cone_operator(&horizontal_line()).unwrap()).unwrap().monotone);
    let pts = Operator::from_pieces(
        1,
        1,
        vec![Polyhedron::point(v(&[0, 1])), Polyhedron::point(v(&[1, 0]))],
    )
    .unwrap();
    let verdict = check_monotone(&pts).unwrap();
    assert!(!verdict.monotone);
    let ((x, u), (y, w)) = verdict.witness.unwrap();
    let mut pair = [x.concat(&u), y.concat(&w)];
    pair.sort();
    assert_eq!(pair, [v(&[0, 1]), v(&[1, 0])]);
}

#[test]
fn monotone_witness_within_one_piece() {
    let dec = Operator::from_matrix(&Matrix::from_ints(1, 1, &[-1])).unwrap();
    let verdict = check_monotone(&dec).unwrap();
    let ((x, u), (y, w)) = verdict.witness.unwrap();
    assert!(dec.graph_contains(&x, &u) && dec.graph_contains(&y, &w));
    assert!((&x - &y).dot(&(&u - &w)).is_negative());
}

#[test]
fn non_square_monotonicity_is_a_precondition_error() {
    let op = Operator::from_matrix(&Matrix::from_ints(1, 2, &[1, 0])).unwrap();
    assert!(matches!(check_monotone(&op), Err(crate::Error::Precondition(_))));
}

#[test]
fn maximal_examples() {
    assert!(check_maximal(&rotation()).unwrap().maximal);
    assert!(check_maximal(&normal_cone_operator(&interval(0, 1)).unwrap()).unwrap().maximal);
    // identity restricted to [0, 1]
    let seg = Polyhedron::from_v(VRep::new(2, vec![v(&[0, 0]), v(&[1, 1])], vec![], vec![])).unwrap();
    let op = Operator::from_pieces(1, 1, vec![seg]).unwrap();
    let verdict = check_maximal(&op).unwrap();
    assert!(!verdict.maximal);
    let w = verdict.witness.unwrap();
    assert!(w[0] < rat(0) || w[0] > rat(2));
}

#[test]
fn maximal_needs_monotone() {
    let dec = Operator::from_matrix(&Matrix::from_ints(1, 1, &[-1])).unwrap();
    assert!(matches!(check_maximal(&dec), Err(crate::Error::Precondition(_))));
}

#[test]
fn three_star_examples() {
    let r = check_3star(&rotation(), 64).unwrap();
    assert_eq!(r.tag, ThreeStarTag::Refuted);
    let w = r.witness.unwrap();
    let op = rotation();
    assert!(op.domain().unwrap().contains_point(&w.x));
    assert!(op.range().unwrap().contains_point(&w.u));
    assert!(matches!(bh_inf_status(&op, &w.x, &w.u).unwrap(), BoundStatus::Unbounded { .. }));

    let id = check_3star(&Operator::identity(2).unwrap(), 64).unwrap();
    assert_eq!(id.tag, ThreeStarTag::Proved);

    let sq = Polyhedron::bounding_box(&v(&[0, 0]), &v(&[1, 1])).unwrap();
    let nc = check_3star(&normal_cone_operator(&sq).unwrap(), 64).unwrap();
    assert_eq!(nc.tag, ThreeStarTag::ProbePassed);
    assert!(nc.certified && nc.holds());
    assert!(nc.probes_used > 0 && nc.probes_used <= 64);
}

#[test]
fn three_star_errors() {
    assert!(matches!(check_3star(&rotation(), 0), Err(crate::Error::Input(_))));
    let dec = Operator::from_matrix(&Matrix::from_ints(1, 1, &[-1])).unwrap();
    assert!(matches!(check_3star(&dec, 8), Err(crate::Error::Precondition(_))));
}

#[test]
fn skew_block_found_by_exact_analysis() {
    // rotation on a half-plane domain: probes are few, recession analysis decides
    let half = Polyhedron::from_h(HRep::new(4).ge(v(&[1, 0, 0, 0]), rat(0)).eq(v(&[0, 1, 1, 0]), rat(0)).eq(v(&[-1, 0, 0, 1]), rat(0))).unwrap();
    let op = Operator::from_pieces(2, 2, vec![half]).unwrap();
    assert!(check_monotone(&op).unwrap().monotone);
    let r = check_3star(&op, 1).unwrap();
    assert_eq!(r.tag, ThreeStarTag::Refuted);
}

#[test]
fn simeq_examples() {
    let vert = PolySet::single(Polyhedron::from_h(HRep::new(2).eq(v(&[1, 0]), rat(0))).unwrap());
    assert!(simeq(&vert, &vert).unwrap().holds);
    let s = simeq(&vert, &PolySet::full(2)).unwrap();
    assert!(!s.holds && !s.closure_equal);
    let w = s.witness.unwrap();
    assert!(!w[0].is_zero());

    let seg = PolySet::single(interval(0, 1));
    let ends = PolySet::new(1, vec![Polyhedron::point(v(&[0])), Polyhedron::point(v(&[1]))]).unwrap();
    let s = simeq(&seg, &ends).unwrap();
    assert!(!s.holds);
    let w = s.witness.unwrap();
    assert!(w[0] > rat(0) && w[0] < rat(1));
}

#[test]
fn lemma2_examples() {
    let sq = PolySet::single(Polyhedron::bounding_box(&v(&[0, 0]), &v(&[1, 1])).unwrap());
    let r = check_lemma2(&sq, &sq).unwrap();
    assert_eq!(r.status, crate::theorems::Status::Verified);

    let diag = PolySet::new(2, vec![Polyhedron::point(v(&[0, 0])), Polyhedron::point(v(&[1, 1]))]).unwrap();
    let c = PolySet::single(diag.convex_hull().unwrap());
    let r = check_lemma2(&c, &diag).unwrap();
    assert_eq!(r.status, crate::theorems::Status::HypothesisFailed);
    assert!(r.conclusion.is_none());
    let h = r.hypotheses.iter().find(|h| h.name == "C ⊆ D").unwrap();
    assert_eq!(h.verdict, Verdict::Fail);

    let corners = [v(&[0, 0]), v(&[1, 0]), v(&[1, 1]), v(&[0, 1])];
    let edges: Vec<Polyhedron> = (0..4)
        .map(|i| Polyhedron::from_v(VRep::new(2, vec![corners[i].clone(), corners[(i + 1) % 4].clone()], vec![], vec![])).unwrap())
        .collect();
    let boundary = PolySet::new(2, edges).unwrap();
    let r = check_lemma2(&sq, &boundary).unwrap();
    let verdict = |name: &str| r.hypotheses.iter().find(|h| h.name == name).unwrap().verdict;
    assert_eq!(verdict("conv D ⊆ cl C"), Verdict::Pass);
    assert_eq!(verdict("C ⊆ D"), Verdict::Fail);
    assert_eq!(r.status, crate::theorems::Status::HypothesisFailed);

    assert!(check_lemma2(&PolySet::empty(2), &sq).is_err());
}

#[test]
fn rint_identity_examples() {
    let sq = Polyhedron::bounding_box(&v(&[0, 0]), &v(&[1, 1])).unwrap();
    let nc = normal_cone_operator(&sq).unwrap();
    let r = rint_range_identity(&nc).unwrap();
    assert_eq!(r.status, crate::theorems::Status::Verified);
    assert!(r.lhs.unwrap().equal(&PolySet::full(2)).unwrap().holds);

    let r = rint_range_identity(&Operator::identity(2).unwrap()).unwrap();
    assert_eq!(r.status, crate::theorems::Status::Verified);

    let r = rint_range_identity(&abs_subdifferential()).unwrap();
    assert_eq!(r.status, crate::theorems::Status::Verified);
    assert!(r.rhs.unwrap().equal(&PolySet::single(interval(-1, 1))).unwrap().holds);

    let seg = Polyhedron::from_v(VRep::new(2, vec![v(&[0, 0]), v(&[1, 1])], vec![], vec![])).unwrap();
    let partial = Operator::from_pieces(1, 1, vec![seg]).unwrap();
    assert!(matches!(rint_range_identity(&partial), Err(crate::Error::Precondition(_))));
}

#[test]
fn probe_points_are_canonical() {
    let pts = probe_points(&PolySet::single(interval(0, 2)));
    assert_eq!(pts, vec![v(&[0]), v(&[1]), v(&[2])]);
    let ray = Polyhedron::from_h(HRep::new(1).ge(v(&[1]), rat(0))).unwrap();
    assert_eq!(probe_points(&PolySet::single(ray)), vec![v(&[0]), v(&[1])]);
}

#[test]
fn staircase_with_jump_is_monotone() {
    let op = staircase(&[v(&[0, 0]), v(&[1, 0]), v(&[1, 1])], Some(v(&[0, -1])), Some(v(&[0, 1]))).unwrap();
    assert!(check_monotone(&op).unwrap().monotone);
    assert!(check_maximal(&op).unwrap().maximal);
}

/// All points of a random sample of the graph.
fn graph_samples(op: &Operator, rng: &mut ChaCha8Rng, count: usize) -> Vec<Vector> {
    let pieces = op.pieces();
    (0..count)
        .map(|i| pieces[i % pieces.len()].sample(rng).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bh_status_is_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = random_maximal_operator(&mut rng, 2).unwrap();
        let z = op.domain().unwrap().pieces()[0].sample(&mut rng).unwrap();
        let w = Vector::from_ints(&[rand::Rng::gen_range(&mut rng, -2..=2), rand::Rng::gen_range(&mut rng, -2..=2)]);
        match bh_inf_status(&op, &z, &w).unwrap() {
            BoundStatus::Bounded { lower_bound } => {
                for y in graph_samples(&op, &mut rng, 500) {
                    prop_assert!(pairing(&z, &w, &y) >= lower_bound);
                }
            }
            BoundStatus::Unbounded { point, dir } => {
                prop_assert!(op.graph().contains_point(&point));
                let f = |t: i64| pairing(&z, &w, &point.axpy(&rat(t), &dir));
                prop_assert!(f(1) < f(0) && f(10) < f(1) && f(100) < f(10));
            }
            BoundStatus::Unknown => {}
        }
    }

    #[test]
    fn monotone_agrees_with_sampling(seed in any::<u64>(), dim in 1usize..=2, perturb in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut op = random_maximal_operator(&mut rng, dim).unwrap();
        if perturb {
            let flip = Matrix::identity(dim).block_diag(&Matrix::identity(dim).scale(&rat(-1)));
            op = Operator::new(dim, dim, op.graph().linear_image(&flip).unwrap()).unwrap();
        }
        let verdict = check_monotone(&op).unwrap();
        let samples = graph_samples(&op, &mut rng, 40);
        let mut sampled_violation = false;
        for a in &samples {
            for b in &samples {
                let d = a - b;
                if d.slice(0, dim).dot(&d.slice(dim, 2 * dim)).is_negative() {
                    sampled_violation = true;
                }
            }
        }
        if verdict.monotone {
            prop_assert!(!sampled_violation);
        } else {
            let ((x, u), (y, w)) = verdict.witness.unwrap();
            prop_assert!(op.graph_contains(&x, &u) && op.graph_contains(&y, &w));
            prop_assert!((&x - &y).dot(&(&u - &w)).is_negative());
        }
    }

    #[test]
    fn monotone_lower_bound_is_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = random_maximal_operator(&mut rng, 2).unwrap();
        let y = graph_samples(&op, &mut rng, 1).remove(0);
        let (z, w) = (y.slice(0, 2), y.slice(2, 4));
        prop_assert_eq!(bh_inf_status(&op, &z, &w).unwrap(), BoundStatus::Bounded { lower_bound: rat(0) });
    }

    #[test]
    fn simeq_is_an_equivalence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool: Vec<PolySet> = (0..4)
            .map(|_| random_maximal_operator(&mut rng, 1).unwrap().range().unwrap())
            .chain([PolySet::full(1), PolySet::single(interval(-1, 1))])
            .collect();
        for a in &pool {
            prop_assert!(simeq(a, a).unwrap().holds);
            for b in &pool {
                let ab = simeq(a, b).unwrap().holds;
                prop_assert_eq!(ab, simeq(b, a).unwrap().holds);
                for c in &pool {
                    if ab && simeq(b, c).unwrap().holds {
                        prop_assert!(simeq(a, c).unwrap().holds);
                    }
                }
            }
        }
    }

    #[test]
    fn minty_consistency(seed in any::<u64>(), dim in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = random_maximal_operator(&mut rng, dim).unwrap();
        prop_assert!(check_maximal(&op).unwrap().maximal);
        if op.pieces().len() > 1 {
            let i = rand::Rng::gen_range(&mut rng, 0..op.pieces().len());
            let cut = op.remove_piece(i).unwrap();
            let verdict = check_maximal(&cut).unwrap();
            prop_assert!(!verdict.maximal);
            let w = verdict.witness.unwrap();
            let sum = Matrix::identity(dim).hstack(&Matrix::identity(dim));
            prop_assert!(!cut.graph().linear_image(&sum).unwrap().contains_point(&w));
        }
    }

    #[test]
    fn rint_identity_on_random_operators(seed in any::<u64>(), dim in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = random_maximal_operator(&mut rng, dim).unwrap();
        let r = rint_range_identity(&op).unwrap();
        prop_assert_eq!(r.status, crate::theorems::Status::Verified);
    }

    // Each piece's closure and relative interior are recovered from a
    // polyhedron's own convex hull: the finite-dimensional remark after the
    // hull-sandwich statement.
    #[test]
    fn hull_sandwich_on_convex_sets(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = random_maximal_operator(&mut rng, 2).unwrap();
        let p = op.pieces()[0].linear_image(&crate::polyhedra::selector(4, &[0, 1])).unwrap();
        let set = PolySet::single(p);
        let r = check_lemma2(&set, &set).unwrap();
        prop_assert_eq!(r.status, crate::theorems::Status::Verified);
    }
}
