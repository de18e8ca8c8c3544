use super::verify::*;
use super::Report;
use crate::error::{Error, Result};
use crate::exact_la::{frac, rat, Matrix, Vector};
use crate::operators::{normal_cone_operator, LinearRelation, Operator, Scenario, ScenarioOptions};
use crate::polyhedra::{HRep, Polyhedron, PolySet};

/// A named, runnable catalog entry.
#[derive(Clone, Copy)]
pub struct Builtin {
    pub name: &'static str,
    pub description: &'static str,
    /// Set when the documented outcome is a failing report.
    pub expected_failure: bool,
    run: fn(&ScenarioOptions) -> Result<Report>,
}

impl Builtin {
    pub fn run(&self, opts: &ScenarioOptions) -> Result<Report> {
        let mut r = (self.run)(opts)?;
        r.label = self.name.to_string();
        r.expected_failure = self.expected_failure;
        Ok(r)
    }
}

fn v(x: &[i64]) -> Vector {
    Vector::from_ints(x)
}

fn rotation() -> Result<Operator> {
    Operator::from_matrix(&Matrix::from_ints(2, 2, &[0, -1, 1, 0]))
}

fn horizontal_line_cone() -> Result<Operator> {
    normal_cone_operator(&Polyhedron::from_h(HRep::new(2).eq(v(&[0, 1]), rat(0)))?)
}

fn box_cone(lo: &Vector, hi: &Vector) -> Result<Operator> {
    normal_cone_operator(&Polyhedron::bounding_box(lo, hi)?)
}

fn interval_cone(lo: i64, hi: i64) -> Result<Operator> {
    box_cone(&v(&[lo]), &v(&[hi]))
}

fn point_cone(p: &[i64]) -> Result<Operator> {
    normal_cone_operator(&Polyhedron::point(v(p)))
}

fn with_options(mut s: Scenario, opts: &ScenarioOptions) -> Scenario {
    s.options = opts.clone();
    s
}

fn example3(opts: &ScenarioOptions) -> Result<Report> {
    let s = Scenario::new(rotation()?, vec![(LinearRelation::identity(2), horizontal_line_cone()?)])?;
    verify_composite_range(&with_options(s, opts))
}

fn example3_plain(opts: &ScenarioOptions) -> Result<Report> {
    verify_plain_sum_formula(&rotation()?, &horizontal_line_cone()?, opts)
}

fn two_boxes(opts: &ScenarioOptions) -> Result<Report> {
    let half = frac(1, 2);
    let b1 = box_cone(&v(&[0, 0]), &v(&[1, 1]))?;
    let b2 = box_cone(&Vector::new(vec![half.clone(), half]), &Vector::new(vec![frac(3, 2), frac(3, 2)]))?;
    let s = Scenario::new(
        Operator::zero(2)?,
        vec![(LinearRelation::identity(2), b1), (LinearRelation::identity(2), b2)],
    )?;
    verify_composite_range(&with_options(s, opts))
}

fn empty_family(opts: &ScenarioOptions) -> Result<Report> {
    verify_composite_range(&with_options(Scenario::new(rotation()?, vec![])?, opts))
}

fn projected_interval(opts: &ScenarioOptions) -> Result<Report> {
    // A = Id on ℚ², one couple through L = (1 1) into N_{[0,1]}
    let l = LinearRelation::from_matrix(&Matrix::from_ints(1, 2, &[1, 1]));
    let s = Scenario::new(Operator::identity(2)?, vec![(l, interval_cone(0, 1)?)])?;
    verify_composite_range(&with_options(s, opts))
}

fn surjective_interval(opts: &ScenarioOptions) -> Result<Report> {
    verify_surjective_sum(&interval_cone(0, 1)?, &Operator::identity(1)?, opts)
}

fn surjective_rotation(opts: &ScenarioOptions) -> Result<Report> {
    verify_surjective_sum(&rotation()?, &Operator::identity(2)?, opts)
}

fn domain_interval(opts: &ScenarioOptions) -> Result<Report> {
    let m = interval_cone(0, 1)?;
    let probes = domain_probes(&m, opts.probe_budget)?;
    verify_domain_description(&m, &probes, opts)
}

fn mode_ii(opts: &ScenarioOptions) -> Result<Report> {
    verify_displacement_range(&Operator::identity(1)?, &point_cone(&[0])?, &WMode::FullDomainThreeStar, opts)
}

fn mode_i_boxes(opts: &ScenarioOptions) -> Result<Report> {
    let a = box_cone(&v(&[0, 0]), &v(&[1, 1]))?;
    let b = box_cone(&v(&[2, 0]), &v(&[3, 2]))?;
    verify_displacement_range(&a, &b, &WMode::BothThreeStar, opts)
}

fn points_custom(opts: &ScenarioOptions) -> Result<Report> {
    let w = PolySet::single(Polyhedron::point(v(&[2, 2])));
    verify_displacement_range(&point_cone(&[3, 1])?, &point_cone(&[1, -1])?, &WMode::Custom(w), opts)
}

fn kt_identity(opts: &ScenarioOptions) -> Result<Report> {
    let id = Operator::identity(1)?;
    verify_kt_range(&id, &id, &LinearRelation::identity(1), KtVariant::II, opts)
}

fn kt_cones(opts: &ScenarioOptions) -> Result<Report> {
    verify_kt_range(&point_cone(&[0])?, &interval_cone(-1, 1)?, &LinearRelation::identity(1), KtVariant::II, opts)
}

fn kt_variant_i(opts: &ScenarioOptions) -> Result<Report> {
    let zero = LinearRelation::from_matrix(&Matrix::zeros(1, 1));
    verify_kt_range(&Operator::identity(1)?, &interval_cone(-1, 1)?, &zero, KtVariant::I, opts)
}

fn reflected_point(opts: &ScenarioOptions) -> Result<Report> {
    verify_reflected_composition(&Operator::identity(1)?, &point_cone(&[0])?, opts)
}

fn reflected_interval(opts: &ScenarioOptions) -> Result<Report> {
    verify_reflected_composition(&Operator::identity(1)?, &interval_cone(-1, 1)?, opts)
}

fn rint_square(_: &ScenarioOptions) -> Result<Report> {
    crate::analysis::rint_range_identity(&box_cone(&v(&[0, 0]), &v(&[1, 1]))?)
}

fn sandwich_square(_: &ScenarioOptions) -> Result<Report> {
    let sq = PolySet::single(Polyhedron::bounding_box(&v(&[0, 0]), &v(&[1, 1]))?);
    crate::analysis::check_lemma2(&sq, &sq)
}

const CATALOG: &[Builtin] = &[
    Builtin {
        name: "example3_rotation_normalcone",
        description: "rotation plus the normal cone of a line: both sides equal {0}×ℚ",
        expected_failure: false,
        run: example3,
    },
    Builtin {
        name: "example3_plain_sum_formula",
        description: "same pair: ran A + ran B = ℚ² differs from ran(A+B) = {0}×ℚ (EXPECTED-FAILURE)",
        expected_failure: true,
        run: example3_plain,
    },
    Builtin {
        name: "composite_two_boxes",
        description: "A = 0 with the normal cones of two overlapping squares",
        expected_failure: false,
        run: two_boxes,
    },
    Builtin {
        name: "composite_empty_family",
        description: "no couples: both sides are ran A",
        expected_failure: false,
        run: empty_family,
    },
    Builtin {
        name: "composite_projected_interval",
        description: "A = Id on ℚ², L = (1 1), B = normal cone of [0,1]",
        expected_failure: false,
        run: projected_interval,
    },
    Builtin {
        name: "surjective_interval_plus_identity",
        description: "normal cone of [0,1] plus the identity is onto",
        expected_failure: false,
        run: surjective_interval,
    },
    Builtin {
        name: "surjective_rotation_plus_identity",
        description: "rotation plus the identity is onto",
        expected_failure: false,
        run: surjective_rotation,
    },
    Builtin {
        name: "domain_description_interval",
        description: "domain of the normal cone of [0,1] from bounded pairing infima",
        expected_failure: false,
        run: domain_interval,
    },
    Builtin {
        name: "theorem2_mode_ii_identity_plus_point",
        description: "Douglas–Rachford displacement of (Id, normal cone of {0}) with W = ran A + ran B",
        expected_failure: false,
        run: mode_ii,
    },
    Builtin {
        name: "displacement_mode_i_boxes",
        description: "two disjoint box normal cones with W = (dom A − dom B) ∩ (ran A + ran B)",
        expected_failure: false,
        run: mode_i_boxes,
    },
    Builtin {
        name: "displacement_custom_points",
        description: "normal cones of two points, W = {a − b}",
        expected_failure: false,
        run: points_custom,
    },
    Builtin {
        name: "kt_range_identity",
        description: "Kuhn–Tucker range with A = B = L = Id on ℚ¹",
        expected_failure: false,
        run: kt_identity,
    },
    Builtin {
        name: "kt_range_normal_cones",
        description: "Kuhn–Tucker range with A = N_{0}, B = N_[−1,1], L = Id",
        expected_failure: false,
        run: kt_cones,
    },
    Builtin {
        name: "kt_range_variant_i",
        description: "Kuhn–Tucker range with A = Id, B = N_[−1,1], L = 0, only B 3*",
        expected_failure: false,
        run: kt_variant_i,
    },
    Builtin {
        name: "reflected_identity_point",
        description: "Id − R_B∘R_A with A = Id, B = N_{0}",
        expected_failure: false,
        run: reflected_point,
    },
    Builtin {
        name: "reflected_identity_interval",
        description: "Id − R_B∘R_A with A = Id, B = N_[−1,1]",
        expected_failure: false,
        run: reflected_interval,
    },
    Builtin {
        name: "rint_identity_square_normal_cone",
        description: "relative-interior range identity for the normal cone of the unit square",
        expected_failure: false,
        run: rint_square,
    },
    Builtin {
        name: "hull_sandwich_square",
        description: "C = D = unit square",
        expected_failure: false,
        run: sandwich_square,
    },
];

pub fn builtin_scenarios() -> Vec<Builtin> {
    CATALOG.to_vec()
}

pub fn find_builtin(name: &str) -> Result<Builtin> {
    if name.is_empty() {
        return Err(Error::Input("empty builtin name".into()));
    }
    CATALOG
        .iter()
        .find(|b| b.name == name)
        .copied()
        .ok_or_else(|| Error::Input(format!("unknown builtin {name}")))
}
