use super::monotone::check_maximal;
use super::SimeqVerdict;
use crate::error::{check_dim, Error, Result};
use crate::exact_la::frac;
use crate::operators::Operator;
use crate::polyhedra::{Membership, Polyhedron, PolySet};
use crate::theorems::{Report, StatementId, Verdict};

/// `S ≃ T`: equal closures and equal relative interiors.
///
/// Pieces are closed, so closures are the sets themselves and `≃` reduces to
/// set equality. For two convex sets the relative interiors are compared
/// independently as a cross-check.
pub fn simeq(s: &PolySet, t: &PolySet) -> Result<SimeqVerdict> {
    check_dim("simeq", s.dim(), t.dim())?;
    let eq = s.equal(t)?;
    let mut rint_equal = eq.holds;
    let mut witness = eq.witness;
    if let ([a], [b]) = (s.pieces(), t.pieces()) {
        for (x, y) in [(a, b), (b, a)] {
            let p = x.rel_interior_point()?;
            if !y.contains(&p, Membership::RelativeInterior) {
                rint_equal = false;
                witness.get_or_insert(p);
            }
        }
    }
    Ok(SimeqVerdict {
        holds: eq.holds && rint_equal,
        closure_equal: eq.holds,
        rint_equal,
        witness,
    })
}

/// `c + (y − c)/2`: a copy of `p` shrunk towards its relative-interior point,
/// contained in `rint p`.
fn shrunk(p: &Polyhedron) -> Result<Polyhedron> {
    let c = p.rel_interior_point()?;
    let half = p.translate(&-&c);
    let m = crate::exact_la::Matrix::identity(p.dim()).scale(&frac(1, 2));
    Ok(half.linear_image(&m)?.translate(&c))
}

/// Checks `conv D ⊆ C̄`, `rint conv D ⊆ C ⊆ D` and, when they hold, the
/// conclusion `C ≃ D ≃ conv D`.
pub fn check_lemma2(c: &PolySet, d: &PolySet) -> Result<Report> {
    check_dim("hull sandwich", c.dim(), d.dim())?;
    if c.is_empty() || d.is_empty() {
        return Err(Error::Input("both sets must be nonempty".into()));
    }
    let mut report = Report::new(StatementId::HullSandwich, "hull_sandwich", 0);
    let hull = d.convex_hull().expect("nonempty set has a hull");
    let hull_set = PolySet::single(hull.clone());

    let v = c.covers(&hull_set)?;
    report.hypothesis("conv D ⊆ cl C", Verdict::from_bool(v.holds), "exact covering test");
    report.witnesses.extend(v.witness);

    let centre = hull.rel_interior_point()?;
    let inner = c.contains_point(&centre) && c.covers_polyhedron(&shrunk(&hull)?)?.holds;
    report.hypothesis(
        "rint conv D ⊆ C",
        Verdict::from_bool(inner),
        "relative-interior point and half-scaled hull",
    );

    let v = d.covers(c)?;
    report.hypothesis("C ⊆ D", Verdict::from_bool(v.holds), "exact covering test");
    report.witnesses.extend(v.witness);

    if report.hypotheses_hold() {
        let s = simeq(d, &hull_set)?;
        report.check("D ≃ conv D", Verdict::from_bool(s.holds), "set equality and relative interiors");
        report.witnesses.extend(s.witness);
        let main = simeq(c, d)?;
        report.conclude(c.clone(), d.clone(), main);
    }
    Ok(report.finish())
}

/// `rint(ran M) = rint(conv ran M)` for a maximal monotone `M`.
pub fn rint_range_identity(op: &Operator) -> Result<Report> {
    if !check_maximal(op)?.maximal {
        return Err(Error::Precondition("operator is not maximally monotone".into()));
    }
    let mut report = Report::new(StatementId::RintRangeIdentity, "rint_range_identity", 0);
    report.hypothesis("M maximally monotone", Verdict::Pass, "Minty criterion");
    let ran = op.range()?;
    let hull = ran.convex_hull().expect("maximal operators have nonempty range");
    let hull_dim = hull.affine_dim();

    let centre = hull.rel_interior_point()?;
    let in_range = ran.contains_point(&centre);
    report.check(
        "rint conv ran M ∩ ran M ≠ ∅",
        Verdict::from_bool(in_range),
        format!("hull point {centre}"),
    );
    if !in_range {
        report.witnesses.push(centre);
    }
    for (i, p) in ran.pieces().iter().enumerate() {
        if p.affine_dim() != hull_dim {
            continue;
        }
        let x = p.rel_interior_point()?;
        let ok = hull.contains(&x, Membership::RelativeInterior);
        report.check(
            format!("rint piece {i} ⊆ rint conv ran M"),
            Verdict::from_bool(ok),
            format!("piece point {x}"),
        );
        if !ok {
            report.witnesses.push(x);
        }
    }
    let hull_set = PolySet::single(hull);
    let s = simeq(&ran, &hull_set)?;
    report.conclude(ran, hull_set, s);
    Ok(report.finish())
}
