use super::{combine, seq, sparse_matrix, LinearRelation, Operator};
use crate::analysis::check_maximal;
use crate::error::{check_dim, Error, Result};
use crate::exact_la::rat;
use crate::polyhedra::HRep;

/// The Douglas–Rachford operator of a pair and its displacement.
#[derive(Clone, Debug)]
pub struct DouglasRachford {
    /// `T = Id − J_A + J_B ∘ R_A`
    pub t: Operator,
    /// `Id − T = J_A − J_B ∘ R_A`
    pub disp: Operator,
    /// `Id − T` rebuilt as `J_{A⁻¹} + J_{B⁻¹} ∘ R_A` agrees with `disp`.
    pub dual_form_agrees: bool,
    /// `T + disp` is the identity.
    pub split_agrees: bool,
}

fn require_maximal(op: &Operator, name: &str) -> Result<()> {
    match check_maximal(op) {
        Ok(v) if v.maximal => Ok(()),
        Ok(_) => Err(Error::Precondition(format!(
            "{name} is not maximally monotone, so its resolvent is not total"
        ))),
        Err(Error::Precondition(msg)) => Err(Error::Precondition(format!("{name}: {msg}"))),
        Err(e) => Err(e),
    }
}

pub fn dr_displacement(a: &Operator, b: &Operator) -> Result<DouglasRachford> {
    check_dim("dr_displacement", a.dim_in(), b.dim_in())?;
    require_maximal(a, "A")?;
    require_maximal(b, "B")?;
    let n = a.dim_in();
    let id = Operator::identity(n)?;
    let ja = a.resolvent()?;
    let ra = Operator::linear_combination(&[(rat(2), &ja), (rat(-1), &id)])?;
    let jb_ra = ra.then(&b.resolvent()?)?;
    let disp = ja.sub(&jb_ra)?;
    let t = id.sub(&disp)?;
    let dual = a
        .inverse()
        .resolvent()?
        .op_sum(&ra.then(&b.inverse().resolvent()?)?)?;
    let dual_form_agrees = dual.same_graph(&disp)?;
    let split_agrees = t.op_sum(&disp)?.same_graph(&id)?;
    Ok(DouglasRachford {
        t,
        disp,
        dual_form_agrees,
        split_agrees,
    })
}

/// `(x, v) ↦ (A x + L* v) × (−L x + B⁻¹ v)` on ℚⁿ × ℚᵐ.
pub fn kuhn_tucker(a: &Operator, b: &Operator, l: &LinearRelation) -> Result<Operator> {
    check_dim("kuhn_tucker (A)", a.dim_in(), a.dim_out())?;
    check_dim("kuhn_tucker (B)", b.dim_in(), b.dim_out())?;
    check_dim("kuhn_tucker (L input)", a.dim_in(), l.dim_in())?;
    check_dim("kuhn_tucker (L output)", b.dim_in(), l.dim_out())?;
    let (n, m) = (a.dim_in(), b.dim_in());
    let diag = super::product_operator(&[a.clone(), b.inverse()])?;
    // skew part {((x, v), (u, −y)) : (x, y) ∈ gra L, (v, u) ∈ gra L*} over (x, y, v, u)
    let total = 2 * (n + m);
    let gl = l.to_operator()?;
    let gls = l.adjoint().to_operator()?;
    let mut entries = Vec::new();
    for i in 0..n {
        entries.push((i, i, rat(1)));
        entries.push((n + m + i, n + 2 * m + i, rat(1)));
    }
    for j in 0..m {
        entries.push((n + j, n + m + j, rat(1)));
        entries.push((2 * n + m + j, n + j, rat(-1)));
    }
    let out = sparse_matrix(total, total, &entries);
    let skew_graph = combine(
        total,
        &[(gl.graph(), seq(0, n + m)), (gls.graph(), seq(n + m, n + m))],
        &HRep::new(total),
        &out,
    )?;
    let skew = Operator::new(n + m, n + m, skew_graph)?;
    diag.op_sum(&skew)
}
