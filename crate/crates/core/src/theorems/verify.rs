use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Report, StatementId, Verdict};
use crate::analysis::{
    bh_inf_status, check_3star, check_maximal, check_monotone, probe_points, simeq, BoundStatus,
};
use crate::error::{check_dim, Error, Result};
use crate::exact_la::{rat, Matrix, Vector};
use crate::operators::{
    dr_displacement, kuhn_tucker, LinearRelation, Operator, Scenario, ScenarioOptions,
};
use crate::polyhedra::{HRep, Polyhedron, PolySet};

/// Candidate sets `W` for the displacement range.
#[derive(Clone, Debug, PartialEq)]
pub enum WMode {
    /// `(dom A − dom B) ∩ (ran A + ran B)`, both operators 3*.
    BothThreeStar,
    /// `ran A + ran B`, `A` 3* with full domain.
    FullDomainThreeStar,
    /// `dom A − dom B`, `A` 3* with full range.
    FullRangeThreeStar,
    Custom(PolySet),
}

impl WMode {
    pub fn name(&self) -> &'static str {
        match self {
            WMode::BothThreeStar => "both-3star",
            WMode::FullDomainThreeStar => "full-domain",
            WMode::FullRangeThreeStar => "full-range",
            WMode::Custom(_) => "custom",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KtVariant {
    /// Only `B` is 3*.
    I,
    /// Both `A` and `B` are 3*.
    II,
}

fn monotone_hyp(report: &mut Report, name: &str, op: &Operator) -> Result<()> {
    match check_monotone(op) {
        Ok(v) => {
            let detail = match &v.witness {
                None => "exact pairing minimization".to_string(),
                Some(((x, u), (y, w))) => format!("violated by ({x},{u}) and ({y},{w})"),
            };
            report.hypothesis(format!("{name} monotone"), Verdict::from_bool(v.monotone), detail);
            Ok(())
        }
        Err(Error::Precondition(msg)) => {
            report.hypothesis(format!("{name} monotone"), Verdict::Fail, msg);
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn maximal_hyp(report: &mut Report, name: &str, op: &Operator) -> Result<bool> {
    match check_maximal(op) {
        Ok(v) => {
            let detail = match &v.witness {
                None => "ran(Id + M) is the whole space".to_string(),
                Some(w) => format!("{w} ∉ ran(Id + M)"),
            };
            report.hypothesis(format!("{name} maximally monotone"), Verdict::from_bool(v.maximal), detail);
            Ok(v.maximal)
        }
        Err(Error::Precondition(msg)) => {
            report.hypothesis(format!("{name} maximally monotone"), Verdict::Fail, msg);
            Ok(false)
        }
        Err(e) => Err(e),
    }
}

fn three_star_hyp(report: &mut Report, name: &str, op: &Operator, budget: usize) -> Result<()> {
    match check_3star(op, budget) {
        Ok(v) => {
            let verdict = match (v.holds(), v.tag) {
                (true, _) => Verdict::Pass,
                (false, crate::analysis::ThreeStarTag::Refuted) => Verdict::Fail,
                (false, _) => Verdict::Unknown,
            };
            report.hypothesis(format!("{name} 3*"), verdict, v.describe());
            Ok(())
        }
        Err(Error::Precondition(msg)) => {
            report.hypothesis(format!("{name} 3*"), Verdict::Fail, msg);
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn set_hyp(report: &mut Report, name: &str, a: &PolySet, b: &PolySet) -> Result<()> {
    let v = a.equal(b)?;
    let detail = match &v.witness {
        None => "exact set equality".to_string(),
        Some(w) => format!("differs at {w}"),
    };
    report.hypothesis(name, Verdict::from_bool(v.holds), detail);
    Ok(())
}

fn hull_check(report: &mut Report, name: &str, w: &PolySet) -> Result<()> {
    match w.convex_hull() {
        None => report.check(name, Verdict::Pass, "empty set"),
        Some(h) => {
            let s = simeq(w, &PolySet::single(h))?;
            report.check(name, Verdict::from_bool(s.holds), "set equality and relative interiors");
            report.witnesses.extend(s.witness);
        }
    }
    Ok(())
}

fn single_valued(l: &LinearRelation) -> Result<Matrix> {
    l.as_matrix()
        .ok_or_else(|| Error::Input("the linear relation is not single-valued".into()))
}

/// Samples of a chain `(x, r, y_1, v_1, …)` with `(x, r) ∈ gra A`,
/// `y_k = L_k x` and `(y_k, v_k) ∈ gra B_k`.
struct ChainSampler {
    n: usize,
    dims: Vec<usize>,
    mats: Vec<Matrix>,
    pieces: Vec<Polyhedron>,
}

const CHAIN_COMBINATIONS: usize = 256;

impl ChainSampler {
    fn new(s: &Scenario) -> Result<ChainSampler> {
        let n = s.dim();
        let mats = s
            .couples
            .iter()
            .map(|(l, _)| single_valued(l))
            .collect::<Result<Vec<_>>>()?;
        let dims: Vec<usize> = s.couples.iter().map(|(l, _)| l.dim_out()).collect();
        let total = 2 * n + 2 * dims.iter().sum::<usize>();
        let mut offsets = Vec::new();
        let mut off = 2 * n;
        for &m in &dims {
            offsets.push(off);
            off += 2 * m;
        }
        let mut link = HRep::new(total);
        for (k, l) in mats.iter().enumerate() {
            for i in 0..dims[k] {
                // y_k,i − (L_k x)_i = 0
                let mut row = Vector::zeros(total);
                row[offsets[k] + i] = rat(1);
                for j in 0..n {
                    row[j] = -l.get(i, j);
                }
                link = link.eq(row, rat(0));
            }
        }
        let mut blocks: Vec<Vec<HRep>> = vec![s.a.pieces().iter().map(|p| p.hrep().lift(total, &(0..2 * n).collect::<Vec<_>>())).collect()];
        for (k, (_, b)) in s.couples.iter().enumerate() {
            let pos: Vec<usize> = (offsets[k]..offsets[k] + 2 * dims[k]).collect();
            blocks.push(b.pieces().iter().map(|p| p.hrep().lift(total, &pos)).collect());
        }
        let mut pieces = Vec::new();
        let mut idx = vec![0usize; blocks.len()];
        for _ in 0..CHAIN_COMBINATIONS {
            if blocks.iter().any(|b| b.is_empty()) {
                break;
            }
            let mut h = link.clone();
            for (b, &i) in idx.iter().enumerate() {
                h.extend(&blocks[b][i]);
            }
            let p = Polyhedron::from_h(h)?;
            if !p.is_empty() {
                pieces.push(p);
            }
            let mut b = 0;
            while b < idx.len() {
                idx[b] += 1;
                if idx[b] < blocks[b].len() {
                    break;
                }
                idx[b] = 0;
                b += 1;
            }
            if b == idx.len() {
                break;
            }
        }
        Ok(ChainSampler { n, dims, mats, pieces })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Result<Vector> {
        let i = rng.gen_range(0..self.pieces.len());
        self.pieces[i].sample(rng)
    }

    /// `(point, value, [(y_k, v_k)])` of a chain sample.
    fn split(&self, c: &Vector) -> (Vector, Vector, Vec<(Vector, Vector)>) {
        let n = self.n;
        let mut off = 2 * n;
        let mut parts = Vec::new();
        for &m in &self.dims {
            parts.push((c.slice(off, off + m), c.slice(off + m, off + 2 * m)));
            off += 2 * m;
        }
        (c.slice(0, n), c.slice(n, 2 * n), parts)
    }

    fn adjoint_sum(&self, vs: impl Iterator<Item = Vector>) -> Vector {
        let mut acc = Vector::zeros(self.n);
        for (k, v) in vs.enumerate() {
            acc = &acc + &self.mats[k].transpose().mul_vec(&v);
        }
        acc
    }
}

/// Checks `⟨x − z, u − w⟩ ≥ Σ ⟨y_k − d_k, v_k − s_k⟩` on sampled tuples.
fn chain_inequality(s: &Scenario, report: &mut Report) -> Result<()> {
    let name = "pairing chain inequality";
    let sampler = match ChainSampler::new(s) {
        Ok(c) => c,
        Err(Error::Input(msg)) => {
            report.check(name, Verdict::Unknown, msg);
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    if sampler.pieces.is_empty() {
        report.check(name, Verdict::Pass, "vacuous: the composite graph is empty");
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.options.seed);
    let ranges: Vec<&Operator> = s.couples.iter().map(|(_, b)| b).collect();
    for _ in 0..s.options.chain_samples {
        let (x, r, ys) = sampler.split(&sampler.sample(&mut rng)?);
        let (z, p, ds) = sampler.split(&sampler.sample(&mut rng)?);
        let mut ss = Vec::new();
        for b in &ranges {
            let g = b.pieces()[rng.gen_range(0..b.pieces().len())].sample(&mut rng)?;
            ss.push(g.slice(b.dim_in(), 2 * b.dim_in()));
        }
        let u = &r + &sampler.adjoint_sum(ys.iter().map(|(_, v)| v.clone()));
        let w = &p + &sampler.adjoint_sum(ss.iter().cloned());
        let lhs = (&x - &z).dot(&(&u - &w));
        let mut rhs = rat(0);
        for (k, (y, v)) in ys.iter().enumerate() {
            rhs += (y - &ds[k].0).dot(&(v - &ss[k]));
        }
        if lhs < rhs {
            report.check(name, Verdict::Fail, format!("violated at x={x} z={z}"));
            report.witnesses.push(x);
            return Ok(());
        }
    }
    report.check(
        name,
        Verdict::Pass,
        format!("{} sampled tuples, exact", s.options.chain_samples),
    );
    Ok(())
}

/// `ran(A + Σ L_k*∘B_k∘L_k) ≃ A(D) + Σ L_k*(ran B_k)` with
/// `D = ∩ L_k⁻¹(dom B_k)`.
pub fn verify_composite_range(s: &Scenario) -> Result<Report> {
    let opts = &s.options;
    let mut report = Report::new(StatementId::CompositeRange, "composite_range", opts.seed);
    monotone_hyp(&mut report, "A", &s.a)?;
    for (k, (_, b)) in s.couples.iter().enumerate() {
        three_star_hyp(&mut report, &format!("B_{}", k + 1), b, opts.probe_budget)?;
    }
    let m = s.composite()?;
    maximal_hyp(&mut report, "A + Σ L_k*∘B_k∘L_k", &m)?;

    let d = s.d_set()?;
    report.check("D ≠ ∅", Verdict::from_bool(!d.is_empty()), format!("D = {d}"));
    if report.hypotheses_hold() {
        chain_inequality(s, &mut report)?;
    }
    let lhs = m.range()?;
    let mut rhs = s.a.image_of_set(&d)?;
    for (l, b) in &s.couples {
        let part = l.adjoint().to_operator()?.image_of_set(&b.range()?)?;
        rhs = rhs.minkowski_sum(&part)?;
    }
    let verdict = simeq(&lhs, &rhs)?;
    report.conclude(lhs, rhs, verdict);
    Ok(report.finish())
}

/// `A + B` is onto when `A` is monotone, `B` is 3* and onto, and `A + B` is
/// maximally monotone.
pub fn verify_surjective_sum(a: &Operator, b: &Operator, opts: &ScenarioOptions) -> Result<Report> {
    check_dim("surjective_sum", a.dim_in(), b.dim_in())?;
    let mut report = Report::new(StatementId::SurjectiveSum, "surjective_sum", opts.seed);
    let full = PolySet::full(b.dim_in());
    monotone_hyp(&mut report, "A", a)?;
    three_star_hyp(&mut report, "B", b, opts.probe_budget)?;
    set_hyp(&mut report, "ran B = whole space", &b.range()?, &full)?;
    let sum = a.op_sum(b)?;
    maximal_hyp(&mut report, "A + B", &sum)?;
    let lhs = sum.range()?;
    let verdict = simeq(&lhs, &full)?;
    report.conclude(lhs, full, verdict);
    Ok(report.finish())
}

/// Default probes for the domain description: domain probes, their unit
/// shifts, paired with range probes.
pub fn domain_probes(m: &Operator, budget: usize) -> Result<Vec<(Vector, Vector)>> {
    let n = m.dim_in();
    let mut zs = probe_points(&m.domain()?);
    let base = zs.clone();
    for z in &base {
        for i in 0..n {
            for s in [1, -1] {
                zs.push(z.axpy(&rat(s), &Vector::unit(n, i)));
            }
        }
    }
    zs.sort();
    zs.dedup();
    let ws = probe_points(&m.range()?);
    let mut out = Vec::new();
    'outer: for z in &zs {
        for w in &ws {
            if out.len() == budget {
                break 'outer;
            }
            out.push((z.clone(), w.clone()));
        }
    }
    Ok(out)
}

/// `dom M ≃ {z : ∃ w, inf ⟨x − z, u − w⟩ > −∞}` for maximal `M`, checked
/// over a finite probe list.
pub fn verify_domain_description(m: &Operator, probes: &[(Vector, Vector)], opts: &ScenarioOptions) -> Result<Report> {
    if probes.is_empty() {
        return Err(Error::Input("the probe list is empty".into()));
    }
    if !check_maximal(m)?.maximal {
        return Err(Error::Precondition("operator is not maximally monotone".into()));
    }
    let mut report = Report::new(StatementId::DomainDescription, "domain_description", opts.seed);
    report.hypothesis("M maximally monotone", Verdict::Pass, "Minty criterion");
    let dom = m.domain()?;

    let mut forward = Verdict::Pass;
    let mut count = 0;
    for z in probe_points(&dom).into_iter().take(opts.probe_budget) {
        let values = m.apply(&z)?;
        let Some(piece) = values.pieces().first() else {
            continue;
        };
        let u = piece.vrep().vertices[0].clone();
        count += 1;
        match bh_inf_status(m, &z, &u)? {
            BoundStatus::Bounded { lower_bound } if lower_bound == rat(0) => {}
            BoundStatus::Unknown => forward = Verdict::Unknown,
            _ => {
                forward = Verdict::Fail;
                report.witnesses.push(z);
                break;
            }
        }
    }
    report.check(
        "graph points give infimum 0",
        forward,
        format!("{count} domain points"),
    );

    let mut reverse = Verdict::Pass;
    let (mut bounded, mut unbounded) = (0, 0);
    for (z, w) in probes {
        check_dim("domain probe z", m.dim_in(), z.dim())?;
        check_dim("domain probe w", m.dim_out(), w.dim())?;
        match bh_inf_status(m, z, w)? {
            BoundStatus::Bounded { .. } => {
                bounded += 1;
                if !dom.contains_point(z) {
                    reverse = Verdict::Fail;
                    report.witnesses.push(z.clone());
                }
            }
            BoundStatus::Unbounded { .. } => unbounded += 1,
            BoundStatus::Unknown => {
                if reverse == Verdict::Pass {
                    reverse = Verdict::Unknown;
                }
            }
        }
    }
    report.check(
        "bounded probes lie in dom M",
        reverse,
        format!("probe-verified: {} probes, {bounded} bounded, {unbounded} unbounded", probes.len()),
    );
    Ok(report.finish())
}

/// Searches `w = a − b = p + q` with both pairing infima finite, over the
/// probe points of `dom B` and `ran A`.
fn decompose(a: &Operator, b: &Operator, w: &Vector) -> Result<bool> {
    let bs = probe_points(&b.domain()?);
    let ps = probe_points(&a.range()?);
    for bb in &bs {
        let aa = bb + w;
        for p in &ps {
            let q = w - p;
            let fin = |s: BoundStatus| matches!(s, BoundStatus::Bounded { .. });
            if fin(bh_inf_status(a, &aa, p)?) && fin(bh_inf_status(b, bb, &q)?) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// `ran(Id − T) ≃ W ≃ conv W` for the Douglas–Rachford operator `T`.
pub fn verify_displacement_range(a: &Operator, b: &Operator, mode: &WMode, opts: &ScenarioOptions) -> Result<Report> {
    check_dim("displacement_range", a.dim_in(), b.dim_in())?;
    let n = a.dim_in();
    let mut report = Report::new(StatementId::DisplacementRange, format!("displacement_range/{}", mode.name()), opts.seed);
    let dr = dr_displacement(a, b)?;
    report.hypothesis("A maximally monotone", Verdict::Pass, "Minty criterion");
    report.hypothesis("B maximally monotone", Verdict::Pass, "Minty criterion");

    let (dom_a, dom_b, ran_a, ran_b) = (a.domain()?, b.domain()?, a.range()?, b.range()?);
    let dom_diff = dom_a.minkowski_sum(&dom_b.neg())?;
    let ran_sum = ran_a.minkowski_sum(&ran_b)?;
    let outer = dom_diff.intersect(&ran_sum)?;
    let ran_disp = dr.disp.range()?;

    let contained = outer.covers(&ran_disp)?;
    report.check(
        "ran(Id − T) ⊆ (dom A − dom B) ∩ (ran A + ran B)",
        Verdict::from_bool(contained.holds),
        "exact covering test",
    );
    report.witnesses.extend(contained.witness);
    report.check(
        "Id − T = J_A − J_B∘R_A = J_{A⁻¹} + J_{B⁻¹}∘R_A",
        Verdict::from_bool(dr.dual_form_agrees && dr.split_agrees),
        "graph equalities",
    );

    let w = match mode {
        WMode::BothThreeStar => {
            three_star_hyp(&mut report, "A", a, opts.probe_budget)?;
            three_star_hyp(&mut report, "B", b, opts.probe_budget)?;
            outer
        }
        WMode::FullDomainThreeStar => {
            three_star_hyp(&mut report, "A", a, opts.probe_budget)?;
            set_hyp(&mut report, "dom A = whole space", &dom_a, &PolySet::full(n))?;
            ran_sum
        }
        WMode::FullRangeThreeStar => {
            three_star_hyp(&mut report, "A", a, opts.probe_budget)?;
            set_hyp(&mut report, "ran A = whole space", &ran_a, &PolySet::full(n))?;
            dom_diff
        }
        WMode::Custom(w) => {
            check_dim("custom W", n, w.dim())?;
            let c = w.covers(&ran_disp)?;
            report.hypothesis("ran(Id − T) ⊆ W", Verdict::from_bool(c.holds), "exact covering test");
            report.witnesses.extend(c.witness);
            let points: Option<Vec<Vector>> = w
                .pieces()
                .iter()
                .map(|p| p.is_bounded().then(|| p.vrep().vertices.clone()).filter(|v| v.len() == 1).map(|mut v| v.remove(0)))
                .collect();
            match points {
                Some(points) => {
                    let mut ok = true;
                    for pt in &points {
                        if !decompose(a, b, pt)? {
                            ok = false;
                        }
                    }
                    report.hypothesis(
                        "every w ∈ W splits as a − b = p + q with finite infima",
                        if ok { Verdict::Pass } else { Verdict::Unknown },
                        format!("probe decomposition over {} points", points.len()),
                    );
                }
                None => report.hypothesis(
                    "every w ∈ W splits as a − b = p + q with finite infima",
                    Verdict::Unknown,
                    "decomposition is only searched for finite W",
                ),
            }
            w.clone()
        }
    };
    hull_check(&mut report, "W ≃ conv W", &w)?;
    let verdict = simeq(&ran_disp, &w)?;
    report.conclude(ran_disp, w, verdict);
    Ok(report.finish())
}

/// Range of the Kuhn–Tucker operator of `(A, B, L)`.
pub fn verify_kt_range(a: &Operator, b: &Operator, l: &LinearRelation, variant: KtVariant, opts: &ScenarioOptions) -> Result<Report> {
    let lm = single_valued(l)?;
    let statement = match variant {
        KtVariant::I => StatementId::KuhnTuckerI,
        KtVariant::II => StatementId::KuhnTuckerII,
    };
    let mut report = Report::new(statement, statement.name(), opts.seed);
    maximal_hyp(&mut report, "A", a)?;
    maximal_hyp(&mut report, "B", b)?;
    if variant == KtVariant::II {
        three_star_hyp(&mut report, "A", a, opts.probe_budget)?;
    }
    three_star_hyp(&mut report, "B", b, opts.probe_budget)?;

    let kt = kuhn_tucker(a, b, l)?;
    let (n, m) = (a.dim_in(), b.dim_in());
    let lhs = kt.range()?;
    let adj = l.adjoint().to_operator()?;
    let ls_ran_b = adj.image_of_set(&b.range()?)?;
    let rhs = match variant {
        KtVariant::I => {
            // (x, u) ↦ (u, −L x)
            let t = Matrix::zeros(n, n)
                .hstack(&Matrix::identity(n))
                .vstack(&lm.scale(&rat(-1)).hstack(&Matrix::zeros(m, n)));
            let first = a.graph().linear_image(&t)?;
            first.minkowski_sum(&ls_ran_b.product(&b.domain()?)?)?
        }
        KtVariant::II => {
            let left = a.range()?.minkowski_sum(&ls_ran_b)?;
            let minus_l = Operator::from_matrix(&lm.scale(&rat(-1)))?;
            let right = minus_l.image_of_set(&a.domain()?)?.minkowski_sum(&b.domain()?)?;
            left.product(&right)?
        }
    };
    let verdict = simeq(&lhs, &rhs)?;
    report.conclude(lhs, rhs, verdict);
    Ok(report.finish())
}

/// `ran(Id − R_B∘R_A) ≃ 2 ran A + 2 ran B` for 3* `A` with full domain.
pub fn verify_reflected_composition(a: &Operator, b: &Operator, opts: &ScenarioOptions) -> Result<Report> {
    check_dim("reflected_composition", a.dim_in(), b.dim_in())?;
    let n = a.dim_in();
    let mut report = Report::new(StatementId::ReflectedComposition, "reflected_composition", opts.seed);
    let dr = dr_displacement(a, b)?;
    report.hypothesis("A maximally monotone", Verdict::Pass, "Minty criterion");
    report.hypothesis("B maximally monotone", Verdict::Pass, "Minty criterion");
    three_star_hyp(&mut report, "A", a, opts.probe_budget)?;
    set_hyp(&mut report, "dom A = whole space", &a.domain()?, &PolySet::full(n))?;

    let id = Operator::identity(n)?;
    let ra = a.reflected_resolvent()?;
    let rb = b.reflected_resolvent()?;
    let op = id.sub(&ra.then(&rb)?)?;
    let twice = dr.disp.scale(&rat(2))?;
    report.check(
        "Id − R_B∘R_A = 2(J_A − J_B∘R_A)",
        Verdict::from_bool(op.same_graph(&twice)?),
        "graph equality",
    );
    let double = |s: PolySet| s.linear_image(&Matrix::identity(n).scale(&rat(2)));
    let two_ran_a = double(a.range()?)?;
    let ok = id.sub(&ra)?.range()?.equal(&two_ran_a)?.holds;
    report.check("ran(Id − R_A) = 2 ran A", Verdict::from_bool(ok), "set equality");
    let lhs = op.range()?;
    let rhs = two_ran_a.minkowski_sum(&double(b.range()?)?)?;
    let verdict = simeq(&lhs, &rhs)?;
    report.conclude(lhs, rhs, verdict);
    Ok(report.finish())
}

/// The sum formula `ran(A + B) ≃ ran A + ran B` together with the
/// hypotheses under which it is known to hold.
pub fn verify_plain_sum_formula(a: &Operator, b: &Operator, opts: &ScenarioOptions) -> Result<Report> {
    check_dim("plain_sum_formula", a.dim_in(), b.dim_in())?;
    let mut report = Report::new(StatementId::PlainSumFormula, "plain_sum_formula", opts.seed);
    monotone_hyp(&mut report, "A", a)?;
    monotone_hyp(&mut report, "B", b)?;
    let sum = a.op_sum(b)?;
    maximal_hyp(&mut report, "A + B", &sum)?;
    three_star_hyp(&mut report, "A", a, opts.probe_budget)?;
    three_star_hyp(&mut report, "B", b, opts.probe_budget)?;
    let lhs = sum.range()?;
    let rhs = a.range()?.minkowski_sum(&b.range()?)?;
    let verdict = simeq(&lhs, &rhs)?;
    report.conclude(lhs, rhs, verdict);
    Ok(report.finish())
}
