//! Acceptance suite. Runs every criterion at zero tolerance and prints one
//! PASS/FAIL line per criterion; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use monokit::analysis::{
    bh_inf_status, check_3star, check_maximal, check_monotone, probe_pairs, rint_range_identity, simeq, BoundStatus,
    ThreeStarTag,
};
use monokit::exact_la::{frac, rat, Matrix, Rational, Subspace, Vector};
use monokit::operators::{normal_cone_operator, LinearRelation, Operator, Scenario, ScenarioOptions};
use monokit::polyhedra::{HRep, PolySet, Polyhedron, VRep};
use monokit::theorems::random::{random_composite_scenario, random_maximal_operator};
use monokit::theorems::{find_builtin, verify_composite_range, verify_displacement_range, Status, Verdict, WMode};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T>(r: monokit::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn v(x: &[i64]) -> Vector {
    Vector::from_ints(x)
}

fn vertical_axis() -> PolySet {
    PolySet::single(Polyhedron::subspace(&Subspace::new(2, vec![v(&[0, 1])])))
}

fn same_set(a: &PolySet, b: &PolySet) -> Result<bool, String> {
    Ok(ok(a.equal(b), "set equality")?.holds)
}

const POOL_SIZE: u64 = 50;

/// The seeded pool of random maximal monotone operators, dims 1 to 3.
fn operator_pool() -> Result<Vec<Operator>, String> {
    (0..POOL_SIZE)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
            ok(random_maximal_operator(&mut rng, 1 + (i as usize) % 3), "generator")
        })
        .collect()
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    (0..n).map(|_| frac(rng.gen_range(-12..=12), rng.gen_range(1..=4))).collect()
}

fn single_point(s: &PolySet) -> Option<Vector> {
    let p = s.pieces().first()?.reduced();
    let vr = p.vrep();
    if vr.vertices.len() != 1 || !vr.rays.is_empty() || !vr.lines.is_empty() {
        return None;
    }
    let x = vr.vertices[0].clone();
    s.pieces()
        .iter()
        .all(|q| q.same_set(&Polyhedron::point(x.clone())))
        .then_some(x)
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let rot = ok(Operator::from_matrix(&Matrix::from_ints(2, 2, &[0, -1, 1, 0])), "rotation")?;
    let line = ok(Polyhedron::from_h(HRep::new(2).eq(v(&[0, 1]), rat(0))), "line")?;
    let b = ok(normal_cone_operator(&line), "normal cone")?;
    let sum = ok(rot.op_sum(&b), "sum")?;
    let ran_sum = ok(sum.range(), "range")?;
    ensure!(same_set(&ran_sum, &vertical_axis())?, "ran(A+B) = {ran_sum}, expected {{0}}×Q");
    let plain = ok(ok(rot.range(), "ran A")?.minkowski_sum(&ok(b.range(), "ran B")?), "sum of ranges")?;
    ensure!(same_set(&plain, &PolySet::full(2))?, "ran A + ran B = {plain}, expected Q²");
    let neq = ok(ran_sum.equal(&plain), "equality")?;
    let w = neq.witness.ok_or("no witness for ran(A+B) ≠ ran A + ran B")?;
    ensure!(
        !neq.holds && plain.contains_point(&w) != ran_sum.contains_point(&w),
        "witness {w} does not separate the sets"
    );
    let s = ok(Scenario::new(rot, vec![(LinearRelation::identity(2), b)]), "scenario")?;
    let r = ok(verify_composite_range(&s), "verifier")?;
    ensure!(r.status == Status::Verified, "status {}", r.status.name());
    let (lhs, rhs) = (r.lhs.ok_or("no lhs")?, r.rhs.ok_or("no rhs")?);
    ensure!(same_set(&lhs, &vertical_axis())? && same_set(&rhs, &vertical_axis())?, "lhs {lhs}, rhs {rhs}");
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(1), "took {} ms", t.as_millis());
    Ok(format!("ran(A+B) = {{0}}×Q ≠ Q², separated at {w}; verifier Verified in {} ms", t.as_millis()))
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let pool = operator_pool()?;
    let mut samples = 0;
    for (i, m) in pool.iter().enumerate() {
        let n = m.dim_in();
        let jm = ok(m.resolvent(), "J_M")?;
        let jinv = ok(m.inverse().resolvent(), "J_{M⁻¹}")?;
        let other = ok(Operator::identity(n).and_then(|id| id.sub(&jm)), "Id − J_M")?;
        ensure!(ok(jinv.same_graph(&other), "graph equality")?, "operator {i}: J_(M⁻¹) ≠ Id − J_M");
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        for _ in 0..100 {
            let x = random_point(&mut rng, n);
            let p = single_point(&ok(jm.apply(&x), "J_M x")?).ok_or(format!("operator {i}: J_M {x} not a point"))?;
            let q = single_point(&ok(jinv.apply(&x), "J x")?).ok_or(format!("operator {i}: J_(M⁻¹) {x} not a point"))?;
            ensure!(m.graph_contains(&p, &q), "operator {i}: ({p}, {q}) not in gra M for x = {x}");
            samples += 1;
        }
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(60), "took {} s", t.as_secs());
    Ok(format!("{} operators, {samples} sampled points, {} ms", pool.len(), t.as_millis()))
}

fn criterion3() -> Outcome {
    let pool = operator_pool()?;
    let mut removed = 0;
    for (i, m) in pool.iter().enumerate() {
        let id = ok(Operator::identity(m.dim_in()), "Id")?;
        let ran = ok(ok(id.op_sum(m), "Id + M")?.range(), "range")?;
        ensure!(same_set(&ran, &PolySet::full(m.dim_in()))?, "operator {i}: ran(Id+M) = {ran}");
        ensure!(ok(check_maximal(m), "Minty")?.maximal, "operator {i} classified non-maximal");
        if m.pieces().len() > 1 {
            let mut rng = ChaCha8Rng::seed_from_u64(7000 + i as u64);
            let k = rng.gen_range(0..m.pieces().len());
            let cut = ok(m.remove_piece(k), "remove piece")?;
            let verdict = ok(check_maximal(&cut), "Minty")?;
            ensure!(!verdict.maximal, "operator {i} without piece {k} classified maximal");
            let w = verdict.witness.ok_or(format!("operator {i}: no witness"))?;
            let cut_ran = ok(ok(id.op_sum(&cut), "Id + M'")?.range(), "range")?;
            ensure!(!cut_ran.contains_point(&w), "operator {i}: witness {w} lies in ran(Id+M')");
            removed += 1;
        }
    }
    Ok(format!("{} surjectivity checks, {removed} piece removals detected with witnesses", pool.len()))
}

fn pairing(y: &Vector, z: &Vector, w: &Vector) -> Rational {
    let n = z.dim();
    (&y.slice(0, n) - z).dot(&(&y.slice(n, 2 * n) - w))
}

fn sample_graph(op: &Operator, rng: &mut ChaCha8Rng) -> Result<Vector, String> {
    let pieces = op.pieces();
    let p = &pieces[rng.gen_range(0..pieces.len())];
    ok(p.sample(rng), "sample")
}

/// Brute-force oracle: sampled pairings never undercut a reported bound.
fn oracle_agrees(op: &Operator, probes: &[(Vector, Vector)], rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut checked = 0;
    for (z, w) in probes {
        if let BoundStatus::Bounded { lower_bound } = ok(bh_inf_status(op, z, w), "bh")? {
            for _ in 0..500 {
                let y = sample_graph(op, rng)?;
                ensure!(pairing(&y, z, w) >= lower_bound, "sample {y} below bound {lower_bound} at ({z},{w})");
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn normal_cone_pool() -> Result<Vec<Operator>, String> {
    let mut sets = vec![
        ok(Polyhedron::bounding_box(&v(&[0]), &v(&[1])), "box")?,
        Polyhedron::point(v(&[0])),
        Polyhedron::point(v(&[1, -1])),
        ok(Polyhedron::bounding_box(&v(&[0, 0]), &v(&[1, 1])), "box")?,
        ok(Polyhedron::from_h(HRep::new(2).eq(v(&[0, 1]), rat(0))), "line")?,
        ok(Polyhedron::from_h(HRep::new(2).ge(v(&[1, 1]), rat(1))), "half-plane")?,
        ok(
            Polyhedron::from_h(HRep::new(2).ge(v(&[1, 0]), rat(0)).ge(v(&[0, 1]), rat(0))),
            "quadrant",
        )?,
        ok(Polyhedron::from_v(VRep::new(2, vec![v(&[0, 0]), v(&[2, 0]), v(&[0, 1])], vec![], vec![])), "triangle")?,
        ok(Polyhedron::from_v(VRep::new(2, vec![v(&[0, 0])], vec![v(&[1, 0]), v(&[1, 2])], vec![])), "cone")?,
        ok(Polyhedron::bounding_box(&v(&[0, 0, 0]), &v(&[1, 1, 1])), "cube")?,
        ok(
            Polyhedron::from_v(VRep::new(3, vec![v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], vec![], vec![])),
            "simplex",
        )?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..6 {
        let n = rng.gen_range(1..=2);
        let lo = random_point(&mut rng, n);
        let hi: Vector = lo.iter().map(|x| x + frac(rng.gen_range(0..=6), 2)).collect();
        sets.push(ok(Polyhedron::bounding_box(&lo, &hi), "box")?);
    }
    sets.iter().map(|c| ok(normal_cone_operator(c), "normal cone")).collect()
}

fn criterion4() -> Outcome {
    let budget = ScenarioOptions::default().probe_budget;
    let mut rng = ChaCha8Rng::seed_from_u64(99);

    let rot = ok(Operator::from_matrix(&Matrix::from_ints(2, 2, &[0, -1, 1, 0])), "rotation")?;
    let vr = ok(check_3star(&rot, budget), "3* rotation")?;
    ensure!(vr.tag == ThreeStarTag::Refuted, "rotation: {}", vr.describe());
    let wit = vr.witness.ok_or("rotation refuted without witness")?;
    ensure!(
        matches!(ok(bh_inf_status(&rot, &wit.x, &wit.u), "bh")?, BoundStatus::Unbounded { .. }),
        "witness probe is not unbounded"
    );
    // along point + t·dir the pairing is a quadratic in t; it must go to −∞
    let f = |t: i64| pairing(&wit.point.axpy(&rat(t), &wit.dir), &wit.x, &wit.u);
    for t in [0, 1, 2, 10] {
        let y = wit.point.axpy(&rat(t), &wit.dir);
        ensure!(rot.graph_contains(&y.slice(0, 2), &y.slice(2, 4)), "ray leaves the graph at t = {t}");
    }
    let a2 = f(2) - f(1) * rat(2) + f(0);
    let b = f(1) - f(0);
    ensure!(a2.is_negative() || (a2 == rat(0) && b.is_negative()), "pairing does not decrease without bound");

    let id = ok(Operator::identity(2), "Id")?;
    let vi = ok(check_3star(&id, budget), "3* identity")?;
    ensure!(vi.tag == ThreeStarTag::Proved, "identity: {}", vi.describe());

    let pool = normal_cone_pool()?;
    let mut samples = oracle_agrees(&id, &ok(probe_pairs(&id, budget), "probes")?, &mut rng)?;
    for (i, op) in pool.iter().enumerate() {
        let vn = ok(check_3star(op, budget), "3*")?;
        ensure!(
            matches!(vn.tag, ThreeStarTag::ProbePassed | ThreeStarTag::Proved),
            "normal cone {i}: {}",
            vn.describe()
        );
        samples += oracle_agrees(op, &ok(probe_pairs(op, budget), "probes")?, &mut rng)
            .map_err(|e| format!("normal cone {i}: {e}"))?;
    }
    Ok(format!(
        "rotation refuted with checked ray, Id proved, {} normal cones pass, {samples} oracle samples consistent",
        pool.len()
    ))
}

fn criterion5() -> Outcome {
    let mut verified = 0;
    let mut tried = 0;
    let mut seed = 0u64;
    while verified < 20 {
        ensure!(seed < 200, "only {verified} certified scenarios among {tried}");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = ok(random_composite_scenario(&mut rng), "generator")?;
        s.options.seed = seed;
        s.options.chain_samples = 100;
        let r = ok(verify_composite_range(&s), "verifier")?;
        tried += 1;
        seed += 1;
        ensure!(r.status != Status::Refuted, "seed {}: refuted: {:?}", seed - 1, r);
        if !r.hypotheses_hold() {
            continue;
        }
        ensure!(r.status == Status::Verified, "seed {}: status {}", seed - 1, r.status.name());
        let chain = r
            .checks
            .iter()
            .find(|c| c.name == "pairing chain inequality")
            .ok_or("no chain check")?;
        ensure!(
            chain.verdict == Verdict::Pass && chain.detail.starts_with("100 "),
            "seed {}: chain check {:?}",
            seed - 1,
            chain
        );
        verified += 1;
    }
    Ok(format!("{verified} certified scenarios verified out of {tried} generated, none refuted"))
}

fn containment_then_conclusion(r: &monokit::theorems::Report) -> Result<(), String> {
    let c = r
        .checks
        .iter()
        .position(|c| c.name.starts_with("ran(Id − T) ⊆"))
        .ok_or("no containment check")?;
    ensure!(r.checks[c].verdict == Verdict::Pass, "containment: {:?}", r.checks[c]);
    ensure!(r.status == Status::Verified, "status {}: {:?}", r.status.name(), r);
    Ok(())
}

fn criterion6() -> Outcome {
    let opts = ScenarioOptions::default();
    let id = ok(Operator::identity(1), "Id")?;
    let pt = ok(normal_cone_operator(&Polyhedron::point(v(&[0]))), "N_{0}")?;
    let r = ok(verify_displacement_range(&id, &pt, &WMode::FullDomainThreeStar, &opts), "mode ii")?;
    containment_then_conclusion(&r)?;
    ensure!(same_set(r.lhs.as_ref().ok_or("no lhs")?, &PolySet::full(1))?, "mode ii range");
    let polytopes = [
        (v(&[0, 0]), v(&[1, 1]), v(&[2, 0]), v(&[3, 2])),
        (v(&[0, 0]), v(&[2, 2]), v(&[1, 1]), v(&[3, 3])),
        (v(&[0]), v(&[1]), v(&[3]), v(&[4])),
        (v(&[0]), v(&[2]), v(&[1]), v(&[5])),
    ];
    let mut runs = 1;
    for (a_lo, a_hi, b_lo, b_hi) in &polytopes {
        let a = ok(Polyhedron::bounding_box(a_lo, a_hi).and_then(|p| normal_cone_operator(&p)), "A")?;
        let b = ok(Polyhedron::bounding_box(b_lo, b_hi).and_then(|p| normal_cone_operator(&p)), "B")?;
        let r = ok(verify_displacement_range(&a, &b, &WMode::BothThreeStar, &opts), "mode i")?;
        containment_then_conclusion(&r).map_err(|e| format!("boxes {a_lo}..{a_hi}, {b_lo}..{b_hi}: {e}"))?;
        runs += 1;
    }
    let tri = ok(
        Polyhedron::from_v(VRep::new(2, vec![v(&[0, 0]), v(&[2, 0]), v(&[0, 2])], vec![], vec![])),
        "triangle",
    )?;
    let a = ok(normal_cone_operator(&tri), "A")?;
    let b = ok(normal_cone_operator(&Polyhedron::point(v(&[3, 3]))), "B")?;
    let r = ok(verify_displacement_range(&a, &b, &WMode::BothThreeStar, &opts), "mode i")?;
    containment_then_conclusion(&r).map_err(|e| format!("triangle: {e}"))?;
    runs += 1;
    Ok(format!("{runs} runs verified (1 mode ii, {} mode i), containment held in each", runs - 1))
}

fn criterion7() -> Outcome {
    let strip = PolySet::single(ok(
        Polyhedron::from_h(HRep::new(2).ge(v(&[0, 1]), rat(-1)).le(v(&[0, 1]), rat(1))),
        "strip",
    )?);
    let cases = [
        ("kt_range_identity", PolySet::full(2)),
        ("kt_range_normal_cones", strip.clone()),
        ("kt_range_variant_i", strip),
    ];
    for (name, expected) in &cases {
        let r = ok(find_builtin(name).and_then(|b| b.run(&ScenarioOptions::default())), name)?;
        ensure!(r.status == Status::Verified, "{name}: {}", r.status.name());
        let lhs = r.lhs.as_ref().ok_or("no lhs")?;
        let rhs = r.rhs.as_ref().ok_or("no rhs")?;
        ensure!(same_set(lhs, expected)?, "{name}: lhs {lhs}, expected {expected}");
        ensure!(same_set(rhs, expected)?, "{name}: rhs {rhs}, expected {expected}");
        ensure!(ok(simeq(lhs, rhs), "simeq")?.holds, "{name}: sides not ≃");
    }
    Ok("identity, normal cones (variant ii) and L = 0 (variant i) all verified against expected sets".into())
}

fn criterion8() -> Outcome {
    let pool = operator_pool()?;
    for (i, m) in pool.iter().enumerate() {
        ensure!(ok(check_monotone(m), "monotone")?.monotone, "operator {i} not monotone");
        let r = ok(rint_range_identity(m), "rint identity")?;
        ensure!(r.status == Status::Verified, "operator {i}: {:?}", r);
    }
    Ok(format!("{} operators", pool.len()))
}

fn cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_monokit"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .map_err(|e| format!("cannot run binary: {e}"))?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn criterion9() -> Outcome {
    let verified = fixture("verified.scn");
    let args = [verified.as_str(), "--format", "machine", "--seed", "5"];
    let (c1, a) = cli(&args)?;
    let (c2, b) = cli(&args)?;
    ensure!(c1 == 0 && c2 == 0, "exit codes {c1}, {c2}");
    ensure!(a == b, "machine reports differ between runs");
    ensure!(a.starts_with(b"monokit-report/1\n"), "missing header");
    let (c3, x) = cli(&["--builtin", "composite_two_boxes", "--format", "machine", "--seed", "3"])?;
    let (c4, y) = cli(&["--builtin", "composite_two_boxes", "--format", "machine", "--seed", "3"])?;
    ensure!(c3 == 0 && c4 == 0 && x == y, "builtin machine reports differ");
    let codes: Vec<i32> = ["verified.scn", "hypothesis_failed.scn", "syntax_error.scn"]
        .iter()
        .map(|f| cli(&[&fixture(f)]).map(|r| r.0))
        .collect::<Result<_, _>>()?;
    ensure!(codes == [0, 2, 3], "fixture exit codes {codes:?}");
    Ok(format!("byte-identical reports ({} bytes); fixture exit codes {codes:?}", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("rotation plus line normal cone", criterion1),
        ("resolvent identity", criterion2),
        ("Minty criterion", criterion3),
        ("3* discrimination", criterion4),
        ("composite range suite", criterion5),
        ("displacement range modes", criterion6),
        ("Kuhn-Tucker ranges", criterion7),
        ("relative interior range identity", criterion8),
        ("determinism and exit codes", criterion9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{ms} ms] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{ms} ms] {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
