//! Acceptance suite: one pass/fail line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use effectus::discrete::{Atom, FiniteSet, PartialFn, SetsChain};
use effectus::dist::{DistChain, FuzzyPred, Kernel, Rational};
use effectus::harness::{case_rng, run_law, CaseSpec, InstanceId, Law, LawReport, Sampler, Bounds};
use effectus::ring::{ring_decompose, FiniteRing, RingObj};
use effectus::vn::{cp_check, AlgElement, CMatrix, CpsuMap, MatrixAlgebra, VnChain, VnObject};
use effectus::{derive_assert, derive_instrument, side_effect, Chain, Summand};
use num_complex::Complex64;
use rand::Rng;
use serde_json::Value;

const SEED: u64 = 11;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn law(instance: InstanceId, law: Law, cases: Option<usize>) -> Result<LawReport, String> {
    let mut spec = CaseSpec::new(instance, law, SEED);
    spec.cases = cases;
    let r = run_law(&spec).ok_or_else(|| format!("{law} does not apply to {instance}"))?;
    if r.passed() {
        Ok(r)
    } else {
        Err(format!("{instance}/{law}: {} failures, first {:?}", r.failures, r.witnesses.first()))
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("{what} took {t:?}, limit {limit:?}"))
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn mat2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, b, cc, d])
}

/// Square root of a 2×2 positive semidefinite matrix: `(M + s·1)/t` with
/// `s = √det M` and `t = √(tr M + 2s)`.
fn sqrt2(m: &CMatrix) -> CMatrix {
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re.max(0.0);
    let s = det.sqrt();
    let t = (m[(0, 0)].re + m[(1, 1)].re + 2.0 * s).sqrt();
    if t == 0.0 {
        return CMatrix::zeros(2, 2);
    }
    (m + CMatrix::identity(2, 2) * c(s)) / c(t)
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A random 2×2 effect `U·diag(l₁, l₂)·U*`.
fn random_effect2(rng: &mut impl Rng) -> CMatrix {
    let (th, ph) = (rng.gen_range(0.0..std::f64::consts::PI), rng.gen_range(0.0..std::f64::consts::TAU));
    let (l1, l2) = (rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0));
    let u = mat2(
        c(th.cos()),
        -Complex64::from_polar(th.sin(), ph),
        Complex64::from_polar(th.sin(), -ph),
        c(th.cos()),
    );
    &u * mat2(c(l1), c(0.0), c(0.0), c(l2)) * u.adjoint()
}

fn random_matrix2(rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(2, 2, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn lueders(p: &CMatrix, a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (s, t) = (sqrt2(p), sqrt2(&(CMatrix::identity(2, 2) - p)));
    &s * a * &s + &t * b * &t
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    // Sets, X = {1,2,3}, P = {1,2}.
    let x = FiniteSet::from_ids(&[1, 2, 3]);
    let p = FiniteSet::from_ids(&[1, 2]);
    let asrt = derive_assert(&SetsChain, &x, &p).map_err(|e| e.to_string())?;
    let table: Vec<(u32, Option<u32>)> = asrt.entries().map(|(a, b)| (a.0, b.map(|b| b.0))).collect();
    ensure(table == vec![(1, Some(1)), (2, Some(2)), (3, None)], format!("sets assert {table:?}"))?;
    let instr = derive_instrument(&SetsChain, &x, &p).map_err(|e| e.to_string())?;
    let expected = [Summand::Left(Atom(1)), Summand::Left(Atom(2)), Summand::Right(Atom(3))];
    for (a, e) in x.atoms().iter().zip(expected) {
        ensure(instr.image(*a) == Some(e), format!("sets instrument at {a}"))?;
    }

    // Dist, p = (1/2, 1): instr(x) = p(x)|κ₁x⟩ + (1 − p(x))|κ₂x⟩.
    let x = FiniteSet::from_ids(&[1, 2]);
    let p = FuzzyPred::new([(Atom(1), Rational::new(1, 2)), (Atom(2), Rational::one())]).map_err(|e| e.to_string())?;
    let instr = derive_instrument(&DistChain, &x, &p).map_err(|e| e.to_string())?;
    for &a in x.atoms() {
        ensure(instr.weight(a, Summand::Left(a)) == *p.at(a), format!("dist κ₁ weight at {a}"))?;
        ensure(instr.weight(a, Summand::Right(a)) == p.at(a).complement(), format!("dist κ₂ weight at {a}"))?;
    }

    // Rings, Z₆ with e = 3: instr(x, y) = 3x + 4y mod 6.
    let r = FiniteRing::cyclic(6).map_err(|e| e.to_string())?;
    let z6 = RingObj::whole(&r);
    let instr = derive_instrument(&effectus::ring::RingChain, &z6, &r.int(3)).map_err(|e| e.to_string())?;
    for a in 0..6 {
        for b in 0..6 {
            ensure(instr.apply(r.int(a), r.int(b)) == r.int((3 * a + 4 * b) % 6), format!("ring instr({a}, {b})"))?;
        }
    }

    // vN: p = diag(1, 1/2) and 200 seeded effects on M₂, against a closed-form 2×2 square root.
    let vn = VnChain::default();
    let alg = MatrixAlgebra::new(vec![2]).map_err(|e| e.to_string())?;
    let m2 = VnObject::whole(&alg);
    let mut rng = case_rng(SEED, 0);
    let mut worst: f64 = 0.0;
    for i in 0..=200 {
        let p = if i == 0 { mat2(c(1.0), c(0.0), c(0.0), c(0.5)) } else { random_effect2(&mut rng) };
        let pe = AlgElement::single(p.clone()).map_err(|e| e.to_string())?;
        let instr = derive_instrument(&vn, &m2, &pe).map_err(|e| e.to_string())?;
        let (a, b) = (random_matrix2(&mut rng), random_matrix2(&mut rng));
        let got = instr.apply(
            &AlgElement::single(a.clone()).map_err(|e| e.to_string())?,
            &AlgElement::single(b.clone()).map_err(|e| e.to_string())?,
        );
        worst = worst.max(max_diff(got.block(0), &lueders(&p, &a, &b)));
    }
    ensure(worst <= 1e-9, format!("vn instrument residual {worst:e}"))?;

    let mut cases = 0;
    for i in [InstanceId::Sets, InstanceId::Powerset, InstanceId::Dist, InstanceId::Ring, InstanceId::Vn] {
        for l in [Law::Factorization, Law::Instrument] {
            cases += law(i, l, Some(200))?.cases;
        }
    }
    within(start, Duration::from_secs(10), "closed forms")?;
    Ok(format!("canned tables exact, vn residual {worst:.1e}, {cases} seeded cases"))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let mut summary = Vec::new();
    for i in InstanceId::ALL {
        for l in [Law::QuotientAdjunction, Law::ComprehensionAdjunction] {
            let r = law(i, l, None)?;
            if matches!(i, InstanceId::Vn | InstanceId::Hilb) {
                ensure(r.max_residual <= 1e-9, format!("{i}/{l} residual {:e}", r.max_residual))?;
            }
            if i == InstanceId::Dist {
                ensure(r.cases >= 500, "dist needs 500 cases")?;
            }
            if i == InstanceId::Vn {
                ensure(r.cases >= 200, "vn needs 200 cases")?;
            }
            summary.push(format!("{i}:{}", r.cases));
        }
    }
    within(start, Duration::from_secs(60), "adjunction round trips")?;
    Ok(format!("cases {}", summary.join(" ")))
}

/// Every partial function `X → Y` as a table.
fn all_partial(x: &FiniteSet, y: &FiniteSet) -> Vec<PartialFn> {
    let choices: Vec<Option<Atom>> = std::iter::once(None).chain(y.atoms().iter().copied().map(Some)).collect();
    let n = x.len();
    let total = choices.len().pow(n as u32);
    (0..total)
        .map(|mut code| {
            let images: Vec<Option<Atom>> = (0..n)
                .map(|_| {
                    let v = choices[code % choices.len()];
                    code /= choices.len();
                    v
                })
                .collect();
            PartialFn::from_fn(x, y, |a| images[x.index_of(a).expect("atom of x")]).expect("valid table")
        })
        .collect()
}

fn criterion_3() -> Verdict {
    // Independent count of factorizations in sets.
    let c = SetsChain;
    let x = FiniteSet::from_ids(&[1, 2, 3]);
    let y = FiniteSet::from_ids(&[1, 2]);
    let mut checked = 0;
    for p in x.subsets() {
        let q = c.quotient(&x, &p).map_err(|e| e.to_string())?;
        let candidates = all_partial(&q.object, &y);
        for f in all_partial(&x, &y) {
            if p.atoms().iter().any(|&a| f.image(a).is_some()) {
                continue;
            }
            let n = candidates
                .iter()
                .filter(|g| c.compose(g, &q.unit).map(|h| h == f).unwrap_or(false))
                .count();
            ensure(n == 1, format!("P = {p}, f = {f:?}: {n} factorizations"))?;
            checked += 1;
        }
    }
    let mut reports = Vec::new();
    for i in [InstanceId::Sets, InstanceId::Powerset, InstanceId::Ring, InstanceId::Dist, InstanceId::Vn] {
        for l in [Law::QuotientAdjunction, Law::ComprehensionAdjunction] {
            reports.push(law(i, l, None)?);
        }
    }
    let total: usize = reports.iter().map(|r| r.cases).sum();
    Ok(format!("{checked} sets homs factor once by direct count; {total} harness cases, no second solutions"))
}

fn criterion_4() -> Verdict {
    let mut cases = 0;
    for i in InstanceId::ALL.into_iter().filter(|i| i.laws().contains(&Law::Coincidence)) {
        cases += law(i, Law::Coincidence, None)?.cases;
    }
    Ok(format!("{cases} cases over every instance with an orthocomplement (vect has none)"))
}

fn criterion_5() -> Verdict {
    let mut out = Vec::new();
    for i in InstanceId::ALL.into_iter().filter(|i| i.laws().contains(&Law::Sharpness)) {
        let r = law(i, Law::Sharpness, Some(200))?;
        match i {
            InstanceId::Dist => ensure(r.max_residual == 0.0, "dist floor/ceil must be exact")?,
            InstanceId::Vn => ensure(r.max_residual <= 1e-9, format!("vn residual {:e}", r.max_residual))?,
            _ => {}
        }
        out.push(format!("{i}:{:.0e}", r.max_residual));
    }
    Ok(format!("200 cases each, max residual {}", out.join(" ")))
}

fn criterion_6() -> Verdict {
    let cp = law(InstanceId::Vn, Law::CompletePositivity, Some(200))?;
    let m2 = VnObject::whole(&MatrixAlgebra::new(vec![2]).map_err(|e| e.to_string())?);
    let transpose = CpsuMap::from_linear(&m2, &m2, |a| a.map_blocks(|b| b.transpose()));
    let report = cp_check(&transpose, 1e-9).map_err(|e| e.to_string())?;
    ensure(!report.completely_positive, "transpose map accepted")?;
    ensure((report.min_eigenvalue + 1.0).abs() <= 1e-9, format!("witness eigenvalue {}", report.min_eigenvalue))?;
    let instr = law(InstanceId::Vn, Law::Instrument, Some(200))?;
    ensure(instr.max_residual <= 1e-9, format!("instrument residual {:e}", instr.max_residual))?;
    let cs = law(InstanceId::Vn, Law::CauchySchwarz, Some(200))?;
    Ok(format!(
        "{} cases with every structural map CP, transpose witness {:.9}, instr(1,1) residual {:.1e}, Cauchy-Schwarz {:.1e}",
        cp.cases, report.min_eigenvalue, instr.max_residual, cs.max_residual
    ))
}

fn criterion_7() -> Verdict {
    let c = DistChain;
    let b = Bounds::default();
    for i in 0..500 {
        let mut rng = case_rng(SEED, i);
        let x = c.sample_object(&mut rng, &b).map_err(|e| e.to_string())?;
        let p = c.sample_pred(&mut rng, &x, &b);
        let se = side_effect(&c, &x, &p).map_err(|e| e.to_string())?;
        ensure(se.map == Kernel::identity(&x), format!("case {i}: ∇∘instr ≠ id on {x}"))?;
    }
    Ok("∇∘instr_p = id exactly for 500 sampled predicates".into())
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let r = FiniteRing::cyclic(6).map_err(|e| e.to_string())?;
    let z6 = RingObj::whole(&r);
    let d = ring_decompose(&z6, r.int(3)).map_err(|e| e.to_string())?;
    ensure(d.left_type == vec![2] && d.right_type == vec![3], format!("types {:?} × {:?}", d.left_type, d.right_type))?;
    for k in 0..6 {
        let a = r.int(k);
        let (u, v) = d.image(a).ok_or("element missing")?;
        ensure(u == r.int(3 * k % 6) && v == r.int(4 * k % 6), format!("forward at {k}"))?;
        ensure(d.recompose(u, v) == a, format!("inverse at {k}"))?;
    }
    let all = law(InstanceId::Ring, Law::Decomposition, None)?;
    within(start, Duration::from_secs(5), "ring decomposition")?;
    Ok(format!("Z6 ≅ Z2 × Z3 with two-sided inverse; {} (ring, idempotent) pairs with |R| ≤ 36", all.cases))
}

fn effectus(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_effectus"))
        .args(args)
        .env_remove("EFFECTUS_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn criterion_9() -> Verdict {
    let start = Instant::now();
    let (code, _) = effectus(&["check"])?;
    ensure(code == 0, format!("default suite exited {code}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), format!("default suite took {elapsed:?}"))?;
    let mut flipped = 0;
    for i in InstanceId::ALL {
        for which in ["quotient", "comprehension"] {
            let law = format!("{which}-adjunction");
            let (code, json) = effectus(&["check", "--instance", i.name(), "--law", &law, "--corrupt", which, "--format", "json"])?;
            ensure(code == 1, format!("{i} with corrupted {which} transpose exited {code}"))?;
            let report: Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
            let w = &report["reports"][0]["witnesses"][0];
            ensure(!w["inputs"].is_null(), format!("{i}/{which}: witness without inputs"))?;
            if let Some(s) = w["case_seed"].as_u64() {
                let s = s.to_string();
                let (code, json) =
                    effectus(&["check", "--instance", i.name(), "--law", &law, "--corrupt", which, "--replay", &s, "--format", "json"])?;
                let again: Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
                ensure(
                    code == 1 && again["reports"][0]["witnesses"][0]["inputs"] == w["inputs"],
                    format!("{i}/{which}: replay of {s} did not reproduce"),
                )?;
            }
            flipped += 1;
        }
    }
    Ok(format!("default suite exit 0 in {:.1}s; {flipped}/14 corrupted transposes exit 1 with replayable witnesses", elapsed.as_secs_f64()))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("closed-form reproduction", criterion_1),
        ("adjunction round trips", criterion_2),
        ("universal-property uniqueness", criterion_3),
        ("coincidence", criterion_4),
        ("sharpness", criterion_5),
        ("quantum sanity", criterion_6),
        ("probabilistic side-effect freeness", criterion_7),
        ("ring decomposition", criterion_8),
        ("cli contract", criterion_9),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} ({name}): PASS ({detail})", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL ({why})", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
