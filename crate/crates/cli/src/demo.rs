//! Canned walkthroughs of each instance: the chain data for one predicate,
//! the derived assert and instrument, and whether measuring is side-effect free.

use std::fmt::Write;

use effectus::discrete::{Atom, FiniteSet, NdImage, NondetChain, PartialFn, SetsChain};
use effectus::dist::{DistChain, FuzzyPred, Kernel, Rational, SubDist};
use effectus::harness::InstrumentFormula;
use effectus::linear::{vect_comprehension, vect_quotient, ClosedSubspace, FpSpace, FpSubspace, HilbChain, HilbSpace};
use effectus::ring::{ring_decompose, FiniteRing, RingChain, RingObj};
use effectus::vn::{AlgElement, CMatrix, MatrixAlgebra, VnChain, VnObject};
use effectus::{derive_assert, derive_instrument, side_effect, Chain, Result};
use num_complex::Complex64;

pub fn sets() -> Result<String> {
    let c = SetsChain;
    let x = FiniteSet::from_ids(&[1, 2, 3]);
    let p = FiniteSet::from_ids(&[1, 2]);
    let mut out = String::new();
    let q = c.quotient(&x, &c.ortho(&x, &p).expect("subsets have complements"))?;
    let cm = c.comprehension(&x, &p)?;
    let a = derive_assert(&c, &x, &p)?;
    let instr = derive_instrument(&c, &x, &p)?;
    writeln!(out, "sets: X = {x}, P = {p}").ok();
    writeln!(out, "  X/P⊥ = {}", q.object).ok();
    writeln!(out, "  {{X|P}} = {}", cm.object).ok();
    writeln!(out, "  {:<4} {:>8} {:>10} {:>11}", "x", "ξ_P⊥(x)", "asrt_P(x)", "instr_P(x)").ok();
    for &e in x.atoms() {
        let instr_e = match instr.image(e) {
            Some(s) => summand(s),
            None => "*".into(),
        };
        writeln!(out, "  {:<4} {:>8} {:>10} {:>11}", e, partial(&q.unit, e), partial(&a, e), instr_e).ok();
    }
    writeln!(out, "  π_P: {}", cm.counit.entries().map(|(a, b)| format!("{a} ↦ {}", opt(b))).collect::<Vec<_>>().join(", ")).ok();
    writeln!(out, "  side-effect free: {}", side_effect(&c, &x, &p)?.free).ok();
    Ok(out)
}

fn opt(a: Option<Atom>) -> String {
    a.map_or_else(|| "*".into(), |a| a.to_string())
}

fn partial(f: &PartialFn, x: Atom) -> String {
    opt(f.image(x))
}

fn summand(s: effectus::Summand<Atom>) -> String {
    match s {
        effectus::Summand::Left(a) => format!("κ₁{a}"),
        effectus::Summand::Right(a) => format!("κ₂{a}"),
    }
}

fn nd_image(i: &NdImage) -> String {
    let mut parts: Vec<String> = i.atoms().iter().map(|a| a.to_string()).collect();
    if i.has_star() {
        parts.push("*".into());
    }
    format!("{{{}}}", parts.join(", "))
}

pub fn powerset() -> Result<String> {
    let c = NondetChain;
    let x = FiniteSet::from_ids(&[1, 2, 3]);
    let p = FiniteSet::from_ids(&[1, 2]);
    let a = derive_assert(&c, &x, &p)?;
    let instr = derive_instrument(&c, &x, &p)?;
    let mut out = String::new();
    writeln!(out, "powerset: X = {x}, P = {p}").ok();
    for &e in x.atoms() {
        let outs: Vec<String> = instr
            .table
            .iter()
            .filter(|(b, _)| *b == e)
            .flat_map(|(_, s)| s.iter().map(|&t| summand(t)))
            .collect();
        writeln!(out, "  {e}: asrt_P = {}, instr_P = {{{}}}", nd_image(a.image(e)), outs.join(", ")).ok();
    }
    writeln!(out, "  side-effect free: {}", side_effect(&c, &x, &p)?.free).ok();
    Ok(out)
}

fn subdist(d: &SubDist) -> String {
    let mut parts: Vec<String> = d.support().map(|(y, w)| format!("{w}|{y}⟩")).collect();
    if !d.star().is_zero() {
        parts.push(format!("{}|*⟩", d.star()));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn kernel(name: &str, k: &Kernel, out: &mut String) {
    for (x, row) in k.rows() {
        writeln!(out, "  {name}({x}) = {}", subdist(row)).ok();
    }
}

pub fn dist() -> Result<String> {
    let c = DistChain;
    let x = FiniteSet::from_ids(&[1, 2]);
    let p = FuzzyPred::new([(Atom(1), Rational::new(1, 2)), (Atom(2), Rational::one())])?;
    let mut out = String::new();
    writeln!(out, "dist: X = {x}, p = (1/2, 1)").ok();
    let q = c.quotient(&x, &p)?;
    writeln!(out, "  X/p = {}", q.object).ok();
    kernel("ξ_p", &q.unit, &mut out);
    let cm = c.comprehension(&x, &p)?;
    writeln!(out, "  {{X|p}} = {}", cm.object).ok();
    kernel("asrt_p", &derive_assert(&c, &x, &p)?, &mut out);
    let instr = derive_instrument(&c, &x, &p)?;
    for (a, ws) in &instr.rows {
        let parts: Vec<String> = ws.iter().map(|(s, w)| format!("{w}|{}⟩", summand(*s))).collect();
        writeln!(out, "  instr_p({a}) = {}", parts.join(" + ")).ok();
    }
    let se = side_effect(&c, &x, &p)?;
    kernel("∇∘instr_p", &se.map, &mut out);
    writeln!(out, "  side-effect free: {}", se.free).ok();
    Ok(out)
}

pub fn ring() -> Result<String> {
    let c = RingChain;
    let r = FiniteRing::cyclic(6)?;
    let x = RingObj::whole(&r);
    let e = r.int(3);
    let d = ring_decompose(&x, e)?;
    d.verify()?;
    let mut out = String::new();
    writeln!(out, "ring: R = {x}, e = {e}, e⊥ = {}", x.ortho(e)).ok();
    writeln!(out, "  eR = {} ≅ {}, e⊥R = {} ≅ {}", d.left, iso(&d.left_type), d.right, iso(&d.right_type)).ok();
    for (a, (l, rr)) in &d.forward {
        writeln!(out, "  {a} ↦ ({l}, {rr}) ↦ {}", d.recompose(*l, *rr)).ok();
    }
    let a = derive_assert(&c, &x, &e)?;
    let asrt: Vec<String> = x.carrier().iter().map(|&y| format!("{y} ↦ {}", a.apply(y))).collect();
    writeln!(out, "  asrt_e: {}", asrt.join(", ")).ok();
    let instr = derive_instrument(&c, &x, &e)?;
    let one = r.one();
    writeln!(out, "  instr_e(1, 1) = {}, instr_e(1, 0) = {}", instr.apply(one, one), instr.apply(one, r.zero())).ok();
    writeln!(out, "  side-effect free: {}", side_effect(&c, &x, &e)?.free).ok();
    Ok(out)
}

fn iso(moduli: &[u32]) -> String {
    if moduli.is_empty() {
        return "0".into();
    }
    moduli.iter().map(|n| format!("Z{n}")).collect::<Vec<_>>().join("×")
}

fn real_matrix(n: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(n, n, entries.iter().map(|&v| Complex64::new(v, 0.0)))
}

fn fmt_matrix(m: &CMatrix) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| {
            let cells: Vec<String> = r
                .iter()
                .map(|z| {
                    let z = Complex64::new(clean(z.re), clean(z.im));
                    if z.im == 0.0 {
                        format!("{:.4}", z.re)
                    } else {
                        format!("{:.4}{:+.4}i", z.re, z.im)
                    }
                })
                .collect();
            cells.join(" ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

fn clean(v: f64) -> f64 {
    if v.abs() < 5e-13 {
        0.0
    } else {
        v
    }
}

pub fn vn() -> Result<String> {
    let c = VnChain::default();
    let alg = MatrixAlgebra::new(vec![2])?;
    let x = VnObject::whole(&alg);
    let p = AlgElement::single(real_matrix(2, &[1.0, 0.0, 0.0, 0.5]))?;
    let mut out = String::new();
    writeln!(out, "vn: X = M₂, p = diag(1, 1/2)").ok();
    let instr = derive_instrument(&c, &x, &p)?;
    let one = AlgElement::identity(&alg);
    let zero = AlgElement::zeros(&alg);
    let flip = AlgElement::single(real_matrix(2, &[0.0, 1.0, 1.0, 0.0]))?;
    writeln!(out, "  instr_p(1, 1) = {}", fmt_matrix(instr.apply(&one, &one).block(0))).ok();
    writeln!(out, "  instr_p(σx, 0) = √p·σx·√p = {}", fmt_matrix(instr.apply(&flip, &zero).block(0))).ok();
    writeln!(out, "  instr_p(0, 1) = p⊥ = {}", fmt_matrix(instr.apply(&zero, &one).block(0))).ok();
    let q = c.quotient(&x, &p.ortho())?;
    writeln!(out, "  X/p⊥ = {:?}", q.object.algebra().dims()).ok();
    writeln!(out, "  asrt_p(σx) = {}", fmt_matrix(derive_assert(&c, &x, &p)?.apply(&flip).block(0))).ok();
    let (s, co) = (0.6f64, 0.8f64);
    let (l1, l2) = (0.9, 0.3);
    let rotated = real_matrix(
        2,
        &[co * co * l1 + s * s * l2, co * s * (l1 - l2), co * s * (l1 - l2), s * s * l1 + co * co * l2],
    );
    let r = AlgElement::single(rotated)?;
    let se = side_effect(&c, &x, &r)?;
    writeln!(out, "  rotated effect r = {}", fmt_matrix(r.block(0))).ok();
    writeln!(out, "  side-effect free for r: {} (residual {:.3e})", se.free, se.residual).ok();
    let expected = c.expects_side_effect_free(&x, &r);
    writeln!(out, "  r central: {}", expected == Some(true)).ok();
    let central = AlgElement::scalar(&alg, 0.5);
    writeln!(out, "  side-effect free for 1/2·1: {}", side_effect(&c, &x, &central)?.free).ok();
    Ok(out)
}

pub fn linear() -> Result<String> {
    let mut out = String::new();
    let space = FpSpace::new(2, 3)?;
    let p = FpSubspace::span(space, vec![vec![1, 1, 0]])?;
    let q = vect_quotient(&p);
    let cm = vect_comprehension(&p);
    writeln!(out, "vect: V = {space}, P = span{{(1, 1, 0)}}").ok();
    writeln!(out, "  V/P = {}, ξ_P = {:?}", q.object, q.unit.matrix()).ok();
    writeln!(out, "  {{V|P}} = {}, π_P = {:?}", cm.object, cm.counit.matrix()).ok();
    let h = HilbChain::default();
    let x = HilbSpace::whole(2);
    let e1 = ClosedSubspace::span(&real_matrix(2, &[1.0, 0.0, 0.0, 0.0]).columns(0, 1).into_owned())?;
    let d = effectus::linear::hilb_orthocomplement(&e1);
    let v = nalgebra_vector(&[3.0, 4.0]);
    let (v1, v2) = d.split(&v);
    writeln!(out, "hilb: H = C², P = span{{e₁}}").ok();
    writeln!(
        out,
        "  (3, 4) ↦ ({}, {}) ⊕ ({}, {})",
        clean(v1[0].re),
        clean(v1[1].re),
        clean(v2[0].re),
        clean(v2[1].re)
    )
    .ok();
    let a = derive_assert(&h, &x, &e1)?;
    writeln!(out, "  asrt_P = {}", fmt_matrix(a.matrix())).ok();
    Ok(out)
}

fn nalgebra_vector(v: &[f64]) -> effectus::vn::CVector {
    effectus::vn::CVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)))
}
