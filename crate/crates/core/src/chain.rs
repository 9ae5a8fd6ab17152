//! The chain shape shared by every instance.
//!
//! An instance is a base category of (possibly partial) maps together with a
//! predicate functor `□` into posets. From that data we get the total category
//! `∫□` of pairs `(X, p)`, the truth and falsum functors, and, when the
//! instance provides them, quotient `X/p` (left adjoint to falsum) and
//! comprehension `{X|p}` (right adjoint to truth).
//!
//! Maps are always oriented in the direction of computation: a map `X → Y`
//! is a Kleisli map `X → Y + 1`. For the operator-algebraic instances (rings,
//! von Neumann algebras) this means the underlying algebra map runs `Y → X`.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A pair `(X, p)`: an object of `∫□`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredObject<O, P> {
    pub base: O,
    pub pred: P,
}

/// Quotient object `X/p` together with the unit `ξ_p : X → X/p`.
#[derive(Debug, Clone, Serialize)]
pub struct Quotient<O, M> {
    pub object: O,
    pub unit: M,
}

/// Comprehension object `{X|p}` together with the counit `π_p : {X|p} → X`.
#[derive(Debug, Clone, Serialize)]
pub struct Comprehension<O, M> {
    pub object: O,
    pub counit: M,
}

/// Left/right coprojection tag for values in `X + X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Summand<T> {
    /// `κ₁`
    Left(T),
    /// `κ₂`
    Right(T),
}

impl<T> Summand<T> {
    /// The codiagonal `∇ = [id, id]`.
    pub fn merge(self) -> T {
        match self {
            Summand::Left(t) | Summand::Right(t) => t,
        }
    }
}

/// The hooks an instance provides.
pub trait Chain: Sync {
    type Object: Clone + Debug + Serialize + Send + Sync;
    type Pred: Clone + Debug + Serialize + Send + Sync;
    type Map: Clone + Debug + Serialize + Send + Sync;

    fn name(&self) -> &'static str;

    /// Equality tolerance. Exact instances return 0.
    fn tolerance(&self) -> f64 {
        0.0
    }

    fn same_object(&self, a: &Self::Object, b: &Self::Object) -> bool;
    fn src<'a>(&self, f: &'a Self::Map) -> &'a Self::Object;
    fn dst<'a>(&self, f: &'a Self::Map) -> &'a Self::Object;

    fn identity(&self, x: &Self::Object) -> Self::Map;

    /// `g ⊙ f`, defined when `dst(f) = src(g)`.
    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Result<Self::Map>;

    /// Distance between two parallel maps: 0 for equal maps in exact instances,
    /// max entrywise difference in float-backed ones.
    fn map_residual(&self, f: &Self::Map, g: &Self::Map) -> f64;

    /// Substitution `□(f) : □(Y) → □(X)` for `f : X → Y`.
    fn subst(&self, f: &Self::Map, q: &Self::Pred) -> Self::Pred;

    fn top(&self, x: &Self::Object) -> Self::Pred;
    fn bottom(&self, x: &Self::Object) -> Self::Pred;
    fn leq(&self, x: &Self::Object, p: &Self::Pred, q: &Self::Pred) -> bool;
    fn pred_residual(&self, p: &Self::Pred, q: &Self::Pred) -> f64;

    /// `p⊥`, if the fibres carry an orthocomplement.
    fn ortho(&self, x: &Self::Object, p: &Self::Pred) -> Option<Self::Pred>;

    /// Least sharp predicate above `p`. Identity when every predicate is sharp.
    fn ceil(&self, _x: &Self::Object, p: &Self::Pred) -> Self::Pred {
        p.clone()
    }

    /// Greatest sharp predicate below `p`. Identity when every predicate is sharp.
    fn floor(&self, _x: &Self::Object, p: &Self::Pred) -> Self::Pred {
        p.clone()
    }

    fn quotient(&self, x: &Self::Object, p: &Self::Pred) -> Result<Quotient<Self::Object, Self::Map>>;

    fn comprehension(
        &self,
        x: &Self::Object,
        p: &Self::Pred,
    ) -> Result<Comprehension<Self::Object, Self::Map>>;

    /// For a hom `f : (X, p) → 0Y`, the unique `g : X/p → Y` with `g ⊙ ξ_p = f`.
    fn quotient_transpose(&self, x: &Self::Object, p: &Self::Pred, f: &Self::Map) -> Result<Self::Map>;

    /// For `g : X/p → Y`, the hom `(X, p) → 0Y` it corresponds to.
    fn quotient_untranspose(&self, x: &Self::Object, p: &Self::Pred, g: &Self::Map) -> Result<Self::Map> {
        let q = self.quotient(x, p)?;
        self.compose(g, &q.unit)
    }

    /// For a hom `f : 1Z → (X, p)`, the unique `g : Z → {X|p}` with `π_p ⊙ g = f`.
    fn comprehension_transpose(
        &self,
        x: &Self::Object,
        p: &Self::Pred,
        f: &Self::Map,
    ) -> Result<Self::Map>;

    fn comprehension_untranspose(
        &self,
        x: &Self::Object,
        p: &Self::Pred,
        g: &Self::Map,
    ) -> Result<Self::Map> {
        let c = self.comprehension(x, p)?;
        self.compose(&c.counit, g)
    }

    fn maps_equal(&self, f: &Self::Map, g: &Self::Map) -> bool {
        self.map_residual(f, g) <= self.tolerance()
    }

    fn preds_equal(&self, p: &Self::Pred, q: &Self::Pred) -> bool {
        self.pred_residual(p, q) <= self.tolerance()
    }

    fn is_sharp(&self, x: &Self::Object, p: &Self::Pred) -> bool {
        self.preds_equal(&self.floor(x, p), p) && self.preds_equal(&self.ceil(x, p), p)
    }
}

/// Instances whose asserts pair up into an instrument `X → X + X`.
pub trait Measurement: Chain {
    type Instrument: Clone + Debug + Serialize + Send + Sync;

    /// Combines `asrt_p` and `asrt_{p⊥}` into one total map.
    fn pair_asserts(
        &self,
        x: &Self::Object,
        on: &Self::Map,
        off: &Self::Map,
    ) -> Result<Self::Instrument>;

    /// `∇ ∘ instr`, as an endomap of `X`.
    fn codiagonal(&self, instr: &Self::Instrument) -> Self::Map;

    fn instrument_residual(&self, a: &Self::Instrument, b: &Self::Instrument) -> f64;
}

pub fn truth<C: Chain>(c: &C, x: &C::Object) -> PredObject<C::Object, C::Pred> {
    PredObject {
        base: x.clone(),
        pred: c.top(x),
    }
}

pub fn falsum<C: Chain>(c: &C, x: &C::Object) -> PredObject<C::Object, C::Pred> {
    PredObject {
        base: x.clone(),
        pred: c.bottom(x),
    }
}

/// `g ⊙ f = [g, κ₂] ∘ f`.
pub fn kleisli_compose<C: Chain>(c: &C, g: &C::Map, f: &C::Map) -> Result<C::Map> {
    c.compose(g, f)
}

/// Whether `f` is a morphism `src → dst` of `∫□`, i.e. `src.pred ≤ □(f)(dst.pred)`.
pub fn hom_check<C: Chain>(
    c: &C,
    f: &C::Map,
    src: &PredObject<C::Object, C::Pred>,
    dst: &PredObject<C::Object, C::Pred>,
) -> Result<bool> {
    if !c.same_object(c.src(f), &src.base) || !c.same_object(c.dst(f), &dst.base) {
        return Err(Error::Composition(format!(
            "{}: map endpoints do not match the predicate objects",
            c.name()
        )));
    }
    Ok(c.leq(&src.base, &src.pred, &c.subst(f, &dst.pred)))
}

fn ortho_or_err<C: Chain>(c: &C, x: &C::Object, p: &C::Pred) -> Result<C::Pred> {
    c.ortho(x, p).ok_or(Error::NoOrthocomplement(c.name()))
}

/// `asrt_p = π_{⌈p⌉} ⊙ ξ_{p⊥}`.
pub fn derive_assert<C: Chain>(c: &C, x: &C::Object, p: &C::Pred) -> Result<C::Map> {
    let p_perp = ortho_or_err(c, x, p)?;
    let xi = c.quotient(x, &p_perp)?;
    let pi = c.comprehension(x, &c.ceil(x, p))?;
    c.compose(&pi.counit, &xi.unit)
}

/// `ξ_{p⊥} ⊙ π_{⌈p⌉}`, an endomap of `{X|⌈p⌉}`. The identity exactly when `p` is sharp.
pub fn left_composite<C: Chain>(c: &C, x: &C::Object, p: &C::Pred) -> Result<C::Map> {
    let p_perp = ortho_or_err(c, x, p)?;
    let xi = c.quotient(x, &p_perp)?;
    let pi = c.comprehension(x, &c.ceil(x, p))?;
    c.compose(&xi.unit, &pi.counit)
}

/// `instr_p`, assembled from `asrt_p` and `asrt_{p⊥}`.
pub fn derive_instrument<C: Measurement>(c: &C, x: &C::Object, p: &C::Pred) -> Result<C::Instrument> {
    let p_perp = ortho_or_err(c, x, p)?;
    let on = derive_assert(c, x, p)?;
    let off = derive_assert(c, x, &p_perp)?;
    c.pair_asserts(x, &on, &off)
}

/// The side effect `∇ ∘ instr_p` of measuring `p`.
#[derive(Debug, Clone, Serialize)]
pub struct SideEffect<M> {
    pub map: M,
    /// Distance from the identity.
    pub residual: f64,
    pub free: bool,
}

pub fn side_effect<C: Measurement>(c: &C, x: &C::Object, p: &C::Pred) -> Result<SideEffect<C::Map>> {
    let instr = derive_instrument(c, x, p)?;
    let map = c.codiagonal(&instr);
    let residual = c.map_residual(&map, &c.identity(x));
    Ok(SideEffect {
        map,
        residual,
        free: residual <= c.tolerance(),
    })
}
