//! Computable ambient categories and the model structures placed on them.
//!
//! A [`Carrier`] supplies the underlying category: objects, morphisms, finite
//! (co)limits, hom enumeration and lift search. It also carries one native model
//! structure. A [`Kind`] selects either that native structure or one of the two
//! trivial structures over the same carrier, so a per-object family of structures
//! ([`ModelAssignment`]) shares all encodings and (co)limit evaluators.

pub mod chain;
pub mod finset;
pub mod opposite;
pub mod verify;

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::FinCategory;

pub use chain::{ChainCarrier, ChainMap, Complex};
pub use finset::{FinSet, FinSetMap};
pub use opposite::{OpMor, Opposite};

/// A commuting square `top: A → X`, `left: A → B`, `right: X → Y`, `bottom: B → Y`.
/// Lifts are morphisms `B → X` making both triangles commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square<M> {
    pub left: M,
    pub right: M,
    pub top: M,
    pub bottom: M,
}

/// Apex plus legs of a (co)cone, one leg per object of the indexing shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone<O, M> {
    pub apex: O,
    pub legs: Vec<M>,
}

pub type LiftIter<'a, M> = Box<dyn Iterator<Item = M> + 'a>;

pub trait Carrier: Send + Sync + 'static {
    type Obj: Clone + Eq + Hash + Debug + Send + Sync;
    type Mor: Clone + Eq + Hash + Debug + Send + Sync;

    fn name(&self) -> String;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`; panics when the pair is not composable (an internal bug).
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;

    fn initial(&self) -> Self::Obj;
    fn terminal(&self) -> Self::Obj;

    /// Colimit of the diagram `entries`/`edges` (indexed by `shape` objects/morphisms).
    fn colimit(&self, shape: &FinCategory, entries: &[Self::Obj], edges: &[Self::Mor])
        -> Result<Cone<Self::Obj, Self::Mor>>;
    /// The unique map out of a colimit agreeing with the given cocone legs.
    fn colimit_mediate(
        &self,
        colim: &Cone<Self::Obj, Self::Mor>,
        target: &Self::Obj,
        legs: &[Self::Mor],
    ) -> Result<Self::Mor>;
    fn limit(&self, shape: &FinCategory, entries: &[Self::Obj], edges: &[Self::Mor])
        -> Result<Cone<Self::Obj, Self::Mor>>;
    fn limit_mediate(
        &self,
        lim: &Cone<Self::Obj, Self::Mor>,
        source: &Self::Obj,
        legs: &[Self::Mor],
    ) -> Result<Self::Mor>;

    /// A two-sided inverse, if one exists.
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor>;

    fn native_is_cof(&self, f: &Self::Mor) -> bool;
    fn native_is_fib(&self, f: &Self::Mor) -> bool;
    fn native_is_we(&self, f: &Self::Mor) -> bool;
    fn native_factor_cof_acyfib(&self, f: &Self::Mor) -> Result<(Self::Mor, Self::Mor)>;
    fn native_factor_acycof_fib(&self, f: &Self::Mor) -> Result<(Self::Mor, Self::Mor)>;
    /// Generating cofibrations and acyclic cofibrations of the native structure.
    fn native_generating(&self, budget: &Budget) -> Option<(Vec<Self::Mor>, Vec<Self::Mor>)>;

    /// Generating sets for the structure `we = iso, cof = fib = all`, when known.
    fn we_iso_generating(&self) -> Option<(Vec<Self::Mor>, Vec<Self::Mor>)> {
        None
    }

    /// All objects within the budget, in canonical order.
    fn objects(&self, budget: &Budget) -> Result<Vec<Self::Obj>>;

    /// Lifts of a square in lexicographic order of their encodings.
    fn lifts<'a>(&'a self, sq: &Square<Self::Mor>) -> Result<LiftIter<'a, Self::Mor>>;

    /// A uniformly random lift, when one exists. The default collects up to `cap` lifts.
    fn sample_lift(
        &self,
        sq: &Square<Self::Mor>,
        rng: &mut dyn rand::RngCore,
        cap: usize,
    ) -> Result<Option<Self::Mor>> {
        let all: Vec<Self::Mor> = self.lifts(sq)?.take(cap).collect();
        if all.is_empty() {
            return Ok(None);
        }
        let k = rng.gen_range(0..all.len());
        Ok(Some(all[k].clone()))
    }

    fn encode_obj(&self, x: &Self::Obj) -> serde_json::Value;
    fn encode_mor(&self, f: &Self::Mor) -> serde_json::Value;
    fn decode_obj(&self, v: &serde_json::Value) -> Result<Self::Obj>;
    fn decode_mor(&self, v: &serde_json::Value) -> Result<Self::Mor>;

    /// The square `∅ → x`, `y → *` whose lifts are exactly `Hom(x, y)`.
    fn hom_square(&self, x: &Self::Obj, y: &Self::Obj) -> Square<Self::Mor> {
        Square {
            left: self.from_initial(x),
            right: self.to_terminal(y),
            top: self.from_initial(y),
            bottom: self.to_terminal(x),
        }
    }

    fn from_initial(&self, x: &Self::Obj) -> Self::Mor;
    fn to_terminal(&self, x: &Self::Obj) -> Self::Mor;

    /// `Hom(x, y)` in lexicographic order, capped.
    fn homs(&self, x: &Self::Obj, y: &Self::Obj, cap: usize) -> Result<Vec<Self::Mor>> {
        let sq = self.hom_square(x, y);
        let mut out = Vec::new();
        for f in self.lifts(&sq)? {
            if out.len() == cap {
                return Err(Error::budget("hom-set enumeration", cap));
            }
            out.push(f);
        }
        Ok(out)
    }

    fn is_iso(&self, f: &Self::Mor) -> bool {
        self.inverse(f).is_some()
    }

    fn obj_key(&self, x: &Self::Obj) -> String {
        self.encode_obj(x).to_string()
    }

    fn mor_key(&self, f: &Self::Mor) -> String {
        self.encode_mor(f).to_string()
    }
}

/// Which model structure a carrier is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// The carrier's own structure.
    Native,
    /// cof = isomorphisms, fib = we = everything.
    CofTrivial,
    /// we = isomorphisms, cof = fib = everything.
    WeIso,
}

impl Kind {
    pub fn label(&self) -> &'static str {
        match self {
            Kind::Native => "native",
            Kind::CofTrivial => "cof_trivial",
            Kind::WeIso => "we_iso",
        }
    }
}

/// Class predicates and factorization oracles over a carrier.
pub trait ModelStructure<C: Carrier>: Send + Sync {
    fn label(&self) -> String;
    fn is_cof(&self, c: &C, f: &C::Mor) -> bool;
    fn is_fib(&self, c: &C, f: &C::Mor) -> bool;
    fn is_we(&self, c: &C, f: &C::Mor) -> bool;
    fn factor_cof_acyfib(&self, c: &C, f: &C::Mor) -> Result<(C::Mor, C::Mor)>;
    fn factor_acycof_fib(&self, c: &C, f: &C::Mor) -> Result<(C::Mor, C::Mor)>;
    fn generating(&self, c: &C, budget: &Budget) -> Option<(Vec<C::Mor>, Vec<C::Mor>)>;

    fn is_acyclic_cof(&self, c: &C, f: &C::Mor) -> bool {
        self.is_cof(c, f) && self.is_we(c, f)
    }

    fn is_acyclic_fib(&self, c: &C, f: &C::Mor) -> bool {
        self.is_fib(c, f) && self.is_we(c, f)
    }
}

impl<C: Carrier> ModelStructure<C> for Kind {
    fn label(&self) -> String {
        self.label().to_string()
    }

    fn is_cof(&self, c: &C, f: &C::Mor) -> bool {
        match self {
            Kind::Native => c.native_is_cof(f),
            Kind::CofTrivial => c.is_iso(f),
            Kind::WeIso => true,
        }
    }

    fn is_fib(&self, c: &C, f: &C::Mor) -> bool {
        match self {
            Kind::Native => c.native_is_fib(f),
            Kind::CofTrivial | Kind::WeIso => true,
        }
    }

    fn is_we(&self, c: &C, f: &C::Mor) -> bool {
        match self {
            Kind::Native => c.native_is_we(f),
            Kind::CofTrivial => true,
            Kind::WeIso => c.is_iso(f),
        }
    }

    fn factor_cof_acyfib(&self, c: &C, f: &C::Mor) -> Result<(C::Mor, C::Mor)> {
        match self {
            Kind::Native => c.native_factor_cof_acyfib(f),
            Kind::CofTrivial => Ok((c.identity(&c.dom(f)), f.clone())),
            Kind::WeIso => Ok((f.clone(), c.identity(&c.cod(f)))),
        }
    }

    fn factor_acycof_fib(&self, c: &C, f: &C::Mor) -> Result<(C::Mor, C::Mor)> {
        match self {
            Kind::Native => c.native_factor_acycof_fib(f),
            Kind::CofTrivial | Kind::WeIso => Ok((c.identity(&c.dom(f)), f.clone())),
        }
    }

    fn generating(&self, c: &C, budget: &Budget) -> Option<(Vec<C::Mor>, Vec<C::Mor>)> {
        match self {
            Kind::Native => c.native_generating(budget),
            Kind::CofTrivial => Some((Vec::new(), Vec::new())),
            Kind::WeIso => c.we_iso_generating(),
        }
    }
}

/// A per-object family of structures over one shared carrier.
#[derive(Clone)]
pub struct ModelAssignment<C: Carrier> {
    pub carrier: Arc<C>,
    pub models: Vec<Kind>,
}

impl<C: Carrier> ModelAssignment<C> {
    pub fn constant(carrier: Arc<C>, kind: Kind, objects: usize) -> Self {
        ModelAssignment { carrier, models: vec![kind; objects] }
    }

    pub fn at(&self, o: usize) -> Kind {
        self.models[o]
    }

    /// `M_α` on `c0`, the cof-trivial structure elsewhere.
    pub fn lopsided(&self, c0: &[bool]) -> Self {
        let models = self
            .models
            .iter()
            .zip(c0)
            .map(|(&k, &inside)| if inside { k } else { Kind::CofTrivial })
            .collect();
        ModelAssignment { carrier: self.carrier.clone(), models }
    }
}

/// Ambient selector strings accepted by the CLI and reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    FinSet(Kind),
    Chain { p: u32, kind: Kind },
}

impl Selector {
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, rest) = if let Some(r) = s.strip_prefix("triv-cof:") {
            (Kind::CofTrivial, r)
        } else if let Some(r) = s.strip_prefix("triv-iso:") {
            (Kind::WeIso, r)
        } else {
            (Kind::Native, s)
        };
        match rest {
            "finset-wfs" if kind == Kind::Native => Ok(Selector::FinSet(kind)),
            "finset" if kind != Kind::Native => Ok(Selector::FinSet(kind)),
            _ => {
                let p = rest
                    .strip_prefix("ch:p=")
                    .and_then(|v| v.parse::<u32>().ok())
                    .ok_or_else(|| Error::Format(format!("unknown ambient selector `{s}`")))?;
                if !crate::linalg::is_prime(p) || p > 251 {
                    return Err(Error::Format(format!("`{p}` is not a supported prime")));
                }
                Ok(Selector::Chain { p, kind })
            }
        }
    }

    pub fn render(&self) -> String {
        let prefix = |k: Kind| match k {
            Kind::Native => "",
            Kind::CofTrivial => "triv-cof:",
            Kind::WeIso => "triv-iso:",
        };
        match self {
            Selector::FinSet(Kind::Native) => "finset-wfs".into(),
            Selector::FinSet(k) => format!("{}finset", prefix(*k)),
            Selector::Chain { p, kind } => format!("{}ch:p={p}", prefix(*kind)),
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Selector::FinSet(k) => *k,
            Selector::Chain { kind, .. } => *kind,
        }
    }
}

fn two_leg_edges<C: Carrier>(c: &C, shape: &FinCategory, entries: &[C::Obj], to_one: &C::Mor, to_two: &C::Mor) -> Vec<C::Mor> {
    shape
        .morphisms()
        .iter()
        .map(|md| {
            if md.src == md.dst {
                c.identity(&entries[md.src])
            } else if md.src == 1 || md.dst == 1 {
                to_one.clone()
            } else {
                to_two.clone()
            }
        })
        .collect()
}

/// Pushout of `f: A → B` and `g: A → C`; returns the apex and the legs from `B` and `C`.
pub fn pushout<C: Carrier>(c: &C, f: &C::Mor, g: &C::Mor) -> Result<Cone<C::Obj, C::Mor>> {
    let shape = crate::fincat::span_category();
    let entries = vec![c.dom(f), c.cod(f), c.cod(g)];
    let edges = two_leg_edges(c, &shape, &entries, f, g);
    let cone = c.colimit(&shape, &entries, &edges)?;
    Ok(Cone { apex: cone.apex, legs: vec![cone.legs[1].clone(), cone.legs[2].clone()] })
}

/// The map out of a pushout apex given maps out of `B` and `C`.
pub fn pushout_mediate<C: Carrier>(
    c: &C,
    f: &C::Mor,
    po: &Cone<C::Obj, C::Mor>,
    target: &C::Obj,
    from_b: &C::Mor,
    from_c: &C::Mor,
) -> Result<C::Mor> {
    let corner = c.compose(from_b, f);
    let full = Cone { apex: po.apex.clone(), legs: vec![c.compose(&po.legs[0], f), po.legs[0].clone(), po.legs[1].clone()] };
    c.colimit_mediate(&full, target, &[corner, from_b.clone(), from_c.clone()])
}

/// Pullback of `f: B → D` and `g: C → D`; returns the apex and projections to `B`, `C`.
pub fn pullback<C: Carrier>(c: &C, f: &C::Mor, g: &C::Mor) -> Result<Cone<C::Obj, C::Mor>> {
    let shape = crate::fincat::cospan_category();
    // Objects "0" = B, "1" = C, "2" = D.
    let entries = vec![c.dom(f), c.dom(g), c.cod(f)];
    let edges: Vec<C::Mor> = shape
        .morphisms()
        .iter()
        .map(|md| {
            if md.src == md.dst {
                c.identity(&entries[md.src])
            } else if md.src == 0 {
                f.clone()
            } else {
                g.clone()
            }
        })
        .collect();
    let cone = c.limit(&shape, &entries, &edges)?;
    Ok(Cone { apex: cone.apex, legs: vec![cone.legs[0].clone(), cone.legs[1].clone()] })
}

/// The map into a pullback apex given maps into `B` and `C`.
pub fn pullback_mediate<C: Carrier>(
    c: &C,
    f: &C::Mor,
    pb: &Cone<C::Obj, C::Mor>,
    source: &C::Obj,
    to_b: &C::Mor,
    to_c: &C::Mor,
) -> Result<C::Mor> {
    let corner = c.compose(f, to_b);
    let full = Cone { apex: pb.apex.clone(), legs: vec![pb.legs[0].clone(), pb.legs[1].clone(), c.compose(f, &pb.legs[0])] };
    c.limit_mediate(&full, source, &[to_b.clone(), to_c.clone(), corner])
}

/// Binary coproduct with its injections.
pub fn coproduct<C: Carrier>(c: &C, a: &C::Obj, b: &C::Obj) -> Result<Cone<C::Obj, C::Mor>> {
    let shape = crate::fincat::discrete(vec!["0".into(), "1".into()]);
    let entries = vec![a.clone(), b.clone()];
    let edges = vec![c.identity(a), c.identity(b)];
    c.colimit(&shape, &entries, &edges)
}

/// `f ⊔ g: A ⊔ C → B ⊔ D`.
pub fn coproduct_map<C: Carrier>(c: &C, f: &C::Mor, g: &C::Mor) -> Result<(C::Mor, Cone<C::Obj, C::Mor>, Cone<C::Obj, C::Mor>)> {
    let src = coproduct(c, &c.dom(f), &c.dom(g))?;
    let dst = coproduct(c, &c.cod(f), &c.cod(g))?;
    let legs = [c.compose(&dst.legs[0], f), c.compose(&dst.legs[1], g)];
    let m = c.colimit_mediate(&src, &dst.apex, &legs)?;
    Ok((m, src, dst))
}
