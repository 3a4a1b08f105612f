//! Compatibility conditions between the structures assigned to comparable objects.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::ambient::verify::sample_morphisms;
use crate::ambient::{Carrier, Kind, ModelAssignment, ModelStructure};
use crate::budget::Budget;
use crate::error::{Error, Result};

use super::ReedyStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    Projective,
}

impl Side {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "proj" | "projective" => Ok(Side::Projective),
            other => Err(Error::Format(format!("unknown side `{other}` (expected left|right|proj)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassName {
    Cof,
    Fib,
}

impl ClassName {
    fn holds<C: Carrier>(self, c: &C, k: Kind, f: &C::Mor) -> bool {
        match self {
            ClassName::Cof => k.is_cof(c, f),
            ClassName::Fib => k.is_fib(c, f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompatViolation {
    pub clause: String,
    /// `class(M_sub) ⊆ class(M_sup)` failed.
    pub sub: String,
    pub sup: String,
    pub class: ClassName,
    pub witness: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompatReport {
    pub side: Side,
    pub passed: bool,
    pub inclusions_checked: usize,
    pub samples: usize,
    pub violations: Vec<CompatViolation>,
}

/// A sampled morphism in `class(sub)` outside `class(sup)`, if any.
pub fn class_inclusion<C: Carrier>(c: &C, class: ClassName, sub: Kind, sup: Kind, samples: &[C::Mor]) -> Option<C::Mor> {
    if sub == sup {
        return None;
    }
    samples.iter().find(|f| class.holds(c, sub, f) && !class.holds(c, sup, f)).cloned()
}

struct Checker<'a, C: Carrier> {
    c: &'a C,
    a: &'a ModelAssignment<C>,
    names: Vec<String>,
    samples: Vec<C::Mor>,
    cache: HashMap<(ClassName, Kind, Kind), Option<C::Mor>>,
    checked: usize,
    violations: Vec<CompatViolation>,
}

impl<C: Carrier> Checker<'_, C> {
    /// Records whether `class(M_sub) ⊆ class(M_sup)`.
    fn require(&mut self, clause: &str, class: ClassName, sub: usize, sup: usize) {
        self.checked += 1;
        let (ks, kp) = (self.a.at(sub), self.a.at(sup));
        let (c, samples) = (self.c, &self.samples);
        let hit = self.cache.entry((class, ks, kp)).or_insert_with(|| class_inclusion(c, class, ks, kp, samples)).clone();
        if let Some(f) = hit {
            self.violations.push(CompatViolation {
                clause: clause.into(),
                sub: self.names[sub].clone(),
                sup: self.names[sup].clone(),
                class,
                witness: self.c.encode_mor(&f),
            });
        }
    }
}

/// Checks the compatibility clauses of one side on sampled carrier morphisms.
pub fn check_compat<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    c0: &[bool],
    a: &ModelAssignment<C>,
    side: Side,
    budget: &Budget,
) -> Result<CompatReport> {
    let cat = r.cat();
    if a.models.len() != cat.num_objects() || c0.len() != cat.num_objects() {
        return Err(Error::Validation("assignment or C0 does not cover the shape".into()));
    }
    let samples = sample_morphisms(c, budget, budget.samples)?;
    let mut ch = Checker {
        c,
        a,
        names: cat.objects().to_vec(),
        samples,
        cache: HashMap::new(),
        checked: 0,
        violations: Vec::new(),
    };
    use ClassName::{Cof, Fib};
    for alpha in 0..cat.num_objects() {
        let lat = r.latching(alpha);
        let mat = r.matching(alpha);
        let betas: Vec<usize> = (0..lat.cat.num_objects()).map(|o| lat.base_object(o)).collect();
        let gammas: Vec<usize> = (0..mat.cat.num_objects()).map(|o| mat.base_object(o)).collect();
        match side {
            Side::Left => {
                for &b in &betas {
                    ch.require("latching cofibrations increase", Cof, b, alpha);
                    ch.require("latching fibrations decrease", Fib, alpha, b);
                }
                for &g in &gammas {
                    ch.require("matching fibrations increase", Fib, g, alpha);
                    if c0[alpha] && c0[g] {
                        ch.require("matching cofibrations decrease within C0", Cof, alpha, g);
                    }
                }
            }
            Side::Right => {
                for &g in &gammas {
                    ch.require("matching fibrations increase", Fib, g, alpha);
                    ch.require("matching cofibrations decrease", Cof, alpha, g);
                }
                for &b in &betas {
                    ch.require("latching cofibrations increase", Cof, b, alpha);
                    if c0[alpha] && c0[b] {
                        ch.require("latching fibrations decrease within C0", Fib, alpha, b);
                    }
                }
            }
            Side::Projective => {
                if !c0[alpha] {
                    continue;
                }
                for b in 0..cat.num_objects() {
                    if b != alpha && c0[b] && !cat.hom(b, alpha).is_empty() {
                        ch.require("fibrations decrease along C0", Fib, alpha, b);
                    }
                }
            }
        }
    }
    Ok(CompatReport {
        side,
        passed: ch.violations.is_empty(),
        inclusions_checked: ch.checked,
        samples: ch.samples.len(),
        violations: ch.violations,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ambient::ChainCarrier;

    fn arrow_assignment(k0: Kind, k1: Kind) -> (ReedyStructure, ModelAssignment<ChainCarrier>) {
        let r = ReedyStructure::chain(1);
        let c = Arc::new(ChainCarrier::new(2).unwrap());
        (r, ModelAssignment { carrier: c, models: vec![k0, k1] })
    }

    #[test]
    fn constant_assignment_is_compatible() {
        let (r, a) = arrow_assignment(Kind::Native, Kind::Native);
        for side in [Side::Left, Side::Right, Side::Projective] {
            let rep = check_compat(a.carrier.as_ref(), &r, &[true, false], &a, side, &Budget::SMALL).unwrap();
            assert!(rep.passed);
        }
    }

    #[test]
    fn cof_trivial_below_chain_complexes() {
        let (r, a) = arrow_assignment(Kind::CofTrivial, Kind::Native);
        let rep = check_compat(a.carrier.as_ref(), &r, &[true, false], &a, Side::Left, &Budget::SMALL).unwrap();
        assert!(rep.passed, "{:?}", rep.violations);
        let (r, a) = arrow_assignment(Kind::Native, Kind::CofTrivial);
        let rep = check_compat(a.carrier.as_ref(), &r, &[true, false], &a, Side::Left, &Budget::SMALL).unwrap();
        assert!(!rep.passed);
        let v = &rep.violations[0];
        assert_eq!((v.class, v.sub.as_str(), v.sup.as_str()), (ClassName::Cof, "0", "1"));
    }
}
