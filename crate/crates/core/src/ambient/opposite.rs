//! The opposite of a carrier, with cofibrations and fibrations exchanged.

use std::sync::Arc;

use serde_json::Value;

use super::{Carrier, Cone, LiftIter, Square};
use crate::budget::Budget;
use crate::error::Result;
use crate::fincat::{opposite, FinCategory};

#[derive(Clone, Debug)]
pub struct Opposite<C>(pub Arc<C>);

/// A base morphism read in the reverse direction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpMor<M>(pub M);

fn unwrap_all<M: Clone>(v: &[OpMor<M>]) -> Vec<M> {
    v.iter().map(|m| m.0.clone()).collect()
}

fn wrap_cone<O, M>(c: Cone<O, M>) -> Cone<O, OpMor<M>> {
    Cone { apex: c.apex, legs: c.legs.into_iter().map(OpMor).collect() }
}

fn unwrap_cone<O: Clone, M: Clone>(c: &Cone<O, OpMor<M>>) -> Cone<O, M> {
    Cone { apex: c.apex.clone(), legs: unwrap_all(&c.legs) }
}

impl<C: Carrier> Carrier for Opposite<C> {
    type Obj = C::Obj;
    type Mor = OpMor<C::Mor>;

    fn name(&self) -> String {
        format!("op({})", self.0.name())
    }

    fn dom(&self, f: &Self::Mor) -> C::Obj {
        self.0.cod(&f.0)
    }

    fn cod(&self, f: &Self::Mor) -> C::Obj {
        self.0.dom(&f.0)
    }

    fn identity(&self, x: &C::Obj) -> Self::Mor {
        OpMor(self.0.identity(x))
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        OpMor(self.0.compose(&f.0, &g.0))
    }

    fn initial(&self) -> C::Obj {
        self.0.terminal()
    }

    fn terminal(&self) -> C::Obj {
        self.0.initial()
    }

    fn from_initial(&self, x: &C::Obj) -> Self::Mor {
        OpMor(self.0.to_terminal(x))
    }

    fn to_terminal(&self, x: &C::Obj) -> Self::Mor {
        OpMor(self.0.from_initial(x))
    }

    fn colimit(&self, shape: &FinCategory, entries: &[C::Obj], edges: &[Self::Mor]) -> Result<Cone<C::Obj, Self::Mor>> {
        let op = opposite(shape);
        Ok(wrap_cone(self.0.limit(&op, entries, &unwrap_all(edges))?))
    }

    fn colimit_mediate(&self, colim: &Cone<C::Obj, Self::Mor>, target: &C::Obj, legs: &[Self::Mor]) -> Result<Self::Mor> {
        Ok(OpMor(self.0.limit_mediate(&unwrap_cone(colim), target, &unwrap_all(legs))?))
    }

    fn limit(&self, shape: &FinCategory, entries: &[C::Obj], edges: &[Self::Mor]) -> Result<Cone<C::Obj, Self::Mor>> {
        let op = opposite(shape);
        Ok(wrap_cone(self.0.colimit(&op, entries, &unwrap_all(edges))?))
    }

    fn limit_mediate(&self, lim: &Cone<C::Obj, Self::Mor>, source: &C::Obj, legs: &[Self::Mor]) -> Result<Self::Mor> {
        Ok(OpMor(self.0.colimit_mediate(&unwrap_cone(lim), source, &unwrap_all(legs))?))
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        self.0.inverse(&f.0).map(OpMor)
    }

    fn native_is_cof(&self, f: &Self::Mor) -> bool {
        self.0.native_is_fib(&f.0)
    }

    fn native_is_fib(&self, f: &Self::Mor) -> bool {
        self.0.native_is_cof(&f.0)
    }

    fn native_is_we(&self, f: &Self::Mor) -> bool {
        self.0.native_is_we(&f.0)
    }

    fn native_factor_cof_acyfib(&self, f: &Self::Mor) -> Result<(Self::Mor, Self::Mor)> {
        let (j, q) = self.0.native_factor_acycof_fib(&f.0)?;
        Ok((OpMor(q), OpMor(j)))
    }

    fn native_factor_acycof_fib(&self, f: &Self::Mor) -> Result<(Self::Mor, Self::Mor)> {
        let (j, q) = self.0.native_factor_cof_acyfib(&f.0)?;
        Ok((OpMor(q), OpMor(j)))
    }

    fn native_generating(&self, _budget: &Budget) -> Option<(Vec<Self::Mor>, Vec<Self::Mor>)> {
        None
    }

    fn objects(&self, budget: &Budget) -> Result<Vec<C::Obj>> {
        self.0.objects(budget)
    }

    fn lifts<'a>(&'a self, sq: &Square<Self::Mor>) -> Result<LiftIter<'a, Self::Mor>> {
        let base = Square {
            left: sq.right.0.clone(),
            right: sq.left.0.clone(),
            top: sq.bottom.0.clone(),
            bottom: sq.top.0.clone(),
        };
        Ok(Box::new(self.0.lifts(&base)?.map(OpMor)))
    }

    fn encode_obj(&self, x: &C::Obj) -> Value {
        self.0.encode_obj(x)
    }

    fn encode_mor(&self, f: &Self::Mor) -> Value {
        self.0.encode_mor(&f.0)
    }

    fn decode_obj(&self, v: &Value) -> Result<C::Obj> {
        self.0.decode_obj(v)
    }

    fn decode_mor(&self, v: &Value) -> Result<Self::Mor> {
        self.0.decode_mor(v).map(OpMor)
    }
}
