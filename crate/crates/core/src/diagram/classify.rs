//! Membership of diagram maps in the classes of the left and right modified Reedy
//! structures and the modified projective structure.

use serde::{Deserialize, Serialize};

use crate::ambient::{Carrier, ModelAssignment, ModelStructure};
use crate::error::{Error, Result};
use crate::reedy::ReedyStructure;

use super::latching::{latching_data, matching_data};
use super::DiagramMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    Left,
    Right,
    Projective,
}

impl Structure {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Structure::Left),
            "right" => Ok(Structure::Right),
            "proj" | "projective" => Ok(Structure::Projective),
            other => Err(Error::Format(format!("unknown structure `{other}` (expected left|right|proj)"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Structure::Left => "left",
            Structure::Right => "right",
            Structure::Projective => "projective",
        }
    }
}

/// One entrywise, latching or matching test at one object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub object: String,
    pub test: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassVector {
    pub cof: bool,
    pub acyclic_cof: bool,
    pub fib: bool,
    pub acyclic_fib: bool,
    pub we: bool,
    pub evidence: Vec<Evidence>,
}

impl ClassVector {
    /// The five flags, without evidence.
    pub fn flags(&self) -> [bool; 5] {
        [self.cof, self.acyclic_cof, self.fib, self.acyclic_fib, self.we]
    }
}

struct Local {
    in_c0: bool,
    entry_we: bool,
    entry_fib: bool,
    latch_cof: bool,
    latch_we: bool,
    latch_iso: bool,
    match_fib: bool,
    match_we: bool,
}

pub fn classify<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    c0: &[bool],
    a: &ModelAssignment<C>,
    f: &DiagramMap<C>,
    structure: Structure,
) -> Result<ClassVector> {
    if structure == Structure::Projective && !r.is_monotone_increasing() {
        return Err(Error::Precondition(
            "projective cofibrations are only classified over monotone increasing shapes".into(),
        ));
    }
    let cat = r.cat();
    let mut evidence = Vec::new();
    let mut locals = Vec::new();
    for alpha in r.objects_by_degree() {
        let m = a.at(alpha);
        let name = cat.object_name(alpha).to_string();
        let ld = latching_data(c, r, f, alpha)?;
        let md = matching_data(c, r, f, alpha)?;
        let l = Local {
            in_c0: c0[alpha],
            entry_we: m.is_we(c, &f.comps[alpha]),
            entry_fib: m.is_fib(c, &f.comps[alpha]),
            latch_cof: m.is_cof(c, &ld.latch),
            latch_we: m.is_we(c, &ld.latch),
            latch_iso: c.is_iso(&ld.latch),
            match_fib: m.is_fib(c, &md.matching),
            match_we: m.is_we(c, &md.matching),
        };
        for (test, passed) in [
            ("entry_we", l.entry_we),
            ("entry_fib", l.entry_fib),
            ("latch_cof", l.latch_cof),
            ("latch_we", l.latch_we),
            ("latch_iso", l.latch_iso),
            ("match_fib", l.match_fib),
            ("match_we", l.match_we),
        ] {
            evidence.push(Evidence { object: name.clone(), test: test.into(), passed });
        }
        locals.push(l);
    }
    let all = |p: &dyn Fn(&Local) -> bool| locals.iter().all(p);
    let we = all(&|l| !l.in_c0 || l.entry_we);
    let (cof, fib, acof_char, afib_char) = match structure {
        Structure::Left => (
            all(&|l| l.latch_cof && (l.in_c0 || l.latch_we)),
            all(&|l| l.match_fib),
            all(&|l| l.latch_cof && l.latch_we),
            all(&|l| l.match_fib && (!l.in_c0 || l.match_we)),
        ),
        Structure::Right => (
            all(&|l| l.latch_cof),
            all(&|l| l.match_fib && (l.in_c0 || l.match_we)),
            all(&|l| l.latch_cof && (!l.in_c0 || l.latch_we)),
            all(&|l| l.match_fib && l.match_we),
        ),
        Structure::Projective => {
            let fib = all(&|l| !l.in_c0 || l.entry_fib);
            (
                all(&|l| if l.in_c0 { l.latch_cof } else { l.latch_iso }),
                fib,
                all(&|l| if l.in_c0 { l.latch_cof && l.latch_we } else { l.latch_iso }),
                fib && we,
            )
        }
    };
    let acof_def = cof && we;
    let afib_def = fib && we;
    let trail = || {
        evidence
            .iter()
            .filter(|e| !e.passed)
            .map(|e| format!("{}:{}", e.object, e.test))
            .collect::<Vec<_>>()
            .join(",")
    };
    if acof_def != acof_char {
        return Err(Error::CharacterizationMismatch {
            class: "acyclic_cof",
            definitional: acof_def,
            characterized: acof_char,
            evidence: format!("{} structure; failed tests [{}]", structure.label(), trail()),
        });
    }
    if afib_def != afib_char {
        return Err(Error::CharacterizationMismatch {
            class: "acyclic_fib",
            definitional: afib_def,
            characterized: afib_char,
            evidence: format!("{} structure; failed tests [{}]", structure.label(), trail()),
        });
    }
    Ok(ClassVector { cof, acyclic_cof: acof_def, fib, acyclic_fib: afib_def, we, evidence })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ambient::{FinSet, FinSetMap, Kind};
    use crate::diagram::Diagram;

    fn arrow_map(x: (usize, usize, Vec<usize>), y: (usize, usize, Vec<usize>), f0: Vec<usize>, f1: Vec<usize>) -> (ReedyStructure, DiagramMap<FinSet>) {
        let r = ReedyStructure::chain(1);
        let shape = r.cat().clone();
        let mk = |(a, b, e): (usize, usize, Vec<usize>)| {
            Arc::new(
                Diagram::new(
                    &FinSet,
                    shape.clone(),
                    vec![a, b],
                    vec![FinSetMap::new(b, e).unwrap(), FinSet.identity(&a), FinSet.identity(&b)],
                )
                .unwrap(),
            )
        };
        let (xs, ys) = (mk(x), mk(y));
        let comps = vec![FinSetMap::new(ys.entries[0], f0).unwrap(), FinSetMap::new(ys.entries[1], f1).unwrap()];
        let f = DiagramMap::new(&FinSet, xs, ys, comps).unwrap();
        (r, f)
    }

    #[test]
    fn we_only_checked_on_c0() {
        // f_0 a bijection, f_1 not.
        let (r, f) = arrow_map((1, 2, vec![0]), (1, 1, vec![0]), vec![0], vec![0, 0]);
        let a = ModelAssignment::constant(Arc::new(FinSet), Kind::WeIso, 2);
        let v = classify(&FinSet, &r, &[true, false], &a, &f, Structure::Left).unwrap();
        assert!(v.we);
        let v = classify(&FinSet, &r, &[true, true], &a, &f, Structure::Left).unwrap();
        assert!(!v.we);
    }

    #[test]
    fn identity_is_in_every_class() {
        let (r, f) = arrow_map((1, 2, vec![0]), (1, 2, vec![0]), vec![0], vec![0, 1]);
        assert!(f.is_identity(&FinSet));
        for kind in [Kind::Native, Kind::CofTrivial, Kind::WeIso] {
            let a = ModelAssignment::constant(Arc::new(FinSet), kind, 2);
            for s in [Structure::Left, Structure::Right, Structure::Projective] {
                let v = classify(&FinSet, &r, &[true, false], &a, &f, s).unwrap();
                assert_eq!(v.flags(), [true; 5], "{kind:?} {s:?}");
            }
        }
    }

    #[test]
    fn projective_needs_a_direct_shape() {
        let r = ReedyStructure::simplex_op(1).unwrap();
        let x = Arc::new(Diagram::constant(&FinSet, r.cat().clone(), &1));
        let f = x.identity_map(&FinSet);
        let a = ModelAssignment::constant(Arc::new(FinSet), Kind::WeIso, 2);
        assert!(matches!(classify(&FinSet, &r, &[true, true], &a, &f, Structure::Projective), Err(Error::Precondition(_))));
    }
}
