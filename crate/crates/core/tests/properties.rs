use std::sync::{Arc, OnceLock};

use modreedy::ambient::{ChainCarrier, FinSet, Kind, ModelAssignment, Selector};
use modreedy::budget::thin;
use modreedy::comparisons::nerve::NerveMap;
use modreedy::diagram::{classify, sample_maps, Structure};
use modreedy::engine::{factorize, Mode};
use modreedy::ktheory::bisimplicial::evcof_level;
use modreedy::ktheory::{Direction, GridCode, GridOp, USelector, WaldhausenSubcat};
use modreedy::reedy::{mask, ReedyStructure};
use modreedy::Budget;
use proptest::prelude::*;

/// Cofibrant grid diagrams of degree-0 F₂-spaces of dimension ≤ 2 at bidegree (1,2).
fn level_12() -> &'static [String] {
    static CODES: OnceLock<Vec<String>> = OnceLock::new();
    CODES.get_or_init(|| {
        let u = WaldhausenSubcat::new(ChainCarrier::new(2).unwrap(), USelector::Deg0Dim(2));
        evcof_level(&u, 1, 2, &Budget::SMALL.with_dim(2).with_degree(0).with_objects(1 << 16)).unwrap()
    })
}

fn op(dir: Direction, o: NerveMap) -> GridOp {
    GridOp::new(dir, o)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_codes_round_trip(ix in 0usize..8873) {
        let s = &level_12()[ix];
        let code = GridCode::decode(1, 2, s, 2).unwrap();
        prop_assert_eq!(&code.encode(), s);
        prop_assert_eq!(code.transpose().transpose().encode(), s.clone());
        let c = ChainCarrier::new(2).unwrap();
        prop_assert_eq!(GridCode::from_diagram(&c, &code.to_diagram(&c).unwrap()).unwrap().encode(), s.clone());
    }

    #[test]
    fn face_after_degeneracy_is_identity(ix in 0usize..8873, i in 0usize..=2, vertical in any::<bool>()) {
        let code = GridCode::decode(1, 2, &level_12()[ix], 2).unwrap();
        let dir = if vertical { Direction::Vertical } else { Direction::Horizontal };
        let k = if vertical { 1 } else { 2 };
        let i = i.min(k);
        for face in [i, i + 1] {
            let back = code.apply(op(dir, NerveMap::Degen(i)), 2).unwrap().apply(op(dir, NerveMap::Face(face)), 2).unwrap();
            prop_assert_eq!(back.encode(), code.encode());
        }
        let pre = code.apply(op(dir, NerveMap::Prepend), 2).unwrap().apply(op(dir, NerveMap::Face(0)), 2).unwrap();
        prop_assert_eq!(pre.encode(), code.encode());
        let app = code.apply(op(dir, NerveMap::Append), 2).unwrap().apply(op(dir, NerveMap::Face(k + 1)), 2).unwrap();
        prop_assert_eq!(app.encode(), code.encode());
    }

    #[test]
    fn horizontal_and_vertical_faces_commute(ix in 0usize..8873, i in 0usize..=1, j in 0usize..=2) {
        let code = GridCode::decode(1, 2, &level_12()[ix], 2).unwrap();
        let (v, h) = (op(Direction::Vertical, NerveMap::Face(i)), op(Direction::Horizontal, NerveMap::Face(j)));
        let vh = code.apply(v, 2).unwrap().apply(h, 2).unwrap();
        let hv = code.apply(h, 2).unwrap().apply(v, 2).unwrap();
        prop_assert_eq!(vh.encode(), hv.encode());
    }

    #[test]
    fn thinning_keeps_order_and_bounds(items in proptest::collection::vec(any::<u16>(), 0..200), cap in 0usize..50) {
        let t = thin(&items, cap);
        let expected = if cap == 0 { items.len() } else { items.len().min(cap) };
        prop_assert_eq!(t.len(), expected);
        let mut rest = items.iter();
        for x in &t {
            prop_assert!(rest.any(|y| y == x), "thinned items keep their order");
        }
        if cap > 0 && !items.is_empty() {
            prop_assert_eq!(t[0], items[0]);
        }
    }

    #[test]
    fn selectors_round_trip(kind in 0usize..3, chain in any::<bool>(), p in prop::sample::select(vec![2u32, 3, 5, 7])) {
        let prefix = ["", "triv-cof:", "triv-iso:"][kind];
        let base = if chain { format!("ch:p={p}") } else if kind == 0 { "finset-wfs".into() } else { "finset".into() };
        let s = format!("{prefix}{base}");
        prop_assert_eq!(Selector::parse(&s).unwrap().render(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Both factorizations of sampled maps over the arrow and the square, for any `C0`.
    #[test]
    fn left_and_right_factorizations(seed in any::<u64>(), bits in 0usize..16, square in any::<bool>(), right in any::<bool>()) {
        let r = if square { ReedyStructure::grid(1, 1) } else { ReedyStructure::chain(1) };
        let n = r.cat().num_objects();
        let objs: Vec<usize> = (0..n).filter(|o| bits >> o & 1 == 1).collect();
        let c0 = mask(n, &objs);
        // Right structures need `C0` closed under predecessors.
        let down_closed = (0..r.cat().num_morphisms()).all(|k| !c0[r.cat().dst(k)] || c0[r.cat().src(k)]);
        prop_assume!(!right || down_closed);
        let a = ModelAssignment::constant(Arc::new(FinSet), Kind::Native, n);
        let structure = if right { Structure::Right } else { Structure::Left };
        let budget = Budget::SMALL.with_card(2).with_samples(6);
        for g in sample_maps(&FinSet, &r, &budget, seed).unwrap() {
            for mode in [Mode::CofThenAcyfib, Mode::AcycofThenFib] {
                let fz = factorize(&FinSet, &r, &c0, &a, &g, mode, structure).unwrap();
                prop_assert_eq!(&fz.p.after(&FinSet, &fz.f).comps, &g.comps);
                let vf = classify(&FinSet, &r, &c0, &a, &fz.f, structure).unwrap();
                let vp = classify(&FinSet, &r, &c0, &a, &fz.p, structure).unwrap();
                match mode {
                    Mode::CofThenAcyfib => prop_assert!(vf.cof && vp.acyclic_fib),
                    Mode::AcycofThenFib => prop_assert!(vf.acyclic_cof && vp.fib),
                }
            }
        }
    }
}
