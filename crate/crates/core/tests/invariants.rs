use binrel::brwt::Brwt;
use binrel::format::{AnyRelation, EdgeList, Kind};
use binrel::rel_wt::BinRelWt;
use binrel::space::entropy;
use binrel::{BitVector, NaiveRelation, Op, Pair, Query, Relation, RelationDims};
use proptest::prelude::*;

fn relation() -> impl Strategy<Value = EdgeList> {
    (1usize..=10, 1usize..=10).prop_flat_map(|(n, sigma)| {
        proptest::collection::btree_set((1..=sigma, 1..=n), 0..=n * sigma).prop_map(move |set| EdgeList {
            n,
            sigma,
            pairs: set.into_iter().map(Pair::from).collect(),
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bitvector_rank_select_agree(bits in proptest::collection::vec(0u8..2, 0..700)) {
        let bv = BitVector::from_bits(&bits);
        let mut ones = 0;
        for (i, &b) in bits.iter().enumerate() {
            ones += usize::from(b);
            prop_assert_eq!(bv.rank1(i + 1), ones);
            if b == 1 {
                prop_assert_eq!(bv.select1(ones), Some(i + 1));
            } else {
                prop_assert_eq!(bv.select0(i + 1 - ones), Some(i + 1));
            }
        }
        prop_assert_eq!(bv.select1(ones + 1), None);
    }

    #[test]
    fn every_representation_decodes_its_pairs(e in relation(), mu in 2usize..=9) {
        for kind in Kind::ALL {
            let rel = AnyRelation::build(kind, &e.pairs, e.n, e.sigma, mu).unwrap();
            prop_assert_eq!(rel.pairs(), e.pairs.clone());
            let mut buf = Vec::new();
            rel.store(&mut buf).unwrap();
            prop_assert_eq!(AnyRelation::load(&mut buf.as_slice()).unwrap(), rel);
        }
    }

    #[test]
    fn counts_split_over_label_ranges(e in relation(), cut in 0usize..=10) {
        let r = Relation::new(BinRelWt::new(&e.pairs, e.n, e.sigma).unwrap()).unwrap();
        let cut = cut.min(e.sigma);
        let whole = r.rel_num(1, e.sigma, 1, e.n).unwrap();
        prop_assert_eq!(whole, e.pairs.len());
        let low = if cut == 0 { 0 } else { r.rel_num(1, cut, 1, e.n).unwrap() };
        let high = if cut == e.sigma { 0 } else { r.rel_num(cut + 1, e.sigma, 1, e.n).unwrap() };
        prop_assert_eq!(low + high, whole);
    }

    #[test]
    fn brwt_leaves_hold_every_pair_once(e in relation()) {
        let b = Brwt::new(&e.pairs, e.n, e.sigma).unwrap();
        prop_assert_eq!(b.leaf_ones(), e.pairs.len());
        prop_assert_eq!(b.poslab(e.sigma), Some(e.pairs.len()));
        for (r, p) in e.pairs.iter().enumerate() {
            prop_assert_eq!(b.lab(r + 1), Some(p.label));
        }
    }

    #[test]
    fn brwt_matches_oracle_on_selection(e in relation(), j in 1usize..=12) {
        let r = Relation::new(Brwt::new(&e.pairs, e.n, e.sigma).unwrap()).unwrap();
        let o = NaiveRelation::new(&e.pairs, e.n, e.sigma).unwrap();
        for op in [Op::RelSelLabFst, Op::RelSelObjFst] {
            let args = match op {
                Op::RelSelLabFst => [1, j, 1, e.n],
                _ => [1, e.sigma, 1, j],
            };
            let q = Query::new(op, &args).unwrap();
            prop_assert_eq!(r.query(&q).unwrap(), o.answer(&q));
        }
    }

    #[test]
    fn entropy_is_symmetric(n in 1usize..200, sigma in 1usize..200, frac in 0.0f64..=1.0) {
        let t = ((n * sigma) as f64 * frac) as usize;
        let a: f64 = entropy(RelationDims::new(n, sigma, t).unwrap()).unwrap();
        let b: f64 = entropy(RelationDims::new(sigma, n, t).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
        prop_assert!(a >= 0.0);
    }
}
