#![allow(dead_code)]

use proptest::prelude::*;
use simploc_core::dsl::{BlowupSquare, BundleDatum, ConstructionTree, Corner, SheafDatum, Split};

/// Rank by direct multinomial arithmetic, sharing no code with the engine.
pub fn naive_rank(t: &ConstructionTree) -> usize {
    fn fact(n: usize) -> usize {
        (1..=n).product()
    }
    match t {
        ConstructionTree::Point => 1,
        ConstructionTree::HenselianBase { .. } => panic!("no rank"),
        ConstructionTree::Disjoint(cs) => cs.iter().map(naive_rank).sum(),
        ConstructionTree::FlagBundle { base, bundle, d_vec } => {
            let rest = bundle.rank - d_vec.iter().sum::<usize>();
            let denom: usize = d_vec.iter().map(|&d| fact(d)).product::<usize>() * fact(rest);
            naive_rank(base) * fact(bundle.rank) / denom
        }
        ConstructionTree::StratifiedDescent { oracle_rank, .. } => oracle_rank.expect("oracle"),
        ConstructionTree::Blowup(sq) => {
            let r = |c: Corner| sq.known.get(&c).map(naive_rank);
            match sq.unknown {
                Corner::X => r(Corner::Y).unwrap() + r(Corner::Z).unwrap() - r(Corner::E).unwrap(),
                Corner::E => r(Corner::Y).unwrap() + r(Corner::Z).unwrap() - r(Corner::X).unwrap(),
                Corner::Y => r(Corner::X).unwrap() + r(Corner::E).unwrap() - r(Corner::Z).unwrap(),
                Corner::Z => r(Corner::X).unwrap() + r(Corner::E).unwrap() - r(Corner::Y).unwrap(),
            }
        }
    }
}

fn d_vec(rank: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=rank, 1..=rank).prop_map(move |mut v| {
        let mut total = 0;
        v.retain(|&d| {
            total += d;
            total <= rank
        });
        if v.is_empty() {
            v.push(1);
        }
        v
    })
}

fn bundle(dim: usize, rank: usize) -> impl Strategy<Value = BundleDatum> {
    prop_oneof![
        Just(BundleDatum::plain(rank)),
        prop::collection::vec(prop::collection::vec(-2i64..=2, dim), rank).prop_map(BundleDatum::split),
        prop::collection::vec(-3i64..=3, rank).prop_map(BundleDatum::twisted),
    ]
}

/// Trees whose blowups all carry `split` drawn from `splits`.
pub fn tree(dim: usize, splits: Vec<Split>, henselian: bool) -> impl Strategy<Value = ConstructionTree> {
    let leaf = if henselian {
        prop_oneof![4 => Just(ConstructionTree::Point), 1 => Just(ConstructionTree::HenselianBase { p: 3 })].boxed()
    } else {
        Just(ConstructionTree::Point).boxed()
    };
    leaf.prop_recursive(5, 12, 3, move |inner| {
        let split = prop::sample::select(splits.clone());
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..=2).prop_map(ConstructionTree::Disjoint),
            (inner.clone(), 1usize..=3)
                .prop_flat_map(move |(base, rank)| (Just(base), bundle(dim, rank), d_vec(rank)))
                .prop_map(|(base, b, d)| ConstructionTree::flag_bundle(base, b, d)),
            (inner.clone(), inner.clone(), 1usize..=3, split).prop_map(|(e, z, r, split)| {
                let y = ConstructionTree::flag_bundle(e.clone(), BundleDatum::plain(r), vec![1]);
                ConstructionTree::Blowup(BlowupSquare::resolving(y, z, e, split))
            }),
            (inner, 0usize..=4).prop_map(|(total, q)| {
                let oracle = if total.walk().iter().any(|(_, n)| matches!(n, ConstructionTree::HenselianBase { .. })) {
                    q
                } else {
                    naive_rank(&total) * q / 4
                };
                let sheaf = SheafDatum { generic_rank: 1, presentation_ranks: (0, 1) };
                ConstructionTree::descent(total, sheaf, vec![1], Some(oracle))
            }),
        ]
    })
}

pub fn class_b_tree(dim: usize) -> impl Strategy<Value = ConstructionTree> {
    tree(dim, vec![Split::Retraction, Split::Section], false)
}
