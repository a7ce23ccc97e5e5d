#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use simploc_core::coeff::Matrix;
use simploc_core::dsl::library::*;
use simploc_core::dsl::{BlowupSquare, BundleDatum, ConstructionTree, Corner, SheafDatum, Split};
use simploc_core::group_rep::GroupDatum;
use simploc_core::Int;

/// Rank by multinomial arithmetic on the tree alone.
pub fn naive_rank(t: &ConstructionTree) -> usize {
    fn fact(n: usize) -> usize {
        (1..=n).product()
    }
    match t {
        ConstructionTree::Point => 1,
        ConstructionTree::Disjoint(cs) => cs.iter().map(naive_rank).sum(),
        ConstructionTree::FlagBundle { base, bundle, d_vec } => {
            let rest = bundle.rank - d_vec.iter().sum::<usize>();
            naive_rank(base) * fact(bundle.rank) / (d_vec.iter().map(|&d| fact(d)).product::<usize>() * fact(rest))
        }
        ConstructionTree::StratifiedDescent { oracle_rank, .. } => oracle_rank.expect("oracle"),
        ConstructionTree::Blowup(sq) => {
            let r = |c: Corner| naive_rank(&sq.known[&c]);
            r(Corner::Y) + r(Corner::Z) - r(Corner::E)
        }
        ConstructionTree::HenselianBase { .. } => panic!("no rank"),
    }
}

pub struct TreeGen {
    pub dim: usize,
    /// Only class B constructions: no henselian leaves, split blowups.
    pub class_b: bool,
}

impl TreeGen {
    fn d_vec(rng: &mut ChaCha8Rng, rank: usize) -> Vec<usize> {
        let mut left = rank;
        let mut out = vec![];
        while left > 0 && (out.is_empty() || rng.gen_bool(0.4)) {
            let d = rng.gen_range(1..=left);
            out.push(d);
            left -= d;
        }
        out
    }

    fn bundle(&self, rng: &mut ChaCha8Rng, rank: usize) -> BundleDatum {
        match rng.gen_range(0..3) {
            0 => BundleDatum::plain(rank),
            1 => {
                BundleDatum::split((0..rank).map(|_| (0..self.dim).map(|_| rng.gen_range(-2..=2)).collect()).collect())
            }
            _ => BundleDatum::twisted((0..rank).map(|_| rng.gen_range(-3..=3)).collect()),
        }
    }

    pub fn tree(&self, rng: &mut ChaCha8Rng, depth: usize) -> ConstructionTree {
        if depth <= 1 || rng.gen_bool(0.25) {
            return if !self.class_b && rng.gen_bool(0.1) {
                ConstructionTree::HenselianBase { p: [2, 3, 5][rng.gen_range(0..3)] }
            } else {
                ConstructionTree::Point
            };
        }
        match rng.gen_range(0..4) {
            0 => ConstructionTree::Disjoint((0..rng.gen_range(1..=2)).map(|_| self.tree(rng, depth - 1)).collect()),
            1 => {
                let rank = rng.gen_range(1..=3);
                let b = self.bundle(rng, rank);
                ConstructionTree::flag_bundle(self.tree(rng, depth - 1), b, Self::d_vec(rng, rank))
            }
            2 if depth >= 3 => {
                let e = self.tree(rng, depth - 2);
                let z = self.tree(rng, depth - 1);
                let r = rng.gen_range(1..=3);
                let y = ConstructionTree::flag_bundle(e.clone(), BundleDatum::plain(r), vec![1]);
                let split = match (self.class_b, rng.gen_range(0..3)) {
                    (false, 0) => Split::None,
                    (_, 1) => Split::Section,
                    _ => Split::Retraction,
                };
                let mut sq = BlowupSquare::resolving(y, z, e, split);
                if split == Split::None && rng.gen_bool(0.7) {
                    let (rows, cols) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
                    let m = (0..rows).map(|_| (0..cols).map(|_| Int::from(rng.gen_range(-3..=3))).collect()).collect();
                    sq.comparison_maps = BTreeMap::from([(rng.gen_range(-1..=1), Matrix::from_rows(m, cols).unwrap())]);
                }
                ConstructionTree::Blowup(sq)
            }
            _ => {
                let total = self.tree(rng, depth - 1);
                let has_rank = total.walk().iter().all(|(_, n)| match n {
                    ConstructionTree::HenselianBase { .. } => false,
                    ConstructionTree::Blowup(sq) => sq.split.is_split(),
                    ConstructionTree::StratifiedDescent { oracle_rank, .. } => oracle_rank.is_some(),
                    _ => true,
                });
                let oracle = if has_rank {
                    Some(naive_rank(&total) * rng.gen_range(0..=4) / 4)
                } else if rng.gen_bool(0.5) {
                    Some(rng.gen_range(0..=3))
                } else {
                    None
                };
                let oracle = if self.class_b { oracle.or(Some(0)) } else { oracle };
                let sheaf =
                    SheafDatum { generic_rank: rng.gen_range(1..=2), presentation_ranks: (rng.gen_range(0..=2), 2) };
                ConstructionTree::descent(total, sheaf, vec![1], oracle)
            }
        }
    }
}

/// Every library entry with representative arguments.
pub fn library_trees(g: &GroupDatum) -> Vec<(String, ConstructionTree)> {
    vec![
        ("P(1)".into(), projective_space(1, g)),
        ("P(3)".into(), projective_space(3, g)),
        ("Gr(4, 2)".into(), grassmannian(4, 2, g)),
        ("flag(4, [1, 2])".into(), flag(4, vec![1, 2], g)),
        ("hirzebruch(2)".into(), hirzebruch(2, g)),
        ("cusp".into(), cusp(g)),
        ("node".into(), node(g)),
        ("cone_of_P1".into(), cone_of_p1(g)),
        ("projective_cone(P(2), 1)".into(), projective_cone(projective_space(2, g), 1)),
        ("projective_cone(node, 1)".into(), projective_cone(node(g), 1)),
    ]
}

/// Subsets of `{1..n}` of size `d` meeting `{1..i}` in at least `j_i` elements.
pub fn brute_finite(n: usize, d: usize, j: &[usize]) -> usize {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == d)
        .filter(|s| (0..=n).all(|i| (s & ((1u32 << i) - 1)).count_ones() as usize >= j[i]))
        .count()
}

pub fn all_j_sequences(n: usize) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    let mut stack = vec![vec![0usize]];
    while let Some(j) = stack.pop() {
        if j.len() == n + 1 {
            out.push((j[n], j));
            continue;
        }
        let last = *j.last().unwrap();
        for v in last..=j.len() {
            let mut next = j.clone();
            next.push(v);
            stack.push(next);
        }
    }
    out
}

/// Weakly decreasing vectors of length `n` with `Σ|μ_i| ≤ bound`.
pub fn dominant(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<i64>> = (-bound..=bound).map(|v| vec![v]).collect();
    while let Some(mu) = stack.pop() {
        if mu.iter().map(|v| v.abs()).sum::<i64>() > bound {
            continue;
        }
        if mu.len() == n {
            out.push(mu);
            continue;
        }
        for v in -bound..=*mu.last().unwrap() {
            let mut next = mu.clone();
            next.push(v);
            stack.push(next);
        }
    }
    out
}

/// Integer vectors in `[μ_n, μ_1]^n` whose sorted form lies below `μ` in
/// dominance order.
pub fn brute_affine(mu: &[i64]) -> usize {
    let n = mu.len();
    let (lo, hi) = (mu[n - 1], mu[0]);
    let total: i64 = mu.iter().sum();
    let mut count = 0;
    let mut nu = vec![lo; n];
    loop {
        let mut sorted = nu.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut ok = sorted.iter().sum::<i64>() == total;
        let (mut a, mut b) = (0, 0);
        for k in 0..n {
            a += sorted[k];
            b += mu[k];
            ok &= a <= b;
        }
        count += usize::from(ok);
        let mut k = 0;
        while k < n && nu[k] == hi {
            nu[k] = lo;
            k += 1;
        }
        if k == n {
            return count;
        }
        nu[k] += 1;
    }
}
