//! Finite and affine Schubert varieties for `GL_n`: towers, descent trees and
//! fixed-point counts used as rank oracles.

use crate::dsl::library::standard_characters;
use crate::dsl::{BundleDatum, ConstructionTree, SheafDatum};
use crate::engine::sod::binomial;
use crate::error::{Error, Result};
use crate::group_rep::GroupDatum;
use crate::Int;

/// `{V ⊆ k^n : dim V = d, dim(V ∩ F_i) ≥ j_i}` for the standard flag `F_•`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSchubertDatum {
    pub n: usize,
    pub d: usize,
    /// `(j_0, …, j_n)`.
    pub j_seq: Vec<usize>,
}

impl FiniteSchubertDatum {
    pub fn new(n: usize, d: usize, j_seq: Vec<usize>) -> Result<Self> {
        let datum = FiniteSchubertDatum { n, d, j_seq };
        datum.check()?;
        Ok(datum)
    }

    /// The full Grassmannian `Gr(d, n)`: `j_i = max(0, i - (n - d))`.
    pub fn grassmannian(n: usize, d: usize) -> Result<Self> {
        Self::new(n, d, (0..=n).map(|i| i.saturating_sub(n.saturating_sub(d))).collect())
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Range(format!("j-sequence {:?}: {m}", self.j_seq)));
        if self.j_seq.len() != self.n + 1 {
            return bad(format!("needs n + 1 = {} entries", self.n + 1));
        }
        if self.j_seq[0] != 0 {
            return bad("j_0 must be 0".into());
        }
        if self.j_seq[self.n] != self.d {
            return bad(format!("j_n must equal d = {}", self.d));
        }
        if self.j_seq.windows(2).any(|w| w[0] > w[1]) {
            return bad("must be nondecreasing".into());
        }
        if let Some(i) = (0..=self.n).find(|&i| self.j_seq[i] > i) {
            return bad(format!("j_{i} exceeds {i}"));
        }
        Ok(())
    }

    /// `d_i = j_i - j_{i-1}` for `i = 1..n`.
    pub fn jumps(&self) -> Vec<usize> {
        self.j_seq.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// The tightest sequence defining the same variety:
    /// `j_{i-1} ≥ j_i - 1`, filled in from the top.
    pub fn normalized(&self) -> Self {
        let mut j = self.j_seq.clone();
        for i in (1..j.len()).rev() {
            j[i - 1] = j[i - 1].max(j[i].saturating_sub(1));
        }
        FiniteSchubertDatum { n: self.n, d: self.d, j_seq: j }
    }

    /// Rank of the Bott–Samelson tower, `∏ C(i - j_{i-1}, d_i)`.
    pub fn tower_rank(&self) -> Int {
        self.jumps().iter().enumerate().map(|(k, &di)| binomial(k + 1 - self.j_seq[k], di)).product()
    }
}

/// `#{S ⊆ {1..n} : |S| = d, |S ∩ {1..i}| ≥ j_i}` by dynamic programming
/// over `|S ∩ {1..i}|`.
pub fn cell_count_finite(datum: &FiniteSchubertDatum) -> Int {
    let mut ways = vec![Int::from(0); datum.d + 1];
    ways[0] = Int::from(1);
    for i in 1..=datum.n {
        let mut next = vec![Int::from(0); datum.d + 1];
        for (c, w) in ways.iter().enumerate() {
            next[c] += w;
            if c < datum.d {
                next[c + 1] += w;
            }
        }
        for (c, w) in next.iter_mut().enumerate() {
            if c < datum.j_seq[i] {
                *w = Int::from(0);
            }
        }
        ways = next;
    }
    ways[datum.d].clone()
}

fn to_usize(v: &Int) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::Range(format!("count {v} too large")))
}

/// Bott–Samelson tower followed by stratified descent onto the Schubert
/// variety. Step `i` with `d_i > 0` chooses `d_i`-planes in a bundle of
/// rank `i - j_{i-1}`; the descent's rank is the fixed-point count.
pub fn finite_schubert_tree(datum: &FiniteSchubertDatum, group: &GroupDatum) -> Result<ConstructionTree> {
    datum.check()?;
    if datum.d == 0 {
        return Ok(ConstructionTree::Point);
    }
    let mut tower = ConstructionTree::Point;
    let mut first = true;
    let mut steps = Vec::new();
    for (k, &di) in datum.jumps().iter().enumerate() {
        if di == 0 {
            continue;
        }
        let rank = k + 1 - datum.j_seq[k];
        // Only the first step is a trivial bundle with torus weights.
        let bundle = match (first, standard_characters(group, rank)) {
            (true, Some(chars)) => BundleDatum::split(chars),
            _ => BundleDatum::plain(rank),
        };
        first = false;
        tower = ConstructionTree::flag_bundle(tower, bundle, vec![di]);
        steps.push(di);
    }
    let sheaf = SheafDatum { generic_rank: datum.d, presentation_ranks: (0, datum.d) };
    Ok(ConstructionTree::descent(tower, sheaf, steps, Some(to_usize(&cell_count_finite(datum))?)))
}

/// A dominant coweight `mu` of `GL_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoweightDatum {
    pub n: usize,
    pub mu: Vec<i64>,
}

/// `mu + m·(1^n) = ω_{k_1} + … + ω_{k_ℓ}` with `k_1 ≥ k_2 ≥ …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinusculeDecomposition {
    pub ks: Vec<usize>,
    pub m: i64,
}

impl CoweightDatum {
    pub fn new(mu: Vec<i64>) -> Result<Self> {
        let datum = CoweightDatum { n: mu.len(), mu };
        datum.check()?;
        Ok(datum)
    }

    pub fn check(&self) -> Result<()> {
        if self.n == 0 || self.mu.len() != self.n {
            return Err(Error::Range(format!("coweight {:?} must have n = {} ≥ 1 entries", self.mu, self.n)));
        }
        if self.mu.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Range(format!("coweight {:?} is not dominant", self.mu)));
        }
        Ok(())
    }

    /// Number of fundamental coweights after normalizing the determinant.
    pub fn length(&self) -> usize {
        (self.mu[0] - self.mu[self.n - 1]) as usize
    }

    /// `mu - mu_n·(1^n)`, a partition with last part 0.
    pub fn normalized(&self) -> Vec<i64> {
        let last = self.mu[self.n - 1];
        self.mu.iter().map(|v| v - last).collect()
    }
}

/// Column decomposition of the normalized partition, largest column first.
pub fn minuscule_decomposition(datum: &CoweightDatum) -> Result<MinusculeDecomposition> {
    datum.check()?;
    let nu = datum.normalized();
    let ks = (1..=nu[0]).map(|c| nu.iter().filter(|&&v| v >= c).count()).collect();
    Ok(MinusculeDecomposition { ks, m: -datum.mu[datum.n - 1] })
}

/// `ω_k`.
pub fn fundamental(n: usize, k: usize) -> Vec<i64> {
    (0..n).map(|i| i64::from(i < k)).collect()
}

/// Tree for `X_{≤μ}` by induction on the length: peel off the largest
/// minuscule piece `μ = ω_{k_1} + λ`, take the Grassmannian bundle of type
/// `k_1` over `X_{≤λ}`, and descend with the fixed-point count as oracle.
pub fn affine_schubert_tree(datum: &CoweightDatum, group: &GroupDatum) -> Result<ConstructionTree> {
    let dec = minuscule_decomposition(datum)?;
    let n = datum.n;
    match dec.ks.as_slice() {
        [] => Ok(ConstructionTree::Point),
        [k] => {
            let bundle = standard_characters(group, n).map_or(BundleDatum::plain(n), BundleDatum::split);
            Ok(ConstructionTree::flag_bundle(ConstructionTree::Point, bundle, vec![*k]))
        }
        [k1, ..] => {
            let nu = datum.normalized();
            let lambda: Vec<i64> = nu.iter().zip(fundamental(n, *k1)).map(|(a, b)| a - b).collect();
            let below = affine_schubert_tree(&CoweightDatum { n, mu: lambda }, group)?;
            let cover = ConstructionTree::flag_bundle(below, BundleDatum::plain(n), vec![*k1]);
            // F = coker(t) on the rank-|μ| tautological bundle: one Jordan block per nonzero part.
            let size = nu.iter().sum::<i64>() as usize;
            let blocks = nu.iter().filter(|&&v| v > 0).count();
            let sheaf = SheafDatum { generic_rank: blocks, presentation_ranks: (size, size) };
            Ok(ConstructionTree::descent(cover, sheaf, vec![*k1], Some(to_usize(&affine_cell_count(datum))?)))
        }
    }
}

/// `∏_j C(n, k_j)`, the rank of the convolution tower.
pub fn affine_tower_rank(datum: &CoweightDatum) -> Result<Int> {
    Ok(minuscule_decomposition(datum)?.ks.iter().map(|&k| binomial(datum.n, k)).product())
}

/// `#{ν ∈ Z^n : sort(ν) ≤ μ in dominance order}`: dominant `λ ≤ μ`, each
/// weighted by its number of distinct permutations.
pub fn affine_cell_count(datum: &CoweightDatum) -> Int {
    let nu = datum.normalized();
    let total: i64 = nu.iter().sum();
    let mut prefix = vec![0; datum.n + 1];
    for (i, v) in nu.iter().enumerate() {
        prefix[i + 1] = prefix[i] + v;
    }
    let mut count = Int::from(0);
    let mut current = Vec::with_capacity(datum.n);
    dominant_below(&prefix, total, nu[0], 0, &mut current, &mut count);
    count
}

fn dominant_below(prefix: &[i64], total: i64, cap: i64, sum: i64, current: &mut Vec<i64>, count: &mut Int) {
    let n = prefix.len() - 1;
    let i = current.len();
    if i == n {
        if sum == total {
            *count += permutations(current);
        }
        return;
    }
    let remaining = (n - i) as i64;
    for v in (0..=cap).rev() {
        let s = sum + v;
        if s > prefix[i + 1] {
            continue;
        }
        // Later parts are ≤ v, so the total is reachable only if this holds.
        if s + v * (remaining - 1) < total {
            break;
        }
        current.push(v);
        dominant_below(prefix, total, v, s, current, count);
        current.pop();
    }
}

/// Distinct rearrangements of a multiset.
fn permutations(parts: &[i64]) -> Int {
    let mut out: Int = (1..=parts.len()).map(Int::from).product();
    let mut i = 0;
    while i < parts.len() {
        let run = parts[i..].iter().take_while(|&&v| v == parts[i]).count();
        out /= (1..=run).map(Int::from).product::<Int>();
        i += run;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::validate;
    use crate::engine::compute_degree0;

    fn brute_finite(d: &FiniteSchubertDatum) -> usize {
        (0u32..1 << d.n)
            .filter(|s| s.count_ones() as usize == d.d)
            .filter(|s| (0..=d.n).all(|i| (s & ((1u32 << i) - 1)).count_ones() as usize >= d.j_seq[i]))
            .count()
    }

    #[test]
    fn finite_examples() {
        let gr = FiniteSchubertDatum::new(4, 2, vec![0, 0, 0, 1, 2]).unwrap();
        assert_eq!(gr, FiniteSchubertDatum::grassmannian(4, 2).unwrap());
        assert_eq!(gr.tower_rank(), Int::from(9));
        assert_eq!(cell_count_finite(&gr), Int::from(6));
        let s = FiniteSchubertDatum::new(4, 2, vec![0, 0, 1, 1, 2]).unwrap();
        assert_eq!(s.tower_rank(), Int::from(6));
        assert_eq!(cell_count_finite(&s), Int::from(5));
        let p1 = FiniteSchubertDatum::new(2, 1, vec![0, 0, 1]).unwrap();
        assert_eq!((p1.tower_rank(), cell_count_finite(&p1)), (Int::from(2), Int::from(2)));
        let pt = FiniteSchubertDatum::new(5, 3, vec![0, 1, 2, 3, 3, 3]).unwrap();
        assert_eq!(cell_count_finite(&pt), Int::from(1));
        for d in [&gr, &s, &p1, &pt] {
            assert_eq!(cell_count_finite(d), Int::from(brute_finite(d)));
        }
    }

    #[test]
    fn finite_trees() {
        let g = GroupDatum::torus(4);
        let s = FiniteSchubertDatum::new(4, 2, vec![0, 0, 1, 1, 2]).unwrap();
        let t = finite_schubert_tree(&s, &g).unwrap();
        assert_eq!(validate(&t, &g), Ok(()));
        let ConstructionTree::StratifiedDescent { total_space, oracle_rank, .. } = &t else { panic!() };
        assert_eq!(*oracle_rank, Some(5));
        assert_eq!(compute_degree0(total_space, &g).unwrap().rank, 6);
        assert_eq!(compute_degree0(&t, &g).unwrap().rank, 5);
    }

    #[test]
    fn rejects_bad_sequences() {
        assert!(FiniteSchubertDatum::new(3, 2, vec![0, 0, 1]).is_err());
        assert!(FiniteSchubertDatum::new(3, 2, vec![1, 1, 1, 2]).is_err());
        assert!(FiniteSchubertDatum::new(3, 2, vec![0, 2, 2, 2]).is_err());
        assert!(FiniteSchubertDatum::new(3, 2, vec![0, 1, 0, 2]).is_err());
        assert!(CoweightDatum::new(vec![0, 1]).is_err());
    }

    #[test]
    fn normalization_keeps_the_variety() {
        let s = FiniteSchubertDatum::new(4, 3, vec![0, 0, 0, 0, 3]).unwrap();
        let t = s.normalized();
        assert_eq!(t.j_seq, vec![0, 0, 1, 2, 3]);
        assert_eq!(cell_count_finite(&s), cell_count_finite(&t));
    }

    #[test]
    fn minuscule_examples() {
        let d = |mu: Vec<i64>| minuscule_decomposition(&CoweightDatum::new(mu).unwrap()).unwrap();
        assert_eq!(d(vec![2, 0]), MinusculeDecomposition { ks: vec![1, 1], m: 0 });
        assert_eq!(d(vec![1, 0, 0]), MinusculeDecomposition { ks: vec![1], m: 0 });
        assert_eq!(d(vec![0, -1]), MinusculeDecomposition { ks: vec![1], m: 1 });
        assert_eq!(d(vec![3, 1, 0]), MinusculeDecomposition { ks: vec![2, 1, 1], m: 0 });
    }

    #[test]
    fn affine_counts() {
        let c = |mu: Vec<i64>| affine_cell_count(&CoweightDatum::new(mu).unwrap());
        assert_eq!(c(vec![2, 0]), Int::from(3));
        assert_eq!(c(vec![0, 0, 0]), Int::from(1));
        assert_eq!(c(vec![1, 0]), Int::from(2));
        assert_eq!(c(vec![1, 1, 0]), Int::from(3));
        assert_eq!(c(vec![5, 3]), Int::from(3));
    }

    #[test]
    fn affine_trees() {
        let g = GroupDatum::torus(2);
        let t = affine_schubert_tree(&CoweightDatum::new(vec![2, 0]).unwrap(), &g).unwrap();
        assert_eq!(validate(&t, &g), Ok(()));
        let ConstructionTree::StratifiedDescent { total_space, oracle_rank, .. } = &t else { panic!() };
        assert_eq!(compute_degree0(total_space, &g).unwrap().rank, 4);
        assert_eq!(*oracle_rank, Some(3));
        let p1 = affine_schubert_tree(&CoweightDatum::new(vec![1, 0]).unwrap(), &g).unwrap();
        assert_eq!(compute_degree0(&p1, &g).unwrap().rank, 2);
        let g3 = GroupDatum::torus(3);
        let gr = affine_schubert_tree(&CoweightDatum::new(vec![1, 1, 0]).unwrap(), &g3).unwrap();
        assert!(matches!(&gr, ConstructionTree::FlagBundle { d_vec, .. } if d_vec == &vec![2]));
        assert_eq!(compute_degree0(&gr, &g3).unwrap().rank, 3);
    }
}
