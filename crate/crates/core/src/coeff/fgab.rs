use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^r ⊕ Z/a_1 ⊕ … ⊕ Z/a_k` in Smith
/// form (`a_i ≥ 2`, `a_i | a_{i+1}`), or, with `rational` set, its
/// rationalization `Q^r`.
///
/// Descriptors are canonical: two values are equal iff the groups are
/// isomorphic. The zero group is always stored as integral.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
    rational: bool,
}

impl FgAbGroup {
    /// Canonicalize an arbitrary list of cyclic orders; `0` means a copy of `Z`
    /// and `±1` is dropped.
    pub fn new(free_rank: usize, factors: impl IntoIterator<Item = BigInt>) -> Self {
        let mut free_rank = free_rank;
        let mut torsion = Vec::new();
        for f in factors {
            let f = f.abs();
            if f.is_zero() {
                free_rank += 1;
            } else if !f.is_one() {
                torsion.push(f);
            }
        }
        FgAbGroup { free_rank, invariant_factors: divisibility_chain(torsion), rational: false }
    }

    pub fn zero() -> Self {
        FgAbGroup { free_rank: 0, invariant_factors: Vec::new(), rational: false }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { free_rank: rank, invariant_factors: Vec::new(), rational: false }
    }

    pub fn cyclic(order: i64) -> Self {
        Self::new(0, [BigInt::from(order)])
    }

    /// `Q^rank`.
    pub fn rational(rank: usize) -> Self {
        FgAbGroup { free_rank: rank, invariant_factors: Vec::new(), rational: rank > 0 }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_rational(&self) -> bool {
        self.rational
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Order of a finite group.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.invariant_factors.iter().product())
    }

    /// `self ⊗ Q`.
    pub fn rationalize(&self) -> Self {
        Self::rational(self.free_rank)
    }

    fn check_compatible(&self, other: &Self) -> Result<bool> {
        match (self.is_zero(), other.is_zero()) {
            (true, _) => Ok(other.rational),
            (_, true) => Ok(self.rational),
            _ if self.rational == other.rational => Ok(self.rational),
            _ => Err(Error::MixedCoefficients(format!("{self} and {other}"))),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let rational = self.check_compatible(other)?;
        let mut g = Self::new(
            self.free_rank + other.free_rank,
            self.invariant_factors.iter().chain(&other.invariant_factors).cloned(),
        );
        g.rational = rational && g.free_rank > 0;
        Ok(g)
    }

    /// `self ⊗ Z^r`, i.e. `r` copies of `self`.
    pub fn tensor_free(&self, r: usize) -> Self {
        let mut g = Self::new(self.free_rank * r, std::iter::repeat_n(&self.invariant_factors, r).flatten().cloned());
        g.rational = self.rational && g.free_rank > 0;
        g
    }

    /// Rank of `Hom(self, other)` modulo torsion.
    pub fn hom_free_rank(&self, other: &Self) -> usize {
        self.free_rank * other.free_rank
    }

    /// A group `H` with `H ⊕ other ≅ self`, if one exists.
    pub fn cancel(&self, other: &Self) -> Result<Option<Self>> {
        let rational = self.check_compatible(other)?;
        if other.free_rank > self.free_rank {
            return Ok(None);
        }
        let mut all: Vec<BigInt> = self.invariant_factors.clone();
        all.extend(other.invariant_factors.iter().cloned());
        let base = coprime_base(&all);
        let mut factors_per_position: Vec<BigInt> = Vec::new();
        for b in &base {
            let mut mine: Vec<u32> =
                self.invariant_factors.iter().map(|a| valuation(a, b)).filter(|&v| v > 0).collect();
            let theirs: Vec<u32> = other.invariant_factors.iter().map(|a| valuation(a, b)).filter(|&v| v > 0).collect();
            for v in theirs {
                match mine.iter().position(|&w| w == v) {
                    Some(k) => {
                        mine.swap_remove(k);
                    }
                    None => return Ok(None),
                }
            }
            mine.sort_unstable_by(|a, b| b.cmp(a));
            for (k, v) in mine.into_iter().enumerate() {
                if factors_per_position.len() <= k {
                    factors_per_position.push(BigInt::one());
                }
                factors_per_position[k] *= b.pow(v);
            }
        }
        let mut g = Self::new(self.free_rank - other.free_rank, factors_per_position);
        g.rational = rational && g.free_rank > 0;
        Ok(Some(g))
    }

    /// Description with `base` standing for the free rank-one module
    /// (`Z`, `Q`, or a representation ring).
    pub fn describe_over(&self, base: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(base.to_string()),
            r => parts.push(format!("{base}^{r}")),
        }
        let mut counts: BTreeMap<&BigInt, usize> = BTreeMap::new();
        for f in &self.invariant_factors {
            *counts.entry(f).or_default() += 1;
        }
        for (f, c) in counts {
            let cyc = if base == "Z" { format!("Z/{f}") } else { format!("{base}/{f}") };
            parts.push(if c == 1 { cyc } else { format!("({cyc})^{c}") });
        }
        parts.join(" ⊕ ")
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.rational { "Q" } else { "Z" };
        write!(f, "{}", self.describe_over(base))
    }
}

/// Compare-exchange every pair with `(gcd, lcm)`. For each prime this is a
/// selection-sort network on valuations, so the result is a divisibility
/// chain with the same product.
fn divisibility_chain(mut a: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let g = a[i].gcd(&a[j]);
            let l = a[i].lcm(&a[j]);
            a[i] = g;
            a[j] = l;
        }
    }
    a.retain(|x| !x.is_one());
    a
}

/// Pairwise coprime numbers `> 1` over which every input factors.
fn coprime_base(nums: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = nums.iter().filter(|x| !x.is_one()).cloned().collect();
    base.sort();
    base.dedup();
    'refine: loop {
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    let (x, y) = (&base[i] / &g, &base[j] / &g);
                    let mut next: Vec<BigInt> =
                        base.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, v)| v.clone()).collect();
                    next.extend([x, y, g].into_iter().filter(|v| !v.is_one()));
                    next.sort();
                    next.dedup();
                    base = next;
                    continue 'refine;
                }
            }
        }
        return base;
    }
}

fn valuation(a: &BigInt, b: &BigInt) -> u32 {
    let mut a = a.clone();
    let mut v = 0;
    while (&a % b).is_zero() {
        a /= b;
        v += 1;
    }
    v
}
