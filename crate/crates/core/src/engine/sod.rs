use num_traits::One;

use crate::error::{Error, Result};
use crate::Int;

pub fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::from(0);
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// Number of pieces in the semiorthogonal decomposition of `Flag(E, d_vec)`
/// over its base, for `E` of rank `rank`: the multinomial
/// `rank! / (d_1! ⋯ d_m! (rank - Σd)!)`.
pub fn sod_count(rank: usize, d_vec: &[usize]) -> Result<Int> {
    let total: usize = d_vec.iter().sum();
    if total > rank {
        return Err(Error::Range(format!("dimension vector {d_vec:?} has total {total} > rank {rank}")));
    }
    // Grassmannian-bundle tower: choose d_1 of rank, then d_2 of the rest, ...
    let mut left = rank;
    let mut acc = Int::one();
    for &d in d_vec {
        acc *= binomial(left, d);
        left -= d;
    }
    Ok(acc)
}

pub(crate) fn sod_count_usize(rank: usize, d_vec: &[usize]) -> Result<usize> {
    let c = sod_count(rank, d_vec)?;
    usize::try_from(&c).map_err(|_| Error::Range(format!("decomposition count {c} does not fit in memory")))
}
