//! Named example constructions.

use std::collections::BTreeMap;

use crate::coeff::Matrix;
use crate::dsl::tree::{BlowupSquare, BundleDatum, ConstructionTree, Split};
use crate::error::{Error, Result};
use crate::group_rep::GroupDatum;

/// An argument to [`example_library`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LibraryArg {
    Int(i64),
    Ints(Vec<i64>),
    Tree(ConstructionTree),
}

pub const LIBRARY_NAMES: [&str; 8] =
    ["projective_space", "grassmannian", "flag", "hirzebruch", "cusp", "node", "cone_of_P1", "projective_cone"];

/// Standard torus weights on `rank` coordinates: coordinate `j` carries the
/// `j`-th basis character while the torus has one, and the trivial character
/// after that. `None` when `G` has no character lattice.
pub fn standard_characters(group: &GroupDatum, rank: usize) -> Option<Vec<Vec<i64>>> {
    if !group.is_diagonalizable() {
        return None;
    }
    let dim = group.lattice_dim();
    let free = group.free_rank();
    Some(
        (0..rank)
            .map(|j| {
                let mut c = vec![0; dim];
                if j < free {
                    c[j] = 1;
                }
                c
            })
            .collect(),
    )
}

fn standard_bundle(group: &GroupDatum, rank: usize) -> BundleDatum {
    match standard_characters(group, rank) {
        Some(chars) => BundleDatum::split(chars),
        None => BundleDatum::plain(rank),
    }
}

/// `P(k^{n+1})`.
pub fn projective_space(n: usize, group: &GroupDatum) -> ConstructionTree {
    grassmannian(n + 1, 1, group)
}

/// Grassmannian of `d`-dimensional subspaces of `k^n`.
pub fn grassmannian(n: usize, d: usize, group: &GroupDatum) -> ConstructionTree {
    flag(n, vec![d], group)
}

pub fn flag(n: usize, d_vec: Vec<usize>, group: &GroupDatum) -> ConstructionTree {
    ConstructionTree::flag_bundle(ConstructionTree::Point, standard_bundle(group, n), d_vec)
}

/// `Σ_m = P_{P^1}(O ⊕ O(-m))`.
pub fn hirzebruch(m: i64, group: &GroupDatum) -> ConstructionTree {
    ConstructionTree::flag_bundle(projective_space(1, group), BundleDatum::twisted(vec![0, -m]), vec![1])
}

/// Cuspidal cubic: normalization `P^1 → X` with center and exceptional
/// locus a point; `E → Y` retracts along `P^1 → pt`.
pub fn cusp(group: &GroupDatum) -> ConstructionTree {
    ConstructionTree::Blowup(BlowupSquare::resolving(
        projective_space(1, group),
        ConstructionTree::Point,
        ConstructionTree::Point,
        Split::Retraction,
    ))
}

/// Nodal cubic: `P^1 → X` glues two points. Carries the degree-0 gluing map
/// `(a, b, c) ↦ (a + b + c, a + b + c)` of `K_0(P^1) ⊕ K_0(pt) → K_0(pt ⊔ pt)`.
pub fn node(group: &GroupDatum) -> ConstructionTree {
    let mut sq = BlowupSquare::resolving(
        projective_space(1, group),
        ConstructionTree::Point,
        ConstructionTree::Disjoint(vec![ConstructionTree::Point, ConstructionTree::Point]),
        Split::None,
    );
    sq.comparison_maps = BTreeMap::from([(0, node_gluing_map())]);
    ConstructionTree::Blowup(sq)
}

pub fn node_gluing_map() -> Matrix<crate::Int> {
    Matrix::from_row_slices(&[&[1, 1, 1], &[1, 1, 1]]).expect("rectangular")
}

/// Projective cone over `base` with respect to `O(twist)`: blow up the cone
/// point to get `P_base(O ⊕ O(twist))`, exceptional locus the zero section.
pub fn projective_cone(base: ConstructionTree, twist: i64) -> ConstructionTree {
    let cover = ConstructionTree::flag_bundle(base.clone(), BundleDatum::twisted(vec![0, twist]), vec![1]);
    ConstructionTree::Blowup(BlowupSquare::resolving(cover, ConstructionTree::Point, base, Split::Retraction))
}

/// Projective cone over the conic `P^1 ⊂ P^2`, i.e. with respect to `O(2)`.
pub fn cone_of_p1(group: &GroupDatum) -> ConstructionTree {
    projective_cone(projective_space(1, group), 2)
}

fn nonneg(v: i64, what: &str) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::Range(format!("{what} must be non-negative, got {v}")))
}

/// Look up a named example.
pub fn example_library(name: &str, args: &[LibraryArg], group: &GroupDatum) -> Result<ConstructionTree> {
    use LibraryArg::*;
    let arity = |want: &str| Error::Range(format!("`{name}` expects arguments ({want})"));
    match (name, args) {
        ("projective_space", [Int(n)]) => Ok(projective_space(nonneg(*n, "n")?, group)),
        ("grassmannian", [Int(n), Int(d)]) => Ok(grassmannian(nonneg(*n, "n")?, nonneg(*d, "d")?, group)),
        ("flag", [Int(n), Ints(ds)]) => {
            let ds = ds.iter().map(|&d| nonneg(d, "d")).collect::<Result<_>>()?;
            Ok(flag(nonneg(*n, "n")?, ds, group))
        }
        ("hirzebruch", [Int(m)]) => Ok(hirzebruch(*m, group)),
        ("cusp", []) => Ok(cusp(group)),
        ("node", []) => Ok(node(group)),
        ("cone_of_P1", []) => Ok(cone_of_p1(group)),
        ("projective_cone", [Tree(t), Int(twist)]) => Ok(projective_cone(t.clone(), *twist)),
        ("projective_space" | "hirzebruch", _) => Err(arity("integer")),
        ("grassmannian", _) => Err(arity("n, d")),
        ("flag", _) => Err(arity("n, [d_1, ...]")),
        ("cusp" | "node" | "cone_of_P1", _) => Err(arity("none")),
        ("projective_cone", _) => Err(arity("tree, twist")),
        _ => Err(Error::Lookup { kind: "library entry", name: name.to_string() }),
    }
}
