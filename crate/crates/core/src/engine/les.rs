//! The long exact sequence of a non-split blowup square with unknown base:
//!
//! ```text
//! … → E_{i+1}(E) → E_i(X) → E_i(Y) ⊕ E_i(Z) → E_i(E) → E_{i-1}(X) → …
//! ```
//!
//! With `φ_i : E_i(Y) ⊕ E_i(Z) → E_i(E)` given, `E_i(X)` is an extension of
//! `ker φ_i` by `coker φ_{i+1}`. The kernel is free, so the extension splits.

use std::ops::RangeInclusive;

use crate::coeff::{snf, CoefficientTable, FgAbGroup, Matrix};
use crate::dsl::{BlowupSquare, ConstructionTree, Corner, NodePath};
use crate::engine::degree0::corner_path;
use crate::engine::graded::eval;
use crate::error::{Error, Result};
use crate::{Int, IntMatrix};

/// `φ_i` together with whether the groups involved are rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonMap {
    pub degree: i64,
    pub matrix: IntMatrix,
    pub rational: bool,
}

fn free_rank_of(g: &FgAbGroup, what: &str, path: &NodePath, i: i64) -> Result<usize> {
    if !g.is_free() {
        return Err(Error::Unsupported(format!(
            "{what} at {path} has torsion in degree {i} ({g}); the solver needs free corners"
        )));
    }
    Ok(g.free_rank())
}

/// `φ_i` for the square at `path`. A map between nonzero groups must be
/// supplied; one with zero source or target is the zero map.
pub fn comparison_map(sq: &BlowupSquare, path: &NodePath, table: &CoefficientTable, i: i64) -> Result<ComparisonMap> {
    let value = |c: Corner| eval(&sq.known[&c], &corner_path(sq, path, c), table, i);
    let (y, z, e) = (value(Corner::Y)?, value(Corner::Z)?, value(Corner::E)?);
    let source = y.direct_sum(&z)?;
    let rational = source.is_rational() || e.is_rational();
    let s = free_rank_of(&source, "Y ⊕ Z", path, i)?;
    let t = free_rank_of(&e, "E", path, i)?;
    if s == 0 || t == 0 {
        return Ok(ComparisonMap { degree: i, matrix: Matrix::zeros(t, s), rational });
    }
    let Some(m) = sq.comparison_maps.get(&i) else {
        return Err(Error::Underdetermined(format!(
            "no comparison map in degree {i} for the blowup at {path} (Y ⊕ Z of rank {s} → E of rank {t})"
        )));
    };
    if (m.rows(), m.cols()) != (t, s) {
        return Err(Error::Range(format!(
            "comparison map in degree {i} at {path} is {}×{}, expected {t}×{s}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(ComparisonMap { degree: i, matrix: m.clone(), rational })
}

/// `E_i(X) ≅ coker φ_{i+1} ⊕ ker φ_i`.
pub fn solve_base(sq: &BlowupSquare, path: &NodePath, table: &CoefficientTable, i: i64) -> Result<FgAbGroup> {
    let upper = comparison_map(sq, path, table, i + 1)?;
    let lower = comparison_map(sq, path, table, i)?;
    let coker = snf::snf(&upper.matrix).cokernel();
    let ker = snf::snf(&lower.matrix).kernel_rank();
    if upper.rational || lower.rational {
        Ok(FgAbGroup::rational(coker.free_rank() + ker))
    } else {
        coker.direct_sum(&FgAbGroup::free(ker))
    }
}

/// A module `Z^gens / (column span of relations)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presented {
    pub relations: IntMatrix,
}

impl Presented {
    pub fn free(n: usize) -> Self {
        Presented { relations: Matrix::zeros(n, 0) }
    }

    pub fn gens(&self) -> usize {
        self.relations.rows()
    }

    pub fn group(&self) -> FgAbGroup {
        snf::snf(&self.relations).cokernel()
    }
}

/// `A --f--> B --g--> C` is exact at `B`.
pub fn exact_at(f: &IntMatrix, g: &IntMatrix, b: &Presented, c: &Presented) -> bool {
    // Kernel of g modulo the relations of C: pairs (v, w) with g v = rel_C w.
    let stacked = g.hconcat(&c.relations.map(|x| -x.clone()));
    let ker = snf::kernel(&stacked).row_block(0..b.gens());
    let image = f.hconcat(&b.relations);
    let kernel = ker.hconcat(&b.relations);
    snf::same_span(&image, &kernel)
}

/// One degree of the assembled sequence: `X_i → YZ_i → E_i → X_{i-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesDegree {
    pub degree: i64,
    pub x: Presented,
    pub yz: Presented,
    pub e: Presented,
    /// `X_i → YZ_i`.
    pub alpha: IntMatrix,
    /// `YZ_i → E_i`.
    pub phi: IntMatrix,
    /// `E_i → X_{i-1}`.
    pub delta: IntMatrix,
}

/// The sequence of the square at the root of `tree`, with `E_•(X)` filled in
/// from the solver, on `degrees` (and one degree below for the connecting map).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssembledLes {
    pub steps: Vec<LesDegree>,
    /// `X_{lo-1}`, the target of the last connecting map.
    pub tail: Presented,
    pub tail_alpha: IntMatrix,
}

fn presented_base(upper: &IntMatrix, lower: &IntMatrix) -> (Presented, IntMatrix) {
    // X_i = Z^{t_{i+1}} / im φ_{i+1}  ⊕  ker φ_i.
    let t = upper.rows();
    let k = snf::kernel(lower);
    let gens = t + k.cols();
    let mut rel = Matrix::zeros(gens, upper.cols());
    for r in 0..t {
        for c in 0..upper.cols() {
            rel[(r, c)] = upper[(r, c)].clone();
        }
    }
    let alpha = Matrix::zeros(lower.cols(), t).hconcat(&k);
    (Presented { relations: rel }, alpha)
}

pub fn assemble_les(
    tree: &ConstructionTree,
    table: &CoefficientTable,
    degrees: RangeInclusive<i64>,
) -> Result<AssembledLes> {
    let ConstructionTree::Blowup(sq) = tree else {
        return Err(Error::Range(format!("expected a blowup node, found `{}`", tree.kind())));
    };
    if sq.unknown != Corner::X {
        return Err(Error::Unsupported("the assembled sequence needs unknown corner X".into()));
    }
    let root = NodePath::root();
    let (lo, hi) = (*degrees.start(), *degrees.end());
    let mut phis = std::collections::BTreeMap::new();
    for d in lo - 1..=hi + 1 {
        phis.insert(d, comparison_map(sq, &root, table, d)?.matrix);
    }
    let mut steps = Vec::new();
    for i in (lo..=hi).rev() {
        let (x, alpha) = presented_base(&phis[&(i + 1)], &phis[&i]);
        let phi = phis[&i].clone();
        let (x_below, _) = presented_base(&phis[&i], &phis[&(i - 1)]);
        let t = phi.rows();
        let mut delta = Matrix::zeros(x_below.gens(), t);
        for r in 0..t {
            delta[(r, r)] = Int::from(1);
        }
        steps.push(LesDegree {
            degree: i,
            yz: Presented::free(phi.cols()),
            e: Presented::free(t),
            x,
            alpha,
            phi,
            delta,
        });
    }
    let (tail, tail_alpha) = presented_base(&phis[&lo], &phis[&(lo - 1)]);
    Ok(AssembledLes { steps, tail, tail_alpha })
}

impl AssembledLes {
    /// Check exactness at every interior term.
    pub fn is_exact(&self) -> bool {
        for (k, s) in self.steps.iter().enumerate() {
            let (x_below, alpha_below) = match self.steps.get(k + 1) {
                Some(next) => (&next.x, &next.alpha),
                None => (&self.tail, &self.tail_alpha),
            };
            if !exact_at(&s.alpha, &s.phi, &s.yz, &s.e)
                || !exact_at(&s.phi, &s.delta, &s.e, x_below)
                || !exact_at(&s.delta, alpha_below, x_below, &Presented::free(alpha_below.rows()))
            {
                return false;
            }
            if k > 0 {
                let above = &self.steps[k - 1];
                if !exact_at(&above.delta, &s.alpha, &s.x, &s.yz) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::builtin_table;
    use crate::dsl::library::{node, projective_space};
    use crate::dsl::Split;
    use crate::group_rep::GroupDatum;

    #[test]
    fn node_sequence_is_exact() {
        let t = node(&GroupDatum::trivial());
        let les = assemble_les(&t, &builtin_table("unit").unwrap(), -2..=1).unwrap();
        assert!(les.is_exact());
        let x: Vec<FgAbGroup> = les.steps.iter().map(|s| s.x.group()).collect();
        assert_eq!(x, vec![FgAbGroup::zero(), FgAbGroup::free(2), FgAbGroup::free(1), FgAbGroup::zero()]);
    }

    #[test]
    fn cusp_with_identity_comparison() {
        // The cusp square read as a non-split square with the restriction map.
        let g = GroupDatum::trivial();
        let mut sq = BlowupSquare::resolving(
            projective_space(1, &g),
            ConstructionTree::Point,
            ConstructionTree::Point,
            Split::None,
        );
        sq.comparison_maps.insert(0, Matrix::from_row_slices(&[&[1, 0, 1]]).unwrap());
        let t = ConstructionTree::Blowup(sq);
        let unit = builtin_table("unit").unwrap();
        assert_eq!(crate::engine::graded::evaluate_degreewise(&t, &unit, 0).unwrap(), FgAbGroup::free(2));
        assert!(crate::engine::graded::evaluate_degreewise(&t, &unit, -1).unwrap().is_zero());
        assert!(assemble_les(&t, &unit, -1..=0).unwrap().is_exact());
    }

    #[test]
    fn torsion_cokernel() {
        let mut sq = BlowupSquare::resolving(
            ConstructionTree::Point,
            ConstructionTree::Point,
            ConstructionTree::Point,
            Split::None,
        );
        sq.comparison_maps.insert(0, Matrix::from_row_slices(&[&[2, 0]]).unwrap());
        let t = ConstructionTree::Blowup(sq);
        let unit = builtin_table("unit").unwrap();
        assert_eq!(crate::engine::graded::evaluate_degreewise(&t, &unit, -1).unwrap(), FgAbGroup::cyclic(2));
        let les = assemble_les(&t, &unit, -1..=0).unwrap();
        assert!(les.is_exact());
    }

    #[test]
    fn wrong_shape_is_rejected() {
        let mut sq = BlowupSquare::resolving(
            ConstructionTree::Point,
            ConstructionTree::Point,
            ConstructionTree::Point,
            Split::None,
        );
        sq.comparison_maps.insert(0, Matrix::from_row_slices(&[&[1, 1, 1]]).unwrap());
        let err = solve_base(&sq, &NodePath::root(), &builtin_table("unit").unwrap(), 0).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn a_wrong_answer_breaks_exactness() {
        let f = Matrix::from_row_slices(&[&[1], &[0]]).unwrap();
        let g = Matrix::from_row_slices(&[&[0, 0]]).unwrap();
        assert!(!exact_at(&f, &g, &Presented::free(2), &Presented::free(1)));
        let f = Matrix::from_row_slices(&[&[1, 0], &[0, 1]]).unwrap();
        assert!(exact_at(&f, &g, &Presented::free(2), &Presented::free(1)));
    }
}
