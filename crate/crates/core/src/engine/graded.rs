use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::coeff::{CoefficientTable, FgAbGroup};
use crate::dsl::{classify, validate, ClassTag, ConstructionTree, Corner, NodePath};
use crate::engine::degree0::{compute_degree0, corner_path, labels_b, square_sides, Degree0Module};
use crate::engine::les::solve_base;
use crate::engine::sod::sod_count_usize;
use crate::error::{Error, Result};
use crate::group_rep::GroupDatum;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    /// `E^G_•(X) = E^G_0(X) ⊗_{E_0(pt)} E_•(pt)`.
    Formal { d0: Degree0Module, table: CoefficientTable },
    /// Groups on a finite degree window; zero elsewhere is not implied.
    Explicit { window: RangeInclusive<i64>, groups: BTreeMap<i64, FgAbGroup> },
}

/// A graded invariant `E^G_•(X)`. Group descriptors count free rank over
/// `R(G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedModuleValue {
    pub shape: Shape,
    pub provenance: Vec<String>,
    pub assumed_oracles: Vec<NodePath>,
}

impl GradedModuleValue {
    pub fn formal(d0: Degree0Module, table: CoefficientTable) -> Self {
        let provenance = vec![format!("formality over table `{}` from degree-0 rank {}", table.name(), d0.rank)];
        let assumed_oracles = d0.assumed_oracles.clone();
        GradedModuleValue { shape: Shape::Formal { d0, table }, provenance, assumed_oracles }
    }

    /// Explicit values on `window`; listed degrees outside it are rejected.
    pub fn explicit(
        window: RangeInclusive<i64>,
        groups: BTreeMap<i64, FgAbGroup>,
        provenance: Vec<String>,
    ) -> Result<Self> {
        if let Some(d) = groups.keys().find(|d| !window.contains(d)) {
            return Err(Error::Range(format!("degree {d} lies outside the window {window:?}")));
        }
        Ok(GradedModuleValue { shape: Shape::Explicit { window, groups }, provenance, assumed_oracles: vec![] })
    }

    pub fn value_at(&self, degree: i64) -> Result<FgAbGroup> {
        match &self.shape {
            Shape::Formal { d0, table } => Ok(table.at(degree).tensor_free(d0.rank)),
            Shape::Explicit { window, groups } => {
                if !window.contains(&degree) {
                    return Err(Error::Range(format!("degree {degree} outside the computed window {window:?}")));
                }
                Ok(groups.get(&degree).cloned().unwrap_or_else(FgAbGroup::zero))
            }
        }
    }

    pub fn is_formal(&self) -> bool {
        matches!(self.shape, Shape::Formal { .. })
    }
}

/// Graded value of a validated tree over `table`, materialized on `degrees`
/// when the explicit path is taken.
///
/// Class B trees get the formal shape. Class C trees with the trivial group
/// are solved degree by degree, using the comparison maps at non-split
/// blowups.
pub fn compute_graded(
    tree: &ConstructionTree,
    group: &GroupDatum,
    table: &CoefficientTable,
    degrees: RangeInclusive<i64>,
) -> Result<GradedModuleValue> {
    if degrees.is_empty() {
        return Err(Error::Range(format!("empty degree range {degrees:?}")));
    }
    validate(tree, group).map_err(Error::Invalid)?;
    let class = classify(tree);
    match class.tag {
        ClassTag::B => Ok(GradedModuleValue::formal(compute_degree0(tree, group)?, table.clone())),
        ClassTag::C => {
            if !group.is_trivial() {
                return Err(Error::Unsupported(
                    "class C trees are evaluated only for the trivial group; equivariant blowup maps are not determined by the tree"
                        .into(),
                ));
            }
            let mut groups = BTreeMap::new();
            for d in degrees.clone() {
                let g = evaluate_degreewise(tree, table, d)?;
                if !g.is_zero() {
                    groups.insert(d, g);
                }
            }
            let nonsplit = tree.blowups().filter(|(_, sq)| !sq.split.is_split()).count();
            let provenance = vec![format!(
                "degreewise long exact sequences over table `{}` at {nonsplit} non-split blowup(s)",
                table.name()
            )];
            let mut v = GradedModuleValue::explicit(degrees, groups, provenance)?;
            v.assumed_oracles = class.assumed_oracles;
            Ok(v)
        }
        ClassTag::Cp(p) => Err(Error::Unsupported(format!("henselian bases (p = {p}) carry no computable module"))),
        ClassTag::Invalid(why) => Err(Error::Hypothesis(why)),
    }
}

/// Value in one degree for the trivial group, without validation.
pub fn evaluate_degreewise(tree: &ConstructionTree, table: &CoefficientTable, degree: i64) -> Result<FgAbGroup> {
    eval(tree, &NodePath::root(), table, degree)
}

pub(crate) fn eval(t: &ConstructionTree, path: &NodePath, table: &CoefficientTable, i: i64) -> Result<FgAbGroup> {
    if classify(t).tag == ClassTag::B {
        let rank = labels_b(t, path, &mut Vec::new())?.len();
        return Ok(table.at(i).tensor_free(rank));
    }
    match t {
        ConstructionTree::Point => Ok(table.at(i)),
        ConstructionTree::HenselianBase { p } => {
            Err(Error::Unsupported(format!("henselian base (p = {p}) at {path} carries no computable module")))
        }
        ConstructionTree::Disjoint(cs) => {
            let mut acc = FgAbGroup::zero();
            for (k, c) in cs.iter().enumerate() {
                acc = acc.direct_sum(&eval(c, &path.child(k), table, i)?)?;
            }
            Ok(acc)
        }
        ConstructionTree::FlagBundle { base, bundle, d_vec } => {
            Ok(eval(base, &path.child(0), table, i)?.tensor_free(sod_count_usize(bundle.rank, d_vec)?))
        }
        ConstructionTree::StratifiedDescent { .. } => {
            Err(Error::Unsupported(format!("stratified descent at {path} over a total space outside class B")))
        }
        ConstructionTree::Blowup(sq) if sq.split.is_split() => {
            let (partner, others) = square_sides(sq.unknown);
            let value = |c: Corner| eval(&sq.known[&c], &corner_path(sq, path, c), table, i);
            let sum = value(others[0])?.direct_sum(&value(others[1])?)?;
            let part = value(partner)?;
            sum.cancel(&part)?.ok_or_else(|| Error::InconsistentSplit {
                path: path.to_string(),
                detail: format!("degree {i}: {part} is not a summand of {sum}"),
            })
        }
        ConstructionTree::Blowup(sq) => {
            if sq.unknown != Corner::X {
                return Err(Error::Unsupported(format!(
                    "non-split blowup at {path} with unknown corner {}; only X can be solved for",
                    sq.unknown
                )));
            }
            solve_base(sq, path, table, i)
        }
    }
}
