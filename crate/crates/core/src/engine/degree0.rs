use std::fmt;

use crate::coeff::builtin_table;
use crate::dsl::{classify, validate, BlowupSquare, ClassTag, ConstructionTree, Corner, NodePath};
use crate::engine::graded::evaluate_degreewise;
use crate::engine::ring::{ring_degree0, RingPresentation};
use crate::engine::sod::sod_count_usize;
use crate::error::{Error, Result};
use crate::group_rep::{representation_ring, GroupDatum};

/// `E^G_0(X)` as a free module over `R(G)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Degree0Module {
    pub rank: usize,
    pub basis_labels: Vec<String>,
    pub ring_presentation: Option<RingPresentation>,
    /// Descent nodes whose rank oracle entered the result.
    pub assumed_oracles: Vec<NodePath>,
}

impl fmt::Display for Degree0Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}", self.rank)
    }
}

/// For a square with unknown corner `u`: the known corner on the same side of
/// `X ⊕ E ≅ Y ⊕ Z`, and the two on the other side.
pub(crate) fn square_sides(unknown: Corner) -> (Corner, [Corner; 2]) {
    match unknown {
        Corner::X => (Corner::E, [Corner::Y, Corner::Z]),
        Corner::E => (Corner::X, [Corner::Y, Corner::Z]),
        Corner::Y => (Corner::Z, [Corner::X, Corner::E]),
        Corner::Z => (Corner::Y, [Corner::X, Corner::E]),
    }
}

/// Path of a known corner's subtree.
pub(crate) fn corner_path(sq: &BlowupSquare, path: &NodePath, c: Corner) -> NodePath {
    let idx = sq.known.keys().position(|k| *k == c).expect("known corner");
    path.child(idx)
}

/// Basis labels of a class-B subtree. Records consumed oracles.
pub(crate) fn labels_b(t: &ConstructionTree, path: &NodePath, oracles: &mut Vec<NodePath>) -> Result<Vec<String>> {
    match t {
        ConstructionTree::Point => Ok(vec!["pt".to_string()]),
        ConstructionTree::HenselianBase { p } => {
            Err(Error::Unsupported(format!("henselian base (p = {p}) at {path} carries no computable module")))
        }
        ConstructionTree::Disjoint(cs) => {
            let mut out = Vec::new();
            for (i, c) in cs.iter().enumerate() {
                out.extend(labels_b(c, &path.child(i), oracles)?.into_iter().map(|l| format!("{i}:{l}")));
            }
            Ok(out)
        }
        ConstructionTree::FlagBundle { base, bundle, d_vec } => {
            let base_labels = labels_b(base, &path.child(0), oracles)?;
            let n = sod_count_usize(bundle.rank, d_vec)?;
            Ok(base_labels.iter().flat_map(|l| (0..n).map(move |k| format!("{l}|c{k}"))).collect())
        }
        ConstructionTree::StratifiedDescent { total_space, oracle_rank, .. } => {
            let total = labels_b(total_space, &path.child(0), oracles)?.len();
            let Some(r) = *oracle_rank else {
                return Err(Error::RankUndetermined { path: path.to_string() });
            };
            if r > total {
                return Err(Error::Hypothesis(format!(
                    "oracle rank {r} at {path} exceeds rank {total} of the total space"
                )));
            }
            oracles.push(path.clone());
            Ok((0..r).map(|k| format!("summand@{path}#{k}")).collect())
        }
        ConstructionTree::Blowup(sq) => {
            if !sq.split.is_split() {
                return Err(Error::Internal(format!("non-split blowup at {path} on the class B path")));
            }
            let (partner, others) = square_sides(sq.unknown);
            let mut plus = Vec::new();
            for c in others {
                let sub = sq.known.get(&c).expect("validated square");
                let ls = labels_b(sub, &corner_path(sq, path, c), oracles)?;
                plus.extend(ls.into_iter().map(|l| format!("{c}:{l}")));
            }
            let minus =
                labels_b(sq.known.get(&partner).expect("validated square"), &corner_path(sq, path, partner), oracles)?
                    .len();
            if minus > plus.len() {
                return Err(Error::InconsistentSplit {
                    path: path.to_string(),
                    detail: format!("{} corner would have rank {} - {minus} < 0", sq.unknown, plus.len()),
                });
            }
            // The summand matching the partner corner splits off via the declared splitting.
            Ok(plus.into_iter().skip(minus).map(|l| format!("{}[{}]{l}", sq.unknown, sq.split.keyword())).collect())
        }
    }
}

/// Degree-0 value of a tree as a free `R(G)`-module.
///
/// Class B trees are evaluated by semiorthogonal counting. Class C trees are
/// accepted only for the trivial group, through the degreewise solver; their
/// basis labels are placeholders and no ring presentation is attached.
pub fn compute_degree0(tree: &ConstructionTree, group: &GroupDatum) -> Result<Degree0Module> {
    validate(tree, group).map_err(Error::Invalid)?;
    representation_ring(group)?;
    let class = classify(tree);
    match class.tag {
        ClassTag::B => {
            let mut oracles = Vec::new();
            let labels = labels_b(tree, &NodePath::root(), &mut oracles)?;
            let ring_presentation = ring_degree0(tree, group).ok();
            if let Some(p) = &ring_presentation {
                if p.rank() != labels.len() {
                    return Err(Error::Internal(format!(
                        "ring presentation of rank {} disagrees with module rank {}",
                        p.rank(),
                        labels.len()
                    )));
                }
            }
            Ok(Degree0Module { rank: labels.len(), basis_labels: labels, ring_presentation, assumed_oracles: oracles })
        }
        ClassTag::C => {
            if !group.is_trivial() {
                return Err(Error::Unsupported("degree-0 values of class C trees need the trivial group".into()));
            }
            let g = evaluate_degreewise(tree, &builtin_table("unit")?, 0)?;
            if !g.is_free() {
                return Err(Error::Internal(format!("degree-0 value {g} is not free")));
            }
            Ok(Degree0Module {
                rank: g.free_rank(),
                basis_labels: (0..g.free_rank()).map(|k| format!("h0#{k}")).collect(),
                ring_presentation: None,
                assumed_oracles: class.assumed_oracles,
            })
        }
        ClassTag::Cp(p) => Err(Error::Unsupported(format!("henselian bases (p = {p}) carry no computable module"))),
        ClassTag::Invalid(why) => Err(Error::Hypothesis(why)),
    }
}
