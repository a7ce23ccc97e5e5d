use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::Matrix;
use crate::Int;

/// An equivariant vector bundle, reduced to the data the engine consumes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BundleDatum {
    pub rank: usize,
    /// Character coordinates of the line summands, when the bundle is split.
    pub split_characters: Option<Vec<Vec<i64>>>,
    /// `O(i)` twists of the summands on a built-in base.
    pub twist_labels: Option<Vec<i64>>,
}

impl BundleDatum {
    pub fn plain(rank: usize) -> Self {
        BundleDatum { rank, split_characters: None, twist_labels: None }
    }

    pub fn split(chars: Vec<Vec<i64>>) -> Self {
        BundleDatum { rank: chars.len(), split_characters: Some(chars), twist_labels: None }
    }

    pub fn twisted(twists: Vec<i64>) -> Self {
        BundleDatum { rank: twists.len(), split_characters: None, twist_labels: Some(twists) }
    }
}

/// A sheaf `F = coker(E_1 → E_0)` with its generic rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SheafDatum {
    pub generic_rank: usize,
    /// `(rank E_1, rank E_0)`.
    pub presentation_ranks: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Corner {
    /// base
    X,
    /// cover
    Y,
    /// center
    Z,
    /// exceptional locus
    E,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::X, Corner::Y, Corner::Z, Corner::E];

    pub fn label(self) -> &'static str {
        match self {
            Corner::X => "X",
            Corner::Y => "Y",
            Corner::Z => "Z",
            Corner::E => "E",
        }
    }

    pub fn from_label(s: &str) -> Option<Corner> {
        Corner::ALL.into_iter().find(|c| c.label() == s)
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    None,
    /// `E → Y` admits a retraction.
    Retraction,
    /// `Y → X` admits a section.
    Section,
}

impl Split {
    pub fn keyword(self) -> &'static str {
        match self {
            Split::None => "none",
            Split::Retraction => "retraction",
            Split::Section => "section",
        }
    }

    pub fn is_split(self) -> bool {
        self != Split::None
    }
}

/// An abstract blowup square with three known corners; the node's value is
/// the fourth.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlowupSquare {
    pub known: BTreeMap<Corner, ConstructionTree>,
    pub unknown: Corner,
    pub split: Split,
    /// Per-degree matrices of `E_i(Y) ⊕ E_i(Z) → E_i(E)` (rows index the
    /// target basis, columns the source basis, `Y` before `Z`).
    pub comparison_maps: BTreeMap<i64, Matrix<Int>>,
}

impl BlowupSquare {
    /// Square with unknown `X` and the given other corners.
    pub fn resolving(y: ConstructionTree, z: ConstructionTree, e: ConstructionTree, split: Split) -> Self {
        BlowupSquare {
            known: BTreeMap::from([(Corner::Y, y), (Corner::Z, z), (Corner::E, e)]),
            unknown: Corner::X,
            split,
            comparison_maps: BTreeMap::new(),
        }
    }

    pub fn corner(&self, c: Corner) -> Option<&ConstructionTree> {
        self.known.get(&c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstructionTree {
    Point,
    /// `Spec R / G` for a strictly henselian base of residue characteristic `p`.
    HenselianBase {
        p: u64,
    },
    Disjoint(Vec<ConstructionTree>),
    /// `Flag_base(E, d_vec)`.
    FlagBundle {
        base: Box<ConstructionTree>,
        bundle: BundleDatum,
        d_vec: Vec<usize>,
    },
    /// The base `X` of `Flag_X(F, d_vec)`, given that flag variety as `total_space`.
    StratifiedDescent {
        total_space: Box<ConstructionTree>,
        sheaf: SheafDatum,
        d_vec: Vec<usize>,
        oracle_rank: Option<usize>,
    },
    Blowup(BlowupSquare),
}

impl ConstructionTree {
    pub fn flag_bundle(base: ConstructionTree, bundle: BundleDatum, d_vec: Vec<usize>) -> Self {
        ConstructionTree::FlagBundle { base: Box::new(base), bundle, d_vec }
    }

    pub fn descent(total: ConstructionTree, sheaf: SheafDatum, d_vec: Vec<usize>, oracle_rank: Option<usize>) -> Self {
        ConstructionTree::StratifiedDescent { total_space: Box::new(total), sheaf, d_vec, oracle_rank }
    }

    /// Children in path order.
    pub fn children(&self) -> Vec<&ConstructionTree> {
        match self {
            ConstructionTree::Point | ConstructionTree::HenselianBase { .. } => vec![],
            ConstructionTree::Disjoint(cs) => cs.iter().collect(),
            ConstructionTree::FlagBundle { base, .. } => vec![base],
            ConstructionTree::StratifiedDescent { total_space, .. } => vec![total_space],
            ConstructionTree::Blowup(sq) => sq.known.values().collect(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConstructionTree::Point => "point",
            ConstructionTree::HenselianBase { .. } => "henselian",
            ConstructionTree::Disjoint(_) => "disjoint",
            ConstructionTree::FlagBundle { .. } => "flag_bundle",
            ConstructionTree::StratifiedDescent { .. } => "descent",
            ConstructionTree::Blowup(_) => "blowup",
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Pre-order traversal with node paths.
    pub fn walk(&self) -> Vec<(NodePath, &ConstructionTree)> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a ConstructionTree, path: NodePath, out: &mut Vec<(NodePath, &'a ConstructionTree)>) {
            out.push((path.clone(), t));
            for (i, c) in t.children().into_iter().enumerate() {
                go(c, path.child(i), out);
            }
        }
        go(self, NodePath::root(), &mut out);
        out
    }

    /// The same tree with all character data dropped, for non-equivariant
    /// evaluation.
    pub fn forget_equivariance(&self) -> ConstructionTree {
        match self {
            ConstructionTree::Point | ConstructionTree::HenselianBase { .. } => self.clone(),
            ConstructionTree::Disjoint(cs) => {
                ConstructionTree::Disjoint(cs.iter().map(|c| c.forget_equivariance()).collect())
            }
            ConstructionTree::FlagBundle { base, bundle, d_vec } => ConstructionTree::FlagBundle {
                base: Box::new(base.forget_equivariance()),
                bundle: BundleDatum { split_characters: None, ..bundle.clone() },
                d_vec: d_vec.clone(),
            },
            ConstructionTree::StratifiedDescent { total_space, sheaf, d_vec, oracle_rank } => {
                ConstructionTree::StratifiedDescent {
                    total_space: Box::new(total_space.forget_equivariance()),
                    sheaf: sheaf.clone(),
                    d_vec: d_vec.clone(),
                    oracle_rank: *oracle_rank,
                }
            }
            ConstructionTree::Blowup(sq) => ConstructionTree::Blowup(BlowupSquare {
                known: sq.known.iter().map(|(c, t)| (*c, t.forget_equivariance())).collect(),
                ..sq.clone()
            }),
        }
    }

    pub fn blowups(&self) -> impl Iterator<Item = (NodePath, &BlowupSquare)> {
        self.walk().into_iter().filter_map(|(p, t)| match t {
            ConstructionTree::Blowup(sq) => Some((p, sq)),
            _ => None,
        })
    }
}

/// Slash-separated child indices from the root, e.g. `/0/2`; the root is `/`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}
