use std::fmt;

use crate::coeff::FgAbGroup;
use crate::dsl::tree::{ConstructionTree, NodePath};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassTag {
    /// Built with split blowups only.
    B,
    /// Built with arbitrary blowups.
    C,
    /// Built over strictly henselian bases of residue characteristic `p`.
    Cp(u64),
    Invalid(String),
}

impl ClassTag {
    /// `B` is strongest; `B ⇒ C ⇒ C_p`.
    pub fn strength(&self) -> u8 {
        match self {
            ClassTag::B => 3,
            ClassTag::C => 2,
            ClassTag::Cp(_) => 1,
            ClassTag::Invalid(_) => 0,
        }
    }

    pub fn at_least(&self, other: &ClassTag) -> bool {
        self.strength() >= other.strength()
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::B => write!(f, "B"),
            ClassTag::C => write!(f, "C"),
            ClassTag::Cp(p) => write!(f, "C_{p}"),
            ClassTag::Invalid(why) => write!(f, "invalid ({why})"),
        }
    }
}

/// Evidence that a tree's value cannot lie in `B`: a nonzero group where
/// formality over the unit table forces zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NotInBEvidence {
    pub degree: i64,
    pub group: FgAbGroup,
}

impl fmt::Display for NotInBEvidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {} value {} (must vanish for class B)", self.degree, self.group)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MembershipClass {
    pub tag: ClassTag,
    /// Descent nodes whose rank oracle is taken on trust.
    pub assumed_oracles: Vec<NodePath>,
    pub b_refuted: Option<NotInBEvidence>,
}

/// Syntactic class of a (validated) tree. A `C` tag means membership in `B`
/// is not established by this tree, not that it fails.
pub fn classify(tree: &ConstructionTree) -> MembershipClass {
    let mut primes = Vec::new();
    let mut all_split = true;
    let mut assumed_oracles = Vec::new();
    for (path, node) in tree.walk() {
        match node {
            ConstructionTree::HenselianBase { p } => {
                if !primes.contains(p) {
                    primes.push(*p);
                }
            }
            ConstructionTree::Blowup(sq) => all_split &= sq.split.is_split(),
            ConstructionTree::StratifiedDescent { oracle_rank: Some(_), .. } => assumed_oracles.push(path),
            _ => {}
        }
    }
    let tag = match primes.as_slice() {
        [] if all_split => ClassTag::B,
        [] => ClassTag::C,
        [p] => ClassTag::Cp(*p),
        many => ClassTag::Invalid(format!("henselian bases over different primes {many:?}")),
    };
    MembershipClass { tag, assumed_oracles, b_refuted: None }
}
