use std::fmt;

use crate::dsl::tree::{ConstructionTree, Corner, NodePath};
use crate::group_rep::GroupDatum;

/// One failed structural rule, addressed by node path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub path: NodePath,
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.path, self.rule, self.detail)
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

/// Check every structural invariant of `tree` against `group`. Never stops at
/// the first failure.
pub fn validate(tree: &ConstructionTree, group: &GroupDatum) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    for (path, node) in tree.walk() {
        let mut flag = |rule: &'static str, detail: String| out.push(Violation { path: path.clone(), rule, detail });
        match node {
            ConstructionTree::Point | ConstructionTree::Disjoint(_) => {}
            ConstructionTree::HenselianBase { p } => {
                if !is_prime(*p) {
                    flag("henselian base needs a prime", format!("{p} is not prime"));
                }
            }
            ConstructionTree::FlagBundle { bundle, d_vec, .. } => {
                if bundle.rank == 0 {
                    flag("bundle rank must be positive", "rank 0".into());
                }
                check_d_vec(d_vec, &mut flag);
                let d: usize = d_vec.iter().sum();
                if d > bundle.rank {
                    flag("d exceeds rank", format!("total dimension {d} > bundle rank {}", bundle.rank));
                }
                if let Some(chars) = &bundle.split_characters {
                    if chars.len() != bundle.rank {
                        flag(
                            "split characters must match rank",
                            format!("{} characters for rank {}", chars.len(), bundle.rank),
                        );
                    }
                    if !group.is_diagonalizable() {
                        flag("characters need a diagonalizable group", "group has no character lattice".into());
                    } else if let Some(bad) = chars.iter().find(|c| c.len() != group.lattice_dim()) {
                        flag(
                            "character outside the lattice",
                            format!("{bad:?} has {} coordinates, lattice has {}", bad.len(), group.lattice_dim()),
                        );
                    }
                }
                if let Some(tw) = &bundle.twist_labels {
                    if tw.len() != bundle.rank {
                        flag("twist labels must match rank", format!("{} twists for rank {}", tw.len(), bundle.rank));
                    }
                }
            }
            ConstructionTree::StratifiedDescent { sheaf, d_vec, .. } => {
                check_d_vec(d_vec, &mut flag);
                let d: usize = d_vec.iter().sum();
                if d > sheaf.generic_rank {
                    flag("d exceeds generic rank", format!("total dimension {d} > sheaf rank {}", sheaf.generic_rank));
                }
                if sheaf.generic_rank > sheaf.presentation_ranks.1 {
                    flag(
                        "generic rank exceeds presentation",
                        format!("generic rank {} > rank of E_0 {}", sheaf.generic_rank, sheaf.presentation_ranks.1),
                    );
                }
            }
            ConstructionTree::Blowup(sq) => {
                if sq.known.len() != 3 || sq.known.contains_key(&sq.unknown) {
                    let labels: Vec<&str> = sq.known.keys().map(|c| c.label()).collect();
                    flag(
                        "blowup needs exactly one unknown corner",
                        format!("known corners {labels:?}, unknown {}", sq.unknown),
                    );
                }
                if !sq.comparison_maps.is_empty() && sq.unknown != Corner::X {
                    flag("comparison maps require unknown corner X", format!("unknown corner is {}", sq.unknown));
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn check_d_vec(d_vec: &[usize], flag: &mut impl FnMut(&'static str, String)) {
    if d_vec.is_empty() {
        flag("dimension vector is empty", "need at least one part".into());
    }
    if d_vec.contains(&0) {
        flag("dimension vector parts must be positive", format!("{d_vec:?}"));
    }
}
