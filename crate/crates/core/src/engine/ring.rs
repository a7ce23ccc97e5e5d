//! Ring presentations of degree-0 values on the split projective-bundle path.

use std::fmt;

use crate::coeff::{snf, Matrix};
use crate::dsl::ConstructionTree;
use crate::error::{Error, Result};
use crate::group_rep::{representation_ring, Character, GroupDatum, RepRingElement, RepresentationRing};
use crate::scalar::Coeff;
use crate::Int;

/// A univariate polynomial with coefficients in `R(G)`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<C: Coeff> {
    coeffs: Vec<RepRingElement<C>>,
}

impl<C: Coeff> UniPoly<C> {
    pub fn new(mut coeffs: Vec<RepRingElement<C>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// `∏_j (x - [L_j])`.
    pub fn from_roots(ring: &RepresentationRing, roots: &[Character]) -> Self {
        let mut p: Vec<RepRingElement<C>> = vec![ring.one()];
        for ch in roots {
            let root = RepRingElement::character_class(ch.clone());
            let mut next = vec![RepRingElement::zero(); p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                next[k + 1] += c;
                next[k] += &-(c * &root);
            }
            p = next;
        }
        UniPoly::new(p)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficient(&self, k: usize) -> RepRingElement<C> {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs
            .last()
            .is_some_and(|c| c.num_terms() == 1 && c.terms().all(|(ch, v)| ch.is_identity() && v.is_one()))
    }

    /// Integer polynomial obtained by sending every character to 1.
    pub fn augment(&self) -> Vec<C> {
        let mut out: Vec<C> = self.coeffs.iter().map(|c| c.augment()).collect();
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }
}

impl<C: Coeff> fmt::Display for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => "x".to_string(),
                    _ => format!("x^{k}"),
                };
                let cs = c.to_string();
                match (k, cs.as_str()) {
                    (0, _) => format!("({cs})"),
                    (_, "1") => mono,
                    _ => format!("({cs})*{mono}"),
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `R(G)[x_1, …, x_m] / (f_1(x_1), …, f_m(x_m))` with each `f_k` monic: one
/// generator per projectivization in a tower of split bundles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerPresentation {
    pub relations: Vec<UniPoly<Int>>,
}

impl TowerPresentation {
    /// Free rank over `R(G)`: the product of the relation degrees.
    pub fn rank(&self) -> usize {
        self.relations.iter().map(|r| r.degree().unwrap_or(0)).product()
    }
}

/// A finite product of tower presentations, one per connected piece.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingPresentation {
    pub base: String,
    pub factors: Vec<TowerPresentation>,
}

impl RingPresentation {
    pub fn rank(&self) -> usize {
        self.factors.iter().map(TowerPresentation::rank).sum()
    }

    /// Additive rank of the augmented ring `Z[x_1..x_m]/(f̄_1, …, f̄_m)`,
    /// computed by Smith normal form on the multiplication-by-relation
    /// matrices rather than from the degrees.
    pub fn augmented_rank(&self) -> Result<usize> {
        let mut total = 0;
        for factor in &self.factors {
            let mut prod = 1;
            for rel in &factor.relations {
                prod *= quotient_rank(&rel.augment())?;
            }
            total += prod;
        }
        Ok(total)
    }
}

/// Rank of `Z[x]/(f)`, reading the quotient of the span of `1, …, x^N`
/// by the multiples `x^j f` that stay inside it; must be free.
fn quotient_rank(f: &[Int]) -> Result<usize> {
    let Some(deg) = f.len().checked_sub(1) else {
        return Err(Error::Internal("zero relation".into()));
    };
    let top = deg + 2;
    let shifts: Vec<Vec<Int>> = (0..=top - deg)
        .map(|j| {
            let mut col = vec![Int::from(0); top + 1];
            for (k, c) in f.iter().enumerate() {
                col[j + k] = c.clone();
            }
            col
        })
        .collect();
    let m = Matrix::from_columns(&shifts, top + 1)?;
    let coker = snf::snf(&m).cokernel();
    if !coker.is_free() {
        return Err(Error::Internal(format!("augmented quotient has torsion: {coker}")));
    }
    Ok(coker.free_rank())
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("x{k}")).collect()
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|t| {
                if t.relations.is_empty() {
                    return self.base.clone();
                }
                let vars = names(t.relations.len());
                let rels: Vec<String> =
                    t.relations.iter().zip(&vars).map(|(r, v)| r.to_string().replace('x', v)).collect();
                format!("{}[{}]/({})", self.base, vars.join(", "), rels.join(", "))
            })
            .collect();
        write!(f, "{}", parts.join(" × "))
    }
}

/// Presentation of the degree-0 ring for trees built from points, disjoint
/// unions and projectivizations of split bundles. The generator of each
/// projectivization is the class of the tautological quotient line bundle,
/// subject to `∏_j (x - [L_j]) = 0`.
pub fn ring_degree0(tree: &ConstructionTree, group: &GroupDatum) -> Result<RingPresentation> {
    let ring = representation_ring(group)?;
    fn go(t: &ConstructionTree, group: &GroupDatum, ring: &RepresentationRing) -> Result<Vec<TowerPresentation>> {
        match t {
            ConstructionTree::Point => Ok(vec![TowerPresentation { relations: vec![] }]),
            ConstructionTree::Disjoint(cs) => {
                let mut out = Vec::new();
                for c in cs {
                    out.extend(go(c, group, ring)?);
                }
                Ok(out)
            }
            ConstructionTree::FlagBundle { base, bundle, d_vec } => {
                if d_vec.as_slice() != [1] {
                    return Err(Error::Unsupported(format!(
                        "ring presentation needs projectivizations, got dimension vector {d_vec:?}"
                    )));
                }
                let Some(chars) = &bundle.split_characters else {
                    return Err(Error::Unsupported("ring presentation needs split bundles".into()));
                };
                let roots = chars.iter().map(|c| group.character(c)).collect::<Result<Vec<_>>>()?;
                let rel = UniPoly::from_roots(ring, &roots);
                let mut out = go(base, group, ring)?;
                for f in &mut out {
                    f.relations.push(rel.clone());
                }
                Ok(out)
            }
            other => Err(Error::Unsupported(format!("ring presentation for `{}` nodes", other.kind()))),
        }
    }
    Ok(RingPresentation { base: ring.describe(), factors: go(tree, group, &ring)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::library::{hirzebruch, projective_space};
    use crate::dsl::ConstructionTree as T;

    #[test]
    fn point_is_base_ring() {
        let p = ring_degree0(&T::Point, &GroupDatum::trivial()).unwrap();
        assert_eq!(p.to_string(), "Z");
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn p1_over_two_torus() {
        let g = GroupDatum::torus(2);
        let p = ring_degree0(&projective_space(1, &g), &g).unwrap();
        assert_eq!(p.rank(), 2);
        let rel = &p.factors[0].relations[0];
        assert!(rel.is_monic());
        assert_eq!(rel.augment(), vec![Int::from(1), Int::from(-2), Int::from(1)]);
        assert_eq!(p.augmented_rank().unwrap(), 2);
        assert_eq!(p.to_string(), "Z[t1^±1, t2^±1][x1]/(x1^2 + (-t2 - t1)*x1 + (t1*t2))");
    }

    #[test]
    fn trivial_group_gives_unipotent_relation() {
        for n in 1..6 {
            let p = ring_degree0(&projective_space(n - 1, &GroupDatum::trivial()), &GroupDatum::trivial()).unwrap();
            // (x - 1)^n
            let aug = p.factors[0].relations[0].augment();
            let expect: Vec<Int> = (0..=n)
                .map(|k| crate::engine::sod::binomial(n, k) * Int::from(if (n - k) % 2 == 0 { 1 } else { -1 }))
                .collect();
            assert_eq!(aug, expect);
            assert_eq!(p.augmented_rank().unwrap(), n);
        }
    }

    #[test]
    fn twisted_bundles_are_rejected() {
        let g = GroupDatum::trivial();
        assert!(matches!(ring_degree0(&hirzebruch(1, &g), &g), Err(Error::Unsupported(_))));
    }
}
