//! Groups with decomposable representation theory and their representation
//! rings.
//!
//! A diagonalizable group `D(M)` is described by its character lattice
//! `M = Z^r × Z/ℓ_1 × … × Z/ℓ_s`; its representation ring is the group algebra
//! `Z[M]`. Linearly reductive groups that are not diagonalizable are only
//! carried as an opaque label: they index a decomposition of `Perf(BG)` but
//! have no ring arithmetic here.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupDatum {
    /// `G_m^free_rank × μ_{ℓ_1} × … × μ_{ℓ_s}`.
    Diagonalizable { free_rank: usize, finite_orders: Vec<i64> },
    /// A linearly reductive group known only by name.
    Opaque { name: String },
}

impl GroupDatum {
    pub fn new(free_rank: usize, finite_orders: Vec<i64>) -> Result<Self> {
        if let Some(bad) = finite_orders.iter().find(|&&l| l < 2) {
            return Err(Error::Range(format!("finite factor order {bad} must be at least 2")));
        }
        Ok(GroupDatum::Diagonalizable { free_rank, finite_orders })
    }

    pub fn trivial() -> Self {
        GroupDatum::Diagonalizable { free_rank: 0, finite_orders: Vec::new() }
    }

    pub fn torus(rank: usize) -> Self {
        GroupDatum::Diagonalizable { free_rank: rank, finite_orders: Vec::new() }
    }

    pub fn opaque(name: impl Into<String>) -> Self {
        GroupDatum::Opaque { name: name.into() }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, GroupDatum::Diagonalizable { free_rank: 0, finite_orders } if finite_orders.is_empty())
    }

    pub fn is_diagonalizable(&self) -> bool {
        matches!(self, GroupDatum::Diagonalizable { .. })
    }

    pub fn free_rank(&self) -> usize {
        match self {
            GroupDatum::Diagonalizable { free_rank, .. } => *free_rank,
            GroupDatum::Opaque { .. } => 0,
        }
    }

    pub fn finite_orders(&self) -> &[i64] {
        match self {
            GroupDatum::Diagonalizable { finite_orders, .. } => finite_orders,
            GroupDatum::Opaque { .. } => &[],
        }
    }

    /// Number of coordinates of a character-lattice element.
    pub fn lattice_dim(&self) -> usize {
        self.free_rank() + self.finite_orders().len()
    }

    fn moduli(&self) -> Vec<i64> {
        let mut m = vec![0; self.free_rank()];
        m.extend_from_slice(self.finite_orders());
        m
    }

    fn require_diagonalizable(&self) -> Result<()> {
        match self {
            GroupDatum::Diagonalizable { .. } => Ok(()),
            GroupDatum::Opaque { name } => {
                Err(Error::Unsupported(format!("group `{name}` has no computable representation ring")))
            }
        }
    }

    /// The character with the given coordinates, torsion coordinates reduced.
    pub fn character(&self, coords: &[i64]) -> Result<Character> {
        self.require_diagonalizable()?;
        if coords.len() != self.lattice_dim() {
            return Err(Error::Range(format!(
                "character has {} coordinates, lattice has {}",
                coords.len(),
                self.lattice_dim()
            )));
        }
        Ok(Character::reduced(coords.to_vec(), self.moduli()))
    }

    pub fn identity_character(&self) -> Result<Character> {
        self.character(&vec![0; self.lattice_dim()])
    }

    /// The `k`-th standard basis character.
    pub fn basis_character(&self, k: usize) -> Result<Character> {
        let mut coords = vec![0; self.lattice_dim()];
        let slot = coords.get_mut(k).ok_or_else(|| Error::Range(format!("basis character {k} out of range")))?;
        *slot = 1;
        self.character(&coords)
    }

    /// Whether `ch` lives in this group's character lattice in canonical form.
    pub fn owns(&self, ch: &Character) -> bool {
        self.is_diagonalizable()
            && ch.moduli == self.moduli()
            && ch.coords.iter().zip(&ch.moduli).all(|(&c, &m)| m == 0 || (0..m).contains(&c))
    }
}

/// An element of the character lattice `M`.
///
/// Each coordinate carries its modulus (`0` for a free coordinate), so two
/// characters can be added without consulting the group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    coords: Vec<i64>,
    moduli: Vec<i64>,
}

impl Character {
    fn reduced(mut coords: Vec<i64>, moduli: Vec<i64>) -> Self {
        for (c, &m) in coords.iter_mut().zip(&moduli) {
            if m > 0 {
                *c = c.rem_euclid(m);
            }
        }
        Character { coords, moduli }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Character) -> Character {
        assert_eq!(self.moduli, other.moduli, "characters of different groups");
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Character::reduced(coords, self.moduli.clone())
    }

    pub fn negate(&self) -> Character {
        Character::reduced(self.coords.iter().map(|c| -c).collect(), self.moduli.clone())
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free = self.moduli.iter().filter(|&&m| m == 0).count();
        let mut parts = Vec::new();
        for (k, (&c, &m)) in self.coords.iter().zip(&self.moduli).enumerate() {
            if c == 0 {
                continue;
            }
            let var = if m == 0 { format!("t{}", k + 1) } else { format!("s{}", k + 1 - free) };
            parts.push(if c == 1 { var } else { format!("{var}^{c}") });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// An element of the group algebra `Z[M]`, i.e. a virtual representation.
///
/// Zero coefficients are never stored, so structural equality is ring equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepRingElement<C: Coeff> {
    terms: BTreeMap<Character, C>,
}

impl<C: Coeff> Default for RepRingElement<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> RepRingElement<C> {
    pub fn zero() -> Self {
        RepRingElement { terms: BTreeMap::new() }
    }

    pub fn monomial(ch: Character, coeff: C) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(ch, coeff);
        }
        RepRingElement { terms }
    }

    /// The class `[L]` of a one-dimensional representation.
    pub fn character_class(ch: Character) -> Self {
        Self::monomial(ch, C::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Character, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, ch: &Character) -> C {
        self.terms.get(ch).cloned().unwrap_or_else(C::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, ch: Character, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(ch) {
            Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero();
        for (ch, c) in &self.terms {
            out.add_term(ch.clone(), c.clone() * k.clone());
        }
        out
    }

    /// Rank of the underlying non-equivariant class: every character maps to 1.
    pub fn augment(&self) -> C {
        self.terms.values().fold(C::zero(), |acc, c| acc + c.clone())
    }

    /// Convert coefficients into another exact type.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> RepRingElement<D> {
        let mut out = RepRingElement::zero();
        for (ch, c) in &self.terms {
            out.add_term(ch.clone(), f(c));
        }
        out
    }
}

impl<C: Coeff> fmt::Display for RepRingElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (ch, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match (abs.is_one(), ch.is_identity()) {
                (_, true) => write!(f, "{abs}")?,
                (true, false) => write!(f, "{ch}")?,
                (false, false) => write!(f, "{abs}*{ch}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff> Add for &RepRingElement<C> {
    type Output = RepRingElement<C>;
    fn add(self, rhs: Self) -> RepRingElement<C> {
        let mut out = self.clone();
        for (ch, c) in &rhs.terms {
            out.add_term(ch.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Add for RepRingElement<C> {
    type Output = RepRingElement<C>;
    fn add(self, rhs: Self) -> RepRingElement<C> {
        &self + &rhs
    }
}

impl<C: Coeff> AddAssign<&RepRingElement<C>> for RepRingElement<C> {
    fn add_assign(&mut self, rhs: &RepRingElement<C>) {
        for (ch, c) in &rhs.terms {
            self.add_term(ch.clone(), c.clone());
        }
    }
}

impl<C: Coeff> Neg for &RepRingElement<C> {
    type Output = RepRingElement<C>;
    fn neg(self) -> RepRingElement<C> {
        self.scale(&-C::one())
    }
}

impl<C: Coeff> Neg for RepRingElement<C> {
    type Output = RepRingElement<C>;
    fn neg(self) -> RepRingElement<C> {
        -&self
    }
}

impl<C: Coeff> Sub for &RepRingElement<C> {
    type Output = RepRingElement<C>;
    fn sub(self, rhs: Self) -> RepRingElement<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Sub for RepRingElement<C> {
    type Output = RepRingElement<C>;
    fn sub(self, rhs: Self) -> RepRingElement<C> {
        &self - &rhs
    }
}

/// Convolution product.
impl<C: Coeff> Mul for &RepRingElement<C> {
    type Output = RepRingElement<C>;
    fn mul(self, rhs: Self) -> RepRingElement<C> {
        let mut out = RepRingElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.add(b), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Mul for RepRingElement<C> {
    type Output = RepRingElement<C>;
    fn mul(self, rhs: Self) -> RepRingElement<C> {
        &self * &rhs
    }
}

/// Handle on `R(G) = Z[M]`: a rank-one free module over itself together with
/// element constructors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationRing {
    group: GroupDatum,
}

/// `Z[M]` for the given group; fails for groups without a character lattice.
pub fn representation_ring(group: &GroupDatum) -> Result<RepresentationRing> {
    group.require_diagonalizable()?;
    Ok(RepresentationRing { group: group.clone() })
}

impl RepresentationRing {
    pub fn group(&self) -> &GroupDatum {
        &self.group
    }

    /// Rank of `R(G)` as a module over itself.
    pub fn rank_over_self(&self) -> usize {
        1
    }

    pub fn zero<C: Coeff>(&self) -> RepRingElement<C> {
        RepRingElement::zero()
    }

    pub fn one<C: Coeff>(&self) -> RepRingElement<C> {
        self.constant(C::one())
    }

    pub fn constant<C: Coeff>(&self, c: C) -> RepRingElement<C> {
        let id = self.group.identity_character().expect("diagonalizable group");
        RepRingElement::monomial(id, c)
    }

    /// Class of the character with the given coordinates.
    pub fn class_of<C: Coeff>(&self, coords: &[i64]) -> Result<RepRingElement<C>> {
        Ok(RepRingElement::character_class(self.group.character(coords)?))
    }

    /// The `k`-th ring generator (`t_k` for free, `s_j` for torsion coordinates).
    pub fn generator<C: Coeff>(&self, k: usize) -> Result<RepRingElement<C>> {
        Ok(RepRingElement::character_class(self.group.basis_character(k)?))
    }

    /// All characters, when `M` is finite.
    pub fn finite_basis(&self) -> Option<Vec<Character>> {
        if self.group.free_rank() > 0 {
            return None;
        }
        let orders = self.group.finite_orders();
        let mut out = vec![Vec::new()];
        for &l in orders {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (0..l).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        Some(out.into_iter().map(|c| self.group.character(&c).expect("in range")).collect())
    }

    /// Human-readable presentation, e.g. `Z[t1^±1]` or `Z[s1]/(s1^3 - 1)`.
    pub fn describe(&self) -> String {
        let free = self.group.free_rank();
        let orders = self.group.finite_orders();
        if free == 0 && orders.is_empty() {
            return "Z".to_string();
        }
        let mut vars: Vec<String> = (1..=free).map(|k| format!("t{k}^±1")).collect();
        vars.extend((1..=orders.len()).map(|k| format!("s{k}")));
        let mut out = format!("Z[{}]", vars.join(", "));
        if !orders.is_empty() {
            let rels: Vec<String> = orders.iter().enumerate().map(|(k, l)| format!("s{}^{} - 1", k + 1, l)).collect();
            out.push_str(&format!("/({})", rels.join(", ")));
        }
        out
    }

    /// `e_i` of the classes `[L_j]`, the class of `Λ^i(⊕ L_j)`.
    pub fn elementary_symmetric<C: Coeff>(&self, chars: &[Character], i: usize) -> Result<RepRingElement<C>> {
        if i > chars.len() {
            return Err(Error::Range(format!("elementary symmetric index {i} exceeds {} characters", chars.len())));
        }
        if let Some(bad) = chars.iter().find(|ch| !self.group.owns(ch)) {
            return Err(Error::Range(format!("character {bad} is not in the group's lattice")));
        }
        // e[k] after processing a prefix of the characters.
        let mut e: Vec<RepRingElement<C>> = vec![self.one()];
        e.resize(i + 1, RepRingElement::zero());
        for ch in chars {
            let cls = RepRingElement::character_class(ch.clone());
            for k in (1..=i).rev() {
                let step = &e[k - 1] * &cls;
                e[k] += &step;
            }
        }
        Ok(e.swap_remove(i))
    }
}

/// Free-function form of [`RepresentationRing::elementary_symmetric`].
pub fn elementary_symmetric_class<C: Coeff>(
    group: &GroupDatum,
    chars: &[Character],
    i: usize,
) -> Result<RepRingElement<C>> {
    representation_ring(group)?.elementary_symmetric(chars, i)
}

pub fn augment<C: Coeff>(e: &RepRingElement<C>) -> C {
    e.augment()
}
