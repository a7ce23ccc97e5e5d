//! Comparison verdicts backed by the vanishing and degreewise theorems.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{builtin_table, FgAbGroup};
use crate::dsl::{classify, validate, ClassTag, ConstructionTree, MembershipClass, NotInBEvidence};
use crate::engine::graded::{compute_graded, evaluate_degreewise, GradedModuleValue, Shape};
use crate::error::{Error, Result};
use crate::group_rep::GroupDatum;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    EquivalenceAllDegrees,
    IsoInDegree(i64),
    /// `K_i = KH_i ⊕ HC⁻_i`.
    SplitDecomposition(i64),
    /// Zero in every degree except those listed.
    Vanishing {
        except: Vec<i64>,
    },
    NotInB(NotInBEvidence),
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictKind::EquivalenceAllDegrees => write!(f, "EquivalenceAllDegrees"),
            VerdictKind::IsoInDegree(i) => write!(f, "IsoInDegree({i})"),
            VerdictKind::SplitDecomposition(i) => write!(f, "SplitDecomposition({i})"),
            VerdictKind::Vanishing { except } => {
                let ds: Vec<String> = except.iter().map(|d| d.to_string()).collect();
                write!(f, "Vanishing(i ∉ {{{}}})", ds.join(", "))
            }
            VerdictKind::NotInB(e) => write!(f, "NotInB(degree {}, {})", e.degree, e.group),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Every fact consumed, in the order used.
    pub hypotheses: Vec<String>,
    pub conclusion_text: String,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.conclusion_text)
    }
}

/// A verdict, or the hypothesis that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Verdict(Verdict),
    NoVerdict { failed: String },
}

impl Comparison {
    pub fn verdict(&self) -> Option<&Verdict> {
        match self {
            Comparison::Verdict(v) => Some(v),
            Comparison::NoVerdict { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elsewhere {
    Zero,
    Unknown,
}

/// Homotopy groups of the fiber of a map of truncating invariants on `BG`:
/// the listed degrees, and a default for the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberProfile {
    pub known: BTreeMap<i64, FgAbGroup>,
    pub elsewhere: Elsewhere,
}

impl FiberProfile {
    pub fn zero() -> Self {
        FiberProfile { known: BTreeMap::new(), elsewhere: Elsewhere::Zero }
    }

    pub fn vanishing_in(degrees: &[i64]) -> Self {
        FiberProfile { known: degrees.iter().map(|&d| (d, FgAbGroup::zero())).collect(), elsewhere: Elsewhere::Unknown }
    }

    pub fn vanishes_at(&self, d: i64) -> bool {
        match self.known.get(&d) {
            Some(g) => g.is_zero(),
            None => self.elsewhere == Elsewhere::Zero,
        }
    }

    pub fn vanishes_everywhere(&self) -> bool {
        self.elsewhere == Elsewhere::Zero && self.known.values().all(FgAbGroup::is_zero)
    }
}

fn comparison(fiber: &FiberProfile, class: &MembershipClass, target: Option<i64>, allow_cp: bool) -> Comparison {
    let tag = &class.tag;
    let oracle_note = |hyps: &mut Vec<String>| {
        for p in &class.assumed_oracles {
            hyps.push(format!("assumed rank oracle at {p}"));
        }
    };
    if let ClassTag::Invalid(why) = tag {
        return Comparison::NoVerdict { failed: format!("tree has no valid class: {why}") };
    }
    if fiber.vanishes_everywhere() {
        let accepted = tag.at_least(&ClassTag::C) || (allow_cp && matches!(tag, ClassTag::Cp(_)));
        if accepted {
            let mut hypotheses = vec![format!("class {tag}"), "fiber vanishes on BG in all degrees".to_string()];
            oracle_note(&mut hypotheses);
            return Comparison::Verdict(Verdict {
                kind: VerdictKind::EquivalenceAllDegrees,
                hypotheses,
                conclusion_text: "the fiber vanishes on X/G, so the map is an equivalence".into(),
            });
        }
        if target.is_none() {
            return Comparison::NoVerdict { failed: format!("class {tag} is weaker than C") };
        }
    }
    let Some(i) = target else {
        return Comparison::NoVerdict {
            failed: "fiber does not vanish in all degrees and no target degree was given".into(),
        };
    };
    for d in [i, i - 1] {
        if !fiber.vanishes_at(d) {
            return Comparison::NoVerdict { failed: format!("fiber on BG is not known to vanish in degree {d}") };
        }
    }
    if *tag != ClassTag::B {
        return Comparison::NoVerdict { failed: format!("degreewise comparison needs class B, tree is class {tag}") };
    }
    let mut hypotheses = vec!["class B".to_string(), format!("fiber vanishes on BG in degrees {i} and {}", i - 1)];
    oracle_note(&mut hypotheses);
    Comparison::Verdict(Verdict {
        kind: VerdictKind::IsoInDegree(i),
        hypotheses,
        conclusion_text: format!(
            "the fiber vanishes on X/G in degrees {i} and {}, so the map is an isomorphism in degree {i}",
            i - 1
        ),
    })
}

/// Verdict for a map of truncating invariants whose fiber on `BG` is
/// `fiber`, on a tree of class `class`.
pub fn verify_comparison(fiber: &FiberProfile, class: &MembershipClass, target: Option<i64>) -> Comparison {
    comparison(fiber, class, target, false)
}

/// Named bundles of fiber-vanishing facts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// mod-p cyclotomic trace in characteristic `p`: `K^inf(BG; F_p) ≃ 0`.
    CyclotomicFp,
    /// Rational Goodwillie–Jones trace: `K^inf_0(BG; Q) = 0 = K^inf_{-1}(BG; Q)`.
    GoodwillieJonesQ,
    /// Rational `KH` over a finite field, concentrated in degree 0.
    ParshinFq,
    /// `KH → K_top` over `C`, an isomorphism on `BG` in degrees 0 and -1.
    KtopC,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::CyclotomicFp, Preset::GoodwillieJonesQ, Preset::ParshinFq, Preset::KtopC];

    pub fn name(self) -> &'static str {
        match self {
            Preset::CyclotomicFp => "cyclotomic_Fp",
            Preset::GoodwillieJonesQ => "goodwillie_jones_Q",
            Preset::ParshinFq => "parshin_Fq",
            Preset::KtopC => "ktop_C",
        }
    }

    pub fn from_name(name: &str) -> Result<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::Lookup { kind: "preset", name: name.to_string() })
    }

    /// Fiber profile and target degree; `None` for Parshin, which is a
    /// vanishing statement rather than a comparison.
    pub fn fiber(self) -> Option<(FiberProfile, Option<i64>)> {
        match self {
            Preset::CyclotomicFp => Some((FiberProfile::zero(), None)),
            Preset::GoodwillieJonesQ | Preset::KtopC => Some((FiberProfile::vanishing_in(&[0, -1]), Some(0))),
            Preset::ParshinFq => None,
        }
    }

    fn description(self) -> &'static str {
        match self {
            Preset::CyclotomicFp => "mod-p cyclotomic trace K(-; F_p) → TC(-; F_p)",
            Preset::GoodwillieJonesQ => "Goodwillie–Jones trace K(-; Q) → HC⁻(-/Q)",
            Preset::ParshinFq => "rational K-theory over F_q",
            Preset::KtopC => "KH → K_top over C",
        }
    }
}

/// Run a preset on a tree.
pub fn run_preset(preset: Preset, tree: &ConstructionTree, group: &GroupDatum) -> Result<Comparison> {
    validate(tree, group).map_err(Error::Invalid)?;
    let class = classify(tree);
    let Some((fiber, target)) = preset.fiber() else {
        return Ok(match parshin_check(tree, group) {
            Ok(v) => Comparison::Verdict(v),
            Err(Error::Hypothesis(failed)) => Comparison::NoVerdict { failed },
            Err(e) => return Err(e),
        });
    };
    let mut out = comparison(&fiber, &class, target, preset == Preset::CyclotomicFp);
    if let Comparison::Verdict(v) = &mut out {
        v.hypotheses.insert(0, format!("preset {}: {}", preset.name(), preset.description()));
    }
    Ok(out)
}

/// `K^G_i(X; Q) = 0` for `i ≠ 0` on a class B tree, by formality over
/// the table concentrated in degree 0.
pub fn parshin_check(tree: &ConstructionTree, group: &GroupDatum) -> Result<Verdict> {
    let class = classify(tree);
    if class.tag != ClassTag::B {
        return Err(Error::Hypothesis(format!("Parshin vanishing needs class B, tree is class {}", class.tag)));
    }
    let table = builtin_table("rational_deg0")?;
    let value = compute_graded(tree, group, &table, 0..=0)?;
    let Shape::Formal { d0, table } = &value.shape else {
        return Err(Error::Internal("class B value is not formal".into()));
    };
    if !table.vanishes_outside(&[0]) {
        return Err(Error::Internal("rational_deg0 table is not concentrated in degree 0".into()));
    }
    let mut hypotheses = vec![
        "class B".to_string(),
        format!("formality over table `{}`", table.name()),
        "coefficients concentrated in degree 0".to_string(),
    ];
    hypotheses.extend(value.assumed_oracles.iter().map(|p| format!("assumed rank oracle at {p}")));
    Ok(Verdict {
        kind: VerdictKind::Vanishing { except: vec![0] },
        hypotheses,
        conclusion_text: format!("vanishes in all degrees i ≠ 0; degree 0 is free of rank {} over Q ⊗ R(G)", d0.rank),
    })
}

/// `K_i = KH_i ⊕ HC⁻_i` for `i ≥ 1` on a class B tree. The returned verdict
/// records the splitting used.
pub fn decompose_positive_k(
    kh: &GradedModuleValue,
    hcminus: &GradedModuleValue,
    class: &MembershipClass,
    i: i64,
) -> Result<(FgAbGroup, Verdict)> {
    if class.tag != ClassTag::B {
        return Err(Error::Hypothesis(format!("positive-degree splitting needs class B, tree is class {}", class.tag)));
    }
    if i < 1 {
        return Err(Error::Hypothesis(format!("positive-degree splitting needs i ≥ 1, got {i}")));
    }
    let group = kh.value_at(i)?.direct_sum(&hcminus.value_at(i)?)?;
    let verdict = Verdict {
        kind: VerdictKind::SplitDecomposition(i),
        hypotheses: vec!["class B".into(), format!("cdh-local HC⁻ vanishes in degree {i}")],
        conclusion_text: format!("K_{i} = KH_{i} ⊕ HC⁻_{i} = {group}"),
    };
    Ok((group, verdict))
}

/// Evidence that a class C tree is not in `B`: a nonzero value in negative
/// degree over the table `Z` in degree 0. `None` when no evidence is found
/// or the sequences are underdetermined.
pub fn refute_membership_b(tree: &ConstructionTree) -> Result<Option<NotInBEvidence>> {
    let plain = tree.forget_equivariance();
    validate(&plain, &GroupDatum::trivial()).map_err(Error::Invalid)?;
    if classify(&plain).tag != ClassTag::C {
        return Ok(None);
    }
    let unit = builtin_table("unit")?;
    // Each non-split square moves support down by at most one degree.
    let depth = plain.blowups().filter(|(_, sq)| !sq.split.is_split()).count() as i64;
    for d in (-depth - 1..=-1).rev() {
        match evaluate_degreewise(&plain, &unit, d) {
            Ok(g) if !g.is_zero() => return Ok(Some(NotInBEvidence { degree: d, group: g })),
            Ok(_) => {}
            Err(Error::Underdetermined(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// [`classify`] with `b_refuted` filled in where the solver finds evidence.
pub fn classify_with_evidence(tree: &ConstructionTree) -> Result<MembershipClass> {
    let mut class = classify(tree);
    if class.tag == ClassTag::C {
        class.b_refuted = refute_membership_b(tree)?;
    }
    Ok(class)
}

/// [`VerdictKind::NotInB`] from evidence.
pub fn not_in_b_verdict(evidence: NotInBEvidence) -> Verdict {
    Verdict {
        hypotheses: vec![
            "trivial group".into(),
            "table `unit` (Z in degree 0)".into(),
            "formality would force vanishing below degree 0".into(),
        ],
        conclusion_text: format!("{evidence}, so the variety is not in class B"),
        kind: VerdictKind::NotInB(evidence),
    }
}
