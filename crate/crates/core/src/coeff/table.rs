//! Graded coefficient rings `E_•(pt)` as lookup tables.
//!
//! A table stores finitely many degrees and may declare that a named
//! generator makes it periodic in one or both directions. Lookups are total:
//! any degree outside the stored and periodic support is the zero group.
//!
//! Text format (one directive or record per line, `#` starts a comment):
//!
//! ```text
//! name kh_fixture
//! generator beta 2 invertible
//! periodic 2 both beta
//! 0 1
//! 3 0 tors=2,4
//! 5 1 Q
//! ```
//!
//! A record is `<degree> <free rank> [tors=<a>,<b>,...] [Q]`; `Q` marks the
//! degree as rational (torsion is then discarded). `periodic <p> <dir>
//! <symbol>` repeats the fundamental window `[d_min, d_min + p - 1]` in
//! direction `both`, `down` or `up`, where `d_min` is the least stored degree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::coeff::FgAbGroup;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extent {
    Both,
    Down,
    Up,
}

impl Extent {
    pub fn keyword(self) -> &'static str {
        match self {
            Extent::Both => "both",
            Extent::Down => "down",
            Extent::Up => "up",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Periodicity {
    pub period: i64,
    pub extent: Extent,
    /// Symbol of the generator whose multiplication realizes the shift.
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub symbol: String,
    pub degree: i64,
    pub invertible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// Nonzero only inside `[lo, hi]`.
    Bounded { lo: i64, hi: i64 },
    /// Possibly nonzero arbitrarily far down and/or up.
    Unbounded { below: bool, above: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientTable {
    name: String,
    degree_groups: BTreeMap<i64, FgAbGroup>,
    periodicity: Option<Periodicity>,
    generators: Vec<Generator>,
}

impl CoefficientTable {
    pub fn new(
        name: impl Into<String>,
        degree_groups: BTreeMap<i64, FgAbGroup>,
        periodicity: Option<Periodicity>,
        generators: Vec<Generator>,
    ) -> Result<Self> {
        let table = CoefficientTable { name: name.into(), degree_groups, periodicity, generators };
        table.check()?;
        Ok(table)
    }

    fn check(&self) -> Result<()> {
        let bad = |message: String| Err(Error::TableFormat { line: 0, message });
        match self.degree_groups.get(&0) {
            Some(g) if g.free_rank() >= 1 => {}
            _ => return bad(format!("table `{}`: degree 0 needs free rank ≥ 1", self.name)),
        }
        if let Some(p) = &self.periodicity {
            if p.period < 1 {
                return bad(format!("period {} must be positive", p.period));
            }
            let lo = *self.degree_groups.keys().next().expect("degree 0 present");
            if let Some(&d) = self.degree_groups.keys().find(|&&d| d >= lo + p.period) {
                return bad(format!("degree {d} lies outside the periodic window starting at {lo}"));
            }
            let Some(generator) = self.generators.iter().find(|g| g.symbol == p.witness) else {
                return bad(format!("periodicity witness `{}` is not a declared generator", p.witness));
            };
            let expected = match (generator.invertible, generator.degree.signum()) {
                (true, _) => Extent::Both,
                (false, -1) => Extent::Down,
                (false, 1) => Extent::Up,
                _ => return bad(format!("generator `{}` of degree 0 cannot shift degrees", generator.symbol)),
            };
            if generator.degree.abs() != p.period || expected != p.extent {
                return bad(format!(
                    "periodicity ({} {}) does not match generator `{}` of degree {}",
                    p.period,
                    p.extent.keyword(),
                    generator.symbol,
                    generator.degree
                ));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn periodicity(&self) -> Option<&Periodicity> {
        self.periodicity.as_ref()
    }

    pub fn stored(&self) -> &BTreeMap<i64, FgAbGroup> {
        &self.degree_groups
    }

    /// `E_i(pt)`; total in `i`.
    pub fn at(&self, degree: i64) -> FgAbGroup {
        let stored = |d: i64| self.degree_groups.get(&d).cloned().unwrap_or_else(FgAbGroup::zero);
        let Some(p) = &self.periodicity else { return stored(degree) };
        let lo = *self.degree_groups.keys().next().expect("degree 0 present");
        let hi = lo + p.period - 1;
        let folded = lo + (degree - lo).rem_euclid(p.period);
        match (degree < lo, degree > hi, p.extent) {
            (false, false, _) => stored(degree),
            (true, _, Extent::Both | Extent::Down) | (_, true, Extent::Both | Extent::Up) => stored(folded),
            _ => FgAbGroup::zero(),
        }
    }

    pub fn support(&self) -> Support {
        let nonzero: Vec<i64> = self.degree_groups.iter().filter(|(_, g)| !g.is_zero()).map(|(&d, _)| d).collect();
        match &self.periodicity {
            None => Support::Bounded { lo: nonzero[0], hi: *nonzero.last().expect("degree 0 nonzero") },
            Some(p) => match p.extent {
                Extent::Both => Support::Unbounded { below: true, above: true },
                Extent::Down => Support::Unbounded { below: true, above: false },
                Extent::Up => Support::Unbounded { below: false, above: true },
            },
        }
    }

    /// Whether every degree in `degrees` is provably zero.
    pub fn vanishes_outside(&self, keep: &[i64]) -> bool {
        match self.support() {
            Support::Bounded { .. } => self.degree_groups.iter().all(|(d, g)| g.is_zero() || keep.contains(d)),
            Support::Unbounded { .. } => false,
        }
    }

    /// Render in the text format accepted by [`parse_table`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name {}", self.name)?;
        for g in &self.generators {
            write!(f, "generator {} {}", g.symbol, g.degree)?;
            if g.invertible {
                write!(f, " invertible")?;
            }
            writeln!(f)?;
        }
        if let Some(p) = &self.periodicity {
            writeln!(f, "periodic {} {} {}", p.period, p.extent.keyword(), p.witness)?;
        }
        for (d, g) in &self.degree_groups {
            write!(f, "{d} {}", g.free_rank())?;
            if !g.invariant_factors().is_empty() {
                let t: Vec<String> = g.invariant_factors().iter().map(|x| x.to_string()).collect();
                write!(f, " tors={}", t.join(","))?;
            }
            if g.is_rational() {
                write!(f, " Q")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub const BUILTIN_TABLES: [&str; 4] = ["unit", "bott", "hcminus_rational", "rational_deg0"];

/// One of the built-in tables.
pub fn builtin_table(name: &str) -> Result<CoefficientTable> {
    let single = |g: FgAbGroup| BTreeMap::from([(0, g)]);
    match name {
        "unit" => CoefficientTable::new("unit", single(FgAbGroup::free(1)), None, vec![]),
        "bott" => CoefficientTable::new(
            "bott",
            single(FgAbGroup::free(1)),
            Some(Periodicity { period: 2, extent: Extent::Both, witness: "beta".into() }),
            vec![Generator { symbol: "beta".into(), degree: 2, invertible: true }],
        ),
        "hcminus_rational" => CoefficientTable::new(
            "hcminus_rational",
            single(FgAbGroup::rational(1)),
            Some(Periodicity { period: 2, extent: Extent::Down, witness: "u".into() }),
            vec![Generator { symbol: "u".into(), degree: -2, invertible: false }],
        ),
        "rational_deg0" => CoefficientTable::new("rational_deg0", single(FgAbGroup::rational(1)), None, vec![]),
        other => Err(Error::Lookup { kind: "table", name: other.to_string() }),
    }
}

/// Parse a table in the text format described in the module docs.
pub fn parse_table(text: &str) -> Result<CoefficientTable> {
    let mut name = None;
    let mut groups = BTreeMap::new();
    let mut periodicity = None;
    let mut generators = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let err = |message: String| Error::TableFormat { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let int = |s: &str| s.parse::<i64>().map_err(|_| err(format!("expected an integer, found `{s}`")));
        match tokens[0] {
            "name" => {
                let [_, n] = tokens[..] else { return Err(err("usage: name <identifier>".into())) };
                name = Some(n.to_string());
            }
            "generator" => {
                let (symbol, degree, invertible) = match tokens[..] {
                    [_, s, d] => (s, int(d)?, false),
                    [_, s, d, "invertible"] => (s, int(d)?, true),
                    _ => return Err(err("usage: generator <symbol> <degree> [invertible]".into())),
                };
                generators.push(Generator { symbol: symbol.to_string(), degree, invertible });
            }
            "periodic" => {
                let [_, p, dir, witness] = tokens[..] else {
                    return Err(err("usage: periodic <period> <both|down|up> <symbol>".into()));
                };
                let extent = match dir {
                    "both" => Extent::Both,
                    "down" => Extent::Down,
                    "up" => Extent::Up,
                    other => return Err(err(format!("unknown direction `{other}`"))),
                };
                periodicity = Some(Periodicity { period: int(p)?, extent, witness: witness.to_string() });
            }
            _ => {
                let (degree, g) = parse_record(&tokens, line_no)?;
                if groups.insert(degree, g).is_some() {
                    return Err(err(format!("degree {degree} listed twice")));
                }
            }
        }
    }

    let name = name.ok_or(Error::TableFormat { line: 0, message: "missing `name` directive".into() })?;
    CoefficientTable::new(name, groups, periodicity, generators)
}

/// `<degree> <free rank> [tors=a,b,...] [Q]`.
fn parse_record(tokens: &[&str], line_no: usize) -> Result<(i64, FgAbGroup)> {
    let err = |message: String| Error::TableFormat { line: line_no, message };
    if tokens.len() < 2 {
        return Err(err("record needs a degree and a free rank".into()));
    }
    let degree = tokens[0].parse::<i64>().map_err(|_| err(format!("expected an integer, found `{}`", tokens[0])))?;
    let rank = tokens[1]
        .parse::<usize>()
        .map_err(|_| err(format!("free rank `{}` is not a non-negative integer", tokens[1])))?;
    let mut factors = Vec::new();
    let mut rational = false;
    for tok in &tokens[2..] {
        if *tok == "Q" {
            rational = true;
        } else if let Some(list) = tok.strip_prefix("tors=") {
            for f in list.split(',') {
                let v: BigInt = f.parse().map_err(|_| err(format!("bad torsion factor `{f}`")))?;
                if v < BigInt::from(2) {
                    return Err(err(format!("torsion factor {v} must be at least 2")));
                }
                factors.push(v);
            }
        } else {
            return Err(err(format!("unexpected token `{tok}`")));
        }
    }
    let g = if rational { FgAbGroup::rational(rank) } else { FgAbGroup::new(rank, factors) };
    Ok((degree, g))
}

/// Parse bare degree records (same syntax as table records) into an explicit
/// graded group. Unlisted degrees are zero.
pub fn parse_graded_values(text: &str) -> Result<BTreeMap<i64, FgAbGroup>> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (degree, g) = parse_record(&tokens, k + 1)?;
        if out.insert(degree, g).is_some() {
            return Err(Error::TableFormat { line: k + 1, message: format!("degree {degree} listed twice") });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_table() {
        let t = builtin_table("unit").unwrap();
        assert_eq!(t.at(0), FgAbGroup::free(1));
        assert!(t.generators().is_empty());
        for d in [-3, -1, 1, 2] {
            assert!(t.at(d).is_zero());
        }
    }

    #[test]
    fn hcminus_rational_table() {
        let t = builtin_table("hcminus_rational").unwrap();
        for d in [0, -2, -4, -10] {
            assert_eq!(t.at(d), FgAbGroup::rational(1), "degree {d}");
        }
        for d in [-1, -3, 1, 2, 4] {
            assert!(t.at(d).is_zero(), "degree {d}");
        }
        assert_eq!(t.generators()[0], Generator { symbol: "u".into(), degree: -2, invertible: false });
    }

    #[test]
    fn bott_table_is_two_periodic() {
        let t = builtin_table("bott").unwrap();
        for d in -6..=6 {
            let expected = if d % 2 == 0 { FgAbGroup::free(1) } else { FgAbGroup::zero() };
            assert_eq!(t.at(d), expected, "degree {d}");
        }
    }

    #[test]
    fn rational_deg0_vanishes_elsewhere() {
        let t = builtin_table("rational_deg0").unwrap();
        assert!(t.vanishes_outside(&[0]));
        assert!(!builtin_table("bott").unwrap().vanishes_outside(&[0]));
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(builtin_table("ktheory_of_fq"), Err(Error::Lookup { .. })));
    }

    #[test]
    fn text_round_trip() {
        for name in BUILTIN_TABLES {
            let t = builtin_table(name).unwrap();
            assert_eq!(parse_table(&t.to_text()).unwrap(), t);
        }
        let t = parse_table("name fx\n0 1\n1 0 tors=2,4\n3 2 Q # comment\n").unwrap();
        assert_eq!(t.at(1), FgAbGroup::new(0, [BigInt::from(2), BigInt::from(4)]));
        assert_eq!(t.at(3), FgAbGroup::rational(2));
        assert_eq!(parse_table(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn format_errors_carry_lines() {
        let e = parse_table("name x\n0 1\n0 2\n").unwrap_err();
        assert_eq!(e, Error::TableFormat { line: 3, message: "degree 0 listed twice".into() });
        let e = parse_table("name x\n1 1\n").unwrap_err();
        assert!(matches!(e, Error::TableFormat { line: 0, .. }));
        let e = parse_table("name x\n0 1\nperiodic 2 both beta\n").unwrap_err();
        assert!(e.to_string().contains("witness"));
        let e = parse_table("name x\n0 one\n").unwrap_err();
        assert!(matches!(e, Error::TableFormat { line: 2, .. }));
    }
}
