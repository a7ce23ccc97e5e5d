//! Construction scripts: parsing and printing.
//!
//! One statement per line; `#` starts a comment.
//!
//! ```text
//! group trivial | group torus <n> [finite <l>...] | group finite <l>... | group opaque <name>
//! table <id> = file "<path>"        values <id> = file "<path>"
//! table <id> {                      values <id> {
//!   <table lines>                     <degree records>
//! }                                 }
//! let <name> = <expr>
//! compute <name> table=<id> degrees=<a>..<b>
//! classify <name>
//! verdict <name> preset=<id>
//! report <name> degrees=<a>..<b> [kh=<table id>] [hc=<values id>]
//! ```
//!
//! `table` blocks use the coefficient table format; `values` blocks hold
//! bare `<degree> <free rank> [tors=..] [Q]` records.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use simploc_core::coeff::{parse_graded_values, parse_table, BUILTIN_TABLES};
use simploc_core::engine::Preset;
use simploc_core::group_rep::GroupDatum;

use crate::error::CliError;
use crate::resolve::{is_reserved, tree_positions};
use crate::syntax::{Lexer, Pos, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    Table,
    Values,
}

impl DataKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DataKind::Table => "table",
            DataKind::Values => "values",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataSource {
    /// Relative paths resolve against the script's directory.
    File(String),
    Inline(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommandKind {
    Compute { table: String, degrees: RangeInclusive<i64> },
    Classify,
    Verdict { preset: Preset },
    Report { degrees: RangeInclusive<i64>, kh: Option<String>, hc: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Group(GroupDatum),
    Data { kind: DataKind, name: String, source: DataSource },
    Let { name: String, expr: Term },
    Command { tree: String, kind: CommandKind },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    /// Statements with the line they start on.
    pub statements: Vec<(usize, Statement)>,
}

impl Script {
    /// The declared group, trivial when absent.
    pub fn group(&self) -> GroupDatum {
        self.statements
            .iter()
            .find_map(|(_, s)| match s {
                Statement::Group(g) => Some(g.clone()),
                _ => None,
            })
            .unwrap_or_else(GroupDatum::trivial)
    }

    pub fn commands(&self) -> impl Iterator<Item = (usize, &String, &CommandKind)> {
        self.statements.iter().filter_map(|(l, s)| match s {
            Statement::Command { tree, kind } => Some((*l, tree, kind)),
            _ => None,
        })
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> CliError {
    CliError::Syntax { pos, message: message.into() }
}

/// Whitespace-separated words with their 1-based columns.
fn words(line: &str) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, (i, c)) in line.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((i, k)),
            (true, Some((s, col))) => {
                out.push((&line[s..i], col + 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((s, col)) = start {
        out.push((&line[s..], col + 1));
    }
    out
}

/// Drop a trailing comment outside double quotes.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_range(word: &str, pos: Pos) -> Result<RangeInclusive<i64>, CliError> {
    let bad = || syntax(pos, format!("expected a degree range `<a>..<b>`, found `{word}`"));
    let (a, b) = word.split_once("..").ok_or_else(bad)?;
    let (a, b) = (a.parse::<i64>().map_err(|_| bad())?, b.parse::<i64>().map_err(|_| bad())?);
    if a > b {
        return Err(syntax(pos, format!("empty degree range {a}..{b}")));
    }
    Ok(a..=b)
}

fn parse_group(ws: &[(&str, usize)], line: usize) -> Result<GroupDatum, CliError> {
    let (last, last_col) = ws[ws.len() - 1];
    let at = |k: usize| Pos { line, col: ws.get(k).map_or(last_col + last.chars().count(), |w| w.1) };
    let ints = |from: usize| -> Result<Vec<i64>, CliError> {
        ws[from..]
            .iter()
            .map(|(w, c)| {
                w.parse::<i64>().map_err(|_| syntax(Pos { line, col: *c }, format!("expected an order, found `{w}`")))
            })
            .collect()
    };
    let core = |e: simploc_core::Error| CliError::Core { line, error: e };
    match ws.get(1).map(|w| w.0) {
        Some("trivial") if ws.len() == 2 => Ok(GroupDatum::trivial()),
        Some("torus") => {
            let rank = ws
                .get(2)
                .and_then(|w| w.0.parse::<usize>().ok())
                .ok_or_else(|| syntax(at(2), "expected the torus rank"))?;
            let orders = match ws.get(3).map(|w| w.0) {
                None => vec![],
                Some("finite") if ws.len() > 4 => ints(4)?,
                _ => return Err(syntax(at(3), "expected `finite <order>...`")),
            };
            GroupDatum::new(rank, orders).map_err(core)
        }
        Some("finite") if ws.len() > 2 => GroupDatum::new(0, ints(2)?).map_err(core),
        Some("opaque") if ws.len() == 3 => Ok(GroupDatum::opaque(ws[2].0)),
        _ => Err(syntax(at(1), "expected `trivial`, `torus <n>`, `finite <orders>` or `opaque <name>`")),
    }
}

fn check_ident(word: &str, pos: Pos) -> Result<(), CliError> {
    let mut cs = word.chars();
    let ok = cs.next().is_some_and(|c| c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(syntax(pos, format!("`{word}` is not a valid name")))
    }
}

struct Scope {
    trees: BTreeSet<String>,
    tables: BTreeSet<String>,
    values: BTreeSet<String>,
}

impl Scope {
    fn tree(&self, name: &str, pos: Pos) -> Result<(), CliError> {
        if self.trees.contains(name) {
            Ok(())
        } else {
            Err(CliError::Undefined { pos, name: name.to_string() })
        }
    }
}

/// Parse script text.
pub fn parse(text: &str) -> Result<Script, CliError> {
    let mut statements = Vec::new();
    let mut scope = Scope { trees: BTreeSet::new(), tables: BTreeSet::new(), values: BTreeSet::new() };
    let mut have_group = false;
    let lines: Vec<&str> = text.lines().collect();
    let mut k = 0;
    while k < lines.len() {
        let line_no = k + 1;
        let raw = strip_comment(lines[k]);
        k += 1;
        let ws = words(raw);
        let Some(&(head, head_col)) = ws.first() else { continue };
        let pos_of = |i: usize| Pos { line: line_no, col: ws.get(i).map_or(raw.chars().count() + 1, |w| w.1) };
        let stmt = match head {
            "group" => {
                if have_group {
                    return Err(syntax(pos_of(0), "a script declares at most one group"));
                }
                have_group = true;
                Statement::Group(parse_group(&ws, line_no)?)
            }
            "table" | "values" => {
                let kind = if head == "table" { DataKind::Table } else { DataKind::Values };
                let (name, _) = *ws.get(1).ok_or_else(|| syntax(pos_of(1), format!("expected a {head} name")))?;
                check_ident(name, pos_of(1))?;
                let source = match ws.get(2).map(|w| w.0) {
                    Some("{") if ws.len() == 3 => {
                        let start = k;
                        let end = (start..lines.len())
                            .find(|&j| strip_comment(lines[j]).trim() == "}")
                            .ok_or_else(|| syntax(pos_of(2), "unterminated block"))?;
                        k = end + 1;
                        let body = lines[start..end].join("\n");
                        let checked = match kind {
                            DataKind::Table => parse_table(&body).map(|_| ()),
                            DataKind::Values => parse_graded_values(&body).map(|_| ()),
                        };
                        if let Err(simploc_core::Error::TableFormat { line, message }) = checked {
                            let at = if line == 0 { line_no } else { start + line };
                            return Err(syntax(Pos { line: at, col: 1 }, message));
                        }
                        checked.map_err(|e| CliError::Core { line: line_no, error: e })?;
                        DataSource::Inline(body)
                    }
                    Some("=") => {
                        let after = ws.get(3).map(|w| w.0);
                        let quoted = ws.get(4).map(|w| (w.1, raw.trim_end()));
                        match (after, quoted) {
                            (Some("file"), Some((col, line))) => {
                                let byte = line.char_indices().nth(col - 1).map_or(line.len(), |(b, _)| b);
                                let lit = &line[byte..];
                                let path = lit
                                    .strip_prefix('"')
                                    .and_then(|s| s.strip_suffix('"'))
                                    .filter(|s| !s.contains('"'))
                                    .ok_or_else(|| syntax(pos_of(4), "expected a quoted path"))?;
                                DataSource::File(path.to_string())
                            }
                            _ => return Err(syntax(pos_of(3), "expected `file \"<path>\"`")),
                        }
                    }
                    _ => return Err(syntax(pos_of(2), "expected `= file \"<path>\"` or `{`")),
                };
                match kind {
                    DataKind::Table => scope.tables.insert(name.to_string()),
                    DataKind::Values => scope.values.insert(name.to_string()),
                };
                Statement::Data { kind, name: name.to_string(), source }
            }
            "let" => {
                let body = raw.trim_start().strip_prefix("let").unwrap_or("");
                let offset = raw.chars().count() - raw.trim_start().chars().count() + 4;
                let mut lx = Lexer::new(body, line_no, offset);
                let (name, npos) = lx.ident().map_err(CliError::from)?;
                if is_reserved(&name) {
                    return Err(syntax(npos, format!("`{name}` is a reserved name")));
                }
                lx.punct('=')?;
                let expr = lx.term()?;
                if !lx.at_end() {
                    let (rest, pos) = lx.rest();
                    return Err(syntax(pos, format!("unexpected trailing input `{rest}`")));
                }
                for (id, pos) in tree_positions(&expr) {
                    if !is_reserved(&id) {
                        scope.tree(&id, pos)?;
                    }
                }
                scope.trees.insert(name.clone());
                Statement::Let { name, expr }
            }
            "compute" | "classify" | "verdict" | "report" => {
                let (tree, _) = *ws.get(1).ok_or_else(|| syntax(pos_of(1), format!("`{head}` needs a tree name")))?;
                scope.tree(tree, pos_of(1))?;
                let mut table = None;
                let mut degrees = None;
                let mut preset = None;
                let (mut kh, mut hc) = (None, None);
                for (i, &(w, _)) in ws.iter().enumerate().skip(2) {
                    let pos = pos_of(i);
                    let (key, value) =
                        w.split_once('=').ok_or_else(|| syntax(pos, format!("expected `key=value`, found `{w}`")))?;
                    let slot = match (head, key) {
                        ("compute", "table") => &mut table,
                        ("compute" | "report", "degrees") => {
                            degrees = Some(parse_range(value, pos)?);
                            continue;
                        }
                        ("verdict", "preset") => {
                            preset =
                                Some(Preset::from_name(value).map_err(|e| CliError::Core { line: line_no, error: e })?);
                            continue;
                        }
                        ("report", "kh") => &mut kh,
                        ("report", "hc") => {
                            if !scope.values.contains(value) {
                                return Err(CliError::Undefined { pos, name: value.to_string() });
                            }
                            hc = Some(value.to_string());
                            continue;
                        }
                        _ => return Err(syntax(pos, format!("`{head}` takes no parameter `{key}`"))),
                    };
                    if !scope.tables.contains(value) && !BUILTIN_TABLES.contains(&value) {
                        return Err(CliError::Undefined { pos, name: value.to_string() });
                    }
                    *slot = Some(value.to_string());
                }
                let end = pos_of(ws.len());
                let kind = match head {
                    "compute" => CommandKind::Compute {
                        table: table.ok_or_else(|| syntax(end, "`compute` needs `table=<id>`"))?,
                        degrees: degrees.ok_or_else(|| syntax(end, "`compute` needs `degrees=<a>..<b>`"))?,
                    },
                    "classify" => CommandKind::Classify,
                    "verdict" => CommandKind::Verdict {
                        preset: preset.ok_or_else(|| syntax(end, "`verdict` needs `preset=<id>`"))?,
                    },
                    _ => CommandKind::Report {
                        degrees: degrees.ok_or_else(|| syntax(end, "`report` needs `degrees=<a>..<b>`"))?,
                        kh,
                        hc,
                    },
                };
                Statement::Command { tree: tree.to_string(), kind }
            }
            other => return Err(syntax(Pos { line: line_no, col: head_col }, format!("unknown statement `{other}`"))),
        };
        statements.push((line_no, stmt));
    }
    Ok(Script { statements })
}

fn fmt_range(r: &RangeInclusive<i64>) -> String {
    format!("{}..{}", r.start(), r.end())
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Group(GroupDatum::Opaque { name }) => write!(f, "group opaque {name}"),
            Statement::Group(g) if g.is_trivial() => write!(f, "group trivial"),
            Statement::Group(g) => {
                let orders: Vec<String> = g.finite_orders().iter().map(|l| l.to_string()).collect();
                match (g.free_rank(), orders.is_empty()) {
                    (r, true) => write!(f, "group torus {r}"),
                    (0, false) => write!(f, "group finite {}", orders.join(" ")),
                    (r, false) => write!(f, "group torus {r} finite {}", orders.join(" ")),
                }
            }
            Statement::Data { kind, name, source: DataSource::File(p) } => {
                write!(f, "{} {name} = file \"{p}\"", kind.keyword())
            }
            Statement::Data { kind, name, source: DataSource::Inline(body) } => {
                writeln!(f, "{} {name} {{", kind.keyword())?;
                for l in body.lines() {
                    writeln!(f, "{l}")?;
                }
                write!(f, "}}")
            }
            Statement::Let { name, expr } => write!(f, "let {name} = {expr}"),
            Statement::Command { tree, kind } => match kind {
                CommandKind::Compute { table, degrees } => {
                    write!(f, "compute {tree} table={table} degrees={}", fmt_range(degrees))
                }
                CommandKind::Classify => write!(f, "classify {tree}"),
                CommandKind::Verdict { preset } => write!(f, "verdict {tree} preset={}", preset.name()),
                CommandKind::Report { degrees, kh, hc } => {
                    write!(f, "report {tree} degrees={}", fmt_range(degrees))?;
                    if let Some(kh) = kh {
                        write!(f, " kh={kh}")?;
                    }
                    if let Some(hc) = hc {
                        write!(f, " hc={hc}")?;
                    }
                    Ok(())
                }
            },
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (_, s) in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
