use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use simploc_core::coeff::{builtin_table, parse_graded_values, parse_table, CoefficientTable, FgAbGroup};
use simploc_core::dsl::{classify, validate, ConstructionTree};
use simploc_core::engine::{
    classify_with_evidence, compute_graded, decompose_positive_k, run_preset, Comparison, GradedModuleValue, Shape,
};
use simploc_core::group_rep::{representation_ring, GroupDatum};

use crate::error::{exit_code, render, CliError};
use crate::resolve::{resolve, Env};
use crate::script::{parse, CommandKind, DataKind, DataSource, Script, Statement};

/// Version tag carried by every record.
pub const SCHEMA: &str = "simploc.records.v1";

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub normalize_j: bool,
    /// Directory against which `file "..."` paths resolve.
    pub base_dir: PathBuf,
}

/// One machine-readable output row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub schema: &'static str,
    /// 1-based index among the script's commands.
    pub command: usize,
    pub line: usize,
    pub op: &'static str,
    pub tree: String,
    #[serde(flatten)]
    pub row: Row,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "row", rename_all = "snake_case")]
pub enum Row {
    Degree {
        degree: i64,
        value: String,
        free_rank: usize,
        invariant_factors: Vec<String>,
        rational: bool,
        flags: Vec<String>,
    },
    Class {
        tag: String,
        assumed_oracles: Vec<String>,
        not_in_b: Option<String>,
    },
    Verdict {
        preset: String,
        kind: Option<String>,
        conclusion: Option<String>,
        hypotheses: Vec<String>,
        failed: Option<String>,
    },
    Report {
        degree: i64,
        k: Option<String>,
        kh: String,
        hc: Option<String>,
        flags: Vec<String>,
    },
    Error {
        exit_code: i32,
        message: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub records: Vec<Record>,
    pub stderr: String,
    pub exit_code: i32,
}

impl Outcome {
    fn fail(&mut self, e: &CliError, command: usize, line: usize, op: &'static str, tree: &str) {
        let code = exit_code(e);
        let message = render(e);
        self.stderr.push_str(&message);
        self.stderr.push('\n');
        self.records.push(Record {
            schema: SCHEMA,
            command,
            line,
            op,
            tree: tree.to_string(),
            row: Row::Error { exit_code: code, message },
        });
        self.exit_code = code;
    }

    /// Records as JSON lines.
    pub fn records_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }
}

/// Describe a group with the representation ring as the rank-one module.
pub fn describe_value(g: &FgAbGroup, group: &GroupDatum) -> String {
    let ring = match representation_ring(group) {
        Ok(r) => r.describe(),
        Err(_) => "R(G)".to_string(),
    };
    let base = match (g.is_rational(), ring.as_str()) {
        (true, "Z") => "Q".to_string(),
        (true, r) => format!("Q⊗{r}"),
        (false, r) => r.to_string(),
    };
    g.describe_over(&base)
}

struct Session<'a> {
    opts: &'a Options,
    group: GroupDatum,
    trees: BTreeMap<String, ConstructionTree>,
    tables: BTreeMap<String, CoefficientTable>,
    values: BTreeMap<String, BTreeMap<i64, FgAbGroup>>,
}

impl Session<'_> {
    fn load(&mut self, line: usize, kind: DataKind, name: &str, source: &DataSource) -> Result<(), CliError> {
        let text = match source {
            DataSource::Inline(body) => body.clone(),
            DataSource::File(p) => {
                let path = self.opts.base_dir.join(p);
                std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?
            }
        };
        let core = |error| CliError::Core { line, error };
        match kind {
            DataKind::Table => {
                self.tables.insert(name.to_string(), parse_table(&text).map_err(core)?);
            }
            DataKind::Values => {
                self.values.insert(name.to_string(), parse_graded_values(&text).map_err(core)?);
            }
        }
        Ok(())
    }

    fn table(&self, line: usize, id: &str) -> Result<CoefficientTable, CliError> {
        match self.tables.get(id) {
            Some(t) => Ok(t.clone()),
            None => builtin_table(id).map_err(|error| CliError::Core { line, error }),
        }
    }

    fn command(
        &self,
        line: usize,
        index: usize,
        name: &str,
        kind: &CommandKind,
        out: &mut Outcome,
    ) -> Result<(), CliError> {
        let tree = &self.trees[name];
        let core = |error| CliError::Core { line, error };
        let op = op_name(kind);
        let record = |row: Row| Record { schema: SCHEMA, command: index, line, op, tree: name.to_string(), row };
        let mut text = String::new();
        match kind {
            CommandKind::Compute { table, degrees } => {
                let t = self.table(line, table)?;
                let value = compute_graded(tree, &self.group, &t, degrees.clone()).map_err(core)?;
                let class = classify(tree);
                let flags = value_flags(&value);
                match &value.shape {
                    Shape::Formal { d0, .. } => {
                        let _ = writeln!(text, "  class {}, formal shape, degree-0 rank {}", class.tag, d0.rank);
                    }
                    Shape::Explicit { .. } => {
                        let _ = writeln!(text, "  class {}, explicit shape", class.tag);
                    }
                }
                for d in degrees.clone() {
                    let g = value.value_at(d).map_err(core)?;
                    let desc = describe_value(&g, &self.group);
                    let _ = writeln!(text, "  degree {d}: {desc}");
                    out.records.push(record(Row::Degree {
                        degree: d,
                        value: desc,
                        free_rank: g.free_rank(),
                        invariant_factors: g.invariant_factors().iter().map(|f| f.to_string()).collect(),
                        rational: g.is_rational(),
                        flags: flags.clone(),
                    }));
                }
                for p in &value.provenance {
                    let _ = writeln!(text, "  provenance: {p}");
                }
                for p in &value.assumed_oracles {
                    let _ = writeln!(text, "  assumed oracle: {p}");
                }
            }
            CommandKind::Classify => {
                let class = classify_with_evidence(tree).unwrap_or_else(|_| classify(tree));
                let _ = writeln!(text, "  class {}", class.tag);
                if let Some(ev) = &class.b_refuted {
                    let _ = writeln!(text, "  not in class B: {ev}");
                }
                for p in &class.assumed_oracles {
                    let _ = writeln!(text, "  assumed oracle: {p}");
                }
                out.records.push(record(Row::Class {
                    tag: class.tag.to_string(),
                    assumed_oracles: class.assumed_oracles.iter().map(|p| p.to_string()).collect(),
                    not_in_b: class.b_refuted.as_ref().map(|e| e.to_string()),
                }));
            }
            CommandKind::Verdict { preset } => {
                let row = match run_preset(*preset, tree, &self.group).map_err(core)? {
                    Comparison::Verdict(v) => {
                        let _ = writeln!(text, "  {v}");
                        for h in &v.hypotheses {
                            let _ = writeln!(text, "  hypothesis: {h}");
                        }
                        Row::Verdict {
                            preset: preset.name().into(),
                            kind: Some(v.kind.to_string()),
                            conclusion: Some(v.conclusion_text.clone()),
                            hypotheses: v.hypotheses.clone(),
                            failed: None,
                        }
                    }
                    Comparison::NoVerdict { failed } => {
                        let _ = writeln!(text, "  no verdict: {failed}");
                        Row::Verdict {
                            preset: preset.name().into(),
                            kind: None,
                            conclusion: None,
                            hypotheses: vec![],
                            failed: Some(failed),
                        }
                    }
                };
                out.records.push(record(row));
            }
            CommandKind::Report { degrees, kh, hc } => {
                let t = self.table(line, kh.as_deref().unwrap_or("rational_deg0"))?;
                let khv = compute_graded(tree, &self.group, &t, degrees.clone()).map_err(core)?;
                let hcv = match hc {
                    Some(id) => {
                        let groups = self.values[id].range(degrees.clone()).map(|(d, g)| (*d, g.clone())).collect();
                        let prov = vec![format!("HC⁻ values `{id}`")];
                        Some(GradedModuleValue::explicit(degrees.clone(), groups, prov).map_err(core)?)
                    }
                    None => None,
                };
                let class = classify(tree);
                let mut split_used = false;
                let mut split_refused = None;
                for d in degrees.clone() {
                    let khd = khv.value_at(d).map_err(core)?;
                    let hcd = hcv.as_ref().map(|v| v.value_at(d)).transpose().map_err(core)?;
                    let mut flags = value_flags(&khv);
                    let k = match &hcv {
                        Some(h) if d >= 1 => match decompose_positive_k(&khv, h, &class, d) {
                            Ok((g, v)) => {
                                flags.push(v.kind.to_string());
                                split_used = true;
                                Some(g)
                            }
                            Err(simploc_core::Error::Hypothesis(why)) => {
                                split_refused.get_or_insert(why);
                                None
                            }
                            Err(e) => return Err(core(e)),
                        },
                        _ => None,
                    };
                    let show = |g: &Option<FgAbGroup>| g.as_ref().map(|g| describe_value(g, &self.group));
                    let (ks, khs, hcs) = (show(&k), describe_value(&khd, &self.group), show(&hcd));
                    let q = |s: &Option<String>| s.clone().unwrap_or_else(|| "?".into());
                    let _ = writeln!(text, "  degree {d}: K = {} | KH = {khs} | HC⁻ = {}", q(&ks), q(&hcs));
                    out.records.push(record(Row::Report { degree: d, k: ks, kh: khs, hc: hcs, flags }));
                }
                if split_used {
                    let _ = writeln!(
                        text,
                        "  K_i = KH_i ⊕ HC⁻_i for i ≥ 1 (class B; cdh-local HC⁻ vanishes in positive degrees)"
                    );
                }
                if let Some(why) = split_refused {
                    let _ = writeln!(text, "  K column undetermined: {why}");
                }
            }
        }
        out.text.push_str(&text);
        Ok(())
    }
}

fn op_name(kind: &CommandKind) -> &'static str {
    match kind {
        CommandKind::Compute { .. } => "compute",
        CommandKind::Classify => "classify",
        CommandKind::Verdict { .. } => "verdict",
        CommandKind::Report { .. } => "report",
    }
}

fn value_flags(v: &GradedModuleValue) -> Vec<String> {
    let mut flags = vec![if v.is_formal() { "formal" } else { "explicit" }.to_string()];
    flags.extend(v.assumed_oracles.iter().map(|p| format!("oracle {p}")));
    flags
}

/// Execute a parsed script. Stops at the first failing statement.
pub fn run(script: &Script, opts: &Options) -> Outcome {
    let mut out = Outcome::default();
    let mut s = Session {
        opts,
        group: script.group(),
        trees: BTreeMap::new(),
        tables: BTreeMap::new(),
        values: BTreeMap::new(),
    };
    let mut index = 0;
    for (line, stmt) in &script.statements {
        let result = match stmt {
            Statement::Group(_) => Ok(()),
            Statement::Data { kind, name, source } => s.load(*line, *kind, name, source),
            Statement::Let { name, expr } => {
                let env = Env { trees: &s.trees, group: &s.group, normalize_j: opts.normalize_j };
                resolve(expr, &env).map(|t| {
                    s.trees.insert(name.clone(), t);
                })
            }
            Statement::Command { tree, kind } => {
                index += 1;
                let _ = writeln!(out.text, "{stmt}");
                s.command(*line, index, tree, kind, &mut out)
            }
        };
        if let Err(e) = result {
            let (op, tree) = match stmt {
                Statement::Command { tree, kind } => (op_name(kind), tree.as_str()),
                Statement::Let { name, .. } => ("let", name.as_str()),
                _ => ("load", ""),
            };
            out.fail(&e, index, *line, op, tree);
            break;
        }
    }
    out
}

/// Validate and classify every binding without running commands.
pub fn check(script: &Script, opts: &Options) -> Outcome {
    let mut out = Outcome::default();
    let group = script.group();
    let mut trees = BTreeMap::new();
    for (line, stmt) in &script.statements {
        let result = match stmt {
            Statement::Let { name, expr } => {
                let env = Env { trees: &trees, group: &group, normalize_j: opts.normalize_j };
                resolve(expr, &env).and_then(|t| {
                    validate(&t, &group)
                        .map_err(|vs| CliError::Core { line: *line, error: simploc_core::Error::Invalid(vs) })?;
                    let class = classify(&t);
                    let _ = writeln!(out.text, "{name}: class {}", class.tag);
                    out.records.push(Record {
                        schema: SCHEMA,
                        command: 0,
                        line: *line,
                        op: "check",
                        tree: name.clone(),
                        row: Row::Class {
                            tag: class.tag.to_string(),
                            assumed_oracles: class.assumed_oracles.iter().map(|p| p.to_string()).collect(),
                            not_in_b: None,
                        },
                    });
                    trees.insert(name.clone(), t);
                    Ok(())
                })
            }
            _ => Ok(()),
        };
        if let Err(e) = result {
            let name = match stmt {
                Statement::Let { name, .. } => name.as_str(),
                _ => "",
            };
            out.fail(&e, 0, *line, "check", name);
            break;
        }
    }
    out
}

fn parse_or_fail(src: &str) -> Result<Script, Outcome> {
    parse(src).map_err(|e| {
        let mut out = Outcome::default();
        let line = match &e {
            CliError::Syntax { pos, .. } | CliError::Undefined { pos, .. } => pos.line,
            CliError::Core { line, .. } => *line,
            CliError::Io { .. } => 0,
        };
        out.fail(&e, 0, line, "parse", "");
        out
    })
}

/// Parse and run script text.
pub fn run_source(src: &str, opts: &Options) -> Outcome {
    match parse_or_fail(src) {
        Ok(script) => run(&script, opts),
        Err(out) => out,
    }
}

/// Parse and check script text.
pub fn check_source(src: &str, opts: &Options) -> Outcome {
    match parse_or_fail(src) {
        Ok(script) => check(&script, opts),
        Err(out) => out,
    }
}
