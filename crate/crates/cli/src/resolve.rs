//! Tree expressions: evaluation of terms to trees, and the inverse printer.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use simploc_core::coeff::Matrix;
use simploc_core::dsl::{
    example_library, BlowupSquare, BundleDatum, ConstructionTree, Corner, LibraryArg, SheafDatum, Split,
};
use simploc_core::group_rep::GroupDatum;
use simploc_core::schubert::{affine_schubert_tree, finite_schubert_tree, CoweightDatum, FiniteSchubertDatum};
use simploc_core::{Error, Int};

use crate::error::CliError;
use crate::syntax::{Arg, Pos, Term};

const RESERVED: [&str; 25] = [
    "pt",
    "point",
    "henselian",
    "disjoint",
    "flag_bundle",
    "plain",
    "split",
    "twisted",
    "bundle",
    "descent",
    "sheaf",
    "blowup",
    "matrix",
    "P",
    "projective_space",
    "Gr",
    "grassmannian",
    "flag",
    "hirzebruch",
    "cusp",
    "node",
    "cone_of_P1",
    "projective_cone",
    "schubert",
    "affine_schubert",
];

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

/// Identifiers in positions that denote trees.
pub fn tree_positions(t: &Term) -> Vec<(String, Pos)> {
    let mut out = Vec::new();
    fn go(t: &Term, out: &mut Vec<(String, Pos)>) {
        match t {
            Term::Ident(s, p) => out.push((s.clone(), *p)),
            Term::Call { args, .. } => {
                for a in args {
                    if a.key.as_deref().is_none_or(|k| Corner::from_label(k).is_some()) {
                        go(&a.value, out);
                    }
                }
            }
            Term::List(items, _) => items.iter().for_each(|i| go(i, out)),
            Term::Map(entries, _) => entries.iter().for_each(|(_, i)| go(i, out)),
            Term::Int(..) => {}
        }
    }
    go(t, &mut out);
    out
}

pub struct Env<'a> {
    pub trees: &'a BTreeMap<String, ConstructionTree>,
    pub group: &'a GroupDatum,
    pub normalize_j: bool,
}

fn bad<T>(t: &Term, what: &str) -> Result<T, CliError> {
    Err(CliError::Syntax { pos: t.pos(), message: format!("expected {what}, found `{t}`") })
}

fn core(t: &Term) -> impl Fn(Error) -> CliError + '_ {
    move |error| CliError::Core { line: t.pos().line, error }
}

fn int(t: &Term) -> Result<i64, CliError> {
    match t {
        Term::Int(v, _) => Ok(*v),
        _ => bad(t, "an integer"),
    }
}

fn count(t: &Term) -> Result<usize, CliError> {
    usize::try_from(int(t)?).or_else(|_| bad(t, "a non-negative integer"))
}

fn list(t: &Term) -> Result<&[Term], CliError> {
    match t {
        Term::List(items, _) => Ok(items),
        _ => bad(t, "a list"),
    }
}

fn ints(t: &Term) -> Result<Vec<i64>, CliError> {
    list(t)?.iter().map(int).collect()
}

fn counts(t: &Term) -> Result<Vec<usize>, CliError> {
    list(t)?.iter().map(count).collect()
}

fn rows(t: &Term) -> Result<Vec<Vec<i64>>, CliError> {
    list(t)?.iter().map(ints).collect()
}

/// Positional and keyword arguments of a call, checked against a signature.
struct Args<'a> {
    positional: Vec<&'a Term>,
    keyed: BTreeMap<&'a str, &'a Term>,
}

impl<'a> Args<'a> {
    fn new(call: &'a Term, args: &'a [Arg], arity: usize, keys: &[&str]) -> Result<Self, CliError> {
        let mut positional = Vec::new();
        let mut keyed = BTreeMap::new();
        for a in args {
            match &a.key {
                None if keyed.is_empty() => positional.push(&a.value),
                None => return bad(&a.value, "a keyword argument after keyword arguments"),
                Some(k) if keys.contains(&k.as_str()) => {
                    if keyed.insert(k.as_str(), &a.value).is_some() {
                        return bad(&a.value, &format!("`{k}` given once"));
                    }
                }
                Some(k) => return bad(&a.value, &format!("one of the keywords {keys:?}, not `{k}`")),
            }
        }
        if positional.len() != arity {
            return Err(CliError::Syntax {
                pos: call.pos(),
                message: format!("`{}` takes {arity} positional argument(s), got {}", name_of(call), positional.len()),
            });
        }
        Ok(Args { positional, keyed })
    }

    fn at(&self, k: usize) -> &'a Term {
        self.positional[k]
    }
}

fn name_of(t: &Term) -> &str {
    match t {
        Term::Call { name, .. } | Term::Ident(name, _) => name,
        _ => "?",
    }
}

fn bundle(t: &Term) -> Result<BundleDatum, CliError> {
    let Term::Call { name, args, .. } = t else { return bad(t, "a bundle") };
    match name.as_str() {
        "plain" => Ok(BundleDatum::plain(count(Args::new(t, args, 1, &[])?.at(0))?)),
        "split" => Ok(BundleDatum::split(rows(Args::new(t, args, 1, &[])?.at(0))?)),
        "twisted" => Ok(BundleDatum::twisted(ints(Args::new(t, args, 1, &[])?.at(0))?)),
        "bundle" => {
            let a = Args::new(t, args, 1, &["chars", "twists"])?;
            Ok(BundleDatum {
                rank: count(a.at(0))?,
                split_characters: a.keyed.get("chars").map(|c| rows(c)).transpose()?,
                twist_labels: a.keyed.get("twists").map(|c| ints(c)).transpose()?,
            })
        }
        _ => bad(t, "`plain`, `split`, `twisted` or `bundle`"),
    }
}

fn matrix(t: &Term) -> Result<Matrix<Int>, CliError> {
    let Term::Call { name, args, .. } = t else { return bad(t, "a matrix") };
    if name != "matrix" {
        return bad(t, "`matrix(rows, cols, [[..]])`");
    }
    let a = Args::new(t, args, 3, &[])?;
    let (r, c) = (count(a.at(0))?, count(a.at(1))?);
    let entries = rows(a.at(2))?;
    if entries.len() != r {
        return bad(a.at(2), &format!("{r} row(s)"));
    }
    let entries = entries.into_iter().map(|row| row.into_iter().map(Int::from).collect()).collect();
    Matrix::from_rows(entries, c).map_err(core(t))
}

/// Evaluate a tree expression.
pub fn resolve(t: &Term, env: &Env) -> Result<ConstructionTree, CliError> {
    let lib = |name: &str, args: &[LibraryArg]| example_library(name, args, env.group).map_err(core(t));
    match t {
        Term::Ident(name, pos) => match name.as_str() {
            "pt" | "point" => Ok(ConstructionTree::Point),
            "cusp" | "node" | "cone_of_P1" => lib(name, &[]),
            _ => env.trees.get(name).cloned().ok_or_else(|| CliError::Undefined { pos: *pos, name: name.clone() }),
        },
        Term::Call { name, args, .. } => {
            let sig = |arity, keys: &[&str]| Args::new(t, args, arity, keys);
            match name.as_str() {
                "pt" | "point" => {
                    sig(0, &[])?;
                    Ok(ConstructionTree::Point)
                }
                "henselian" => {
                    let p = int(sig(1, &[])?.at(0))?;
                    let p = u64::try_from(p).or_else(|_| bad(t, "a positive characteristic"))?;
                    Ok(ConstructionTree::HenselianBase { p })
                }
                "disjoint" => Ok(ConstructionTree::Disjoint(
                    args.iter()
                        .map(|a| match &a.key {
                            None => resolve(&a.value, env),
                            Some(_) => bad(&a.value, "a positional tree"),
                        })
                        .collect::<Result<_, _>>()?,
                )),
                "flag_bundle" => {
                    let a = sig(3, &[])?;
                    Ok(ConstructionTree::flag_bundle(resolve(a.at(0), env)?, bundle(a.at(1))?, counts(a.at(2))?))
                }
                "descent" => {
                    let a = sig(3, &["oracle"])?;
                    let sheaf = match a.at(1) {
                        s @ Term::Call { name, args, .. } if name == "sheaf" => {
                            let s = Args::new(s, args, 3, &[])?;
                            SheafDatum {
                                generic_rank: count(s.at(0))?,
                                presentation_ranks: (count(s.at(1))?, count(s.at(2))?),
                            }
                        }
                        other => return bad(other, "`sheaf(rank, e1, e0)`"),
                    };
                    let oracle = a.keyed.get("oracle").map(|o| count(o)).transpose()?;
                    Ok(ConstructionTree::descent(resolve(a.at(0), env)?, sheaf, counts(a.at(2))?, oracle))
                }
                "blowup" => blowup(sig(0, &["unknown", "X", "Y", "Z", "E", "split", "maps"])?, env),
                "P" | "projective_space" => lib("projective_space", &[LibraryArg::Int(int(sig(1, &[])?.at(0))?)]),
                "Gr" | "grassmannian" => {
                    let a = sig(2, &[])?;
                    lib("grassmannian", &[LibraryArg::Int(int(a.at(0))?), LibraryArg::Int(int(a.at(1))?)])
                }
                "flag" => {
                    let a = sig(2, &[])?;
                    lib("flag", &[LibraryArg::Int(int(a.at(0))?), LibraryArg::Ints(ints(a.at(1))?)])
                }
                "hirzebruch" => lib("hirzebruch", &[LibraryArg::Int(int(sig(1, &[])?.at(0))?)]),
                "cusp" | "node" | "cone_of_P1" => {
                    sig(0, &[])?;
                    lib(name, &[])
                }
                "projective_cone" => {
                    let a = sig(2, &[])?;
                    lib("projective_cone", &[LibraryArg::Tree(resolve(a.at(0), env)?), LibraryArg::Int(int(a.at(1))?)])
                }
                "schubert" => {
                    let a = sig(3, &[])?;
                    let mut datum = FiniteSchubertDatum::new(count(a.at(0))?, count(a.at(1))?, counts(a.at(2))?)
                        .map_err(core(t))?;
                    if env.normalize_j {
                        datum = datum.normalized();
                    }
                    finite_schubert_tree(&datum, env.group).map_err(core(t))
                }
                "affine_schubert" => {
                    let datum = CoweightDatum::new(ints(sig(1, &[])?.at(0))?).map_err(core(t))?;
                    affine_schubert_tree(&datum, env.group).map_err(core(t))
                }
                _ => bad(t, "a construction"),
            }
        }
        _ => bad(t, "a construction"),
    }
}

fn blowup(a: Args, env: &Env) -> Result<ConstructionTree, CliError> {
    let unknown = match a.keyed.get("unknown") {
        Some(u @ Term::Ident(s, _)) => Corner::from_label(s).map_or_else(|| bad(u, "a corner X, Y, Z or E"), Ok)?,
        Some(u) => return bad(u, "a corner X, Y, Z or E"),
        None => Corner::X,
    };
    let mut known = BTreeMap::new();
    for c in Corner::ALL {
        if let Some(sub) = a.keyed.get(c.label()) {
            known.insert(c, resolve(sub, env)?);
        }
    }
    let split = match a.keyed.get("split") {
        None => Split::None,
        Some(Term::Ident(s, _)) if s == "none" => Split::None,
        Some(Term::Ident(s, _)) if s == "retraction" => Split::Retraction,
        Some(Term::Ident(s, _)) if s == "section" => Split::Section,
        Some(other) => return bad(other, "`none`, `retraction` or `section`"),
    };
    let mut comparison_maps = BTreeMap::new();
    match a.keyed.get("maps") {
        None => {}
        Some(Term::Map(entries, _)) => {
            for (d, m) in entries {
                if comparison_maps.insert(*d, matrix(m)?).is_some() {
                    return bad(m, &format!("one map in degree {d}"));
                }
            }
        }
        Some(other) => return bad(other, "`{<degree>: matrix(..), ...}`"),
    }
    Ok(ConstructionTree::Blowup(BlowupSquare { known, unknown, split, comparison_maps }))
}

fn fits(v: &Int) -> Result<i64, Error> {
    v.to_i64().ok_or_else(|| Error::Range(format!("matrix entry {v} does not fit the script syntax")))
}

/// The explicit expression of a tree; `resolve` maps it back to `t`.
pub fn tree_to_term(t: &ConstructionTree) -> Result<Term, Error> {
    let pos = |v: Term| Arg::pos(v);
    Ok(match t {
        ConstructionTree::Point => Term::ident("pt"),
        ConstructionTree::HenselianBase { p } => Term::call(
            "henselian",
            vec![pos(Term::int(i64::try_from(*p).map_err(|_| Error::Range(format!("p = {p}")))?))],
        ),
        ConstructionTree::Disjoint(cs) => {
            Term::call("disjoint", cs.iter().map(|c| tree_to_term(c).map(pos)).collect::<Result<_, _>>()?)
        }
        ConstructionTree::FlagBundle { base, bundle, d_vec } => Term::call(
            "flag_bundle",
            vec![pos(tree_to_term(base)?), pos(bundle_term(bundle)), pos(Term::ints(d_vec.iter().map(|&d| d as i64)))],
        ),
        ConstructionTree::StratifiedDescent { total_space, sheaf, d_vec, oracle_rank } => {
            let (e1, e0) = sheaf.presentation_ranks;
            let mut args = vec![
                pos(tree_to_term(total_space)?),
                pos(Term::call(
                    "sheaf",
                    [sheaf.generic_rank, e1, e0].iter().map(|&v| pos(Term::int(v as i64))).collect(),
                )),
                pos(Term::ints(d_vec.iter().map(|&d| d as i64))),
            ];
            if let Some(o) = oracle_rank {
                args.push(Arg::kw("oracle", Term::int(*o as i64)));
            }
            Term::call("descent", args)
        }
        ConstructionTree::Blowup(sq) => {
            let mut args = vec![Arg::kw("unknown", Term::ident(sq.unknown.label()))];
            for (c, sub) in &sq.known {
                args.push(Arg::kw(c.label(), tree_to_term(sub)?));
            }
            args.push(Arg::kw("split", Term::ident(sq.split.keyword())));
            if !sq.comparison_maps.is_empty() {
                let mut entries = Vec::new();
                for (d, m) in &sq.comparison_maps {
                    let rows = m
                        .row_vecs()
                        .iter()
                        .map(|r| r.iter().map(fits).collect::<Result<Vec<_>, _>>().map(Term::ints))
                        .collect::<Result<Vec<_>, _>>()?;
                    let dims = [m.rows(), m.cols()].map(|v| pos(Term::int(v as i64)));
                    let [r, c] = dims;
                    entries.push((*d, Term::call("matrix", vec![r, c, pos(Term::list(rows))])));
                }
                args.push(Arg::kw("maps", Term::Map(entries, Pos::default())));
            }
            Term::call("blowup", args)
        }
    })
}

fn bundle_term(b: &BundleDatum) -> Term {
    let chars = |cs: &Vec<Vec<i64>>| Term::list(cs.iter().map(|c| Term::ints(c.iter().copied())).collect());
    let twists = |ts: &Vec<i64>| Term::ints(ts.iter().copied());
    match (&b.split_characters, &b.twist_labels) {
        (None, None) => Term::call("plain", vec![Arg::pos(Term::int(b.rank as i64))]),
        (Some(cs), None) if cs.len() == b.rank => Term::call("split", vec![Arg::pos(chars(cs))]),
        (None, Some(ts)) if ts.len() == b.rank => Term::call("twisted", vec![Arg::pos(twists(ts))]),
        (cs, ts) => {
            let mut args = vec![Arg::pos(Term::int(b.rank as i64))];
            if let Some(cs) = cs {
                args.push(Arg::kw("chars", chars(cs)));
            }
            if let Some(ts) = ts {
                args.push(Arg::kw("twists", twists(ts)));
            }
            Term::call("bundle", args)
        }
    }
}

/// Script text for a tree.
pub fn print_tree(t: &ConstructionTree) -> Result<String, Error> {
    Ok(tree_to_term(t)?.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Lexer;
    use simploc_core::dsl::library::*;

    fn eval(src: &str, group: &GroupDatum) -> Result<ConstructionTree, CliError> {
        let term = Lexer::new(src, 1, 1).term()?;
        resolve(&term, &Env { trees: &BTreeMap::new(), group, normalize_j: false })
    }

    #[test]
    fn library_aliases() {
        let g = GroupDatum::torus(2);
        assert_eq!(eval("P(1)", &g).unwrap(), projective_space(1, &g));
        assert_eq!(eval("Gr(4, 2)", &g).unwrap(), grassmannian(4, 2, &g));
        assert_eq!(eval("node", &g).unwrap(), node(&g));
        assert_eq!(eval("node()", &g).unwrap(), node(&g));
        assert_eq!(eval("projective_cone(P(1), 2)", &g).unwrap(), cone_of_p1(&g));
    }

    #[test]
    fn explicit_round_trip() {
        let g = GroupDatum::torus(2);
        for t in [node(&g), cone_of_p1(&g), hirzebruch(3, &g), flag(4, vec![1, 2], &g), cusp(&g)] {
            let s = print_tree(&t).unwrap();
            assert_eq!(eval(&s, &g).unwrap(), t, "{s}");
        }
        let node_text = print_tree(&node(&GroupDatum::trivial())).unwrap();
        assert_eq!(
            node_text,
            "blowup(unknown=X, Y=flag_bundle(pt, split([[], []]), [1]), Z=pt, E=disjoint(pt, pt), split=none, \
             maps={0: matrix(2, 3, [[1, 1, 1], [1, 1, 1]])})"
        );
    }

    #[test]
    fn shape_errors_have_positions() {
        let g = GroupDatum::trivial();
        match eval("flag_bundle(pt, plain(2), 1)", &g) {
            Err(CliError::Syntax { pos, .. }) => assert_eq!(pos.col, 27),
            other => panic!("{other:?}"),
        }
        assert!(matches!(eval("P(-1)", &g), Err(CliError::Core { error: Error::Range(_), .. })));
        assert!(matches!(eval("schubert(3, 2, [0, 2, 2, 2])", &g), Err(CliError::Core { .. })));
        assert!(matches!(eval("blowup(unknown=W)", &g), Err(CliError::Syntax { .. })));
    }
}
