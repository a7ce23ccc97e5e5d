//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use common::{all_j_sequences, brute_affine, brute_finite, dominant, library_trees, naive_rank, TreeGen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simploc_cli::{run_source, Options, Row};
use simploc_core::coeff::{builtin_table, parse_table, snf, FgAbGroup, Matrix};
use simploc_core::dsl::library::{cone_of_p1, node, projective_space};
use simploc_core::dsl::{classify, ClassTag, ConstructionTree, Corner, MembershipClass};
use simploc_core::engine::{
    compute_degree0, compute_graded, refute_membership_b, ring_degree0, run_preset, sod_count, verify_comparison,
    Elsewhere, FiberProfile, Preset, Shape, VerdictKind,
};
use simploc_core::group_rep::{elementary_symmetric_class, representation_ring, GroupDatum};
use simploc_core::schubert::*;
use simploc_core::{Int, RepElem};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn scripts() -> Options {
    Options { normalize_j: false, base_dir: PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/scripts") }
}

fn script(name: &str) -> String {
    std::fs::read_to_string(scripts().base_dir.join(name)).unwrap()
}

fn rank(t: &ConstructionTree, g: &GroupDatum) -> usize {
    compute_degree0(t, g).unwrap().rank
}

fn node_negative_degree() -> Check {
    let g = GroupDatum::trivial();
    let unit = builtin_table("unit").unwrap();
    let v = compute_graded(&node(&g), &g, &unit, -4..=0).map_err(|e| e.to_string())?;
    ensure!(v.value_at(-1).unwrap() == FgAbGroup::free(1), "degree -1 is {}", v.value_at(-1).unwrap());
    for d in -4..=-2 {
        ensure!(v.value_at(d).unwrap().is_zero(), "degree {d} is {}", v.value_at(d).unwrap());
    }
    let ev = refute_membership_b(&node(&g)).map_err(|e| e.to_string())?.ok_or("no NotInB evidence")?;
    ensure!(ev.degree == -1 && ev.group == FgAbGroup::free(1), "evidence {ev}");

    let out = run_source(&script("node.sim"), &scripts());
    ensure!(out.exit_code == 0, "node.sim exited {}", out.exit_code);
    let degrees: Vec<(i64, String)> = out
        .records
        .iter()
        .filter_map(|r| match &r.row {
            Row::Degree { degree, value, .. } => Some((*degree, value.clone())),
            _ => None,
        })
        .collect();
    ensure!(degrees.contains(&(-1, "Z".into())), "script rows {degrees:?}");
    ensure!(degrees.iter().filter(|(d, _)| *d <= -2).all(|(_, v)| v == "0"), "script rows {degrees:?}");
    let refuted = out.records.iter().any(|r| matches!(&r.row, Row::Class { not_in_b: Some(_), .. }));
    ensure!(refuted, "classify row carries no evidence");
    Ok(())
}

fn cone_of_p1_table() -> Check {
    let g = GroupDatum::trivial();
    let cone = cone_of_p1(&g);
    ensure!(rank(&cone, &g) == 3, "degree-0 rank {}", rank(&cone, &g));
    let table = parse_table(&script("kq_rational.tbl")).map_err(|e| e.to_string())?;
    let v = compute_graded(&cone, &g, &table, 0..=6).map_err(|e| e.to_string())?;
    ensure!(matches!(&v.shape, Shape::Formal { d0, .. } if d0.rank == 3), "shape is not formal of rank 3");
    for i in 0..=6 {
        ensure!(v.value_at(i).unwrap() == table.at(i).tensor_free(3), "degree {i}");
    }

    let out = run_source(&script("cone.sim"), &scripts());
    ensure!(out.exit_code == 0, "cone.sim exited {}: {}", out.exit_code, out.stderr);
    let mut rows = 0;
    for r in &out.records {
        let Row::Report { degree, k, kh, hc, .. } = &r.row else { continue };
        if *degree < 1 {
            ensure!(k.is_none(), "K given in degree {degree}");
            continue;
        }
        let want_kh = if *degree == 5 { "Q^3" } else { "0" };
        let want_hc = if degree % 2 == 1 { "Q" } else { "0" };
        let want_k = match degree {
            5 => "Q^4",
            d if d % 2 == 1 => "Q",
            _ => "0",
        };
        ensure!(kh == want_kh, "KH_{degree} = {kh}");
        ensure!(hc.as_deref() == Some(want_hc), "HC_{degree} = {hc:?}");
        ensure!(k.as_deref() == Some(want_k), "K_{degree} = {k:?}");
        rows += 1;
    }
    ensure!(rows == 6, "{rows} positive report rows");
    Ok(())
}

fn affine_matches_cone() -> Check {
    let g = GroupDatum::torus(2);
    let t = affine_schubert_tree(&CoweightDatum::new(vec![2, 0]).unwrap(), &g).map_err(|e| e.to_string())?;
    let ConstructionTree::StratifiedDescent { total_space, oracle_rank, .. } = &t else {
        return Err(format!("expected a descent node, got {}", t.kind()));
    };
    ensure!(rank(total_space, &g) == 4, "Y rank {}", rank(total_space, &g));
    ensure!(*oracle_rank == Some(3), "oracle {oracle_rank:?}");
    ensure!(rank(&t, &g) == rank(&cone_of_p1(&g), &g), "cone rank differs");
    Ok(())
}

fn verdict_presets() -> Check {
    let mut checked = 0;
    for r in 0..=2 {
        let g = GroupDatum::torus(r);
        for (name, t) in library_trees(&g) {
            let class = classify(&t).tag;
            let kind = |p: Preset| run_preset(p, &t, &g).unwrap().verdict().map(|v| v.kind.clone());
            match class {
                ClassTag::C => {
                    ensure!(
                        kind(Preset::CyclotomicFp) == Some(VerdictKind::EquivalenceAllDegrees),
                        "cyclotomic on {name}"
                    );
                }
                ClassTag::B => {
                    ensure!(kind(Preset::GoodwillieJonesQ) == Some(VerdictKind::IsoInDegree(0)), "GJ on {name}");
                    ensure!(
                        kind(Preset::ParshinFq) == Some(VerdictKind::Vanishing { except: vec![0] }),
                        "Parshin on {name}"
                    );
                }
                other => return Err(format!("{name} has class {other}")),
            }
            checked += 1;
        }
    }
    ensure!(checked == 30, "{checked} trees");

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let tags = [ClassTag::B, ClassTag::C, ClassTag::Cp(2), ClassTag::Cp(3)];
    for _ in 0..200 {
        let nonzero = loop {
            let g = FgAbGroup::new(
                rng.gen_range(0..=2),
                (0..rng.gen_range(0..=2)).map(|_| Int::from(rng.gen_range(2..=9))),
            );
            if !g.is_zero() {
                break g;
            }
        };
        let fiber = FiberProfile {
            known: [(0, FgAbGroup::zero()), (-1, nonzero)].into(),
            elsewhere: if rng.gen_bool(0.5) { Elsewhere::Unknown } else { Elsewhere::Zero },
        };
        let class =
            MembershipClass { tag: tags[rng.gen_range(0..4)].clone(), assumed_oracles: vec![], b_refuted: None };
        for p in Preset::ALL {
            let target = p.fiber().and_then(|(_, t)| t);
            for t in [target, Some(0)] {
                let c = verify_comparison(&fiber, &class, t);
                ensure!(c.verdict().is_none(), "{} gave {:?} on {fiber:?}", p.name(), c);
            }
        }
    }
    Ok(())
}

fn formality_suite() -> Check {
    let tables = [builtin_table("unit").unwrap(), builtin_table("bott").unwrap()];
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.gen_range(0..=3);
        let g = GroupDatum::torus(dim);
        let t = TreeGen { dim, class_b: true }.tree(&mut rng, 6);
        ensure!(t.depth() <= 6 && classify(&t).tag == ClassTag::B, "seed {seed}: not a class B tree of depth ≤ 6");
        let n = naive_rank(&t);
        for table in &tables {
            let v = compute_graded(&t, &g, table, -4..=4).map_err(|e| format!("seed {seed}: {e}"))?;
            for d in -4..=4 {
                let oracle = (0..n).fold(FgAbGroup::zero(), |acc, _| acc.direct_sum(&table.at(d)).unwrap());
                ensure!(v.value_at(d).unwrap() == oracle, "seed {seed}, table {}, degree {d}", table.name());
            }
        }
        for (path, node) in t.walk() {
            let ConstructionTree::Blowup(sq) = node else { continue };
            let r = |c: Corner| if c == sq.unknown { rank(node, &g) } else { rank(&sq.known[&c], &g) };
            ensure!(r(Corner::X) + r(Corner::E) == r(Corner::Y) + r(Corner::Z), "seed {seed}: additivity at {path}");
        }
    }
    Ok(())
}

fn combinatorial_oracles() -> Check {
    for n in 1..=8 {
        for (d, j) in all_j_sequences(n) {
            let datum = FiniteSchubertDatum::new(n, d, j.clone()).map_err(|e| e.to_string())?;
            let cells = cell_count_finite(&datum);
            ensure!(cells == Int::from(brute_finite(n, d, &j)), "finite {j:?}");
            ensure!(cells <= datum.tower_rank(), "finite {j:?} exceeds tower rank");
        }
        for d in 0..=n {
            let gr = FiniteSchubertDatum::grassmannian(n, d).unwrap();
            ensure!(cell_count_finite(&gr) == sod_count(n, &[d]).unwrap(), "Gr({d}, {n})");
        }
    }
    for n in 1..=4 {
        for mu in dominant(n, 6) {
            let datum = CoweightDatum::new(mu.clone()).unwrap();
            let cells = affine_cell_count(&datum);
            ensure!(cells == Int::from(brute_affine(&mu)), "affine {mu:?}");
            ensure!(cells <= affine_tower_rank(&datum).unwrap(), "affine {mu:?} exceeds tower rank");
        }
    }
    Ok(())
}

fn det(a: &[Vec<i64>]) -> i64 {
    match a.len() {
        0 => 1,
        1 => a[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = a[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
                (if j % 2 == 0 { 1 } else { -1 }) * a[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Cokernel from determinantal divisors `d_k = gcd of k × k minors`.
fn cokernel_by_minors(a: &[Vec<i64>], rows: usize, cols: usize) -> FgAbGroup {
    let mut prev = 1;
    let mut factors = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut dk = 0;
        for r in subsets(rows, k) {
            for c in subsets(cols, k) {
                let m: Vec<Vec<i64>> = r.iter().map(|&i| c.iter().map(|&j| a[i][j]).collect()).collect();
                dk = gcd(dk, det(&m));
            }
        }
        if dk == 0 {
            break;
        }
        factors.push(Int::from(dk / prev));
        prev = dk;
    }
    FgAbGroup::new(rows - factors.len(), factors)
}

fn smith_forms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..200 {
        let (rows, cols) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let m = Matrix::<Int>::from_rows(a.iter().map(|r| r.iter().map(|&v| Int::from(v)).collect()).collect(), cols)
            .unwrap();
        let s = snf(&m);
        ensure!(&(&s.left * &m) * &s.right == s.reduced, "case {case}: L·A·R ≠ D for {m}");
        for i in 0..rows {
            for j in 0..cols {
                ensure!(i == j || s.reduced[(i, j)] == Int::from(0), "case {case}: D not diagonal");
            }
        }
        ensure!(s.left.determinant().magnitude() == &1u32.into(), "case {case}: L not unimodular");
        ensure!(s.right.determinant().magnitude() == &1u32.into(), "case {case}: R not unimodular");
        let want = cokernel_by_minors(&a, rows, cols);
        ensure!(s.cokernel() == want, "case {case}: cokernel {} vs {want} for {m}", s.cokernel());
    }
    Ok(())
}

fn ring_presentations() -> Check {
    for n in 1..=5 {
        for r in [0, n, n + 1] {
            let g = GroupDatum::torus(r);
            let p = ring_degree0(&projective_space(n - 1, &g), &g).map_err(|e| e.to_string())?;
            ensure!(p.augmented_rank().unwrap() == n, "P^{} over torus {r}: augmented rank", n - 1);
            if r < n {
                continue;
            }
            let ring = representation_ring(&g).unwrap();
            let chars: Vec<_> = (0..n).map(|k| g.basis_character(k).unwrap()).collect();
            let [factor] = p.factors.as_slice() else { return Err("expected one tower".into()) };
            let [rel] = factor.relations.as_slice() else { return Err("expected one relation".into()) };
            for k in 0..=n {
                let e: RepElem = elementary_symmetric_class(&g, &chars, k).unwrap();
                let signed = if k % 2 == 0 { e } else { -e };
                ensure!(rel.coefficient(n - k) == signed, "P^{}: coefficient of x^{}", n - 1, n - k);
            }
            ensure!(rel.coefficient(n) == ring.one(), "not monic");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("node negative K-group", node_negative_degree),
        ("cone of P1 formal table and report", cone_of_p1_table),
        ("affine/finite cross-check", affine_matches_cone),
        ("verdict presets", verdict_presets),
        ("formality property suite", formality_suite),
        ("combinatorial oracles", combinatorial_oracles),
        ("Smith normal form", smith_forms),
        ("ring presentation oracle", ring_presentations),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match result {
            Ok(()) => println!("PASS criterion {}: {name}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
