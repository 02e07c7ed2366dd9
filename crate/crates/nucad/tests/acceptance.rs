//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nucad::oracle::{build_open_cad, sturm_count, verify_bpolys_in_closure, verify_truth_invariance, verify_weak_decomposition};
use nucad::{build_parallel, treefile};
use nucad_core::formula::{parse_formula, parse_poly};
use nucad_core::polynomial::{discriminant, factor_set, resultant};
use nucad_core::realroots::isolate_real_roots;
use nucad_core::{
    build, perturb_sample, stats, Bound, Formula, Label, Membership, MergeOutcome, NuCadTree, OpenCell, Poly,
    Rational, SplitPolicy, UPoly,
};

const SAMPLES: usize = 10_000;
const PER_LEAF: usize = 100;
const PER_CELL: usize = 500;
const SEED: u64 = 1;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn xy(text: &str) -> Poly {
    parse_poly(text, &["x", "y"]).expect("test polynomial parses")
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {t:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn example_tree() -> (Formula, NuCadTree) {
    let f = parse_formula(common::EXAMPLE).expect("example parses");
    let t = build(&f, &SplitPolicy::default()).expect("example builds");
    (f, t)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (f1, f2) = (xy("16y - 16x^2 - 8x - 1"), xy("x^2 + y^2 - 1"));
    let f3 = xy("256x^4 + 256x^3 + 352x^2 + 16x - 255");
    let res = resultant(&f1, &f2, 1).map_err(|e| e.to_string())?.normalize();
    check(res == f3, || format!("resultant normalizes to {res:?}"))?;
    let disc = discriminant(&f2, 1).map_err(|e| e.to_string())?;
    let factors: BTreeSet<Poly> = factor_set(&[disc]).map_err(|e| e.to_string())?.into_iter().collect();
    let expected: BTreeSet<Poly> = [xy("x + 1"), xy("x - 1")].into_iter().collect();
    check(factors == expected, || format!("discriminant factors {factors:?}"))?;
    within(Duration::from_secs(1), start)?;
    Ok("res(f1, f2, y) = f3 and disc(f2, y) factors to {x+1, x-1}".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (_, t) = example_tree();
    let s = stats(&t);
    check(s.leaves == 7, || format!("{} leaves", s.leaves))?;
    let factors: BTreeSet<Poly> = t.nodes().values().flat_map(|n| n.cell.p().iter().cloned()).collect();
    let expected: BTreeSet<Poly> = [
        "16y - 16x^2 - 8x - 1",
        "x^2 + y^2 - 1",
        "256x^4 + 256x^3 + 352x^2 + 16x - 255",
        "x + 1",
        "x - 1",
    ]
    .into_iter()
    .map(xy)
    .collect();
    check(factors == expected, || format!("factors {factors:?}"))?;
    let x: Label = "2X".parse().expect("label");
    let upper = &t.get(&x).ok_or("no 2X child")?.cell.level(2).upper;
    let want = Bound::Root {
        poly: xy("16y - 16x^2 - 8x - 1"),
        index: 1,
    };
    check(*upper == want, || format!("2X upper bound {upper}"))?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("7 leaves, factors f1..f5, 2X bounded above by (f1, 1); {} cells", s.cells))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let (f, t) = example_tree();
    let cad = build_open_cad(&f).map_err(|e| e.to_string())?;
    let leaves = stats(&t).leaves;
    check(cad == 16 && cad > leaves, || format!("open CAD has {cad} cells, NuCAD {leaves} leaves"))?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("open CAD {cad} cells > NuCAD {leaves} leaves"))
}

struct Built {
    name: String,
    formula: Formula,
    tree: NuCadTree,
}

fn corpus_trees() -> Result<Vec<Built>, String> {
    common::corpus()
        .into_iter()
        .map(|(name, formula)| {
            let tree = build(&formula, &SplitPolicy::default()).map_err(|e| format!("{name}: {e}"))?;
            Ok(Built { name, formula, tree })
        })
        .collect()
}

fn criterion_4(corpus: &[Built]) -> Outcome {
    let mut slowest = Duration::ZERO;
    for b in corpus {
        let start = Instant::now();
        let r = verify_truth_invariance(&b.tree, &b.formula, SAMPLES, PER_LEAF, SEED);
        check(r.passed, || format!("{}: {:?}", b.name, &r.violations[..r.violations.len().min(3)]))?;
        within(Duration::from_secs(60), start).map_err(|e| format!("{}: {e}", b.name))?;
        slowest = slowest.max(start.elapsed());
    }
    Ok(format!(
        "{} formulas x {SAMPLES} samples (+{PER_LEAF} per leaf), 0 violations, slowest {slowest:.1?}",
        corpus.len()
    ))
}

fn criterion_5(corpus: &[Built]) -> Outcome {
    let mut resamples = 0;
    for b in corpus {
        let r = verify_weak_decomposition(&b.tree, SAMPLES, PER_CELL, SEED);
        check(r.passed, || format!("{}: {:?}", b.name, &r.violations[..r.violations.len().min(3)]))?;
        resamples += r.resamples;
    }
    Ok(format!(
        "{} formulas x {SAMPLES} samples (+{PER_CELL} per cell), exactly one leaf each; {resamples} boundary resamples",
        corpus.len()
    ))
}

fn criterion_6(corpus: &[Built]) -> Outcome {
    let mut checked = 0;
    for b in corpus {
        let r = verify_bpolys_in_closure(&b.tree, &b.formula, 10_000);
        check(r.passed, || format!("{}: {:?}", b.name, r.violations))?;
        checked += r.samples;
    }
    Ok(format!("{checked} bound polynomials, all in the projection closure"))
}

fn criterion_7() -> Outcome {
    let q = |n: i64| Rational::from_integer(BigInt::from(n));
    let cell = OpenCell::universe(vec![q(0), q(0)]);
    let f = xy("x*y + x");
    match cell.merge_poly(&f).map_err(|e| e.to_string())? {
        MergeOutcome::Fail { poly, .. } if poly == f => {}
        other => return Err(format!("merge at the origin gave {other:?}")),
    }
    let moved = perturb_sample(&cell, &f).map_err(|e| e.to_string())?;
    check(moved == vec![q(-1), q(0)], || format!("perturbed to {moved:?}"))?;
    let inside = cell.contains(&moved).map_err(|e| e.to_string())?;
    check(inside == Membership::Inside, || format!("{inside:?}"))?;
    let moved_cell = cell.with_sample(moved);
    match moved_cell.merge_poly(&f).map_err(|e| e.to_string())? {
        MergeOutcome::Merged(c) => {
            check(c.contains(c.sample()).map_err(|e| e.to_string())? == Membership::Inside, || {
                "merged cell lost its sample".into()
            })?;
        }
        other => return Err(format!("merge after perturbation gave {other:?}")),
    }
    Ok("x*y + x at (0, 0): L = {x}, i = 1, zeta = -inf, new sample (-1, 0), merge succeeds".into())
}

fn random_upoly(rng: &mut ChaCha8Rng) -> UPoly {
    if rng.gen() {
        let d = rng.gen_range(1..=8);
        let mut c: Vec<BigInt> = (0..=d).map(|_| BigInt::from(rng.gen_range(-20..=20))).collect();
        c[d] = BigInt::from(rng.gen_range(1..=20));
        UPoly::new(c)
    } else {
        // Products of small linear factors, with repeats, for many and
        // multiple real roots.
        let mut p = UPoly::from_i64(&[1]);
        let d = rng.gen_range(1..=8);
        for _ in 0..d {
            let a = rng.gen_range(1..=4);
            let b = rng.gen_range(-6..=6);
            p = p.mul(&UPoly::from_i64(&[b, a]));
        }
        p
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut total_roots = 0;
    for i in 0..100 {
        let u = random_upoly(&mut rng);
        let p = Poly::from_univariate(1, 0, &u);
        let roots = isolate_real_roots(&u).map_err(|e| e.to_string())?;
        let count = sturm_count(&p, None, None).map_err(|e| e.to_string())?;
        check(roots.len() == count, || {
            format!("polynomial {i}: isolation {} roots, Sturm {count}", roots.len())
        })?;
        for r in &roots {
            if r.is_exact() {
                check(u.sign_at(r.lo()).is_eq(), || format!("polynomial {i}: exact root is not a root"))?;
            } else {
                let c = sturm_count(&p, Some(r.lo()), Some(r.hi())).map_err(|e| e.to_string())?;
                check(c == 1, || format!("polynomial {i}: interval holds {c} roots"))?;
            }
        }
        total_roots += count;
    }
    Ok(format!("100 polynomials, {total_roots} roots, every count and interval agrees"))
}

fn criterion_9(corpus: &[Built]) -> Outcome {
    for b in corpus {
        let one = treefile::to_string(&b.tree);
        let policy = SplitPolicy {
            workers: 4,
            ..SplitPolicy::default()
        };
        let four = build_parallel(&b.formula, &policy).map_err(|e| format!("{}: {e}", b.name))?;
        check(treefile::to_string(&four) == one, || format!("{}: tree files differ", b.name))?;
    }
    Ok(format!("{} formulas, 1 and 4 workers give identical tree files", corpus.len()))
}

fn criterion_10(corpus: &[Built]) -> Outcome {
    let cap = SplitPolicy::default().cell_cap;
    let largest = corpus.iter().map(|b| stats(&b.tree).cells).max().unwrap_or(0);
    check(largest <= cap, || format!("{largest} cells exceed the cap"))?;
    Ok(format!("{} builds finished; largest {largest} cells, cap {cap}", corpus.len()))
}

fn main() -> ExitCode {
    let corpus_start = Instant::now();
    let corpus = corpus_trees();
    let corpus_time = corpus_start.elapsed();
    let with_corpus = |f: fn(&[Built]) -> Outcome| -> Outcome {
        match &corpus {
            Ok(c) => f(c),
            Err(e) => Err(format!("corpus build failed: {e}")),
        }
    };
    let criteria: Vec<Criterion> = vec![
        ("resultant golden", Box::new(criterion_1)),
        ("example build", Box::new(criterion_2)),
        ("baseline comparison", Box::new(criterion_3)),
        ("truth invariance", Box::new(move || with_corpus(criterion_4))),
        ("weak decomposition", Box::new(move || with_corpus(criterion_5))),
        ("bound polynomials in closure", Box::new(move || with_corpus(criterion_6))),
        ("perturbation", Box::new(criterion_7)),
        ("isolation vs Sturm", Box::new(criterion_8)),
        ("schedule independence", Box::new(move || with_corpus(criterion_9))),
        ("termination under cap", Box::new(move || with_corpus(criterion_10))),
    ];
    println!("corpus: {} formulas built in {corpus_time:.1?}", corpus.as_ref().map_or(0, Vec::len));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} ({t:.1?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why} ({t:.1?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
