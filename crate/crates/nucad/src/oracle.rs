//! Independent checks of built trees: Sturm root counting, sampling
//! suites for truth invariance and weak decomposition, the projection
//! closure check, and a classical open CAD cell count as a baseline.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use nucad_core::onecell::CellError;
use nucad_core::polynomial::{discriminant, factor_set, resultant, PolyError};
use nucad_core::realroots::{isolate_real_roots, rational_between_bounds, RootError};
use nucad_core::{locate, FactorSet, Formula, Label, Location, Membership, NuCadTree, OpenCell, Poly, Rational, RealRoot};

use crate::treefile::rational_text;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial involves more than one variable")]
    NotUnivariate,
    #[error("empty interval")]
    EmptyInterval,
    #[error("baseline CAD supports at most 3 variables, formula has {0}")]
    Unsupported(usize),
    #[error("projection closure exceeds {0} polynomials")]
    ClosureCap(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Cell(#[from] CellError),
}

// ---------------------------------------------------------------------------
// Sturm sequences

type Dense = Vec<Rational>;

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn rem(a: &Dense, b: &Dense) -> Dense {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let q = r.last().expect("nonempty") / lb;
        let shift = r.len() - 1 - db;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &q * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn derivative(p: &Dense) -> Dense {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect()
}

fn sign_at(p: &Dense, x: &Rational) -> Ordering {
    p.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
        .cmp(&Rational::zero())
}

fn sign_at_infinity(p: &Dense, positive: bool) -> Ordering {
    let lc = p.last().expect("nonzero").cmp(&Rational::zero());
    if positive || p.len() % 2 == 1 {
        lc
    } else {
        lc.reverse()
    }
}

fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of the univariate `p` in `(lo, hi]`,
/// with `None` for an infinite end.
pub fn sturm_count(p: &Poly, lo: Option<&Rational>, hi: Option<&Rational>) -> Result<usize, OracleError> {
    if p.is_zero() {
        return Err(OracleError::ZeroPolynomial);
    }
    if let (Some(l), Some(h)) = (lo, hi) {
        if l >= h {
            return Err(OracleError::EmptyInterval);
        }
    }
    let (_, u) = p.to_univariate().ok_or(OracleError::NotUnivariate)?;
    let p0: Dense = trim(u.coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect());
    if p0.len() <= 1 {
        return Ok(0);
    }
    let mut seq = vec![p0.clone(), derivative(&p0)];
    loop {
        let n = seq.len();
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    // Dividing through by the last element (the gcd with the derivative)
    // makes the count refer to distinct roots even at roots of p.
    let g = seq.last().expect("nonempty").clone();
    let at = |x: Option<&Rational>, positive: bool| -> usize {
        match x {
            None => variations(seq.iter().map(|s| sign_at_infinity(s, positive))),
            Some(x) => {
                let gs = sign_at(&g, x);
                if gs != Ordering::Equal {
                    variations(seq.iter().map(|s| {
                        let v = sign_at(s, x);
                        if gs == Ordering::Less {
                            v.reverse()
                        } else {
                            v
                        }
                    }))
                } else {
                    let reduced: Vec<Dense> = seq.iter().map(|s| exact_quotient(s, &g)).collect();
                    variations(reduced.iter().map(|s| sign_at(s, x)))
                }
            }
        }
    };
    Ok(at(lo, false) - at(hi, true))
}

fn exact_quotient(a: &Dense, b: &Dense) -> Dense {
    let db = b.len() - 1;
    if a.len() <= db {
        return vec![Rational::zero()];
    }
    let mut r = a.clone();
    let mut q = vec![Rational::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &b[db];
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &c * bc;
        }
        q[k] = c;
    }
    q
}

// ---------------------------------------------------------------------------
// Random points

/// A random rational: usually `p/q` in `[-8, 8]`, sometimes far out.
pub fn random_coordinate(rng: &mut impl Rng) -> Rational {
    if rng.gen_ratio(1, 8) {
        let k: i64 = rng.gen_range(1..=128);
        let r = Rational::new(BigInt::from(1024), BigInt::from(k));
        return if rng.gen() { r } else { -r };
    }
    let q: i64 = rng.gen_range(1..=32);
    let p: i64 = rng.gen_range(-8 * q..=8 * q);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn random_point(n: usize, rng: &mut impl Rng) -> Vec<Rational> {
    (0..n).map(|_| random_coordinate(rng)).collect()
}

fn positive_offset(rng: &mut impl Rng) -> Rational {
    let c = random_coordinate(rng).abs();
    if c.is_zero() {
        Rational::new(BigInt::one(), BigInt::from(64))
    } else {
        c
    }
}

/// Separates two real roots known to be distinct and returns rationals
/// `a < b` with `lo <= a` and `b <= hi` that are close to the roots.
fn separate(lo: &RealRoot, hi: &RealRoot) -> (Rational, Rational) {
    let (mut l, mut h) = (lo.clone(), hi.clone());
    while l.hi() >= h.lo() {
        if l.width() >= h.width() && !l.is_exact() {
            l = l.refine();
        } else {
            h = h.refine();
        }
    }
    let gap = h.lo() - l.hi();
    let fine = &gap / Rational::from_integer(BigInt::from(64));
    let l = l.refine_to(&fine);
    let h = h.refine_to(&fine);
    (l.hi().clone(), h.lo().clone())
}

/// A random point strictly inside `cell`, built level by level.
pub fn random_point_in(cell: &OpenCell, rng: &mut impl Rng) -> Result<Vec<Rational>, OracleError> {
    let mut point: Vec<Rational> = Vec::with_capacity(cell.dimension());
    for b in cell.bounds() {
        let lo = b.lower.realize(&point)?;
        let hi = b.upper.realize(&point)?;
        let x = match (lo, hi) {
            (None, None) => random_coordinate(rng),
            (Some(l), None) => l.hi() + positive_offset(rng),
            (None, Some(h)) => h.lo() - positive_offset(rng),
            (Some(l), Some(h)) => {
                let (a, b) = separate(&l, &h);
                let m: i64 = 1 << 16;
                let k: i64 = rng.gen_range(1..m);
                &a + (&b - &a) * Rational::new(BigInt::from(k), BigInt::from(m))
            }
        };
        point.push(x);
    }
    Ok(point)
}

fn point_text(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(rational_text).collect();
    format!("({})", parts.join(", "))
}

fn label_text(l: &Label) -> String {
    if l.is_root() {
        "λ".into()
    } else {
        l.to_string()
    }
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub samples: usize,
    pub resamples: usize,
    pub violations: Vec<String>,
    pub passed: bool,
}

impl VerificationReport {
    fn new(check: &str) -> Self {
        VerificationReport {
            check: check.into(),
            samples: 0,
            resamples: 0,
            violations: Vec::new(),
            passed: true,
        }
    }

    fn absorb(&mut self, o: SampleOutcome) {
        self.samples += 1;
        self.resamples += o.resamples;
        if let Some(v) = o.violation {
            self.violations.push(v);
        }
        self.passed = self.violations.is_empty();
    }

    /// Combines reports of the same check.
    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        self.samples += other.samples;
        self.resamples += other.resamples;
        self.violations.extend(other.violations);
        self.passed = self.violations.is_empty();
        self
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} samples, {} boundary resamples, {} violations)",
            self.check,
            if self.passed { "pass" } else { "FAIL" },
            self.samples,
            self.resamples,
            self.violations.len()
        )
    }
}

struct SampleOutcome {
    resamples: usize,
    violation: Option<String>,
}

const MAX_RESAMPLES: usize = 1000;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws with `draw` until `check` gives a verdict (`None` is a boundary
/// hit), then reports it.
fn sample_until<D, C>(rng: &mut ChaCha8Rng, mut draw: D, check: C) -> SampleOutcome
where
    D: FnMut(&mut ChaCha8Rng) -> Result<Vec<Rational>, OracleError>,
    C: Fn(&[Rational]) -> Result<Option<Option<String>>, OracleError>,
{
    for resamples in 0..MAX_RESAMPLES {
        let verdict = draw(rng).and_then(|p| check(&p).map(|v| v.map(|v| (p, v))));
        match verdict {
            Ok(Some((_, violation))) => return SampleOutcome { resamples, violation },
            Ok(None) => {}
            Err(e) => {
                return SampleOutcome {
                    resamples,
                    violation: Some(format!("error: {e}")),
                }
            }
        }
    }
    SampleOutcome {
        resamples: MAX_RESAMPLES,
        violation: Some("every draw hit a boundary".into()),
    }
}

/// Runs `samples` independent sampling jobs in parallel; job `i` uses
/// stream `stream_base + i` of the seeded generator.
fn run_jobs<F>(report: &mut VerificationReport, samples: usize, seed: u64, stream_base: u64, job: F)
where
    F: Fn(&mut ChaCha8Rng) -> SampleOutcome + Sync,
{
    let outcomes: Vec<SampleOutcome> = (0..samples)
        .into_par_iter()
        .map(|i| job(&mut rng_for(seed, stream_base + i as u64)))
        .collect();
    for o in outcomes {
        report.absorb(o);
    }
}

/// Points of `R^n` located in the tree must get the formula's value there
/// from their leaf; points drawn inside each leaf (`per_leaf` of them)
/// must evaluate to the leaf's cached value.
pub fn verify_truth_invariance(
    tree: &NuCadTree,
    formula: &Formula,
    samples: usize,
    per_leaf: usize,
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport::new("truth invariance");
    let n = tree.dimension();
    run_jobs(&mut report, samples, seed, 0, |rng| {
        sample_until(
            rng,
            |r| Ok(random_point(n, r)),
            |p| match locate(tree, p) {
                Ok(Location::Leaf { label, truth }) => Ok(Some(
                    (formula.evaluate(p) != truth)
                        .then(|| format!("{} in {} cached {truth}", point_text(p), label_text(&label))),
                )),
                Ok(Location::Boundary { .. }) => Ok(None),
                Err(e) => Ok(Some(Some(format!("{}: {e}", point_text(p))))),
            },
        )
    });
    for (k, (label, node)) in tree.leaves().enumerate() {
        let truth = node.truth.expect("leaf");
        let base = ((k as u64) + 1) << 32;
        run_jobs(&mut report, per_leaf, seed, base, |rng| {
            sample_until(
                rng,
                |r| random_point_in(&node.cell, r),
                |p| {
                    Ok(Some((formula.evaluate(p) != truth).then(|| {
                        format!("{} drawn in {} cached {truth}", point_text(p), label_text(label))
                    })))
                },
            )
        });
    }
    report
}

/// Leaves containing `point`, found by descending into every child that
/// contains it; `None` if the point is on the boundary of a visited cell.
fn containing_leaves(tree: &NuCadTree, point: &[Rational]) -> Result<Option<Vec<Label>>, OracleError> {
    let mut found = Vec::new();
    let mut stack = vec![Label::root()];
    while let Some(label) = stack.pop() {
        let node = tree.get(&label).expect("label from tree");
        if node.is_leaf() {
            found.push(label);
            continue;
        }
        for (child, c) in tree.children(&label) {
            match c.cell.contains(point)? {
                Membership::Inside => stack.push(child.clone()),
                Membership::Boundary { .. } => return Ok(None),
                Membership::Outside { .. } => {}
            }
        }
    }
    found.sort();
    Ok(Some(found))
}

/// Points of `R^n` must lie in exactly one leaf; points of each non-leaf
/// must lie in exactly one of its children; points of each X child must
/// lie in its parent. `per_cell` points are drawn inside each cell for the
/// last two.
pub fn verify_weak_decomposition(
    tree: &NuCadTree,
    samples: usize,
    per_cell: usize,
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport::new("weak decomposition");
    let n = tree.dimension();
    run_jobs(&mut report, samples, seed, 0, |rng| {
        sample_until(
            rng,
            |r| Ok(random_point(n, r)),
            |p| {
                Ok(containing_leaves(tree, p)?.map(|leaves| {
                    (leaves.len() != 1).then(|| {
                        let names: Vec<String> = leaves.iter().map(label_text).collect();
                        format!("{} in {} leaves [{}]", point_text(p), leaves.len(), names.join(", "))
                    })
                }))
            },
        )
    });
    for (k, (label, node)) in tree.nodes().iter().enumerate() {
        let base = ((k as u64) + 1) << 32;
        if !node.is_leaf() {
            let children: Vec<_> = tree.children(label).collect();
            run_jobs(&mut report, per_cell, seed, base, |rng| {
                sample_until(
                    rng,
                    |r| random_point_in(&node.cell, r),
                    |p| {
                        let mut inside = Vec::new();
                        for (l, c) in &children {
                            match c.cell.contains(p)? {
                                Membership::Inside => inside.push(label_text(l)),
                                Membership::Boundary { .. } => return Ok(None),
                                Membership::Outside { .. } => {}
                            }
                        }
                        Ok(Some((inside.len() != 1).then(|| {
                            format!(
                                "{} of {} in {} children [{}]",
                                point_text(p),
                                label_text(label),
                                inside.len(),
                                inside.join(", ")
                            )
                        })))
                    },
                )
            });
        }
        if let (true, Some(parent)) = (label.ends_in_x(), label.parent()) {
            let pcell = &tree.get(&parent).expect("parent exists").cell;
            run_jobs(&mut report, per_cell, seed, base | (1 << 31), |rng| {
                sample_until(
                    rng,
                    |r| random_point_in(&node.cell, r),
                    |p| {
                        Ok(Some(match pcell.contains(p)? {
                            Membership::Inside => None,
                            m => Some(format!(
                                "{} of {} not inside its parent: {m:?}",
                                point_text(p),
                                label_text(label)
                            )),
                        }))
                    },
                )
            });
        }
    }
    report
}

/// The open McCallum projection closure of `base`, kept as a coprime basis
/// level by level.
pub fn projection_closure(base: &FactorSet, n: usize, cap: usize) -> Result<FactorSet, OracleError> {
    let mut h: BTreeSet<Poly> = base.iter().cloned().collect();
    for k in (2..=n).rev() {
        let top: Vec<Poly> = h.iter().filter(|p| p.level() == k).cloned().collect();
        let mut lower: Vec<Poly> = h.iter().filter(|p| p.level() < k).cloned().collect();
        for (i, p) in top.iter().enumerate() {
            lower.push(p.leading_coeff(k - 1));
            lower.push(discriminant(p, k - 1)?);
            for q in &top[i + 1..] {
                lower.push(resultant(p, q, k - 1)?);
            }
        }
        lower.retain(|q| !q.is_zero() && !q.is_constant());
        h.retain(|p| p.level() >= k);
        h.extend(factor_set(&lower)?);
        if h.len() > cap {
            return Err(OracleError::ClosureCap(cap));
        }
    }
    Ok(h.into_iter().collect())
}

/// Whether `g` is a product of elements of `closure` of its level.
fn in_closure(g: &Poly, closure: &FactorSet) -> bool {
    if closure.contains(g) {
        return true;
    }
    let mut rest = g.clone();
    for h in closure.iter().filter(|h| h.level() == g.level()) {
        while let Some(q) = rest.exact_div(h) {
            rest = q;
        }
    }
    rest.is_constant()
}

/// Every bound polynomial of every cell must come from the projection
/// closure of the formula's factors.
pub fn verify_bpolys_in_closure(tree: &NuCadTree, formula: &Formula, cap: usize) -> VerificationReport {
    let mut report = VerificationReport::new("bound polynomials in projection closure");
    let closure = match projection_closure(formula.factors(), formula.dimension(), cap) {
        Ok(c) => c,
        Err(e) => {
            report.violations.push(e.to_string());
            report.passed = false;
            return report;
        }
    };
    let names = formula.variables();
    for (label, node) in tree.nodes() {
        for g in &node.cell.bpolys() {
            report.samples += 1;
            if !in_closure(g, &closure) {
                report
                    .violations
                    .push(format!("{}: {}", label_text(label), g.to_text(names)));
            }
        }
    }
    report.passed = report.violations.is_empty();
    report
}

/// Number of open cells of the classical open CAD built from the full
/// projection closure of the formula's factors, for up to 3 variables.
pub fn build_open_cad(formula: &Formula) -> Result<usize, OracleError> {
    let n = formula.dimension();
    if n > 3 {
        return Err(OracleError::Unsupported(n));
    }
    let closure = projection_closure(formula.factors(), n, 10_000)?;
    let by_level: Vec<Vec<Poly>> = (1..=n)
        .map(|k| closure.iter().filter(|p| p.level() == k).cloned().collect())
        .collect();
    count_cells(&by_level, &mut Vec::new())
}

fn count_cells(by_level: &[Vec<Poly>], prefix: &mut Vec<Rational>) -> Result<usize, OracleError> {
    let k = prefix.len();
    let mut roots: Vec<RealRoot> = Vec::new();
    for p in &by_level[k] {
        let u = p.specialize(prefix);
        if u.is_zero() {
            continue;
        }
        for r in isolate_real_roots(&u)? {
            if !roots.iter().any(|s| s.cmp_root(&r) == Ordering::Equal) {
                roots.push(r);
            }
        }
    }
    roots.sort_by(|a, b| a.cmp_root(b));
    if k + 1 == by_level.len() {
        return Ok(roots.len() + 1);
    }
    let mut total = 0;
    for i in 0..=roots.len() {
        let lo = i.checked_sub(1).map(|j| &roots[j]);
        let hi = roots.get(i);
        prefix.push(rational_between_bounds(lo, hi)?);
        total += count_cells(by_level, prefix)?;
        prefix.pop();
    }
    Ok(total)
}
