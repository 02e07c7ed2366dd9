//! Splitting one cell: refine around the sample until the formula is
//! decided, then cover the rest of the cell with siblings.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::formula::{FactorSet, Formula, QPolicy};
use crate::label::{Branch, Side};
use crate::onecell::{CellError, LevelBounds, MergeOutcome, OpenCell};
use crate::polynomial::{factor_set, Poly, Rational};
use crate::realroots::{isolate_real_roots, rational_between_bounds, RealRoot};

/// Knobs for [`split`] and the builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitPolicy {
    pub q_policy: QPolicy,
    /// Worker threads for builders that support them; the sequential
    /// builder ignores it.
    pub workers: usize,
    /// Abort once the tree holds more cells than this.
    pub cell_cap: usize,
    /// Abort a single split after this many sample perturbations.
    pub perturbation_cap: usize,
}

impl Default for SplitPolicy {
    fn default() -> Self {
        SplitPolicy {
            q_policy: QPolicy::Greedy,
            workers: 1,
            cell_cap: 100_000,
            perturbation_cap: 1_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error("cell {label}: gave up after {rounds} sample perturbations")]
    PerturbationCap { label: alloc::string::String, rounds: usize },
}

fn nullified(g: &Poly, prefix: &[Rational]) -> bool {
    g.eval_partial(prefix).is_zero()
}

/// A new sample for `cell` at which `f`, nullified over a prefix of the
/// current sample, is no longer a problem: walk down through leading
/// coefficients to the first level where nothing in the working set is
/// nullified, step that coordinate down past every root below it, and
/// re-choose the coordinates above.
pub fn perturb_sample(cell: &OpenCell, f: &Poly) -> Result<Vec<Rational>, CellError> {
    let alpha = cell.sample();
    let mut level = f.level();
    let mut set = alloc::vec![f.clone()];
    while level > 1 && set.iter().any(|g| nullified(g, &alpha[..level - 1])) {
        let ldcfs: Vec<Poly> = set
            .iter()
            .map(|g| g.leading_coeff(level - 1))
            .filter(|c| !c.is_constant())
            .collect();
        set = factor_set(&ldcfs)?;
        level -= 1;
    }
    let prefix = &alpha[..level - 1];
    let a = &alpha[level - 1];
    let mut floor = cell.level(level).lower.realize(prefix)?;
    for g in set.iter().filter(|g| g.level() == level) {
        let roots = isolate_real_roots(&g.specialize(prefix))?;
        let below = roots.into_iter().rev().find(|r| r.cmp_rational(a) == Ordering::Less);
        if let Some(z) = below {
            if floor.as_ref().is_none_or(|l| z.cmp_root(l) == Ordering::Greater) {
                floor = Some(z);
            }
        }
    }
    let mut out = prefix.to_vec();
    out.push(rational_between_bounds(
        floor.as_ref(),
        Some(&RealRoot::exact(a.clone())),
    )?);
    for b in &cell.bounds()[level..] {
        let lo = b.lower.realize(&out)?;
        let hi = b.upper.realize(&out)?;
        out.push(rational_between_bounds(lo.as_ref(), hi.as_ref())?);
    }
    Ok(out)
}

/// Children of `cell` under `formula`: empty if the formula is already
/// decided by `P`, otherwise the refined cell around the sample (label
/// suffix `nX`) followed by the siblings that cover the rest of the cell,
/// in label order.
pub fn split(
    cell: &OpenCell,
    formula: &Formula,
    policy: &SplitPolicy,
) -> Result<Vec<OpenCell>, SplitError> {
    let mut q = formula.choose_q(cell.sample(), cell.p(), policy.q_policy);
    if q.is_empty() {
        return Ok(Vec::new());
    }
    let mut base = cell.clone();
    let mut refined = cell.clone();
    let mut rounds = 0;
    while !q.is_empty() {
        match refined.merge_set(&q)? {
            MergeOutcome::Merged(c) => refined = c,
            MergeOutcome::Fail { poly, sample } => {
                rounds += 1;
                if rounds > policy.perturbation_cap {
                    return Err(SplitError::PerturbationCap {
                        label: alloc::format!("{}", cell.label()),
                        rounds: policy.perturbation_cap,
                    });
                }
                let reached = base.clone().with_sample(sample);
                let moved = perturb_sample(&reached, &poly)?;
                base = base.with_sample(moved);
                refined = base.clone();
            }
        }
        // Merging can move the sample; decide again at the point the child
        // will carry.
        q = formula.choose_q(refined.sample(), refined.p(), policy.q_policy);
    }
    siblings(cell, refined)
}

fn siblings(parent: &OpenCell, refined: OpenCell) -> Result<Vec<OpenCell>, SplitError> {
    let n = parent.dimension();
    let label = parent.label();
    let mut out = Vec::with_capacity(2 * n + 1);
    for i in 1..=n {
        for side in [Side::Lower, Side::Upper] {
            let old = parent.level(i).side(side);
            let new = refined.level(i).side(side);
            if old == new {
                continue;
            }
            let level = match side {
                Side::Lower => LevelBounds {
                    lower: old.clone(),
                    upper: new.clone(),
                },
                Side::Upper => LevelBounds {
                    lower: new.clone(),
                    upper: old.clone(),
                },
            };
            let bounds: Vec<LevelBounds> = refined.bounds()[..i - 1]
                .iter()
                .cloned()
                .chain(core::iter::once(level))
                .chain(parent.bounds()[i..].iter().cloned())
                .collect();
            let p: FactorSet = parent.p().union(&refined.p().below_level(i));
            out.push(OpenCell::with_bounds_over(
                bounds,
                &refined.sample()[..i - 1],
                p,
                label.child(i, Branch::from(side)),
            )?);
        }
    }
    let x = refined.with_label(label.child(n, Branch::X));
    out.insert(0, x);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::onecell::Bound;
    use crate::formula::tests::example;
    use crate::polynomial::test_util::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn origin(n: usize) -> OpenCell {
        OpenCell::universe(vec![q(0, 1); n])
    }

    #[test]
    fn perturb_through_leading_coefficient() {
        let f = p(2, &[(&[1, 1], 1), (&[1, 0], 1)]);
        let a = perturb_sample(&origin(2), &f).unwrap();
        assert_eq!(a, vec![q(-1, 1), q(0, 1)]);
        let g = p(2, &[(&[2, 1], 1), (&[2, 0], -1)]);
        let a = perturb_sample(&origin(2), &g).unwrap();
        assert!(a[0] < q(0, 1));
    }

    #[test]
    fn perturb_respects_lower_bound() {
        let x2 = p(1, &[(&[1], 1), (&[0], 2)]);
        let cell = match origin(1).merge_poly(&x2).unwrap() {
            MergeOutcome::Merged(c) => c,
            other => panic!("{other:?}"),
        };
        assert_eq!(cell.level(1).lower, Bound::Root { poly: x2, index: 1 });
        let x = p(1, &[(&[1], 1)]);
        assert_eq!(perturb_sample(&cell, &x).unwrap(), vec![q(-1, 1)]);
    }

    #[test]
    fn split_root_of_example() {
        let f = example();
        let kids = split(&origin(2), &f, &SplitPolicy::default()).unwrap();
        let labels: Vec<_> = kids.iter().map(|c| c.label().to_string()).collect();
        assert_eq!(labels, vec!["2X", "2U"]);
        assert_eq!(kids[0].level(2).upper, Bound::Root { poly: f1(), index: 1 });
        assert_eq!(kids[1].level(2).lower, Bound::Root { poly: f1(), index: 1 });
        assert!(kids[1].sample()[1] > q(1, 16));
        assert!(kids[1].p().is_empty());
    }

    #[test]
    fn split_above_f1() {
        let f = example();
        let kids = split(&origin(2), &f, &SplitPolicy::default()).unwrap();
        let kids = split(&kids[1], &f, &SplitPolicy::default()).unwrap();
        let labels: Vec<_> = kids.iter().map(|c| c.label().to_string()).collect();
        assert_eq!(labels, vec!["2U2X", "2U1L", "2U1U", "2U2U"]);
        let refined: FactorSet = [f2(), f3(), f4(), f5()].into_iter().collect();
        assert_eq!(kids[0].p(), &refined);
        assert_eq!(kids[0].sample(), &[q(0, 1), q(1, 2)]);
        assert_eq!(kids[0].level(1).lower, Bound::Root { poly: f3(), index: 1 });
        assert_eq!(kids[0].level(2).upper, Bound::Root { poly: f2(), index: 2 });
        assert_eq!(kids[1].level(1).upper, Bound::Root { poly: f3(), index: 1 });
        assert_eq!(kids[3].level(2).lower, Bound::Root { poly: f2(), index: 2 });
        for k in &kids {
            assert_eq!(k.contains(k.sample()).unwrap(), crate::onecell::Membership::Inside);
        }
        assert!(split(&kids[0], &f, &SplitPolicy::default()).unwrap().is_empty());
    }

    #[test]
    fn decided_cell_has_no_children() {
        let f = parse_formula("vars x; 0 < 1").unwrap();
        assert!(split(&origin(1), &f, &SplitPolicy::default()).unwrap().is_empty());
    }

    #[test]
    fn nullified_merge_recovers() {
        let f = parse_formula("vars x, y; x*y + x > 0").unwrap();
        let kids = split(&origin(2), &f, &SplitPolicy::default()).unwrap();
        assert_eq!(kids[0].sample()[0], q(-1, 1));
        for k in &kids {
            assert_eq!(k.contains(k.sample()).unwrap(), crate::onecell::Membership::Inside);
        }
    }
}
