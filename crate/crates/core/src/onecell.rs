//! Open cylindrical cells around a rational sample point, and the merge
//! engine that refines a cell until given polynomials are sign-invariant
//! on it.
//!
//! A cell in `R^n` is described level by level: at level `i` the cell is
//! the set of `x_i` strictly between a lower and an upper bound, each
//! either infinite or the `k`-th real root of a bound polynomial in
//! `x_1..x_i` specialized at `x_1..x_{i-1}`. Every bound polynomial and
//! every polynomial in the cell's set `P` has constant nonzero sign on the
//! cell, and the leading coefficients, discriminants and cross-resultants
//! that keep the bounds delineable are members of `P` too. Root indices
//! are therefore valid over the whole base, not only at the sample.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::formula::FactorSet;
use crate::label::{Label, Side};
use crate::polynomial::{proj_open_mc, Poly, PolyError, Rational};
use crate::realroots::{isolate_real_roots, rational_between_bounds, roots_below, RealRoot, RootError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CellError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("point has {got} coordinates, cell has dimension {expected}")]
    Arity { expected: usize, got: usize },
    #[error("bound polynomial at level {level} vanishes identically over the point")]
    NullifiedBound { level: usize },
}

/// One side of a cell at one level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bound {
    /// `-inf` as a lower bound, `+inf` as an upper bound.
    Infinite,
    /// The `index`-th smallest real root (1-based) of `poly` in its main
    /// variable.
    Root { poly: Poly, index: usize },
}

impl Bound {
    pub fn poly(&self) -> Option<&Poly> {
        match self {
            Bound::Infinite => None,
            Bound::Root { poly, .. } => Some(poly),
        }
    }

    /// The bound as a real algebraic number over `prefix`, or `None` for an
    /// infinite bound.
    pub fn realize(&self, prefix: &[Rational]) -> Result<Option<RealRoot>, CellError> {
        let Bound::Root { poly, index } = self else {
            return Ok(None);
        };
        let up = poly.specialize(prefix);
        if up.is_zero() {
            return Err(CellError::NullifiedBound {
                level: prefix.len() + 1,
            });
        }
        let mut roots = isolate_real_roots(&up)?;
        if *index == 0 || *index > roots.len() {
            return Err(RootError::IndexOutOfRange {
                index: *index,
                count: roots.len(),
            }
            .into());
        }
        Ok(Some(roots.swap_remove(index - 1)))
    }
}

/// Lower and upper bound of a cell at one level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelBounds {
    pub lower: Bound,
    pub upper: Bound,
}

impl LevelBounds {
    pub fn unbounded() -> Self {
        LevelBounds {
            lower: Bound::Infinite,
            upper: Bound::Infinite,
        }
    }

    pub fn side(&self, side: Side) -> &Bound {
        match side {
            Side::Lower => &self.lower,
            Side::Upper => &self.upper,
        }
    }
}

/// Where a point lies relative to a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    /// The first level (1-based) at which the point leaves the cell, and
    /// through which side, its prefix being inside.
    Outside { level: usize, side: Side },
    /// The point lies on a bounding section at `level`, its prefix being
    /// inside.
    Boundary { level: usize },
}

/// An open cylindrical cell with its sample, sign-invariant set and label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenCell {
    bounds: Vec<LevelBounds>,
    sample: Vec<Rational>,
    p: FactorSet,
    label: Label,
}

impl OpenCell {
    /// `R^n` with the given sample, empty `P` and the root label.
    pub fn universe(sample: Vec<Rational>) -> OpenCell {
        OpenCell {
            bounds: alloc::vec![LevelBounds::unbounded(); sample.len()],
            sample,
            p: FactorSet::new(),
            label: Label::root(),
        }
    }

    /// Assembles a cell from stored parts. The caller is responsible for
    /// the cell invariants; [`OpenCell::contains`] on the sample is a cheap
    /// partial check.
    pub fn from_parts(
        bounds: Vec<LevelBounds>,
        sample: Vec<Rational>,
        p: FactorSet,
        label: Label,
    ) -> Result<OpenCell, CellError> {
        if bounds.len() != sample.len() {
            return Err(CellError::Arity {
                expected: bounds.len(),
                got: sample.len(),
            });
        }
        Ok(OpenCell {
            bounds,
            sample,
            p,
            label,
        })
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[LevelBounds] {
        &self.bounds
    }

    /// Bounds at `level` (1-based).
    pub fn level(&self, level: usize) -> &LevelBounds {
        &self.bounds[level - 1]
    }

    pub fn sample(&self) -> &[Rational] {
        &self.sample
    }

    pub fn p(&self) -> &FactorSet {
        &self.p
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    pub fn with_label(mut self, label: Label) -> OpenCell {
        self.label = label;
        self
    }

    /// All distinct bound polynomials.
    pub fn bpolys(&self) -> FactorSet {
        self.bounds
            .iter()
            .flat_map(|b| [&b.lower, &b.upper])
            .filter_map(Bound::poly)
            .cloned()
            .collect()
    }

    /// The bound at `level` on `side`, realized over the sample prefix.
    pub fn realize_bound(&self, level: usize, side: Side) -> Result<Option<RealRoot>, CellError> {
        self.level(level).side(side).realize(&self.sample[..level - 1])
    }

    /// Membership of `point`, checked level by level.
    pub fn contains(&self, point: &[Rational]) -> Result<Membership, CellError> {
        if point.len() != self.dimension() {
            return Err(CellError::Arity {
                expected: self.dimension(),
                got: point.len(),
            });
        }
        for (i, b) in self.bounds.iter().enumerate() {
            let level = i + 1;
            let prefix = &point[..i];
            let x = &point[i];
            if let Some(lo) = b.lower.realize(prefix)? {
                match lo.cmp_rational(x) {
                    Ordering::Less => {}
                    Ordering::Equal => return Ok(Membership::Boundary { level }),
                    Ordering::Greater => {
                        return Ok(Membership::Outside {
                            level,
                            side: Side::Lower,
                        })
                    }
                }
            }
            if let Some(hi) = b.upper.realize(prefix)? {
                match hi.cmp_rational(x) {
                    Ordering::Greater => {}
                    Ordering::Equal => return Ok(Membership::Boundary { level }),
                    Ordering::Less => {
                        return Ok(Membership::Outside {
                            level,
                            side: Side::Upper,
                        })
                    }
                }
            }
        }
        Ok(Membership::Inside)
    }

    /// Replaces the coordinates above `level` that no longer lie strictly
    /// between the realized bounds by the simplest rational that does.
    fn repair_sample_above(&mut self, level: usize) -> Result<(), CellError> {
        for j in level..self.dimension() {
            let prefix = &self.sample[..j];
            let lo = self.bounds[j].lower.realize(prefix)?;
            let hi = self.bounds[j].upper.realize(prefix)?;
            let x = &self.sample[j];
            let inside = lo.as_ref().is_none_or(|l| l.cmp_rational(x) == Ordering::Less)
                && hi.as_ref().is_none_or(|h| h.cmp_rational(x) == Ordering::Greater);
            if !inside {
                self.sample[j] = rational_between_bounds(lo.as_ref(), hi.as_ref())?;
            }
        }
        Ok(())
    }

    /// Refines the cell in place so that `p` is sign-invariant on it.
    /// Returns the offending polynomial if one is nullified over the
    /// sample.
    fn merge_in_place(&mut self, p: &Poly) -> Result<Option<Poly>, CellError> {
        let k = p.level();
        if k == 0 || self.p.contains(p) {
            return Ok(None);
        }
        if p.specialize(&self.sample[..k - 1]).is_zero() {
            return Ok(Some(p.clone()));
        }
        let neighbors: Vec<Poly> = [&self.bounds[k - 1].lower, &self.bounds[k - 1].upper]
            .into_iter()
            .filter_map(Bound::poly)
            .cloned()
            .collect();
        for q in proj_open_mc(p, &neighbors)? {
            if let Some(f) = self.merge_in_place(&q)? {
                return Ok(Some(f));
            }
        }
        // Lower-level merges may have moved the sample.
        let up = p.specialize(&self.sample[..k - 1]);
        if up.is_zero() {
            return Ok(Some(p.clone()));
        }
        let roots = isolate_real_roots(&up)?;
        let (below, on_root) = roots_below(&roots, &self.sample[k - 1]);
        let current_lower = self.realize_bound(k, Side::Lower)?;
        if on_root {
            // Move x_k down, off the root but above every root of p below
            // it and above the current lower bound.
            let floor = match (current_lower.as_ref(), below.checked_sub(1).map(|b| &roots[b])) {
                (Some(l), Some(z)) => Some(if l.cmp_root(z) == Ordering::Less { z } else { l }),
                (l, z) => l.or(z),
            };
            let at = RealRoot::exact(self.sample[k - 1].clone());
            self.sample[k - 1] = rational_between_bounds(floor, Some(&at))?;
            self.repair_sample_above(k)?;
        }
        if below > 0 {
            let tighter = current_lower
                .as_ref()
                .is_none_or(|l| roots[below - 1].cmp_root(l) == Ordering::Greater);
            if tighter {
                self.bounds[k - 1].lower = Bound::Root {
                    poly: p.clone(),
                    index: below,
                };
            }
        }
        if below < roots.len() {
            let current_upper = self.realize_bound(k, Side::Upper)?;
            let tighter = current_upper
                .as_ref()
                .is_none_or(|u| roots[below].cmp_root(u) == Ordering::Less);
            if tighter {
                self.bounds[k - 1].upper = Bound::Root {
                    poly: p.clone(),
                    index: below + 1,
                };
            }
        }
        self.p.insert(p.clone());
        Ok(None)
    }

    /// Refines the cell so that `p` becomes sign-invariant, keeping the
    /// label. The sample moves only when `p` vanishes at it.
    pub fn merge_poly(&self, p: &Poly) -> Result<MergeOutcome, CellError> {
        let mut cell = self.clone();
        Ok(match cell.merge_in_place(p)? {
            None => MergeOutcome::Merged(cell),
            Some(poly) => MergeOutcome::Fail {
                poly,
                sample: cell.sample,
            },
        })
    }

    /// Merges every element of `q` in canonical order (ascending level,
    /// then total degree).
    pub fn merge_set(&self, q: &FactorSet) -> Result<MergeOutcome, CellError> {
        let mut cell = self.clone();
        for p in q {
            if let Some(poly) = cell.merge_in_place(p)? {
                return Ok(MergeOutcome::Fail {
                    poly,
                    sample: cell.sample,
                });
            }
        }
        Ok(MergeOutcome::Merged(cell))
    }

    /// The same cell with a different sample, which must lie inside it.
    pub fn with_sample(mut self, sample: Vec<Rational>) -> OpenCell {
        debug_assert_eq!(sample.len(), self.dimension());
        self.sample = sample;
        self
    }

    /// A cell with the given bounds and `P`, its sample agreeing with
    /// `prefix` and completed above it by simplest rationals.
    pub(crate) fn with_bounds_over(
        bounds: Vec<LevelBounds>,
        prefix: &[Rational],
        p: FactorSet,
        label: Label,
    ) -> Result<OpenCell, CellError> {
        let mut sample = prefix.to_vec();
        for b in &bounds[prefix.len()..] {
            let lo = b.lower.realize(&sample)?;
            let hi = b.upper.realize(&sample)?;
            sample.push(rational_between_bounds(lo.as_ref(), hi.as_ref())?);
        }
        Ok(OpenCell {
            bounds,
            sample,
            p,
            label,
        })
    }
}

/// Result of merging polynomials into a cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MergeOutcome {
    Merged(OpenCell),
    /// `poly` is nullified over the prefix of `sample`, the sample the
    /// merge had reached (a point of the input cell).
    Fail { poly: Poly, sample: Vec<Rational> },
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Infinite => f.write_str("inf"),
            Bound::Root { poly, index } => {
                let names = Poly::default_names(poly.nvars());
                write!(f, "root({}, {index})", poly.to_text(&names))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::test_util::*;
    use alloc::vec;

    fn cell(m: MergeOutcome) -> OpenCell {
        match m {
            MergeOutcome::Merged(c) => c,
            MergeOutcome::Fail { poly, .. } => panic!("unexpected FAIL on {poly:?}"),
        }
    }

    fn root(poly: Poly, index: usize) -> Bound {
        Bound::Root { poly, index }
    }

    /// C1 of the worked example: `y < root(f1, 1)` around the origin.
    fn c1() -> OpenCell {
        cell(OpenCell::universe(vec![q(0, 1), q(0, 1)]).merge_poly(&f1()).unwrap())
    }

    #[test]
    fn universe_cell() {
        let u = OpenCell::universe(vec![q(0, 1); 3]);
        assert_eq!(u.dimension(), 3);
        assert!(u.p().is_empty());
        assert!(u.label().is_root());
        assert_eq!(u.realize_bound(1, Side::Lower).unwrap(), None);
        assert_eq!(u.contains(&[q(7, 1), q(-9, 2), q(1, 3)]).unwrap(), Membership::Inside);
    }

    #[test]
    fn merge_f1_at_origin() {
        let c = c1();
        assert_eq!(c.level(1), &LevelBounds::unbounded());
        assert_eq!(c.level(2).lower, Bound::Infinite);
        assert_eq!(c.level(2).upper, root(f1(), 1));
        assert_eq!(c.p().iter().cloned().collect::<Vec<_>>(), vec![f1()]);
        assert_eq!(c.sample(), &[q(0, 1), q(0, 1)]);
        let u = c.realize_bound(2, Side::Upper).unwrap().unwrap();
        assert_eq!(u.cmp_rational(&q(1, 16)), Ordering::Equal);
    }

    #[test]
    fn membership() {
        let c = c1();
        assert_eq!(c.contains(&[q(0, 1), q(0, 1)]).unwrap(), Membership::Inside);
        assert_eq!(
            c.contains(&[q(0, 1), q(1, 2)]).unwrap(),
            Membership::Outside {
                level: 2,
                side: Side::Upper
            }
        );
        assert_eq!(
            c.contains(&[q(0, 1), q(1, 16)]).unwrap(),
            Membership::Boundary { level: 2 }
        );
        assert!(c.contains(&[q(0, 1)]).is_err());
    }

    #[test]
    fn merge_f2_above_f1() {
        let c2 = OpenCell::from_parts(
            vec![
                LevelBounds::unbounded(),
                LevelBounds {
                    lower: root(f1(), 1),
                    upper: Bound::Infinite,
                },
            ],
            vec![q(0, 1), q(1, 2)],
            [f1()].into_iter().collect(),
            Label::root(),
        )
        .unwrap();
        let c3 = cell(c2.merge_set(&[f2()].into_iter().collect()).unwrap());
        assert_eq!(
            c3.level(1),
            &LevelBounds {
                lower: root(f3(), 1),
                upper: root(f3(), 2)
            }
        );
        assert_eq!(
            c3.level(2),
            &LevelBounds {
                lower: root(f1(), 1),
                upper: root(f2(), 2)
            }
        );
        let p: FactorSet = [f1(), f2(), f3(), f4(), f5()].into_iter().collect();
        assert_eq!(c3.p(), &p);
        assert_eq!(c3.sample(), c2.sample());
        let hi = c3.realize_bound(1, Side::Upper).unwrap().unwrap();
        assert_eq!(hi.cmp_rational(&q(0, 1)), Ordering::Greater);
        assert_eq!(hi.cmp_rational(&q(1, 1)), Ordering::Less);
    }

    #[test]
    fn nullified_polynomial_fails() {
        let f = p(2, &[(&[1, 1], 1), (&[1, 0], 1)]);
        let u = OpenCell::universe(vec![q(0, 1), q(0, 1)]);
        match u.merge_poly(&f).unwrap() {
            MergeOutcome::Fail { poly, sample } => {
                assert_eq!(poly, f);
                assert_eq!(sample, u.sample());
            }
            MergeOutcome::Merged(_) => panic!("expected FAIL"),
        }
    }

    #[test]
    fn vanishing_at_sample_moves_it_down() {
        let x = p(1, &[(&[1], 1)]);
        let c = cell(OpenCell::universe(vec![q(0, 1)]).merge_poly(&x).unwrap());
        assert_eq!(c.sample(), &[q(-1, 1)]);
        assert_eq!(c.level(1).upper, root(x, 1));
        assert_eq!(c.level(1).lower, Bound::Infinite);

        // y - x vanishes at (1, 1); only y moves, staying above the
        // lower bound y = 1/2.
        let g = p(2, &[(&[0, 1], 2), (&[0, 0], -1)]);
        let base = cell(OpenCell::universe(vec![q(1, 1), q(1, 1)]).merge_poly(&g).unwrap());
        let h = p(2, &[(&[0, 1], 1), (&[1, 0], -1)]);
        let c = cell(base.merge_poly(&h).unwrap());
        assert_eq!(c.sample()[0], q(1, 1));
        assert!(c.sample()[1] > q(1, 2) && c.sample()[1] < q(1, 1));
        assert_eq!(c.contains(c.sample()).unwrap(), Membership::Inside);
    }

    #[test]
    fn bpolys_are_in_p() {
        let c = c1();
        assert!(c.bpolys().is_subset(c.p()));
    }
}
