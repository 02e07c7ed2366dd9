//! Real roots of univariate integer polynomials: isolation by Descartes'
//! rule of signs with bisection, exact comparison of real algebraic
//! numbers, and selection of simplest rationals between them.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::polynomial::{Rational, UPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("root index {index} out of range: polynomial has {count} real roots")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("empty interval")]
    EmptyInterval,
    #[error("empty fiber: lower bound is not below upper bound")]
    EmptyFiber,
}

/// A real algebraic number: the unique root of a squarefree primitive
/// polynomial inside an isolating interval.
///
/// Either `lo == hi` and the root is that rational, or `lo < hi`, the root
/// lies strictly inside, neither endpoint is a root, and `sign_hi` is the
/// sign of the polynomial at `hi` (so `-sign_hi` is its sign at `lo`).
/// Refinement returns a new value; the receiver is never changed.
#[derive(Clone, PartialEq, Eq)]
pub struct RealRoot {
    poly: UPoly,
    lo: Rational,
    hi: Rational,
    sign_hi: Ordering,
}

fn half(a: &Rational, b: &Rational) -> Rational {
    (a + b) / Rational::from_integer(BigInt::from(2))
}

impl RealRoot {
    /// The rational `r` itself, defined by `den * x - num`.
    pub fn exact(r: Rational) -> Self {
        let poly = UPoly::new(alloc::vec![-r.numer().clone(), r.denom().clone()]);
        RealRoot {
            poly,
            lo: r.clone(),
            hi: r,
            sign_hi: Ordering::Equal,
        }
    }

    fn exact_root_of(poly: &UPoly, r: Rational) -> Self {
        RealRoot {
            poly: poly.clone(),
            lo: r.clone(),
            hi: r,
            sign_hi: Ordering::Equal,
        }
    }

    /// Root of squarefree `poly` known to be the only one in the open
    /// interval `(lo, hi)`; endpoints may be roots and are moved off them.
    fn open(poly: &UPoly, lo: Rational, hi: Rational) -> Self {
        let s = poly.sign_at(&hi);
        let sign_hi = if s != Ordering::Equal {
            s
        } else {
            poly.derivative().sign_at(&hi).reverse()
        };
        let mut r = RealRoot {
            poly: poly.clone(),
            lo,
            hi,
            sign_hi,
        };
        while !r.is_exact()
            && (poly.sign_at(&r.lo) == Ordering::Equal || poly.sign_at(&r.hi) == Ordering::Equal)
        {
            r = r.refine();
        }
        if !r.is_exact() {
            r.sign_hi = poly.sign_at(&r.hi);
        }
        r
    }

    /// Squarefree primitive defining polynomial.
    pub fn poly(&self) -> &UPoly {
        &self.poly
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// One bisection step.
    pub fn refine(&self) -> RealRoot {
        if self.is_exact() {
            return self.clone();
        }
        let m = half(&self.lo, &self.hi);
        let s = self.poly.sign_at(&m);
        if s == Ordering::Equal {
            return Self::exact_root_of(&self.poly, m);
        }
        let mut r = self.clone();
        if s == self.sign_hi {
            r.hi = m;
        } else {
            r.lo = m;
        }
        r
    }

    /// Bisects until the width is below `width` or the root is exact.
    pub fn refine_to(&self, width: &Rational) -> RealRoot {
        let mut r = self.clone();
        while !r.is_exact() && &r.width() >= width {
            r = r.refine();
        }
        r
    }

    /// Position of the root relative to `r`.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        if self.is_exact() {
            return self.lo.cmp(r);
        }
        if r <= &self.lo {
            return Ordering::Greater;
        }
        if r >= &self.hi {
            return Ordering::Less;
        }
        let s = self.poly.sign_at(r);
        if s == Ordering::Equal {
            Ordering::Equal
        } else if s == self.sign_hi {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Exact comparison of two real algebraic numbers.
    pub fn cmp_root(&self, other: &RealRoot) -> Ordering {
        if let Some(v) = self.exact_value() {
            return other.cmp_rational(v).reverse();
        }
        if let Some(v) = other.exact_value() {
            return self.cmp_rational(v);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut equality_checked = false;
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            if !equality_checked {
                equality_checked = true;
                // A common root is a root of the gcd inside the overlap,
                // whose endpoints are never roots of the gcd.
                let g = a.poly.gcd(&b.poly);
                if !g.is_constant() {
                    let lo = (&a.lo).max(&b.lo);
                    let hi = (&a.hi).min(&b.hi);
                    if g.sign_at(lo) != g.sign_at(hi) {
                        return Ordering::Equal;
                    }
                }
            }
            if a.width() >= b.width() {
                a = a.refine();
            } else {
                b = b.refine();
            }
            if a.is_exact() || b.is_exact() {
                return a.cmp_root(&b);
            }
        }
    }
}

impl fmt::Debug for RealRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "RealRoot({})", self.lo)
        } else {
            write!(f, "RealRoot({:?} in ({}, {}))", self.poly, self.lo, self.hi)
        }
    }
}

/// Sorted isolating intervals, one per distinct real root of `p`.
pub fn isolate_real_roots(p: &UPoly) -> Result<Vec<RealRoot>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let q = p.squarefree_part();
    if q.is_constant() {
        return Ok(Vec::new());
    }
    let zero_root = q.coeffs()[0].is_zero();
    let core = if zero_root { q.div_x() } else { q.clone() };
    let mut out: Vec<RealRoot> = isolate_positive(&core.reflect())
        .into_iter()
        .rev()
        .map(|iv| match iv {
            Found::Exact(r) => RealRoot::exact_root_of(&q, -r),
            Found::Open(lo, hi) => RealRoot::open(&q, -hi, -lo),
        })
        .collect();
    if zero_root {
        out.push(RealRoot::exact_root_of(&q, Rational::zero()));
    }
    out.extend(isolate_positive(&core).into_iter().map(|iv| match iv {
        Found::Exact(r) => RealRoot::exact_root_of(&q, r),
        Found::Open(lo, hi) => RealRoot::open(&q, lo, hi),
    }));
    Ok(out)
}

enum Found {
    Exact(Rational),
    Open(Rational, Rational),
}

enum Task {
    Interval(UPoly, BigInt, u32),
    Exact(Rational),
}

/// Positive roots of `q` (with `q(0) != 0`), in increasing order.
fn isolate_positive(q: &UPoly) -> Vec<Found> {
    let d = q.degree();
    let lc_bits = q.lc().abs().bits() as i64;
    let max_bits = q.coeffs()[..d]
        .iter()
        .map(|c| c.abs().bits())
        .max()
        .unwrap_or(0) as i64;
    let k = (max_bits - lc_bits + 2).max(1) as u32;
    let scale = Rational::from_integer(BigInt::one() << k);
    let point = |c: &BigInt, depth: u32| -> Rational {
        Rational::new(c.clone(), BigInt::one() << depth) * &scale
    };
    let mut out = Vec::new();
    let mut stack = alloc::vec![Task::Interval(q.scale_var_pow2(k), BigInt::zero(), 0)];
    while let Some(task) = stack.pop() {
        let (p, c, depth) = match task {
            Task::Exact(r) => {
                out.push(Found::Exact(r));
                continue;
            }
            Task::Interval(p, c, depth) => (p, c, depth),
        };
        let v = p.reverse().taylor_shift_one().sign_variations();
        if v == 0 {
            continue;
        }
        if v == 1 {
            let c1: BigInt = &c + 1;
            out.push(Found::Open(point(&c, depth), point(&c1, depth)));
            continue;
        }
        let left = p.halve_var();
        let mut right = left.taylor_shift_one();
        let c2: BigInt = &c * 2;
        let c2p1: BigInt = &c2 + 1;
        let midpoint_root = right.coeffs()[0].is_zero();
        if midpoint_root {
            right = right.div_x();
        }
        stack.push(Task::Interval(right, c2p1.clone(), depth + 1));
        if midpoint_root {
            stack.push(Task::Exact(point(&c2p1, depth + 1)));
        }
        stack.push(Task::Interval(left, c2, depth + 1));
    }
    out
}

/// Position of `r` relative to the `k`-th smallest real root of `p`
/// (1-based): `Less` means `r` is below the root.
pub fn compare_to_root(p: &UPoly, k: usize, r: &Rational) -> Result<Ordering, RootError> {
    let roots = isolate_real_roots(p)?;
    if k == 0 || k > roots.len() {
        return Err(RootError::IndexOutOfRange {
            index: k,
            count: roots.len(),
        });
    }
    Ok(roots[k - 1].cmp_rational(r).reverse())
}

/// The simplest rational strictly inside `(lo, hi)`, where `None` stands
/// for `-inf` below and `+inf` above: smallest denominator, then smallest
/// absolute numerator.
pub fn simplest_rational_between(
    lo: Option<&Rational>,
    hi: Option<&Rational>,
) -> Result<Rational, RootError> {
    let int = |n: BigInt| Rational::from_integer(n);
    match (lo, hi) {
        (None, None) => Ok(Rational::zero()),
        (Some(lo), None) => Ok(if lo.is_negative() {
            Rational::zero()
        } else {
            int(lo.floor().to_integer() + 1)
        }),
        (None, Some(hi)) => Ok(if hi.is_positive() {
            Rational::zero()
        } else {
            int(hi.ceil().to_integer() - 1)
        }),
        (Some(lo), Some(hi)) => {
            if lo >= hi {
                return Err(RootError::EmptyInterval);
            }
            Ok(simplest_in_open(lo, hi))
        }
    }
}

fn simplest_in_open(lo: &Rational, hi: &Rational) -> Rational {
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !hi.is_positive() {
        return -simplest_in_open(&-hi, &-lo);
    }
    let fl = lo.floor();
    let next = &fl + Rational::one();
    if &next < hi {
        return next;
    }
    // lo and hi share the integer part fl; recurse on reciprocals of the
    // fractional parts.
    let upper = hi - &fl;
    let lower = lo - &fl;
    let inner = if lower.is_zero() {
        simplest_rational_between(Some(&upper.recip()), None).expect("unbounded")
    } else {
        simplest_in_open(&upper.recip(), &lower.recip())
    };
    fl + inner.recip()
}

/// The simplest rational strictly between two real algebraic bounds
/// (`None` for the infinite ones), refining both until the choice is
/// certified.
pub fn rational_between_bounds(
    lower: Option<&RealRoot>,
    upper: Option<&RealRoot>,
) -> Result<Rational, RootError> {
    if let (Some(l), Some(u)) = (lower, upper) {
        if l.cmp_root(u) != Ordering::Less {
            return Err(RootError::EmptyFiber);
        }
    }
    let mut lower = lower.cloned();
    let mut upper = upper.cloned();
    loop {
        let lo = lower.as_ref().map(|l| l.lo.clone());
        let hi = upper.as_ref().map(|u| u.hi.clone());
        let c = simplest_rational_between(lo.as_ref(), hi.as_ref())?;
        let mut certified = true;
        if let Some(l) = &lower {
            match l.cmp_rational(&c) {
                Ordering::Less => {}
                Ordering::Equal => {
                    lower = Some(RealRoot::exact_root_of(&l.poly, c.clone()));
                    certified = false;
                }
                Ordering::Greater => {
                    lower = Some(l.refine());
                    certified = false;
                }
            }
        }
        if let Some(u) = &upper {
            match u.cmp_rational(&c) {
                Ordering::Greater => {}
                Ordering::Equal => {
                    upper = Some(RealRoot::exact_root_of(&u.poly, c.clone()));
                    certified = false;
                }
                Ordering::Less => {
                    upper = Some(u.refine());
                    certified = false;
                }
            }
        }
        if certified {
            return Ok(c);
        }
    }
}

/// Number of real roots of `p` strictly below and equal to `r`.
pub fn roots_below(roots: &[RealRoot], r: &Rational) -> (usize, bool) {
    let mut below = 0;
    let mut on = false;
    for root in roots {
        match root.cmp_rational(r) {
            Ordering::Less => below += 1,
            Ordering::Equal => on = true,
            Ordering::Greater => break,
        }
    }
    (below, on)
}
