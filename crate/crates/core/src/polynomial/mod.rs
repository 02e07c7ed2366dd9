//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients, and the elimination machinery built on top of them.
//!
//! Variables are indexed from 0 (`x1` is variable 0). The *level* of a
//! polynomial is the 1-based index of its highest variable, 0 for constants.
//! Terms are kept in graded lexicographic order with `x1 < x2 < ... < xn`.

mod factor;
mod gcd;
mod projection;
mod resultant;
mod univariate;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use factor::factor_univariate;
pub use gcd::{factor_set, gcd, squarefree_basis};
pub use projection::proj_open_mc;
pub use resultant::{discriminant, resultant, sylvester_resultant};
pub use univariate::UPoly;

/// Exact rational number, always reduced with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("no elimination variable: both inputs are constant in x{0}")]
    NoEliminationVariable(usize),
    #[error("polynomial is constant in x{0}")]
    ConstantInVariable(usize),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial involves more than one variable")]
    NotUnivariate,
}

/// Exponent vector, ordered graded-lexicographically with the last variable
/// most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn quotient(&self, divisor: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `Z[x1, ..., xn]`.
///
/// Invariants: no stored coefficient is zero and every exponent vector has
/// length `nvars`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(nvars), c);
        }
        Poly { nvars, terms }
    }

    /// The variable `x_{var+1}`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(exps), BigInt::one());
        Poly { nvars, terms }
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = Poly::zero(nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length mismatch");
            p.add_term(Monomial(exps), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Terms in descending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// 1-based index of the highest variable with positive degree; 0 for
    /// constants.
    pub fn level(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|m| m.0.iter().rposition(|&e| e > 0))
            .max()
            .map_or(0, |v| v + 1)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&v| self.terms.keys().any(|m| m.0[v] > 0))
            .collect()
    }

    /// Coefficients with respect to `var`, index = power. Each coefficient is
    /// free of `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(self.nvars); d + 1];
        if self.is_zero() {
            return vec![];
        }
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut exps = m.0.clone();
            exps[var] = 0;
            out[e].add_term(Monomial(exps), c.clone());
        }
        out
    }

    pub fn from_coeffs(nvars: usize, var: usize, coeffs: &[Poly]) -> Poly {
        let mut p = Poly::zero(nvars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut exps = m.0.clone();
                exps[var] += e as u32;
                p.add_term(Monomial(exps), v.clone());
            }
        }
        p
    }

    /// Coefficient of the highest power of `var`.
    pub fn leading_coeff(&self, var: usize) -> Poly {
        self.coeffs_in(var)
            .pop()
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut exps = m.0.clone();
                exps[var] -= 1;
                p.add_term(Monomial(exps), c * BigInt::from(e));
            }
        }
        p
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Leading term under the canonical (graded) order.
    fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`
    /// in `Z[x]`.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if let Some(c) = divisor.constant_value() {
            return self.div_integer(&c);
        }
        let (dm, dc) = divisor.leading_term().expect("nonzero");
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if !dm.divides(m) {
                return None;
            }
            let (qc, r) = c.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            let qm = m.quotient(dm);
            for (tm, tc) in &divisor.terms {
                rem.add_term(tm.mul(&qm), -(tc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    fn div_integer(&self, k: &BigInt) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            terms.insert(m.clone(), q);
        }
        Some(Poly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Positive gcd of the integer coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Coefficient of the lexicographically largest monomial, most
    /// significant variable last. This is the iterated leading coefficient
    /// `ldcf_{x1}(... ldcf_{xn}(p))`.
    pub fn lex_leading_coeff(&self) -> Option<&BigInt> {
        self.terms
            .iter()
            .max_by(|a, b| a.0 .0.iter().rev().cmp(b.0 .0.iter().rev()))
            .map(|(_, c)| c)
    }

    /// Primitive associate with positive iterated leading coefficient,
    /// together with a flag telling whether the sign was flipped.
    pub fn normalize_signed(&self) -> (Poly, bool) {
        if self.is_zero() {
            return (self.clone(), false);
        }
        let mut g = self.content();
        let negative = self.lex_leading_coeff().is_some_and(|c| c.is_negative());
        if negative {
            g = -g;
        }
        (self.div_integer(&g).expect("content divides"), negative)
    }

    pub fn normalize(&self) -> Poly {
        self.normalize_signed().0
    }

    /// Full evaluation at a rational point of length `nvars`.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point arity mismatch");
        let powers = PowerTable::new(self, point);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = Rational::from_integer(c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= powers.get(v, e);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn sign_at(&self, point: &[Rational]) -> Ordering {
        let v = self.eval(point);
        v.cmp(&Rational::zero())
    }

    /// Binds `x1..xk` to `prefix` and renumbers the remaining variables.
    ///
    /// The result is the exact substitution scaled by a positive integer so
    /// that it has integer coefficients.
    pub fn eval_partial(&self, prefix: &[Rational]) -> Poly {
        let k = prefix.len();
        assert!(k <= self.nvars, "prefix longer than variable count");
        let powers = PowerTable::new(self, prefix);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = Rational::from_integer(c.clone());
            for (v, &e) in m.0[..k].iter().enumerate() {
                if e > 0 {
                    t *= powers.get(v, e);
                }
            }
            let rest = Monomial(m.0[k..].to_vec());
            let slot = acc.entry(rest).or_insert_with(Rational::zero);
            *slot += t;
        }
        let lcm = acc
            .values()
            .fold(BigInt::one(), |l, r| l.lcm(r.denom()));
        let mut p = Poly::zero(self.nvars - k);
        for (m, r) in acc {
            let c = r.numer() * (&lcm / r.denom());
            p.add_term(m, c);
        }
        p
    }

    /// Substitutes `x1..xk = prefix` and returns the result as a univariate
    /// polynomial in `x_{k+1}` (scaled by a positive integer).
    ///
    /// Panics if the polynomial involves a variable beyond `x_{k+1}`.
    pub fn specialize(&self, prefix: &[Rational]) -> UPoly {
        let k = prefix.len();
        assert!(
            self.level() <= k + 1,
            "specialization leaves more than one variable"
        );
        let powers = PowerTable::new(self, prefix);
        let deg = if k < self.nvars {
            self.degree_in(k) as usize
        } else {
            0
        };
        let mut acc = vec![Rational::zero(); deg + 1];
        for (m, c) in &self.terms {
            let mut t = Rational::from_integer(c.clone());
            for (v, &e) in m.0[..k.min(self.nvars)].iter().enumerate() {
                if e > 0 {
                    t *= powers.get(v, e);
                }
            }
            let e = if k < self.nvars { m.0[k] as usize } else { 0 };
            acc[e] += t;
        }
        let lcm = acc.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
        UPoly::new(
            acc.into_iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect(),
        )
    }

    /// If at most one variable occurs, returns it (or 0 for constants) and
    /// the dense univariate view.
    pub fn to_univariate(&self) -> Option<(usize, UPoly)> {
        match self.support().as_slice() {
            [] => Some((0, UPoly::constant(self.constant_value().unwrap_or_default()))),
            [var] => {
                let coeffs = self
                    .coeffs_in(*var)
                    .iter()
                    .map(|c| c.constant_value().expect("coefficient free of other variables"))
                    .collect();
                Some((*var, UPoly::new(coeffs)))
            }
            _ => None,
        }
    }

    pub fn from_univariate(nvars: usize, var: usize, u: &UPoly) -> Poly {
        let mut p = Poly::zero(nvars);
        for (e, c) in u.coeffs().iter().enumerate() {
            let mut exps = vec![0; nvars];
            exps[var] = e as u32;
            p.add_term(Monomial(exps), c.clone());
        }
        p
    }

    /// Canonical text with the given variable names, e.g.
    /// `256x^4+256x^3+352x^2+16x-255`.
    pub fn to_text<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                out.push('-');
            } else if i > 0 {
                out.push('+');
            }
            let is_unit_monomial = m.total_degree() == 0;
            if !abs.is_one() || is_unit_monomial {
                out.push_str(&abs.to_string());
            }
            let mut first = true;
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    out.push('*');
                }
                first = false;
                out.push_str(names[v].as_ref());
                if e > 1 {
                    out.push('^');
                    out.push_str(&e.to_string());
                }
            }
        }
        out
    }

    /// Default variable names `x1..xn`.
    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

/// Cached powers of point coordinates used during evaluation.
struct PowerTable {
    table: Vec<Vec<Rational>>,
}

impl PowerTable {
    fn new(p: &Poly, point: &[Rational]) -> Self {
        let table = point
            .iter()
            .enumerate()
            .map(|(v, x)| {
                let d = if v < p.nvars { p.degree_in(v) } else { 0 };
                let mut pw = Vec::with_capacity(d as usize + 1);
                pw.push(Rational::one());
                for i in 1..=d as usize {
                    let next = &pw[i - 1] * x;
                    pw.push(next);
                }
                pw
            })
            .collect();
        PowerTable { table }
    }

    fn get(&self, var: usize, e: u32) -> &Rational {
        &self.table[var][e as usize]
    }
}

impl Ord for Poly {
    /// Canonical order: level, then total degree, then terms from the
    /// leading one down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.level()
            .cmp(&other.level())
            .then_with(|| self.total_degree().cmp(&other.total_degree()))
            .then_with(|| self.terms().cmp(other.terms()))
            .then_with(|| self.nvars.cmp(&other.nvars))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&Poly::default_names(self.nvars)))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;

    /// Tiny dense builder: `p(2, &[(&[1, 0], 3)])` is `3x`.
    pub fn p(nvars: usize, terms: &[(&[u32], i64)]) -> Poly {
        Poly::from_terms(
            nvars,
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
    }

    pub fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn f1() -> Poly {
        p(2, &[(&[0, 1], 16), (&[2, 0], -16), (&[1, 0], -8), (&[0, 0], -1)])
    }

    pub fn f2() -> Poly {
        p(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)])
    }

    pub fn f3() -> Poly {
        p(
            2,
            &[
                (&[4, 0], 256),
                (&[3, 0], 256),
                (&[2, 0], 352),
                (&[1, 0], 16),
                (&[0, 0], -255),
            ],
        )
    }

    pub fn f4() -> Poly {
        p(2, &[(&[1, 0], 1), (&[0, 0], 1)])
    }

    pub fn f5() -> Poly {
        p(2, &[(&[1, 0], 1), (&[0, 0], -1)])
    }
}
