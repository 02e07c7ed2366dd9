use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Dense univariate polynomial over `Z`, coefficients from the constant term
/// upwards, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<BigInt>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Sign of `p(r)` computed without fractions: `b^d p(a/b)` with `b > 0`.
    pub fn sign_at(&self, r: &Rational) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let (a, b) = (r.numer(), r.denom());
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        // Horner on the homogenised form sum c_i a^i b^(d-i)
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        acc.sign_ordering()
    }

    pub fn eval(&self, r: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * r + Rational::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        UPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn scale(&self, k: &BigInt) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        UPoly::new(out)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    /// `p(-x)`
    pub fn reflect(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
    pub fn prem(&self, b: &UPoly) -> UPoly {
        assert!(!b.is_zero());
        if self.is_zero() || self.degree() < b.degree() {
            return self.clone();
        }
        let db = b.degree();
        let lb = b.lc();
        let mut r = self.coeffs.clone();
        let mut e = self.degree() - db + 1;
        while r.len() > db && !r.is_empty() {
            let lr = r.last().cloned().unwrap();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[j + shift] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            e -= 1;
        }
        let factor = num_traits::pow(lb, e);
        UPoly::new(r.into_iter().map(|c| c * &factor).collect())
    }

    /// Exact division in `Z[x]`; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        assert!(!d.is_zero());
        if self.is_zero() {
            return Some(UPoly::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let ld = d.lc();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let top = &r[i + dd];
            let (qc, rem) = top.div_rem(&ld);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &qc * dc;
            }
            q[i] = qc;
        }
        if r.iter().all(Zero::is_zero) {
            Some(UPoly::new(q))
        } else {
            None
        }
    }

    /// Gcd up to integer content: primitive with positive leading
    /// coefficient.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == 0 {
                return UPoly::constant(BigInt::one());
            }
            let r = a.prem(&b);
            a = b;
            b = r.primitive();
        }
        a
    }

    /// Squarefree part, primitive with positive leading coefficient.
    pub fn squarefree_part(&self) -> UPoly {
        if self.degree() < 2 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative()).primitive();
        if g.is_constant() {
            return self.primitive();
        }
        self.primitive()
            .exact_div(&g)
            .expect("gcd divides")
            .primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree() < 2 || self.gcd(&self.derivative()).is_constant()
    }

    /// Number of sign changes in the coefficient sequence (zeros skipped).
    pub fn sign_variations(&self) -> usize {
        let mut last: Option<bool> = None;
        let mut count = 0;
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if last.is_some_and(|l| l != neg) {
                count += 1;
            }
            last = Some(neg);
        }
        count
    }

    /// `p(x + 1)`
    pub fn taylor_shift_one(&self) -> UPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = a[j + 1].clone();
                a[j] += t;
            }
        }
        UPoly::new(a)
    }

    /// `x^d p(1/x)`
    pub fn reverse(&self) -> UPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        UPoly::new(c)
    }

    /// `2^(deg) p(x/2)`: halves the variable keeping integer coefficients.
    pub fn halve_var(&self) -> UPoly {
        let d = self.degree();
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (d - i))
                .collect(),
        )
    }

    /// `p(2^k x)`
    pub fn scale_var_pow2(&self, k: u32) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (k as usize * i))
                .collect(),
        )
    }

    /// Divides out `x` once (caller guarantees the constant term is zero).
    pub fn div_x(&self) -> UPoly {
        debug_assert!(self.coeffs.first().is_none_or(Zero::is_zero));
        UPoly::new(self.coeffs.iter().skip(1).cloned().collect())
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly{:?}", self.coeffs.iter().map(|c| c.to_str_radix(10)).collect::<Vec<_>>())
    }
}
