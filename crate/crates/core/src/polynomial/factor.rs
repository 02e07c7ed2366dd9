//! Factorization of univariate integer polynomials into irreducibles over
//! the rationals: Cantor–Zassenhaus modulo a small prime, Hensel lifting,
//! and recombination of lifted factors by trial division.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{Poly, PolyError, UPoly};

/// Irreducible factors over `Q` of the squarefree part of a polynomial in
/// at most one variable, primitive with positive leading coefficient and in
/// canonical order. Constants have no factors.
pub fn factor_univariate(p: &Poly) -> Result<Vec<Poly>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let (var, u) = p.to_univariate().ok_or(PolyError::NotUnivariate)?;
    let mut out: Vec<Poly> = factor_squarefree(&u.squarefree_part())
        .iter()
        .map(|f| Poly::from_univariate(p.nvars(), var, f).normalize())
        .collect();
    out.sort();
    Ok(out)
}

/// Irreducible factors of a squarefree polynomial, each primitive with
/// positive leading coefficient.
pub(crate) fn factor_squarefree(f: &UPoly) -> Vec<UPoly> {
    let mut f = f.primitive();
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    if f.coeffs()[0].is_zero() {
        out.push(UPoly::x());
        f = f.div_x();
    }
    if f.degree() == 1 {
        out.push(f);
    } else if f.degree() > 1 {
        out.extend(zassenhaus(&f));
    }
    out
}

fn zassenhaus(f: &UPoly) -> Vec<UPoly> {
    let n = f.degree();
    let (fp, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    let lc = f.lc();
    let norm: BigInt = f.coeffs().iter().map(|c| c.abs()).sum();
    let bound: BigInt = (BigInt::one() << n) * norm * lc.abs() * 2;
    let p = BigInt::from(fp.p);
    let mut k = 1u32;
    let mut modulus = p.clone();
    while modulus <= bound {
        modulus *= &p;
        k += 1;
    }
    let lc_inv = mod_inverse(&lc, &modulus);
    let monic: Vec<BigInt> = f.coeffs().iter().map(|c| (c * &lc_inv).mod_floor(&modulus)).collect();
    let lifted = multi_lift(&fp, &monic, &modular, k, &modulus);
    recombine(f, lifted, &modulus)
}

/// Tries subsets of lifted factors of increasing size as true factors.
fn recombine(f: &UPoly, mut lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<UPoly> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in Combinations::new(lifted.len(), size) {
            let lc = f.lc();
            let mut g = vec![lc.clone()];
            for &i in &subset {
                g = zmul(&g, &lifted[i], modulus);
            }
            let candidate = UPoly::new(g.iter().map(|c| symmetric(c, modulus)).collect()).primitive();
            if let Some(q) = f.exact_div(&candidate) {
                out.push(candidate);
                f = q.primitive();
                let mut keep = Vec::new();
                for (i, l) in lifted.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(l);
                    }
                }
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if !f.is_constant() {
        out.push(f);
    }
    out
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// `k`-subsets of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(cur)
    }
}

/// Picks the smallest odd prime not dividing the leading coefficient for
/// which `f` stays squarefree, and returns the monic irreducible factors
/// of `f` modulo it.
fn choose_prime(f: &UPoly) -> (Fp, Vec<Vec<u64>>) {
    let mut p = 3u64;
    loop {
        if is_prime(p) && !(f.lc() % BigInt::from(p)).is_zero() {
            let fp = Fp { p };
            let g = fp.reduce(f.coeffs());
            let dg = fp.derivative(&g);
            if fp.gcd(&g, &dg).len() == 1 {
                let monic = fp.monic(&g);
                let mut factors = Vec::new();
                let mut rng = ChaCha8Rng::seed_from_u64(p);
                for (part, d) in fp.distinct_degree(&monic) {
                    fp.equal_degree(&part, d, &mut rng, &mut factors);
                }
                factors.sort();
                return (fp, factors);
            }
        }
        p += 2;
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Arithmetic in `F_p[x]`; polynomials are coefficient vectors from the
/// constant term up, with no trailing zeros.
struct Fp {
    p: u64,
}

impl Fp {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn reduce(&self, c: &[BigInt]) -> Vec<u64> {
        let p = BigInt::from(self.p);
        Self::trim(
            c.iter()
                .map(|x| x.mod_floor(&p).to_u64().expect("reduced"))
                .collect(),
        )
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        Self::trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % self.p)
                .collect(),
        )
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        Self::trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&0) + self.p - b.get(i).unwrap_or(&0)) % self.p)
                .collect(),
        )
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        Self::trim(out)
    }

    fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        Self::trim(a.iter().map(|x| x * k % self.p).collect())
    }

    fn pow_u64(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow_u64(a, self.p - 2)
    }

    fn monic(&self, a: &[u64]) -> Vec<u64> {
        match a.last() {
            Some(&l) => self.scale(a, self.inv(l)),
            None => vec![],
        }
    }

    fn divrem(&self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert!(!b.is_empty(), "division by zero in F_p[x]");
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (vec![], r);
        }
        let inv = self.inv(*b.last().expect("nonzero"));
        let mut q = vec![0u64; r.len() - b.len() + 1];
        for i in (0..q.len()).rev() {
            let c = r[i + b.len() - 1] * inv % self.p;
            q[i] = c;
            if c != 0 {
                for (j, y) in b.iter().enumerate() {
                    r[i + j] = (r[i + j] + self.p - c * y % self.p) % self.p;
                }
            }
        }
        (Self::trim(q), Self::trim(r))
    }

    fn rem(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.divrem(a, b).1
    }

    fn derivative(&self, a: &[u64]) -> Vec<u64> {
        Self::trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * (i as u64 % self.p) % self.p)
                .collect(),
        )
    }

    /// Monic gcd.
    fn gcd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s a + t b = g` and `g` monic.
    fn ext_gcd(&self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], vec![]);
        let (mut t0, mut t1) = (vec![], vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s);
            t0 = core::mem::replace(&mut t1, t);
        }
        let inv = self.inv(*r0.last().expect("nonzero gcd"));
        (
            self.scale(&r0, inv),
            self.scale(&s0, inv),
            self.scale(&t0, inv),
        )
    }

    fn powmod(&self, base: &[u64], e: &BigUint, m: &[u64]) -> Vec<u64> {
        let mut acc = vec![1u64];
        let base = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), m);
            }
        }
        acc
    }

    /// Splits a monic squarefree polynomial into products of irreducibles
    /// of equal degree, tagged with that degree.
    fn distinct_degree(&self, f: &[u64]) -> Vec<(Vec<u64>, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let p = BigUint::from(self.p);
        let mut d = 1;
        while f.len() > 2 * d {
            h = self.powmod(&h, &p, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if g.len() > 1 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.len() > 1 {
            let deg = f.len() - 1;
            out.push((f, deg));
        }
        out
    }

    /// Cantor–Zassenhaus splitting of a product of irreducibles of degree `d`.
    fn equal_degree(&self, f: &[u64], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Vec<u64>>) {
        let n = f.len() - 1;
        if n == d {
            out.push(f.to_vec());
            return;
        }
        let e = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a = Self::trim((0..n).map(|_| rng.next_u64() % self.p).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, f), &[1]);
            let g = self.gcd(&b, f);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.divrem(f, &g).0;
                self.equal_degree(&g, d, rng, out);
                self.equal_degree(&self.monic(&h), d, rng, out);
                return;
            }
        }
    }
}

fn to_big(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn ztrim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out.into_iter().map(|c| c.mod_floor(m)).collect())
}

/// Lifts `f ≡ g h (mod p)` to a factorization modulo `p^k`, with `f`, `g`,
/// `h` monic.
fn hensel_lift(fp: &Fp, f: &[BigInt], g: &[u64], h: &[u64], k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (_, s, t) = fp.ext_gcd(g, h);
    let p = BigInt::from(fp.p);
    let mut big_g = to_big(g);
    let mut big_h = to_big(h);
    let mut pj = p.clone();
    for _ in 1..k {
        let mut prod = vec![BigInt::zero(); big_g.len() + big_h.len() - 1];
        for (i, x) in big_g.iter().enumerate() {
            for (j, y) in big_h.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let diff: Vec<BigInt> = (0..prod.len().max(f.len()))
            .map(|i| {
                let fi = f.get(i).cloned().unwrap_or_default();
                let pi = prod.get(i).cloned().unwrap_or_default();
                let d = fi - pi;
                debug_assert!((&d % &pj).is_zero());
                d / &pj
            })
            .collect();
        let e = fp.reduce(&diff);
        let et = fp.mul(&e, &t);
        let (q, a) = fp.divrem(&et, g);
        let b = fp.add(&fp.mul(&e, &s), &fp.mul(&q, h));
        for (i, c) in a.iter().enumerate() {
            big_g[i] += &pj * BigInt::from(*c);
        }
        for (i, c) in b.iter().enumerate() {
            big_h[i] += &pj * BigInt::from(*c);
        }
        pj *= &p;
    }
    (big_g, big_h)
}

fn multi_lift(fp: &Fp, f: &[BigInt], factors: &[Vec<u64>], k: u32, m: &BigInt) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        return vec![f.to_vec()];
    }
    let rest = factors[1..]
        .iter()
        .fold(vec![1u64], |acc, g| fp.mul(&acc, g));
    let (g, h) = hensel_lift(fp, f, &factors[0], &rest, k);
    let h: Vec<BigInt> = ztrim(h.into_iter().map(|c| c.mod_floor(m)).collect());
    let mut out = vec![ztrim(g.into_iter().map(|c| c.mod_floor(m)).collect())];
    out.extend(multi_lift(fp, &h, &factors[1..], k, m));
    out
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::*;

    fn u(c: &[i64]) -> UPoly {
        UPoly::from_i64(c)
    }

    fn product(fs: &[UPoly]) -> UPoly {
        fs.iter().fold(u(&[1]), |acc, f| acc.mul(f))
    }

    #[test]
    fn examples() {
        let d = p(2, &[(&[2, 0], -4), (&[0, 0], 4)]);
        assert_eq!(factor_univariate(&d).unwrap(), vec![f5(), f4()]);
        assert_eq!(factor_univariate(&f3()).unwrap(), vec![f3()]);
        let x = p(1, &[(&[1], 1)]);
        assert_eq!(factor_univariate(&x).unwrap(), vec![x.clone()]);
        assert_eq!(factor_univariate(&Poly::zero(1)), Err(PolyError::ZeroPolynomial));
        assert_eq!(factor_univariate(&f1()), Err(PolyError::NotUnivariate));
    }

    #[test]
    fn level_two_univariate() {
        // y^2 - 4 in Z[x, y]
        let g = p(2, &[(&[0, 2], 1), (&[0, 0], -4)]);
        let got = factor_univariate(&g).unwrap();
        assert_eq!(
            got,
            vec![p(2, &[(&[0, 1], 1), (&[0, 0], -2)]), p(2, &[(&[0, 1], 1), (&[0, 0], 2)])]
        );
    }

    #[test]
    fn splits_into_known_irreducibles() {
        let parts = [u(&[1, 0, 1]), u(&[-2, 0, 0, 1]), u(&[3, 1]), u(&[1, -1, 0, 0, 2])];
        let f = product(&parts);
        let mut got = factor_squarefree(&f);
        got.sort_by_key(|g| (g.degree(), g.coeffs().to_vec()));
        let mut want: Vec<UPoly> = parts.iter().map(UPoly::primitive).collect();
        want.sort_by_key(|g| (g.degree(), g.coeffs().to_vec()));
        assert_eq!(got, want);
    }

    #[test]
    fn swinnerton_dyer_is_irreducible() {
        // x^4 - 10x^2 + 1 splits modulo every prime
        let f = u(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_squarefree(&f), vec![f]);
    }

    #[test]
    fn non_monic_factors() {
        let parts = [u(&[1, 6]), u(&[-5, 0, 3]), u(&[7, 2, 0, 4])];
        let f = product(&parts);
        let got = factor_squarefree(&f);
        assert_eq!(got.len(), 3);
        assert_eq!(product(&got).primitive(), f.primitive());
    }

    #[test]
    fn combinations_enumerate_all_subsets() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(Combinations::new(3, 3).count(), 1);
    }
}
