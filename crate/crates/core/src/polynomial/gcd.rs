//! Multivariate gcds by recursive content splitting and primitive remainder
//! sequences, and the squarefree coprime basis built on them.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed};

use super::factor::factor_univariate;
use super::resultant::prem;
use super::{Poly, PolyError};

fn with_positive_lc(p: Poly) -> Poly {
    if p.lex_leading_coeff().is_some_and(|c| c.is_negative()) {
        -p
    } else {
        p
    }
}

/// Greatest common divisor in `Z[x1..xn]`, including the integer content,
/// with positive iterated leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return with_positive_lc(b.clone());
    }
    if b.is_zero() {
        return with_positive_lc(a.clone());
    }
    let v = a.level().max(b.level());
    if v == 0 {
        let ca = a.constant_value().expect("constant");
        let cb = b.constant_value().expect("constant");
        return Poly::constant(a.nvars(), ca.gcd(&cb));
    }
    let var = v - 1;
    let (ca, pa) = split_content(a, var);
    let (cb, pb) = split_content(b, var);
    let c = gcd(&ca, &cb);
    let g = primitive_prs_gcd(&pa, &pb, var);
    with_positive_lc(&c * &g)
}

/// Content with respect to `var` (gcd of the coefficients in `var`) and the
/// corresponding primitive part.
pub(crate) fn split_content(p: &Poly, var: usize) -> (Poly, Poly) {
    let coeffs = p.coeffs_in(var);
    let mut c = Poly::zero(p.nvars());
    for k in coeffs.iter().rev() {
        c = gcd(&c, k);
        if c.constant_value().is_some_and(|v| v.is_one()) {
            break;
        }
    }
    let pp = p.exact_div(&c).expect("content divides");
    (c, pp)
}

fn primitive_dense(a: Vec<Poly>) -> Vec<Poly> {
    let nvars = a[0].nvars();
    let mut c = Poly::zero(nvars);
    for k in &a {
        c = gcd(&c, k);
    }
    a.iter()
        .map(|k| k.exact_div(&c).expect("content divides"))
        .collect()
}

/// Gcd of two polynomials primitive in `var`.
fn primitive_prs_gcd(a: &Poly, b: &Poly, var: usize) -> Poly {
    let nvars = a.nvars();
    let mut x = a.coeffs_in(var);
    let mut y = b.coeffs_in(var);
    if x.len() < y.len() {
        core::mem::swap(&mut x, &mut y);
    }
    loop {
        if y.len() <= 1 {
            return Poly::one(nvars);
        }
        let r = prem(&x, &y);
        if r.is_empty() {
            return Poly::from_coeffs(nvars, var, &y);
        }
        x = y;
        y = primitive_dense(r);
    }
}

/// Finest squarefree coprime basis of `polys`: primitive, pairwise coprime,
/// each squarefree and content-free in its main variable, such that every
/// input is a rational constant times a product of powers of basis elements.
/// Sorted in canonical order.
pub fn squarefree_basis(polys: &[Poly]) -> Result<Vec<Poly>, PolyError> {
    if polys.iter().any(Poly::is_zero) {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut basis: Vec<Poly> = Vec::new();
    let mut work: Vec<Poly> = polys.iter().rev().cloned().collect();
    while let Some(f) = work.pop() {
        if f.is_constant() {
            continue;
        }
        let f = f.normalize();
        let var = f.level() - 1;
        let (c, pp) = split_content(&f, var);
        if !c.is_constant() {
            work.push(c);
            work.push(pp);
            continue;
        }
        let g = gcd(&f, &f.derivative(var));
        if g.degree_in(var) > 0 {
            work.push(f.exact_div(&g).expect("gcd divides"));
            work.push(g);
            continue;
        }
        let shared = basis.iter().enumerate().find_map(|(i, b)| {
            let g = gcd(&f, b);
            (!g.is_constant()).then_some((i, g))
        });
        match shared {
            None => basis.push(f),
            Some((i, g)) => {
                let b = basis.swap_remove(i);
                work.push(b.exact_div(&g).expect("gcd divides"));
                work.push(f.exact_div(&g).expect("gcd divides"));
                work.push(g);
            }
        }
    }
    basis.sort();
    Ok(basis)
}

/// Squarefree basis of `polys` with every univariate element further split
/// into its irreducible factors over the rationals.
pub fn factor_set(polys: &[Poly]) -> Result<Vec<Poly>, PolyError> {
    let mut out = Vec::new();
    for b in squarefree_basis(polys)? {
        if b.support().len() == 1 {
            out.extend(factor_univariate(&b)?);
        } else {
            out.push(b);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}
