//! Resultants and discriminants over `Z[x1..xn]` by the subresultant
//! polynomial remainder sequence, computed on the recursive view of a
//! polynomial as a dense list of coefficients in the eliminated variable.

use alloc::vec::Vec;

use super::{Poly, PolyError};

type Dense = Vec<Poly>;

fn degree(a: &Dense) -> usize {
    a.len().saturating_sub(1)
}

fn trim(a: &mut Dense) {
    while a.last().is_some_and(Poly::is_zero) {
        a.pop();
    }
}

fn lc(a: &Dense) -> &Poly {
    a.last().expect("nonzero dense polynomial")
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
pub(crate) fn prem(a: &Dense, b: &Dense) -> Dense {
    let db = degree(b);
    if a.is_empty() || degree(a) < db {
        return a.clone();
    }
    let lb = lc(b).clone();
    let mut r = a.clone();
    let mut e = degree(a) - db + 1;
    while !r.is_empty() && degree(&r) >= db {
        let lr = lc(&r).clone();
        let shift = degree(&r) - db;
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[j + shift] = &r[j + shift] - &(&lr * bc);
        }
        debug_assert!(r.last().is_some_and(Poly::is_zero));
        r.pop();
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn div_all(a: &Dense, d: &Poly) -> Dense {
    a.iter()
        .map(|c| c.exact_div(d).expect("subresultant division is exact"))
        .collect()
}

/// Resultant of two dense coefficient lists (not both constant).
fn dense_resultant(a: Dense, b: Dense, nvars: usize) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Poly::zero(nvars);
    }
    let (mut a, mut b) = (a, b);
    let mut sign_neg = false;
    if degree(&a) < degree(&b) {
        if degree(&a) % 2 == 1 && degree(&b) % 2 == 1 {
            sign_neg = true;
        }
        core::mem::swap(&mut a, &mut b);
    }
    if degree(&b) == 0 {
        // res(a, c) = c^deg(a)
        let r = lc(&b).pow(degree(&a) as u32);
        return if sign_neg { -r } else { r };
    }
    let mut g = Poly::one(nvars);
    let mut h = Poly::one(nvars);
    loop {
        let delta = degree(&a) - degree(&b);
        if degree(&a) % 2 == 1 && degree(&b) % 2 == 1 {
            sign_neg = !sign_neg;
        }
        let r = prem(&a, &b);
        let divisor = &g * &h.pow(delta as u32);
        a = b;
        b = div_all(&r, &divisor);
        g = lc(&a).clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => g
                .pow(d as u32)
                .exact_div(&h.pow(d as u32 - 1))
                .expect("subresultant division is exact"),
        };
        if b.is_empty() {
            return Poly::zero(nvars);
        }
        if degree(&b) == 0 {
            break;
        }
    }
    let da = degree(&a) as u32;
    let res = if da == 0 {
        h
    } else {
        lc(&b)
            .pow(da)
            .exact_div(&h.pow(da - 1))
            .expect("subresultant division is exact")
    };
    if sign_neg {
        -res
    } else {
        res
    }
}

/// Resultant of `p` and `q` with respect to variable `var` (0-based).
///
/// The value is exact and unnormalized: `res(y - x, y + x, y) = 2x`.
pub fn resultant(p: &Poly, q: &Poly, var: usize) -> Result<Poly, PolyError> {
    if p.degree_in(var) == 0 && q.degree_in(var) == 0 {
        return Err(PolyError::NoEliminationVariable(var + 1));
    }
    Ok(dense_resultant(p.coeffs_in(var), q.coeffs_in(var), p.nvars()))
}

/// Discriminant `(-1)^(d(d-1)/2) res(p, p') / ldcf(p)` in `var`; degree-one
/// polynomials have discriminant 1.
pub fn discriminant(p: &Poly, var: usize) -> Result<Poly, PolyError> {
    let d = p.degree_in(var);
    if d == 0 {
        return Err(PolyError::ConstantInVariable(var + 1));
    }
    if d == 1 {
        return Ok(Poly::one(p.nvars()));
    }
    let r = resultant(p, &p.derivative(var), var)?;
    let disc = r
        .exact_div(&p.leading_coeff(var))
        .expect("leading coefficient divides res(p, p')");
    let half = (d as u64 * (d as u64 - 1) / 2) % 2;
    Ok(if half == 1 { -disc } else { disc })
}

/// Resultant as the determinant of the Sylvester matrix, by fraction-free
/// Bareiss elimination. Independent of the remainder-sequence route and
/// much slower; used to cross-check it.
pub fn sylvester_resultant(p: &Poly, q: &Poly, var: usize) -> Poly {
    let nvars = p.nvars();
    let a = p.coeffs_in(var);
    let b = q.coeffs_in(var);
    let (m, n) = (degree(&a), degree(&b));
    if a.is_empty() || b.is_empty() {
        return Poly::zero(nvars);
    }
    let size = m + n;
    if size == 0 {
        return Poly::one(nvars);
    }
    let mut mat: Vec<Vec<Poly>> = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = alloc::vec![Poly::zero(nvars); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        mat.push(row);
    }
    for i in 0..m {
        let mut row = alloc::vec![Poly::zero(nvars); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        mat.push(row);
    }
    bareiss_det(mat, nvars)
}

fn bareiss_det(mut mat: Vec<Vec<Poly>>, nvars: usize) -> Poly {
    let n = mat.len();
    let mut negate = false;
    let mut prev = Poly::one(nvars);
    for k in 0..n {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    negate = !negate;
                }
                None => return Poly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            mat[i][k] = Poly::zero(nvars);
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::*;

    #[test]
    fn example_resultant_is_f3() {
        let r = resultant(&f1(), &f2(), 1).unwrap();
        assert_eq!(r.normalize(), f3());
        assert_eq!(r, sylvester_resultant(&f1(), &f2(), 1));
    }

    #[test]
    fn linear_pair_resultant() {
        let a = p(2, &[(&[0, 1], 1), (&[1, 0], -1)]);
        let b = p(2, &[(&[0, 1], 1), (&[1, 0], 1)]);
        // det [[1, -x], [1, x]] = 2x
        let expected = p(2, &[(&[1, 0], 2)]);
        assert_eq!(sylvester_resultant(&a, &b, 1), expected);
        assert_eq!(resultant(&a, &b, 1).unwrap(), expected);
        assert_eq!(resultant(&b, &a, 1).unwrap(), -expected);
    }

    #[test]
    fn resultant_with_itself_vanishes() {
        assert!(resultant(&f2(), &f2(), 1).unwrap().is_zero());
        assert!(resultant(&f1(), &f1(), 1).unwrap().is_zero());
    }

    #[test]
    fn constant_in_var_is_an_error() {
        assert_eq!(
            resultant(&f3(), &f4(), 1),
            Err(PolyError::NoEliminationVariable(2))
        );
        assert!(discriminant(&f3(), 1).is_err());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(
            discriminant(&f2(), 1).unwrap(),
            p(2, &[(&[2, 0], -4), (&[0, 0], 4)])
        );
        let fold = p(2, &[(&[0, 2], 1), (&[1, 0], -1)]);
        assert_eq!(discriminant(&fold, 1).unwrap(), p(2, &[(&[1, 0], 4)]));
        assert_eq!(discriminant(&f1(), 1).unwrap(), Poly::one(2));
        // b^2 - 4ac for a y^2 + b y + c with a = x
        let g = p(2, &[(&[1, 2], 1), (&[0, 0], 1)]);
        assert_eq!(discriminant(&g, 1).unwrap(), p(2, &[(&[1, 0], -4)]));
    }

    #[test]
    fn higher_degree_matches_sylvester() {
        // y^3 + x y + 1 and 2y^2 - x^2 y + 3
        let a = p(2, &[(&[0, 3], 1), (&[1, 1], 1), (&[0, 0], 1)]);
        let b = p(2, &[(&[0, 2], 2), (&[2, 1], -1), (&[0, 0], 3)]);
        assert_eq!(resultant(&a, &b, 1).unwrap(), sylvester_resultant(&a, &b, 1));
        assert_eq!(resultant(&b, &a, 1).unwrap(), sylvester_resultant(&b, &a, 1));
        // degree gap of 3
        let c = p(2, &[(&[0, 4], 1), (&[1, 0], -2)]);
        let d = p(2, &[(&[0, 1], 3), (&[0, 0], 1)]);
        assert_eq!(resultant(&c, &d, 1).unwrap(), sylvester_resultant(&c, &d, 1));
    }
}
