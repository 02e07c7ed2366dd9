//! The open McCallum projection of a single polynomial relative to the other
//! bound polynomials of its level.

use alloc::vec::Vec;

use super::gcd::factor_set;
use super::{discriminant, resultant, Poly, PolyError};

/// Factors of the leading coefficient and discriminant of `p` in its main
/// variable, and of its resultants with each of `neighbors` (polynomials of
/// the same level). Constants and zero images are dropped; every output has
/// level below `level(p)`.
pub fn proj_open_mc(p: &Poly, neighbors: &[Poly]) -> Result<Vec<Poly>, PolyError> {
    let k = p.level();
    if k == 0 {
        return Err(PolyError::ConstantInVariable(1));
    }
    let var = k - 1;
    let mut images = Vec::with_capacity(neighbors.len() + 2);
    images.push(p.leading_coeff(var));
    images.push(discriminant(p, var)?);
    for b in neighbors {
        if b.normalize() != p.normalize() {
            debug_assert_eq!(b.level(), k, "neighbor of a different level");
            images.push(resultant(p, b, var)?);
        }
    }
    images.retain(|q| !q.is_zero() && !q.is_constant());
    factor_set(&images)
}
