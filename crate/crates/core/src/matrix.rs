//! Fraction-free determinants over exact rings.

use num_traits::{One, Zero};

use crate::arith::Int;

/// A commutative ring whose elements support exact division by a known divisor.
pub trait ExactRing: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn mul_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// `self / divisor`, where the quotient is known to be exact.
    fn div_exact(&self, divisor: &Self) -> Self;
}

impl ExactRing for Int {
    fn zero_like(&self) -> Self {
        Int::zero()
    }

    fn one_like(&self) -> Self {
        Int::one()
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn div_exact(&self, divisor: &Self) -> Self {
        debug_assert!((self % divisor).is_zero(), "inexact division");
        self / divisor
    }
}

/// Determinant of a square matrix by Bareiss elimination. `unit` supplies the
/// ring identity for the empty matrix.
pub fn bareiss_determinant<R: ExactRing>(mut a: Vec<Vec<R>>, unit: &R) -> R {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        return unit.one_like();
    }
    let mut negate = false;
    let mut previous = unit.one_like();
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&i| !a[i][k].is_zero_elem()) else {
            return unit.zero_like();
        };
        if pivot != k {
            a.swap(pivot, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let value = a[i][j].mul_ref(&a[k][k]).sub_ref(&a[i][k].mul_ref(&a[k][j]));
                a[i][j] = value.div_exact(&previous);
            }
            a[i][k] = unit.zero_like();
        }
        previous = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.neg_ref()
    } else {
        det
    }
}

/// Integer determinant.
pub fn determinant_int(a: &[Vec<Int>]) -> Int {
    bareiss_determinant(a.to_vec(), &Int::one())
}
