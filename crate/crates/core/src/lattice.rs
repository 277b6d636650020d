//! Exact integer lattices: Gram-Schmidt, LLL, determinants and classical bounds.
//!
//! Basis vectors are rows. Every computation is exact; rationals only appear in
//! Gram-Schmidt data and in the dual basis used to bound the exhaustive search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{Int, Nat};
use crate::matrix::determinant_int;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("basis must be square and nonempty, got {rows} rows of lengths {lengths:?}")]
    NotSquare { rows: usize, lengths: Vec<usize> },
    #[error("dimension {n} exceeds the supported maximum {max}")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("delta must lie in (1/4, 1], got {0}")]
    InvalidDelta(BigRational),
}

/// A square integer basis, one vector per row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Basis {
    rows: Vec<Vec<Int>>,
}

impl Basis {
    pub fn new(rows: Vec<Vec<Int>>) -> Result<Self, LatticeError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare {
                rows: n,
                lengths: rows.iter().map(Vec::len).collect(),
            });
        }
        Ok(Basis { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Basis::new(rows.iter().map(|r| r.iter().map(|&v| Int::from(v)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        Basis { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<Vec<Int>> {
        self.rows
    }
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(v: &[Int]) -> Int {
    dot(v, v)
}

fn rational_dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn to_rational(v: &[Int]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Exact Gram-Schmidt orthogonalization of a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramSchmidtData {
    pub ortho: Vec<Vec<BigRational>>,
    /// `mu[i][j] = <v_i, v*_j> / |v*_j|^2` for `j < i`; zero elsewhere.
    pub mu: Vec<Vec<BigRational>>,
    pub norms_sq: Vec<BigRational>,
}

impl GramSchmidtData {
    /// `|mu[i][j]| <= 1/2` for every `j < i`.
    pub fn is_size_reduced(&self) -> bool {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        self.mu
            .iter()
            .enumerate()
            .all(|(i, row)| row[..i].iter().all(|m| m.abs() <= half))
    }

    /// `|v*_k|^2 >= (delta - mu[k][k-1]^2) |v*_{k-1}|^2` for consecutive pairs.
    pub fn satisfies_lovasz(&self, delta: &BigRational) -> bool {
        (1..self.norms_sq.len()).all(|k| {
            let mu = &self.mu[k][k - 1];
            self.norms_sq[k] >= (delta - mu * mu) * &self.norms_sq[k - 1]
        })
    }

    /// Product of the squared Gram-Schmidt norms, equal to `det^2`.
    pub fn volume_sq(&self) -> BigRational {
        self.norms_sq.iter().fold(BigRational::one(), |acc, v| acc * v)
    }
}

pub fn gram_schmidt(b: &Basis) -> Result<GramSchmidtData, LatticeError> {
    let n = b.dim();
    let mut ortho: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms_sq: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        let vi = to_rational(b.row(i));
        let mut star = vi.clone();
        for j in 0..i {
            let coefficient = rational_dot(&vi, &ortho[j]) / &norms_sq[j];
            for (s, o) in star.iter_mut().zip(&ortho[j]) {
                *s -= &coefficient * o;
            }
            mu[i][j] = coefficient;
        }
        let norm = rational_dot(&star, &star);
        if norm.is_zero() {
            return Err(LatticeError::DependentBasis);
        }
        ortho.push(star);
        norms_sq.push(norm);
    }
    Ok(GramSchmidtData { ortho, mu, norms_sq })
}

/// `|det|` of the basis by fraction-free elimination.
pub fn determinant(b: &Basis) -> Result<Nat, LatticeError> {
    let det = determinant_int(b.rows());
    if det.is_zero() {
        return Err(LatticeError::DependentBasis);
    }
    Ok(det.magnitude().clone())
}

/// Result of a reduction together with the change of basis: `transform * input = basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub basis: Basis,
    pub transform: Vec<Vec<Int>>,
}

/// The classical parameter `3/4`.
pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(4))
}

/// LLL-reduces a basis with parameter `delta`.
pub fn lll_reduce(b: &Basis, delta: &BigRational) -> Result<Basis, LatticeError> {
    Ok(lll_reduce_with_transform(b, delta)?.basis)
}

/// Integral LLL: all Gram-Schmidt quantities are carried as the integers
/// `d_i = prod |v*_j|^2 (j <= i)` and `lambda_{k,j} = d_j mu_{k,j}`.
pub fn lll_reduce_with_transform(b: &Basis, delta: &BigRational) -> Result<Reduction, LatticeError> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if delta <= &quarter || delta > &BigRational::one() {
        return Err(LatticeError::InvalidDelta(delta.clone()));
    }
    let (delta_num, delta_den) = (delta.numer().clone(), delta.denom().clone());
    let mut state = IntegralLll::new(b.rows().to_vec());
    let n = state.n;

    let mut k = 1usize;
    let mut k_max = 0usize;
    state.d[1] = norm_sq(&state.rows[0]);
    if state.d[1].is_zero() {
        return Err(LatticeError::DependentBasis);
    }
    while k < n {
        if k > k_max {
            k_max = k;
            state.extend_gram_schmidt(k)?;
        }
        loop {
            state.reduce(k, k - 1);
            // Lovasz: d_k d_{k-2} + lambda^2 >= delta d_{k-1}^2, with rows 0-based
            // so that d[i + 1] belongs to row i.
            let lambda = &state.lambda[k][k - 1];
            let lhs = &delta_den * (&state.d[k + 1] * &state.d[k - 1] + lambda * lambda);
            let rhs = &delta_num * &state.d[k] * &state.d[k];
            if lhs < rhs {
                state.swap(k, k_max);
                k = k.saturating_sub(1).max(1);
            } else {
                for l in (0..k.saturating_sub(1)).rev() {
                    state.reduce(k, l);
                }
                k += 1;
                break;
            }
        }
    }
    Ok(Reduction {
        basis: Basis { rows: state.rows },
        transform: state.transform,
    })
}

struct IntegralLll {
    n: usize,
    rows: Vec<Vec<Int>>,
    transform: Vec<Vec<Int>>,
    /// `d[0] = 1`, `d[i + 1]` is the Gram determinant of rows `0..=i`.
    d: Vec<Int>,
    lambda: Vec<Vec<Int>>,
}

impl IntegralLll {
    fn new(rows: Vec<Vec<Int>>) -> Self {
        let n = rows.len();
        let mut d = vec![Int::zero(); n + 1];
        d[0] = Int::one();
        IntegralLll {
            n,
            transform: Basis::identity(n).rows,
            rows,
            d,
            lambda: vec![vec![Int::zero(); n]; n],
        }
    }

    fn extend_gram_schmidt(&mut self, k: usize) -> Result<(), LatticeError> {
        for j in 0..=k {
            let mut u = dot(&self.rows[k], &self.rows[j]);
            for i in 0..j {
                u = (&self.d[i + 1] * &u - &self.lambda[k][i] * &self.lambda[j][i]) / &self.d[i];
            }
            if j < k {
                self.lambda[k][j] = u;
            } else {
                if u.is_zero() {
                    return Err(LatticeError::DependentBasis);
                }
                self.d[k + 1] = u;
            }
        }
        Ok(())
    }

    /// Size-reduces row `k` against row `l`.
    fn reduce(&mut self, k: usize, l: usize) {
        let dl = &self.d[l + 1];
        let twice = &self.lambda[k][l] * 2u32;
        if twice.magnitude() <= dl.magnitude() {
            return;
        }
        // nearest integer to lambda / d_l
        let q = (&twice + dl).div_floor(&(dl * 2u32));
        let (low, high) = self.rows.split_at_mut(k);
        for (a, b) in high[0].iter_mut().zip(&low[l]) {
            *a -= &q * b;
        }
        let (low, high) = self.transform.split_at_mut(k);
        for (a, b) in high[0].iter_mut().zip(&low[l]) {
            *a -= &q * b;
        }
        self.lambda[k][l] -= &q * dl;
        for i in 0..l {
            let delta = &q * &self.lambda[l][i];
            self.lambda[k][i] -= delta;
        }
    }

    fn swap(&mut self, k: usize, k_max: usize) {
        self.rows.swap(k, k - 1);
        self.transform.swap(k, k - 1);
        for j in 0..k - 1 {
            let tmp = std::mem::take(&mut self.lambda[k][j]);
            self.lambda[k][j] = std::mem::replace(&mut self.lambda[k - 1][j], tmp);
        }
        let lambda = self.lambda[k][k - 1].clone();
        let b = (&self.d[k - 1] * &self.d[k + 1] + &lambda * &lambda) / &self.d[k];
        for i in k + 1..=k_max {
            let t = self.lambda[i][k].clone();
            self.lambda[i][k] = (&self.d[k + 1] * &self.lambda[i][k - 1] - &lambda * &t) / &self.d[k];
            self.lambda[i][k - 1] = (&b * &t + &lambda * &self.lambda[i][k]) / &self.d[k + 1];
        }
        self.d[k] = b;
    }
}

/// `det(L)^2 <= prod |v_i|^2`. Always true; exposed as a self-test.
pub fn hadamard_check(b: &Basis) -> bool {
    let det = determinant_int(b.rows());
    let product: Int = b.rows().iter().map(|r| norm_sq(r)).product();
    &det * &det <= product
}

/// Largest dimension accepted by [`shortest_vector_exhaustive`].
pub const MAX_EXHAUSTIVE_DIM: usize = 5;

/// Minimal-norm nonzero lattice vector over coefficients `|x_i| <= coeff_bound`.
///
/// Each vector is identified with its negation; the representative returned has
/// its first nonzero entry positive, and ties are broken lexicographically.
pub fn shortest_vector_exhaustive(b: &Basis, coeff_bound: &Nat) -> Result<Vec<Int>, LatticeError> {
    let n = b.dim();
    if n > MAX_EXHAUSTIVE_DIM {
        return Err(LatticeError::DimensionTooLarge {
            n,
            max: MAX_EXHAUSTIVE_DIM,
        });
    }
    let bound = coeff_bound.to_i64().expect("coefficient bound fits in i64");
    let mut coefficients = vec![-bound; n];
    let mut best: Option<(Int, Vec<Int>)> = None;
    loop {
        if coefficients.iter().any(|&c| c != 0) {
            let mut v = vec![Int::zero(); n];
            for (c, row) in coefficients.iter().zip(b.rows()) {
                if *c != 0 {
                    for (a, x) in v.iter_mut().zip(row) {
                        *a += x * *c;
                    }
                }
            }
            if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                for x in v.iter_mut() {
                    *x = -&*x;
                }
            }
            let norm = norm_sq(&v);
            let better = match &best {
                None => true,
                Some((best_norm, best_v)) => norm < *best_norm || (norm == *best_norm && v < *best_v),
            };
            if better {
                best = Some((norm, v));
            }
        }
        // odometer over [-bound, bound]^n
        let mut i = 0;
        loop {
            if i == n {
                return best.map(|(_, v)| v).ok_or(LatticeError::DependentBasis);
            }
            if coefficients[i] < bound {
                coefficients[i] += 1;
                break;
            }
            coefficients[i] = -bound;
            i += 1;
        }
    }
}

/// A coefficient bound under which [`shortest_vector_exhaustive`] is certain to
/// see a shortest vector: with dual vectors `d_i`, any `v` no longer than the
/// shortest basis row has `|x_i| = |<v, d_i>| <= |v| |d_i|`.
pub fn exhaustive_coefficient_bound(b: &Basis) -> Result<Nat, LatticeError> {
    let dual = dual_basis(b)?;
    let shortest = b.rows().iter().map(|r| norm_sq(r)).min().expect("nonempty basis");
    let shortest = BigRational::from_integer(shortest);
    let mut bound = Nat::zero();
    for column in dual {
        let product = &shortest * rational_dot(&column, &column);
        // floor(sqrt(product)) via the integer square root of its ceiling
        let ceiling = product.ceil().to_integer();
        let root = ceiling.magnitude().sqrt();
        bound = bound.max(root);
    }
    Ok(bound)
}

/// Columns of the inverse matrix: vectors `d_j` with `<b_i, d_j> = [i = j]`.
pub fn dual_basis(b: &Basis) -> Result<Vec<Vec<BigRational>>, LatticeError> {
    let n = b.dim();
    let mut a: Vec<Vec<BigRational>> = b
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = to_rational(row);
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(LatticeError::DependentBasis)?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
    }
    // inverse is the right half; its columns are the dual vectors
    Ok((0..n).map(|j| (0..n).map(|i| a[i][n + j].clone()).collect()).collect())
}

/// Exact values of `gamma_n^n` for the Hermite constant, `n = 1..=8`.
pub struct HermiteTable;

impl HermiteTable {
    pub const MAX_DIM: usize = 8;

    pub fn gamma_power(n: usize) -> Option<BigRational> {
        let (num, den) = match n {
            1 => (1, 1),
            2 => (4, 3),
            3 => (2, 1),
            4 => (4, 1),
            5 => (8, 1),
            6 => (64, 3),
            7 => (64, 1),
            8 => (256, 1),
            _ => return None,
        };
        Some(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

/// Bound on `(|v|^2)^n` for a shortest vector `v`: `gamma_n^n det(L)^2`.
pub fn hermite_bound(b: &Basis) -> Result<BigRational, LatticeError> {
    let n = b.dim();
    let gamma = HermiteTable::gamma_power(n).ok_or(LatticeError::DimensionTooLarge {
        n,
        max: HermiteTable::MAX_DIM,
    })?;
    let det = BigInt::from(determinant(b)?);
    Ok(gamma * BigRational::from_integer(&det * &det))
}

/// Whether `v` respects the Hermite bound of `b`.
pub fn within_hermite_bound(b: &Basis, v: &[Int]) -> Result<bool, LatticeError> {
    let bound = hermite_bound(b)?;
    let power = num_traits::pow(norm_sq(v), b.dim());
    Ok(BigRational::from_integer(power) <= bound)
}

/// `|b_1|^{2n} <= 2^{n(n-1)/2} det^2`, the first-vector guarantee at `delta = 3/4`.
pub fn first_vector_bound_holds(b: &Basis) -> Result<bool, LatticeError> {
    let n = b.dim();
    let det = Int::from(determinant(b)?);
    let lhs = num_traits::pow(norm_sq(b.row(0)), n);
    let rhs = (Int::one() << (n * (n - 1) / 2)) * &det * &det;
    Ok(lhs <= rhs)
}

/// Whether `transform` is unimodular and maps `input` onto `output`.
pub fn is_unimodular_change(input: &Basis, transform: &[Vec<Int>], output: &Basis) -> bool {
    let n = input.dim();
    if transform.len() != n || output.dim() != n {
        return false;
    }
    let det = determinant_int(transform);
    if det.magnitude() != &Nat::one() {
        return false;
    }
    (0..n).all(|i| {
        (0..n).all(|j| {
            let value: Int = (0..n).map(|k| &transform[i][k] * &input.row(k)[j]).sum();
            value == output.row(i)[j]
        })
    })
}
