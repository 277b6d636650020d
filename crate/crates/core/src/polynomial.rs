//! Sparse multivariate integer polynomials, resultants and the norm predicates
//! used to certify small-root candidates.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{Int, Nat};
use crate::matrix::{bareiss_determinant, ExactRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("the zero polynomial has no norms")]
    ZeroPolynomial,
    #[error("polynomial is constant in variable {0}")]
    ZeroDegree(usize),
    #[error("polynomial is not monic in variable {0}")]
    NotMonic(usize),
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("bounds must be positive")]
    InvalidBound,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Integer polynomial in `nvars` variables, keyed by exponent tuple. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Int>,
}

/// Height, squared Euclidean norm and weight of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyNorms {
    pub height: Nat,
    pub l2_sq: Nat,
    pub weight: usize,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(value: impl Into<Int>, nvars: usize) -> Self {
        MultiPoly::monomial(value, vec![0; nvars])
    }

    /// The variable `x_index` (0-based).
    pub fn var(index: usize, nvars: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        MultiPoly::monomial(1, exps)
    }

    pub fn monomial(coeff: impl Into<Int>, exps: Vec<u32>) -> Self {
        let mut p = MultiPoly::zero(exps.len());
        p.add_term(exps, coeff.into());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Int)>) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for (exps, coeff) in terms {
            assert_eq!(exps.len(), nvars, "exponent tuple has wrong arity");
            p.add_term(exps, coeff);
        }
        p
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn from_univariate(coeffs: &[Int]) -> Self {
        MultiPoly::from_terms(1, coeffs.iter().enumerate().map(|(e, c)| (vec![e as u32], c.clone())))
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: Int) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
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

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Int)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Int {
        self.terms.get(exps).cloned().unwrap_or_else(Int::zero)
    }

    /// Number of nonzero terms.
    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Largest degree in any single variable.
    pub fn max_degree(&self) -> u32 {
        (0..self.nvars).map(|v| self.degree_in(v)).max().unwrap_or(0)
    }

    pub fn scale(&self, factor: &Int) -> Self {
        if factor.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * factor)).collect(),
        }
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = MultiPoly::constant(1, self.nvars);
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc
    }

    /// gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> Nat {
        self.terms
            .values()
            .fold(Int::zero(), |acc, c| acc.gcd(c))
            .magnitude()
            .clone()
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut exps = e.clone();
                exps[var] -= 1;
                out.add_term(exps, c * Int::from(e[var]));
            }
        }
        out
    }

    pub fn norms(&self) -> Result<PolyNorms, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(PolyNorms {
            height: self.height(),
            l2_sq: self.l2_sq(),
            weight: self.weight(),
        })
    }

    /// Largest absolute coefficient.
    pub fn height(&self) -> Nat {
        self.terms.values().map(|c| c.magnitude().clone()).max().unwrap_or_default()
    }

    /// Sum of squared coefficients.
    pub fn l2_sq(&self) -> Nat {
        self.terms.values().map(|c| c.magnitude() * c.magnitude()).sum()
    }

    /// `f(x_1 X_1, ..., x_n X_n)`.
    pub fn scale_vars(&self, bounds: &[Nat]) -> Result<Self, PolyError> {
        if bounds.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                got: bounds.len(),
            });
        }
        if bounds.iter().any(Zero::is_zero) {
            return Err(PolyError::InvalidBound);
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let factor: Nat = e.iter().zip(bounds).map(|(&k, b)| b.pow(k)).product();
            (e.clone(), c * Int::from(factor))
        });
        Ok(MultiPoly::from_terms(self.nvars, terms))
    }

    pub fn evaluate(&self, point: &[Int]) -> Result<Int, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum())
    }

    /// Substitutes `x_var = value`; the variable stays in the signature with degree 0.
    pub fn substitute(&self, var: usize, value: &Int) -> Self {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            let k = std::mem::replace(&mut exps[var], 0);
            out.add_term(exps, c * num_traits::pow(value.clone(), k as usize));
        }
        out
    }

    /// `f` with `x_var` replaced by `x_var + shift`.
    pub fn shift_var(&self, var: usize, shift: &Int) -> Self {
        let replacement = &MultiPoly::var(var, self.nvars) + &MultiPoly::constant(shift.clone(), self.nvars);
        let mut powers = vec![MultiPoly::constant(1, self.nvars)];
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            while powers.len() <= k {
                let next = powers.last().expect("nonempty") * &replacement;
                powers.push(next);
            }
            let mut exps = e.clone();
            exps[var] = 0;
            out = &out + &(&MultiPoly::monomial(c.clone(), exps) * &powers[k]);
        }
        out
    }

    /// Coefficients of `f` viewed as a polynomial in `x_var`, ascending.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let degree = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(self.nvars); degree + 1];
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            let k = std::mem::replace(&mut exps[var], 0) as usize;
            out[k].add_term(exps, c.clone());
        }
        out
    }

    /// Ascending coefficients when `f` only involves `x_var`.
    pub fn to_univariate(&self, var: usize) -> Option<Vec<Int>> {
        let mut out = vec![Int::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| i != var && k != 0) {
                return None;
            }
            out[e[var] as usize] = c.clone();
        }
        Some(out)
    }

    fn leading(&self) -> Option<(&Vec<u32>, &Int)> {
        self.terms.iter().next_back()
    }

    /// `self / divisor` when the division is exact over the integers.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (lead_exps, lead_coeff) = divisor.leading()?;
        let mut remainder = self.clone();
        let mut quotient = MultiPoly::zero(self.nvars);
        while let Some((exps, coeff)) = remainder.leading() {
            if exps.iter().zip(lead_exps).any(|(a, b)| a < b) {
                return None;
            }
            let (q, r) = coeff.div_rem(lead_coeff);
            if !r.is_zero() {
                return None;
            }
            let shift: Vec<u32> = exps.iter().zip(lead_exps).map(|(a, b)| a - b).collect();
            let term = MultiPoly::monomial(q, shift);
            remainder = &remainder - &(&term * divisor);
            quotient = &quotient + &term;
        }
        Some(quotient)
    }

    /// Parses `c*x1^e1*...*xn^en` terms joined by `+` or `-`. The names `x`,
    /// `y`, `z` are accepted for `x1`, `x2`, `x3`.
    pub fn parse(text: &str, nvars: usize) -> Result<Self, PolyError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        let mut terms: Vec<String> = Vec::new();
        let mut current = String::new();
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !current.is_empty() && !current.ends_with('*') {
                terms.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        terms.push(current);
        let mut poly = MultiPoly::zero(nvars);
        for term in terms {
            let (negative, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            if body.is_empty() {
                return Err(PolyError::Parse(format!("dangling sign in {text:?}")));
            }
            let mut coeff = Int::one();
            let mut exps = vec![0u32; nvars];
            for factor in body.split('*') {
                parse_factor(factor, nvars, &mut coeff, &mut exps)?;
            }
            if negative {
                coeff = -coeff;
            }
            poly.add_term(exps, coeff);
        }
        Ok(poly)
    }
}

fn parse_factor(factor: &str, nvars: usize, coeff: &mut Int, exps: &mut [u32]) -> Result<(), PolyError> {
    let bad = || PolyError::Parse(format!("bad factor {factor:?}"));
    if factor.is_empty() {
        return Err(bad());
    }
    if factor.chars().all(|c| c.is_ascii_digit()) {
        *coeff *= factor.parse::<Int>().map_err(|_| bad())?;
        return Ok(());
    }
    let (name, power) = match factor.split_once('^') {
        Some((n, p)) => (n, p.parse::<u32>().map_err(|_| bad())?),
        None => (factor, 1),
    };
    let index = match name {
        "x" => 0,
        "y" => 1,
        "z" => 2,
        _ => {
            let digits = name.strip_prefix('x').ok_or_else(bad)?;
            let i: usize = digits.parse().map_err(|_| bad())?;
            if i == 0 {
                return Err(bad());
            }
            i - 1
        }
    };
    if index >= nvars {
        return Err(PolyError::VariableOutOfRange { index: index + 1, nvars });
    }
    exps[index] += power;
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (exps, coeff)) in self.terms.iter().rev().enumerate() {
            let magnitude = coeff.magnitude();
            if i == 0 {
                if coeff.is_negative() {
                    f.write_str("-")?;
                }
            } else if coeff.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            let is_constant = exps.iter().all(|&e| e == 0);
            if !magnitude.is_one() || is_constant {
                parts.push(magnitude.to_string());
            }
            for (v, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("x{}", v + 1)),
                    _ => parts.push(format!("x{}^{}", v + 1, e)),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl ExactRing for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.nvars)
    }

    fn one_like(&self) -> Self {
        MultiPoly::constant(1, self.nvars)
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
        MultiPoly::div_exact(self, divisor).expect("fraction-free elimination divides exactly")
    }
}

fn check_var(f: &MultiPoly, var: usize) -> Result<(), PolyError> {
    if var >= f.nvars {
        return Err(PolyError::VariableOutOfRange { index: var, nvars: f.nvars });
    }
    Ok(())
}

/// Resultant matrix of `f` (degree `k`) and `g` (degree `m`) in `x_var`: `m`
/// shifted columns of `f`'s coefficients followed by `k` shifted columns of
/// `g`'s, ascending degree down each column. Stored row-major.
pub fn sylvester_matrix(f: &MultiPoly, g: &MultiPoly, var: usize) -> Result<Vec<Vec<MultiPoly>>, PolyError> {
    check_var(f, var)?;
    check_var(g, var)?;
    let k = f.degree_in(var) as usize;
    let m = g.degree_in(var) as usize;
    if k == 0 || f.is_zero() {
        return Err(PolyError::ZeroDegree(var));
    }
    if m == 0 || g.is_zero() {
        return Err(PolyError::ZeroDegree(var));
    }
    let size = k + m;
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    let mut a = vec![vec![MultiPoly::zero(f.nvars); size]; size];
    for col in 0..m {
        for (i, c) in fc.iter().enumerate() {
            a[col + i][col] = c.clone();
        }
    }
    for col in 0..k {
        for (j, c) in gc.iter().enumerate() {
            a[col + j][m + col] = c.clone();
        }
    }
    Ok(a)
}

/// `Res(f, g)` in `x_var`, normalized to the classical convention
/// `Res(f, g) = lc(f)^m prod g(alpha_i)`. The eliminated variable keeps its slot
/// with exponent zero.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, var: usize) -> Result<MultiPoly, PolyError> {
    let a = sylvester_matrix(f, g, var)?;
    let k = f.degree_in(var);
    let m = g.degree_in(var);
    let det = bareiss_determinant(a, &MultiPoly::constant(1, f.nvars));
    // The column layout differs from the classical row layout by (-1)^{km}.
    Ok(if (k * m) % 2 == 1 { -det } else { det })
}

/// `(-1)^{k(k-1)/2} Res(f, f')` for `f` monic of degree `k >= 2` in `x_var`.
pub fn discriminant(f: &MultiPoly, var: usize) -> Result<MultiPoly, PolyError> {
    check_var(f, var)?;
    let k = f.degree_in(var);
    if k == 0 {
        return Err(PolyError::ZeroDegree(var));
    }
    let lead = f.coefficients_in(var).pop().expect("degree >= 1");
    if lead != MultiPoly::constant(1, f.nvars) {
        return Err(PolyError::NotMonic(var));
    }
    let res = resultant(f, &f.derivative(var), var)?;
    let exponent = k as u64 * (k as u64 - 1) / 2;
    Ok(if exponent % 2 == 1 { -res } else { res })
}

/// `|f(x_1 X_1, ..., x_n X_n)|_2^2 * w(f) < modulus^2`: a root of `f` modulo
/// `modulus` inside the box is then a root over the integers.
pub fn howgrave_predicate(f: &MultiPoly, modulus: &Nat, bounds: &[Nat]) -> bool {
    if f.is_zero() {
        return false;
    }
    match f.scale_vars(bounds) {
        Ok(scaled) => scaled.l2_sq() * Nat::from(scaled.weight()) < modulus * modulus,
        Err(_) => false,
    }
}

/// `|b|_2 < 2^{1 - (d+1)^n} |a|_inf`, compared on squares: then `b` cannot be an
/// integer multiple of `a` (both of degree at most `d` in each of `n` variables).
pub fn multiple_bound_predicate(a: &MultiPoly, b: &MultiPoly, max_deg: u32) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let n = a.nvars as u32;
    let exponent = (max_deg as u64 + 1).pow(n) - 1;
    let lhs = b.l2_sq() << (2 * exponent) as usize;
    let height = a.height();
    lhs < &height * &height
}

/// Horner evaluation of a univariate polynomial given lowest coefficient first.
pub fn eval_univariate(coeffs: &[Int], x: &Int) -> Int {
    coeffs.iter().rev().fold(Int::zero(), |acc, c| acc * x + c)
}

fn trimmed(coeffs: &[Int]) -> &[Int] {
    let len = coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    &coeffs[..len]
}

fn derivative_univariate(coeffs: &[Int]) -> Vec<Int> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| c * Int::from(k)).collect()
}

// Integers in [lo, hi] bracketing every real root: for a root r in the range,
// both floor(r) and ceil(r) (clipped to the range) are in the set.
fn root_cells(coeffs: &[Int], lo: &Int, hi: &Int) -> Vec<Int> {
    let c = trimmed(coeffs);
    if c.len() <= 1 {
        return Vec::new();
    }
    if c.len() == 2 {
        let (floor, rem) = (-&c[0]).div_mod_floor(&c[1]);
        let mut out = vec![floor.clone()];
        if !rem.is_zero() {
            out.push(floor + 1);
        }
        out.retain(|t| t >= lo && t <= hi);
        return out;
    }
    let mut breaks = root_cells(&derivative_univariate(c), lo, hi);
    breaks.push(lo.clone());
    breaks.push(hi.clone());
    breaks.sort();
    breaks.dedup();
    let mut out = breaks.clone();
    for pair in breaks.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b - a < Int::from(2) {
            continue;
        }
        // monotone on [a, b]
        let sa = eval_univariate(c, a).signum();
        let sb = eval_univariate(c, b).signum();
        if sa.is_zero() || sb.is_zero() || sa == sb {
            continue;
        }
        let (mut left, mut right) = (a.clone(), b.clone());
        while &right - &left > Int::one() {
            let mid: Int = (&left + &right).div_floor(&Int::from(2));
            let s = eval_univariate(c, &mid).signum();
            if s.is_zero() {
                left = mid.clone();
                right = mid;
                break;
            }
            if s == sa {
                left = mid;
            } else {
                right = mid;
            }
        }
        out.push(left);
        out.push(right);
    }
    out.sort();
    out.dedup();
    out
}

/// Integer roots in `[lo, hi]` of a nonzero univariate polynomial (lowest
/// coefficient first), ascending. Exact: isolates monotone pieces through the
/// derivative chain and bisects each sign change.
pub fn integer_roots(coeffs: &[Int], lo: &Int, hi: &Int) -> Result<Vec<Int>, PolyError> {
    let c = trimmed(coeffs);
    if c.is_empty() {
        return Err(PolyError::ZeroPolynomial);
    }
    if lo > hi {
        return Ok(Vec::new());
    }
    // x^k factor: 0 is a root, the rest divide the lowest nonzero coefficient
    let shift = c.iter().position(|v| !v.is_zero()).unwrap_or(0);
    let lowest = &c[shift];
    let mut roots: Vec<Int> = root_cells(c, lo, hi)
        .into_iter()
        .filter(|t| {
            if t.is_zero() {
                return shift > 0;
            }
            lowest.is_multiple_of(t) && eval_univariate(c, t).is_zero()
        })
        .collect();
    if shift > 0 && lo <= &Int::zero() && hi >= &Int::zero() && !roots.iter().any(Zero::is_zero) {
        roots.push(Int::zero());
        roots.sort();
    }
    Ok(roots)
}
