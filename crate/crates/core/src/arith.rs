//! Exact integer primitives shared by every factoring routine.
//!
//! Magnitudes are `BigUint`, signed quantities `BigInt`. Everything here is a
//! pure function.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision natural number.
pub type Nat = BigUint;
/// Arbitrary-precision signed integer.
pub type Int = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(Nat),
    #[error("{0} has no inverse modulo {1}")]
    NotInvertible(Int, Int),
    #[error("argument must be at least {min}, got {value}")]
    TooSmall { value: Nat, min: u32 },
}

/// Floor square root.
pub fn isqrt(n: &Nat) -> Nat {
    n.sqrt()
}

/// Ceiling square root.
pub fn isqrt_ceil(n: &Nat) -> Nat {
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1u32
    }
}

// Quadratic-residue filters. A square must be a residue modulo each of these.
const QR_MODULI: [u32; 4] = [64, 63, 65, 11];

fn residue_table(m: u32) -> Vec<bool> {
    let mut table = vec![false; m as usize];
    for i in 0..m {
        table[((i * i) % m) as usize] = true;
    }
    table
}

fn residue_tables() -> &'static [Vec<bool>; 4] {
    use std::sync::OnceLock;
    static TABLES: OnceLock<[Vec<bool>; 4]> = OnceLock::new();
    TABLES.get_or_init(|| QR_MODULI.map(residue_table))
}

/// Returns `Some(r)` with `r * r == n`, or `None` when `n` is not a square.
pub fn is_perfect_square(n: &Nat) -> Option<Nat> {
    let tables = residue_tables();
    for (m, table) in QR_MODULI.iter().zip(tables.iter()) {
        let r = (n % *m).to_u32().unwrap_or(0);
        if !table[r as usize] {
            return None;
        }
    }
    let r = isqrt(n);
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Same as [`is_perfect_square`] for signed input; negatives are never squares.
pub fn is_perfect_square_int(n: &Int) -> Option<Nat> {
    match n.sign() {
        Sign::Minus => None,
        _ => is_perfect_square(n.magnitude()),
    }
}

/// Word-sized square test used by the residue-class scans.
pub fn is_square_u64(n: u64) -> Option<u64> {
    if !residue_tables()[0][(n & 63) as usize] {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn gcd(a: &Nat, b: &Nat) -> Nat {
    a.gcd(b)
}

/// Extended Euclid: returns `(g, s, t)` with `a*s + b*t = g = gcd(a, b)`, `g >= 0`.
pub fn extended_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (Int::one(), Int::zero());
    let (mut old_t, mut t) = (Int::zero(), Int::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.sign() == Sign::Minus {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m` in `[0, m)`.
pub fn mod_inverse(a: &Int, m: &Int) -> Result<Int, ArithError> {
    let (g, s, _) = extended_gcd(&a.mod_floor(m), m);
    if !g.is_one() {
        return Err(ArithError::NotInvertible(a.clone(), m.clone()));
    }
    Ok(s.mod_floor(m))
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

// The first twelve prime bases are deterministic below 3.1e23, which covers 2^64.
const MR_BASES_U64: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin. Deterministic below 2^64; above that a fixed set of 25 prime
/// bases is used, so the answer is still reproducible but only probable.
pub fn is_probable_prime(n: &Nat) -> bool {
    if n < &Nat::from(2u32) {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        if n == &Nat::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let bases: &[u32] = if n.bits() <= 64 {
        &MR_BASES_U64
    } else {
        &SMALL_PRIMES
    };
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in bases {
        let mut x = Nat::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&Nat::from(n))
}

/// All `y` in `[0, m)` with `y^2 = a (mod m)`, ascending. `m` must be prime.
pub fn mod_sqrt(a: &Nat, m: &Nat) -> Result<Vec<Nat>, ArithError> {
    if !is_probable_prime(m) {
        return Err(ArithError::NonPrimeModulus(m.clone()));
    }
    let a = a % m;
    if a.is_zero() {
        return Ok(vec![Nat::zero()]);
    }
    if m == &Nat::from(2u32) {
        return Ok(vec![a]);
    }
    let root = match tonelli_shanks(&a, m) {
        Some(r) => r,
        None => return Ok(Vec::new()),
    };
    let other = m - &root;
    let mut roots = vec![root, other];
    roots.sort();
    Ok(roots)
}

// Odd prime modulus, a a nonzero residue candidate.
fn tonelli_shanks(a: &Nat, p: &Nat) -> Option<Nat> {
    let one = Nat::one();
    let p_minus_one = p - 1u32;
    let half = &p_minus_one >> 1;
    if a.modpow(&half, p) != one {
        return None;
    }
    let s = p_minus_one.trailing_zeros().unwrap_or(0);
    let q = &p_minus_one >> s;
    if s == 1 {
        return Some(a.modpow(&((p + 1u32) >> 2), p));
    }
    // Smallest non-residue, deterministic.
    let mut z = Nat::from(2u32);
    while z.modpow(&half, p) == one {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1u32) >> 1), p);
    while t != one {
        let mut i = 0u64;
        let mut t2 = t.clone();
        while t2 != one {
            t2 = (&t2 * &t2) % p;
            i += 1;
        }
        let b = c.modpow(&(Nat::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (t * &c) % p;
        r = (r * b) % p;
    }
    Some(r)
}

/// One prime power `factor^multiplicity` of a factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePower {
    pub factor: Nat,
    pub multiplicity: u32,
}

/// Prime-power decomposition of `n`. When trial division stopped early the
/// unsplit part is kept in `residual` (primality unknown).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: Nat,
    pub parts: Vec<PrimePower>,
    pub residual: Option<Nat>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.residual.is_none()
    }

    /// Product of all parts and the residual.
    pub fn product(&self) -> Nat {
        let mut acc = self.residual.clone().unwrap_or_else(Nat::one);
        for part in &self.parts {
            acc *= part.factor.pow(part.multiplicity);
        }
        acc
    }

    /// Factorization of `p * q` for two known factors (not necessarily prime).
    pub fn from_pair(p: &Nat, q: &Nat) -> Self {
        let n = p * q;
        let parts = if p == q {
            vec![PrimePower {
                factor: p.clone(),
                multiplicity: 2,
            }]
        } else {
            let (lo, hi) = if p < q { (p, q) } else { (q, p) };
            vec![
                PrimePower {
                    factor: lo.clone(),
                    multiplicity: 1,
                },
                PrimePower {
                    factor: hi.clone(),
                    multiplicity: 1,
                },
            ]
        };
        Factorization {
            n,
            parts,
            residual: None,
        }
    }

    /// Positive divisors, ascending. Only meaningful for complete factorizations.
    pub fn divisors(&self) -> Vec<Nat> {
        let mut divs = vec![Nat::one()];
        for part in &self.parts {
            let mut next = Vec::with_capacity(divs.len() * (part.multiplicity as usize + 1));
            for d in &divs {
                let mut power = d.clone();
                next.push(power.clone());
                for _ in 0..part.multiplicity {
                    power *= &part.factor;
                    next.push(power.clone());
                }
            }
            divs = next;
        }
        if let Some(r) = &self.residual {
            let with_residual: Vec<Nat> = divs.iter().map(|d| d * r).collect();
            divs.extend(with_residual);
        }
        divs.sort();
        divs
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for part in &self.parts {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if part.multiplicity == 1 {
                write!(f, "{}", part.factor)?;
            } else {
                write!(f, "{}^{}", part.factor, part.multiplicity)?;
            }
        }
        if let Some(r) = &self.residual {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "[{}]", r)?;
        }
        Ok(())
    }
}

/// Trial division by every integer up to `bound`.
///
/// A cofactor left over at the end is recorded as prime when it does not
/// exceed `bound`; otherwise it becomes the residual, primality unknown.
pub fn trial_factor(n: &Nat, bound: &Nat) -> Result<Factorization, ArithError> {
    if n < &Nat::from(2u32) {
        return Err(ArithError::TooSmall {
            value: n.clone(),
            min: 2,
        });
    }
    let mut rest = n.clone();
    let mut parts = Vec::new();
    let mut d = Nat::from(2u32);
    while &d <= bound && &d * &d <= rest {
        let mut mult = 0u32;
        loop {
            let (q, r) = rest.div_rem(&d);
            if !r.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            parts.push(PrimePower {
                factor: d.clone(),
                multiplicity: mult,
            });
        }
        d += if d == Nat::from(2u32) { 1u32 } else { 2u32 };
    }
    let mut residual = None;
    if !rest.is_one() {
        if &rest <= bound {
            push_prime(&mut parts, rest);
        } else {
            residual = Some(rest);
        }
    }
    Ok(Factorization {
        n: n.clone(),
        parts,
        residual,
    })
}

fn push_prime(parts: &mut Vec<PrimePower>, p: Nat) {
    if let Some(last) = parts.last_mut() {
        if last.factor == p {
            last.multiplicity += 1;
            return;
        }
    }
    parts.push(PrimePower {
        factor: p,
        multiplicity: 1,
    });
}

/// Complete factorization by trial division (divisors up to the square root).
pub fn factor_completely(n: &Nat) -> Result<Factorization, ArithError> {
    trial_factor(n, n)
}

/// Number of positive divisors, via complete trial factorization.
pub fn divisor_count(n: &Nat) -> Result<Nat, ArithError> {
    if n.is_zero() {
        return Err(ArithError::TooSmall {
            value: n.clone(),
            min: 1,
        });
    }
    if n.is_one() {
        return Ok(Nat::one());
    }
    let fact = factor_completely(n)?;
    let mut count = Nat::one();
    for part in &fact.parts {
        count *= part.multiplicity + 1;
    }
    if fact.residual.is_some() {
        count *= 2u32;
    }
    Ok(count)
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: &Nat) -> Result<Vec<Nat>, ArithError> {
    if n.is_one() {
        return Ok(vec![Nat::one()]);
    }
    Ok(factor_completely(n)?.divisors())
}

/// Exact `n / d` when `d` divides `n`.
pub fn exact_div(n: &Nat, d: &Nat) -> Option<Nat> {
    if d.is_zero() {
        return None;
    }
    let (q, r) = n.div_rem(d);
    r.is_zero().then_some(q)
}

/// Distinct prime factors of a word-sized integer.
pub fn prime_factors_u64(mut n: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut d = 2u64;
    while d * d <= n {
        while n.is_multiple_of(d) {
            out.insert(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.insert(n);
    }
    out
}
