//! Residue classes of the factors of `N = p q` and factor recovery from them.

use std::collections::BTreeSet;

use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{gcd, is_perfect_square, is_prime_u64, is_square_u64, Int, Nat};

/// Residues `(c, d)` of the two factors modulo `m`: `p = c`, `q = d (mod m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResiduePair {
    pub c: u64,
    pub d: u64,
    pub m: u64,
}

/// Candidate residue pairs for one `(N, m)`, canonicalized with `c <= d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueClassSet {
    pub n: Nat,
    pub m: u64,
    pub pairs: BTreeSet<(u64, u64)>,
}

impl ResidueClassSet {
    /// Membership of `(c, d)` in either order.
    pub fn contains(&self, c: u64, d: u64) -> bool {
        self.pairs.contains(&(c.min(d), c.max(d)))
    }

    pub fn is_subset(&self, other: &ResidueClassSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ResiduePair> + '_ {
        self.pairs.iter().map(|&(c, d)| ResiduePair { c, d, m: self.m })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("gcd(N, m) = {0} is a nontrivial factor")]
    GcdFactorFound(Nat),
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no factor found for t in 0..={t_bound}")]
    Exhausted { t_bound: u64 },
}

fn residue_of(n: &Nat, m: u64) -> u64 {
    (n % m).to_u64().expect("residue fits in u64")
}

fn check_modulus(n: &Nat, m: u64) -> Result<u64, ResidueError> {
    if m < 2 {
        return Err(ResidueError::InvalidModulus(m));
    }
    let g = gcd(n, &Nat::from(m));
    if !g.is_one() {
        return Err(ResidueError::GcdFactorFound(g));
    }
    Ok(residue_of(n, m))
}

/// Inverse of `a` modulo `m`, when it exists.
pub fn inverse_mod_u64(a: u64, m: u64) -> Option<u64> {
    if m < 2 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// All `(c, d)` with `c <= d < m`, `c d = N (mod m)`, `gcd(c, m) = 1`.
pub fn enumerate_pairs(n: &Nat, m: u64) -> Result<ResidueClassSet, ResidueError> {
    let r = check_modulus(n, m)?;
    let mut pairs = BTreeSet::new();
    for c in 1..m {
        let Some(inv) = inverse_mod_u64(c, m) else {
            continue;
        };
        let d = ((r as u128 * inv as u128) % m as u128) as u64;
        if c <= d {
            pairs.insert((c, d));
        }
    }
    Ok(ResidueClassSet {
        n: n.clone(),
        m,
        pairs,
    })
}

/// Residue pairs realizable as `x^2 - 4cd = y^2` with `cd = r0 + r1 m < m^2`
/// and `x < 2m`, where `r0 = N mod m` and `m` is prime.
///
/// Every solution has `x = c + d`, `y = |c - d|`; squareness is tested over the
/// integers, which is exact because all quantities stay below `4 m^2`.
pub fn algorithm_one(n: &Nat, m: u64) -> Result<ResidueClassSet, ResidueError> {
    if !is_prime_u64(m) {
        return Err(ResidueError::NonPrimeModulus(m));
    }
    let r0 = check_modulus(n, m)?;
    let mut pairs = BTreeSet::new();
    let square = m * m;
    let mut cd = r0;
    while cd < square {
        let four_cd = 4 * cd;
        let mut x = four_cd.sqrt();
        if x * x < four_cd {
            x += 1;
        }
        while x < 2 * m {
            if let Some(y) = is_square_u64(x * x - four_cd) {
                let c = (x + y) / 2;
                let d = (x - y) / 2;
                if d >= 1 && c < m {
                    pairs.insert((d, c));
                }
            }
            x += 1;
        }
        cd += m;
    }
    Ok(ResidueClassSet {
        n: n.clone(),
        m,
        pairs,
    })
}

/// Factorization found by the scaled-sum scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledSumHit {
    pub p: Nat,
    pub q: Nat,
    /// Index of the successful candidate `z = z0 + m n t`.
    pub t: u64,
    pub z: Nat,
    /// The square discriminant `z^2 - 4cdN` (or `z^2 + 4cdN`).
    pub discriminant: Nat,
}

/// Scans `z = d p + c q = z0 + m n t`, `z0 = (N + c d) mod m n`, for
/// `p = c (mod m)`, `q = d (mod n)`.
///
/// For each `t` the roots `(+-z +- s) / 2d` of `d X^2 +- z X +- c N` are tried,
/// with `s^2` either `z^2 - 4cdN` or `z^2 + 4cdN`. Lowest `t` wins.
pub fn landry_pepin(n: &Nat, m: u64, modulus_n: u64, c: u64, d: u64, t_bound: u64) -> Result<ScaledSumHit, ResidueError> {
    if m == 0 || modulus_n == 0 {
        return Err(ResidueError::InvalidModulus(0));
    }
    if c.gcd(&m) != 1 || d.gcd(&modulus_n) != 1 {
        return Err(ResidueError::PreconditionViolated(format!(
            "need gcd(c, m) = gcd(d, n) = 1, got c={c} m={m} d={d} n={modulus_n}"
        )));
    }
    if d == 0 {
        return Err(ResidueError::PreconditionViolated("d must be nonzero".into()));
    }
    let mn = Nat::from(m) * modulus_n;
    let cd = Nat::from(c) * d;
    let four_cd_n = &cd * n * 4u32;
    let z0 = (n + &cd) % &mn;
    let two_d = Int::from(2 * d);
    let mut z = z0;
    for t in 0..=t_bound {
        let z2 = &z * &z;
        let mut discriminants = vec![&z2 + &four_cd_n];
        if z2 >= four_cd_n {
            discriminants.insert(0, &z2 - &four_cd_n);
        }
        for disc in discriminants {
            let Some(s) = is_perfect_square(&disc) else {
                continue;
            };
            let zi = Int::from(z.clone());
            let si = Int::from(s);
            for numerator in [&zi + &si, &zi - &si, -&zi + &si, -&zi - &si] {
                let (root, rem) = numerator.div_rem(&two_d);
                if !rem.is_zero() || root.is_zero() {
                    continue;
                }
                let g = gcd(root.magnitude(), n);
                if !g.is_one() && &g != n {
                    let other = n / &g;
                    let (p, q) = if g <= other { (g, other) } else { (other, g) };
                    return Ok(ScaledSumHit {
                        p,
                        q,
                        t,
                        z,
                        discriminant: disc,
                    });
                }
            }
        }
        z += &mn;
    }
    Err(ResidueError::Exhausted { t_bound })
}

/// Pairs `(c, d)` with `c d` in `{r, r + m}`, `r = N mod m`, every ordered
/// divisor split included. These are the candidates when the true residues
/// satisfy `c d < 2m`.
pub fn theorem4_pairs(n: &Nat, m: u64) -> Result<Vec<ResiduePair>, ResidueError> {
    let r = check_modulus(n, m)?;
    let mut out = Vec::new();
    for product in [r, r + m] {
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut c = 1u64;
        while c * c <= product {
            if product % c == 0 {
                small.push(c);
                if c * c != product {
                    large.push(product / c);
                }
            }
            c += 1;
        }
        for c in small.into_iter().chain(large.into_iter().rev()) {
            out.push(ResiduePair {
                c,
                d: product / c,
                m,
            });
        }
    }
    Ok(out)
}
