//! Seeded generators for semiprime test populations.

use num_bigint::RandBigInt;
use num_traits::One;
use rand::Rng;

use crate::arith::{is_probable_prime, isqrt, Nat};

/// Smallest prime `>= n`.
pub fn next_prime(n: &Nat) -> Nat {
    let two = Nat::from(2u32);
    if n <= &two {
        return two;
    }
    let mut candidate = n.clone();
    if !candidate.bit(0) {
        candidate += 1u32;
    }
    while !is_probable_prime(&candidate) {
        candidate += 2u32;
    }
    candidate
}

/// Uniform random prime with exactly `bits` bits (`bits >= 2`).
pub fn random_prime<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> Nat {
    assert!(bits >= 2, "need at least two bits");
    loop {
        let mut candidate = rng.gen_biguint(bits);
        candidate.set_bit(bits - 1, true);
        candidate.set_bit(0, true);
        if is_probable_prime(&candidate) {
            return candidate;
        }
    }
}

/// `N = p q` with `p < q < 2p` and `N` of exactly `bits` bits (`bits >= 8`).
pub fn balanced_semiprime<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> (Nat, Nat) {
    assert!(bits >= 8, "need at least eight bits");
    let low = bits / 2;
    loop {
        let p = random_prime(low, rng);
        let q = random_prime(bits - low, rng);
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        if p != q && q < &p * 2u32 && (&p * &q).bits() == bits {
            return (p, q);
        }
    }
}

/// Odd semiprime with `0 < q - p <= 4 N^(1/4)` and `p` of `half_bits` bits.
pub fn close_semiprime<R: Rng + ?Sized>(half_bits: u64, rng: &mut R) -> (Nat, Nat) {
    loop {
        let p = random_prime(half_bits, rng);
        // 4 N^(1/4) ~ 4 sqrt(p); aim for a random gap below half of that
        let reach = isqrt(&p) * 2u32;
        let offset = rng.gen_biguint_below(&(&reach + 1u32)) + 1u32;
        let q = next_prime(&(&p + offset));
        let gap = &q - &p;
        let n = &p * &q;
        if gap.pow(4) <= n * 256u32 && p > Nat::from(2u32) {
            return (p, q);
        }
    }
}

/// Semiprime with `q` the first prime above `(num / den) p`.
pub fn ratio_semiprime<R: Rng + ?Sized>(half_bits: u64, num: u32, den: u32, rng: &mut R) -> (Nat, Nat) {
    loop {
        let p = random_prime(half_bits, rng);
        let q = next_prime(&(&p * num / den + Nat::one()));
        if q != p {
            return (p, q);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn next_prime_examples() {
        let np = |v: u32| next_prime(&Nat::from(v));
        assert_eq!(np(0), Nat::from(2u32));
        assert_eq!(np(3), Nat::from(3u32));
        assert_eq!(np(24), Nat::from(29u32));
        assert_eq!(np(90), Nat::from(97u32));
    }

    #[test]
    fn generators_respect_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for bits in 48..=64 {
            let (p, q) = balanced_semiprime(bits, &mut rng);
            assert!(p < q && q < &p * 2u32);
            assert_eq!((&p * &q).bits(), bits);
            assert!(is_probable_prime(&p) && is_probable_prime(&q));
        }
        for _ in 0..50 {
            let (p, q) = close_semiprime(24, &mut rng);
            let n = &p * &q;
            assert!((&q - &p).pow(4) <= n * 256u32);
        }
        let (p, q) = ratio_semiprime(20, 2, 1, &mut rng);
        assert!(q > &p * 2u32 && q < &p * 2u32 + 200u32);
    }
}
