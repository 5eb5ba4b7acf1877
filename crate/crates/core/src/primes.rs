//! Deterministic primality testing and prime range enumeration.
//!
//! The verifier sweeps ranges of word-sized primes, so a deterministic
//! Miller-Rabin test is all we need: the witness set {2, 3, 5, 7, ..., 37}
//! is known to be exact for every `n < 2^64`.

/// Witnesses that make Miller-Rabin deterministic for all 64-bit inputs.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin primality test for `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // n - 1 = d * 2^s with d odd.
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes in the inclusive range `[lo, hi]`, ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if hi < 2 || hi < lo {
        return out;
    }
    let mut n = lo.max(2);
    if n == 2 {
        out.push(2);
        n = 3;
    }
    if n % 2 == 0 {
        n += 1;
    }
    while n <= hi {
        if is_prime(n) {
            out.push(n);
        }
        n += 2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let known: Vec<u64> = vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
        for n in 0..50u64 {
            assert_eq!(is_prime(n), known.contains(&n), "n = {n}");
        }
    }

    #[test]
    fn carmichael_numbers_are_composite() {
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911, 10585] {
            assert!(!is_prime(n), "{n} is a Carmichael number");
        }
    }

    #[test]
    fn large_known_values() {
        assert!(is_prime((1 << 61) - 1)); // Mersenne prime 2^61 - 1
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime(u64::MAX));
        assert!(!is_prime((1 << 61) - 3));
    }

    #[test]
    fn range_agrees_with_trial_division() {
        let trial = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        let expected: Vec<u64> = (0..=2000).filter(|&n| trial(n)).collect();
        assert_eq!(primes_in_range(0, 2000), expected);
        assert_eq!(primes_in_range(100, 150), vec![101, 103, 107, 109, 113, 127, 131, 137, 139, 149]);
        assert!(primes_in_range(24, 28).is_empty());
        assert_eq!(primes_in_range(5, 4), Vec::<u64>::new());
    }
}
