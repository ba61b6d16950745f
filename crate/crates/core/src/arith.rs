//! Elementary integer arithmetic on levels and indices.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Prime factorization by trial division, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n) == vec![(n, 1)]
}

/// All positive divisors, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn num_divisors(n: u64) -> u64 {
    factor(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Primes up to and including `bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

/// The first `count` primes not dividing `n`.
pub fn primes_coprime_to(n: u64, count: usize) -> Vec<u64> {
    (2u64..)
        .filter(|&p| is_prime(p) && n % p != 0)
        .take(count)
        .collect()
}

/// Squarefree divisors of `n` paired with their Möbius sign.
pub fn squarefree_divisors(n: u64) -> Vec<(u64, i32)> {
    let ps = prime_divisors(n);
    let mut out = Vec::with_capacity(1 << ps.len());
    for mask in 0u32..(1 << ps.len()) {
        let mut d = 1;
        let mut sign = 1;
        for (i, p) in ps.iter().enumerate() {
            if mask & (1 << i) != 0 {
                d *= p;
                sign = -sign;
            }
        }
        out.push((d, sign));
    }
    out.sort_unstable();
    out
}

/// Kronecker symbol (a|p) for an odd prime p, or p = 2 via the (a|2) rule.
pub fn kronecker(a: i64, p: u64) -> i32 {
    if p == 2 {
        return match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    // Euler's criterion
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_and_phi() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(num_divisors(36), 9);
    }

    #[test]
    fn squarefree_signs() {
        assert_eq!(
            squarefree_divisors(12),
            vec![(1, 1), (2, -1), (3, -1), (6, 1)]
        );
    }

    #[test]
    fn kronecker_small() {
        assert_eq!(kronecker(-1, 11), -1);
        assert_eq!(kronecker(-3, 11), -1);
        assert_eq!(kronecker(-1, 5), 1);
        assert_eq!(kronecker(-3, 7), 1);
        assert_eq!(kronecker(-1, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-3, 3), 0);
    }
}
