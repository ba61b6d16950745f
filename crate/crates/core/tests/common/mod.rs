#![allow(dead_code)]

use num_bigint::BigInt;

/// Coefficients of `q^shift ∏_{n>=1} ∏_{(level, power)} (1 - q^{level n})^power`
/// through `q^prec`, by direct series multiplication.
pub fn eta_product(shift: usize, factors: &[(usize, u32)], prec: usize) -> Vec<BigInt> {
    let mut series = vec![BigInt::from(0); prec + 1];
    if shift > prec {
        return series;
    }
    series[shift] = BigInt::from(1);
    for &(level, power) in factors {
        for n in 1.. {
            let step = level * n;
            if step > prec {
                break;
            }
            for _ in 0..power {
                for i in (step..=prec).rev() {
                    let sub = series[i - step].clone();
                    series[i] -= sub;
                }
            }
        }
    }
    series
}

/// `Δ = q ∏ (1 - q^n)^24`.
pub fn delta(prec: usize) -> Vec<BigInt> {
    eta_product(1, &[(1, 24)], prec)
}

/// `η(z)^2 η(11z)^2 = q ∏ (1 - q^n)^2 (1 - q^{11n})^2`.
pub fn eta_11(prec: usize) -> Vec<BigInt> {
    eta_product(1, &[(1, 2), (11, 2)], prec)
}

pub fn tau(n: usize) -> BigInt {
    delta(n)[n].clone()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `|P^1(Z/N)|` by enumerating pairs `(c, d)` with `gcd(c, d, N) = 1` up to units.
pub fn p1_size(n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let units: Vec<u64> = (1..n).filter(|&u| gcd(u, n) == 1).collect();
    let mut seen = std::collections::HashSet::new();
    let mut count = 0;
    for c in 0..n {
        for d in 0..n {
            if gcd(gcd(c, d), n) != 1 || seen.contains(&(c, d)) {
                continue;
            }
            count += 1;
            for &u in &units {
                seen.insert((c * u % n, d * u % n));
            }
        }
    }
    count
}

/// Divisor sum by trial division.
pub fn sigma(e: u32, n: u64) -> BigInt {
    (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| BigInt::from(d).pow(e))
        .sum()
}

pub fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}
