//! Word-size modular arithmetic, CRT and rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::pow_mod;
use crate::rational::Q;

/// Miller-Rabin with bases 2, 3, 5, 7, exact for `n < 3 215 031 751`.
fn is_prime_u32(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    [2u64, 3, 5, 7].iter().all(|&a| {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                return true;
            }
        }
        false
    })
}

/// Primes below 2^31 in descending order.
pub(crate) fn primes_below_2_31() -> impl Iterator<Item = u64> {
    (1..(1u64 << 30)).rev().map(|h| 2 * h + 1).filter(|&p| is_prime_u32(p))
}

pub(crate) fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.iter_u64_digits().next().unwrap_or(0)
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Folds residues modulo a new prime `p` into values known modulo `modulus`.
pub(crate) fn crt_step(acc: &mut [BigInt], modulus: &BigInt, residues: &[u64], p: u64) {
    let inv = inv_mod(reduce_mod(modulus, p), p);
    for (x, &rp) in acc.iter_mut().zip(residues) {
        let t = (rp + p - reduce_mod(x, p)) % p * inv % p;
        if t != 0 {
            *x += modulus * BigInt::from(t);
        }
    }
}

/// The fraction `n/d` with `|n|, d <= sqrt(m/2)` congruent to `a` modulo `m`.
pub(crate) fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Q> {
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Q::new(r1, t1))
}

/// Reduced row-echelon form over F_p, in place. Returns the pivot columns;
/// rows past the rank are left zero at the bottom.
pub(crate) fn rref_mod_p(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, i);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        let (head, tail) = m.split_at_mut(r);
        let (prow, tail) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(tail.iter_mut()) {
            let f = other[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in other.iter_mut().zip(prow.iter()) {
                *x = (*x + p - f * y % p) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Indices of a maximal set of rows that are independent modulo `p`, in
/// input order.
fn independent_rows_mod_p(rows: &[Vec<u64>], p: u64) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut keep = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for (c, b) in &basis {
            let f = v[*c];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        if let Some(c) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[c], p);
            for x in v.iter_mut() {
                *x = *x * inv % p;
            }
            basis.push((c, v));
            keep.push(idx);
        }
    }
    keep
}

/// RREF of an integer matrix by reduction modulo primes, CRT and rational
/// reconstruction, applied to a set of rows independent modulo the first
/// prime. A candidate is accepted only after an exact check that it has
/// echelon shape and that every input row equals the combination of
/// candidate rows given by its pivot entries; the RREF is unique, so an
/// accepted candidate is the RREF. Returns `None` when a stable candidate
/// fails that check or no candidate verifies within the prime budget.
pub(crate) fn rref_multimodular(rows: &[Vec<BigInt>], cols: usize) -> Option<(Vec<Vec<Q>>, Vec<usize>)> {
    const MAX_PRIMES: usize = 1024;
    let reduce = |rs: &[&Vec<BigInt>], p: u64| -> Vec<Vec<u64>> {
        rs.iter()
            .map(|row| row.iter().map(|x| reduce_mod(x, p)).collect())
            .collect()
    };
    let all: Vec<&Vec<BigInt>> = rows.iter().collect();
    let first = primes_below_2_31().next()?;
    let sub: Vec<&Vec<BigInt>> = independent_rows_mod_p(&reduce(&all, first), first)
        .into_iter()
        .map(|i| &rows[i])
        .collect();
    let r = sub.len();
    let mut pivots: Option<Vec<usize>> = None;
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut used = 0usize;
    let mut next_try = 1usize;
    let mut previous: Option<Vec<Vec<Q>>> = None;
    for p in primes_below_2_31().take(MAX_PRIMES) {
        let mut m = reduce(&sub, p);
        let piv = rref_mod_p(&mut m, p);
        if piv.len() < r {
            continue;
        }
        match &pivots {
            Some(cur) if *cur == piv => {}
            Some(cur) if piv > *cur => continue,
            _ => {
                pivots = Some(piv);
                acc = vec![BigInt::zero(); r * cols];
                modulus = BigInt::one();
                used = 0;
                next_try = 1;
                previous = None;
            }
        }
        let flat: Vec<u64> = m.into_iter().flatten().collect();
        crt_step(&mut acc, &modulus, &flat, p);
        modulus *= BigInt::from(p);
        used += 1;
        if used < next_try {
            continue;
        }
        next_try *= 2;
        let piv = pivots.as_ref().unwrap();
        let Some(candidate) = reconstruct(&acc, &modulus, cols) else {
            continue;
        };
        if verify(rows, &candidate, piv) {
            return Some((candidate, piv.clone()));
        }
        if previous.as_ref() == Some(&candidate) {
            return None;
        }
        previous = Some(candidate);
    }
    None
}

fn reconstruct(acc: &[BigInt], modulus: &BigInt, cols: usize) -> Option<Vec<Vec<Q>>> {
    acc.chunks(cols)
        .map(|row| row.iter().map(|a| rational_reconstruct(a, modulus)).collect())
        .collect()
}

fn verify(rows: &[Vec<BigInt>], e: &[Vec<Q>], pivots: &[usize]) -> bool {
    for (i, &c) in pivots.iter().enumerate() {
        if e[i][..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        for (k, row) in e.iter().enumerate() {
            if row[c] != if k == i { Q::one() } else { Q::zero() } {
                return false;
            }
        }
    }
    let l = e
        .iter()
        .flatten()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<Vec<BigInt>> = e
        .iter()
        .map(|row| row.iter().map(|x| x.numer() * (&l / x.denom())).collect())
        .collect();
    rows.iter().all(|m| {
        (0..m.len()).all(|c| {
            let lhs = pivots
                .iter()
                .zip(&scaled)
                .fold(BigInt::zero(), |a, (&pc, s)| a + &m[pc] * &s[c]);
            lhs == &m[c] * &l
        })
    })
}
