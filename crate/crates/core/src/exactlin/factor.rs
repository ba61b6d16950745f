//! Factorization in Q[x]: squarefree decomposition, then Zassenhaus
//! (factor mod p, multifactor Hensel lifting, recombination by trial division).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{zpoly, QPoly};
use crate::arith::is_prime;

/// Number of admissible primes tried before settling on the one with the
/// fewest modular factors.
const PRIME_CANDIDATES: usize = 6;

impl QPoly {
    /// Monic irreducible factors with multiplicities, sorted by degree then coefficients.
    pub fn factor(&self) -> Vec<(QPoly, u32)> {
        let mut out = Vec::new();
        for (part, e) in self.squarefree_decomposition() {
            for g in factor_squarefree(&part.primitive_part()) {
                out.push((QPoly::from_ints(&g).monic(), e));
            }
        }
        out.sort_by(|a, b| (a.0.degree(), &a.0).cmp(&(b.0.degree(), &b.0)));
        out
    }

    pub fn is_irreducible(&self) -> bool {
        let f = self.factor();
        f.len() == 1 && f[0].1 == 1
    }

    /// If the polynomial is a power of one irreducible, returns that irreducible.
    pub fn irreducible_base(&self) -> Option<QPoly> {
        let f = self.factor();
        (f.len() == 1).then(|| f[0].0.clone())
    }
}

/// Irreducible factors over Z of a primitive squarefree polynomial of positive degree.
pub fn factor_squarefree(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let f = zpoly::primitive(f);
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f];
    }
    let lc = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut p = 1u64;
    while tried < PRIME_CANDIDATES {
        p += 2;
        if !is_prime(p) || (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = fp::from_z(&f, p);
        if !fp::gcd(&fp, &fp::derivative(&fp, p), p).len().eq(&1) {
            continue;
        }
        tried += 1;
        let facs = fp::factor_squarefree(&fp::monic(&fp, p), p, &mut rng);
        if facs.len() == 1 {
            return vec![f];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
    }
    let (p, modular) = best.expect("some admissible prime");

    // Coefficients of lc * g for any factor g of f are below this bound.
    let norm_inf = f.iter().map(|c| c.abs()).max().unwrap();
    let sqrt_bound = (BigInt::from(n as u64 + 1).sqrt() + 1u32) * &norm_inf;
    let bound = lc.abs() * (BigInt::one() << n) * sqrt_bound;
    let mut modulus = BigInt::from(p);
    while modulus <= &bound * 2u32 {
        modulus *= p;
    }
    let lifted = hensel::multifactor_lift(&f, &modular, p, &modulus);
    recombine(f, lifted, &modulus)
}

fn recombine(f: Vec<BigInt>, lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut current = f;
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        for subset in subsets(&remaining, s) {
            let lc = current.last().unwrap().clone();
            let mut g = vec![lc];
            for &i in &subset {
                g = hensel::mul_mod(&g, &lifted[i], modulus);
            }
            let g = zpoly::primitive(&hensel::symmetric(&g, modulus));
            if let Some(q) = zpoly::div_exact(&current, &g) {
                found = Some((subset, g, q));
                break;
            }
        }
        match found {
            Some((subset, g, q)) => {
                remaining.retain(|i| !subset.contains(i));
                out.push(g);
                current = zpoly::primitive(&q);
            }
            None => s += 1,
        }
    }
    if current.len() > 1 {
        out.push(current);
    }
    out
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    if size > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut k = size;
        while k > 0 && idx[k - 1] == items.len() - size + k - 1 {
            k -= 1;
        }
        if k == 0 {
            return out;
        }
        idx[k - 1] += 1;
        for j in k..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Polynomials over F_p with p < 2^31, ascending coefficients, trimmed.
mod fp {
    use super::*;

    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn from_z(f: &[BigInt], p: u64) -> Poly {
        let pb = BigInt::from(p);
        trim(
            f.iter()
                .map(|c| {
                    let r = c.mod_floor(&pb);
                    r.iter_u64_digits().next().unwrap_or(0)
                })
                .collect(),
        )
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        crate::arith::pow_mod(a, p - 2, p)
    }

    pub fn monic(a: &Poly, p: u64) -> Poly {
        let li = inv(*a.last().unwrap(), p);
        a.iter().map(|c| c * li % p).collect()
    }

    pub fn sub(a: &Poly, b: &Poly, p: u64) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn mul(a: &Poly, b: &Poly, p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn divrem(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
        let mut r = a.clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let li = inv(*b.last().unwrap(), p);
        let db = b.len() - 1;
        let mut q = vec![0u64; r.len() - db];
        for i in (0..q.len()).rev() {
            let c = r[i + db] * li % p;
            if c != 0 {
                for (j, &y) in b.iter().enumerate() {
                    r[i + j] = (r[i + j] + p - c * y % p) % p;
                }
            }
            q[i] = c;
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn rem(a: &Poly, b: &Poly, p: u64) -> Poly {
        divrem(a, b, p).1
    }

    pub fn gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            monic(&a, p)
        }
    }

    /// Returns `(s, t)` with `s a + t b = 1` for coprime `a`, `b`.
    pub fn xgcd(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1): (Poly, Poly) = (vec![1], Vec::new());
        let (mut t0, mut t1): (Poly, Poly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = sub(&t0, &mul(&q, &t1, p), p);
            t0 = std::mem::replace(&mut t1, t2);
        }
        assert_eq!(r0.len(), 1, "xgcd inputs not coprime mod {p}");
        let li = inv(r0[0], p);
        let scale = |v: &Poly| trim(v.iter().map(|c| c * li % p).collect());
        (scale(&s0), scale(&t0))
    }

    pub fn derivative(a: &Poly, p: u64) -> Poly {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| (i as u64 % p) * c % p)
                .collect(),
        )
    }

    pub fn powmod(base: &Poly, e: &BigUint, m: &Poly, p: u64) -> Poly {
        let mut acc: Poly = vec![1];
        let b = rem(base, m, p);
        for i in (0..e.bits()).rev() {
            acc = rem(&mul(&acc, &acc, p), m, p);
            if e.bit(i) {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
        }
        acc
    }

    /// Full factorization of a monic squarefree polynomial into monic irreducibles.
    pub fn factor_squarefree(f: &Poly, p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let mut out = Vec::new();
        for (g, d) in distinct_degree(f, p) {
            equal_degree(&g, d, p, rng, &mut out);
        }
        out.sort();
        out
    }

    fn distinct_degree(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut rest = f.clone();
        let x: Poly = vec![0, 1];
        let mut h = x.clone();
        let pe = BigUint::from(p);
        let mut d = 0;
        while rest.len() > 1 {
            d += 1;
            if 2 * d > rest.len() - 1 {
                out.push((rest.clone(), rest.len() - 1));
                break;
            }
            h = powmod(&h, &pe, &rest, p);
            let g = gcd(&rest, &sub(&h, &x, p), p);
            if g.len() > 1 {
                rest = divrem(&rest, &g, p).0;
                h = rem(&h, &rest, p);
                out.push((g, d));
            }
        }
        out
    }

    fn equal_degree(f: &Poly, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
        let n = f.len() - 1;
        if n == d {
            out.push(f.clone());
            return;
        }
        let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: Poly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = sub(&powmod(&a, &e, f, p), &vec![1], p);
            let g = gcd(f, &b, p);
            if g.len() > 1 && g.len() < f.len() {
                let h = divrem(f, &g, p).0;
                equal_degree(&g, d, p, rng, out);
                equal_degree(&monic(&h, p), d, p, rng, out);
                return;
            }
        }
    }
}

/// Quadratic Hensel lifting of a modular factorization.
mod hensel {
    use super::*;

    pub fn reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
        zpoly::trim(&mut v);
        v
    }

    pub fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let half = m / 2u32;
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect()
    }

    pub fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        reduce(&zpoly::mul(a, b), m)
    }

    fn add_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        let v: Vec<BigInt> = (0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect();
        reduce(&v, m)
    }

    fn sub_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let neg: Vec<BigInt> = b.iter().map(|c| -c).collect();
        add_mod(a, &neg, m)
    }

    /// Division by a monic polynomial modulo `m`.
    fn divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut r = reduce(a, m);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let mut q = vec![BigInt::zero(); r.len() - db];
        for i in (0..q.len()).rev() {
            let c = r[i + db].mod_floor(m);
            if !c.is_zero() {
                for (j, y) in b.iter().enumerate() {
                    r[i + j] -= &c * y;
                }
            }
            q[i] = c;
        }
        r.truncate(db);
        (reduce(&q, m), reduce(&r, m))
    }

    fn to_z(a: &[u64]) -> Vec<BigInt> {
        a.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn inverse_mod(a: &BigInt, m: &BigInt) -> BigInt {
        let e = a.mod_floor(m).extended_gcd(m);
        assert!(e.gcd.is_one(), "leading coefficient not invertible");
        e.x.mod_floor(m)
    }

    /// Lifts monic factors of `f mod p` to monic factors of `f mod modulus`.
    pub fn multifactor_lift(
        f: &[BigInt],
        factors: &[Vec<u64>],
        p: u64,
        modulus: &BigInt,
    ) -> Vec<Vec<BigInt>> {
        let lc = f.last().unwrap().clone();
        if factors.len() == 1 {
            let li = inverse_mod(&lc, modulus);
            return vec![reduce(&f.iter().map(|c| c * &li).collect::<Vec<_>>(), modulus)];
        }
        let k = factors.len() / 2;
        let prod = |fs: &[Vec<u64>]| fs.iter().fold(vec![1u64], |acc, g| fp::mul(&acc, g, p));
        let lcp = lc.mod_floor(&BigInt::from(p)).iter_u64_digits().next().unwrap_or(0);
        let g0 = fp::mul(&vec![lcp], &prod(&factors[..k]), p);
        let h0 = prod(&factors[k..]);
        let (s0, t0) = fp::xgcd(&g0, &h0, p);
        let (mut g, mut h, mut s, mut t) = (to_z(&g0), to_z(&h0), to_z(&s0), to_z(&t0));
        let mut m = BigInt::from(p);
        while &m < modulus {
            let next = if &(&m * &m) >= modulus {
                modulus.clone()
            } else {
                &m * &m
            };
            let e = sub_mod(f, &zpoly::mul(&g, &h), &next);
            let (q, r) = divrem_monic(&zpoly::mul(&s, &e), &h, &next);
            let g1 = add_mod(&add_mod(&g, &zpoly::mul(&t, &e), &next), &zpoly::mul(&q, &g), &next);
            let h1 = add_mod(&h, &r, &next);
            let b = sub_mod(
                &add_mod(&zpoly::mul(&s, &g1), &zpoly::mul(&t, &h1), &next),
                &[BigInt::one()],
                &next,
            );
            let (c, d) = divrem_monic(&zpoly::mul(&s, &b), &h1, &next);
            s = sub_mod(&s, &d, &next);
            t = sub_mod(&sub_mod(&t, &zpoly::mul(&t, &b), &next), &zpoly::mul(&c, &g1), &next);
            g = g1;
            h = h1;
            m = next;
        }
        let mut out = multifactor_lift(&g, &factors[..k], p, modulus);
        out.extend(multifactor_lift(&h, &factors[k..], p, modulus));
        out
    }
}
