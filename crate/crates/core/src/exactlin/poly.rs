//! Univariate polynomials over Q and Z (dense, ascending coefficients).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use rayon::prelude::*;

use super::modular::{crt_step, inv_mod, primes_below_2_31, reduce_mod};
use super::RatMatrix;
use crate::rational::{common_denominator, format_q, primitive_integer_row, Q};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoly {
    /// Ascending coefficients with no trailing zeros; the zero polynomial is empty.
    coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Q::from_integer(c.into())).collect())
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(Q::from_integer).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x - a`
    pub fn linear(a: &Q) -> Self {
        Self::new(vec![-a.clone(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Q::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> QPoly {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(QPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return (QPoly::zero(), self.clone());
        }
        let dl = d.lead();
        let dd = d.coeffs.len() - 1;
        let mut q = vec![Q::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &dl;
            if !c.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * b;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn derivative(&self) -> QPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Monic gcd, computed over Z by a primitive remainder sequence.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        let g = zpoly::gcd(&self.primitive_part(), &o.primitive_part());
        QPoly::from_ints(&g).monic()
    }

    /// Primitive integer polynomial with positive leading coefficient.
    pub fn primitive_part(&self) -> Vec<BigInt> {
        let mut p = primitive_integer_row(&self.coeffs);
        if p.last().is_some_and(|x| x.is_negative()) {
            for x in p.iter_mut() {
                *x = -&*x;
            }
        }
        p
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    /// Yun's squarefree decomposition of a monic polynomial:
    /// returns `(a_i, i)` with `self = prod a_i^i`, each `a_i` squarefree, monic and non-constant.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, u32)> {
        let f = self.monic();
        if f.degree() == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.divrem(&a).0;
        let mut c = fp.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let ai = b.gcd(&d);
            b = b.divrem(&ai).0;
            c = d.divrem(&ai).0;
            if ai.degree() > 0 {
                out.push((ai.monic(), i));
            }
            if b.degree() == 0 {
                break;
            }
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn radical(&self) -> QPoly {
        self.squarefree_decomposition()
            .into_iter()
            .fold(QPoly::one(), |acc, (a, _)| acc.mul(&a))
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree_decomposition().iter().all(|(_, e)| *e == 1)
    }

    /// Coefficients from the leading term down, as strings.
    pub fn descending_strings(&self) -> Vec<String> {
        self.coeffs.iter().rev().map(format_q).collect()
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{}", format_q(&a))?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(x I - A)`.
///
/// With `d` the common denominator of `A`, the integer matrix `B = dA` has
/// an integer characteristic polynomial. It is computed by Hessenberg
/// reduction modulo word-size primes and recovered by CRT once the modulus
/// exceeds twice a Hadamard-type bound on its coefficients; then
/// `coeff_k(A) = coeff_k(B) / d^(n-k)`.
pub fn charpoly(a: &RatMatrix) -> QPoly {
    assert!(a.is_square(), "charpoly of a non-square matrix");
    let n = a.rows();
    let d = common_denominator((0..n).flat_map(|i| a.row(i).iter()));
    let b: Vec<Vec<BigInt>> = (0..n)
        .map(|i| a.row(i).iter().map(|x| x.numer() * (&d / x.denom())).collect())
        .collect();
    let max_bits = b.iter().flatten().map(|x| x.bits()).max().unwrap_or(0);
    if max_bits == 0 {
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        return QPoly::new(coeffs);
    }
    // |coeff_(n-k)| <= C(n,k) (sqrt(k) M)^k <= 2^n (sqrt(n) M)^n
    let bound_bits = n as f64 * (1.0 + 0.5 * (n as f64).log2() + max_bits as f64) + 2.0;
    let primes = crt_primes(bound_bits);
    let residues: Vec<Vec<u64>> = primes
        .par_iter()
        .map(|&p| {
            let m: Vec<Vec<u64>> = b
                .iter()
                .map(|row| row.iter().map(|x| reduce_mod(x, p)).collect())
                .collect();
            charpoly_mod_p(m, p)
        })
        .collect();
    let mut modulus = BigInt::one();
    let mut acc = vec![BigInt::zero(); n + 1];
    for (&p, r) in primes.iter().zip(&residues) {
        crt_step(&mut acc, &modulus, r, p);
        modulus *= BigInt::from(p);
    }
    let half = &modulus >> 1;
    let mut dpow = BigInt::one();
    let mut coeffs = vec![Q::zero(); n + 1];
    for k in (0..=n).rev() {
        let mut c = acc[k].clone();
        if c > half {
            c -= &modulus;
        }
        coeffs[k] = Q::new(c, dpow.clone());
        dpow *= &d;
    }
    QPoly::new(coeffs)
}

/// Primes below 2^31, descending, whose product exceeds `2^bits`.
fn crt_primes(bits: f64) -> Vec<u64> {
    let mut have = 0.0;
    primes_below_2_31()
        .take_while(|&p| {
            let more = have <= bits;
            have += (p as f64).log2();
            more
        })
        .collect()
}

/// `det(x I - A)` over F_p via Hessenberg form, ascending coefficients.
fn charpoly_mod_p(mut h: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let n = h.len();
    for m in 1..n {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let tinv = inv_mod(h[m][m - 1], p);
        for i in m + 1..n {
            if h[i][m - 1] == 0 {
                continue;
            }
            let u = h[i][m - 1] * tinv % p;
            for j in 0..n {
                h[i][j] = (h[i][j] + p - u * h[m][j] % p) % p;
            }
            for row in h.iter_mut() {
                row[m] = (row[m] + u * row[i]) % p;
            }
        }
    }
    let mut ps: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        // (x - h[m][m]) * ps[m]
        let prev = &ps[m];
        let mut next = vec![0u64; m + 2];
        for (j, &c) in prev.iter().enumerate() {
            next[j + 1] = (next[j + 1] + c) % p;
            next[j] = (next[j] + p - c * h[m][m] % p) % p;
        }
        let mut t = 1u64;
        for i in (0..m).rev() {
            t = t * h[i + 1][i] % p;
            if t == 0 {
                break;
            }
            let c = h[i][m] * t % p;
            for (j, &e) in ps[i].iter().enumerate() {
                next[j] = (next[j] + p - c * e % p) % p;
            }
        }
        ps.push(next);
    }
    ps.pop().unwrap()
}

/// Dense integer polynomial helpers used by gcd and factorization.
pub(crate) mod zpoly {
    use super::*;

    pub fn trim(p: &mut Vec<BigInt>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    pub fn content(p: &[BigInt]) -> BigInt {
        p.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn primitive(p: &[BigInt]) -> Vec<BigInt> {
        let c = content(p);
        let mut out: Vec<BigInt> = if c.is_zero() || c.is_one() {
            p.to_vec()
        } else {
            p.iter().map(|x| x / &c).collect()
        };
        trim(&mut out);
        if out.last().is_some_and(|x| x.is_negative()) {
            for x in out.iter_mut() {
                *x = -&*x;
            }
        }
        out
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    /// Pseudo-remainder of `a` by `b`.
    pub fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let lb = b.last().unwrap().clone();
        while r.len() > db && !r.is_empty() {
            let lr = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            for x in r.iter_mut() {
                *x *= &lb;
            }
            for (j, y) in b.iter().enumerate() {
                r[shift + j] -= &lr * y;
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut a = primitive(a);
        let mut b = primitive(b);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = prem(&a, &b);
            a = b;
            b = primitive(&r);
        }
        primitive(&a)
    }

    /// Exact division over Z; `None` if `b` does not divide `a`.
    pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
        if b.is_empty() {
            return None;
        }
        if a.is_empty() {
            return Some(Vec::new());
        }
        if a.len() < b.len() {
            return None;
        }
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let lb = b.last().unwrap();
        let mut q = vec![BigInt::zero(); a.len() - db];
        for i in (0..q.len()).rev() {
            let (c, rem) = r[i + db].div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            if !c.is_zero() {
                for (j, y) in b.iter().enumerate() {
                    r[i + j] -= &c * y;
                }
            }
            q[i] = c;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        trim(&mut q);
        Some(q)
    }
}
