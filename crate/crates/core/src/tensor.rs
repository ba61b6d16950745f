//! Tensor products realized as Kronecker products, and the two tensor
//! kernel/intersection identities checked against brute force.
//!
//! Flat index convention: the component `i ⊗ j` of `Q^a ⊗ Q^b` sits at
//! index `i·b + j` (row-major on factors).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{RatMatrix, Subspace};
use crate::rational::{q_int, Q};

pub fn kron(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = RatMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let x = a.get(i, j);
            if num_traits::Zero::is_zero(x) {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    let y = b.get(k, l);
                    if !num_traits::Zero::is_zero(y) {
                        out.set(i * rb + k, j * cb + l, x * y);
                    }
                }
            }
        }
    }
    out
}

/// Kronecker product of a nonempty list, folded left to right.
pub fn kron_all(ms: &[RatMatrix]) -> RatMatrix {
    let mut it = ms.iter();
    let first = it.next().expect("nonempty list").clone();
    it.fold(first, |acc, m| kron(&acc, m))
}

#[derive(Clone, Debug)]
pub struct TensorFactors {
    factors: Vec<RatMatrix>,
}

impl TensorFactors {
    pub fn new(factors: Vec<RatMatrix>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("need at least one tensor factor".into()));
        }
        if let Some(m) = factors.iter().find(|m| !m.is_square()) {
            return Err(Error::InvalidArgument(format!(
                "endomorphism must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(TensorFactors { factors })
    }

    pub fn factors(&self) -> &[RatMatrix] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|m| m.rows()).collect()
    }

    /// `ker(f_1 ⊗ … ⊗ f_n)` computed directly from the Kronecker product.
    pub fn kernel_of_product(&self) -> Subspace {
        kron_all(&self.factors).kernel()
    }
}

#[derive(Clone, Debug)]
pub struct TensorSubspacePair {
    factors: Vec<(Subspace, Subspace)>,
}

impl TensorSubspacePair {
    pub fn new(factors: Vec<(Subspace, Subspace)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("need at least one tensor factor".into()));
        }
        for (a, b) in &factors {
            if a.ambient_dim() != b.ambient_dim() {
                return Err(Error::AmbientMismatch(a.ambient_dim(), b.ambient_dim()));
            }
        }
        Ok(TensorSubspacePair { factors })
    }

    pub fn factors(&self) -> &[(Subspace, Subspace)] {
        &self.factors
    }
}

/// `W_1 ⊗ … ⊗ W_n` as a subspace of the product space.
pub fn tensor_subspace(parts: &[&Subspace]) -> Subspace {
    let mats: Vec<RatMatrix> = parts.iter().map(|s| s.basis().clone()).collect();
    let prod = kron_all(&mats);
    Subspace::row_space(&prod)
}

/// `Σ_i V_1 ⊗ … ⊗ ker f_i ⊗ … ⊗ V_n`.
pub fn lemma_ker_rhs(t: &TensorFactors) -> Subspace {
    let dims = t.dims();
    let fulls: Vec<Subspace> = dims.iter().map(|&d| Subspace::full(d)).collect();
    let total: usize = dims.iter().product();
    let mut acc = Subspace::zero(total);
    for (i, f) in t.factors().iter().enumerate() {
        let k = f.kernel();
        let parts: Vec<&Subspace> = (0..dims.len())
            .map(|j| if j == i { &k } else { &fulls[j] })
            .collect();
        acc = acc.sum(&tensor_subspace(&parts)).expect("same ambient");
    }
    acc
}

/// Both sides of the intersection identity:
/// `lhs = (Σ_i V_1 ⊗ … ⊗ V'_i ⊗ … ⊗ V_n) ∩ (V''_1 ⊗ … ⊗ V''_n)` and
/// `rhs = Σ_i V''_1 ⊗ … ⊗ (V'_i ∩ V''_i) ⊗ … ⊗ V''_n`.
pub fn lemma_main_rhs(t: &TensorSubspacePair) -> (Subspace, Subspace) {
    let dims: Vec<usize> = t.factors().iter().map(|(a, _)| a.ambient_dim()).collect();
    let fulls: Vec<Subspace> = dims.iter().map(|&d| Subspace::full(d)).collect();
    let total: usize = dims.iter().product();
    let n = dims.len();

    let mut sum = Subspace::zero(total);
    for i in 0..n {
        let parts: Vec<&Subspace> = (0..n)
            .map(|j| if j == i { &t.factors()[j].0 } else { &fulls[j] })
            .collect();
        sum = sum.sum(&tensor_subspace(&parts)).expect("same ambient");
    }
    let dd: Vec<&Subspace> = t.factors().iter().map(|(_, b)| b).collect();
    let lhs = sum.intersect(&tensor_subspace(&dd)).expect("same ambient");

    let mut rhs = Subspace::zero(total);
    for i in 0..n {
        let (a, b) = &t.factors()[i];
        let cap = a.intersect(b).expect("same ambient");
        let parts: Vec<&Subspace> = (0..n)
            .map(|j| if j == i { &cap } else { &t.factors()[j].1 })
            .collect();
        rhs = rhs.sum(&tensor_subspace(&parts)).expect("same ambient");
    }
    (lhs, rhs)
}

/// Shape limits for random instances.
#[derive(Clone, Copy, Debug)]
pub struct FuzzShape {
    pub max_factors: usize,
    pub max_dim: usize,
    pub max_entry: i64,
}

impl Default for FuzzShape {
    fn default() -> Self {
        FuzzShape {
            max_factors: 3,
            max_dim: 4,
            max_entry: 3,
        }
    }
}

fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_row(rng: &mut ChaCha8Rng, d: usize, e: i64) -> Vec<Q> {
    (0..d).map(|_| q_int(rng.gen_range(-e..=e))).collect()
}

/// Square integer matrix with planted degeneracies (zero rows, repeated rows).
pub fn random_endomorphism(rng: &mut ChaCha8Rng, d: usize, e: i64) -> RatMatrix {
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(d);
    for i in 0..d {
        let roll = rng.gen_range(0..4);
        let row = if roll == 0 {
            vec![q_int(0); d]
        } else if roll == 1 && i > 0 {
            let src = rows[rng.gen_range(0..i)].clone();
            if rng.gen_bool(0.5) {
                src.into_iter().map(|x| -x).collect()
            } else {
                src
            }
        } else {
            random_row(rng, d, e)
        };
        rows.push(row);
    }
    RatMatrix::from_rows(d, rows)
}

/// Row space of a random integer matrix of random rank.
pub fn random_subspace(rng: &mut ChaCha8Rng, d: usize, e: i64) -> Subspace {
    let r = rng.gen_range(0..=d);
    let rows = (0..r).map(|_| random_row(rng, d, e)).collect();
    Subspace::from_rows(d, rows)
}

pub fn random_tensor_factors(rng: &mut ChaCha8Rng, shape: FuzzShape) -> TensorFactors {
    let n = rng.gen_range(1..=shape.max_factors);
    let factors = (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=shape.max_dim);
            random_endomorphism(rng, d, shape.max_entry)
        })
        .collect();
    TensorFactors::new(factors).expect("valid shape")
}

pub fn random_subspace_pair(rng: &mut ChaCha8Rng, shape: FuzzShape) -> TensorSubspacePair {
    let n = rng.gen_range(1..=shape.max_factors);
    let factors = (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=shape.max_dim);
            let a = random_subspace(rng, d, shape.max_entry);
            let b = if rng.gen_bool(0.3) && a.dim() > 0 {
                // share part of V' so the intersection is nontrivial
                let extra = random_subspace(rng, d, shape.max_entry);
                let keep = rng.gen_range(0..=a.dim());
                let shared = Subspace::from_rows(d, a.basis().row_vecs()[..keep].to_vec());
                shared.sum(&extra).expect("same ambient")
            } else {
                random_subspace(rng, d, shape.max_entry)
            };
            (a, b)
        })
        .collect();
    TensorSubspacePair::new(factors).expect("valid shape")
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LemmaFuzzReport {
    pub lemma: String,
    pub seed: u64,
    pub iters: usize,
    pub passed: usize,
    /// Instance indices whose two sides differed.
    pub failures: Vec<u64>,
    pub verdict: String,
}

impl LemmaFuzzReport {
    fn new(lemma: &str, seed: u64, results: Vec<(u64, bool)>) -> Self {
        let iters = results.len();
        let failures: Vec<u64> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
        LemmaFuzzReport {
            lemma: lemma.to_string(),
            seed,
            iters,
            passed: iters - failures.len(),
            verdict: if failures.is_empty() { "pass" } else { "fail" }.to_string(),
            failures,
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Kernel identity on `iters` seeded instances; instance `i` draws from stream `i`.
pub fn fuzz_lemma_ker(iters: usize, seed: u64, shape: FuzzShape) -> LemmaFuzzReport {
    let results = (0..iters as u64)
        .into_par_iter()
        .map(|i| {
            let t = random_tensor_factors(&mut instance_rng(seed, 2 * i), shape);
            (i, t.kernel_of_product() == lemma_ker_rhs(&t))
        })
        .collect();
    LemmaFuzzReport::new("la-ker", seed, results)
}

pub fn fuzz_lemma_main(iters: usize, seed: u64, shape: FuzzShape) -> LemmaFuzzReport {
    let results = (0..iters as u64)
        .into_par_iter()
        .map(|i| {
            let t = random_subspace_pair(&mut instance_rng(seed, 2 * i + 1), shape);
            let (lhs, rhs) = lemma_main_rhs(&t);
            (i, lhs == rhs)
        })
        .collect();
    LemmaFuzzReport::new("la-main", seed, results)
}
