use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::gamma0::{check_weight, dim_spaces, enumerate_cusps};
use super::generators::{integer_series, list_generators, Generator};
use crate::error::{Error, Result};
use crate::exactlin::{RatMatrix, Subspace};
use crate::qseries::{sturm_bound, QExpansion};
use crate::rational::{primitive_integer_row, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Generated,
    Fixture,
}

/// A basis of M_k(Γ0(N)) or S_k(Γ0(N)) as truncated q-expansions
/// `c_0 .. c_prec`, held in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceBasis {
    weight: u32,
    level: u64,
    prec: usize,
    cuspidal: bool,
    space: Subspace,
    source: Source,
}

impl SpaceBasis {
    /// Validates and canonicalizes `rows` against the dimension formula.
    pub fn new(
        weight: u32,
        level: u64,
        prec: usize,
        cuspidal: bool,
        rows: Vec<Vec<Q>>,
        source: Source,
    ) -> Result<Self> {
        check_weight(weight)?;
        let dims = dim_spaces(weight, level)?;
        let sturm = sturm_bound(weight, level)?;
        if prec < sturm {
            return Err(Error::InsufficientPrecision {
                needed: sturm,
                have: prec,
            });
        }
        let expected = if cuspidal { dims.dim_s } else { dims.dim_m };
        if rows.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{} rows supplied for a space of dimension {expected} (k={weight}, N={level})",
                rows.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != prec + 1) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} at prec {prec}",
                r.len()
            )));
        }
        if cuspidal && rows.iter().any(|r| !r[0].is_zero()) {
            return Err(Error::DimensionMismatch(
                "cuspidal basis has a nonzero constant term".into(),
            ));
        }
        let space = Subspace::from_rows(prec + 1, rows);
        if space.dim() != expected {
            return Err(Error::BasisIncomplete {
                k: weight,
                n: level,
                rank: space.dim(),
                expected,
            });
        }
        Ok(SpaceBasis {
            weight,
            level,
            prec,
            cuspidal,
            space,
            source,
        })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn is_cuspidal(&self) -> bool {
        self.cuspidal
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Echelon basis; rows are forms, columns are `c_0 .. c_prec`.
    pub fn basis(&self) -> &RatMatrix {
        self.space.basis()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn form(&self, i: usize) -> QExpansion {
        QExpansion::new(self.weight, self.level, self.basis().row(i).to_vec())
            .expect("basis rows are valid expansions")
    }

    /// Same space on the shorter window `c_0 .. c_prec`.
    pub fn truncate(&self, prec: usize) -> Result<SpaceBasis> {
        if prec > self.prec {
            return Err(Error::InsufficientPrecision {
                needed: prec,
                have: self.prec,
            });
        }
        if prec == self.prec {
            return Ok(self.clone());
        }
        let rows = self
            .basis()
            .row_vecs()
            .into_iter()
            .map(|mut r| {
                r.truncate(prec + 1);
                r
            })
            .collect();
        SpaceBasis::new(self.weight, self.level, prec, self.cuspidal, rows, self.source)
    }
}

/// Incremental fraction-free echelon used to pick independent generators.
struct Echelon {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        for (piv, row) in &self.rows {
            if v[*piv].is_zero() {
                continue;
            }
            let a = row[*piv].clone();
            let b = v[*piv].clone();
            for (x, y) in v.iter_mut().zip(row) {
                *x = &*x * &a - &b * y;
            }
            crate::exactlin::make_primitive(&mut v);
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                if v[p].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                self.rows.push((p, v));
                true
            }
        }
    }
}

/// Generators spanning M_k(Γ0(N)), chosen greedily in list order.
fn select_generators(k: u32, n: u64) -> Result<Vec<Generator>> {
    let dims = dim_spaces(k, n)?;
    let window = sturm_bound(k, n)?;
    let gens = list_generators(k, n);
    let series = integer_series(&gens, window);
    let mut ech = Echelon { rows: Vec::new() };
    let mut chosen = Vec::new();
    for (g, (ints, _)) in gens.into_iter().zip(series) {
        if chosen.len() == dims.dim_m {
            break;
        }
        if ech.insert(ints) {
            chosen.push(g);
        }
    }
    if chosen.len() < dims.dim_m {
        return Err(Error::BasisIncomplete {
            k,
            n,
            rank: chosen.len(),
            expected: dims.dim_m,
        });
    }
    Ok(chosen)
}

fn check_prec(k: u32, n: u64, prec: usize) -> Result<()> {
    check_weight(k)?;
    let sturm = sturm_bound(k, n)?;
    if prec < sturm {
        return Err(Error::InsufficientPrecision {
            needed: sturm,
            have: prec,
        });
    }
    Ok(())
}

fn to_rows(series: &[(Vec<BigInt>, BigInt)]) -> Vec<Vec<Q>> {
    series
        .iter()
        .map(|(ints, _)| ints.iter().map(|x| Q::from_integer(x.clone())).collect())
        .collect()
}

/// M_k(Γ0(N)) spanned by Eisenstein series, `E_2 - d E_2(q^d)` and their
/// pairwise products; fails with `basis-incomplete` when they fall short.
pub fn build_mk_basis(k: u32, n: u64, prec: usize) -> Result<SpaceBasis> {
    check_prec(k, n, prec)?;
    let chosen = select_generators(k, n)?;
    let series = integer_series(&chosen, prec);
    SpaceBasis::new(k, n, prec, false, to_rows(&series), Source::Generated)
}

/// S_k(Γ0(N)) as the forms in the generated span whose constant terms vanish
/// at every cusp.
pub fn build_sk_basis(k: u32, n: u64, prec: usize) -> Result<SpaceBasis> {
    check_prec(k, n, prec)?;
    let dims = dim_spaces(k, n)?;
    let chosen = select_generators(k, n)?;
    let cusps = enumerate_cusps(n)?;
    let series = integer_series(&chosen, prec);
    let ct_rows: Vec<Vec<Q>> = chosen
        .iter()
        .zip(&series)
        .map(|(g, (_, scale))| {
            let s = Q::from_integer(scale.clone());
            g.cusp_constant_terms(&cusps).into_iter().map(|c| c * &s).collect()
        })
        .collect();
    let ct = RatMatrix::from_rows(cusps.len(), ct_rows);
    let kernel = ct.left_kernel();
    if kernel.dim() != dims.dim_s {
        return Err(Error::CuspFilterInconsistent {
            k,
            n,
            got: kernel.dim(),
            expected: dims.dim_s,
        });
    }
    let forms: Vec<Vec<Q>> = (0..kernel.dim())
        .map(|i| {
            let lambda = primitive_integer_row(kernel.basis().row(i));
            (0..=prec)
                .map(|m| {
                    let c = lambda
                        .iter()
                        .zip(&series)
                        .filter(|(l, _)| !l.is_zero())
                        .fold(BigInt::zero(), |a, (l, (ints, _))| a + l * &ints[m]);
                    Q::from_integer(c)
                })
                .collect()
        })
        .collect();
    SpaceBasis::new(k, n, prec, true, forms, Source::Generated)
}
