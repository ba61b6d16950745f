//! Degeneracy maps `i_d`, the coefficient filters `π_d` and `π`, the
//! subspace K_0(N), the quotient S_k(Γ0(N))/K_0(N), and Theorem 1.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{gcd, prime_divisors, squarefree_divisors};
use crate::error::{Error, Result};
use crate::exactlin::{RatMatrix, Subspace};
use crate::qseries::{sturm_bound, QExpansion};
use crate::rational::{q_int, Q};
use crate::report::{matrix_strings, Verdict};
use crate::spaces::{SpaceBasis, SpaceStore, Source};

/// The map `i_d` from level `source` to level `target`, with
/// `source | target` and `d | target/source`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegeneracySpec {
    pub source: u64,
    pub target: u64,
    pub d: u64,
}

impl DegeneracySpec {
    pub fn new(source: u64, target: u64, d: u64) -> Result<Self> {
        if source == 0 || target == 0 || d == 0 {
            return Err(Error::InvalidLevel(0));
        }
        if target % source != 0 || (target / source) % d != 0 {
            return Err(Error::Divisibility(format!(
                "i_{d} needs {source} | {target} and {d} | {}",
                target / source.max(1)
            )));
        }
        Ok(DegeneracySpec { source, target, d })
    }
}

/// `c_m(i_d f) = c_{m/d}(f)` when `d | m` and 0 otherwise, on `c_0 .. c_prec`.
pub fn degeneracy_i(f: &QExpansion, spec: DegeneracySpec, prec: usize) -> Result<QExpansion> {
    if f.level() != spec.source {
        return Err(Error::TagMismatch(format!(
            "i_d from level {} applied to a form of level {}",
            spec.source,
            f.level()
        )));
    }
    let d = spec.d as usize;
    if prec / d > f.prec() {
        return Err(Error::InsufficientPrecision {
            needed: prec / d,
            have: f.prec(),
        });
    }
    let coeffs = (0..=prec)
        .map(|m| {
            if m % d == 0 {
                f.coeff(m / d).clone()
            } else {
                Q::zero()
            }
        })
        .collect();
    QExpansion::new(f.weight(), spec.target, coeffs)
}

/// Keeps the coefficients `c_m` with `d | m`.
pub fn pi_filter(f: &QExpansion, d: u64) -> Result<QExpansion> {
    if d == 0 || f.level() % d != 0 {
        return Err(Error::Divisibility(format!(
            "π_{d} needs d | {}",
            f.level()
        )));
    }
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(m, c)| if m as u64 % d == 0 { c.clone() } else { Q::zero() })
        .collect();
    QExpansion::new(f.weight(), f.level(), coeffs)
}

/// `π = Σ_{e | rad N} μ(e) π_e`, which keeps exactly the `c_m` with `gcd(m, N) = 1`.
pub fn pi_projector(f: &QExpansion) -> Result<QExpansion> {
    let mut acc = QExpansion::zero(f.weight(), f.level(), f.prec());
    for (e, sign) in squarefree_divisors(f.level()) {
        acc = acc.add(&pi_filter(f, e)?.scale(&q_int(sign)))?;
    }
    Ok(acc)
}

fn coprime_columns(n: u64, prec: usize) -> Vec<usize> {
    (0..=prec).filter(|&m| gcd(m as u64, n) == 1).collect()
}

/// K_0(N) in the echelon coordinates of `space`.
pub fn k0_coordinates(space: &SpaceBasis) -> Subspace {
    let cols = coprime_columns(space.level(), space.prec());
    space.basis().select_columns(&cols).left_kernel()
}

/// K_0(N): forms in `space` with `c_m = 0` whenever `gcd(m, N) = 1`, in
/// coefficient coordinates `c_0 .. c_prec`.
pub fn k0_subspace(space: &SpaceBasis) -> Result<Subspace> {
    let coords = k0_coordinates(space);
    if coords.is_zero() {
        return Ok(Subspace::zero(space.prec() + 1));
    }
    Ok(Subspace::row_space(&coords.basis().mul(space.basis())?))
}

/// Fetches a space at `prec`, or at the largest smaller precision a fixture offers.
fn fetch_upto(
    store: &SpaceStore,
    k: u32,
    n: u64,
    cuspidal: bool,
    prec: usize,
) -> Result<Arc<SpaceBasis>> {
    match store.space(k, n, cuspidal, prec) {
        Err(Error::InsufficientPrecision { have, .. }) if have < prec => {
            store.space(k, n, cuspidal, have)
        }
        other => other,
    }
}

/// Images `i_p(f)` for every prime `p | N` and every basis row `f` of the
/// level `N/p` space, on the window `c_0 .. prec`.
pub fn oldsum_images(subs: &[(u64, Arc<SpaceBasis>)], n: u64, prec: usize) -> Result<Vec<Vec<Q>>> {
    let mut rows = Vec::new();
    for (p, sub) in subs {
        let spec = DegeneracySpec::new(n / p, n, *p)?;
        for i in 0..sub.dim() {
            rows.push(degeneracy_i(&sub.form(i), spec, prec)?.into_coeffs());
        }
    }
    Ok(rows)
}

/// `Σ_{p | N} i_p(S_k(Γ0(N/p)))` (or the M_k analogue) on `c_0 .. prec`.
pub fn oldsum_subspace(
    store: &SpaceStore,
    k: u32,
    n: u64,
    cuspidal: bool,
    prec: usize,
) -> Result<Subspace> {
    let mut subs = Vec::new();
    for p in prime_divisors(n) {
        let sub_prec = (prec / p as usize).max(sturm_bound(k, n / p)?);
        subs.push((p, store.space(k, n / p, cuspidal, sub_prec)?));
    }
    Ok(Subspace::from_rows(prec + 1, oldsum_images(&subs, n, prec)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Bases {
    pub k0: Vec<Vec<String>>,
    pub oldsum: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Report {
    pub k: u32,
    #[serde(rename = "N")]
    pub level: u64,
    pub variant: &'static str,
    pub prec: usize,
    pub sturm: usize,
    pub source: Source,
    pub dim_space: usize,
    #[serde(rename = "dim_K0")]
    pub dim_k0: usize,
    pub dim_oldsum: usize,
    pub equal: bool,
    pub oldsum_in_k0: bool,
    pub images_in_space: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bases: Option<Theorem1Bases>,
    pub verdict: Verdict,
}

impl Theorem1Report {
    pub fn check(&self) -> Result<()> {
        if self.verdict.is_pass() {
            return Ok(());
        }
        Err(Error::Theorem1Violation {
            k: self.k,
            n: self.level,
            detail: format!(
                "dim K_0 = {}, dim oldsum = {}, equal = {}, oldsum ⊆ K_0: {}, images in space: {}",
                self.dim_k0, self.dim_oldsum, self.equal, self.oldsum_in_k0, self.images_in_space
            ),
        })
    }
}

/// Checks `K_0(N) = Σ_{p | N} i_p(S_k(Γ0(N/p)))` (or the M_k version when
/// `cuspidal` is false) as an equality of canonical subspaces.
///
/// The window starts at `prec` and shrinks when a lower-level basis is only
/// available at lower precision; it never drops below the Sturm bound.
pub fn verify_theorem1(
    store: &SpaceStore,
    k: u32,
    n: u64,
    cuspidal: bool,
    prec: usize,
    include_bases: bool,
) -> Result<Theorem1Report> {
    let sturm = sturm_bound(k, n)?;
    let space = fetch_upto(store, k, n, cuspidal, prec.max(sturm))?;
    let mut window = space.prec();
    let mut subs = Vec::new();
    for p in prime_divisors(n) {
        let sub_sturm = sturm_bound(k, n / p)?;
        let sub = fetch_upto(store, k, n / p, cuspidal, (window / p as usize).max(sub_sturm))?;
        window = window.min(p as usize * sub.prec() + p as usize - 1);
        subs.push((p, sub));
    }
    if window < sturm {
        return Err(Error::InsufficientPrecision {
            needed: sturm,
            have: window,
        });
    }
    let space = space.truncate(window)?;
    let images = oldsum_images(&subs, n, window)?;

    let images_in_space = images.iter().all(|r| space.subspace().contains_vector(r));
    let coprime = coprime_columns(n, window);
    let vanish = images.iter().all(|r| coprime.iter().all(|&m| r[m].is_zero()));
    let oldsum = Subspace::from_rows(window + 1, images);
    let k0 = k0_subspace(&space)?;
    let oldsum_in_k0 = vanish && k0.contains(&oldsum)?;
    let equal = k0 == oldsum;

    Ok(Theorem1Report {
        k,
        level: n,
        variant: if cuspidal { "cusp" } else { "full" },
        prec: window,
        sturm,
        source: space.source(),
        dim_space: space.dim(),
        dim_k0: k0.dim(),
        dim_oldsum: oldsum.dim(),
        equal,
        oldsum_in_k0,
        images_in_space,
        bases: include_bases.then(|| Theorem1Bases {
            k0: matrix_strings(k0.basis()),
            oldsum: matrix_strings(oldsum.basis()),
        }),
        verdict: Verdict::from_bool(equal && oldsum_in_k0 && images_in_space),
    })
}

/// S_k(Γ0(N))/K_0(N), presented by the echelon-basis coordinates that are
/// not pivots of K_0.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    ambient: Arc<SpaceBasis>,
    k0: Subspace,
    section_indices: Vec<usize>,
}

impl QuotientSpace {
    pub fn new(ambient: Arc<SpaceBasis>) -> Self {
        let k0 = k0_coordinates(&ambient);
        let section_indices = (0..ambient.dim())
            .filter(|j| !k0.pivots().contains(j))
            .collect();
        QuotientSpace {
            ambient,
            k0,
            section_indices,
        }
    }

    pub fn ambient(&self) -> &Arc<SpaceBasis> {
        &self.ambient
    }

    /// K_0 in the echelon coordinates of the ambient space.
    pub fn k0(&self) -> &Subspace {
        &self.k0
    }

    pub fn dim(&self) -> usize {
        self.section_indices.len()
    }

    pub fn section_indices(&self) -> &[usize] {
        &self.section_indices
    }

    /// Coset representatives as rows in ambient echelon coordinates.
    pub fn section(&self) -> RatMatrix {
        let d = self.ambient.dim();
        let rows = self
            .section_indices
            .iter()
            .map(|&j| {
                let mut v = vec![Q::zero(); d];
                v[j] = q_int(1);
                v
            })
            .collect();
        RatMatrix::from_rows(d, rows)
    }

    /// Coset representatives as q-expansion rows.
    pub fn section_forms(&self) -> RatMatrix {
        self.ambient.basis().select_rows(&self.section_indices)
    }

    /// Section coordinates of the class of `x` (ambient echelon coordinates).
    pub fn project(&self, x: &[Q]) -> Vec<Q> {
        let r = self.k0.reduce(x);
        self.section_indices.iter().map(|&j| r[j].clone()).collect()
    }

    /// Representative form (coefficients `c_0 .. c_prec`) of section coordinates `v`.
    pub fn lift(&self, v: &[Q]) -> Vec<Q> {
        self.section_forms().vec_mul(v)
    }

    /// `c_m` of the class with section coordinates `v`; only defined for
    /// `gcd(m, N) = 1`.
    pub fn coefficient(&self, v: &[Q], m: usize) -> Result<Q> {
        let n = self.ambient.level();
        if gcd(m as u64, n) != 1 {
            return Err(Error::Divisibility(format!(
                "c_{m} is not defined on the quotient at level {n}"
            )));
        }
        if m > self.ambient.prec() {
            return Err(Error::InsufficientPrecision {
                needed: m,
                have: self.ambient.prec(),
            });
        }
        let forms = self.section_forms();
        Ok(v.iter()
            .enumerate()
            .fold(Q::zero(), |acc, (i, x)| acc + x * forms.get(i, m)))
    }

    /// Matrix induced on section coordinates by `t` (ambient coordinates,
    /// row convention), after checking that `t` preserves K_0.
    pub fn induced(&self, t: &RatMatrix, m: u64) -> Result<RatMatrix> {
        if !self.k0.is_invariant_under(t)? {
            return Err(Error::DoesNotDescend { m });
        }
        let rows = self
            .section_indices
            .iter()
            .map(|&j| self.project(t.row(j)))
            .collect();
        Ok(RatMatrix::from_rows(self.dim(), rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f11() -> QExpansion {
        QExpansion::from_i64(2, 11, &[0, 1, -2, -1]).unwrap()
    }

    #[test]
    fn degeneracy_examples() {
        let g = degeneracy_i(&f11(), DegeneracySpec::new(11, 22, 2).unwrap(), 6).unwrap();
        assert_eq!(g, QExpansion::from_i64(2, 22, &[0, 0, 1, 0, -2, 0, -1]).unwrap());
        let id = degeneracy_i(&f11(), DegeneracySpec::new(11, 22, 1).unwrap(), 3).unwrap();
        assert_eq!(id.coeffs(), f11().coeffs());
        assert_eq!(id.level(), 22);
        assert!(DegeneracySpec::new(11, 22, 3).is_err());
        assert!(DegeneracySpec::new(5, 22, 1).is_err());
        assert!(degeneracy_i(&f11(), DegeneracySpec::new(11, 22, 2).unwrap(), 8).is_err());
    }

    #[test]
    fn filter_examples() {
        let f = QExpansion::from_i64(2, 2, &[1, 1, 1, 1]).unwrap();
        assert_eq!(pi_filter(&f, 2).unwrap().coeffs(), QExpansion::from_i64(2, 2, &[1, 0, 1, 0]).unwrap().coeffs());
        assert_eq!(pi_filter(&f, 1).unwrap(), f);
        assert!(pi_filter(&f, 3).is_err());
        let g = QExpansion::from_i64(2, 6, &[0, 1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(
            pi_projector(&g).unwrap().coeffs(),
            QExpansion::from_i64(2, 6, &[0, 1, 0, 0, 0, 5, 0]).unwrap().coeffs()
        );
    }

    #[test]
    fn k0_level_one_is_zero() {
        let s = crate::spaces::build_sk_basis(12, 1, 5).unwrap();
        assert!(k0_subspace(&s).unwrap().is_zero());
        let q = QuotientSpace::new(Arc::new(s));
        assert_eq!(q.dim(), 1);
        assert_eq!(q.coefficient(&[q_int(1)], 2).unwrap(), q_int(-24));
    }

    #[test]
    fn theorem1_generated_levels() {
        let store = SpaceStore::new("/nonexistent");
        for (k, n) in [(4, 6), (6, 4), (4, 10), (12, 1)] {
            let r = verify_theorem1(&store, k, n, true, 3 * sturm_bound(k, n).unwrap(), true).unwrap();
            assert!(r.verdict.is_pass(), "{r:?}");
            let r = verify_theorem1(&store, k, n, false, 2 * sturm_bound(k, n).unwrap(), false).unwrap();
            assert!(r.verdict.is_pass(), "{r:?}");
        }
    }
}
