use num_traits::Zero;

use super::RatMatrix;
use crate::error::{Error, Result};
use crate::rational::Q;

/// A row space over Q held in canonical reduced row-echelon form, so two
/// subspaces are equal exactly when their bases are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RatMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RatMatrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RatMatrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &RatMatrix) -> Self {
        let (basis, pivots) = m.rref();
        Subspace {
            ambient_dim: m.cols(),
            basis,
            pivots,
        }
    }

    pub fn from_rows(ambient_dim: usize, rows: Vec<Vec<Q>>) -> Self {
        Self::row_space(&RatMatrix::from_rows(ambient_dim, rows))
    }

    /// Span of standard basis vectors `e_i` for the given indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let rows = indices
            .iter()
            .map(|&i| {
                let mut v = vec![Q::zero(); ambient_dim];
                v[i] = num_traits::One::one();
                v
            })
            .collect();
        Self::from_rows(ambient_dim, rows)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Self::row_space(&self.basis.stack(&other.basis)?))
    }

    /// Zassenhaus intersection: echelonize `[[A, A], [B, 0]]`; rows whose
    /// left half vanishes span the intersection in their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient_dim;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(n));
        }
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for i in 0..self.dim() {
            let r = self.basis.row(i);
            rows.push(r.iter().chain(r.iter()).cloned().collect());
        }
        for i in 0..other.dim() {
            let r = other.basis.row(i);
            rows.push(
                r.iter()
                    .cloned()
                    .chain(std::iter::repeat(Q::zero()).take(n))
                    .collect(),
            );
        }
        let (e, pivots) = RatMatrix::from_rows(2 * n, rows).rref();
        let inter: Vec<Vec<Q>> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= n)
            .map(|(i, _)| e.row(i)[n..].to_vec())
            .collect();
        Ok(Self::from_rows(n, inter))
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(v.len(), self.ambient_dim);
        let coords: Vec<Q> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let recon = self.basis.vec_mul(&coords);
        (recon.as_slice() == v).then_some(coords)
    }

    pub fn contains_vector(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok((0..other.dim()).all(|i| self.contains_vector(other.basis.row(i))))
    }

    /// Reduces `v` modulo the subspace by clearing every pivot position.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if out[p].is_zero() {
                continue;
            }
            let c = out[p].clone();
            for (o, b) in out.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *o -= &c * b;
                }
            }
        }
        out
    }

    /// True when `rows * m` stays inside the subspace (rows act on the left).
    pub fn is_invariant_under(&self, m: &RatMatrix) -> Result<bool> {
        if m.rows() != self.ambient_dim || m.cols() != self.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, m.rows()));
        }
        Ok((0..self.dim()).all(|i| self.contains_vector(&m.vec_mul(self.basis.row(i)))))
    }

    /// Matrix of `m` restricted to an invariant subspace, in echelon-basis
    /// coordinates (row convention).
    pub fn restrict(&self, m: &RatMatrix) -> Result<RatMatrix> {
        let mut rows = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let image = m.vec_mul(self.basis.row(i));
            let c = self.coordinates(&image).ok_or_else(|| {
                Error::InvalidArgument("subspace is not invariant under the operator".into())
            })?;
            rows.push(c);
        }
        Ok(RatMatrix::from_rows(self.dim(), rows))
    }

    /// Image of the subspace under `m` (row convention).
    pub fn image(&self, m: &RatMatrix) -> Result<Subspace> {
        Ok(Subspace::row_space(&self.basis.mul(m)?))
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient_dim, self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_int;

    fn e(n: usize, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); n];
        v[i] = q_int(1);
        v
    }

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q_int(x)).collect()
    }

    #[test]
    fn sum_examples() {
        let a = Subspace::from_rows(3, vec![e(3, 0)]);
        let b = Subspace::from_rows(3, vec![e(3, 1)]);
        assert_eq!(a.sum(&b).unwrap(), Subspace::from_rows(3, vec![e(3, 0), e(3, 1)]));
        assert_eq!(a.sum(&a).unwrap(), a);
        let c = Subspace::from_rows(2, vec![v(&[1, 1])]);
        let d = Subspace::from_rows(2, vec![v(&[0, 1])]);
        assert_eq!(c.sum(&d).unwrap(), Subspace::full(2));
        assert!(a.sum(&Subspace::zero(2)).is_err());
    }

    #[test]
    fn intersect_examples() {
        let a = Subspace::from_rows(3, vec![e(3, 0), e(3, 1)]);
        let b = Subspace::from_rows(3, vec![e(3, 1), e(3, 2)]);
        assert_eq!(a.intersect(&b).unwrap(), Subspace::from_rows(3, vec![e(3, 1)]));
        assert_eq!(a.intersect(&a).unwrap(), a);
        let c = Subspace::from_rows(2, vec![v(&[1, 1])]);
        let d = Subspace::from_rows(2, vec![e(2, 0)]);
        assert!(c.intersect(&d).unwrap().is_zero());
    }

    #[test]
    fn reduce_and_coordinates() {
        let s = Subspace::from_rows(3, vec![v(&[1, 2, 3]), v(&[0, 1, 1])]);
        let w = v(&[2, 5, 7]);
        assert_eq!(s.reduce(&w), v(&[0, 0, 0]));
        assert!(s.coordinates(&v(&[0, 0, 1])).is_none());
    }
}
