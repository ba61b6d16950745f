use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modular::rref_multimodular;
use crate::error::{Error, Result};
use crate::rational::{primitive_integer_row, Q};

/// Shapes from which `rref` first tries the multimodular route.
const MULTIMODULAR_MIN_ROWS: usize = 8;
const MULTIMODULAR_MIN_COLS: usize = 64;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn diag(entries: &[Q]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Builds from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Q>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        RatMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::AmbientMismatch(self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Q::zero(); self.cols];
        for (l, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(l, j);
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &RatMatrix, f: impl Fn(&Q, &Q) -> Q) -> Result<RatMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::AmbientMismatch(self.rows * self.cols, other.rows * other.cols));
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &Q) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> RatMatrix {
        let rows = (0..self.rows)
            .map(|i| cols.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        Self::from_rows(cols.len(), rows)
    }

    pub fn select_rows(&self, rows: &[usize]) -> RatMatrix {
        Self::from_rows(self.cols, rows.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    /// First `n` columns.
    pub fn truncate_columns(&self, n: usize) -> RatMatrix {
        let idx: Vec<usize> = (0..n.min(self.cols)).collect();
        self.select_columns(&idx)
    }

    pub fn stack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.cols {
            return Err(Error::AmbientMismatch(self.cols, other.cols));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Pivot columns when the matrix is already in reduced row-echelon form
    /// without zero rows.
    fn rref_pivots(&self) -> Option<Vec<usize>> {
        let mut pivots = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let c = self.row(i).iter().position(|x| !x.is_zero())?;
            if pivots.last().is_some_and(|&p| p >= c) || !self.get(i, c).is_one() {
                return None;
            }
            pivots.push(c);
        }
        for (i, &c) in pivots.iter().enumerate() {
            if (0..self.rows).any(|r| r != i && !self.get(r, c).is_zero()) {
                return None;
            }
        }
        Some(pivots)
    }

    /// Reduced row-echelon form (zero rows dropped) and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        if let Some(pivots) = self.rref_pivots() {
            return (self.clone(), pivots);
        }
        let mut rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| primitive_integer_row(self.row(i)))
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        if rows.len() >= MULTIMODULAR_MIN_ROWS && self.cols >= MULTIMODULAR_MIN_COLS {
            if let Some((out, pivots)) = rref_multimodular(&rows, self.cols) {
                return (Self::from_rows(self.cols, out), pivots);
            }
        }
        let pivots = integer_gauss_jordan(&mut rows, self.cols);
        let out: Vec<Vec<Q>> = rows
            .into_iter()
            .zip(&pivots)
            .map(|(r, &c)| {
                let p = r[c].clone();
                r.into_iter().map(|x| Q::new(x, p.clone())).collect()
            })
            .collect();
        (Self::from_rows(self.cols, out), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Right null space `{v : M v = 0}`.
    pub fn kernel(&self) -> super::Subspace {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Q::zero(); self.cols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            basis.push(v);
        }
        super::Subspace::from_rows(self.cols, basis)
    }

    /// Left null space `{x : x M = 0}`.
    pub fn left_kernel(&self) -> super::Subspace {
        self.transpose().kernel()
    }

    /// Evaluates a polynomial (ascending coefficients) at a square matrix.
    pub fn eval_poly(&self, coeffs: &[Q]) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("eval_poly needs a square matrix".into()));
        }
        let n = self.rows;
        let mut acc = RatMatrix::zeros(n, n);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self)?;
            if !c.is_zero() {
                for i in 0..n {
                    acc.data[i * n + i] += c;
                }
            }
        }
        Ok(acc)
    }

    pub fn commutes_with(&self, other: &RatMatrix) -> Result<bool> {
        Ok(self.mul(other)? == other.mul(self)?)
    }
}

/// In-place fraction-free Gauss–Jordan on primitive integer rows. Rows end
/// up primitive, in echelon order, with zeros above and below every pivot;
/// rows past the rank are removed.
pub(crate) fn integer_gauss_jordan(rows: &mut Vec<Vec<BigInt>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // smallest nonzero entry keeps the growth down
        let best = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
        let Some(i) = best else { continue };
        rows.swap(r, i);
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (prow, tail) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(tail.iter_mut()) {
            eliminate(other, prow, c);
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn eliminate(row: &mut [BigInt], prow: &[BigInt], c: usize) {
    if row[c].is_zero() {
        return;
    }
    let a = &prow[c];
    let b = row[c].clone();
    let g = a.gcd(&b);
    let ma = a / &g;
    let mb = &b / &g;
    for (x, y) in row.iter_mut().zip(prow) {
        if !ma.is_one() {
            *x *= &ma;
        }
        if !y.is_zero() {
            *x -= &mb * y;
        }
    }
    make_primitive(row);
}

pub(crate) fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if !g.is_zero() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(crate::rational::format_q).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_examples() {
        let (r, p) = RatMatrix::from_i64(&[&[2, 4], &[1, 2]]).rref();
        assert_eq!(r, RatMatrix::from_i64(&[&[1, 2]]));
        assert_eq!(p, vec![0]);

        let (r, p) = RatMatrix::identity(3).rref();
        assert_eq!(r, RatMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);

        let (r, _) = RatMatrix::from_i64(&[&[1, 2], &[3, 4]]).rref();
        assert_eq!(r, RatMatrix::identity(2));
    }

    #[test]
    fn rref_rational_entries() {
        let m = RatMatrix::from_rows(
            3,
            vec![
                vec![crate::rational::q_frac(1, 2), Q::zero(), crate::rational::q_frac(1, 3)],
                vec![crate::rational::q_frac(1, 4), Q::one(), Q::zero()],
            ],
        );
        let (r, p) = m.rref();
        assert_eq!(p, vec![0, 1]);
        assert_eq!(*r.get(0, 2), crate::rational::q_frac(2, 3));
        assert_eq!(*r.get(1, 2), crate::rational::q_frac(-1, 6));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(RatMatrix::zeros(2, 2).kernel().dim(), 2);
        assert_eq!(RatMatrix::identity(3).kernel().dim(), 0);
        let d = RatMatrix::diag(&[Q::zero(), Q::zero(), Q::one(), Q::zero()]);
        let k = d.kernel();
        let expected = super::super::Subspace::from_rows(
            4,
            vec![
                vec![Q::one(), Q::zero(), Q::zero(), Q::zero()],
                vec![Q::zero(), Q::one(), Q::zero(), Q::zero()],
                vec![Q::zero(), Q::zero(), Q::zero(), Q::one()],
            ],
        );
        assert_eq!(k, expected);
    }

    #[test]
    fn poly_eval() {
        // [[0,-1],[1,0]]^2 + 1 = 0
        let j = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        let v = j.eval_poly(&[Q::one(), Q::zero(), Q::one()]).unwrap();
        assert!(v.is_zero());
    }
}
