use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{charpoly, RatMatrix, Subspace};
use crate::error::{Error, Result};
use crate::rational::{q_int, Q};

/// Random combinations tried on a block after every single operator failed to split it.
pub const MAX_DRAWS: usize = 8;

/// Splits `Q^n` into common invariant subspaces of pairwise commuting
/// operators (row-vector convention: `W` is invariant when `W A ⊆ W`).
///
/// A block is split whenever the characteristic polynomial of one of the
/// operators, or of a seeded random integer combination of them, has two
/// distinct irreducible factors. On every returned block each tested
/// characteristic polynomial is a power of a single irreducible.
pub fn invariant_block_decomposition(ops: &[RatMatrix], seed: u64) -> Result<Vec<Subspace>> {
    let n = match ops.first() {
        Some(a) => a.rows(),
        None => return Err(Error::EmptyPrimeList),
    };
    for a in ops {
        if !a.is_square() || a.rows() != n {
            return Err(Error::InvalidArgument(format!(
                "operators must be square of size {n}, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
    }
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            if !a.commutes_with(b)? {
                return Err(Error::NonCommuting);
            }
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut work = vec![Subspace::full(n)];
    let mut done = Vec::new();
    while let Some(block) = work.pop() {
        let local: Vec<RatMatrix> = ops.iter().map(|a| block.restrict(a)).collect::<Result<_>>()?;
        match split_block(&local, &mut rng)? {
            None => done.push(block),
            Some(pieces) => {
                for piece in pieces {
                    work.push(Subspace::row_space(&piece.basis().mul(block.basis())?));
                }
            }
        }
    }
    done.sort_by(|a, b| (a.dim(), a.pivots()).cmp(&(b.dim(), b.pivots())));
    Ok(done)
}

fn split_block(mats: &[RatMatrix], rng: &mut ChaCha8Rng) -> Result<Option<Vec<Subspace>>> {
    if mats[0].rows() <= 1 {
        return Ok(None);
    }
    for a in mats {
        if let Some(p) = split_by(a)? {
            return Ok(Some(p));
        }
    }
    if mats.len() > 1 {
        for _ in 0..MAX_DRAWS {
            let c = random_combination(mats, rng)?;
            if let Some(p) = split_by(&c)? {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}

/// `Σ r_i A_i` with nonzero integer weights in `[-9, 9]`.
pub fn random_combination(mats: &[RatMatrix], rng: &mut ChaCha8Rng) -> Result<RatMatrix> {
    let n = mats[0].rows();
    let mut acc = RatMatrix::zeros(n, n);
    for a in mats {
        let mut r: i64 = rng.gen_range(1..=9);
        if rng.gen_bool(0.5) {
            r = -r;
        }
        acc = acc.add(&a.scale(&q_int(r)))?;
    }
    Ok(acc)
}

/// Generalized eigenspaces of `a` along the distinct irreducible factors of
/// its characteristic polynomial, or `None` if there is only one.
fn split_by(a: &RatMatrix) -> Result<Option<Vec<Subspace>>> {
    let factors = charpoly(a).factor();
    if factors.len() < 2 {
        return Ok(None);
    }
    let mut pieces = Vec::with_capacity(factors.len());
    for (g, e) in factors {
        let coeffs: Vec<Q> = g.pow(e).coeffs().to_vec();
        pieces.push(a.eval_poly(&coeffs)?.left_kernel());
    }
    Ok(Some(pieces))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_splits() {
        let d = RatMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        let blocks = invariant_block_decomposition(&[d], 1).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0], Subspace::coordinate(2, &[0]));
        assert_eq!(blocks[1], Subspace::coordinate(2, &[1]));
    }

    #[test]
    fn identity_and_rotation_stay_whole() {
        for m in [
            RatMatrix::identity(2),
            RatMatrix::from_i64(&[&[0, -1], &[1, 0]]),
        ] {
            let blocks = invariant_block_decomposition(&[m], 1).unwrap();
            assert_eq!(blocks, vec![Subspace::full(2)]);
        }
    }

    #[test]
    fn combination_needed() {
        // A = diag(1,1,2,2) and B = diag(1,2,1,2): neither alone isolates every line
        let a = RatMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 2]]);
        let b = RatMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 2]]);
        let blocks = invariant_block_decomposition(&[a, b], 7).unwrap();
        assert_eq!(blocks.len(), 4);
        assert!(blocks.iter().all(|b| b.dim() == 1));
    }

    #[test]
    fn rejects_non_commuting() {
        let a = RatMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let b = RatMatrix::from_i64(&[&[1, 0], &[1, 1]]);
        assert!(matches!(
            invariant_block_decomposition(&[a, b], 0),
            Err(Error::NonCommuting)
        ));
    }
}
