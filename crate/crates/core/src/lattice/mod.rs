//! Exact integer linear algebra: Smith and Hermite forms, abelian
//! invariants, congruence systems and sparse lattice reduction.

mod echelon;
mod matrix;
mod normal_form;
mod sparse;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use echelon::{RowEchelon, SparseVec};
pub use matrix::IntMatrix;
pub use normal_form::{hermite_normal_form, lattice_basis, smith_normal_form, HermiteForm, SmithForm};
pub use sparse::{sparse_elementary_divisors, SparseDivisors};

use crate::error::{Error, Result};

/// Invariants of the abelian group `Z^n / rowspace(relations)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    /// Non-unit invariant factors, each dividing the next.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn exponent(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.last().cloned().unwrap_or_else(BigInt::one))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Abelian invariants of the group with `relations.cols()` generators and
/// one relation per row.
pub fn abelian_invariants(relations: &IntMatrix) -> AbelianInvariants {
    let snf = smith_normal_form(relations);
    let diag = snf.diagonal();
    let torsion: Vec<BigInt> = diag[..snf.rank].iter().filter(|d| !d.is_one()).cloned().collect();
    AbelianInvariants {
        torsion,
        free_rank: relations.cols() - snf.rank,
    }
}

/// General solution of a linear congruence system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    /// Basis (in Hermite form) of the integer solutions of the homogeneous
    /// system.
    pub homogeneous: Vec<Vec<BigInt>>,
}

/// Solves `a x ≡ b` where row `i` is read modulo `moduli[i]` (zero means an
/// equation over the integers). Returns `None` when there is no integer
/// solution.
pub fn solve_integer_system(a: &IntMatrix, b: &[BigInt], moduli: &[BigInt]) -> Result<Option<IntegerSolution>> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m || moduli.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{m} equations but {} right-hand sides and {} moduli",
            b.len(),
            moduli.len()
        )));
    }
    let finite: Vec<usize> = (0..m).filter(|&i| !moduli[i].is_zero()).collect();
    let width = n + finite.len();
    let mut ext = IntMatrix::zeros(m, width);
    for i in 0..m {
        for j in 0..n {
            ext.set(i, j, a.get(i, j).clone());
        }
    }
    for (k, &i) in finite.iter().enumerate() {
        ext.set(i, n + k, moduli[i].clone());
    }
    let snf = smith_normal_form(&ext);
    let c = snf.p.mul_vec(b);
    let mut w = vec![BigInt::zero(); width];
    for k in 0..m {
        if k < snf.rank {
            let (quo, rem) = c[k].div_rem(snf.d.get(k, k));
            if !rem.is_zero() {
                return Ok(None);
            }
            w[k] = quo;
        } else if !c[k].is_zero() {
            return Ok(None);
        }
    }
    let z = snf.q.mul_vec(&w);
    let particular = z[..n].to_vec();
    let gens: Vec<Vec<BigInt>> = (snf.rank..width)
        .map(|k| (0..n).map(|i| snf.q.get(i, k).clone()).collect::<Vec<_>>())
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let homogeneous = lattice_basis(n, &gens);
    Ok(Some(IntegerSolution { particular, homogeneous }))
}

/// Extended gcd with a nonnegative gcd: returns `(g, s, t)` with
/// `s*a + t*b == g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd < BigInt::zero() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn snf_of_small_matrix() {
        let a = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), big(&[2, 6, 12]));
        assert_eq!(s.p.mul(&a).mul(&s.q), s.d);
        assert!(s.p.is_unimodular() && s.q.is_unimodular());
        assert_eq!(s.q.mul(&s.q_inv), IntMatrix::identity(3));
    }

    #[test]
    fn invariants_of_quotient() {
        // Z^2 / <(3,0),(0,9)>
        let inv = abelian_invariants(&IntMatrix::from_i64(&[&[3, 0], &[0, 9]]));
        assert_eq!(inv.torsion, big(&[3, 9]));
        assert_eq!(inv.order(), Some(27.into()));
        let inv = abelian_invariants(&IntMatrix::from_i64(&[&[2, 3]]));
        assert!(inv.torsion.is_empty());
        assert_eq!(inv.free_rank, 1);
    }

    #[test]
    fn hnf_left_kernel() {
        let a = IntMatrix::from_i64(&[&[1, 2], &[2, 4], &[3, 7]]);
        let h = hermite_normal_form(&a);
        assert_eq!(h.rank, 2);
        assert_eq!(h.u.mul(&a), h.h);
        for k in h.left_kernel() {
            assert!(a.vec_mul(&k).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn congruence_with_modulus() {
        let a = IntMatrix::from_i64(&[&[3]]);
        let sol = solve_integer_system(&a, &big(&[0]), &big(&[9])).unwrap().unwrap();
        assert_eq!(sol.homogeneous, vec![big(&[3])]);
        let none = solve_integer_system(&IntMatrix::from_i64(&[&[2]]), &big(&[1]), &big(&[4])).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn underdetermined_over_integers() {
        let a = IntMatrix::from_i64(&[&[1, 1]]);
        let sol = solve_integer_system(&a, &big(&[1]), &big(&[0])).unwrap().unwrap();
        assert_eq!(&sol.particular[0] + &sol.particular[1], BigInt::one());
        assert_eq!(sol.homogeneous.len(), 1);
        let h = &sol.homogeneous[0];
        assert_eq!(&h[0] + &h[1], BigInt::zero());
        assert!(!h[0].is_zero());
    }

    #[test]
    fn dimension_mismatch() {
        let a = IntMatrix::from_i64(&[&[1, 1]]);
        assert!(matches!(
            solve_integer_system(&a, &big(&[1, 2]), &big(&[0])),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
