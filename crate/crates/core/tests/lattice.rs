use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use pgx_core::lattice::{
    abelian_invariants, hermite_normal_form, smith_normal_form, solve_integer_system, sparse_elementary_divisors,
    IntMatrix, RowEchelon,
};

fn matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    IntMatrix::from_rows(cols, rows)
}

fn dense_matrix(max: usize, entry: i64) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        (Just(c), prop::collection::vec(prop::collection::vec(-entry..=entry, c), r))
    })
}

/// Nonzero, non-unit invariant factors with their count of unit ones.
fn divisors(a: &IntMatrix) -> (usize, Vec<BigInt>) {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    (snf.rank, diag[..snf.rank].iter().filter(|d| !d.is_one()).cloned().collect())
}

/// gcd of all `k x k` minors, by cofactor expansion.
fn determinantal_divisor(a: &IntMatrix, k: usize) -> BigInt {
    fn det(m: &[Vec<BigInt>]) -> BigInt {
        if m.is_empty() {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        (k - 1..n)
            .flat_map(|last| {
                subsets(last, k - 1).into_iter().map(move |mut s| {
                    s.push(last);
                    s
                })
            })
            .collect()
    }
    let mut g = BigInt::zero();
    for rs in subsets(a.rows(), k) {
        for cs in subsets(a.cols(), k) {
            let m: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| a.get(i, j).clone()).collect()).collect();
            g = g.gcd(&det(&m));
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_form_certifies_itself((cols, rows) in dense_matrix(20, 100)) {
        let a = matrix(&rows, cols);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.p.mul(&a).mul(&snf.q), snf.d.clone());
        prop_assert!(snf.p.determinant().abs().is_one());
        prop_assert!(snf.q.determinant().abs().is_one());
        prop_assert_eq!(snf.q.mul(&snf.q_inv), IntMatrix::identity(cols));
        prop_assert!(snf.d.is_diagonal());
        let diag = snf.diagonal();
        for i in 0..diag.len() {
            prop_assert!(!diag[i].is_negative());
            prop_assert_eq!(diag[i].is_zero(), i >= snf.rank);
            if i + 1 < snf.rank {
                prop_assert!(diag[i + 1].is_multiple_of(&diag[i]));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn invariant_factors_match_determinantal_divisors((cols, rows) in dense_matrix(4, 12)) {
        let a = matrix(&rows, cols);
        let snf = smith_normal_form(&a);
        let diag = snf.diagonal();
        let mut prefix = BigInt::one();
        for k in 1..=diag.len() {
            prefix *= &diag[k - 1];
            prop_assert_eq!(&prefix, &determinantal_divisor(&a, k), "k = {}", k);
        }
    }

    #[test]
    fn divisors_survive_unimodular_changes(
        (cols, rows) in dense_matrix(8, 30),
        ops in prop::collection::vec((0usize..8, 0usize..8, -3i64..=3, any::<bool>()), 0..25),
    ) {
        let a = matrix(&rows, cols);
        let mut b = a.clone();
        for (i, j, k, on_rows) in ops {
            if on_rows {
                let (i, j) = (i % b.rows(), j % b.rows());
                if i == j { b.swap_rows(i, (i + 1) % b.rows()); } else { b.add_row_multiple(i, j, &BigInt::from(k)); }
            } else {
                let (i, j) = (i % b.cols(), j % b.cols());
                if i == j { b.negate_col(i); } else { b.add_col_multiple(i, j, &BigInt::from(k)); }
            }
        }
        prop_assert_eq!(divisors(&a), divisors(&b));
        prop_assert_eq!(divisors(&a), divisors(&a.transpose()));
        let mut doubled = rows.clone();
        doubled.extend(rows.iter().cloned());
        doubled.push(vec![0; cols]);
        prop_assert_eq!(divisors(&a), divisors(&matrix(&doubled, cols)));
    }

    #[test]
    fn sparse_divisors_match_dense(
        cols in 1usize..10,
        rows in prop::collection::vec(prop::collection::vec((0usize..10, -9i64..=9), 0..4), 0..250),
    ) {
        let sparse: Vec<Vec<(usize, i64)>> = rows
            .iter()
            .map(|r| r.iter().map(|&(c, v)| (c % cols, v)).collect())
            .collect();
        let mut dense = vec![vec![0i64; cols]; sparse.len()];
        for (i, r) in sparse.iter().enumerate() {
            for &(c, v) in r {
                dense[i][c] += v;
            }
        }
        let s = sparse_elementary_divisors(cols, &sparse);
        let (rank, nontrivial) = if dense.is_empty() { (0, Vec::new()) } else { divisors(&matrix(&dense, cols)) };
        prop_assert_eq!(s.rank, rank);
        prop_assert_eq!(s.nontrivial, nontrivial);
    }

    #[test]
    fn hermite_form_and_echelon_span_the_same_lattice(
        (cols, rows) in dense_matrix(7, 20),
        probe in prop::collection::vec(-40i64..=40, 7),
    ) {
        let a = matrix(&rows, cols);
        let h = hermite_normal_form(&a);
        prop_assert_eq!(h.u.mul(&a), h.h.clone());
        prop_assert!(h.u.determinant().abs().is_one());
        let mut ech = RowEchelon::new(cols);
        for r in &rows {
            let v: Vec<(usize, BigInt)> =
                r.iter().enumerate().filter(|(_, x)| **x != 0).map(|(c, x)| (c, BigInt::from(*x))).collect();
            ech.insert(v);
        }
        prop_assert_eq!(ech.rank(), h.rank);
        // a probe vector lies in the row lattice iff it reduces to zero in
        // both representations
        let target: Vec<BigInt> = probe[..cols].iter().map(|&x| BigInt::from(x)).collect();
        let sparse_target: Vec<(usize, BigInt)> =
            target.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, x.clone())).collect();
        let in_lattice = solve_integer_system(&a.transpose(), &target, &vec![BigInt::zero(); cols])
            .unwrap()
            .is_some();
        prop_assert_eq!(ech.contains(&sparse_target), in_lattice);
        for r in &rows {
            let v: Vec<(usize, BigInt)> =
                r.iter().enumerate().filter(|(_, x)| **x != 0).map(|(c, x)| (c, BigInt::from(*x))).collect();
            prop_assert!(ech.contains(&v));
        }
    }
}

#[test]
fn abelian_invariants_of_known_groups() {
    // Z^3 / <(2,0,0), (0,4,0)> = C2 x C4 x Z
    let inv = abelian_invariants(&matrix(&[vec![2, 0, 0], vec![0, 4, 0]], 3));
    assert_eq!(inv.torsion, vec![BigInt::from(2), BigInt::from(4)]);
    assert_eq!(inv.free_rank, 1);
    // C6 x C10 = C2 x C30
    let inv = abelian_invariants(&matrix(&[vec![6, 0], vec![0, 10]], 2));
    assert_eq!(inv.torsion, vec![BigInt::from(2), BigInt::from(30)]);
    assert!(inv.is_finite());
}
