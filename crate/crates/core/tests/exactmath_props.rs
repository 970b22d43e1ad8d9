use bass_serre::exactmath::{int, snf, solve_integral, IMatrix, Int, Lattice};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IMatrix> {
    prop::collection::vec(-9i64..=9, rows * cols).prop_map(move |xs| {
        let rows: Vec<Vec<i64>> = xs.chunks(cols).map(|c| c.to_vec()).collect();
        IMatrix::from_rows(&rows)
    })
}

fn any_matrix() -> impl Strategy<Value = IMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))
}

fn nonsingular() -> impl Strategy<Value = IMatrix> {
    (1usize..=4)
        .prop_flat_map(|n| matrix(n, n))
        .prop_filter("singular", |a| !a.det().unwrap().is_zero())
}

fn ints(n: usize) -> impl Strategy<Value = Vec<Int>> {
    prop::collection::vec(-50i64..=50, n).prop_map(|v| v.into_iter().map(int).collect())
}

proptest! {
    #[test]
    fn snf_reconstructs_and_divides(a in any_matrix()) {
        let s = snf(&a);
        prop_assert_eq!(s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), a.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), IMatrix::identity(a.rows()));
        prop_assert_eq!(s.v_inv.mul(&s.v).unwrap(), IMatrix::identity(a.cols()));
        let d = s.diagonal();
        let nonzero: Vec<&Int> = d.iter().take_while(|x| !x.is_zero()).collect();
        prop_assert_eq!(nonzero.len(), a.rank());
        prop_assert!(d[nonzero.len()..].iter().all(Zero::is_zero));
        prop_assert!(nonzero.iter().all(|x| x.is_positive()));
        prop_assert!(nonzero.windows(2).all(|w| (w[1] % w[0]).is_zero()));
    }

    #[test]
    fn snf_of_square_matches_det(a in nonsingular()) {
        let p = snf(&a).diagonal().iter().fold(Int::one(), |acc, x| acc * x);
        prop_assert_eq!(p, a.det().unwrap().abs());
    }

    #[test]
    fn solve_recovers_integral_solutions((a, x) in nonsingular().prop_flat_map(|a| { let n = a.cols(); (Just(a), ints(n)) })) {
        let b = a.mul_vec(&x).unwrap();
        prop_assert_eq!(solve_integral(&a, &b).unwrap(), Some(x));
    }

    #[test]
    fn lattice_decomposition((a, v) in nonsingular().prop_flat_map(|a| { let n = a.rows(); (Just(a), ints(n)) })) {
        let lat = Lattice::new(&a).unwrap();
        let (r, h) = lat.decompose(&v);
        prop_assert!(lat.is_residue(&r));
        let ah = a.mul_vec(&h).unwrap();
        let sum: Vec<Int> = r.iter().zip(&ah).map(|(x, y)| x + y).collect();
        prop_assert_eq!(&sum, &v);
        prop_assert!(lat.contains(&ah));
        prop_assert_eq!(lat.contains(&v), r.iter().all(Zero::is_zero));
        prop_assert_eq!(lat.decompose(&r).0, r);
    }
}
