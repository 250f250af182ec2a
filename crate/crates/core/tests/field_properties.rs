use std::collections::HashSet;

use mdsvar::rng::seeded;
use mdsvar::subsets::permutations;
use mdsvar::{FieldMatrix, PrimeField};
use proptest::prelude::*;

const PRIMES: [u64; 6] = [2, 3, 5, 7, 101, 10007];

fn field() -> impl Strategy<Value = PrimeField> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|q| PrimeField::new(q).unwrap())
}

fn matrix(max: usize) -> impl Strategy<Value = FieldMatrix> {
    (field(), 1..=max, 1..=max, any::<u64>())
        .prop_map(|(f, r, c, seed)| FieldMatrix::random(&mut seeded(seed), r, c, f))
}

/// A random matrix with some rows replaced by combinations of others.
fn degenerate(max: usize) -> impl Strategy<Value = FieldMatrix> {
    (matrix(max), any::<u64>()).prop_map(|(m, seed)| {
        let inner = m.rows() / 2;
        let mix = FieldMatrix::random(&mut seeded(seed), m.rows(), inner, m.field());
        mix.mat_mul(&m.select_rows(&(0..inner).collect::<Vec<_>>())).unwrap()
    })
}

/// `log_q |{A x}|` by enumerating every `x`.
fn image_rank(a: &FieldMatrix) -> usize {
    let q = a.field().modulus();
    let n = a.cols();
    let mut x = vec![0u64; n];
    let mut seen = HashSet::new();
    loop {
        seen.insert(a.mul_vec(&x).unwrap());
        let mut j = 0;
        while j < n && x[j] + 1 == q {
            x[j] = 0;
            j += 1;
        }
        if j == n {
            break;
        }
        x[j] += 1;
    }
    let mut rank = 0;
    let mut size = 1usize;
    while size < seen.len() {
        size *= q as usize;
        rank += 1;
    }
    assert_eq!(size, seen.len(), "image size is a power of q");
    rank
}

/// Leibniz expansion.
fn leibniz(a: &FieldMatrix) -> u64 {
    let f = a.field();
    let n = a.rows();
    let idx: Vec<usize> = (0..n).collect();
    let mut total = 0;
    for p in permutations(&idx) {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let term = (0..n).fold(1, |acc, i| f.mul(acc, a.get(i, p[i])));
        total = if inversions % 2 == 0 {
            f.add(total, term)
        } else {
            f.sub(total, term)
        };
    }
    total
}

proptest! {
    #[test]
    fn field_axioms(f in field(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (f.reduce(a), f.reduce(b), f.reduce(c));
        let q = f.modulus() as u128;
        prop_assert_eq!(f.add(a, b) as u128, (a as u128 + b as u128) % q);
        prop_assert_eq!(f.mul(a, b) as u128, (a as u128 * b as u128) % q);
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, f.modulus() - 1), 1);
        } else {
            prop_assert!(f.inv(a).is_err());
        }
    }

    #[test]
    fn rank_matches_image_size(m in prop::sample::select(vec![2u64, 3, 5]), r in 1usize..5, c in 1usize..6, seed in any::<u64>()) {
        let f = PrimeField::new(m).unwrap();
        let a = FieldMatrix::random(&mut seeded(seed), r, c, f);
        prop_assert_eq!(a.rank(), image_rank(&a));
    }

    #[test]
    fn rank_bounds(a in degenerate(7), b in matrix(7)) {
        let r = a.rank();
        prop_assert!(r <= a.rows().min(a.cols()));
        prop_assert_eq!(r, a.transpose().rank());
        prop_assert!(r <= a.rows() / 2);
        if b.field() == a.field() && b.rows() == a.cols() {
            let ab = a.mat_mul(&b).unwrap();
            prop_assert!(ab.rank() <= r.min(b.rank()));
        }
    }

    #[test]
    fn rref_is_reduced(a in degenerate(7)) {
        let (r, pivots) = a.rref();
        prop_assert_eq!(pivots.len(), a.rank());
        prop_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        for (i, &p) in pivots.iter().enumerate() {
            for k in 0..r.rows() {
                prop_assert_eq!(r.get(k, p), u64::from(k == i));
            }
        }
        for k in pivots.len()..r.rows() {
            prop_assert!(r.row(k).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn null_space_is_kernel(a in degenerate(7)) {
        let basis = a.null_space_basis();
        prop_assert_eq!(basis.cols(), a.cols() - a.rank());
        prop_assert!(a.mat_mul(&basis).unwrap().is_zero());
        prop_assert_eq!(basis.rank(), basis.cols());
    }

    #[test]
    fn determinant_matches_leibniz(f in field(), n in 1usize..5, seed in any::<u64>()) {
        let a = FieldMatrix::random(&mut seeded(seed), n, n, f);
        let det = a.determinant().unwrap().value();
        prop_assert_eq!(det, leibniz(&a));
        prop_assert_eq!(det != 0, a.rank() == n);
    }

    #[test]
    fn inverse_and_solve(f in field(), n in 1usize..7, k in 1usize..4, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = FieldMatrix::random(&mut rng, n, n, f);
        let b = FieldMatrix::random(&mut rng, n, k, f);
        match a.inverse() {
            Ok(inv) => {
                prop_assert_eq!(a.mat_mul(&inv).unwrap(), FieldMatrix::identity(f, n));
                let x = a.solve(&b).unwrap();
                prop_assert_eq!(a.mat_mul(&x).unwrap(), b);
            }
            Err(_) => prop_assert!(a.rank() < n),
        }
    }

    #[test]
    fn stacking_is_monotone(a in matrix(6), seed in any::<u64>(), extra in 1usize..4) {
        let b = FieldMatrix::random(&mut seeded(seed), extra, a.cols(), a.field());
        let s = FieldMatrix::vstack(a.field(), a.cols(), &[&a, &b]).unwrap();
        prop_assert!(s.rank() >= a.rank().max(b.rank()));
        prop_assert!(s.rank() <= a.rank() + b.rank());
        prop_assert_eq!(s.transpose(), FieldMatrix::hstack(a.field(), a.cols(), &[&a.transpose(), &b.transpose()]).unwrap());
    }

    #[test]
    fn mat_mul_is_associative_and_distributive(f in field(), n in 1usize..5, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = FieldMatrix::random(&mut rng, n, n + 1, f);
        let b = FieldMatrix::random(&mut rng, n + 1, n, f);
        let c = FieldMatrix::random(&mut rng, n, 2, f);
        let d = FieldMatrix::random(&mut rng, n + 1, n, f);
        prop_assert_eq!(a.mat_mul(&b).unwrap().mat_mul(&c).unwrap(), a.mat_mul(&b.mat_mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mat_mul(&b.add(&d).unwrap()).unwrap(), a.mat_mul(&b).unwrap().add(&a.mat_mul(&d).unwrap()).unwrap());
    }
}

#[test]
fn mixed_fields_are_rejected() {
    let a = FieldMatrix::identity(PrimeField::new(5).unwrap(), 2);
    let b = FieldMatrix::identity(PrimeField::new(7).unwrap(), 2);
    assert!(a.mat_mul(&b).is_err());
    assert!(a.add(&b).is_err());
    assert!(PrimeField::new(1).is_err());
    assert!(PrimeField::new(9).is_err());
    assert!(PrimeField::new(1 << 31).is_err());
}
