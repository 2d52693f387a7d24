use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use weightforge::linalg::{image_basis, kernel_basis, solve, Rat, RatMatrix, Subspace};

fn big(r: &Rat) -> BigRational {
    BigRational::new(r.numer(), r.denom())
}

fn rat() -> impl Strategy<Value = Rat> {
    prop_oneof![
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Rat::new(n, d)),
        (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| Rat::new(n, d)),
    ]
}

fn shaped(r: usize, c: usize) -> impl Strategy<Value = RatMatrix> {
    proptest::collection::vec(-3i64..=3, r * c)
        .prop_map(move |v| RatMatrix::from_vec(r, c, v.into_iter().map(Rat::from_int).collect()))
}

fn matrix(max: usize) -> impl Strategy<Value = RatMatrix> {
    (0..=max, 0..=max).prop_flat_map(|(r, c)| shaped(r, c))
}

fn square(max: usize) -> impl Strategy<Value = RatMatrix> {
    (0..=max).prop_flat_map(|n| shaped(n, n))
}

fn same_rows(max: usize) -> impl Strategy<Value = (RatMatrix, RatMatrix)> {
    (0..=max, 0..=max, 0..=max).prop_flat_map(|(r, c, d)| (shaped(r, c), shaped(r, d)))
}

proptest! {
    #[test]
    fn arithmetic_matches_bignum(a in rat(), b in rat()) {
        prop_assert_eq!(big(&(&a + &b)), big(&a) + big(&b));
        prop_assert_eq!(big(&(&a - &b)), big(&a) - big(&b));
        prop_assert_eq!(big(&(&a * &b)), big(&a) * big(&b));
        if !b.is_zero() {
            prop_assert_eq!(big(&(&a / &b)), big(&a) / big(&b));
        }
        prop_assert_eq!(a.partial_cmp(&b), big(&a).partial_cmp(&big(&b)));
    }

    #[test]
    fn parse_round_trips(a in rat()) {
        let s = a.to_string();
        prop_assert_eq!(s.parse::<Rat>().unwrap(), a);
    }

    #[test]
    fn rank_nullity(m in matrix(5)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(k.dim() + m.rank(), m.cols());
        prop_assert!((&m * k.basis()).is_zero());
        prop_assert_eq!(image_basis(&m).dim(), m.rank());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn rref_is_idempotent(m in matrix(5)) {
        let (r, p) = m.rref();
        prop_assert!(p.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(r.rref().0, r);
    }

    #[test]
    fn solve_finds_preimages(m in matrix(4), seed in proptest::collection::vec(-3i64..=3, 4)) {
        let x: Vec<Rat> = seed.iter().take(m.cols()).map(|&v| Rat::from_int(v)).collect();
        prop_assume!(x.len() == m.cols());
        let b = m.mul_vec(&x);
        let y = solve(&m, &b).unwrap().expect("consistent");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn invertible_matrices(m in square(4)) {
        match m.inverse() {
            Some(inv) => prop_assert!((&m * &inv).is_identity()),
            None => prop_assert!(m.rank() < m.rows()),
        }
    }

    #[test]
    fn subspace_lattice((a, b) in same_rows(4)) {
        let (sa, sb) = (Subspace::span(&a), Subspace::span(&b));
        let (sum, meet) = (sa.sum(&sb), sa.intersect(&sb));
        prop_assert_eq!(sum.dim() + meet.dim(), sa.dim() + sb.dim());
        prop_assert!(meet.is_subspace_of(&sa) && meet.is_subspace_of(&sb));
        prop_assert!(sa.is_subspace_of(&sum));
    }
}

#[test]
fn overflow_spills_to_bignum() {
    let a = Rat::from_int(i64::MAX);
    let sq = &a * &a;
    let expect = BigRational::from_integer(BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
    assert_eq!(big(&sq), expect);
    assert_eq!(&(&sq / &a) - &a, Rat::zero());
}
