mod common;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewtower::{
    canonicalize, parse_element, root_of_unity_order, solve_linear_system, Field, Matrix, OreTower, Scalar, SkewPoly,
};

fn fields() -> Vec<Field> {
    vec![
        Field::Rational,
        Field::cyclotomic(3).unwrap(),
        Field::cyclotomic(5).unwrap(),
        Field::cyclotomic(12).unwrap(),
        Field::prime(7).unwrap(),
        Field::function(Field::Rational, "t").unwrap(),
        Field::function(Field::prime(5).unwrap(), "s").unwrap(),
    ]
}

fn towers() -> &'static [(String, OreTower)] {
    static CELL: OnceLock<Vec<(String, OreTower)>> = OnceLock::new();
    CELL.get_or_init(common::valid_fixtures)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero(f: &Field, r: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = f.sample(r);
        if !s.is_zero() {
            return s;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(k in 0usize..7, seed in any::<u64>()) {
        let f = &fields()[k];
        let mut r = rng(seed);
        let (a, b, c) = (f.sample(&mut r), f.sample(&mut r), f.sample(&mut r));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &a), &f.zero());
        prop_assert_eq!(&(&a * &f.one()), &a);
        let d = nonzero(f, &mut r);
        prop_assert_eq!(&d * &d.inv().unwrap(), f.one());
        prop_assert_eq!(&(&(&a / &d) * &d), &a);
        prop_assert_eq!(&canonicalize(&a), &a);
        prop_assert!(f.zero().inv().is_err());
    }

    #[test]
    fn powers_of_zeta_have_exact_order(n in 3u32..25, k in 0u32..50) {
        let f = Field::cyclotomic(n).unwrap();
        let s = f.generator().unwrap().pow(i64::from(k)).unwrap();
        let expected = u64::from(n / num_integer::gcd(n, k));
        let got = root_of_unity_order(&s).unwrap();
        prop_assert_eq!(got, Some(expected));
        prop_assert!(s.pow_u64(expected).is_one());
        for d in 1..expected {
            if expected % d == 0 {
                prop_assert!(!s.pow_u64(d).is_one());
            }
        }
        let neg = -&s;
        let ord = root_of_unity_order(&neg).unwrap().unwrap();
        prop_assert!(neg.pow_u64(ord).is_one());
    }

    #[test]
    fn non_roots_of_unity(num in 2i64..40, den in 1i64..40) {
        prop_assume!(num != den);
        let s = Scalar::ratio(num, den).unwrap();
        prop_assert_eq!(root_of_unity_order(&s).unwrap(), None);
        let t = Field::function(Field::Rational, "t").unwrap().generator().unwrap();
        prop_assert_eq!(root_of_unity_order(&t).unwrap(), None);
    }

    #[test]
    fn solver_recovers_consistent_systems(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
        let f = Field::Rational;
        let mut r = rng(seed);
        let a = Matrix::from_fn(rows, cols, |_, _| f.sample(&mut r));
        let x: Vec<Scalar> = (0..cols).map(|_| f.sample(&mut r)).collect();
        let b = a.mul(&Matrix::column(x)).vec();
        let y = solve_linear_system(&a, &b).expect("consistent");
        prop_assert_eq!(a.mul(&Matrix::column(y)).vec(), b);
    }

    #[test]
    fn solver_rejects_contradictions(cols in 1usize..5, seed in any::<u64>()) {
        let f = Field::Rational;
        let mut r = rng(seed);
        let row: Vec<Scalar> = (0..cols).map(|_| f.sample(&mut r)).collect();
        let a = Matrix::from_rows(vec![row.clone(), row]).unwrap();
        let b = vec![f.one(), f.zero()];
        prop_assert!(solve_linear_system(&a, &b).is_none());
    }

    #[test]
    fn homogeneous_systems_get_nonzero_solutions(cols in 2usize..5, seed in any::<u64>()) {
        let f = Field::Rational;
        let mut r = rng(seed);
        let a = Matrix::from_fn(cols - 1, cols, |_, _| f.sample(&mut r));
        let y = solve_linear_system(&a, &vec![f.zero(); cols - 1]).unwrap();
        prop_assert!(y.iter().any(|s| !s.is_zero()));
        prop_assert!(a.mul(&Matrix::column(y)).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative_and_distributive(seed in any::<u64>()) {
        for (name, t) in towers() {
            let mut r = rng(seed);
            let n = t.height();
            let a = t.random_element(&mut r, n, 2, 3);
            let b = t.random_element(&mut r, n, 2, 3);
            let c = t.random_element(&mut r, n, 2, 3);
            let ab = t.mul(&a, &b).unwrap();
            prop_assert_eq!(t.mul(&ab, &c).unwrap(), t.mul(&a, &t.mul(&b, &c).unwrap()).unwrap(), "{}", name);
            let sum = t.mul(&a, &b.add(&c)).unwrap();
            prop_assert_eq!(sum, ab.add(&t.mul(&a, &c).unwrap()), "{}", name);
            prop_assert_eq!(t.mul(&t.one(), &a).unwrap(), a.clone());
        }
    }

    #[test]
    fn twisted_leibniz_and_inverse_twist(seed in any::<u64>()) {
        for (name, t) in towers() {
            let mut r = rng(seed);
            for i in 0..t.height() {
                let a = t.random_element(&mut r, i, 2, 3);
                let b = t.random_element(&mut r, i, 2, 3);
                let ab = t.mul(&a, &b).unwrap();
                let lhs = t.apply_delta(i, &ab).unwrap();
                let rhs = t
                    .mul(&t.apply_sigma(i, &a).unwrap(), &t.apply_delta(i, &b).unwrap())
                    .unwrap()
                    .add(&t.mul(&t.apply_delta(i, &a).unwrap(), &b).unwrap());
                prop_assert_eq!(lhs, rhs, "{} level {}", name, i + 1);
                let sa = t.apply_sigma(i, &a).unwrap();
                prop_assert_eq!(t.apply_sigma(i, &b).map(|sb| t.mul(&sa, &sb).unwrap()).unwrap(),
                    t.apply_sigma(i, &ab).unwrap(), "{} sigma multiplicative", name);
                let inv = t.sigma_inverse(i).unwrap();
                let back = t.apply_ring_map(&inv, &sa).unwrap();
                prop_assert_eq!(back, a.clone(), "{} sigma^-1 sigma", name);
                let forward = t.apply_sigma(i, &t.apply_ring_map(&inv, &a).unwrap()).unwrap();
                prop_assert_eq!(forward, a, "{} sigma sigma^-1", name);
            }
        }
    }

    #[test]
    fn rendering_round_trips(seed in any::<u64>()) {
        for (name, t) in towers() {
            let mut r = rng(seed);
            let p = t.random_element(&mut r, t.height(), 3, 4);
            let text = t.render(&p);
            prop_assert_eq!(parse_element(t, &text).unwrap(), p, "{}: {}", name, text);
        }
    }

    #[test]
    fn canonical_forms_are_unique(num in -50i64..50, den in 1i64..50, k in 1i64..6) {
        let a = Scalar::ratio(num * k, den * k).unwrap();
        let b = Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)));
        prop_assert_eq!(a.to_string(), b.to_string());
    }
}

#[test]
fn zero_has_no_order() {
    assert!(root_of_unity_order(&Scalar::integer(0)).is_err());
}

#[test]
fn polynomial_zero_is_absorbing() {
    for (_, t) in towers() {
        let x = t.var(t.height() - 1);
        assert!(t.mul(&x, &SkewPoly::zero()).unwrap().is_zero());
    }
}
