//! Randomized invariants of the exact arithmetic layer.

use num_traits::{One, Zero};
use proptest::prelude::*;

use kzrat::arith::{
    determinant, format_scalar, mat_inverse, parse_scalar, solve_linear, Field, Matrix, Poly, RatFunc, Scalar,
};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| Scalar::new(p.into(), q.into()))
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(scalar(), 0..=max_len).prop_map(Poly::new)
}

fn nonzero_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    poly(max_len).prop_filter("nonzero", |p| !p.is_zero())
}

fn matrix(n: usize) -> impl Strategy<Value = Matrix<Scalar>> {
    prop::collection::vec(scalar(), n * n).prop_map(move |v| Matrix::from_vec(n, n, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ratfunc_is_canonical(num in poly(4), den in nonzero_poly(3), common in nonzero_poly(2)) {
        let plain = RatFunc::new(num.clone(), den.clone()).unwrap();
        let padded = RatFunc::new(&num * &common, &den * &common).unwrap();
        prop_assert_eq!(&plain, &padded);
        prop_assert!(plain.den().is_monic());
        prop_assert!(plain.num().gcd(plain.den()).is_one());
    }

    #[test]
    fn ratfunc_text_round_trips(num in poly(4), den in nonzero_poly(3)) {
        let f = RatFunc::new(num, den).unwrap();
        prop_assert_eq!(RatFunc::parse(&f.display("d"), "d").unwrap(), f);
    }

    #[test]
    fn ratfunc_field_laws(a in poly(3), b in nonzero_poly(3), c in poly(3), d in nonzero_poly(2)) {
        let x = RatFunc::new(a, b).unwrap();
        let y = RatFunc::new(c, d).unwrap();
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if let Some(inv) = y.try_inv() {
            prop_assert_eq!(&(&x * &y) * &inv, x.clone());
        }
    }

    #[test]
    fn poly_division_identity(a in poly(6), b in nonzero_poly(3)) {
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn taylor_shift_preserves_values(p in poly(5), s in scalar(), x in scalar()) {
        prop_assert_eq!(p.shift(&s).eval(&x), p.eval(&(&x + &s)));
    }

    #[test]
    fn scalar_text_round_trips(s in scalar()) {
        prop_assert_eq!(parse_scalar(&format_scalar(&s)).unwrap(), s);
    }

    #[test]
    fn matrix_product_is_associative(a in matrix(3), b in matrix(3), c in matrix(3)) {
        let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_is_two_sided(a in matrix(3)) {
        let det = determinant(&a).unwrap();
        match mat_inverse(&a) {
            Ok(inv) => {
                prop_assert!(!det.is_zero());
                prop_assert_eq!(a.matmul(&inv).unwrap(), Matrix::identity(3));
                prop_assert_eq!(inv.matmul(&a).unwrap(), Matrix::identity(3));
            }
            Err(_) => prop_assert!(det.is_zero()),
        }
    }

    #[test]
    fn solve_results_carry_valid_certificates(a in matrix(3), b in prop::collection::vec(scalar(), 3)) {
        let b = Matrix::from_vec(3, 1, b).unwrap();
        let r = solve_linear(&a, &b).unwrap();
        prop_assert!(r.verify(&a, &b));
        // rerunning yields the identical result
        prop_assert_eq!(solve_linear(&a, &b).unwrap(), r);
    }

    #[test]
    fn singular_products_are_detected(u in prop::collection::vec(scalar(), 3), v in prop::collection::vec(scalar(), 3)) {
        let outer = Matrix::from_fn(3, 3, |i, j| &u[i] * &v[j]);
        prop_assert!(determinant(&outer).unwrap().is_zero());
        prop_assert!(mat_inverse(&outer).is_err());
    }
}
