//! Property tests for the exponent/norm/Hadamard primitives.

use proptest::prelude::*;
use schur_core::matrix::hadamard;
use schur_core::norms::{holder_extremizer, lp_norm};
use schur_core::{Exponent, Matrix};

fn exponent_value() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(1.0),
        Just(2.0),
        Just(f64::INFINITY),
        (1.0f64..64.0),
    ]
}

fn small_vec() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn conjugation_involutive(v in exponent_value()) {
        let e = Exponent::new(v).unwrap();
        let back = e.conjugate().conjugate();
        match (e, back) {
            (Exponent::Infinity, b) => prop_assert_eq!(b, Exponent::Infinity),
            (Exponent::Finite(x), Exponent::Finite(y)) => {
                prop_assert!((x - y).abs() <= 1e-12 * x.max(1.0));
            }
            _ => prop_assert!(false, "endpoint flipped"),
        }
        // 1/e + 1/e' = 1
        prop_assert!((e.recip() + e.conjugate().recip() - 1.0).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn holder_attainment(x in small_vec(), v in exponent_value()) {
        let e = Exponent::new(v).unwrap();
        let n = lp_norm(&x, e);
        prop_assume!(n > 1e-9);
        let d = holder_extremizer(&x, e);
        let pairing: f64 = d.iter().zip(&x).map(|(a, b)| a * b).sum();
        prop_assert!((pairing - n).abs() <= 1e-10 * n.max(1.0));
        prop_assert!(lp_norm(&d, e.conjugate()) <= 1.0 + 1e-12);
    }

    #[test]
    fn norm_monotone_in_exponent(x in small_vec(), a in 1.0f64..16.0, b in 1.0f64..16.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let nq = lp_norm(&x, Exponent::new(lo).unwrap());
        let np = lp_norm(&x, Exponent::new(hi).unwrap());
        prop_assert!(nq >= np - 1e-10 * np.max(1.0));
        prop_assert!(np >= lp_norm(&x, Exponent::INF) - 1e-12);
    }

    #[test]
    fn hadamard_bilinear_commutative(
        data_a in prop::collection::vec(-10.0f64..10.0, 6),
        data_b in prop::collection::vec(-10.0f64..10.0, 6),
        data_c in prop::collection::vec(-10.0f64..10.0, 6),
        s in -5.0f64..5.0,
    ) {
        let a = Matrix::new(2, 3, data_a).unwrap();
        let b = Matrix::new(2, 3, data_b).unwrap();
        let c = Matrix::new(2, 3, data_c).unwrap();
        let ab = hadamard(&a, &b).unwrap();
        let ba = hadamard(&b, &a).unwrap();
        prop_assert_eq!(ab.data(), ba.data());
        // bilinearity: a ∘ (s·b + c) = s·(a∘b) + a∘c
        let sbc = b.scale(s).add(&c, 1.0);
        let left = hadamard(&a, &sbc).unwrap();
        let right = ab.scale(s).add(&hadamard(&a, &c).unwrap(), 1.0);
        for (l, r) in left.data().iter().zip(right.data()) {
            prop_assert!((l - r).abs() <= 1e-10);
        }
    }
}
