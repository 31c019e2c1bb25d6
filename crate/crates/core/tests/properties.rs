use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;
use th_core::analyzer::{classify, AnalyzerOptions, Classification};
use th_core::calculus::{critical_exponents, th_index, toeplitz_index, HardyExponent};
use th_core::catalog::half_sign;
use th_core::finite_section::verify_product_identities;
use th_core::laurent::LaurentPoly;
use th_core::matching::{is_matching_function, is_matching_pair, pair_product};
use th_core::{CirclePoint, PCSymbol, Tolerances};

type C = Complex64;

fn hp(p: f64) -> HardyExponent {
    HardyExponent::new(p).unwrap()
}

fn poly() -> impl Strategy<Value = PCSymbol> {
    (-4i64..=0, prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..8))
        .prop_map(|(lo, cs)| LaurentPoly::new(lo, cs.into_iter().map(|(r, i)| C::new(r, i)).collect()).to_symbol())
}

fn symbol() -> impl Strategy<Value = PCSymbol> {
    (
        -2i64..=2,
        prop::option::of((prop::sample::select(vec![0.25, 0.5, -0.25]), 0.0..2.0 * PI)),
        prop::option::of((0.1..3.0f64, 0.3..3.0f64, 0.5..2.0f64, -2.5..2.5f64, 0.5..2.0f64, -2.5..2.5f64)),
    )
        .prop_map(|(n, power, pw)| {
            let mut f = vec![PCSymbol::monomial(n)];
            if let Some((beta, anchor)) = power {
                f.push(PCSymbol::power_arc(C::new(beta, 0.0), CirclePoint::new(anchor)));
            }
            if let Some((t0, dt, r0, a0, r1, a1)) = pw {
                let breaks = vec![CirclePoint::new(t0), CirclePoint::new(t0 + dt)];
                f.push(PCSymbol::piecewise_const(breaks, vec![C::from_polar(r0, a0), C::from_polar(r1, a1)]).unwrap());
            }
            PCSymbol::product(f)
        })
}

fn matching_function() -> impl Strategy<Value = PCSymbol> {
    (-2i64..=2, prop::option::of(prop::sample::select(vec![0.25, 0.5])), any::<bool>()).prop_map(|(n, beta, s)| {
        let mut f = vec![PCSymbol::monomial(n)];
        if let Some(beta) = beta {
            f.push(PCSymbol::power_arc(C::new(beta, 0.0), CirclePoint::ONE));
        }
        if s {
            f.push(half_sign().scale(C::new(0.0, 1.0)));
        }
        PCSymbol::product(f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subordinated_functions_match(a in symbol(), m in matching_function()) {
        let tol = Tolerances::default();
        prop_assert!(is_matching_function(&m, &tol).unwrap());
        let pair = is_matching_pair(&a, &(&a * &m), &tol).unwrap().pair().expect("a m is matched with a");
        prop_assert!(is_matching_function(&pair.c, &tol).unwrap());
        prop_assert!(is_matching_function(&pair.d, &tol).unwrap());
        let inv = pair.inverse();
        let unit = pair_product(&pair, &inv, &tol).unwrap();
        prop_assert!(unit.residual < 1e-9);
    }

    #[test]
    fn index_constant_between_critical_exponents(a in symbol(), u in 0.05..0.95f64, v in 0.05..0.95f64) {
        let tol = Tolerances::default();
        let mut cuts = vec![1.0];
        cuts.extend(critical_exponents(&a).into_iter().filter(|&x| x > 1.0 && x < 6.0));
        cuts.push(6.0);
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi - lo < 1e-3 {
                continue;
            }
            let i1 = toeplitz_index(&a, &hp(lo + u * (hi - lo)), &tol).unwrap();
            let i2 = toeplitz_index(&a, &hp(lo + v * (hi - lo)), &tol).unwrap();
            prop_assert_eq!(i1, i2, "interval ({}, {})", lo, hi);
        }
    }

    #[test]
    fn zero_hankel_part_is_toeplitz(a in symbol(), p in 1.1..5.0f64) {
        let tol = Tolerances::default();
        let p = hp(p);
        if let Some(k) = toeplitz_index(&a, &p, &tol).unwrap().index() {
            prop_assert_eq!(th_index(&a, &PCSymbol::real(0.0), &p, &tol).unwrap(), k);
        }
    }

    #[test]
    fn index_sum_and_sign_rule(a in symbol(), m in matching_function(), p in prop::sample::select(vec![1.4, 1.8, 2.5, 3.5])) {
        let tol = Tolerances::default();
        let pair = is_matching_pair(&a, &(&a * &m), &tol).unwrap().pair().unwrap();
        let p = hp(p);
        let (Some(k2), Some(k1)) = (
            toeplitz_index(&pair.c, &p, &tol).unwrap().index(),
            toeplitz_index(&pair.d, &p, &tol).unwrap().index(),
        ) else {
            return Ok(());
        };
        let plus = th_index(&pair.a, &pair.b, &p, &tol).unwrap();
        let minus = th_index(&pair.a, &(-&pair.b), &p, &tol).unwrap();
        prop_assert_eq!(plus + minus, k1 + k2);
        let opts = AnalyzerOptions { section_n: 64, tolerances: tol };
        let r = classify(&pair, &p, &opts).unwrap();
        for rec in [&r.plus, &r.minus] {
            if k1 >= 0 && k2 >= 0 {
                prop_assert!(matches!(rec.classification, Classification::Invertible | Classification::RightInvertible));
                prop_assert_eq!(rec.kernel_dim, rec.index.map(|i| i.max(0)));
            }
            if k1 <= 0 && k2 <= 0 {
                prop_assert!(matches!(rec.classification, Classification::Invertible | Classification::LeftInvertible));
                prop_assert_eq!(rec.kernel_dim, Some(0));
            }
        }
    }

    #[test]
    fn product_identities_hold(a in poly(), b in poly()) {
        prop_assert!(verify_product_identities(&a, &b, 12).unwrap() < 1e-12);
    }
}
