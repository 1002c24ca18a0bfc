use proptest::prelude::*;

use minimod::classify::{canonical_model, classify, registry, ClassLabel};
use minimod::field::{square_class, FieldMode};
use minimod::multilinear::ExteriorElement;
use minimod::oracle::{fingerprint, scramble};
use minimod::{decide_symplectic, Field, MinimalAlgebra};

fn registry_model(idx: usize, mode: FieldMode) -> MinimalAlgebra {
    let spec = &registry::REGISTRY[idx % registry::REGISTRY.len()];
    let a = spec.family.map(|_| mode.field().from_i64(-1));
    registry::instantiate(spec, mode, a.as_ref()).unwrap()
}

fn mode_strategy() -> impl Strategy<Value = FieldMode> {
    prop_oneof![Just(FieldMode::Q), Just(FieldMode::Fp(5)), Just(FieldMode::Fp(7))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squares_to_zero(idx in 0usize..64, seed in any::<u64>(), mode in mode_strategy()) {
        let (m, _) = scramble(&registry_model(idx, mode), seed).unwrap();
        for k in 1..m.n() {
            let dk = m.d_matrix(k).matrix;
            let dk1 = m.d_matrix(k + 1).matrix;
            prop_assert!(dk1.mul(&dk).is_zero());
        }
    }

    #[test]
    fn invariants_survive_scrambles(idx in 0usize..64, seed in any::<u64>(), mode in mode_strategy()) {
        let m = registry_model(idx, mode);
        let (s, _) = scramble(&m, seed).unwrap();
        prop_assert_eq!(fingerprint(&s).unwrap(), fingerprint(&m).unwrap());
        prop_assert_eq!(s.betti(), m.betti());
    }

    #[test]
    fn labels_survive_scrambles(idx in 0usize..64, seed in any::<u64>(), mode in mode_strategy()) {
        let m = registry_model(idx, mode);
        let (s, _) = scramble(&m, seed).unwrap();
        let c = classify(&s).unwrap();
        prop_assert_eq!(&c.label, &classify(&m).unwrap().label);
        prop_assert_eq!(s.pushforward(&c.isomorphism).unwrap(), c.target);
    }

    #[test]
    fn symplectic_verdict_is_invariant(idx in 0usize..64, seed in any::<u64>()) {
        let m = registry_model(idx, FieldMode::Q);
        prop_assume!(m.n().is_multiple_of(2));
        let (s, _) = scramble(&m, seed).unwrap();
        prop_assert_eq!(
            decide_symplectic(&s).unwrap().is_symplectic(),
            decide_symplectic(&m).unwrap().is_symplectic()
        );
    }

    #[test]
    fn pushforward_composes(idx in 0usize..64, s1 in any::<u64>(), s2 in any::<u64>()) {
        let m = registry_model(idx, FieldMode::Q);
        let (a, g) = scramble(&m, s1).unwrap();
        let (b, h) = scramble(&a, s2).unwrap();
        prop_assert_eq!(m.pushforward(&h.mul(&g)).unwrap(), b);
    }

    #[test]
    fn square_classes_ignore_squares(a in -500i64..500, b in 1i64..200, p in prop_oneof![Just(0u64), Just(3), Just(5), Just(7), Just(11)]) {
        prop_assume!(a != 0);
        let mode = if p == 0 { FieldMode::Q } else { FieldMode::Fp(p) };
        let f = mode.field();
        let x = f.from_i64(a);
        let y = &x * &(&f.from_i64(b) * &f.from_i64(b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        prop_assert_eq!(square_class(&x, mode).unwrap(), square_class(&y, mode).unwrap());
    }

    #[test]
    fn wedge_is_graded_commutative(u in prop::collection::vec(-3i64..4, 5), v in prop::collection::vec(-3i64..4, 5), w in prop::collection::vec(-3i64..4, 5)) {
        let f = Field::Rational;
        let e = |c: &[i64]| ExteriorElement::from_vector(&c.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>());
        let (u, v, w) = (e(&u), e(&v), e(&w));
        prop_assert_eq!(u.wedge(&v).unwrap(), v.wedge(&u).unwrap().neg());
        let uv = u.wedge(&v).unwrap();
        prop_assert_eq!(uv.wedge(&w).unwrap(), w.wedge(&uv).unwrap());
        prop_assert_eq!(uv.wedge(&w).unwrap(), u.wedge(&v.wedge(&w).unwrap()).unwrap());
    }

    #[test]
    fn labels_round_trip(idx in 0usize..64, a in prop_oneof![Just(-1i64), Just(2), Just(3), Just(-6)]) {
        let spec = &registry::REGISTRY[idx % registry::REGISTRY.len()];
        let text = match spec.family {
            None => spec.name.to_string(),
            Some(_) => format!("{}[a={a}]", spec.name),
        };
        if let Ok(label) = ClassLabel::parse(&text, FieldMode::Q) {
            let back = ClassLabel::parse(&label.to_string(), FieldMode::Q).unwrap();
            prop_assert_eq!(&back, &label);
            prop_assert!(canonical_model(&label, FieldMode::Q).is_ok());
        }
    }
}
