use std::sync::Arc;

use num_bigint::BigUint;
use proptest::prelude::*;
use superprolong::{ContactStructure, DPElement, FieldSpace, Signature};

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

fn sig(p: u64, height: u32) -> Arc<Signature> {
    Arc::new(Signature::contact_1_7(p, height).unwrap())
}

fn t_power(s: &Arc<Signature>, k: u64) -> DPElement {
    DPElement::parse(s, &format!("t^{k}")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // t^(a) t^(b) = C(a+b, a) t^(a+b), computed with exact integers
    #[test]
    fn divided_power_products(p in prop::sample::select(vec![3u64, 5, 7]), height in 1u32..=2, a in 0u64..60, b in 0u64..60) {
        let s = sig(p, height);
        let cap = p.pow(height);
        prop_assume!(a < cap && b < cap);
        let prod = t_power(&s, a).mul(&t_power(&s, b)).unwrap();
        if a + b >= cap {
            prop_assert!(prod.is_zero());
        } else {
            let c = binomial(a + b, a) % BigUint::from(p);
            let c: u64 = c.try_into().unwrap();
            prop_assert_eq!(prod, t_power(&s, a + b).scale(c as i64));
        }
    }

    #[test]
    fn odd_variables_anticommute(i in 0usize..7, j in 0usize..7) {
        let s = sig(5, 1);
        let x = DPElement::var(&s, 1 + i);
        let y = DPElement::var(&s, 1 + j);
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(xy.add(&y.mul(&x).unwrap()).unwrap(), DPElement::zero(&s));
        if i == j {
            prop_assert!(xy.is_zero());
        }
    }

    #[test]
    fn render_parse_round_trip(seed in any::<u64>()) {
        use rand::SeedableRng;
        let s = sig(3, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = superprolong::checks::random_function(&s, &mut rng, 4);
        prop_assert_eq!(DPElement::parse(&s, &g.render()).unwrap(), g);
    }

    #[test]
    fn contact_bracket_antisymmetry(seed in any::<u64>()) {
        use rand::SeedableRng;
        let s = sig(5, 1);
        let c = ContactStructure::ag2_form(FieldSpace::new(s.clone())).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = superprolong::checks::random_function(&s, &mut rng, 3);
        let g = superprolong::checks::random_function(&s, &mut rng, 3);
        let (x, y) = (c.field_of(&f).unwrap(), c.field_of(&g).unwrap());
        let xy = x.bracket(&y).unwrap();
        let yx = y.bracket(&x).unwrap();
        let sign = if f.parity().unwrap() & g.parity().unwrap() == 1 { 1 } else { 4 };
        prop_assert_eq!(xy, yx.scale(sign));
    }
}
