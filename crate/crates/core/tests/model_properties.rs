use proptest::prelude::*;

use stratcat::corpus;
use stratcat::formula::{Formula, Quantifier, Term};
use stratcat::model::{build_vn, eval_closed, singleton_image_check, FiniteStructure};
use stratcat::transform::relativize;

fn dual(f: &Formula) -> Formula {
    // ¬Qx.φ  ↦  Q'x.¬φ at the outermost quantifier
    match f {
        Formula::Quant(q, v, body) => {
            let q = match q {
                Quantifier::Forall => Quantifier::Exists,
                Quantifier::Exists => Quantifier::Forall,
            };
            Formula::Quant(q, v.clone(), Box::new(Formula::not((**body).clone())))
        }
        other => Formula::not(other.clone()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quantifier_duality(seed in any::<u64>(), n in 1usize..=4) {
        let m = build_vn(n).unwrap();
        let f = corpus::random_closed(&mut corpus::rng(seed), 3, 3, 6);
        prop_assert_eq!(eval_closed(&Formula::not(f.clone()), &m).unwrap(), eval_closed(&dual(&f), &m).unwrap());
    }

    #[test]
    fn relativizing_to_transitive_sets(seed in any::<u64>(), s in 0usize..16) {
        let mut m = build_vn(4).unwrap();
        let f = corpus::random_closed(&mut corpus::rng(seed), 3, 3, 6);
        m.set_constant("S", s);
        let rel = relativize(&f, &Term::constant("S")).unwrap();
        let members: Vec<usize> = m.members(s).collect();
        // relativization equals restriction for every s, transitive or not,
        // since the formula is closed and mentions no constants
        prop_assert_eq!(eval_closed(&rel, &m).unwrap(), eval_closed(&f, &m.restrict(&members)).unwrap());
    }

    #[test]
    fn relativizing_to_a_level_evaluates_in_that_level(seed in any::<u64>()) {
        let mut m = build_vn(4).unwrap();
        let f = corpus::random_closed(&mut corpus::rng(seed), 3, 3, 6);
        let small = build_vn(3).unwrap();
        // V_3 is the element 15 of V_4
        m.set_constant("S", 15);
        let rel = relativize(&f, &Term::constant("S")).unwrap();
        prop_assert_eq!(eval_closed(&rel, &m).unwrap(), eval_closed(&f, &small).unwrap());
    }

    #[test]
    fn json_round_trip(n in 0usize..=4, mask in any::<u16>()) {
        let m = build_vn(n).unwrap();
        let keep: Vec<usize> = (0..m.len()).filter(|&e| mask >> e & 1 == 1).collect();
        let sub = m.restrict(&keep);
        let back = FiniteStructure::from_json(&sub.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), sub.to_json());
    }
}

#[test]
fn singleton_image_is_exponentially_smaller() {
    let m = build_vn(4).unwrap();
    for a in 0..m.len() {
        let (k, p) = singleton_image_check(&m, a).unwrap();
        assert_eq!(k, m.members(a).count());
        assert_eq!(p, 1 << k);
    }
}
