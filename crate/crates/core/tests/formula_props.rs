mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::{lin, v};
use presdec::formula::{to_dnf, to_pnf};
use presdec::smtlib::{parse_formula, print_script};
use presdec::{Assignment, Formula};

const NAMES: [&str; 3] = ["x", "y", "z"];

fn name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&NAMES[..])
}

fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        (name(), name(), -4i64..=4, -4i64..=4, -8i64..=8, any::<bool>()).prop_map(|(x, y, a, b, c, le)| {
            let t = lin(&[(x, a), (y, b)]);
            if le { Formula::le(t, c) } else { Formula::ge(t, c) }
        }),
        (name(), 2i64..=6, 0i64..6).prop_map(|(x, k, c)| Formula::cong_un(v(x), k.into(), (c % k).into())),
        (name(), name(), 1i64..6, 2i64..=6, 1i64..6)
            .prop_map(|(x, y, a, k, b)| Formula::cong_bin(a.into(), v(x), k.into(), b.into(), v(y))),
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::and),
            prop::collection::vec(inner, 2..=3).prop_map(Formula::or),
        ]
    })
}

fn point() -> impl Strategy<Value = Assignment> {
    prop::array::uniform3(0u64..=7).prop_map(|[a, b, c]| Assignment::from_pairs([("x", a), ("y", b), ("z", c)]))
}

fn dnf_eval(phi: &Formula, p: &Assignment) -> bool {
    to_dnf(phi).iter().any(|c| c.to_formula().eval(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normal_forms_preserve_truth(phi in formula(), p in point()) {
        let want = phi.eval(&p).unwrap();
        prop_assert_eq!(to_pnf(&phi).eval(&p).unwrap(), want);
        prop_assert_eq!(phi.normalized().eval(&p).unwrap(), want);
        prop_assert_eq!(dnf_eval(&phi, &p), want);
    }

    #[test]
    fn positive_normal_form_has_no_negation(phi in formula()) {
        fn negation_free(f: &Formula) -> bool {
            match f {
                Formula::Not(_) => false,
                Formula::And(cs) | Formula::Or(cs) => cs.iter().all(negation_free),
                _ => true,
            }
        }
        prop_assert!(negation_free(&to_pnf(&phi)));
    }

    #[test]
    fn printed_script_reads_back(phi in formula(), p in point()) {
        let text = print_script(&phi);
        let back = parse_formula(&text).unwrap().formula;
        prop_assert_eq!(back.eval(&p).unwrap(), phi.eval(&p).unwrap(), "{}", text);
    }

    #[test]
    fn substitution_agrees_with_evaluation(phi in formula(), p in point(), c in 0u64..=7) {
        let x = v("x");
        let fixed = phi.substitute(&x, &BigInt::from(c));
        let mut q = p.clone();
        q.insert(x, BigInt::from(c));
        prop_assert_eq!(fixed.eval(&q).unwrap(), phi.eval(&q).unwrap());
    }

    #[test]
    fn xor_is_true_exactly_on_disagreement(a in formula(), b in formula(), p in point()) {
        let x = Formula::xor(a.clone(), b.clone()).eval(&p).unwrap();
        prop_assert_eq!(x, a.eval(&p).unwrap() != b.eval(&p).unwrap());
    }
}
