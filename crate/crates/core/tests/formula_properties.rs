use proptest::prelude::*;
use proptest::sample::select;

use stratcat::formula::{alpha_equivalent, parse, print, Connective, Dialect, Formula, Quantifier, Term, Var};
use stratcat::stratify::{
    brute_force_oracle, check_stratified, check_stratified_with_graph, oracle_complete, ClauseChecker, Options,
    StratifyVerdict,
};
use stratcat::transform::{erase_types, raise_types};

fn name() -> impl Strategy<Value = &'static str> {
    select(vec!["x", "y", "z", "w", "u"])
}

fn atom() -> impl Strategy<Value = Formula> {
    (any::<bool>(), name(), name()).prop_map(|(mem, a, b)| {
        let (l, r) = (Term::var(Var::set(a)), Term::var(Var::set(b)));
        if mem {
            Formula::mem(l, r)
        } else {
            Formula::eq(l, r)
        }
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(5, 32, 2, |inner| {
        let conn = select(vec![Connective::And, Connective::Or, Connective::Implies, Connective::Iff]);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (conn, inner.clone(), inner.clone()).prop_map(|(c, a, b)| Formula::binary(c, a, b)),
            (any::<bool>(), name(), inner).prop_map(|(all, v, body)| {
                let q = if all { Quantifier::Forall } else { Quantifier::Exists };
                Formula::Quant(q, Var::set(v), Box::new(body))
            }),
        ]
    })
}

/// Gives every binder a new name, `b0`, `b1`, ... in preorder.
fn rename_binders(f: &Formula) -> Formula {
    fn go(f: &Formula, scope: &mut Vec<(String, String)>, next: &mut usize) -> Formula {
        let term = |t: &Term, scope: &[(String, String)]| match t {
            Term::Var(v) => match scope.iter().rev().find(|(old, _)| *old == v.name) {
                Some((_, new)) => Term::var(v.renamed(new.clone())),
                None => t.clone(),
            },
            _ => t.clone(),
        };
        match f {
            Formula::Atom(a) => Formula::atom(a.rel, term(&a.left, scope), term(&a.right, scope)),
            Formula::Not(p) => Formula::not(go(p, scope, next)),
            Formula::Binary(c, l, r) => Formula::binary(*c, go(l, scope, next), go(r, scope, next)),
            Formula::Quant(q, v, body) => {
                let new = format!("b{next}");
                *next += 1;
                scope.push((v.name.clone(), new.clone()));
                let body = go(body, scope, next);
                scope.pop();
                Formula::Quant(*q, v.renamed(new), Box::new(body))
            }
        }
    }
    go(f, &mut Vec::new(), &mut 0)
}

fn verdict(f: &Formula) -> StratifyVerdict {
    check_stratified(f, Dialect::Plain, &Options::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn print_parse_round_trip(f in formula()) {
        let text = print(&f);
        prop_assert_eq!(parse(&text, Dialect::Plain).unwrap(), f.clone());
        prop_assert_eq!(print(&parse(&text, Dialect::Plain).unwrap()), text);
    }

    #[test]
    fn verdict_is_invariant_under_bound_renaming(f in formula()) {
        let g = rename_binders(&f);
        prop_assert!(alpha_equivalent(&f, &g).unwrap());
        prop_assert_eq!(verdict(&f).is_stratified(), verdict(&g).is_stratified());
    }

    #[test]
    fn verdict_is_invariant_under_free_renaming(f in formula()) {
        // renaming a free variable to an unused name
        if let Some(v) = f.free_vars().first() {
            let g = f.substitute_var(v, &Term::var(Var::set("fresh"))).unwrap();
            prop_assert_eq!(verdict(&f).is_stratified(), verdict(&g).is_stratified());
        }
    }

    #[test]
    fn solver_matches_oracles(f in formula()) {
        let opts = Options::default();
        let fast = verdict(&f).is_stratified();
        prop_assert_eq!(oracle_complete(&f, Dialect::Plain, &opts).unwrap().stratified, fast);
        let n = ClauseChecker::new(&f, Dialect::Plain, &opts).unwrap().entity_count() as i64;
        if n <= 7 {
            prop_assert_eq!(brute_force_oracle(&f, Dialect::Plain, &opts, (n - 1).max(0)).unwrap().stratified, fast);
        }
    }

    #[test]
    fn witnesses_are_valid(f in formula(), shift in 0i64..5) {
        let opts = Options::default();
        let (graph, v) = check_stratified_with_graph(&f, Dialect::Plain, &opts).unwrap();
        match v {
            StratifyVerdict::Stratified { assignment } => {
                prop_assert!(assignment.satisfies(&graph));
                prop_assert!(assignment.shifted(shift).satisfies(&graph));
                prop_assert!(assignment.types.iter().all(|&t| t >= 0));
                let checker = ClauseChecker::new(&f, Dialect::Plain, &opts).unwrap();
                prop_assert!(checker.check_assignment(&graph, &assignment).is_ok());
            }
            StratifyVerdict::Unstratified { cycle } => prop_assert!(cycle.is_valid_in(&graph)),
        }
    }

    #[test]
    fn conjunction_with_unstratified_is_unstratified(f in formula(), g in formula()) {
        if !verdict(&g).is_stratified() {
            prop_assert!(!verdict(&Formula::and(f, g)).is_stratified());
        }
    }

    #[test]
    fn negation_preserves_verdict(f in formula()) {
        prop_assert_eq!(verdict(&f).is_stratified(), verdict(&Formula::not(f.clone())).is_stratified());
    }

    #[test]
    fn tst_raise_and_erase(seed in any::<u64>(), a in 0u32..4, b in 0u32..4) {
        let mut rng = stratcat::corpus::rng(seed);
        let plain = stratcat::corpus::random_stratified(&mut rng, 5, 6);
        let t = stratcat::stratify::to_tst(&plain).unwrap();
        prop_assert_eq!(raise_types(&raise_types(&t, a), b), raise_types(&t, a + b));
        prop_assert!(alpha_equivalent(&erase_types(&raise_types(&t, a)), &erase_types(&t)).unwrap());
        prop_assert!(alpha_equivalent(&erase_types(&t), &plain).unwrap());
        let text = print(&t);
        prop_assert_eq!(parse(&text, Dialect::Tst).unwrap(), t);
    }
}
