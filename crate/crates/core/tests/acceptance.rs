//! Acceptance suite: every criterion at its tolerance and time limit.
//!
//! Prints one PASS/FAIL line per criterion and exits non-zero if any fails.
//! Run with `cargo test -p stratcat --test acceptance`; pass criterion
//! numbers as arguments to run a subset.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use stratcat::category::rel::{
    product_universality, rel_product, set_coproduct, set_coproduct_universality, Diagram, Relation, RelUniverse,
};
use stratcat::category::{
    enumerate_categories, freyd_check, limits_to, set_functors, yoneda_check, FinCategory, FreydVerdict, Functor,
};
use stratcat::corpus;
use stratcat::formula::{alpha_equivalent, parse, print, Dialect, Formula, Rel, Term, Var};
use stratcat::model::{build_vn, eval_closed, reflect_search, singleton_image_check};
use stratcat::stratify::{
    check_stratified, check_stratified_with_graph, oracle_complete, to_tst, Options, StratifyVerdict,
};
use stratcat::transform::{
    comprehension_instance, erase_types, foundation_instance, raise_types, relativize, replacement_instance,
    TransformError,
};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn plain(s: &str) -> Formula {
    parse(s, Dialect::Plain).expect("parse")
}

fn c1_oracle_equivalence() -> Outcome {
    let opts = Options::default();
    let mut total = 0u64;
    let mut stratified = 0u64;
    for f in corpus::exhaustive_plain(4, 5, 1) {
        let fast = check_stratified(&f, Dialect::Plain, &opts).map_err(|e| e.to_string())?.is_stratified();
        let slow = oracle_complete(&f, Dialect::Plain, &opts).map_err(|e| e.to_string())?.stratified;
        ensure(fast == slow, || format!("disagreement on `{}`: solver {fast}, oracle {slow}", print(&f)))?;
        total += 1;
        stratified += u64::from(fast);
    }
    ensure(total >= 100_000, || format!("corpus has only {total} formulas"))?;
    Ok(format!("{total} formulas agree, {stratified} stratified"))
}

fn c2_canonical_verdicts() -> Outcome {
    let opts = Options::default();
    let v = check_stratified(&plain("exists y. forall x. (x in y <-> x = x)"), Dialect::Plain, &opts)
        .map_err(|e| e.to_string())?;
    let a = v.assignment().ok_or("universal-set instance reported unstratified")?;
    ensure(a.get("x") == Some(0) && a.get("y") == Some(1), || format!("assignment {a:?}"))?;
    for text in ["x in x", "exists y. forall x. (x in y <-> ~(x in x))"] {
        let (graph, verdict) = check_stratified_with_graph(&plain(text), Dialect::Plain, &opts).map_err(|e| e.to_string())?;
        let StratifyVerdict::Unstratified { cycle } = verdict else {
            return Err(format!("`{text}` reported stratified"));
        };
        ensure(cycle.is_valid_in(&graph), || format!("invalid cycle witness for `{text}`"))?;
    }
    Ok("universal set x:0 y:1; self-membership and Russell unstratified with valid cycles".into())
}

fn c3_lstar_axioms() -> Outcome {
    let text = include_str!("data/comprehension_payloads.txt");
    let x = Var::class("X");
    let mut n = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let phi = parse(line, Dialect::LStar).map_err(|e| format!("`{line}`: {e}"))?;
        let inst = comprehension_instance(&phi, &x).map_err(|e| format!("`{line}`: {e}"))?;
        let ok = check_stratified(&inst, Dialect::LStar, &Options::default()).map_err(|e| e.to_string())?.is_stratified();
        ensure(ok, || format!("instance for `{line}` is not stratified"))?;
        n += 1;
    }
    ensure(n == 50, || format!("{n} curated payloads, expected 50"))?;
    let unstratified = ["X in X", "~(X in X)", "X in Z & Z in X", "exists Z. (Z in X & X in Z)", "X in P(X, A)"];
    for line in unstratified {
        let phi = parse(line, Dialect::LStar).map_err(|e| e.to_string())?;
        ensure(matches!(comprehension_instance(&phi, &x), Err(TransformError::NotStratified)), || {
            format!("comprehension accepted unstratified `{line}`")
        })?;
        for v in phi.free_vars() {
            foundation_instance(&phi, &v).map_err(|e| format!("foundation on `{line}`: {e}"))?;
        }
    }
    let (a, b) = (Var::class("X"), Var::class("Y"));
    for line in ["X in Y & Y in X", "Y = X & X in X", "X in P(X, Y)"] {
        let phi = parse(line, Dialect::LStar).map_err(|e| e.to_string())?;
        replacement_instance(&phi, &a, &b).map_err(|e| format!("replacement on `{line}`: {e}"))?;
    }
    Ok(format!("{n} comprehension instances stratified; unstratified payloads rejected by comprehension, accepted by replacement and foundation"))
}

fn c4_relativization() -> Outcome {
    let mut m = build_vn(4).map_err(|e| e.to_string())?;
    let transitive: Vec<usize> = (0..m.len()).filter(|&s| m.is_transitive(s)).collect();
    let mut r = corpus::rng(4);
    let mut checks = 0;
    for _ in 0..200 {
        let phi = corpus::random_closed(&mut r, 3, 3, 6);
        let rel = relativize(&phi, &Term::constant("S")).map_err(|e| e.to_string())?;
        for &s in &transitive {
            m.set_constant("S", s);
            let members: Vec<usize> = m.members(s).collect();
            let lhs = eval_closed(&rel, &m).map_err(|e| e.to_string())?;
            let rhs = eval_closed(&phi, &m.restrict(&members)).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("`{}` at s = {}", print(&phi), m.label(s)))?;
            checks += 1;
        }
    }
    Ok(format!("200 formulas x {} transitive sets, {checks} agreements", transitive.len()))
}

fn c5_reflection() -> Outcome {
    let phi = plain("exists y. forall x. ~(x in y)");
    let found = reflect_search(std::slice::from_ref(&phi), 4).map_err(|e| e.to_string())?;
    // independent: evaluate on the substructure V_m directly
    let m = build_vn(4).map_err(|e| e.to_string())?;
    let truth = eval_closed(&phi, &m).map_err(|e| e.to_string())?;
    let brute = (0..=4)
        .find(|&k| {
            let level: Vec<usize> = (0..stratcat::model::ackermann_size(k).unwrap()).collect();
            eval_closed(&phi, &m.restrict(&level)).unwrap() == truth
        })
        .unwrap_or(4);
    ensure(found == 1 && brute == 1, || format!("search {found}, brute force {brute}"))?;
    Ok("least reflecting level 1 by search and by direct evaluation".into())
}

fn c6_freyd() -> Outcome {
    let cats = enumerate_categories(3, 3);
    let mut counts = [0usize; 3];
    for c in &cats {
        match freyd_check(c).map_err(|e| e.to_string())? {
            FreydVerdict::Preorder => counts[0] += 1,
            FreydVerdict::NotPreorderMissingProduct { .. } => counts[1] += 1,
            FreydVerdict::TheoremViolation { parallel } => return Err(format!("violation at {parallel:?}")),
        }
    }
    let c = FinCategory::from_json(
        &serde_json::from_str(include_str!("data/two_arrows.json")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let FreydVerdict::NotPreorderMissingProduct { diagram, .. } = freyd_check(&c).map_err(|e| e.to_string())? else {
        return Err("two parallel arrows not reported as missing a product".into());
    };
    let arr = stratcat::category::arr_category(&c);
    let images: Vec<usize> = diagram.iter().map(|(_, x)| c.object_index(x).unwrap()).collect();
    let family = Functor::family(&arr, &c, &images).map_err(|e| e.to_string())?;
    ensure(limits_to(&family).is_empty(), || "reported diagram has a limit".into())?;
    // curated: every category with four morphisms and the five-morphism monoids
    let mut curated = 0;
    for c in enumerate_categories(4, 4).iter().chain(enumerate_categories(5, 1).iter()) {
        ensure(!freyd_check(c).map_err(|e| e.to_string())?.is_violation(), || format!("violation in {:?}", c.to_json()))?;
        curated += 1;
    }
    Ok(format!(
        "{} categories: {} preorders, {} missing a product, 0 violations; {curated} curated checked; two arrows: diagram of {} with no limit",
        cats.len(),
        counts[0],
        counts[1],
        diagram.len()
    ))
}

fn c7_rel_set() -> Outcome {
    let u = RelUniverse::new(3);
    let objects = u.subsets();
    let mut diagrams = 0;
    let mut cones = 0u64;
    for tags in 0..=3 {
        for d in Diagram::all(&u, tags) {
            let p = rel_product(&u, &d).map_err(|e| e.to_string())?;
            for a in &objects {
                let r = product_universality(&p, &d, a);
                ensure(r.holds(), || format!("product of {:?} at apex {a:?}: {r:?}", d.sets))?;
                cones += r.cones;
            }
            let c = set_coproduct(&u, &d).map_err(|e| e.to_string())?;
            for b in &objects {
                let r = set_coproduct_universality(&c, &d, b);
                ensure(r.holds(), || format!("coproduct of {:?} at {b:?}: {r:?}", d.sets))?;
                cones += r.cones;
            }
            diagrams += 1;
        }
    }
    Ok(format!("{diagrams} diagrams, {cones} cones and cocones each with exactly one mediator"))
}

fn c8_dagger() -> Outcome {
    let objects = RelUniverse::new(3).subsets();
    let mut pairs = 0u64;
    for x in &objects {
        for y in &objects {
            for r in stratcat::category::rel::all_relations(x, y) {
                ensure(r.dagger().dagger() == r, || format!("involution fails for {:?}", r.pairs()))?;
                let rd = r.dagger();
                for z in &objects {
                    for q in stratcat::category::rel::all_relations(y, z) {
                        let lhs = q.after(&r).unwrap().dagger();
                        let rhs = rd.after(&q.dagger()).unwrap();
                        ensure(lhs == rhs, || format!("contravariance fails for {:?}, {:?}", r.pairs(), q.pairs()))?;
                        pairs += 1;
                    }
                }
            }
        }
        ensure(Relation::identity(x).dagger() == Relation::identity(x), || "identity not self-dual".into())?;
    }
    Ok(format!("{pairs} composable pairs"))
}

fn c9_yoneda() -> Outcome {
    let cats = enumerate_categories(6, 3);
    let mut functors = 0u64;
    let mut checks = 0u64;
    let mut failure = None;
    for c in &cats {
        set_functors(c, 3, |f| {
            functors += 1;
            for a in 0..c.num_objects() {
                let r = yoneda_check(f, a);
                checks += 1;
                if failure.is_none() && !(r.holds && r.elements == r.transformations) {
                    failure = Some(format!("{r:?} in {:?}", c.to_json()));
                }
            }
        });
    }
    if let Some(f) = failure {
        return Err(f);
    }
    Ok(format!("{} categories, {functors} functors, {checks} bijections", cats.len()))
}

fn c10_cantor() -> Outcome {
    let m = build_vn(4).map_err(|e| e.to_string())?;
    for a in 0..m.len() {
        let k = m.members(a).count();
        let got = singleton_image_check(&m, a).map_err(|e| format!("element {}: {e}", m.label(a)))?;
        ensure(got == (k, 1 << k) && k < 1 << k, || format!("element {}: {got:?}", m.label(a)))?;
    }
    Ok(format!("{} elements, each (k, 2^k)", m.len()))
}

fn well_formed_tst(f: &Formula) -> bool {
    fn ty(t: &Term) -> Option<u32> {
        match t {
            Term::Var(v) => v.ty,
            _ => None,
        }
    }
    let mut ok = true;
    f.visit_atoms(&mut |a| {
        ok &= match (ty(&a.left), ty(&a.right), a.rel) {
            (Some(l), Some(r), Rel::Mem) => r == l + 1,
            (Some(l), Some(r), Rel::Eq) => r == l,
            _ => false,
        };
    });
    ok && parse(&print(f), Dialect::Tst).ok().as_ref() == Some(f)
}

fn c11_tst_bridge() -> Outcome {
    let mut r = corpus::rng(11);
    for i in 0..10_000 {
        let f = corpus::random_stratified(&mut r, 5, 6);
        let t = to_tst(&f).map_err(|e| format!("#{i} `{}`: {e}", print(&f)))?;
        ensure(well_formed_tst(&t), || format!("#{i}: `{}` is not well-formed", print(&t)))?;
        let back = erase_types(&t);
        ensure(alpha_equivalent(&back, &f).unwrap_or(false), || format!("#{i}: `{}` erases to `{}`", print(&f), print(&back)))?;
        let (a, b) = (i % 3, i % 5);
        ensure(raise_types(&raise_types(&t, a), b) == raise_types(&t, a + b), || format!("#{i}: raise not additive"))?;
        ensure(raise_types(&t, 0) == t, || format!("#{i}: raise by 0 changed the formula"))?;
    }
    Ok("10000 formulas typed, erased and raised".into())
}

fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        Criterion { id: 1, name: "stratification oracle equivalence", limit: Some(s(60)), run: c1_oracle_equivalence },
        Criterion { id: 2, name: "canonical verdicts", limit: None, run: c2_canonical_verdicts },
        Criterion { id: 3, name: "L* axiom generation", limit: None, run: c3_lstar_axioms },
        Criterion { id: 4, name: "relativization semantics", limit: Some(s(120)), run: c4_relativization },
        Criterion { id: 5, name: "reflection at finite scale", limit: None, run: c5_reflection },
        Criterion { id: 6, name: "Freyd sweep", limit: Some(s(300)), run: c6_freyd },
        Criterion { id: 7, name: "Rel/Set constructions", limit: Some(s(300)), run: c7_rel_set },
        Criterion { id: 8, name: "dagger laws", limit: None, run: c8_dagger },
        Criterion { id: 9, name: "finite Yoneda", limit: Some(s(600)), run: c9_yoneda },
        Criterion { id: 10, name: "type-shifted Cantor", limit: None, run: c10_cantor },
        Criterion { id: 11, name: "TST bridge", limit: None, run: c11_tst_bridge },
    ]
}

fn main() -> ExitCode {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in criteria().into_iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.1?}, limit {limit:?}")),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {:<36} {:>9.2?}  {detail}", c.id, c.name, elapsed);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
