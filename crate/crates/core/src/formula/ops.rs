use std::collections::BTreeSet;

use super::ast::{Dialect, Formula, Sort, Term, Var, VBAR};
use super::FormulaError;

impl Formula {
    /// Variables with at least one occurrence outside every binder of the same
    /// variable, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// The dialects this formula could have been parsed in.
    pub fn compatible_dialects(&self) -> Vec<Dialect> {
        let mut typed = false;
        let mut untyped = false;
        let mut class = false;
        let mut pair = false;
        let mut vbar = false;
        let mut other_const = false;
        let see_var = |v: &Var, typed: &mut bool, untyped: &mut bool, class: &mut bool| {
            if v.ty.is_some() {
                *typed = true;
            } else {
                *untyped = true;
            }
            if v.sort == Sort::Class {
                *class = true;
            }
        };
        fn term_walk(t: &Term, f: &mut dyn FnMut(&Term)) {
            f(t);
            if let Term::Pair(a, b) = t {
                term_walk(a, f);
                term_walk(b, f);
            }
        }
        let mut terms = Vec::new();
        self.visit_atoms(&mut |a| {
            term_walk(&a.left, &mut |t| terms.push(t.clone()));
            term_walk(&a.right, &mut |t| terms.push(t.clone()));
        });
        for t in &terms {
            match t {
                Term::Var(v) => see_var(v, &mut typed, &mut untyped, &mut class),
                Term::Const(c) if c == VBAR => vbar = true,
                Term::Const(_) => other_const = true,
                Term::Pair(..) => pair = true,
            }
        }
        let mut binders = Vec::new();
        collect_binders(self, &mut binders);
        for v in &binders {
            see_var(v, &mut typed, &mut untyped, &mut class);
        }
        let mut out = Vec::new();
        if !untyped && !class && !pair && !vbar && !other_const {
            out.push(Dialect::Tst);
        }
        if !typed && !class && !pair && !vbar {
            out.push(Dialect::Plain);
        }
        if !typed && !other_const {
            out.push(Dialect::LStar);
        }
        out
    }

    /// Replaces every occurrence of the constant `name` by `replacement`.
    ///
    /// Fails if a variable of `replacement` is bound at an occurrence site.
    pub fn substitute_constant(&self, name: &str, replacement: &Term) -> Result<Formula, FormulaError> {
        let mut bound = Vec::new();
        subst(self, &Target::Const(name), replacement, &mut bound)
    }

    /// Replaces the free occurrences of `var` by `replacement`, refusing to
    /// capture any variable of the replacement.
    pub fn substitute_var(&self, var: &Var, replacement: &Term) -> Result<Formula, FormulaError> {
        let mut bound = Vec::new();
        subst(self, &Target::Var(var), replacement, &mut bound)
    }

    /// Prefixes one universal quantifier per free variable, first occurrence
    /// outermost.
    pub fn universal_closure(&self) -> Formula {
        self.free_vars()
            .into_iter()
            .rev()
            .fold(self.clone(), |acc, v| Formula::forall(v, acc))
    }
}

fn collect_binders(f: &Formula, out: &mut Vec<Var>) {
    match f {
        Formula::Atom(_) => {}
        Formula::Not(p) => collect_binders(p, out),
        Formula::Binary(_, l, r) => {
            collect_binders(l, out);
            collect_binders(r, out);
        }
        Formula::Quant(_, v, body) => {
            out.push(v.clone());
            collect_binders(body, out);
        }
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
    match f {
        Formula::Atom(a) => {
            for v in a.left.vars().into_iter().chain(a.right.vars()) {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        Formula::Not(p) => collect_free(p, bound, out),
        Formula::Binary(_, l, r) => {
            collect_free(l, bound, out);
            collect_free(r, bound, out);
        }
        Formula::Quant(_, v, body) => {
            bound.push(v.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

enum Target<'a> {
    Const(&'a str),
    Var(&'a Var),
}

fn subst(f: &Formula, target: &Target, replacement: &Term, bound: &mut Vec<Var>) -> Result<Formula, FormulaError> {
    fn term(t: &Term, target: &Target, replacement: &Term, bound: &[Var]) -> Result<Term, FormulaError> {
        let hit = match (t, target) {
            (Term::Const(c), Target::Const(name)) => c == name,
            (Term::Var(v), Target::Var(var)) => v == *var,
            _ => false,
        };
        if hit {
            if let Some(v) = replacement.vars().into_iter().find(|v| bound.contains(v)) {
                return Err(FormulaError::Capture { name: v.name.clone() });
            }
            return Ok(replacement.clone());
        }
        Ok(match t {
            Term::Pair(a, b) => Term::pair(term(a, target, replacement, bound)?, term(b, target, replacement, bound)?),
            other => other.clone(),
        })
    }
    Ok(match f {
        Formula::Atom(a) => Formula::atom(
            a.rel,
            term(&a.left, target, replacement, bound)?,
            term(&a.right, target, replacement, bound)?,
        ),
        Formula::Not(p) => Formula::not(subst(p, target, replacement, bound)?),
        Formula::Binary(c, l, r) => {
            Formula::binary(*c, subst(l, target, replacement, bound)?, subst(r, target, replacement, bound)?)
        }
        Formula::Quant(q, v, body) => {
            if matches!(target, Target::Var(t) if *t == v) {
                return Ok(f.clone());
            }
            bound.push(v.clone());
            let body = subst(body, target, replacement, bound);
            bound.pop();
            Formula::Quant(*q, v.clone(), Box::new(body?))
        }
    })
}

/// True iff `a` and `b` differ only by a consistent renaming of bound
/// variables. Errors when no single dialect accommodates both formulas.
pub fn alpha_equivalent(a: &Formula, b: &Formula) -> Result<bool, FormulaError> {
    let da = a.compatible_dialects();
    let db = b.compatible_dialects();
    if !da.iter().any(|d| db.contains(d)) {
        return Err(FormulaError::DialectMismatch);
    }
    Ok(alpha(a, b, &mut Vec::new()))
}

fn alpha(a: &Formula, b: &Formula, env: &mut Vec<(Var, Var)>) -> bool {
    fn lookup(v: &Var, env: &[(Var, Var)], left: bool) -> Option<usize> {
        env.iter().rposition(|(l, r)| if left { l == v } else { r == v })
    }
    fn term(s: &Term, t: &Term, env: &[(Var, Var)]) -> bool {
        match (s, t) {
            (Term::Var(x), Term::Var(y)) => match (lookup(x, env, true), lookup(y, env, false)) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            },
            (Term::Const(c), Term::Const(d)) => c == d,
            (Term::Pair(a1, b1), Term::Pair(a2, b2)) => term(a1, a2, env) && term(b1, b2, env),
            _ => false,
        }
    }
    match (a, b) {
        (Formula::Atom(x), Formula::Atom(y)) => {
            x.rel == y.rel && term(&x.left, &y.left, env) && term(&x.right, &y.right, env)
        }
        (Formula::Not(p), Formula::Not(q)) => alpha(p, q, env),
        (Formula::Binary(c, l1, r1), Formula::Binary(d, l2, r2)) => {
            c == d && alpha(l1, l2, env) && alpha(r1, r2, env)
        }
        (Formula::Quant(q1, v1, b1), Formula::Quant(q2, v2, b2)) => {
            if q1 != q2 || v1.sort != v2.sort || v1.ty != v2.ty {
                return false;
            }
            env.push((v1.clone(), v2.clone()));
            let same = alpha(b1, b2, env);
            env.pop();
            same
        }
        _ => false,
    }
}

/// `base` if unused, otherwise the first of `base1`, `base2`, ... not in
/// `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    fresh_numbered(base, avoid)
}

/// The first of `base1`, `base2`, ... not in `avoid`.
pub fn fresh_numbered(base: &str, avoid: &BTreeSet<String>) -> String {
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded counter")
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s, Dialect::Plain).unwrap()
    }

    fn names(vs: Vec<Var>) -> Vec<String> {
        vs.into_iter().map(|v| v.name).collect()
    }

    #[test]
    fn free_variables() {
        assert_eq!(names(p("x in y").free_vars()), ["x", "y"]);
        assert_eq!(names(p("forall x. x in y").free_vars()), ["y"]);
        assert!(p("exists y. forall x. (x in y <-> x = x)").free_vars().is_empty());
        assert_eq!(names(p("x in y & forall x. x in z").free_vars()), ["x", "y", "z"]);
        // constants are not variables
        assert_eq!(names(p("x in S").free_vars()), ["x"]);
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_equivalent(&p("forall x. x = x"), &p("forall z. z = z")).unwrap());
        assert!(!alpha_equivalent(&p("forall x. x in y"), &p("forall x. x in z")).unwrap());
        assert!(!alpha_equivalent(&p("forall x. forall y. x in y"), &p("forall y. forall x. x in y")).unwrap());
        assert!(alpha_equivalent(&p("forall x. forall y. x in y"), &p("forall y. forall x. y in x")).unwrap());
        // a bound variable may not be renamed onto a free one
        assert!(!alpha_equivalent(&p("forall x. x in y"), &p("forall y. y in y")).unwrap());
    }

    #[test]
    fn alpha_dialect_mismatch() {
        let typed = parse("x^0 in y^1", Dialect::Tst).unwrap();
        assert!(matches!(alpha_equivalent(&typed, &p("x in y")), Err(FormulaError::DialectMismatch)));
        let class = parse("X in Y", Dialect::LStar).unwrap();
        assert!(matches!(alpha_equivalent(&class, &p("x in S")), Err(FormulaError::DialectMismatch)));
        // lowercase-only formulas are shared between plain and lstar
        let shared = parse("x in y", Dialect::LStar).unwrap();
        assert!(alpha_equivalent(&shared, &p("x in y")).unwrap());
    }

    #[test]
    fn substitute_constant_cases() {
        let v = Term::Var(Var::set("v"));
        assert_eq!(p("x in S").substitute_constant("S", &v).unwrap(), p("x in v"));
        let f = p("forall x. x = x");
        assert_eq!(f.substitute_constant("S", &v).unwrap(), f);
        let captured = p("forall v. v in S").substitute_constant("S", &v);
        assert!(matches!(captured, Err(FormulaError::Capture { .. })));
    }

    #[test]
    fn substitute_var_respects_binders() {
        let f = p("x in y & forall x. x in y");
        let g = f.substitute_var(&Var::set("x"), &Term::Var(Var::set("w"))).unwrap();
        assert_eq!(g, p("w in y & forall x. x in y"));
        let bad = p("forall y. x in y").substitute_var(&Var::set("x"), &Term::Var(Var::set("y")));
        assert!(bad.is_err());
    }

    #[test]
    fn fresh_names() {
        let avoid: BTreeSet<String> = ["y", "y1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_name("y", &avoid), "y2");
        assert_eq!(fresh_name("a", &avoid), "a");
        assert_eq!(fresh_numbered("a", &avoid), "a1");
    }

    #[test]
    fn closure_is_closed() {
        let f = p("x in y & exists z. z in x");
        let c = f.universal_closure();
        assert!(c.is_closed());
        assert_eq!(c, p("forall x. forall y. (x in y & exists z. z in x)"));
    }
}
