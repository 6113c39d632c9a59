//! Syntactic transformations: relativization, the reflection and
//! supertransitivity axioms over a smallness constant, instances of the
//! comprehension, replacement and foundation schemata, and the type shifts
//! between TST and plain formulas.

use std::collections::BTreeSet;

use crate::formula::{fresh_name, fresh_numbered, Dialect, Formula, FormulaError, Quantifier, Sort, Term, Var};
use crate::stratify::{check_stratified, Options, StratifyError};

/// Name of the smallness constant.
pub const SMALL: &str = "S";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("restrictor `{0}` is bound inside the formula")]
    RestrictorCaptured(String),
    #[error("formula already mentions `{0}`")]
    MentionsConstant(String),
    #[error("payload is not stratified, so the instance is not an axiom")]
    NotStratified,
    #[error("designated variable `{0}` does not occur free in the payload")]
    MissingParameter(String),
    #[error("{0} dialect is not accepted here")]
    WrongDialect(Dialect),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Stratify(#[from] StratifyError),
}

/// Restricts every quantifier to the extension of `restrictor`:
/// `forall x. p` becomes `forall x. (x in R -> p)` and `exists x. p` becomes
/// `exists x. (x in R & p)`. Free variables are left unguarded.
pub fn relativize(f: &Formula, restrictor: &Term) -> Result<Formula, TransformError> {
    if let Term::Var(r) = restrictor {
        if binds(f, r) {
            return Err(TransformError::RestrictorCaptured(r.name.clone()));
        }
    }
    if has_typed_vars(f) {
        return Err(TransformError::WrongDialect(Dialect::Tst));
    }
    Ok(relativize_unchecked(f, restrictor))
}

fn relativize_unchecked(f: &Formula, r: &Term) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(p) => Formula::not(relativize_unchecked(p, r)),
        Formula::Binary(c, a, b) => Formula::binary(*c, relativize_unchecked(a, r), relativize_unchecked(b, r)),
        Formula::Quant(q, v, body) => {
            let guard = Formula::mem(Term::Var(v.clone()), r.clone());
            let body = relativize_unchecked(body, r);
            let inner = match q {
                Quantifier::Forall => Formula::implies(guard, body),
                Quantifier::Exists => Formula::and(guard, body),
            };
            Formula::Quant(*q, v.clone(), Box::new(inner))
        }
    }
}

fn binds(f: &Formula, v: &Var) -> bool {
    match f {
        Formula::Atom(_) => false,
        Formula::Not(p) => binds(p, v),
        Formula::Binary(_, a, b) => binds(a, v) || binds(b, v),
        Formula::Quant(_, w, body) => w.name == v.name || binds(body, v),
    }
}

fn has_typed_vars(f: &Formula) -> bool {
    f.compatible_dialects() == [Dialect::Tst] && !f.atoms().is_empty()
}

/// The reflection axiom for `phi` over the constant `S`:
/// `forall x0. (x0 in S -> ... (phi^S <-> phi))`, one guarded quantifier per
/// free variable of `phi` in first-occurrence order.
pub fn reflection_axiom(phi: &Formula) -> Result<Formula, TransformError> {
    if phi.mentions_const(SMALL) || phi.names().contains(SMALL) {
        return Err(TransformError::MentionsConstant(SMALL.into()));
    }
    if has_typed_vars(phi) {
        return Err(TransformError::WrongDialect(Dialect::Tst));
    }
    let small = Term::constant(SMALL);
    let core = Formula::iff(relativize_unchecked(phi, &small), phi.clone());
    Ok(phi.free_vars().into_iter().rev().fold(core, |acc, v| {
        let guard = Formula::mem(Term::Var(v.clone()), small.clone());
        Formula::forall(v, Formula::implies(guard, acc))
    }))
}

/// Transitivity and supertransitivity of `S`, with `x ⊂ y` written out as
/// `forall z. (z in x -> z in y)`.
pub fn supertransitivity_axioms() -> [Formula; 2] {
    let (x, y, z) = (Var::set("x"), Var::set("y"), Var::set("z"));
    let tx = || Term::Var(x.clone());
    let ty = || Term::Var(y.clone());
    let tz = || Term::Var(z.clone());
    let s = || Term::constant(SMALL);
    let transitive = Formula::forall(
        x.clone(),
        Formula::forall(
            y.clone(),
            Formula::implies(Formula::and(Formula::mem(tx(), ty()), Formula::mem(ty(), s())), Formula::mem(tx(), s())),
        ),
    );
    let subset = Formula::forall(z.clone(), Formula::implies(Formula::mem(tz(), tx()), Formula::mem(tz(), ty())));
    let supertransitive = Formula::forall(
        x.clone(),
        Formula::forall(
            y.clone(),
            Formula::implies(Formula::and(subset, Formula::mem(ty(), s())), Formula::mem(tx(), s())),
        ),
    );
    [transitive, supertransitive]
}

/// Which schema to instantiate, with its designated variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schema {
    Reflection,
    /// The comprehended class variable.
    Comprehension { var: Var },
    /// Argument and value set variables of the functional relation.
    Replacement { arg: Var, value: Var },
    Foundation { var: Var },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaInstanceRequest {
    pub schema: Schema,
    pub payload: Formula,
}

impl SchemaInstanceRequest {
    pub fn instantiate(&self) -> Result<Formula, TransformError> {
        match &self.schema {
            Schema::Reflection => reflection_axiom(&self.payload),
            Schema::Comprehension { var } => comprehension_instance(&self.payload, var),
            Schema::Replacement { arg, value } => replacement_instance(&self.payload, arg, value),
            Schema::Foundation { var } => foundation_instance(&self.payload, var),
        }
    }
}

fn require_free(phi: &Formula, v: &Var) -> Result<(), TransformError> {
    if phi.free_vars().contains(v) {
        Ok(())
    } else {
        Err(TransformError::MissingParameter(v.name.clone()))
    }
}

fn require_lstar(phi: &Formula) -> Result<(), TransformError> {
    if phi.compatible_dialects().contains(&Dialect::LStar) {
        Ok(())
    } else if has_typed_vars(phi) {
        Err(TransformError::WrongDialect(Dialect::Tst))
    } else {
        Err(TransformError::WrongDialect(Dialect::Plain))
    }
}

/// `exists Y. forall X. (X in Y <-> phi)` for a stratified L* payload with
/// `X` free. `Y` is the first unused name among `Y`, `Y1`, `Y2`, ...; the
/// remaining free variables of `phi` stay free as parameters.
pub fn comprehension_instance(phi: &Formula, var: &Var) -> Result<Formula, TransformError> {
    require_lstar(phi)?;
    require_free(phi, var)?;
    if !check_stratified(phi, Dialect::LStar, &Options::default())?.is_stratified() {
        return Err(TransformError::NotStratified);
    }
    let y = Var::class(fresh_name("Y", &phi.names()));
    Ok(Formula::exists(
        y.clone(),
        Formula::forall(var.clone(), Formula::iff(Formula::mem(Term::Var(var.clone()), Term::Var(y)), phi.clone())),
    ))
}

/// The replacement instance
/// `forall x. forall y1. forall y2. ((phi(x,y1) & phi(x,y2)) -> y1 = y2) ->
///  forall a. exists b. forall y. (y in b <-> exists x. (x in a & phi(x,y)))`.
/// Stratification of `phi` is not required.
pub fn replacement_instance(phi: &Formula, arg: &Var, value: &Var) -> Result<Formula, TransformError> {
    require_lstar(phi)?;
    require_free(phi, arg)?;
    require_free(phi, value)?;
    let mut avoid: BTreeSet<String> = phi.names();
    let mut fresh = |base: &str, numbered: bool| {
        let n = if numbered { fresh_numbered(base, &avoid) } else { fresh_name(base, &avoid) };
        avoid.insert(n.clone());
        Var { name: n, sort: Sort::Set, ty: None }
    };
    let y1 = fresh(&value.name, true);
    let y2 = fresh(&value.name, true);
    let a = fresh("a", false);
    let b = fresh("b", false);
    let t = |v: &Var| Term::Var(v.clone());
    let phi_y1 = phi.substitute_var(value, &t(&y1))?;
    let phi_y2 = phi.substitute_var(value, &t(&y2))?;
    let functional = Formula::forall(
        arg.clone(),
        Formula::forall(
            y1.clone(),
            Formula::forall(
                y2.clone(),
                Formula::implies(Formula::and(phi_y1, phi_y2), Formula::eq(t(&y1), t(&y2))),
            ),
        ),
    );
    let image = Formula::forall(
        a.clone(),
        Formula::exists(
            b.clone(),
            Formula::forall(
                value.clone(),
                Formula::iff(
                    Formula::mem(t(value), t(&b)),
                    Formula::exists(arg.clone(), Formula::and(Formula::mem(t(arg), t(&a)), phi.clone())),
                ),
            ),
        ),
    );
    Ok(Formula::implies(functional, image))
}

/// The foundation instance
/// `(exists x. phi(x)) -> exists x. (phi(x) & forall y. (y in x -> ~phi(y)))`.
pub fn foundation_instance(phi: &Formula, var: &Var) -> Result<Formula, TransformError> {
    require_lstar(phi)?;
    require_free(phi, var)?;
    let y = Var { name: fresh_name("y", &phi.names()), sort: Sort::Set, ty: None };
    let t = |v: &Var| Term::Var(v.clone());
    let phi_y = phi.substitute_var(var, &t(&y))?;
    let minimal = Formula::exists(
        var.clone(),
        Formula::and(
            phi.clone(),
            Formula::forall(y.clone(), Formula::implies(Formula::mem(t(&y), t(var)), Formula::not(phi_y))),
        ),
    );
    Ok(Formula::implies(Formula::exists(var.clone(), phi.clone()), minimal))
}

/// Adds `k` to every type index of a TST formula.
pub fn raise_types(f: &Formula, k: u32) -> Formula {
    f.map_types(&|t| t.map(|t| t + k))
}

/// Drops the type indices of a TST formula.
///
/// Distinct TST variables sharing a name (such as `x^0` and `x^1`) would
/// collide once untyped, so the later ones are renamed: bound variables to a
/// fresh name when keeping theirs would capture, free ones always.
pub fn erase_types(f: &Formula) -> Formula {
    let mut used = f.names();
    let mut free_names: Vec<(Var, String)> = Vec::new();
    for v in f.free_vars() {
        let name = if free_names.iter().any(|(_, n)| *n == v.name) {
            let n = fresh_numbered(&v.name, &used);
            used.insert(n.clone());
            n
        } else {
            v.name.clone()
        };
        free_names.push((v, name));
    }
    erase(f, &mut free_names, &mut used)
}

fn erase(f: &Formula, env: &mut Vec<(Var, String)>, used: &mut BTreeSet<String>) -> Formula {
    fn term(t: &Term, env: &[(Var, String)]) -> Term {
        match t {
            Term::Var(v) => {
                let name = env.iter().rev().find(|(w, _)| w == v).map(|(_, n)| n.clone()).unwrap_or(v.name.clone());
                Term::Var(Var { name, sort: v.sort, ty: None })
            }
            Term::Const(c) => Term::Const(c.clone()),
            Term::Pair(a, b) => Term::pair(term(a, env), term(b, env)),
        }
    }
    match f {
        Formula::Atom(a) => Formula::atom(a.rel, term(&a.left, env), term(&a.right, env)),
        Formula::Not(p) => Formula::not(erase(p, env, used)),
        Formula::Binary(c, l, r) => {
            let l = erase(l, env, used);
            Formula::binary(*c, l, erase(r, env, used))
        }
        Formula::Quant(q, v, body) => {
            // Keeping the name captures if some other variable free in the
            // body would also erase to it.
            let clash = body.free_vars().iter().any(|w| {
                w != v && env.iter().rev().find(|(u, _)| u == w).map(|(_, n)| n == &v.name).unwrap_or(w.name == v.name)
            });
            let name = if clash {
                let n = fresh_numbered(&v.name, used);
                used.insert(n.clone());
                n
            } else {
                v.name.clone()
            };
            env.push((v.clone(), name.clone()));
            let body = erase(body, env, used);
            env.pop();
            Formula::Quant(*q, Var { name, sort: v.sort, ty: None }, Box::new(body))
        }
    }
}
