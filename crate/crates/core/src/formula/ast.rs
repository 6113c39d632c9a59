use std::fmt;

use serde::{Deserialize, Serialize};

/// The three input languages.
///
/// `Plain` is the one-sorted language of set theory, where uppercase
/// identifiers are constants such as the smallness constant `S`. `Tst` is the
/// simple theory of types, where every variable carries a type index. `LStar`
/// is the two-sorted language with set variables (lowercase), class variables
/// (uppercase), the constant `Vbar` and the pairing term `P(s, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Plain,
    Tst,
    #[serde(rename = "lstar")]
    LStar,
}

impl Dialect {
    pub fn name(self) -> &'static str {
        match self {
            Dialect::Plain => "plain",
            Dialect::Tst => "tst",
            Dialect::LStar => "lstar",
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Dialect::Plain),
            "tst" => Ok(Dialect::Tst),
            "lstar" => Ok(Dialect::LStar),
            other => Err(format!("unknown dialect `{other}` (expected plain, tst or lstar)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Set,
    Class,
}

/// A variable. Two variables are the same variable iff name, sort and type
/// index all agree, so `x^0` and `x^1` are distinct TST variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
    pub ty: Option<u32>,
}

impl Var {
    pub fn set(name: impl Into<String>) -> Self {
        Var { name: name.into(), sort: Sort::Set, ty: None }
    }

    pub fn class(name: impl Into<String>) -> Self {
        Var { name: name.into(), sort: Sort::Class, ty: None }
    }

    pub fn typed(name: impl Into<String>, ty: u32) -> Self {
        Var { name: name.into(), sort: Sort::Set, ty: Some(ty) }
    }

    /// Same name and sort, new type index.
    pub fn with_type(&self, ty: Option<u32>) -> Self {
        Var { ty, ..self.clone() }
    }

    /// Same sort and type index, new name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Var { name: name.into(), ..self.clone() }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ty {
            Some(t) => write!(f, "{}^{}", self.name, t),
            None => f.write_str(&self.name),
        }
    }
}

/// The name of the constant interpreting the small-set universe in L*.
pub const VBAR: &str = "Vbar";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    /// A constant symbol: `Vbar` in L*, or an uppercase name such as `S` in
    /// the plain dialect.
    Const(String),
    Pair(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(v: Var) -> Self {
        Term::Var(v)
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn vbar() -> Self {
        Term::Const(VBAR.to_string())
    }

    pub fn pair(left: Term, right: Term) -> Self {
        Term::Pair(Box::new(left), Box::new(right))
    }

    /// Variables occurring in the term, left to right, with repetitions.
    pub fn vars(&self) -> Vec<&Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a Var>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::Const(_) => {}
            Term::Pair(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn mentions_const(&self, name: &str) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(c) => c == name,
            Term::Pair(a, b) => a.mentions_const(name) || b.mentions_const(name),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Mem,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub rel: Rel,
    pub left: Term,
    pub right: Term,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub fn symbol(self) -> &'static str {
        match self {
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Implies => "->",
            Connective::Iff => "<->",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

/// A first-order formula over `in` and `=`.
///
/// Variables are stored by name; an occurrence refers to the innermost
/// enclosing binder of the same variable, or is free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    Binary(Connective, Box<Formula>, Box<Formula>),
    Quant(Quantifier, Var, Box<Formula>),
}

impl Formula {
    pub fn atom(rel: Rel, left: Term, right: Term) -> Self {
        Formula::Atom(Atom { rel, left, right })
    }

    pub fn mem(left: Term, right: Term) -> Self {
        Formula::atom(Rel::Mem, left, right)
    }

    pub fn eq(left: Term, right: Term) -> Self {
        Formula::atom(Rel::Eq, left, right)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not(Box::new(inner))
    }

    pub fn binary(c: Connective, left: Formula, right: Formula) -> Self {
        Formula::Binary(c, Box::new(left), Box::new(right))
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::binary(Connective::And, left, right)
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::binary(Connective::Or, left, right)
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Formula::binary(Connective::Implies, left, right)
    }

    pub fn iff(left: Formula, right: Formula) -> Self {
        Formula::binary(Connective::Iff, left, right)
    }

    pub fn forall(v: Var, body: Formula) -> Self {
        Formula::Quant(Quantifier::Forall, v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Self {
        Formula::Quant(Quantifier::Exists, v, Box::new(body))
    }

    /// Atoms in left-to-right order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.push(a));
        out
    }

    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(p) => p.visit_atoms(f),
            Formula::Binary(_, l, r) => {
                l.visit_atoms(f);
                r.visit_atoms(f);
            }
            Formula::Quant(_, _, body) => body.visit_atoms(f),
        }
    }

    /// Maximum nesting depth of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(p) => p.quantifier_depth(),
            Formula::Binary(_, l, r) => l.quantifier_depth().max(r.quantifier_depth()),
            Formula::Quant(_, _, body) => 1 + body.quantifier_depth(),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.quantifier_depth() == 0
    }

    /// Every identifier used anywhere: free or bound variables and constants.
    pub fn names(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut std::collections::BTreeSet<String>) {
        fn term_names(t: &Term, out: &mut std::collections::BTreeSet<String>) {
            match t {
                Term::Var(v) => {
                    out.insert(v.name.clone());
                }
                Term::Const(c) => {
                    out.insert(c.clone());
                }
                Term::Pair(a, b) => {
                    term_names(a, out);
                    term_names(b, out);
                }
            }
        }
        match self {
            Formula::Atom(a) => {
                term_names(&a.left, out);
                term_names(&a.right, out);
            }
            Formula::Not(p) => p.collect_names(out),
            Formula::Binary(_, l, r) => {
                l.collect_names(out);
                r.collect_names(out);
            }
            Formula::Quant(_, v, body) => {
                out.insert(v.name.clone());
                body.collect_names(out);
            }
        }
    }

    pub fn mentions_const(&self, name: &str) -> bool {
        let mut found = false;
        self.visit_atoms(&mut |a| {
            found |= a.left.mentions_const(name) || a.right.mentions_const(name);
        });
        found
    }

    /// Constant names in first-occurrence order, without repetition.
    pub fn constants(&self) -> Vec<String> {
        fn walk(t: &Term, out: &mut Vec<String>) {
            match t {
                Term::Var(_) => {}
                Term::Const(c) => {
                    if !out.contains(c) {
                        out.push(c.clone());
                    }
                }
                Term::Pair(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| {
            walk(&a.left, &mut out);
            walk(&a.right, &mut out);
        });
        out
    }

    /// Applies `f` to every type index, including binders.
    pub fn map_types(&self, f: &impl Fn(Option<u32>) -> Option<u32>) -> Formula {
        fn term(t: &Term, f: &impl Fn(Option<u32>) -> Option<u32>) -> Term {
            match t {
                Term::Var(v) => Term::Var(v.with_type(f(v.ty))),
                Term::Const(c) => Term::Const(c.clone()),
                Term::Pair(a, b) => Term::pair(term(a, f), term(b, f)),
            }
        }
        match self {
            Formula::Atom(a) => Formula::atom(a.rel, term(&a.left, f), term(&a.right, f)),
            Formula::Not(p) => Formula::not(p.map_types(f)),
            Formula::Binary(c, l, r) => Formula::binary(*c, l.map_types(f), r.map_types(f)),
            Formula::Quant(q, v, body) => {
                Formula::Quant(*q, v.with_type(f(v.ty)), Box::new(body.map_types(f)))
            }
        }
    }
}
