use std::fmt::{self, Write};

use super::ast::{Formula, Rel, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => f.write_str(c),
            Term::Pair(a, b) => write!(f, "P({a}, {b})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_formula(&mut s, self);
        f.write_str(&s)
    }
}

/// Renders a formula in the concrete syntax accepted by [`super::parse`].
pub fn print(formula: &Formula) -> String {
    formula.to_string()
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Atom(a) => {
            let rel = match a.rel {
                Rel::Mem => "in",
                Rel::Eq => "=",
            };
            let index = match &a.left {
                Term::Var(v) => v.ty.map(|t| format!("^{t}")).unwrap_or_default(),
                _ => String::new(),
            };
            let _ = write!(out, "{} {rel}{index} {}", a.left, a.right);
        }
        Formula::Not(inner) => {
            out.push('~');
            if matches!(**inner, Formula::Not(_)) {
                write_formula(out, inner);
            } else {
                wrapped(out, inner);
            }
        }
        Formula::Binary(c, l, r) => {
            // A quantifier on the left would swallow the rest of the line.
            if matches!(**l, Formula::Binary(..) | Formula::Quant(..)) {
                wrapped(out, l);
            } else {
                write_formula(out, l);
            }
            let _ = write!(out, " {} ", c.symbol());
            if matches!(**r, Formula::Binary(..)) {
                wrapped(out, r);
            } else {
                write_formula(out, r);
            }
        }
        Formula::Quant(q, v, body) => {
            let _ = write!(out, "{} {v}. ", q.keyword());
            if matches!(**body, Formula::Binary(..)) {
                wrapped(out, body);
            } else {
                write_formula(out, body);
            }
        }
    }
}

fn wrapped(out: &mut String, f: &Formula) {
    out.push('(');
    write_formula(out, f);
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::super::{parse, Dialect};

    #[test]
    fn atoms_print_bare() {
        assert_eq!(parse("x in y", Dialect::Plain).unwrap().to_string(), "x in y");
        assert_eq!(parse("X in P(Y, Vbar)", Dialect::LStar).unwrap().to_string(), "X in P(Y, Vbar)");
    }

    #[test]
    fn universal_set_instance_prints_canonically() {
        let text = "exists y. forall x. (x in y <-> x = x)";
        assert_eq!(parse(text, Dialect::Plain).unwrap().to_string(), text);
    }

    #[test]
    fn tst_indices_on_relations() {
        let text = "exists y^1. forall x^0. (x^0 in^0 y^1 <-> x^0 =^0 x^0)";
        assert_eq!(parse(text, Dialect::Tst).unwrap().to_string(), text);
    }

    #[test]
    fn left_quantifiers_and_negations_are_parenthesized() {
        let f = parse("(forall x. x in y) & ~forall y. y = y", Dialect::Plain).unwrap();
        let printed = f.to_string();
        assert_eq!(printed, "(forall x. x in y) & ~(forall y. y = y)");
        assert_eq!(parse(&printed, Dialect::Plain).unwrap(), f);
        assert_eq!(parse("~~x in x", Dialect::Plain).unwrap().to_string(), "~~(x in x)");
    }
}
