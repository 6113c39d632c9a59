use std::collections::BTreeMap;

use crate::formula::{Connective, Formula, Quantifier, Rel, Term, Var};

use super::{FiniteStructure, ModelError};

/// Values of free variables, by name, as element indices.
pub type Valuation = BTreeMap<String, usize>;

/// A term resolved to a stack slot or a fixed element.
#[derive(Clone, Copy)]
enum Slot {
    Stack(usize),
    Elem(usize),
}

enum Compiled {
    Atom(Rel, Slot, Slot),
    Not(Box<Compiled>),
    Binary(Connective, Box<Compiled>, Box<Compiled>),
    Quant(Quantifier, Box<Compiled>),
}

struct Compiler<'m> {
    model: &'m FiniteStructure,
    scope: Vec<Var>,
}

impl Compiler<'_> {
    fn term(&self, t: &Term) -> Result<Slot, ModelError> {
        match t {
            Term::Var(v) => match self.scope.iter().rposition(|w| w == v) {
                Some(i) => Ok(Slot::Stack(i)),
                None => Err(ModelError::UnboundVariable(v.to_string())),
            },
            Term::Const(c) => {
                self.model.constant(c).map(Slot::Elem).ok_or_else(|| ModelError::UnresolvedConstant(c.clone()))
            }
            Term::Pair(..) => Err(ModelError::UnsupportedTerm(t.to_string())),
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<Compiled, ModelError> {
        Ok(match f {
            Formula::Atom(a) => Compiled::Atom(a.rel, self.term(&a.left)?, self.term(&a.right)?),
            Formula::Not(p) => Compiled::Not(Box::new(self.formula(p)?)),
            Formula::Binary(c, l, r) => Compiled::Binary(*c, Box::new(self.formula(l)?), Box::new(self.formula(r)?)),
            Formula::Quant(q, v, body) => {
                self.scope.push(v.clone());
                let body = self.formula(body);
                self.scope.pop();
                Compiled::Quant(*q, Box::new(body?))
            }
        })
    }
}

fn run(c: &Compiled, m: &FiniteStructure, stack: &mut Vec<usize>) -> bool {
    let get = |s: Slot, stack: &[usize]| match s {
        Slot::Stack(i) => stack[i],
        Slot::Elem(e) => e,
    };
    match c {
        Compiled::Atom(rel, l, r) => {
            let (a, b) = (get(*l, stack), get(*r, stack));
            match rel {
                Rel::Eq => a == b,
                Rel::Mem => m.contains(b, a),
            }
        }
        Compiled::Not(p) => !run(p, m, stack),
        Compiled::Binary(conn, l, r) => {
            let a = run(l, m, stack);
            match conn {
                Connective::And => a && run(r, m, stack),
                Connective::Or => a || run(r, m, stack),
                Connective::Implies => !a || run(r, m, stack),
                Connective::Iff => a == run(r, m, stack),
            }
        }
        Compiled::Quant(q, body) => {
            let want = matches!(q, Quantifier::Exists);
            let mut result = !want;
            for e in 0..m.len() {
                stack.push(e);
                let v = run(body, m, stack);
                stack.pop();
                if v == want {
                    result = want;
                    break;
                }
            }
            result
        }
    }
}

/// Tarskian satisfaction of `phi` in `m` under `v`. Equality is identity of
/// elements; constants are read from the structure.
pub fn eval_formula(phi: &Formula, m: &FiniteStructure, v: &Valuation) -> Result<bool, ModelError> {
    let free = phi.free_vars();
    let mut stack = Vec::with_capacity(free.len() + phi.quantifier_depth());
    for var in &free {
        let e = *v.get(&var.name).ok_or_else(|| ModelError::UnboundVariable(var.to_string()))?;
        if e >= m.len() {
            return Err(ModelError::UnknownElement(format!("#{e}")));
        }
        stack.push(e);
    }
    let compiled = Compiler { model: m, scope: free }.formula(phi)?;
    Ok(run(&compiled, m, &mut stack))
}

pub fn eval_closed(phi: &Formula, m: &FiniteStructure) -> Result<bool, ModelError> {
    eval_formula(phi, m, &Valuation::new())
}
