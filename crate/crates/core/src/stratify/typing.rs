use crate::formula::{Formula, Term};

use super::graph::ConstraintGraph;
use super::solve::TypeAssignment;
use super::StratifyError;

/// Writes the solved types onto a plain formula, producing a TST formula.
///
/// `graph` must be the plain-dialect graph of `f` and `assignment` a
/// solution of it.
pub fn type_of_occurrences(
    assignment: &TypeAssignment,
    graph: &ConstraintGraph,
    f: &Formula,
) -> Result<Formula, StratifyError> {
    if assignment.types.len() != graph.nodes.len() || !assignment.satisfies(graph) {
        return Err(StratifyError::AssignmentMismatch);
    }
    let mut cursor = Cursor { assignment, graph, term: 0, binder: 0 };
    let out = cursor.formula(f)?;
    if cursor.term != graph.term_sites.len() || cursor.binder != graph.binder_sites.len() {
        return Err(StratifyError::AssignmentMismatch);
    }
    Ok(out)
}

struct Cursor<'a> {
    assignment: &'a TypeAssignment,
    graph: &'a ConstraintGraph,
    term: usize,
    binder: usize,
}

impl Cursor<'_> {
    fn ty(&self, node: usize) -> Result<u32, StratifyError> {
        u32::try_from(self.assignment.types[node]).map_err(|_| StratifyError::AssignmentMismatch)
    }

    fn term(&mut self, t: &Term) -> Result<Term, StratifyError> {
        let node = *self.graph.term_sites.get(self.term).ok_or(StratifyError::AssignmentMismatch)?;
        self.term += 1;
        match t {
            Term::Var(v) => Ok(Term::Var(v.with_type(Some(self.ty(node)?)))),
            Term::Const(c) => Err(StratifyError::Untypable(format!("constant `{c}` has no TST counterpart"))),
            Term::Pair(..) => Err(StratifyError::Untypable("pair terms have no TST counterpart".into())),
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<Formula, StratifyError> {
        Ok(match f {
            Formula::Atom(a) => {
                let l = self.term(&a.left)?;
                let r = self.term(&a.right)?;
                Formula::atom(a.rel, l, r)
            }
            Formula::Not(p) => Formula::not(self.formula(p)?),
            Formula::Binary(c, l, r) => {
                let l = self.formula(l)?;
                Formula::binary(*c, l, self.formula(r)?)
            }
            Formula::Quant(q, v, body) => {
                let node = self
                    .graph
                    .binder_sites
                    .get(self.binder)
                    .copied()
                    .flatten()
                    .ok_or(StratifyError::AssignmentMismatch)?;
                self.binder += 1;
                let v = v.with_type(Some(self.ty(node)?));
                Formula::Quant(*q, v, Box::new(self.formula(body)?))
            }
        })
    }
}
