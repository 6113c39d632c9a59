use serde::Serialize;

use crate::formula::{Dialect, Formula, Rel, Sort, Term, Var};

use super::{Options, StratifyError};

/// Something that receives a type: a resolved variable, or a single term
/// occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NodeKind {
    Variable { name: String, sort: SortTag, bound: bool },
    Occurrence { term: String, site: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SortTag {
    Set,
    Class,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Node {
    pub label: String,
    #[serde(flatten)]
    pub kind: NodeKind,
}

/// `type(to) - type(from) = offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub offset: i64,
}

/// Difference constraints extracted from a formula.
///
/// Term sites are numbered atom by atom, left term before right term, each
/// term in preorder. Binder sites are numbered in preorder of quantifiers.
#[derive(Clone, Debug, Serialize)]
pub struct ConstraintGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// Node carrying the type of each term site.
    pub term_sites: Vec<usize>,
    /// Node carrying the type of each binder, when the binder is typed.
    pub binder_sites: Vec<Option<usize>>,
    /// Index of the edge each atom contributed, in atom order.
    pub atom_edges: Vec<usize>,
}

impl ConstraintGraph {
    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }
}

struct VarSlot {
    var: Var,
    node: Option<usize>,
}

struct Builder<'o> {
    dialect: Dialect,
    opts: &'o Options,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    term_sites: Vec<usize>,
    binder_sites: Vec<Option<usize>>,
    atom_edges: Vec<usize>,
    scope: Vec<usize>,
    slots: Vec<VarSlot>,
    free: Vec<usize>,
}

impl Builder<'_> {
    fn merged(&self, v: &Var) -> bool {
        match self.dialect {
            Dialect::LStar => v.sort == Sort::Class || self.opts.merge_set_vars,
            _ => true,
        }
    }

    fn label_for(&self, name: &str) -> String {
        let taken = self
            .nodes
            .iter()
            .filter(|n| matches!(&n.kind, NodeKind::Variable { name: m, .. } if m == name))
            .count();
        if taken == 0 {
            name.to_string()
        } else {
            format!("{name}#{}", taken + 1)
        }
    }

    fn new_var_node(&mut self, v: &Var, bound: bool) -> usize {
        let label = self.label_for(&v.name);
        let sort = match v.sort {
            Sort::Set => SortTag::Set,
            Sort::Class => SortTag::Class,
        };
        self.nodes.push(Node { label, kind: NodeKind::Variable { name: v.name.clone(), sort, bound } });
        self.nodes.len() - 1
    }

    fn occurrence_node(&mut self, t: &Term, site: usize) -> usize {
        self.nodes.push(Node {
            label: format!("{t}@{site}"),
            kind: NodeKind::Occurrence { term: t.to_string(), site },
        });
        self.nodes.len() - 1
    }

    /// Slot of the variable an occurrence refers to, creating a free slot on
    /// first sight.
    fn resolve(&mut self, v: &Var) -> usize {
        if let Some(&slot) = self.scope.iter().rev().find(|&&s| self.slots[s].var == *v) {
            return slot;
        }
        if let Some(&slot) = self.free.iter().find(|&&s| self.slots[s].var == *v) {
            return slot;
        }
        let node = if self.merged(v) { Some(self.new_var_node(v, false)) } else { None };
        self.slots.push(VarSlot { var: v.clone(), node });
        self.free.push(self.slots.len() - 1);
        self.slots.len() - 1
    }

    fn term(&mut self, t: &Term) -> usize {
        let site = self.term_sites.len();
        self.term_sites.push(usize::MAX);
        let node = match t {
            Term::Var(v) => {
                let slot = self.resolve(v);
                match self.slots[slot].node {
                    Some(n) => n,
                    None => self.occurrence_node(t, site),
                }
            }
            Term::Const(_) => self.occurrence_node(t, site),
            Term::Pair(a, b) => {
                let node = self.occurrence_node(t, site);
                self.term(a);
                self.term(b);
                // The pair shares its type with every class variable inside it.
                let mut seen = Vec::new();
                for v in t.vars() {
                    if v.sort != Sort::Class {
                        continue;
                    }
                    let slot = self.resolve(v);
                    let target = self.slots[slot].node.expect("class variables are merged");
                    if !seen.contains(&target) {
                        seen.push(target);
                        self.edges.push(Edge { from: node, to: target, offset: 0 });
                    }
                }
                node
            }
        };
        self.term_sites[site] = node;
        node
    }

    fn formula(&mut self, f: &Formula) {
        match f {
            Formula::Atom(a) => {
                let l = self.term(&a.left);
                let r = self.term(&a.right);
                let offset = match a.rel {
                    Rel::Eq => 0,
                    Rel::Mem => 1,
                };
                self.atom_edges.push(self.edges.len());
                self.edges.push(Edge { from: l, to: r, offset });
            }
            Formula::Not(p) => self.formula(p),
            Formula::Binary(_, l, r) => {
                self.formula(l);
                self.formula(r);
            }
            Formula::Quant(_, v, body) => {
                let node = if self.merged(v) { Some(self.new_var_node(v, true)) } else { None };
                self.binder_sites.push(node);
                self.slots.push(VarSlot { var: v.clone(), node });
                self.scope.push(self.slots.len() - 1);
                self.formula(body);
                self.scope.pop();
            }
        }
    }
}

/// Builds the difference-constraint graph of a plain or L* formula.
///
/// Plain variables are resolved to their binders and get one node each.
/// In L*, class variables are merged per binder, while set variables, `Vbar`
/// and pair terms get one node per occurrence; `merge_set_vars` merges set
/// variables too.
pub fn extract_constraints(f: &Formula, dialect: Dialect, opts: &Options) -> Result<ConstraintGraph, StratifyError> {
    if dialect == Dialect::Tst {
        return Err(StratifyError::TypedInput);
    }
    let mut b = Builder {
        dialect,
        opts,
        nodes: Vec::new(),
        edges: Vec::new(),
        term_sites: Vec::new(),
        binder_sites: Vec::new(),
        atom_edges: Vec::new(),
        scope: Vec::new(),
        slots: Vec::new(),
        free: Vec::new(),
    };
    b.formula(f);
    Ok(ConstraintGraph {
        nodes: b.nodes,
        edges: b.edges,
        term_sites: b.term_sites,
        binder_sites: b.binder_sites,
        atom_edges: b.atom_edges,
    })
}
