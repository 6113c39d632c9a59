//! Direct check of the stratification clauses against a formula, and the
//! exhaustive oracle built on it. Nothing here goes through the constraint
//! graph or the solver.

use serde::Serialize;

use crate::formula::{Dialect, Formula, Rel, Sort, Term, Var};

use super::graph::ConstraintGraph;
use super::solve::TypeAssignment;
use super::{Options, StratifyError};

/// Largest number of assignments the oracle will enumerate.
pub const ORACLE_CAP: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClauseViolation {
    Negative { site: usize },
    PairMismatch { pair: usize, var_site: usize },
    Inconsistent { name: String, first: usize, other: usize },
    Equality { atom: usize },
    Membership { atom: usize },
    Uncovered,
}

struct PairLink {
    pair: usize,
    var_site: usize,
}

/// The typing obligations of one formula, phrased over term sites and
/// binder sites.
pub struct ClauseChecker {
    term_count: usize,
    binder_count: usize,
    links: Vec<PairLink>,
    /// Per merged variable: name, binder site if bound, term sites.
    bindings: Vec<(String, Option<usize>, Vec<usize>)>,
    atoms: Vec<(Rel, usize, usize)>,
    /// Oracle entities: either a merged binding or a lone term site.
    entities: Vec<Entity>,
}

#[derive(Clone, Copy)]
enum Entity {
    Binding(usize),
    Site(usize),
}

struct Walk<'o> {
    dialect: Dialect,
    opts: &'o Options,
    term_count: usize,
    binder_count: usize,
    links: Vec<PairLink>,
    bindings: Vec<(String, Option<usize>, Vec<usize>)>,
    atoms: Vec<(Rel, usize, usize)>,
    scope: Vec<(Var, Option<usize>)>,
    free: Vec<(Var, Option<usize>)>,
    lone_sites: Vec<usize>,
    order: Vec<Entity>,
}

impl Walk<'_> {
    fn merges(&self, v: &Var) -> bool {
        self.dialect != Dialect::LStar || v.sort == Sort::Class || self.opts.merge_set_vars
    }

    fn binding_of(&mut self, v: &Var) -> Option<usize> {
        if let Some((_, b)) = self.scope.iter().rev().find(|(w, _)| w == v) {
            return *b;
        }
        if let Some((_, b)) = self.free.iter().find(|(w, _)| w == v) {
            return *b;
        }
        let b = if self.merges(v) {
            self.bindings.push((v.name.clone(), None, Vec::new()));
            self.order.push(Entity::Binding(self.bindings.len() - 1));
            Some(self.bindings.len() - 1)
        } else {
            None
        };
        self.free.push((v.clone(), b));
        b
    }

    fn term(&mut self, t: &Term) -> usize {
        let site = self.term_count;
        self.term_count += 1;
        match t {
            Term::Var(v) => match self.binding_of(v) {
                Some(b) => self.bindings[b].2.push(site),
                None => self.lone(site),
            },
            Term::Const(_) => self.lone(site),
            Term::Pair(a, b) => {
                self.lone(site);
                let mut stack = vec![(a.as_ref(), self.term(a)), (b.as_ref(), self.term(b))];
                // Class variables anywhere below the pair, with their sites.
                let mut below = Vec::new();
                while let Some((t, s)) = stack.pop() {
                    match t {
                        Term::Var(v) if v.sort == Sort::Class => below.push(s),
                        Term::Pair(l, r) => {
                            // children were numbered right after the parent
                            let ls = s + 1;
                            let rs = ls + term_size(l);
                            stack.push((l, ls));
                            stack.push((r, rs));
                        }
                        _ => {}
                    }
                }
                for var_site in below {
                    self.links.push(PairLink { pair: site, var_site });
                }
            }
        }
        site
    }

    fn lone(&mut self, site: usize) {
        self.lone_sites.push(site);
        self.order.push(Entity::Site(site));
    }

    fn formula(&mut self, f: &Formula) {
        match f {
            Formula::Atom(a) => {
                let l = self.term(&a.left);
                let r = self.term(&a.right);
                self.atoms.push((a.rel, l, r));
            }
            Formula::Not(p) => self.formula(p),
            Formula::Binary(_, l, r) => {
                self.formula(l);
                self.formula(r);
            }
            Formula::Quant(_, v, body) => {
                let site = self.binder_count;
                self.binder_count += 1;
                let b = if self.merges(v) {
                    self.bindings.push((v.name.clone(), Some(site), Vec::new()));
                    self.order.push(Entity::Binding(self.bindings.len() - 1));
                    Some(self.bindings.len() - 1)
                } else {
                    None
                };
                self.scope.push((v.clone(), b));
                self.formula(body);
                self.scope.pop();
            }
        }
    }
}

fn term_size(t: &Term) -> usize {
    match t {
        Term::Pair(a, b) => 1 + term_size(a) + term_size(b),
        _ => 1,
    }
}

impl ClauseChecker {
    pub fn new(f: &Formula, dialect: Dialect, opts: &Options) -> Result<Self, StratifyError> {
        if dialect == Dialect::Tst {
            return Err(StratifyError::TypedInput);
        }
        let mut w = Walk {
            dialect,
            opts,
            term_count: 0,
            binder_count: 0,
            links: Vec::new(),
            bindings: Vec::new(),
            atoms: Vec::new(),
            scope: Vec::new(),
            free: Vec::new(),
            lone_sites: Vec::new(),
            order: Vec::new(),
        };
        w.formula(f);
        Ok(ClauseChecker {
            term_count: w.term_count,
            binder_count: w.binder_count,
            links: w.links,
            bindings: w.bindings,
            atoms: w.atoms,
            entities: w.order,
        })
    }

    /// Number of independently typed entities.
    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    /// Checks every clause for the given site types.
    pub fn check(&self, term_types: &[i64], binder_types: &[Option<i64>]) -> Result<(), ClauseViolation> {
        if term_types.len() != self.term_count || binder_types.len() != self.binder_count {
            return Err(ClauseViolation::Uncovered);
        }
        if let Some(site) = term_types.iter().position(|&t| t < 0) {
            return Err(ClauseViolation::Negative { site });
        }
        for link in &self.links {
            if term_types[link.pair] != term_types[link.var_site] {
                return Err(ClauseViolation::PairMismatch { pair: link.pair, var_site: link.var_site });
            }
        }
        for (name, binder, sites) in &self.bindings {
            let mut types = sites.iter().map(|&s| (s, term_types[s]));
            let first = match binder {
                Some(b) => match binder_types[*b] {
                    Some(t) => Some((usize::MAX, t)),
                    None => return Err(ClauseViolation::Uncovered),
                },
                None => types.next(),
            };
            if let Some((first_site, t)) = first {
                if let Some((other, _)) = types.find(|&(_, u)| u != t) {
                    return Err(ClauseViolation::Inconsistent { name: name.clone(), first: first_site, other });
                }
            }
        }
        for (i, &(rel, l, r)) in self.atoms.iter().enumerate() {
            match rel {
                Rel::Eq if term_types[l] != term_types[r] => return Err(ClauseViolation::Equality { atom: i }),
                Rel::Mem if term_types[l] + 1 != term_types[r] => return Err(ClauseViolation::Membership { atom: i }),
                _ => {}
            }
        }
        Ok(())
    }

    /// Checks an assignment produced for `graph` by reading each site's type
    /// off its node.
    pub fn check_assignment(&self, graph: &ConstraintGraph, a: &TypeAssignment) -> Result<(), ClauseViolation> {
        let terms: Vec<i64> = graph.term_sites.iter().map(|&n| a.types[n]).collect();
        let binders: Vec<Option<i64>> = graph.binder_sites.iter().map(|n| n.map(|n| a.types[n])).collect();
        self.check(&terms, &binders)
    }

    fn expand(&self, entity_types: &[i64], terms: &mut [i64], binders: &mut [Option<i64>]) {
        for (e, &t) in self.entities.iter().zip(entity_types) {
            match *e {
                Entity::Site(s) => terms[s] = t,
                Entity::Binding(b) => {
                    let (_, binder, sites) = &self.bindings[b];
                    if let Some(bs) = binder {
                        binders[*bs] = Some(t);
                    }
                    for &s in sites {
                        terms[s] = t;
                    }
                }
            }
        }
    }
}

/// Result of exhaustive enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub stratified: bool,
    pub entities: usize,
    pub bound: i64,
    pub enumerated: u64,
}

/// Tries every assignment of types `0..=bound` to the formula's entities.
///
/// With `n` entities, `bound = n - 1` is complete: any solution can be
/// compressed so that each component spans at most `n` consecutive types.
pub fn brute_force_oracle(f: &Formula, dialect: Dialect, opts: &Options, bound: i64) -> Result<OracleVerdict, StratifyError> {
    let checker = ClauseChecker::new(f, dialect, opts)?;
    let n = checker.entity_count();
    let base = (bound.max(0) + 1) as u128;
    let size = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(base)).unwrap_or(u128::MAX);
    if size > ORACLE_CAP {
        return Err(StratifyError::FeasibilityCap { what: "oracle assignments", size, cap: ORACLE_CAP });
    }
    let mut entity_types = vec![0i64; n];
    let mut terms = vec![0i64; checker.term_count];
    let mut binders = vec![None; checker.binder_count];
    let mut enumerated = 0u64;
    loop {
        enumerated += 1;
        checker.expand(&entity_types, &mut terms, &mut binders);
        if checker.check(&terms, &binders).is_ok() {
            return Ok(OracleVerdict { stratified: true, entities: n, bound, enumerated });
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return Ok(OracleVerdict { stratified: false, entities: n, bound, enumerated });
            }
            if entity_types[i] < bound {
                entity_types[i] += 1;
                break;
            }
            entity_types[i] = 0;
            i += 1;
        }
    }
}

/// The oracle with a complete bound, searched depth first.
///
/// Entities are typed in order from `0..=bound`, and a branch is abandoned
/// as soon as an atom or pair link whose sites are all typed fails; each
/// complete assignment is then checked against every clause. The bound is
/// `min(entities - 1, membership atoms)`: types along any chain of atoms
/// differ by at most one per membership atom, so shifting each connected
/// part of a solution down to 0 keeps it within that range.
pub fn oracle_complete(f: &Formula, dialect: Dialect, opts: &Options) -> Result<OracleVerdict, StratifyError> {
    let checker = ClauseChecker::new(f, dialect, opts)?;
    let n = checker.entity_count();
    let mems = checker.atoms.iter().filter(|a| a.0 == Rel::Mem).count();
    let bound = (n.saturating_sub(1)).min(mems) as i64;
    let mut search = Search::new(&checker, bound);
    let stratified = search.run(0)?;
    Ok(OracleVerdict { stratified, entities: n, bound, enumerated: search.visited })
}

struct Search<'c> {
    checker: &'c ClauseChecker,
    bound: i64,
    entity_of_site: Vec<usize>,
    /// Site pairs that must be equal or one apart, keyed by the last entity
    /// they mention.
    due: Vec<Vec<(usize, usize, i64)>>,
    types: Vec<i64>,
    terms: Vec<i64>,
    binders: Vec<Option<i64>>,
    visited: u64,
}

impl<'c> Search<'c> {
    fn new(checker: &'c ClauseChecker, bound: i64) -> Self {
        let mut entity_of_site = vec![usize::MAX; checker.term_count];
        for (e, ent) in checker.entities.iter().enumerate() {
            match *ent {
                Entity::Site(s) => entity_of_site[s] = e,
                Entity::Binding(b) => {
                    for &s in &checker.bindings[b].2 {
                        entity_of_site[s] = e;
                    }
                }
            }
        }
        let mut due = vec![Vec::new(); checker.entities.len()];
        let diffs = checker
            .atoms
            .iter()
            .map(|&(rel, l, r)| (l, r, if rel == Rel::Mem { 1 } else { 0 }))
            .chain(checker.links.iter().map(|k| (k.var_site, k.pair, 0)));
        for (l, r, d) in diffs {
            let last = entity_of_site[l].max(entity_of_site[r]);
            due[last].push((l, r, d));
        }
        Search {
            checker,
            bound,
            entity_of_site,
            due,
            types: vec![0; checker.entities.len()],
            terms: vec![0; checker.term_count],
            binders: vec![None; checker.binder_count],
            visited: 0,
        }
    }

    fn run(&mut self, e: usize) -> Result<bool, StratifyError> {
        if e == self.types.len() {
            self.checker.expand(&self.types, &mut self.terms, &mut self.binders);
            return Ok(self.checker.check(&self.terms, &self.binders).is_ok());
        }
        for t in 0..=self.bound {
            self.visited += 1;
            if u128::from(self.visited) > ORACLE_CAP {
                return Err(StratifyError::FeasibilityCap { what: "oracle search", size: self.visited.into(), cap: ORACLE_CAP });
            }
            self.types[e] = t;
            let ok = self.due[e].iter().all(|&(l, r, d)| {
                self.types[self.entity_of_site[r]] - self.types[self.entity_of_site[l]] == d
            });
            if ok && self.run(e + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
