//! Formula corpora for sweeps and randomized checks.
//!
//! All generators take an explicit RNG; [`rng`] gives the seeded one used by
//! the test suites and the command line.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::{Connective, Formula, Quantifier, Rel, Term, Var};
use crate::stratify::{to_tst, StratifyError};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const NAMES: [&str; 8] = ["x", "y", "z", "w", "u", "v", "s", "t"];

fn var(i: usize) -> Var {
    match NAMES.get(i) {
        Some(n) => Var::set(*n),
        None => Var::set(format!("x{i}")),
    }
}

fn atom(rel: Rel, a: &Var, b: &Var) -> Formula {
    Formula::atom(rel, Term::var(a.clone()), Term::var(b.clone()))
}

/// Every atom over the first `vars` variables, membership first.
pub fn atom_pool(vars: usize) -> Vec<Formula> {
    let mut out = Vec::with_capacity(2 * vars * vars);
    for rel in [Rel::Mem, Rel::Eq] {
        for a in 0..vars {
            for b in 0..vars {
                out.push(atom(rel, &var(a), &var(b)));
            }
        }
    }
    out
}

/// Nondecreasing index sequences of length `1..=max_len` over `0..pool`,
/// i.e. every nonempty multiset of at most `max_len` atoms.
pub fn multisets(pool: usize, max_len: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=max_len).flat_map(move |len| {
        let mut cur: Option<Vec<usize>> = if pool == 0 { None } else { Some(vec![0; len]) };
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let c = cur.as_mut().unwrap();
            let mut i = len;
            loop {
                if i == 0 {
                    cur = None;
                    break;
                }
                i -= 1;
                if c[i] + 1 < pool {
                    let v = c[i] + 1;
                    for slot in &mut c[i..] {
                        *slot = v;
                    }
                    break;
                }
            }
            Some(out)
        })
    })
}

/// Shape parameters for [`dress`].
#[derive(Clone, Copy, Debug)]
pub struct Dressing {
    pub negation: f64,
    pub quantifier: f64,
    pub vars: usize,
}

impl Default for Dressing {
    fn default() -> Self {
        Dressing { negation: 0.2, quantifier: 0.3, vars: 4 }
    }
}

const CONNECTIVES: [Connective; 4] = [Connective::And, Connective::Or, Connective::Implies, Connective::Iff];

/// Joins the atoms, in shuffled order, with random connectives, and wraps
/// random subformulas in negations and quantifiers over the first
/// `d.vars` variables.
pub fn dress<R: Rng>(rng: &mut R, atoms: &[Formula], d: &Dressing) -> Formula {
    let mut atoms = atoms.to_vec();
    atoms.shuffle(rng);
    build(rng, &atoms, d)
}

fn build<R: Rng>(rng: &mut R, atoms: &[Formula], d: &Dressing) -> Formula {
    let mut f = if atoms.len() == 1 {
        atoms[0].clone()
    } else {
        let split = rng.gen_range(1..atoms.len());
        let c = *CONNECTIVES.choose(rng).unwrap();
        Formula::binary(c, build(rng, &atoms[..split], d), build(rng, &atoms[split..], d))
    };
    if rng.gen_bool(d.negation) {
        f = Formula::not(f);
    }
    if d.vars > 0 && rng.gen_bool(d.quantifier) {
        let q = if rng.gen_bool(0.5) { Quantifier::Forall } else { Quantifier::Exists };
        f = Formula::Quant(q, var(rng.gen_range(0..d.vars)), Box::new(f));
    }
    f
}

/// The exhaustive plain corpus: one dressed formula per multiset of at most
/// `max_atoms` atoms over `vars` variables.
pub fn exhaustive_plain(vars: usize, max_atoms: usize, seed: u64) -> impl Iterator<Item = Formula> {
    let pool = atom_pool(vars);
    let mut r = rng(seed);
    let d = Dressing { vars, ..Dressing::default() };
    multisets(pool.len(), max_atoms).map(move |ms| {
        let atoms: Vec<Formula> = ms.iter().map(|&i| pool[i].clone()).collect();
        dress(&mut r, &atoms, &d)
    })
}

/// A random closed plain formula with quantifier depth at most `max_depth`
/// and at most `max_atoms` atoms, over the first `vars` variable names.
pub fn random_closed<R: Rng>(rng: &mut R, vars: usize, max_depth: usize, max_atoms: usize) -> Formula {
    let mut budget = max_atoms.max(1);
    closed(rng, vars, max_depth, &mut Vec::new(), &mut budget)
}

fn closed<R: Rng>(rng: &mut R, vars: usize, depth: usize, bound: &mut Vec<Var>, budget: &mut usize) -> Formula {
    if depth > 0 && (bound.is_empty() || rng.gen_bool(0.3)) {
        let v = var(rng.gen_range(0..vars));
        bound.push(v.clone());
        let body = closed(rng, vars, depth - 1, bound, budget);
        bound.pop();
        let q = if rng.gen_bool(0.5) { Quantifier::Forall } else { Quantifier::Exists };
        return Formula::Quant(q, v, Box::new(body));
    }
    if bound.is_empty() {
        // depth exhausted before any binder: a closed tautology over nothing
        // is not expressible, so bind one variable regardless of depth
        let v = var(0);
        return Formula::forall(v.clone(), atom(Rel::Eq, &v, &v));
    }
    if *budget > 1 && rng.gen_bool(0.5) {
        *budget -= 1;
        let left = closed(rng, vars, depth, bound, budget);
        let right = closed(rng, vars, depth, bound, budget);
        return Formula::binary(*CONNECTIVES.choose(rng).unwrap(), left, right);
    }
    let a = bound.choose(rng).unwrap().clone();
    let b = bound.choose(rng).unwrap().clone();
    let rel = if rng.gen_bool(0.7) { Rel::Mem } else { Rel::Eq };
    let f = atom(rel, &a, &b);
    if rng.gen_bool(0.25) {
        Formula::not(f)
    } else {
        f
    }
}

/// A random plain formula that is stratified by construction: every
/// variable gets a type in `0..4` and only type-respecting atoms are drawn.
pub fn random_stratified<R: Rng>(rng: &mut R, max_vars: usize, max_atoms: usize) -> Formula {
    let n = rng.gen_range(1..=max_vars.max(1));
    let types: Vec<u32> = (0..n).map(|_| rng.gen_range(0..4)).collect();
    let count = rng.gen_range(1..=max_atoms.max(1));
    let atoms: Vec<Formula> = (0..count)
        .map(|_| {
            let a = rng.gen_range(0..n);
            let above: Vec<usize> = (0..n).filter(|&b| types[b] == types[a] + 1).collect();
            if !above.is_empty() && rng.gen_bool(0.7) {
                atom(Rel::Mem, &var(a), &var(*above.choose(rng).unwrap()))
            } else {
                let same: Vec<usize> = (0..n).filter(|&b| types[b] == types[a]).collect();
                atom(Rel::Eq, &var(a), &var(*same.choose(rng).unwrap()))
            }
        })
        .collect();
    dress(rng, &atoms, &Dressing { vars: n, ..Dressing::default() })
}

/// A random plain formula over `vars` variables, stratified or not.
pub fn random_plain<R: Rng>(rng: &mut R, vars: usize, max_atoms: usize) -> Formula {
    let pool = atom_pool(vars.max(1));
    let count = rng.gen_range(1..=max_atoms.max(1));
    let atoms: Vec<Formula> = (0..count).map(|_| pool.choose(rng).unwrap().clone()).collect();
    dress(rng, &atoms, &Dressing { vars: vars.max(1), ..Dressing::default() })
}

/// A random TST formula: a stratified plain formula with its solved types.
pub fn random_tst<R: Rng>(rng: &mut R, max_vars: usize, max_atoms: usize) -> Result<Formula, StratifyError> {
    to_tst(&random_stratified(rng, max_vars, max_atoms))
}
