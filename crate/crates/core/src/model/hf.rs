use std::collections::{BTreeMap, HashMap};

use crate::formula::{fresh_name, Formula, Term};
use crate::transform::relativize;

use super::{eval_formula, FiniteStructure, ModelError, Valuation};

/// Largest `n` for which `V_n` is materialized.
pub const MAX_VN: usize = 5;

/// `|V_n|`: 0, 1, 2, 4, 16, 65536.
pub fn ackermann_size(n: usize) -> Result<usize, ModelError> {
    if n > MAX_VN {
        return Err(ModelError::TooLarge { n });
    }
    Ok((0..n).fold(0usize, |size, _| 1usize << size))
}

/// Ackermann code of the set `V_m` itself, an element of `V_{m+1}`.
pub fn vn_code(m: usize) -> Result<usize, ModelError> {
    if m >= MAX_VN {
        return Err(ModelError::TooLarge { n: m + 1 });
    }
    Ok((1usize << ackermann_size(m)?) - 1)
}

/// The hereditarily finite sets of rank below `n`, labelled by code.
pub fn build_vn(n: usize) -> Result<FiniteStructure, ModelError> {
    let size = ackermann_size(n)?;
    let labels = (0..size).map(|c| c.to_string()).collect();
    let mut membership = Vec::new();
    for b in 0..size {
        let mut bits = b;
        while bits != 0 {
            let a = bits.trailing_zeros() as usize;
            membership.push((a, b));
            bits &= bits - 1;
        }
    }
    FiniteStructure::new(labels, &membership, BTreeMap::new())
}

fn tuples(base: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if arity == 0 { 1 } else { base.checked_pow(arity as u32).unwrap_or(usize::MAX) };
    (0..total).map(move |mut i| {
        (0..arity)
            .map(|_| {
                let d = i % base;
                i /= base;
                d
            })
            .collect()
    })
}

/// Whether `V_m` reflects every formula of `phis` inside `V_n`: relativized
/// and unrelativized values agree for all parameters drawn from `V_m`.
pub fn reflects_at(phis: &[Formula], n: usize, m: usize) -> Result<bool, ModelError> {
    if m >= n {
        return Ok(true);
    }
    let mut ambient = build_vn(n)?;
    let small = ackermann_size(m)?;
    for phi in phis {
        let name = fresh_name("S", &phi.names());
        ambient.set_constant(name.clone(), vn_code(m)?);
        let rel = relativize(phi, &Term::constant(name))?;
        let free = phi.free_vars();
        for tuple in tuples(small, free.len()) {
            let v: Valuation = free.iter().map(|x| x.name.clone()).zip(tuple).collect();
            if eval_formula(&rel, &ambient, &v)? != eval_formula(phi, &ambient, &v)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Least `m <= n` such that `V_m` reflects `phis` inside `V_n`. With no
/// parameters in `V_0`, a parameterized formula is reflected there vacuously.
pub fn reflect_search(phis: &[Formula], n: usize) -> Result<usize, ModelError> {
    ackermann_size(n)?;
    for m in 0..n {
        if reflects_at(phis, n, m)? {
            return Ok(m);
        }
    }
    Ok(n)
}

/// `(|{{y} : y in a}|, |P(a)|)`, requiring every singleton and every subset
/// to be present in `m`.
pub fn singleton_image_check(m: &FiniteStructure, a: usize) -> Result<(usize, usize), ModelError> {
    let index: HashMap<Vec<usize>, usize> =
        (0..m.len()).filter(|&e| !m.is_atom(e)).map(|e| (m.members(e).collect(), e)).collect();
    let ys: Vec<usize> = m.members(a).collect();
    let mut singletons: Vec<usize> = ys
        .iter()
        .map(|&y| index.get(&vec![y]).copied().ok_or_else(|| ModelError::SingletonMissing(m.label(y).to_string())))
        .collect::<Result<_, _>>()?;
    singletons.sort_unstable();
    singletons.dedup();
    if ys.len() >= usize::BITS as usize {
        return Err(ModelError::TooLarge { n: ys.len() });
    }
    let mut subsets = 0;
    for mask in 0usize..1 << ys.len() {
        let subset: Vec<usize> = ys.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &y)| y).collect();
        if !index.contains_key(&subset) {
            return Err(ModelError::PowersetMissing {
                element: m.label(a).to_string(),
                subset: subset.iter().map(|&e| m.label(e).to_string()).collect(),
            });
        }
        subsets += 1;
    }
    Ok((singletons.len(), subsets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Dialect};
    use crate::model::eval_closed;

    fn p(s: &str) -> Formula {
        parse(s, Dialect::Plain).unwrap()
    }

    #[test]
    fn sizes() {
        let sizes: Vec<usize> = (0..=5).map(|n| ackermann_size(n).unwrap()).collect();
        assert_eq!(sizes, [0, 1, 2, 4, 16, 65536]);
        assert_eq!(build_vn(4).unwrap().len(), 16);
        assert_eq!(build_vn(6), Err(ModelError::TooLarge { n: 6 }));
    }

    #[test]
    fn small_levels() {
        assert!(build_vn(0).unwrap().is_empty());
        let v2 = build_vn(2).unwrap();
        assert_eq!(v2.labels(), ["0", "1"]);
        assert_eq!(v2.membership(), [(0, 1)]);
    }

    #[test]
    fn vn_codes_are_the_levels() {
        let v5 = build_vn(5).unwrap();
        for m in 0..5 {
            let code = vn_code(m).unwrap();
            let members: Vec<usize> = v5.members(code).collect();
            assert_eq!(members, (0..ackermann_size(m).unwrap()).collect::<Vec<_>>());
            assert!(v5.is_transitive(code));
        }
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(reflect_search(&[p("exists z. forall y. ~(y in z)")], 4).unwrap(), 1);
        assert_eq!(reflect_search(&[], 4).unwrap(), 0);
        assert_eq!(reflect_search(&[p("exists y. x in y")], 4).unwrap(), 0);
    }

    /// Reflection decided through the substructure on `V_m` instead of
    /// through relativization.
    fn reflects_by_restriction(phi: &Formula, n: usize, m: usize) -> bool {
        let ambient = build_vn(n).unwrap();
        let sub = ambient.restrict(&(0..ackermann_size(m).unwrap()).collect::<Vec<_>>());
        eval_closed(phi, &sub).unwrap() == eval_closed(phi, &ambient).unwrap()
    }

    #[test]
    fn reflection_agrees_with_restriction() {
        for text in [
            "exists z. forall y. ~(y in z)",
            "forall x. exists y. x in y",
            "exists x. exists y. (x in y & exists z. (z in y & ~(z = x)))",
            "forall x. forall y. exists z. (x in z & y in z)",
        ] {
            let phi = p(text);
            for m in 0..=4 {
                assert_eq!(reflects_at(std::slice::from_ref(&phi), 4, m).unwrap(), reflects_by_restriction(&phi, 4, m), "{text} at {m}");
            }
        }
    }

    #[test]
    fn cantor_examples() {
        let v3 = build_vn(3).unwrap();
        assert_eq!(singleton_image_check(&v3, 0).unwrap(), (0, 1));
        assert_eq!(singleton_image_check(&v3, 1).unwrap(), (1, 2));
        let v4 = build_vn(4).unwrap();
        assert_eq!(singleton_image_check(&v4, 3).unwrap(), (2, 4));
    }

    #[test]
    fn cantor_missing_pieces() {
        // drop {{∅}}
        let m = build_vn(3).unwrap().restrict(&[0, 1, 3]);
        assert_eq!(singleton_image_check(&m, 2), Err(ModelError::SingletonMissing("1".into())));
        let m = build_vn(4).unwrap().restrict(&[0, 1, 2, 4, 7]);
        assert_eq!(
            singleton_image_check(&m, 4),
            Err(ModelError::PowersetMissing { element: "7".into(), subset: vec!["0".into(), "1".into()] })
        );
    }
}
