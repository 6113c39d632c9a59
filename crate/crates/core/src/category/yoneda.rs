use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CategoryError, FinCategory};

/// A functor from a finite category into finite sets: object `X` goes to
/// `{0, .., sizes[X]-1}` and morphism `f` to the function `maps[f]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunctor<'c> {
    pub category: &'c FinCategory,
    sizes: Vec<usize>,
    maps: Vec<Vec<usize>>,
}

impl<'c> SetFunctor<'c> {
    pub fn new(category: &'c FinCategory, sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self, CategoryError> {
        if sizes.len() != category.num_objects() || maps.len() != category.num_morphisms() {
            return Err(CategoryError::Invalid("set functor: maps do not cover the category"));
        }
        let f = SetFunctor { category, sizes, maps };
        if f.violations().is_empty() {
            Ok(f)
        } else {
            Err(CategoryError::Invalid("set functor"))
        }
    }

    pub fn size(&self, x: usize) -> usize {
        self.sizes[x]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `F(f)(e)`.
    pub fn apply(&self, f: usize, e: usize) -> usize {
        self.maps[f][e]
    }

    /// Names of the broken functor laws, empty for a functor.
    pub fn violations(&self) -> Vec<String> {
        let c = self.category;
        let mut out = Vec::new();
        for f in 0..c.num_morphisms() {
            let (d, k) = (self.sizes[c.dom(f)], self.sizes[c.cod(f)]);
            if self.maps[f].len() != d || self.maps[f].iter().any(|&v| v >= k) {
                out.push(format!("{} is not a function F(dom) -> F(cod)", c.morphism_name(f)));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for x in 0..c.num_objects() {
            if self.maps[c.identity(x)].iter().enumerate().any(|(i, &v)| i != v) {
                out.push(format!("identity of {} is not sent to an identity", c.object_name(x)));
            }
        }
        for f in 0..c.num_morphisms() {
            for g in 0..c.num_morphisms() {
                let Some(h) = c.composite(g, f) else { continue };
                if (0..self.sizes[c.dom(f)]).any(|e| self.maps[h][e] != self.maps[g][self.maps[f][e]]) {
                    out.push(format!("composite {} after {} is not preserved", c.morphism_name(g), c.morphism_name(f)));
                }
            }
        }
        out
    }

    pub fn from_json(j: &SetFunctorJson, category: &'c FinCategory) -> Result<Self, CategoryError> {
        let unknown = |kind, name: &str| CategoryError::Unknown { kind, name: name.to_string() };
        for k in j.sets.keys() {
            category.object_index(k).ok_or_else(|| unknown("object", k))?;
        }
        for k in j.maps.keys() {
            category.morphism_index(k).ok_or_else(|| unknown("morphism", k))?;
        }
        let sets: Vec<&Vec<String>> = category
            .objects()
            .iter()
            .map(|o| j.sets.get(o).ok_or_else(|| unknown("object image", o)))
            .collect::<Result<_, _>>()?;
        let maps = (0..category.num_morphisms())
            .map(|f| {
                let (d, k) = (sets[category.dom(f)], sets[category.cod(f)]);
                match j.maps.get(category.morphism_name(f)) {
                    Some(images) => images
                        .iter()
                        .map(|v| k.iter().position(|e| e == v).ok_or_else(|| unknown("element", v)))
                        .collect::<Result<Vec<_>, _>>(),
                    None if category.is_identity(f) => Ok((0..d.len()).collect()),
                    None => Err(unknown("morphism image", category.morphism_name(f))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        SetFunctor::new(category, sets.iter().map(|s| s.len()).collect(), maps)
    }
}

/// Wire format: the category file, the set of each object, and the image
/// list of each morphism in the order of its domain's elements. Identity
/// morphisms may be omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFunctorJson {
    pub category: String,
    pub sets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<String>>,
}

/// `C(A, -)`: element `i` of `F(X)` is the `i`-th morphism of `hom(A, X)`,
/// and `F(g)` post-composes with `g`.
pub fn hom_functor(c: &FinCategory, a: usize) -> SetFunctor<'_> {
    let sizes = (0..c.num_objects()).map(|x| c.hom(a, x).len()).collect();
    let maps = (0..c.num_morphisms())
        .map(|g| {
            let target = c.hom(a, c.cod(g));
            c.hom(a, c.dom(g))
                .iter()
                .map(|&f| target.iter().position(|&h| h == c.comp(g, f)).expect("composite lies in the hom-set"))
                .collect()
        })
        .collect();
    SetFunctor { category: c, sizes, maps }
}

/// Components `α_X : F(X) -> G(X)`, one list per object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NatTransformation {
    pub components: Vec<Vec<usize>>,
}

impl NatTransformation {
    /// Every naturality square `α_Y ∘ F(g) = G(g) ∘ α_X` commutes.
    pub fn is_natural(&self, f: &SetFunctor, g: &SetFunctor) -> bool {
        let c = f.category;
        (0..c.num_morphisms()).all(|m| {
            let (x, y) = (c.dom(m), c.cod(m));
            (0..f.size(x)).all(|e| self.components[y][f.apply(m, e)] == g.apply(m, self.components[x][e]))
        })
    }
}

/// Cell-wise backtracking over component values: each cell `(X, e)` takes a
/// value in `G(X)`, and a naturality square is checked as soon as both of
/// its cells are filled.
pub fn for_each_nat(f: &SetFunctor, g: &SetFunctor, mut visit: impl FnMut(&[usize], &[usize])) -> Result<(), CategoryError> {
    let c = f.category;
    if !(std::ptr::eq(c, g.category) || c == g.category) {
        return Err(CategoryError::NotParallel);
    }
    let mut offset = vec![0; c.num_objects() + 1];
    for x in 0..c.num_objects() {
        offset[x + 1] = offset[x] + f.size(x);
    }
    let cells = offset[c.num_objects()];
    let mut object_of = Vec::with_capacity(cells);
    for x in 0..c.num_objects() {
        object_of.extend(std::iter::repeat_n(x, f.size(x)));
    }
    // (other cell, morphism, this cell is the source) checked at the later cell
    let mut checks: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); cells];
    for m in 0..c.num_morphisms() {
        if c.is_identity(m) {
            continue;
        }
        let (x, y) = (c.dom(m), c.cod(m));
        for e in 0..f.size(x) {
            let a = offset[x] + e;
            let b = offset[y] + f.apply(m, e);
            if a >= b {
                checks[a].push((b, m, true));
            } else {
                checks[b].push((a, m, false));
            }
        }
    }
    let mut values = vec![0; cells];
    fn go(
        at: usize,
        values: &mut [usize],
        object_of: &[usize],
        checks: &[Vec<(usize, usize, bool)>],
        g: &SetFunctor,
        offset: &[usize],
        visit: &mut impl FnMut(&[usize], &[usize]),
    ) {
        if at == values.len() {
            visit(values, offset);
            return;
        }
        for v in 0..g.size(object_of[at]) {
            values[at] = v;
            // source cell a, target cell b: values[b] == G(m)(values[a])
            let ok = checks[at].iter().all(|&(other, m, at_is_source)| {
                if at_is_source {
                    values[other] == g.apply(m, values[at])
                } else {
                    values[at] == g.apply(m, values[other])
                }
            });
            if ok {
                go(at + 1, values, object_of, checks, g, offset, visit);
            }
        }
    }
    go(0, &mut values, &object_of, &checks, g, &offset, &mut visit);
    Ok(())
}

/// All natural transformations `F => G`, in lexicographic order.
pub fn nat_transformations(f: &SetFunctor, g: &SetFunctor) -> Result<Vec<NatTransformation>, CategoryError> {
    let mut out = Vec::new();
    for_each_nat(f, g, |values, offset| {
        out.push(NatTransformation { components: offset.windows(2).map(|w| values[w[0]..w[1]].to_vec()).collect() });
    })?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct YonedaReport {
    pub object: String,
    /// `|F(A)|`.
    pub elements: usize,
    /// `|Nat(C(A,-), F)|` by enumeration.
    pub transformations: usize,
    pub images_natural: bool,
    pub injective: bool,
    pub surjective: bool,
    /// Evaluation at `id_A` inverts `yon_A`.
    pub inverse_is_evaluation: bool,
    pub holds: bool,
}

/// Builds `yon_A(x) = (f ↦ F(f)(x))` for every `x` in `F(A)` and compares
/// it with the enumerated natural transformations `C(A,-) => F`.
pub fn yoneda_check(f: &SetFunctor, a: usize) -> YonedaReport {
    let c = f.category;
    let hom = hom_functor(c, a);
    let mut nats: Vec<Vec<usize>> = Vec::new();
    for_each_nat(&hom, f, |values, _| nats.push(values.to_vec())).expect("hom functor is parallel");
    let id_pos = c.hom(a, a).iter().position(|&h| h == c.identity(a)).expect("identity in its hom-set");
    let mut images: Vec<Vec<usize>> = Vec::with_capacity(f.size(a));
    let mut images_natural = true;
    for x in 0..f.size(a) {
        let components: Vec<Vec<usize>> =
            (0..c.num_objects()).map(|y| c.hom(a, y).iter().map(|&h| f.apply(h, x)).collect()).collect();
        let nat = NatTransformation { components };
        images_natural &= nat.is_natural(&hom, f);
        images.push(nat.components.concat());
    }
    let mut distinct = images.clone();
    distinct.sort();
    distinct.dedup();
    let injective = distinct.len() == images.len();
    nats.sort();
    let surjective = nats.iter().all(|n| distinct.binary_search(n).is_ok());
    let offset_a: usize = (0..a).map(|y| c.hom(a, y).len()).sum();
    let inverse_is_evaluation =
        nats.iter().all(|n| images.get(n[offset_a + id_pos]).is_some_and(|img| img == n));
    YonedaReport {
        object: c.object_name(a).to_string(),
        elements: f.size(a),
        transformations: nats.len(),
        images_natural,
        injective,
        surjective,
        inverse_is_evaluation,
        holds: images_natural && injective && surjective && inverse_is_evaluation && nats.len() == f.size(a),
    }
}

/// Visits every functor `c -> FinSet` with each `F(X)` of size at most
/// `max_size`, by sizes and then lexicographically by function tables.
pub fn set_functors(c: &FinCategory, max_size: usize, mut visit: impl FnMut(&SetFunctor)) {
    let n = c.num_objects();
    let m = c.num_morphisms();
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); m];
    for f in 0..m {
        for g in 0..m {
            if let Some(h) = c.composite(g, f) {
                if !c.is_identity(f) && !c.is_identity(g) {
                    let last = if c.is_identity(h) { f.max(g) } else { f.max(g).max(h) };
                    checks[last].push((g, f, h));
                }
            }
        }
    }
    let order: Vec<usize> = (0..m).filter(|&f| !c.is_identity(f)).collect();
    let mut sizes = vec![0; n];
    loop {
        let maps = (0..m).map(|f| vec![0; sizes[c.dom(f)]]).collect();
        let mut functor = SetFunctor { category: c, sizes: sizes.clone(), maps };
        for x in 0..n {
            functor.maps[c.identity(x)] = (0..sizes[x]).collect();
        }
        let mut assigned = vec![false; m];
        for x in 0..n {
            assigned[c.identity(x)] = true;
        }
        fill(&mut functor, &order, 0, &checks, &mut assigned, &mut visit);
        // next size vector
        let mut i = 0;
        while i < n && sizes[i] == max_size {
            sizes[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        sizes[i] += 1;
    }
}

fn fill(
    functor: &mut SetFunctor,
    order: &[usize],
    at: usize,
    checks: &[Vec<(usize, usize, usize)>],
    assigned: &mut [bool],
    visit: &mut impl FnMut(&SetFunctor),
) {
    if at == order.len() {
        visit(functor);
        return;
    }
    let c = functor.category;
    let f = order[at];
    let (d, k) = (functor.sizes[c.dom(f)], functor.sizes[c.cod(f)]);
    if d > 0 && k == 0 {
        return;
    }
    let total = k.pow(d as u32);
    assigned[f] = true;
    for code in 0..total {
        let mut rest = code;
        for e in 0..d {
            functor.maps[f][e] = rest % k;
            rest /= k;
        }
        let ok = checks[f].iter().all(|&(g, ff, h)| {
            !(assigned[g] && assigned[ff] && assigned[h])
                || (0..functor.sizes[c.dom(ff)]).all(|e| functor.maps[h][e] == functor.maps[g][functor.maps[ff][e]])
        });
        if ok {
            fill(functor, order, at + 1, checks, assigned, visit);
        }
    }
    assigned[f] = false;
}

#[cfg(test)]
mod tests {
    use super::super::enumerate_categories;
    use super::super::tests::parallel_pair;
    use super::*;

    #[test]
    fn hom_functor_of_terminal() {
        let one = FinCategory::discrete(["*"]);
        let h = hom_functor(&one, 0);
        assert_eq!(h.sizes(), [1]);
        assert!(h.violations().is_empty());
    }

    #[test]
    fn identity_transformation_is_natural() {
        let c = parallel_pair();
        for a in 0..2 {
            let h = hom_functor(&c, a);
            let nats = nat_transformations(&h, &h).unwrap();
            let identity = NatTransformation { components: (0..2).map(|x| (0..h.size(x)).collect()).collect() };
            assert!(nats.contains(&identity));
            assert!(nats.iter().all(|n| n.is_natural(&h, &h)));
        }
    }

    #[test]
    fn unnatural_family_rejected() {
        let c = parallel_pair();
        let h = hom_functor(&c, 0);
        // C(A,A) = {idA}, C(A,B) = {f, g}: sending idA to itself but swapping
        // f and g fails the square at f
        let swap = NatTransformation { components: vec![vec![0], vec![1, 0]] };
        assert!(!swap.is_natural(&h, &h));
        assert!(!nat_transformations(&h, &h).unwrap().contains(&swap));
    }

    #[test]
    fn constant_two_element_functor_on_terminal() {
        let one = FinCategory::discrete(["*"]);
        let f = SetFunctor::new(&one, vec![2], vec![vec![0, 1]]).unwrap();
        let r = yoneda_check(&f, 0);
        assert_eq!((r.elements, r.transformations), (2, 2));
        assert!(r.holds);
    }

    #[test]
    fn yoneda_on_hom_functors() {
        for c in enumerate_categories(4, 3) {
            for a in 0..c.num_objects() {
                let h = hom_functor(&c, a);
                let r = yoneda_check(&h, a);
                assert!(r.holds);
                assert_eq!(r.transformations, c.hom(a, a).len());
            }
        }
    }

    #[test]
    fn set_functor_enumeration_matches_filtering() {
        // count functors into sets of size <= 2 by brute force over all
        // function assignments
        let c = parallel_pair();
        let mut enumerated = 0;
        set_functors(&c, 2, |f| {
            assert!(f.violations().is_empty());
            enumerated += 1;
        });
        let mut brute = 0;
        for sa in 0..=2usize {
            for sb in 0..=2usize {
                let per = sb.pow(sa as u32);
                brute += per * per;
            }
        }
        assert_eq!(enumerated, brute);
    }

    #[test]
    fn rejects_non_parallel() {
        let c1 = parallel_pair();
        let c2 = FinCategory::discrete(["A"]);
        assert_eq!(
            nat_transformations(&hom_functor(&c1, 0), &hom_functor(&c2, 0)),
            Err(CategoryError::NotParallel)
        );
    }

    #[test]
    fn json_reading() {
        let c = parallel_pair();
        let text = r#"{"category":"c.json","sets":{"A":["a"],"B":["p","q"]},"maps":{"f":["p"],"g":["q"]}}"#;
        let f = SetFunctor::from_json(&serde_json::from_str(text).unwrap(), &c).unwrap();
        assert_eq!(f.sizes(), [1, 2]);
        assert!(yoneda_check(&f, 0).holds);
        let bad = text.replace(r#""g":["q"]"#, r#""g":["z"]"#);
        assert!(SetFunctor::from_json(&serde_json::from_str(&bad).unwrap(), &c).is_err());
    }
}
