//! Finite categories given by explicit composition tables, with functors,
//! cones and limits found by exhaustive search, Freyd's preorder theorem,
//! the relational product and coproduct constructions, and the Yoneda
//! bijection for set-valued functors.

mod enumerate;
mod freyd;
mod functor;
pub mod rel;
mod yoneda;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use enumerate::{canonical_code, enumerate_categories};
pub use freyd::{freyd_check, FreydVerdict, FREYD_MAX_MORPHISMS};
pub use functor::{cones_to, functors, is_limit, limits_to, mediators, Cone, Functor, FunctorJson};
pub use yoneda::{
    for_each_nat, hom_functor, nat_transformations, set_functors, yoneda_check, NatTransformation, SetFunctor, SetFunctorJson,
    YonedaReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CategoryError {
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("composite of `{g}` after `{f}` is given twice with different values")]
    ConflictingComposite { g: String, f: String },
    #[error("object `{0}` has no identity")]
    MissingIdentity(String),
    #[error("{what} has {size} morphisms, above the cap of {cap}")]
    FeasibilityCap { what: &'static str, size: usize, cap: usize },
    #[error("functors are not parallel")]
    NotParallel,
    #[error("invalid {0}")]
    Invalid(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morphism {
    pub id: String,
    pub dom: usize,
    pub cod: usize,
}

/// A law that a composition table or functor fails, with the offending
/// morphism or object names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: Law,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    IdentityType,
    MissingComposite,
    IllTypedComposite,
    CompositeType,
    LeftIdentity,
    RightIdentity,
    Associativity,
    FunctorDomain,
    FunctorCodomain,
    FunctorIdentity,
    FunctorComposition,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.law, self.witnesses.join(", "))
    }
}

/// A finite category as a dense composition table. Tables that break the
/// category laws can be represented; [`validate_category`] reports them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// `compose[g * m + f]` is `g ∘ f`.
    compose: Vec<Option<usize>>,
    homs: Vec<Vec<usize>>,
}

impl FinCategory {
    /// Builds a category from morphisms `(id, dom, cod)`, the identity of
    /// each object and composites `(g, f, g ∘ f)`. Only referential
    /// integrity is checked here.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        identities: Vec<usize>,
        composites: &[(usize, usize, usize)],
    ) -> Result<Self, CategoryError> {
        let n = objects.len();
        let m = morphisms.len();
        unique("object", objects.iter())?;
        unique("morphism", morphisms.iter().map(|(id, _, _)| id))?;
        let morphisms: Vec<Morphism> = morphisms
            .into_iter()
            .map(|(id, dom, cod)| {
                if dom >= n || cod >= n {
                    Err(CategoryError::Unknown { kind: "object", name: format!("#{}", dom.max(cod)) })
                } else {
                    Ok(Morphism { id, dom, cod })
                }
            })
            .collect::<Result<_, _>>()?;
        if identities.len() != n {
            return Err(CategoryError::MissingIdentity(objects.get(identities.len()).cloned().unwrap_or_default()));
        }
        if let Some(&bad) = identities.iter().find(|&&i| i >= m) {
            return Err(CategoryError::Unknown { kind: "morphism", name: format!("#{bad}") });
        }
        let mut compose = vec![None; m * m];
        for &(g, f, h) in composites {
            if g >= m || f >= m || h >= m {
                return Err(CategoryError::Unknown { kind: "morphism", name: format!("#{}", g.max(f).max(h)) });
            }
            match compose[g * m + f] {
                Some(old) if old != h => {
                    return Err(CategoryError::ConflictingComposite {
                        g: morphisms[g].id.clone(),
                        f: morphisms[f].id.clone(),
                    })
                }
                _ => compose[g * m + f] = Some(h),
            }
        }
        let mut homs = vec![Vec::new(); n * n];
        for (i, mor) in morphisms.iter().enumerate() {
            homs[mor.dom * n + mor.cod].push(i);
        }
        Ok(FinCategory { objects, morphisms, identities, compose, homs })
    }

    /// Fills every missing composite that involves an identity by the
    /// identity laws.
    pub fn with_identity_composites(mut self) -> Self {
        let m = self.morphisms.len();
        for f in 0..m {
            let (d, c) = (self.morphisms[f].dom, self.morphisms[f].cod);
            let (id_d, id_c) = (self.identities[d], self.identities[c]);
            if self.morphisms[id_d].dom == d && self.morphisms[id_d].cod == d {
                self.compose[f * m + id_d].get_or_insert(f);
            }
            if self.morphisms[id_c].dom == c && self.morphisms[id_c].cod == c {
                self.compose[id_c * m + f].get_or_insert(f);
            }
        }
        self
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn morphism_name(&self, f: usize) -> &str {
        &self.morphisms[f].id
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.id == name)
    }

    pub fn dom(&self, f: usize) -> usize {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.morphisms[f].cod
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.dom(f)] == f
    }

    /// `g ∘ f` as recorded in the table.
    pub fn composite(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g * self.morphisms.len() + f]
    }

    /// `g ∘ f` in a valid category, for composable `g`, `f`.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.composite(g, f).expect("composable pair in a valid category")
    }

    /// Morphisms `a -> b`.
    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a * self.objects.len() + b]
    }

    /// At most one morphism between any two objects.
    pub fn is_preorder(&self) -> bool {
        self.homs.iter().all(|h| h.len() <= 1)
    }

    /// The category with objects `names` and only identities.
    pub fn discrete<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let objects: Vec<String> = names.into_iter().map(Into::into).collect();
        let morphisms = objects.iter().enumerate().map(|(i, o)| (format!("id{o}"), i, i)).collect();
        let identities = (0..objects.len()).collect();
        let composites: Vec<_> = (0..objects.len()).map(|i| (i, i, i)).collect();
        FinCategory::new(objects, morphisms, identities, &composites).expect("discrete category is well formed")
    }

    /// Objects `0..n` with one arrow `a -> b` exactly when `a >= b`.
    pub fn total_order(n: usize) -> Self {
        let objects: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        for a in 0..n {
            for b in 0..=a {
                index.insert((a, b), morphisms.len());
                morphisms.push((format!("{a}>={b}"), a, b));
            }
        }
        let identities = (0..n).map(|a| index[&(a, a)]).collect();
        let mut composites = Vec::new();
        for a in 0..n {
            for b in 0..=a {
                for c in 0..=b {
                    composites.push((index[&(b, c)], index[&(a, b)], index[&(a, c)]));
                }
            }
        }
        FinCategory::new(objects, morphisms, identities, &composites).expect("total order is well formed")
    }

    /// Finite sets and all functions between them: objects are the subsets
    /// of `{0, .., u-1}`.
    pub fn set_category(u: usize) -> Self {
        assert!(u <= 4, "Set(U) is materialized only for |U| <= 4");
        let subsets: Vec<Vec<usize>> = (0..1usize << u).map(|mask| (0..u).filter(|i| mask >> i & 1 == 1).collect()).collect();
        let objects: Vec<String> = subsets.iter().map(|s| set_label(s)).collect();
        let mut morphisms = Vec::new();
        let mut tables: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
        let mut identities = vec![0; subsets.len()];
        for (a, sa) in subsets.iter().enumerate() {
            for (b, sb) in subsets.iter().enumerate() {
                let count = sb.len().pow(sa.len() as u32);
                for code in 0..count {
                    let mut c = code;
                    let table: Vec<usize> = sa
                        .iter()
                        .map(|_| {
                            let v = c % sb.len();
                            c /= sb.len();
                            v
                        })
                        .collect();
                    let images: Vec<String> = table.iter().map(|&v| sb[v].to_string()).collect();
                    if a == b && table.iter().enumerate().all(|(i, &v)| i == v) {
                        identities[a] = morphisms.len();
                    }
                    index.insert((a, b, table.clone()), morphisms.len());
                    morphisms.push((format!("{}->{}:[{}]", objects[a], objects[b], images.join(",")), a, b));
                    tables.push(table);
                }
            }
        }
        let mut composites = Vec::new();
        for (f, &(_, a, b)) in morphisms.iter().enumerate() {
            for g in 0..morphisms.len() {
                let (_, gb, c) = morphisms[g];
                if gb != b {
                    continue;
                }
                let table: Vec<usize> = tables[f].iter().map(|&x| tables[g][x]).collect();
                composites.push((g, f, index[&(a, c, table)]));
            }
        }
        FinCategory::new(objects, morphisms, identities, &composites).expect("Set(U) is well formed")
    }

    pub fn to_json(&self) -> CategoryJson {
        let m = self.morphisms.len();
        let mut compose = Vec::new();
        for g in 0..m {
            for f in 0..m {
                if let Some(h) = self.compose[g * m + f] {
                    compose.push([self.morphisms[g].id.clone(), self.morphisms[f].id.clone(), self.morphisms[h].id.clone()]);
                }
            }
        }
        CategoryJson {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|mor| MorphismJson {
                    id: mor.id.clone(),
                    dom: self.objects[mor.dom].clone(),
                    cod: self.objects[mor.cod].clone(),
                })
                .collect(),
            identities: self
                .identities
                .iter()
                .enumerate()
                .map(|(x, &i)| (self.objects[x].clone(), self.morphisms[i].id.clone()))
                .collect(),
            compose,
        }
    }

    /// Reads the wire format. Composites with an identity may be omitted and
    /// default to the identity laws.
    pub fn from_json(j: &CategoryJson) -> Result<Self, CategoryError> {
        let obj: HashMap<&str, usize> = j.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let find_obj = |name: &str| {
            obj.get(name).copied().ok_or_else(|| CategoryError::Unknown { kind: "object", name: name.to_string() })
        };
        let morphisms = j
            .morphisms
            .iter()
            .map(|mj| Ok((mj.id.clone(), find_obj(&mj.dom)?, find_obj(&mj.cod)?)))
            .collect::<Result<Vec<_>, CategoryError>>()?;
        let mor: HashMap<&str, usize> = j.morphisms.iter().enumerate().map(|(i, mj)| (mj.id.as_str(), i)).collect();
        let find_mor = |name: &str| {
            mor.get(name).copied().ok_or_else(|| CategoryError::Unknown { kind: "morphism", name: name.to_string() })
        };
        for name in j.identities.keys() {
            find_obj(name)?;
        }
        let identities = j
            .objects
            .iter()
            .map(|o| j.identities.get(o).ok_or_else(|| CategoryError::MissingIdentity(o.clone())).and_then(|i| find_mor(i)))
            .collect::<Result<Vec<_>, _>>()?;
        let composites = j
            .compose
            .iter()
            .map(|[g, f, h]| Ok((find_mor(g)?, find_mor(f)?, find_mor(h)?)))
            .collect::<Result<Vec<_>, CategoryError>>()?;
        Ok(FinCategory::new(j.objects.clone(), morphisms, identities, &composites)?.with_identity_composites())
    }
}

fn unique<'a>(kind: &'static str, names: impl Iterator<Item = &'a String>) -> Result<(), CategoryError> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(CategoryError::Duplicate { kind, name: n.clone() });
        }
    }
    Ok(())
}

fn set_label(s: &[usize]) -> String {
    let items: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

/// Wire format; `compose` lists `[g, f, g∘f]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

/// Every failure of the identity, typing and associativity laws.
pub fn validate_category(c: &FinCategory) -> Vec<Violation> {
    let mut out = Vec::new();
    let name = |f: usize| c.morphisms[f].id.clone();
    let m = c.num_morphisms();
    for (x, &i) in c.identities.iter().enumerate() {
        if c.dom(i) != x || c.cod(i) != x {
            out.push(Violation { law: Law::IdentityType, witnesses: vec![c.objects[x].clone(), name(i)] });
        }
    }
    for g in 0..m {
        for f in 0..m {
            let composable = c.cod(f) == c.dom(g);
            match (composable, c.composite(g, f)) {
                (true, None) => out.push(Violation { law: Law::MissingComposite, witnesses: vec![name(g), name(f)] }),
                (false, Some(_)) => {
                    out.push(Violation { law: Law::IllTypedComposite, witnesses: vec![name(g), name(f)] })
                }
                (true, Some(h)) if c.dom(h) != c.dom(f) || c.cod(h) != c.cod(g) => {
                    out.push(Violation { law: Law::CompositeType, witnesses: vec![name(g), name(f), name(h)] })
                }
                _ => {}
            }
        }
    }
    for f in 0..m {
        let (d, k) = (c.identities[c.dom(f)], c.identities[c.cod(f)]);
        if c.composite(f, d).is_some_and(|h| h != f) {
            out.push(Violation { law: Law::RightIdentity, witnesses: vec![name(f)] });
        }
        if c.composite(k, f).is_some_and(|h| h != f) {
            out.push(Violation { law: Law::LeftIdentity, witnesses: vec![name(f)] });
        }
    }
    for f in 0..m {
        for g in 0..m {
            let Some(gf) = c.composite(g, f) else { continue };
            for h in 0..m {
                let Some(hg) = c.composite(h, g) else { continue };
                if let (Some(a), Some(b)) = (c.composite(h, gf), c.composite(hg, f)) {
                    if a != b {
                        out.push(Violation { law: Law::Associativity, witnesses: vec![name(h), name(g), name(f)] });
                    }
                }
            }
        }
    }
    out
}

/// The discrete category on the morphisms of `c`.
pub fn arr_category(c: &FinCategory) -> FinCategory {
    FinCategory::discrete(c.morphisms.iter().map(|m| m.id.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `A ⇉ B` with arrows `f`, `g`.
    pub(crate) fn parallel_pair() -> FinCategory {
        FinCategory::new(
            vec!["A".into(), "B".into()],
            vec![("idA".into(), 0, 0), ("idB".into(), 1, 1), ("f".into(), 0, 1), ("g".into(), 0, 1)],
            vec![0, 1],
            &[],
        )
        .unwrap()
        .with_identity_composites()
    }

    #[test]
    fn small_categories_validate() {
        assert!(validate_category(&FinCategory::discrete(["A"])).is_empty());
        assert!(validate_category(&FinCategory::discrete(["A", "B", "C"])).is_empty());
        assert!(validate_category(&parallel_pair()).is_empty());
        assert!(validate_category(&FinCategory::total_order(4)).is_empty());
        assert!(validate_category(&FinCategory::set_category(2)).is_empty());
    }

    #[test]
    fn broken_associativity_is_named() {
        // a∘a = b, a∘b = a, b∘a = b, b∘b = b: (a∘b)∘a = b but a∘(b∘a) = a
        let names = ["1", "a", "b"];
        let morphisms = names.iter().map(|n| (n.to_string(), 0, 0)).collect();
        let table = [(1, 1, 2), (1, 2, 1), (2, 1, 2), (2, 2, 2)];
        let c = FinCategory::new(vec!["*".into()], morphisms, vec![0], &table).unwrap().with_identity_composites();
        let v = validate_category(&c);
        assert!(!v.is_empty());
        assert!(v.iter().all(|v| v.law == Law::Associativity));
        assert!(v.iter().any(|v| v.witnesses == ["a", "b", "a"]));
    }

    #[test]
    fn missing_and_ill_typed_composites() {
        let mut c = parallel_pair();
        c.compose[2 * 4 + 1] = Some(2);
        c.compose[4 + 2] = None;
        let laws: Vec<Law> = validate_category(&c).iter().map(|v| v.law).collect();
        assert!(laws.contains(&Law::IllTypedComposite));
        assert!(laws.contains(&Law::MissingComposite));
    }

    #[test]
    fn preorders() {
        assert!(FinCategory::discrete(["A", "B"]).is_preorder());
        assert!(FinCategory::total_order(3).is_preorder());
        assert!(!parallel_pair().is_preorder());
    }

    #[test]
    fn arr_of_parallel_pair() {
        let a = arr_category(&parallel_pair());
        assert_eq!(a.num_objects(), 4);
        assert_eq!(a.num_morphisms(), 4);
        assert!(validate_category(&a).is_empty());
        assert_eq!(arr_category(&FinCategory::discrete(["A"])).num_objects(), 1);
    }

    #[test]
    fn set_category_sizes() {
        let s = FinCategory::set_category(2);
        assert_eq!(s.num_objects(), 4);
        assert_eq!(s.num_morphisms(), 18);
        let e = s.object_index("{}").unwrap();
        let full = s.object_index("{0,1}").unwrap();
        assert_eq!(s.hom(e, full).len(), 1);
        assert_eq!(s.hom(full, e).len(), 0);
        assert_eq!(s.hom(full, full).len(), 4);
    }

    #[test]
    fn json_round_trip() {
        let c = parallel_pair();
        let j = c.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = FinCategory::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn json_identity_composites_default() {
        let text = r#"{"objects":["A","B"],
            "morphisms":[{"id":"idA","dom":"A","cod":"A"},{"id":"idB","dom":"B","cod":"B"},{"id":"f","dom":"A","cod":"B"}],
            "identities":{"A":"idA","B":"idB"}}"#;
        let c = FinCategory::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert!(validate_category(&c).is_empty());
        let bad = text.replace(r#""B":"idB""#, r#""B":"idX""#);
        assert!(matches!(
            FinCategory::from_json(&serde_json::from_str(&bad).unwrap()),
            Err(CategoryError::Unknown { kind: "morphism", .. })
        ));
    }
}
