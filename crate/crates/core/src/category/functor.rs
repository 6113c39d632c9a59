use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CategoryError, FinCategory, Law, Violation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor<'a> {
    pub source: &'a FinCategory,
    pub target: &'a FinCategory,
    objects: Vec<usize>,
    morphisms: Vec<usize>,
}

impl<'a> Functor<'a> {
    pub fn new(
        source: &'a FinCategory,
        target: &'a FinCategory,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<Self, CategoryError> {
        if objects.len() != source.num_objects() || morphisms.len() != source.num_morphisms() {
            return Err(CategoryError::Invalid("functor: maps do not cover the source"));
        }
        if objects.iter().any(|&x| x >= target.num_objects()) || morphisms.iter().any(|&f| f >= target.num_morphisms()) {
            return Err(CategoryError::Invalid("functor: image outside the target"));
        }
        Ok(Functor { source, target, objects, morphisms })
    }

    /// The diagram sending everything to `x` and its identity.
    pub fn constant(source: &'a FinCategory, target: &'a FinCategory, x: usize) -> Self {
        Functor {
            source,
            target,
            objects: vec![x; source.num_objects()],
            morphisms: vec![target.identity(x); source.num_morphisms()],
        }
    }

    /// A discrete diagram choosing `images[i]` for source object `i`.
    pub fn family(source: &'a FinCategory, target: &'a FinCategory, images: &[usize]) -> Result<Self, CategoryError> {
        let morphisms = (0..source.num_morphisms()).map(|f| target.identity(images[source.dom(f)])).collect();
        Functor::new(source, target, images.to_vec(), morphisms)
    }

    pub fn object(&self, x: usize) -> usize {
        self.objects[x]
    }

    pub fn morphism(&self, f: usize) -> usize {
        self.morphisms[f]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.objects
    }

    /// Preservation of domains, codomains, identities and composites.
    pub fn validate(&self) -> Vec<Violation> {
        let (j, c) = (self.source, self.target);
        let mut out = Vec::new();
        for f in 0..j.num_morphisms() {
            let ff = self.morphisms[f];
            if c.dom(ff) != self.objects[j.dom(f)] {
                out.push(Violation { law: Law::FunctorDomain, witnesses: vec![j.morphism_name(f).into()] });
            }
            if c.cod(ff) != self.objects[j.cod(f)] {
                out.push(Violation { law: Law::FunctorCodomain, witnesses: vec![j.morphism_name(f).into()] });
            }
        }
        for x in 0..j.num_objects() {
            if self.morphisms[j.identity(x)] != c.identity(self.objects[x]) {
                out.push(Violation { law: Law::FunctorIdentity, witnesses: vec![j.object_name(x).into()] });
            }
        }
        for f in 0..j.num_morphisms() {
            for g in 0..j.num_morphisms() {
                let Some(gf) = j.composite(g, f) else { continue };
                if c.composite(self.morphisms[g], self.morphisms[f]) != Some(self.morphisms[gf]) {
                    out.push(Violation {
                        law: Law::FunctorComposition,
                        witnesses: vec![j.morphism_name(g).into(), j.morphism_name(f).into()],
                    });
                }
            }
        }
        out
    }

    pub fn to_json(&self, source: &str, target: &str) -> FunctorJson {
        let (j, c) = (self.source, self.target);
        FunctorJson {
            source: source.into(),
            target: target.into(),
            objects: (0..j.num_objects()).map(|x| (j.object_name(x).into(), c.object_name(self.objects[x]).into())).collect(),
            morphisms: (0..j.num_morphisms())
                .map(|f| (j.morphism_name(f).into(), c.morphism_name(self.morphisms[f]).into()))
                .collect(),
        }
    }

    /// Reads the wire format against already loaded categories. Identities
    /// of the source may be omitted from the morphism map.
    pub fn from_json(j: &FunctorJson, source: &'a FinCategory, target: &'a FinCategory) -> Result<Self, CategoryError> {
        let find_obj = |cat: &FinCategory, name: &str| {
            cat.object_index(name).ok_or_else(|| CategoryError::Unknown { kind: "object", name: name.into() })
        };
        let find_mor = |cat: &FinCategory, name: &str| {
            cat.morphism_index(name).ok_or_else(|| CategoryError::Unknown { kind: "morphism", name: name.into() })
        };
        for k in j.objects.keys() {
            find_obj(source, k)?;
        }
        for k in j.morphisms.keys() {
            find_mor(source, k)?;
        }
        let objects = source
            .objects()
            .iter()
            .map(|o| {
                let image = j.objects.get(o).ok_or_else(|| CategoryError::Unknown { kind: "object image", name: o.clone() })?;
                find_obj(target, image)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let morphisms = (0..source.num_morphisms())
            .map(|f| match j.morphisms.get(source.morphism_name(f)) {
                Some(image) => find_mor(target, image),
                None if source.is_identity(f) => Ok(target.identity(objects[source.dom(f)])),
                None => Err(CategoryError::Unknown { kind: "morphism image", name: source.morphism_name(f).into() }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Functor::new(source, target, objects, morphisms)
    }
}

/// Wire format: paths of the two category files and the object and
/// morphism maps by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorJson {
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

/// Every functor `source -> target`, in lexicographic order of the object
/// map and then the morphism map.
pub fn functors<'a>(source: &'a FinCategory, target: &'a FinCategory) -> Vec<Functor<'a>> {
    let (nj, nc) = (source.num_objects(), target.num_objects());
    let mut out = Vec::new();
    if nj > 0 && nc == 0 {
        return out;
    }
    let total = nc.checked_pow(nj as u32).expect("object maps fit in usize");
    // composites (g, f, g∘f) checked once the largest of the three is assigned
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); source.num_morphisms()];
    for f in 0..source.num_morphisms() {
        for g in 0..source.num_morphisms() {
            if let Some(h) = source.composite(g, f) {
                checks[f.max(g).max(h)].push((g, f, h));
            }
        }
    }
    for code in 0..total {
        let mut c = code;
        let objects: Vec<usize> = (0..nj)
            .map(|_| {
                let v = c % nc;
                c /= nc;
                v
            })
            .collect();
        let mut morphisms = vec![usize::MAX; source.num_morphisms()];
        assign(source, target, &objects, &checks, 0, &mut morphisms, &mut |m| {
            out.push(Functor { source, target, objects: objects.clone(), morphisms: m.to_vec() });
        });
    }
    out
}

fn assign(
    j: &FinCategory,
    c: &FinCategory,
    objects: &[usize],
    checks: &[Vec<(usize, usize, usize)>],
    at: usize,
    morphisms: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if at == morphisms.len() {
        emit(morphisms);
        return;
    }
    let (d, k) = (objects[j.dom(at)], objects[j.cod(at)]);
    let candidates: &[usize] = if j.is_identity(at) { std::slice::from_ref(&c.identities[d]) } else { c.hom(d, k) };
    for &cand in candidates {
        morphisms[at] = cand;
        let ok = checks[at]
            .iter()
            .all(|&(g, f, h)| c.composite(morphisms[g], morphisms[f]) == Some(morphisms[h]));
        if ok {
            assign(j, c, objects, checks, at + 1, morphisms, emit);
        }
    }
    morphisms[at] = usize::MAX;
}

/// An apex with one leg `apex -> F(X)` per source object `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cone {
    pub apex: usize,
    pub legs: Vec<usize>,
}

/// All cones to `f`, by apex and then lexicographically by legs.
pub fn cones_to(f: &Functor) -> Vec<Cone> {
    let (j, c) = (f.source, f.target);
    // source morphisms checked once both endpoints have legs
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); j.num_objects()];
    for m in 0..j.num_morphisms() {
        if !j.is_identity(m) {
            checks[j.dom(m).max(j.cod(m))].push(m);
        }
    }
    let mut out = Vec::new();
    for apex in 0..c.num_objects() {
        let mut legs = vec![usize::MAX; j.num_objects()];
        cone_legs(f, &checks, apex, 0, &mut legs, &mut out);
    }
    out
}

fn cone_legs(f: &Functor, checks: &[Vec<usize>], apex: usize, at: usize, legs: &mut Vec<usize>, out: &mut Vec<Cone>) {
    if at == legs.len() {
        out.push(Cone { apex, legs: legs.clone() });
        return;
    }
    let (j, c) = (f.source, f.target);
    for &leg in c.hom(apex, f.object(at)) {
        legs[at] = leg;
        let ok = checks[at].iter().all(|&m| c.composite(f.morphism(m), legs[j.dom(m)]) == Some(legs[j.cod(m)]));
        if ok {
            cone_legs(f, checks, apex, at + 1, legs, out);
        }
    }
    legs[at] = usize::MAX;
}

/// Every `v : from.apex -> to.apex` with `to.legs[X] ∘ v = from.legs[X]`
/// for all `X`, by literal enumeration of the hom-set.
pub fn mediators(f: &Functor, from: &Cone, to: &Cone) -> Vec<usize> {
    let c = f.target;
    c.hom(from.apex, to.apex)
        .iter()
        .copied()
        .filter(|&v| to.legs.iter().zip(&from.legs).all(|(&u, &n)| c.composite(u, v) == Some(n)))
        .collect()
}

/// Whether every cone in `cones` has exactly one mediator into `candidate`.
pub fn is_limit(f: &Functor, candidate: &Cone, cones: &[Cone]) -> bool {
    cones.iter().all(|k| mediators(f, k, candidate).len() == 1)
}

/// The universal cones among [`cones_to`].
pub fn limits_to(f: &Functor) -> Vec<Cone> {
    let cones = cones_to(f);
    cones.iter().filter(|l| is_limit(f, l, &cones)).cloned().collect()
}
