//! Relations between finite sets of tokens, the product of a discrete family
//! in `Rel`, its dagger dual, and the coproduct in `Set`.
//!
//! Index objects are singletons `{i}` given by distinct tags. The product
//! carrier is `P = {<x,i> | x in F({i})}` with `<x,i>` an opaque tagged
//! token, and `π_i = {(<x,i>, x)}`.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelError {
    #[error("carrier of {size} tokens exceeds the closure capacity of {capacity}")]
    CarrierOverflow { size: usize, capacity: usize },
    #[error("leg {0} of the cocone is not a function")]
    NonFunctionalLeg(usize),
    #[error("relations do not compose: codomain and domain differ")]
    NotComposable,
    #[error("index tags must be distinct")]
    DuplicateTag,
    #[error("token `{0}` is not in the universe")]
    OutsideUniverse(Token),
}

/// An element of a carrier: a base element or a tagged pair `<x, i>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Token {
    Base(u32),
    Tagged(Box<Token>, u32),
}

impl Token {
    pub fn tagged(x: Token, tag: u32) -> Token {
        Token::Tagged(Box::new(x), tag)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Base(x) => write!(f, "{x}"),
            Token::Tagged(x, i) => write!(f, "<{x},{i}>"),
        }
    }
}

/// A base carrier `{0, .., size-1}` and the capacity reserved for tagged
/// tokens in the closure step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelUniverse {
    pub size: usize,
    pub capacity: usize,
}

impl RelUniverse {
    pub fn new(size: usize) -> Self {
        RelUniverse { size, capacity: 64 }
    }

    pub fn base(&self) -> Vec<Token> {
        (0..self.size as u32).map(Token::Base).collect()
    }

    /// All subsets of the base carrier, by bitmask.
    pub fn subsets(&self) -> Vec<Vec<Token>> {
        (0..1u32 << self.size)
            .map(|mask| (0..self.size as u32).filter(|i| mask >> i & 1 == 1).map(Token::Base).collect())
            .collect()
    }

    fn check(&self, set: &[Token]) -> Result<(), RelError> {
        for t in set {
            if let Token::Base(x) = t {
                if *x as usize >= self.size {
                    return Err(RelError::OutsideUniverse(t.clone()));
                }
            }
        }
        Ok(())
    }
}

/// A relation `dom -> cod`; bit `j` of `rows[i]` relates `dom[i]` to `cod[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    dom: Vec<Token>,
    cod: Vec<Token>,
    rows: Vec<u64>,
}

impl Relation {
    pub fn from_rows(dom: Vec<Token>, cod: Vec<Token>, rows: Vec<u64>) -> Self {
        assert!(cod.len() <= 64 && rows.len() == dom.len());
        let mask = full(cod.len());
        assert!(rows.iter().all(|r| r & !mask == 0));
        Relation { dom, cod, rows }
    }

    pub fn from_pairs(dom: Vec<Token>, cod: Vec<Token>, pairs: &[(usize, usize)]) -> Self {
        let mut rows = vec![0u64; dom.len()];
        for &(a, b) in pairs {
            rows[a] |= 1 << b;
        }
        Relation::from_rows(dom, cod, rows)
    }

    /// The relation whose rows are the bit fields of `code`, `|cod|` bits
    /// per row.
    pub fn from_code(dom: &[Token], cod: &[Token], code: u64) -> Self {
        let w = cod.len();
        let rows = (0..dom.len()).map(|a| (code >> (a * w)) & full(w)).collect();
        Relation { dom: dom.to_vec(), cod: cod.to_vec(), rows }
    }

    pub fn code(&self) -> u64 {
        let w = self.cod.len();
        self.rows.iter().enumerate().fold(0, |acc, (a, r)| acc | r << (a * w))
    }

    pub fn identity(set: &[Token]) -> Self {
        Relation { dom: set.to_vec(), cod: set.to_vec(), rows: (0..set.len()).map(|i| 1 << i).collect() }
    }

    pub fn dom(&self) -> &[Token] {
        &self.dom
    }

    pub fn cod(&self) -> &[Token] {
        &self.cod
    }

    pub fn holds(&self, a: usize, b: usize) -> bool {
        self.rows[a] >> b & 1 == 1
    }

    pub fn pairs(&self) -> Vec<(Token, Token)> {
        let mut out = Vec::new();
        for (a, r) in self.rows.iter().enumerate() {
            for b in 0..self.cod.len() {
                if r >> b & 1 == 1 {
                    out.push((self.dom[a].clone(), self.cod[b].clone()));
                }
            }
        }
        out
    }

    /// Every element of the domain is related to exactly one element.
    pub fn is_function(&self) -> bool {
        self.rows.iter().all(|r| r.count_ones() == 1)
    }

    /// `self ∘ r`: first `r`, then `self`.
    pub fn after(&self, r: &Relation) -> Result<Relation, RelError> {
        if r.cod != self.dom {
            return Err(RelError::NotComposable);
        }
        Ok(Relation { dom: r.dom.clone(), cod: self.cod.clone(), rows: r.rows.iter().map(|&row| self.image(row)).collect() })
    }

    /// Union of the rows selected by `mask`.
    fn image(&self, mut mask: u64) -> u64 {
        let mut out = 0;
        while mask != 0 {
            out |= self.rows[mask.trailing_zeros() as usize];
            mask &= mask - 1;
        }
        out
    }

    /// The converse relation `cod -> dom`.
    pub fn dagger(&self) -> Relation {
        let mut rows = vec![0u64; self.cod.len()];
        for (a, r) in self.rows.iter().enumerate() {
            for (b, row) in rows.iter_mut().enumerate() {
                if r >> b & 1 == 1 {
                    *row |= 1 << a;
                }
            }
        }
        Relation { dom: self.cod.clone(), cod: self.dom.clone(), rows }
    }
}

fn full(w: usize) -> u64 {
    if w >= 64 {
        u64::MAX
    } else {
        (1u64 << w) - 1
    }
}

/// A diagram on the discrete category of singletons `{i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub tags: Vec<u32>,
    pub sets: Vec<Vec<Token>>,
}

impl Diagram {
    pub fn new(tags: Vec<u32>, sets: Vec<Vec<Token>>) -> Result<Self, RelError> {
        let mut sorted = tags.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != tags.len() || sets.len() != tags.len() {
            return Err(RelError::DuplicateTag);
        }
        Ok(Diagram { tags, sets })
    }

    /// Every diagram over `0..tags` whose sets are subsets of the base.
    pub fn all(u: &RelUniverse, tags: usize) -> Vec<Diagram> {
        let subsets = u.subsets();
        let mut out = vec![Vec::new()];
        for _ in 0..tags {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Vec<Token>>| {
                    subsets.iter().map(move |s| {
                        let mut p = prefix.clone();
                        p.push(s.clone());
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(|sets| Diagram { tags: (0..tags as u32).collect(), sets }).collect()
    }
}

/// An apex with legs `apex -> F({i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelCone {
    pub apex: Vec<Token>,
    pub legs: Vec<Relation>,
}

/// An apex with legs `F({i}) -> apex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelCocone {
    pub apex: Vec<Token>,
    pub legs: Vec<Relation>,
}

/// The product cone `P`, `π_i` of a discrete diagram in `Rel(U)`.
pub fn rel_product(u: &RelUniverse, d: &Diagram) -> Result<RelCone, RelError> {
    for s in &d.sets {
        u.check(s)?;
    }
    let apex: Vec<Token> = d
        .tags
        .iter()
        .zip(&d.sets)
        .flat_map(|(&i, s)| s.iter().map(move |x| Token::tagged(x.clone(), i)))
        .collect();
    let capacity = u.capacity.min(64);
    if apex.len() > capacity {
        return Err(RelError::CarrierOverflow { size: apex.len(), capacity });
    }
    let legs = d
        .tags
        .iter()
        .zip(&d.sets)
        .map(|(&i, s)| {
            let pairs: Vec<(usize, usize)> = s
                .iter()
                .enumerate()
                .map(|(xi, x)| (apex.iter().position(|p| *p == Token::tagged(x.clone(), i)).expect("tagged token"), xi))
                .collect();
            Relation::from_pairs(apex.clone(), s.clone(), &pairs)
        })
        .collect();
    Ok(RelCone { apex, legs })
}

/// The mediating relation `u = {(a, <x,i>) | a R_i x}` from a cone into the
/// product.
pub fn product_mediator(product: &RelCone, d: &Diagram, cone: &RelCone) -> Relation {
    let mut pairs = Vec::new();
    for (leg, (&i, s)) in cone.legs.iter().zip(d.tags.iter().zip(&d.sets)) {
        for a in 0..cone.apex.len() {
            for (xi, x) in s.iter().enumerate() {
                if leg.holds(a, xi) {
                    let p = product.apex.iter().position(|p| *p == Token::tagged(x.clone(), i)).expect("in carrier");
                    pairs.push((a, p));
                }
            }
        }
    }
    Relation::from_pairs(cone.apex.clone(), product.apex.clone(), &pairs)
}

/// The coproduct in `Rel`: the product with every leg daggered.
pub fn rel_coproduct(u: &RelUniverse, d: &Diagram) -> Result<RelCocone, RelError> {
    let p = rel_product(u, d)?;
    Ok(RelCocone { apex: p.apex, legs: p.legs.iter().map(Relation::dagger).collect() })
}

/// The mediating relation out of the coproduct, `u†` for the daggered cone.
pub fn coproduct_mediator(coproduct: &RelCocone, d: &Diagram, cocone: &RelCocone) -> Relation {
    let product = RelCone { apex: coproduct.apex.clone(), legs: coproduct.legs.iter().map(Relation::dagger).collect() };
    let cone = RelCone { apex: cocone.apex.clone(), legs: cocone.legs.iter().map(Relation::dagger).collect() };
    product_mediator(&product, d, &cone).dagger()
}

/// The coproduct in `Set`: the `Rel` coproduct, whose injections are
/// functions.
pub fn set_coproduct(u: &RelUniverse, d: &Diagram) -> Result<RelCocone, RelError> {
    let c = rel_coproduct(u, d)?;
    if let Some(i) = c.legs.iter().position(|l| !l.is_function()) {
        return Err(RelError::NonFunctionalLeg(i));
    }
    Ok(c)
}

/// The mediating function out of the `Set` coproduct for a cocone of
/// functions.
pub fn set_coproduct_mediator(coproduct: &RelCocone, d: &Diagram, cocone: &RelCocone) -> Result<Relation, RelError> {
    if let Some(i) = cocone.legs.iter().position(|l| !l.is_function()) {
        return Err(RelError::NonFunctionalLeg(i));
    }
    let u = coproduct_mediator(coproduct, d, cocone);
    debug_assert!(u.is_function());
    Ok(u)
}

/// How many mediating morphisms each cone with a given apex has.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Universality {
    pub apex_size: usize,
    pub cones: u64,
    pub min_mediators: u64,
    pub max_mediators: u64,
    /// The constructed mediator is the unique one for every cone.
    pub constructed_is_unique: bool,
    pub method: Method,
}

impl Universality {
    /// Every cone has exactly one mediator; vacuous when there are no cones.
    pub fn holds(&self) -> bool {
        self.cones == 0 || self.min_mediators == 1 && self.max_mediators == 1 && self.constructed_is_unique
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Every candidate relation enumerated and bucketed by the cone it
    /// induces.
    Literal,
    /// Every candidate row enumerated and bucketed by the row of the cone it
    /// induces; a relation mediates iff each of its rows does.
    RowFactorized,
}

/// Largest `|apex| * |P|` for which whole relations are enumerated.
pub const LITERAL_BITS: usize = 18;

/// Counts, for every cone `(A, R_i)` into `d` with apex `a`, the relations
/// `u : A -> P` with `π_i ∘ u = R_i` for all `i`.
pub fn product_universality(product: &RelCone, d: &Diagram, apex: &[Token]) -> Universality {
    let p = product.apex.len();
    let bits = apex.len() * p;
    if bits <= LITERAL_BITS {
        product_literal(product, d, apex)
    } else {
        product_rows(product, d, apex)
    }
}

/// Packs the legs of a cone into one code: row `a` of every leg in turn.
fn cone_code(legs: &[Relation]) -> u64 {
    let w: usize = legs.iter().map(|l| l.cod.len()).sum();
    let rows = legs.first().map_or(0, |l| l.dom.len());
    let mut code = 0;
    for a in 0..rows {
        let mut shift = a * w;
        for l in legs {
            code |= l.rows[a] << shift;
            shift += l.cod.len();
        }
    }
    code
}

fn cone_from_code(apex: &[Token], d: &Diagram, code: u64) -> RelCone {
    let w: usize = d.sets.iter().map(Vec::len).sum();
    let legs = d
        .sets
        .iter()
        .scan(0, |off, s| {
            let o = *off;
            *off += s.len();
            let rows = (0..apex.len()).map(|a| (code >> (a * w + o)) & full(s.len())).collect();
            Some(Relation { dom: apex.to_vec(), cod: s.clone(), rows })
        })
        .collect();
    RelCone { apex: apex.to_vec(), legs }
}

pub fn product_literal(product: &RelCone, d: &Diagram, apex: &[Token]) -> Universality {
    let p = product.apex.len();
    let bits = apex.len() * p;
    assert!(bits <= 26, "literal enumeration is limited to 2^26 candidates");
    let n = 1u64 << bits;
    let mut count = vec![0u32; n as usize];
    let mut first = vec![0u64; n as usize];
    for code in 0..n {
        let u = Relation::from_code(apex, &product.apex, code);
        let legs: Vec<Relation> = product.legs.iter().map(|pi| pi.after(&u).expect("composable")).collect();
        let k = cone_code(&legs) as usize;
        if count[k] == 0 {
            first[k] = code;
        }
        count[k] += 1;
    }
    let mut constructed_is_unique = true;
    for k in 0..n {
        if count[k as usize] == 1 {
            let cone = cone_from_code(apex, d, k);
            constructed_is_unique &= product_mediator(product, d, &cone).code() == first[k as usize];
        } else {
            constructed_is_unique = false;
        }
    }
    Universality {
        apex_size: apex.len(),
        cones: n,
        min_mediators: count.iter().min().map_or(0, |&c| c as u64),
        max_mediators: count.iter().max().map_or(0, |&c| c as u64),
        constructed_is_unique,
        method: Method::Literal,
    }
}

pub fn product_rows(product: &RelCone, d: &Diagram, apex: &[Token]) -> Universality {
    let p = product.apex.len();
    assert!(p <= 26, "row enumeration is limited to 2^26 candidates");
    let one = [Token::Base(0)];
    let n = 1u64 << p;
    let mut count = vec![0u32; n as usize];
    let mut first = vec![0u64; n as usize];
    for row in 0..n {
        let u = Relation::from_code(&one, &product.apex, row);
        let legs: Vec<Relation> = product.legs.iter().map(|pi| pi.after(&u).expect("composable")).collect();
        let k = cone_code(&legs) as usize;
        if count[k] == 0 {
            first[k] = row;
        }
        count[k] += 1;
    }
    let mut constructed_is_unique = true;
    for k in 0..n {
        if count[k as usize] == 1 {
            let cone = cone_from_code(&one, d, k);
            constructed_is_unique &= product_mediator(product, d, &cone).code() == first[k as usize];
        } else {
            constructed_is_unique = false;
        }
    }
    let (lo, hi) = (count.iter().min().map_or(0, |&c| c as u64), count.iter().max().map_or(0, |&c| c as u64));
    let rows = apex.len() as u32;
    Universality {
        apex_size: apex.len(),
        cones: n.pow(rows),
        min_mediators: lo.pow(rows),
        max_mediators: hi.pow(rows),
        constructed_is_unique,
        method: Method::RowFactorized,
    }
}

/// Counts, for every cocone `(B, S_i)` from `d` with target `b`, the
/// relations `w : P -> B` with `w ∘ ι_i = S_i` for all `i`. Beyond
/// [`LITERAL_BITS`] the count is taken on the daggered cone, whose mediators
/// are exactly the converses `w†`.
pub fn rel_coproduct_universality(coproduct: &RelCocone, d: &Diagram, b: &[Token]) -> Universality {
    if coproduct.apex.len() * b.len() <= LITERAL_BITS {
        return rel_coproduct_literal(coproduct, d, b);
    }
    let product = RelCone { apex: coproduct.apex.clone(), legs: coproduct.legs.iter().map(Relation::dagger).collect() };
    product_rows(&product, d, b)
}

/// Every relation `w : P -> B` bucketed by its cocone `(w ∘ ι_i)`.
pub fn rel_coproduct_literal(coproduct: &RelCocone, d: &Diagram, b: &[Token]) -> Universality {
    let p = coproduct.apex.len();
    let bits = p * b.len();
    assert!(bits <= 26, "literal enumeration is limited to 2^26 candidates");
    let n = 1u64 << bits;
    let mut count = vec![0u32; n as usize];
    let mut first = vec![0u64; n as usize];
    for code in 0..n {
        let w = Relation::from_code(&coproduct.apex, b, code);
        let legs: Vec<Relation> = coproduct.legs.iter().map(|i| w.after(i).expect("composable").dagger()).collect();
        let k = cone_code(&legs) as usize;
        if count[k] == 0 {
            first[k] = code;
        }
        count[k] += 1;
    }
    let mut constructed_is_unique = true;
    for k in 0..n {
        if count[k as usize] == 1 {
            let cone = cone_from_code(b, d, k);
            let cocone = RelCocone { apex: b.to_vec(), legs: cone.legs.iter().map(Relation::dagger).collect() };
            constructed_is_unique &= coproduct_mediator(coproduct, d, &cocone).code() == first[k as usize];
        } else {
            constructed_is_unique = false;
        }
    }
    Universality {
        apex_size: b.len(),
        cones: n,
        min_mediators: count.iter().min().map_or(0, |&c| c as u64),
        max_mediators: count.iter().max().map_or(0, |&c| c as u64),
        constructed_is_unique,
        method: Method::Literal,
    }
}

/// Co-universality of the `Set` coproduct at target `b`: every function
/// `h : P -> B` bucketed by its cocone `(h ∘ ι_i)`, and the constructed
/// mediator checked to be that unique function.
pub fn set_coproduct_universality(coproduct: &RelCocone, d: &Diagram, b: &[Token]) -> Universality {
    let p = coproduct.apex.len();
    let k = b.len();
    let total = (k as u64).pow(p as u32);
    assert!(total <= 1 << 26, "function enumeration is limited to 2^26 candidates");
    let mut count = vec![0u32; total as usize];
    let mut first = vec![0u64; total as usize];
    let encode = |images: &[usize]| images.iter().rev().fold(0u64, |acc, &v| acc * k as u64 + v as u64);
    let mut images = vec![0usize; p];
    for code in 0..total {
        let mut rest = code;
        for img in images.iter_mut() {
            *img = (rest % k as u64) as usize;
            rest /= k as u64;
        }
        let h = Relation::from_pairs(coproduct.apex.clone(), b.to_vec(), &images.iter().copied().enumerate().collect::<Vec<_>>());
        // the cocone (h ∘ ι_i), as the images of the elements of each F({i})
        let mut cocone_images = Vec::with_capacity(p);
        for leg in &coproduct.legs {
            let composite = h.after(leg).expect("composable");
            cocone_images.extend(composite.rows.iter().map(|r| r.trailing_zeros() as usize));
        }
        let key = encode(&cocone_images) as usize;
        if count[key] == 0 {
            first[key] = code;
        }
        count[key] += 1;
    }
    let mut constructed_is_unique = true;
    for key in 0..total {
        if count[key as usize] != 1 {
            constructed_is_unique = false;
            continue;
        }
        let mut rest = key;
        let legs: Vec<Relation> = d
            .sets
            .iter()
            .map(|s| {
                let pairs: Vec<(usize, usize)> = (0..s.len())
                    .map(|x| {
                        let v = (rest % k as u64) as usize;
                        rest /= k as u64;
                        (x, v)
                    })
                    .collect();
                Relation::from_pairs(s.clone(), b.to_vec(), &pairs)
            })
            .collect();
        let cocone = RelCocone { apex: b.to_vec(), legs };
        let u = set_coproduct_mediator(coproduct, d, &cocone).expect("functional legs");
        let code: Vec<usize> = u.rows.iter().map(|r| r.trailing_zeros() as usize).collect();
        constructed_is_unique &= u.is_function() && encode(&code) == first[key as usize];
    }
    Universality {
        apex_size: k,
        cones: total,
        min_mediators: count.iter().min().map_or(0, |&c| c as u64),
        max_mediators: count.iter().max().map_or(0, |&c| c as u64),
        constructed_is_unique,
        method: Method::Literal,
    }
}

/// All relations `dom -> cod`.
pub fn all_relations<'a>(dom: &'a [Token], cod: &'a [Token]) -> impl Iterator<Item = Relation> + 'a {
    let bits = dom.len() * cod.len();
    assert!(bits < 64);
    (0..1u64 << bits).map(move |code| Relation::from_code(dom, cod, code))
}
