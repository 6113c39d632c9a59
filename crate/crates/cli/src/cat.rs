use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use stratcat::category::rel::{
    product_universality, rel_coproduct, rel_coproduct_universality, rel_product, set_coproduct,
    set_coproduct_universality, Diagram, RelCocone, RelCone, RelUniverse, Relation, Token, Universality,
};
use stratcat::category::{
    cones_to, freyd_check, limits_to, set_functors, validate_category, yoneda_check, CategoryJson, FinCategory,
    Functor, FunctorJson, SetFunctor, SetFunctorJson,
};

use crate::report::{Failure, Job, Outcome};

#[derive(Args, Clone)]
pub struct CatInput {
    /// Input JSON files.
    pub files: Vec<PathBuf>,
    /// Refuse categories with more morphisms than this.
    #[arg(long)]
    pub max_morphisms: Option<usize>,
}

#[derive(Subcommand)]
pub enum CatVerb {
    /// Check the category laws.
    Validate(CatInput),
    /// Cones and limits of a functor.
    Limits(CatInput),
    /// Preorder test and search for a missing Arr(C)-indexed product.
    Freyd(CatInput),
    /// Product of a discrete diagram in Rel, with its universality counts.
    RelProduct(CatInput),
    /// Coproduct of a discrete diagram in Rel.
    RelCoproduct(CatInput),
    /// Coproduct of a discrete diagram in Set.
    SetCoproduct(CatInput),
    /// Yoneda bijection for a set-valued functor, or for every small one on
    /// a category.
    Yoneda {
        #[command(flatten)]
        input: CatInput,
        /// Only this object.
        #[arg(long)]
        object: Option<String>,
        /// Largest set size when sweeping the functors of a category.
        #[arg(long, default_value_t = 2)]
        max_size: usize,
    },
}

impl CatVerb {
    pub fn name(&self) -> &'static str {
        match self {
            CatVerb::Validate(_) => "validate",
            CatVerb::Limits(_) => "limits",
            CatVerb::Freyd(_) => "freyd",
            CatVerb::RelProduct(_) => "rel-product",
            CatVerb::RelCoproduct(_) => "rel-coproduct",
            CatVerb::SetCoproduct(_) => "set-coproduct",
            CatVerb::Yoneda { .. } => "yoneda",
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

fn load_category(path: &Path, cap: Option<usize>) -> Result<FinCategory, Failure> {
    let c = FinCategory::from_json(&read_json::<CategoryJson>(path)?)?;
    if let Some(cap) = cap {
        if c.num_morphisms() > cap {
            return Err(Failure::Cap(format!("{} has {} morphisms, over the cap of {cap}", path.display(), c.num_morphisms())));
        }
    }
    Ok(c)
}

/// A path named inside `file`, taken relative to the directory of `file`.
fn sibling(file: &Path, named: &str) -> PathBuf {
    file.parent().unwrap_or(Path::new(".")).join(named)
}

fn per_file(input: CatInput, f: fn(&Path, Option<usize>) -> Result<Outcome, Failure>) -> Vec<Job> {
    input
        .files
        .into_iter()
        .map(|p| {
            let cap = input.max_morphisms;
            Job::new(p.display().to_string(), move || f(&p, cap))
        })
        .collect()
}

pub fn jobs(verb: CatVerb) -> Vec<Job> {
    match verb {
        CatVerb::Validate(input) => per_file(input, validate),
        CatVerb::Limits(input) => per_file(input, limits),
        CatVerb::Freyd(input) => per_file(input, freyd),
        CatVerb::RelProduct(input) => per_file(input, |p, _| rel(p, Construction::RelProduct)),
        CatVerb::RelCoproduct(input) => per_file(input, |p, _| rel(p, Construction::RelCoproduct)),
        CatVerb::SetCoproduct(input) => per_file(input, |p, _| rel(p, Construction::SetCoproduct)),
        CatVerb::Yoneda { input, object, max_size } => input
            .files
            .into_iter()
            .map(|p| {
                let (cap, object) = (input.max_morphisms, object.clone());
                Job::new(p.display().to_string(), move || yoneda(&p, cap, object.as_deref(), max_size))
            })
            .collect(),
    }
}

fn validate(path: &Path, cap: Option<usize>) -> Result<Outcome, Failure> {
    let c = load_category(path, cap)?;
    let violations = validate_category(&c);
    Outcome::ok(json!({
        "valid": violations.is_empty(),
        "objects": c.num_objects(),
        "morphisms": c.num_morphisms(),
        "preorder": c.is_preorder(),
        "violations": violations,
    }))
}

fn limits(path: &Path, cap: Option<usize>) -> Result<Outcome, Failure> {
    let j: FunctorJson = read_json(path)?;
    let source = load_category(&sibling(path, &j.source), cap)?;
    let target = load_category(&sibling(path, &j.target), cap)?;
    let f = Functor::from_json(&j, &source, &target)?;
    let violations = f.validate();
    if !violations.is_empty() {
        return Err(Failure::malformed(format!("not a functor: {}", serde_json::to_string(&violations).unwrap())));
    }
    let cones = cones_to(&f);
    let named = |apex: usize, legs: &[usize]| {
        json!({
            "apex": target.object_name(apex),
            "legs": legs.iter().map(|&l| target.morphism_name(l)).collect::<Vec<_>>(),
        })
    };
    let limits: Vec<Value> = limits_to(&f).iter().map(|l| named(l.apex, &l.legs)).collect();
    Outcome::ok(json!({ "cones": cones.len(), "limits": limits }))
}

fn freyd(path: &Path, cap: Option<usize>) -> Result<Outcome, Failure> {
    let c = load_category(path, cap)?;
    let verdict = freyd_check(&c)?;
    let holds = !verdict.is_violation();
    Outcome::checked(verdict, holds)
}

/// Wire format for a discrete diagram into `Rel(U)`.
#[derive(Deserialize)]
struct DiagramJson {
    universe: usize,
    tags: Vec<u32>,
    sets: Vec<Vec<u32>>,
    #[serde(default)]
    capacity: Option<usize>,
}

/// Largest candidate count a universality search may enumerate.
const SEARCH_CAP: f64 = (1u64 << 24) as f64;

#[derive(Clone, Copy)]
enum Construction {
    RelProduct,
    RelCoproduct,
    SetCoproduct,
}

fn pairs(r: &Relation) -> Vec<[String; 2]> {
    r.pairs().into_iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect()
}

fn names(ts: &[Token]) -> Vec<String> {
    ts.iter().map(Token::to_string).collect()
}

fn rel(path: &Path, which: Construction) -> Result<Outcome, Failure> {
    let j: DiagramJson = read_json(path)?;
    let mut u = RelUniverse::new(j.universe);
    if let Some(c) = j.capacity {
        u.capacity = c;
    }
    let sets = j.sets.iter().map(|s| s.iter().map(|&x| Token::Base(x)).collect()).collect();
    let d = Diagram::new(j.tags.clone(), sets)?;
    let objects = if j.universe <= 3 { u.subsets() } else { vec![u.base()] };
    let carrier: usize = d.sets.iter().map(Vec::len).sum();
    let candidates = match which {
        Construction::SetCoproduct => (j.universe as f64).powi(carrier as i32),
        _ => 2f64.powi(carrier as i32),
    };
    if candidates > SEARCH_CAP {
        return Err(Failure::Cap(format!("universality search needs {candidates:e} candidates, over the cap of {SEARCH_CAP:e}")));
    }
    let (apex, legs, checks): (Vec<Token>, Vec<Relation>, Vec<Universality>) = match which {
        Construction::RelProduct => {
            let RelCone { apex, legs } = rel_product(&u, &d)?;
            let cone = RelCone { apex: apex.clone(), legs: legs.clone() };
            let checks = objects.iter().map(|a| product_universality(&cone, &d, a)).collect();
            (apex, legs, checks)
        }
        Construction::RelCoproduct | Construction::SetCoproduct => {
            let set = matches!(which, Construction::SetCoproduct);
            let c = if set { set_coproduct(&u, &d)? } else { rel_coproduct(&u, &d)? };
            let checks = objects
                .iter()
                .map(|b| if set { set_coproduct_universality(&c, &d, b) } else { rel_coproduct_universality(&c, &d, b) })
                .collect();
            let RelCocone { apex, legs } = c;
            (apex, legs, checks)
        }
    };
    let holds = checks.iter().all(Universality::holds);
    let legs: Vec<Value> = j.tags.iter().zip(&legs).map(|(t, l)| json!({ "tag": t, "pairs": pairs(l) })).collect();
    Outcome::checked(json!({ "apex": names(&apex), "legs": legs, "universal": holds, "checks": checks }), holds)
}

fn yoneda(path: &Path, cap: Option<usize>, object: Option<&str>, max_size: usize) -> Result<Outcome, Failure> {
    let value: Value = read_json(path)?;
    let objects_of = |c: &FinCategory| -> Result<Vec<usize>, Failure> {
        match object {
            Some(name) => c.object_index(name).map(|a| vec![a]).ok_or_else(|| Failure::malformed(format!("unknown object `{name}`"))),
            None => Ok((0..c.num_objects()).collect()),
        }
    };
    if value.get("category").is_some() {
        let j: SetFunctorJson = serde_json::from_value(value).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
        let c = load_category(&sibling(path, &j.category), cap)?;
        let f = SetFunctor::from_json(&j, &c)?;
        let reports: Vec<_> = objects_of(&c)?.into_iter().map(|a| yoneda_check(&f, a)).collect();
        let holds = reports.iter().all(|r| r.holds);
        return Outcome::checked(json!({ "reports": reports }), holds);
    }
    let c = load_category(path, cap)?;
    if !validate_category(&c).is_empty() {
        return Err(Failure::malformed("category violates its laws"));
    }
    let objects = objects_of(&c)?;
    let (mut functors, mut checks, mut failures) = (0u64, 0u64, Vec::new());
    set_functors(&c, max_size, |f: &SetFunctor| {
        functors += 1;
        for &a in &objects {
            checks += 1;
            let r = yoneda_check(f, a);
            if !r.holds && failures.len() < 5 {
                failures.push(json!({ "sizes": f.sizes(), "report": r }));
            }
        }
    });
    let holds = failures.is_empty();
    Outcome::checked(json!({ "functors": functors, "checks": checks, "max_size": max_size, "failures": failures }), holds)
}
