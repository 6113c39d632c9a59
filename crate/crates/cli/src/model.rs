use std::path::PathBuf;

use clap::Subcommand;
use serde_json::json;

use stratcat::formula::{print, Dialect, Formula};
use stratcat::model::{
    ackermann_size, build_vn, eval_formula, reflect_search, singleton_image_check, FiniteStructure, StructureJson,
    Valuation,
};

use crate::formulas::items;
use crate::report::{Failure, Job, Outcome};
use crate::FormulaInput;

#[derive(Subcommand)]
pub enum ModelVerb {
    /// Materialize V_n (n <= 5) as a structure.
    BuildVn { n: usize },
    /// Evaluate formulas in a structure.
    Eval {
        /// Structure JSON.
        structure: PathBuf,
        #[command(flatten)]
        input: FormulaInput,
        /// Values of free variables, `name=label`.
        #[arg(long = "assign", value_name = "NAME=LABEL")]
        assign: Vec<String>,
    },
    /// Least m such that V_m reflects all formulas of each file inside V_n.
    ReflectSearch {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Formula files; each file is one set of formulas.
        files: Vec<PathBuf>,
    },
    /// Singleton image against powerset for elements of a structure.
    Cantor {
        /// Structure JSON; defaults to V_n from `--vn`.
        structure: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        vn: usize,
        /// Only this element.
        #[arg(long)]
        element: Option<String>,
    },
}

impl ModelVerb {
    pub fn name(&self) -> &'static str {
        match self {
            ModelVerb::BuildVn { .. } => "build-vn",
            ModelVerb::Eval { .. } => "eval",
            ModelVerb::ReflectSearch { .. } => "reflect-search",
            ModelVerb::Cantor { .. } => "cantor",
        }
    }
}

pub fn load_structure(path: &PathBuf) -> Result<FiniteStructure, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))?;
    let j: StructureJson = serde_json::from_str(&text).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
    Ok(FiniteStructure::from_json(&j)?)
}

pub fn jobs(verb: ModelVerb, dialect: Dialect) -> Vec<Job> {
    match verb {
        ModelVerb::BuildVn { n } => vec![Job::new(format!("V_{n}"), move || {
            let m = build_vn(n)?;
            Outcome::ok(json!({ "n": n, "size": ackermann_size(n)?, "structure": m.to_json() }))
        })],
        ModelVerb::Eval { structure, input, assign } => {
            let m = match load_structure(&structure) {
                Ok(m) => std::sync::Arc::new(m),
                Err(e) => return vec![Job::failed(structure.display().to_string(), e)],
            };
            let mut valuation = Valuation::new();
            for a in &assign {
                let Some((name, label)) = a.split_once('=') else {
                    return vec![Job::failed(a.clone(), Failure::malformed("expected NAME=LABEL"))];
                };
                match m.element(label) {
                    Some(e) => valuation.insert(name.to_string(), e),
                    None => return vec![Job::failed(a.clone(), Failure::malformed(format!("unknown element `{label}`")))],
                };
            }
            items(&input, dialect, 0)
                .into_iter()
                .map(|(id, item)| match item {
                    Ok(f) => {
                        let (m, v) = (m.clone(), valuation.clone());
                        Job::new(id, move || {
                            let value = eval_formula(&f, &m, &v)?;
                            Outcome::ok(json!({ "formula": print(&f), "value": value }))
                        })
                    }
                    Err(e) => Job::failed(id, e),
                })
                .collect()
        }
        ModelVerb::ReflectSearch { n, files } => files
            .into_iter()
            .map(|path| {
                let id = path.display().to_string();
                let input = FormulaInput { files: vec![path], multi: false, random: None };
                let parsed: Result<Vec<Formula>, Failure> = items(&input, dialect, 0).into_iter().map(|(_, f)| f).collect();
                match parsed {
                    Ok(phis) => Job::new(id, move || {
                        let m = reflect_search(&phis, n)?;
                        Outcome::ok(json!({
                            "formulas": phis.iter().map(print).collect::<Vec<_>>(),
                            "n": n,
                            "level": m,
                        }))
                    }),
                    Err(e) => Job::failed(id, e),
                }
            })
            .collect(),
        ModelVerb::Cantor { structure, vn, element } => {
            let (id, m) = match &structure {
                Some(p) => (p.display().to_string(), load_structure(p)),
                None => (format!("V_{vn}"), build_vn(vn).map_err(Failure::from)),
            };
            let m = match m {
                Ok(m) => std::sync::Arc::new(m),
                Err(e) => return vec![Job::failed(id, e)],
            };
            let elements: Vec<usize> = match &element {
                Some(label) => match m.element(label) {
                    Some(e) => vec![e],
                    None => return vec![Job::failed(id, Failure::malformed(format!("unknown element `{label}`")))],
                },
                None => (0..m.len()).filter(|&e| !m.is_atom(e)).collect(),
            };
            elements
                .into_iter()
                .map(|a| {
                    let m = m.clone();
                    Job::new(format!("{id}#{}", m.label(a)), move || {
                        let (k, p) = singleton_image_check(&m, a)?;
                        Outcome::checked(json!({ "element": m.label(a), "singletons": k, "subsets": p }), k < p)
                    })
                })
                .collect()
        }
    }
}
