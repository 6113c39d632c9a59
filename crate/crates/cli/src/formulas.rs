use clap::Subcommand;
use serde_json::json;

use stratcat::corpus;
use stratcat::formula::{parse_document, print, Dialect, Formula, FormulaError, Term, Var, VBAR};
use stratcat::stratify::{check_stratified_with_graph, oracle_complete, Options, StratifyVerdict};
use stratcat::transform::{
    comprehension_instance, erase_types, foundation_instance, raise_types, reflection_axiom, relativize,
    replacement_instance, supertransitivity_axioms,
};

use crate::report::{Failure, Job, Outcome};
use crate::FormulaInput;

/// Reads every formula named by `input`, each with its report identifier.
pub fn items(input: &FormulaInput, dialect: Dialect, seed: u64) -> Vec<(String, Result<Formula, Failure>)> {
    let mut out = Vec::new();
    if let Some(n) = input.random {
        let mut rng = corpus::rng(seed);
        for i in 0..n {
            out.push((format!("random:{seed}:{i}"), Ok(corpus::random_plain(&mut rng, 4, 5))));
        }
    }
    for path in &input.files {
        let name = path.display().to_string();
        match std::fs::read_to_string(path) {
            Err(e) => out.push((name, Err(Failure::malformed(format!("cannot read: {e}"))))),
            Ok(text) => {
                let parsed = parse_document(&text, dialect, input.multi);
                if parsed.is_empty() {
                    out.push((name.clone(), Err(Failure::malformed("no formulas in file"))));
                }
                for item in parsed {
                    match item {
                        Ok(item) => out.push((format!("{name}:{}", item.line), Ok(item.formula))),
                        Err(e) => out.push((format!("{name}:{}", error_line(&e)), Err(e.into()))),
                    }
                }
            }
        }
    }
    out
}

fn error_line(e: &FormulaError) -> usize {
    match e {
        FormulaError::Syntax { line, .. } | FormulaError::Dialect { line, .. } => *line,
        _ => 0,
    }
}

fn jobs_for<F>(input: &FormulaInput, dialect: Dialect, seed: u64, f: F) -> Vec<Job>
where
    F: Fn(Formula) -> Result<Outcome, Failure> + Send + Sync + Clone + 'static,
{
    items(input, dialect, seed)
        .into_iter()
        .map(|(id, item)| match item {
            Ok(formula) => {
                let f = f.clone();
                Job::new(id, move || f(formula))
            }
            Err(e) => Job::failed(id, e),
        })
        .collect()
}

pub fn parse_jobs(input: &FormulaInput, dialect: Dialect, seed: u64) -> Vec<Job> {
    jobs_for(input, dialect, seed, |f| {
        Outcome::ok(json!({
            "formula": print(&f),
            "dialects": f.compatible_dialects(),
            "free": f.free_vars().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "quantifier_depth": f.quantifier_depth(),
        }))
    })
}

pub fn stratify_jobs(input: &FormulaInput, dialect: Dialect, seed: u64, merge_set_vars: bool, oracle: bool) -> Vec<Job> {
    let opts = Options { merge_set_vars };
    jobs_for(input, dialect, seed, move |f| {
        let (graph, verdict) = check_stratified_with_graph(&f, dialect, &opts)?;
        let mut payload = json!({ "formula": print(&f) });
        match &verdict {
            StratifyVerdict::Stratified { assignment } => {
                payload["verdict"] = json!("stratified");
                let types: serde_json::Map<String, serde_json::Value> =
                    assignment.entries().map(|(l, t)| (l.to_string(), json!(t))).collect();
                payload["types"] = types.into();
            }
            StratifyVerdict::Unstratified { cycle } => {
                payload["verdict"] = json!("unstratified");
                let path: Vec<String> = cycle
                    .steps
                    .iter()
                    .map(|s| {
                        let e = graph.edges[s.edge];
                        let (from, to, off) = if s.forward { (e.from, e.to, e.offset) } else { (e.to, e.from, -e.offset) };
                        format!("{} -[{off:+}]-> {}", graph.nodes[from].label, graph.nodes[to].label)
                    })
                    .collect();
                payload["cycle"] = json!({ "steps": path, "sum": cycle.sum });
            }
        }
        if oracle {
            let o = oracle_complete(&f, dialect, &opts)?;
            let agrees = o.stratified == verdict.is_stratified();
            payload["oracle"] = serde_json::to_value(&o).expect("serializable");
            payload["agrees"] = json!(agrees);
            return Outcome::checked(payload, agrees);
        }
        Outcome::ok(payload)
    })
}

#[derive(Subcommand)]
pub enum TransformVerb {
    /// Restrict every quantifier to a term.
    Relativize {
        /// Constant (uppercase) or variable to restrict to.
        #[arg(long, default_value = "S")]
        to: String,
        #[command(flatten)]
        input: FormulaInput,
    },
    /// The reflection axiom over the constant `S`.
    Reflect {
        #[command(flatten)]
        input: FormulaInput,
    },
    /// Class comprehension for a stratified L* formula.
    Comprehension {
        #[arg(long, default_value = "X")]
        var: String,
        #[command(flatten)]
        input: FormulaInput,
    },
    /// Replacement for an L* formula in two variables.
    Replacement {
        #[arg(long, default_value = "x")]
        arg: String,
        #[arg(long, default_value = "y")]
        value: String,
        #[command(flatten)]
        input: FormulaInput,
    },
    /// Foundation for an L* formula.
    Foundation {
        #[arg(long, default_value = "x")]
        var: String,
        #[command(flatten)]
        input: FormulaInput,
    },
    /// The transitivity and supertransitivity axioms for `S`.
    Supertransitivity,
    /// Add a constant to every type index of a TST formula.
    Raise {
        #[arg(long, default_value_t = 1)]
        by: u32,
        #[command(flatten)]
        input: FormulaInput,
    },
    /// Drop type indices from a TST formula.
    Erase {
        #[command(flatten)]
        input: FormulaInput,
    },
    /// Type a stratified plain formula as TST.
    Type {
        #[command(flatten)]
        input: FormulaInput,
    },
}

impl TransformVerb {
    pub fn name(&self) -> &'static str {
        match self {
            TransformVerb::Relativize { .. } => "relativize",
            TransformVerb::Reflect { .. } => "reflect",
            TransformVerb::Comprehension { .. } => "comprehension",
            TransformVerb::Replacement { .. } => "replacement",
            TransformVerb::Foundation { .. } => "foundation",
            TransformVerb::Supertransitivity => "supertransitivity",
            TransformVerb::Raise { .. } => "raise",
            TransformVerb::Erase { .. } => "erase",
            TransformVerb::Type { .. } => "type",
        }
    }
}

fn is_upper(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase())
}

fn var(name: &str, dialect: Dialect) -> Var {
    if dialect == Dialect::LStar && is_upper(name) {
        Var::class(name)
    } else {
        Var::set(name)
    }
}

fn printed(f: Formula) -> Result<Outcome, Failure> {
    Outcome::ok(json!({ "output": print(&f) }))
}

pub fn transform_jobs(verb: TransformVerb, dialect: Dialect, seed: u64) -> Vec<Job> {
    match verb {
        TransformVerb::Relativize { to, input } => {
            let term = if to == VBAR || (dialect != Dialect::LStar && is_upper(&to)) {
                Term::constant(to)
            } else {
                Term::var(var(&to, dialect))
            };
            jobs_for(&input, dialect, seed, move |f| printed(relativize(&f, &term)?))
        }
        TransformVerb::Reflect { input } => jobs_for(&input, dialect, seed, |f| printed(reflection_axiom(&f)?)),
        TransformVerb::Comprehension { var: v, input } => {
            let v = var(&v, dialect);
            jobs_for(&input, dialect, seed, move |f| printed(comprehension_instance(&f, &v)?))
        }
        TransformVerb::Replacement { arg, value, input } => {
            let (a, b) = (var(&arg, dialect), var(&value, dialect));
            jobs_for(&input, dialect, seed, move |f| printed(replacement_instance(&f, &a, &b)?))
        }
        TransformVerb::Foundation { var: v, input } => {
            let v = var(&v, dialect);
            jobs_for(&input, dialect, seed, move |f| printed(foundation_instance(&f, &v)?))
        }
        TransformVerb::Supertransitivity => {
            let [t, s] = supertransitivity_axioms();
            vec![Job::new("-", move || {
                Outcome::ok(json!({ "transitivity": print(&t), "supertransitivity": print(&s) }))
            })]
        }
        TransformVerb::Raise { by, input } => {
            jobs_for(&input, Dialect::Tst, seed, move |f| printed(raise_types(&f, by)))
        }
        TransformVerb::Erase { input } => jobs_for(&input, Dialect::Tst, seed, |f| printed(erase_types(&f))),
        TransformVerb::Type { input } => {
            jobs_for(&input, Dialect::Plain, seed, |f| printed(stratcat::stratify::to_tst(&f)?))
        }
    }
}
