//! Command-line front end: build models from scenarios, daseinise
//! propositions, evaluate truth values and measures, count global sections,
//! and run the property suites.
//!
//! Exit codes: 0 success, 1 a property check failed, 2 input error. Machine
//! output (`--format json`) is schema-stable and byte-reproducible for a
//! fixed seed; wall-clock timing appears only in the text rendering.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{measure, AntitoneValuation};
use crate::operators::{spectral_projection, IntervalUnion, Projection};
use crate::scenario::{load_scenario, preset, Model, StateSpec};
use crate::subobjects::ClopenSubobject;
use crate::suites::{axioms_suites, Suite};
use crate::truth::{global_sections, truth_value};

#[derive(Debug, Parser)]
#[command(
    name = "toposq",
    version,
    about = "Topos-style quantum logic over finite context posets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for randomized checks (falls back to TOPOSQ_SEED, then the
    /// scenario's report configuration)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the context poset and spectral presheaf from a scenario
    Build {
        /// Scenario document path
        #[arg(long, conflicts_with = "preset")]
        scenario: Option<PathBuf>,
        /// Built-in scenario name (qubit-zx | qutrit-chain | mermin-square | ks-demo)
        #[arg(long)]
        preset: Option<String>,
        /// Where to write the model document
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the sieve-valued truth of a proposition in a pure state
    Truth {
        #[arg(long, conflicts_with = "preset")]
        model: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Name of a pure state declared in the scenario
        #[arg(long)]
        state: String,
        /// Proposition name or expression, e.g. "Sz in [1,1]" or "(SzUp & SxUp)"
        #[arg(long)]
        prop: String,
    },
    /// Evaluate the measure of a proposition in a (possibly mixed) state
    Measure {
        #[arg(long, conflicts_with = "preset")]
        model: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        state: String,
        #[arg(long)]
        prop: String,
    },
    /// Count global sections of the spectral presheaf (Kochen-Specker check)
    Ks {
        #[arg(long, conflicts_with = "preset")]
        model: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
    },
    /// Run the daseinisation, Heyting, and measure property suites
    Axioms {
        #[arg(long, conflicts_with = "preset")]
        model: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Sample count per suite
        #[arg(long)]
        samples: Option<u32>,
    },
    /// Show the stage-wise outer daseinisation of a single proposition
    Daseinise {
        #[arg(long, conflicts_with = "preset")]
        model: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Atomic proposition: a declared name or "Obs in [a,b]"
        #[arg(long)]
        prop: String,
    },
}

#[derive(Debug, Serialize)]
struct Report<T: Serialize> {
    command: String,
    model: ModelIdentity,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    results: T,
    diagnostics: Vec<String>,
    /// kept null in machine output so reports stay byte-reproducible
    timing_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ModelIdentity {
    name: String,
    dim: usize,
    contexts: usize,
    arrows: usize,
    characters: usize,
}

impl ModelIdentity {
    fn of(model: &Model) -> Self {
        let poset = model.presheaf.poset();
        ModelIdentity {
            name: model.scenario.name.clone(),
            dim: poset.dim(),
            contexts: poset.len(),
            arrows: poset.strict_pairs(),
            characters: model.presheaf.total_characters(),
        }
    }
}

// ---------------------------------------------------------------------------
// proposition expressions

/// Grammar: implication (right-assoc, lowest) over disjunction over
/// conjunction over negation; atoms are proposition names or "Obs in
/// [a,b],[c,d]"; parentheses group. ASCII spellings: -> | & !
mod expr {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    pub enum Expr {
        Named(String),
        ObsIn(String, Vec<(f64, f64)>),
        Not(Box<Expr>),
        And(Box<Expr>, Box<Expr>),
        Or(Box<Expr>, Box<Expr>),
        Implies(Box<Expr>, Box<Expr>),
    }

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Name(String),
        In,
        Num(f64),
        LBracket,
        RBracket,
        LParen,
        RParen,
        Comma,
        Not,
        And,
        Or,
        Implies,
    }

    fn tokenize(input: &str) -> Result<Vec<Tok>> {
        let mut toks = Vec::new();
        let chars: Vec<char> = input.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                ' ' | '\t' | '\n' => i += 1,
                '(' => {
                    toks.push(Tok::LParen);
                    i += 1;
                }
                ')' => {
                    toks.push(Tok::RParen);
                    i += 1;
                }
                '[' => {
                    toks.push(Tok::LBracket);
                    i += 1;
                }
                ']' => {
                    toks.push(Tok::RBracket);
                    i += 1;
                }
                ',' => {
                    toks.push(Tok::Comma);
                    i += 1;
                }
                '¬' | '!' => {
                    toks.push(Tok::Not);
                    i += 1;
                }
                '∧' | '&' => {
                    toks.push(Tok::And);
                    i += 1;
                }
                '∨' | '|' => {
                    toks.push(Tok::Or);
                    i += 1;
                }
                '⇒' => {
                    toks.push(Tok::Implies);
                    i += 1;
                }
                '-' if i + 1 < chars.len() && chars[i + 1] == '>' => {
                    toks.push(Tok::Implies);
                    i += 2;
                }
                _ if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                    let start = i;
                    i += 1;
                    while i < chars.len()
                        && (chars[i].is_ascii_digit()
                            || chars[i] == '.'
                            || chars[i] == 'e'
                            || chars[i] == 'E'
                            || ((chars[i] == '-' || chars[i] == '+')
                                && matches!(chars[i - 1], 'e' | 'E')))
                    {
                        i += 1;
                    }
                    let text: String = chars[start..i].iter().collect();
                    let num = text
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad number `{text}`")))?;
                    toks.push(Tok::Num(num));
                }
                _ if c.is_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    if word == "in" {
                        toks.push(Tok::In);
                    } else {
                        toks.push(Tok::Name(word));
                    }
                }
                _ => return Err(Error::Parse(format!("unexpected character `{c}`"))),
            }
        }
        Ok(toks)
    }

    struct P {
        toks: Vec<Tok>,
        pos: usize,
    }

    impl P {
        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.pos)
        }

        fn eat(&mut self, t: &Tok) -> Result<()> {
            if self.peek() == Some(t) {
                self.pos += 1;
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "expected {t:?} at token {}",
                    self.pos
                )))
            }
        }

        fn implication(&mut self) -> Result<Expr> {
            let lhs = self.disjunction()?;
            if self.peek() == Some(&Tok::Implies) {
                self.pos += 1;
                let rhs = self.implication()?;
                return Ok(Expr::Implies(Box::new(lhs), Box::new(rhs)));
            }
            Ok(lhs)
        }

        fn disjunction(&mut self) -> Result<Expr> {
            let mut lhs = self.conjunction()?;
            while self.peek() == Some(&Tok::Or) {
                self.pos += 1;
                let rhs = self.conjunction()?;
                lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
            }
            Ok(lhs)
        }

        fn conjunction(&mut self) -> Result<Expr> {
            let mut lhs = self.negation()?;
            while self.peek() == Some(&Tok::And) {
                self.pos += 1;
                let rhs = self.negation()?;
                lhs = Expr::And(Box::new(lhs), Box::new(rhs));
            }
            Ok(lhs)
        }

        fn negation(&mut self) -> Result<Expr> {
            if self.peek() == Some(&Tok::Not) {
                self.pos += 1;
                return Ok(Expr::Not(Box::new(self.negation()?)));
            }
            self.atom()
        }

        fn atom(&mut self) -> Result<Expr> {
            match self.peek().cloned() {
                Some(Tok::LParen) => {
                    self.pos += 1;
                    let e = self.implication()?;
                    self.eat(&Tok::RParen)?;
                    Ok(e)
                }
                Some(Tok::Name(name)) => {
                    self.pos += 1;
                    if self.peek() == Some(&Tok::In) {
                        self.pos += 1;
                        let mut intervals = Vec::new();
                        loop {
                            self.eat(&Tok::LBracket)?;
                            let lo = self.num()?;
                            self.eat(&Tok::Comma)?;
                            let hi = self.num()?;
                            self.eat(&Tok::RBracket)?;
                            intervals.push((lo, hi));
                            if self.peek() == Some(&Tok::Comma) {
                                self.pos += 1;
                            } else {
                                break;
                            }
                        }
                        Ok(Expr::ObsIn(name, intervals))
                    } else {
                        Ok(Expr::Named(name))
                    }
                }
                other => Err(Error::Parse(format!("expected a proposition, got {other:?}"))),
            }
        }

        fn num(&mut self) -> Result<f64> {
            match self.peek().cloned() {
                Some(Tok::Num(v)) => {
                    self.pos += 1;
                    Ok(v)
                }
                other => Err(Error::Parse(format!("expected a number, got {other:?}"))),
            }
        }
    }

    pub fn parse(input: &str) -> Result<Expr> {
        let mut p = P {
            toks: tokenize(input)?,
            pos: 0,
        };
        let e = p.implication()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!(
                "trailing tokens after position {}",
                p.pos
            )));
        }
        Ok(e)
    }

    /// The projection of an atomic proposition (a name or "Obs in Δ").
    pub fn atom_projection(e: &Expr, model: &Model) -> Result<Projection> {
        let tol = &model.scenario.tolerances;
        match e {
            Expr::Named(name) => {
                let prop = model
                    .scenario
                    .propositions
                    .get(name)
                    .ok_or_else(|| Error::UnknownProposition(name.clone()))?;
                let obs = model
                    .scenario
                    .observables
                    .get(&prop.observable)
                    .ok_or_else(|| Error::UnknownProposition(prop.observable.clone()))?;
                Ok(spectral_projection(obs, &prop.intervals, tol))
            }
            Expr::ObsIn(obs_name, intervals) => {
                let obs = model
                    .scenario
                    .observables
                    .get(obs_name)
                    .ok_or_else(|| Error::UnknownProposition(obs_name.clone()))?;
                let delta = IntervalUnion::new(intervals.clone())?;
                Ok(spectral_projection(obs, &delta, tol))
            }
            _ => Err(Error::Parse(
                "expected an atomic proposition (name or `Obs in [a,b]`)".into(),
            )),
        }
    }

    /// Evaluates an expression in Sub_cl(Σ): atoms are daseinised, the
    /// connectives act on clopen subobjects, never on projections.
    pub fn eval(e: &Expr, model: &Model) -> Result<ClopenSubobject> {
        let ps = &model.presheaf;
        match e {
            Expr::Named(_) | Expr::ObsIn(..) => {
                crate::daseinisation::daseinise(&atom_projection(e, model)?, ps)
            }
            Expr::Not(inner) => eval(inner, model)?.negate(ps),
            Expr::And(a, b) => eval(a, model)?.meet(&eval(b, model)?),
            Expr::Or(a, b) => eval(a, model)?.join(&eval(b, model)?),
            Expr::Implies(a, b) => eval(a, model)?.implies(&eval(b, model)?, ps),
        }
    }
}

pub use expr::{eval as eval_proposition, parse as parse_proposition};

// ---------------------------------------------------------------------------
// command implementations

fn resolve_model(model: &Option<PathBuf>, preset_name: &Option<String>) -> Result<Model> {
    match (model, preset_name) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            Model::from_document(&text)
        }
        (None, Some(name)) => Model::build(preset(name)?),
        _ => Err(Error::Parse(
            "exactly one of --model or --preset is required".into(),
        )),
    }
}

fn resolve_seed(flag: Option<u64>, model: &Model) -> u64 {
    flag.or_else(|| {
        std::env::var("TOPOSQ_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(model.scenario.report.seed)
}

#[derive(Debug, Serialize)]
struct BuildResults {
    contexts: usize,
    arrows: usize,
    characters: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<String>,
}

#[derive(Debug, Serialize)]
struct TruthRow {
    context: String,
    local_true: bool,
    sieve: Vec<String>,
}

#[derive(Debug, Serialize)]
struct TruthResults {
    state: String,
    proposition: String,
    totally_true: bool,
    totally_false: bool,
    per_context: Vec<TruthRow>,
}

#[derive(Debug, Serialize)]
struct MeasureResults {
    state: String,
    proposition: String,
    valuation: BTreeMap<String, f64>,
    antitone: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    bridge: Option<String>,
}

#[derive(Debug, Serialize)]
struct KsResults {
    global_sections: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    least_section: Option<BTreeMap<String, usize>>,
}

#[derive(Debug, Serialize)]
struct AxiomsResults {
    samples: u32,
    suites: Vec<Suite>,
    all_passed: bool,
}

#[derive(Debug, Serialize)]
struct DaseiniseRow {
    context: String,
    block_atoms: Vec<usize>,
    block_rank: usize,
    characters: Vec<usize>,
}

#[derive(Debug, Serialize)]
struct DaseiniseResults {
    proposition: String,
    per_context: Vec<DaseiniseRow>,
}

/// Writes to stdout, exiting quietly when the reader has gone away (EPIPE,
/// e.g. output piped into `head`).
fn print_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

fn emit<T: Serialize>(report: &Report<T>, format: Format, text: String, elapsed: f64) {
    match format {
        Format::Json => {
            print_stdout(&serde_json::to_string_pretty(report).expect("reports serialize"));
        }
        Format::Text => {
            print_stdout(&format!("{text}\n({elapsed:.1} ms)"));
        }
    }
}

fn fmt_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.chars().count());
        }
    }
    rows.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(k, cell)| format!("{:<width$}", cell, width = widths[k]))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn run_command(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Build {
            scenario,
            preset: preset_name,
            out,
        } => {
            let start = Instant::now();
            let scen = match (scenario, preset_name) {
                (Some(path), None) => load_scenario(&std::fs::read_to_string(path)?)?,
                (None, Some(name)) => preset(name)?,
                _ => {
                    return Err(Error::Parse(
                        "exactly one of --scenario or --preset is required".into(),
                    ))
                }
            };
            let model = Model::build(scen)?;
            let identity = ModelIdentity::of(&model);
            let mut diagnostics = Vec::new();
            let out_str = match out {
                Some(path) => {
                    std::fs::write(path, model.to_document())?;
                    diagnostics.push(format!("model written to {}", path.display()));
                    Some(path.display().to_string())
                }
                None => None,
            };
            let results = BuildResults {
                contexts: identity.contexts,
                arrows: identity.arrows,
                characters: identity.characters,
                out: out_str,
            };
            let text = format!(
                "built `{}`: {} contexts, {} arrows, {} characters{}",
                identity.name,
                results.contexts,
                results.arrows,
                results.characters,
                results
                    .out
                    .as_ref()
                    .map(|p| format!("\nmodel written to {p}"))
                    .unwrap_or_default()
            );
            let report = Report {
                command: "build".to_string(),
                model: identity,
                seed: None,
                results,
                diagnostics,
                timing_ms: None,
            };
            emit(&report, cli.format, text, start.elapsed().as_secs_f64() * 1e3);
            Ok(0)
        }

        Command::Truth {
            model,
            preset: preset_name,
            state,
            prop,
        } => {
            let start = Instant::now();
            let model = resolve_model(model, preset_name)?;
            let spec = model
                .scenario
                .states
                .get(state)
                .ok_or_else(|| Error::UnknownState(state.clone()))?;
            let psi = spec
                .as_pure()
                .ok_or(Error::NotPure(2))?
                .clone();
            let subobject = eval_proposition(&parse_proposition(prop)?, &model)?;
            let value = truth_value(&psi, &subobject, &model.presheaf)?;
            let poset = model.presheaf.poset();
            let per_context: Vec<TruthRow> = poset
                .contexts()
                .iter()
                .map(|c| -> Result<TruthRow> {
                    let sieve = value.sieve_at(c.id())?;
                    Ok(TruthRow {
                        context: c.id().to_string(),
                        local_true: value.local_truth(c.id())?,
                        sieve: sieve.members().iter().cloned().collect(),
                    })
                })
                .collect::<Result<_>>()?;
            let results = TruthResults {
                state: state.clone(),
                proposition: prop.clone(),
                totally_true: value.is_totally_true(poset)?,
                totally_false: value.is_totally_false(),
                per_context,
            };
            let mut rows = vec![vec![
                "context".to_string(),
                "local".to_string(),
                "sieve".to_string(),
            ]];
            for r in &results.per_context {
                rows.push(vec![
                    r.context.clone(),
                    if r.local_true { "true" } else { "false" }.to_string(),
                    format!("{{{}}}", r.sieve.join(", ")),
                ]);
            }
            let status = if results.totally_true {
                "totally true"
            } else if results.totally_false {
                "totally false"
            } else {
                "partially true"
            };
            let text = format!(
                "truth of `{prop}` in state `{state}`: {status}\n{}",
                fmt_table(&rows)
            );
            let report = Report {
                command: "truth".to_string(),
                model: ModelIdentity::of(&model),
                seed: None,
                results,
                diagnostics: Vec::new(),
                timing_ms: None,
            };
            emit(&report, cli.format, text, start.elapsed().as_secs_f64() * 1e3);
            Ok(0)
        }

        Command::Measure {
            model,
            preset: preset_name,
            state,
            prop,
        } => {
            let start = Instant::now();
            let model = resolve_model(model, preset_name)?;
            let spec = model
                .scenario
                .states
                .get(state)
                .ok_or_else(|| Error::UnknownState(state.clone()))?;
            let rho = spec.density();
            let subobject = eval_proposition(&parse_proposition(prop)?, &model)?;
            let valuation: AntitoneValuation = measure(&rho, &subobject, &model.presheaf)?;
            let poset = model.presheaf.poset();
            let antitone = valuation.is_antitone(poset, model.scenario.tolerances.eps_meas);

            // pure states must agree with the truth-value assignment
            let bridge = match spec {
                StateSpec::Pure(psi) => {
                    let value = truth_value(psi, &subobject, &model.presheaf)?;
                    let mut consistent = true;
                    for c in poset.contexts() {
                        let mu_one = valuation.value(c.id())?
                            >= 1.0 - model.scenario.tolerances.eps_meas;
                        if mu_one != value.local_truth(c.id())? {
                            consistent = false;
                        }
                    }
                    Some(if consistent { "consistent" } else { "inconsistent" }.to_string())
                }
                StateSpec::Density(_) => None,
            };
            let failed = !antitone || bridge.as_deref() == Some("inconsistent");
            let results = MeasureResults {
                state: state.clone(),
                proposition: prop.clone(),
                valuation: valuation.values().clone(),
                antitone,
                bridge,
            };
            let mut rows = vec![vec!["context".to_string(), "value".to_string()]];
            for (id, v) in &results.valuation {
                rows.push(vec![id.clone(), format!("{v}")]);
            }
            let text = format!(
                "measure of `{prop}` in state `{state}`\n{}\nantitone: {}{}",
                fmt_table(&rows),
                results.antitone,
                results
                    .bridge
                    .as_ref()
                    .map(|b| format!("\nbridge with truth values: {b}"))
                    .unwrap_or_default()
            );
            let report = Report {
                command: "measure".to_string(),
                model: ModelIdentity::of(&model),
                seed: None,
                results,
                diagnostics: Vec::new(),
                timing_ms: None,
            };
            emit(&report, cli.format, text, start.elapsed().as_secs_f64() * 1e3);
            Ok(if failed { 1 } else { 0 })
        }

        Command::Ks {
            model,
            preset: preset_name,
        } => {
            let start = Instant::now();
            let model = resolve_model(model, preset_name)?;
            let sections = global_sections(&model.presheaf);
            let results = KsResults {
                global_sections: sections.count,
                least_section: sections.least.clone(),
            };
            let text = match &sections.least {
                Some(least) => {
                    let mut rows = vec![vec!["context".to_string(), "character".to_string()]];
                    for (id, atom) in least {
                        rows.push(vec![id.clone(), atom.to_string()]);
                    }
                    format!(
                        "global sections: {}\nleast section:\n{}",
                        sections.count,
                        fmt_table(&rows)
                    )
                }
                None => format!(
                    "global sections: {} (Kochen-Specker obstruction: no consistent \
                     character family exists)",
                    sections.count
                ),
            };
            let report = Report {
                command: "ks".to_string(),
                model: ModelIdentity::of(&model),
                seed: None,
                results,
                diagnostics: Vec::new(),
                timing_ms: None,
            };
            emit(&report, cli.format, text, start.elapsed().as_secs_f64() * 1e3);
            Ok(0)
        }

        Command::Axioms {
            model,
            preset: preset_name,
            samples,
        } => {
            let start = Instant::now();
            let model = resolve_model(model, preset_name)?;
            let seed = resolve_seed(cli.seed, &model);
            let samples = samples.unwrap_or(model.scenario.report.samples);
            let suites = axioms_suites(&model.presheaf, samples as usize, seed)?;
            let all_passed = suites.iter().all(Suite::passed);
            let mut rows = vec![vec![
                "suite".to_string(),
                "check".to_string(),
                "status".to_string(),
                "detail".to_string(),
            ]];
            for suite in &suites {
                for check in &suite.checks {
                    rows.push(vec![
                        suite.name.clone(),
                        check.name.clone(),
                        if check.passed { "pass" } else { "FAIL" }.to_string(),
                        check.detail.clone(),
                    ]);
                }
            }
            let text = format!(
                "{}\noverall: {}",
                fmt_table(&rows),
                if all_passed { "all checks passed" } else { "FAILURES found" }
            );
            let results = AxiomsResults {
                samples,
                suites,
                all_passed,
            };
            let report = Report {
                command: "axioms".to_string(),
                model: ModelIdentity::of(&model),
                seed: Some(seed),
                results,
                diagnostics: Vec::new(),
                timing_ms: None,
            };
            emit(&report, cli.format, text, start.elapsed().as_secs_f64() * 1e3);
            Ok(if all_passed { 0 } else { 1 })
        }

        Command::Daseinise {
            model,
            preset: preset_name,
            prop,
        } => {
            let start = Instant::now();
            let model = resolve_model(model, preset_name)?;
            let parsed = parse_proposition(prop)?;
            let p = expr::atom_projection(&parsed, &model)?;
            let tol = &model.scenario.tolerances;
            let mut per_context = Vec::new();
            for ctx in model.presheaf.poset().contexts() {
                let indices = crate::daseinisation::daseinise_at_indices(&p, ctx, tol)?;
                let block = ctx.block(indices.iter().copied());
                per_context.push(DaseiniseRow {
                    context: ctx.id().to_string(),
                    block_atoms: indices.iter().copied().collect(),
                    block_rank: block.rank(),
                    characters: indices.into_iter().collect(),
                });
            }
            let results = DaseiniseResults {
                proposition: prop.clone(),
                per_context,
            };
            let mut rows = vec![vec![
                "context".to_string(),
                "block atoms".to_string(),
                "rank".to_string(),
                "alpha characters".to_string(),
            ]];
            for r in &results.per_context {
                rows.push(vec![
                    r.context.clone(),
                    format!("{:?}", r.block_atoms),
                    r.block_rank.to_string(),
                    format!("{:?}", r.characters),
                ]);
            }
            let text = format!(
                "outer daseinisation of `{prop}` (rank {} projection)\n{}",
                p.rank(),
                fmt_table(&rows)
            );
            let report = Report {
                command: "daseinise".to_string(),
                model: ModelIdentity::of(&model),
                seed: None,
                results,
                diagnostics: Vec::new(),
                timing_ms: None,
            };
            emit(&report, cli.format, text, start.elapsed().as_secs_f64() * 1e3);
            Ok(0)
        }
    }
}

/// Runs a parsed invocation and returns the process exit code
/// (0 ok, 1 property failure, 2 input error).
pub fn run(cli: Cli) -> i32 {
    match run_command(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
