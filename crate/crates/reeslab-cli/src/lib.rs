//! Command-line frontend for reeslab: problem files in, JSON (or text) reports out.

pub mod cache;
pub mod commands;
pub mod problem;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use crate::cache::{Cache, Lookup};
use crate::commands::{Failure, Outcome};
use crate::problem::{hex_sha256, ProblemFile};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Command {
    /// reduced Gröbner basis
    Gb,
    /// Hilbert series of I^j and A/I^j
    Hs,
    /// Hilbert polynomial, dimension and multiplicity of A/I^j
    Hp,
    /// generators and Hilbert data of I, I², …, I^J
    Powers,
    /// interpolate the Hilbert polynomials of A/I^j in j
    FitHp,
    /// mixed multiplicities of the Rees algebra and form ring
    MixedMult,
    /// interpolate the Hilbert series of I^j in j
    FitHs,
    /// graded Betti tables (with a resolution template for --max-power)
    Betti,
    /// Rees algebra presentation, series, fiber cone and resolution shifts
    Rees,
    /// Hilbert function and dimension of the diagonal k[(I^e)_c]
    Diag,
    /// Gorenstein diagonals of a structured family
    Gorenstein,
    /// Cohen–Macaulay test for a diagonal
    CmCheck,
    /// α with every diagonal c > de + α Cohen–Macaulay
    CmThreshold,
    /// generic initial ideal
    Gin,
    /// Borel-fixedness of a monomial ideal
    Borel,
    /// a* and regularity read off the resolution
    Reg,
    /// generic-form regularity test in the first degree
    BayerStillman,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }

    fn needs_problem(self) -> bool {
        !matches!(self, Command::Gorenstein | Command::CmThreshold)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug, Clone)]
#[command(name = "reeslab", version, about = "Hilbert series, Rees algebras, Betti tables of powers and diagonal criteria")]
#[command(allow_negative_numbers = true)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// problem file (field, vars, order, ideal, family)
    pub problem: Option<PathBuf>,
    /// work with I^j instead of I
    #[arg(long)]
    pub power: Option<u32>,
    /// sample the powers I, …, I^J
    #[arg(long = "max-power")]
    pub max_power: Option<u32>,
    /// diagonal (c, e): degree in the first component
    #[arg(long)]
    pub c: Option<i64>,
    /// diagonal (c, e): power of I
    #[arg(long)]
    pub e: Option<i64>,
    /// a²(G) of the form ring
    #[arg(long = "a2G")]
    pub a2g: Option<i64>,
    /// seed for the random coordinate changes (gin, bayer-stillman)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// independent coordinate changes that must agree (gin)
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    /// degree bound for tables and Hilbert function listings
    #[arg(long = "degree-cap")]
    pub degree_cap: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long = "no-cache")]
    pub no_cache: bool,
    /// family override: ci, equimultiple, scm, gorenstein, polyring, maxminors
    #[arg(long)]
    pub family: Option<String>,
    /// matrix rows (maxminors) or the candidate regularity (bayer-stillman)
    #[arg(long)]
    pub m: Option<i64>,
    /// matrix columns (maxminors)
    #[arg(long)]
    pub n: Option<i64>,
    /// stabilization threshold c (fits hold for j ≥ c + 1); detected when absent
    #[arg(long)]
    pub threshold: Option<i64>,
    /// term order for gin (defaults to the problem's order)
    #[arg(long)]
    pub order: Option<String>,
    /// report cache activity on standard error
    #[arg(short, long)]
    pub verbose: bool,
}

impl Args {
    /// Flags that influence the result, in canonical form.
    pub fn parameters(&self) -> Value {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            if !v.is_null() {
                m.insert(k.to_string(), v);
            }
        };
        put("power", json!(self.power));
        put("max_power", json!(self.max_power));
        put("c", json!(self.c));
        put("e", json!(self.e));
        put("a2G", json!(self.a2g));
        put("degree_cap", json!(self.degree_cap));
        put("family", json!(self.family));
        put("m", json!(self.m));
        put("n", json!(self.n));
        put("threshold", json!(self.threshold));
        put("order", json!(self.order));
        if matches!(self.command, Command::Gin | Command::BayerStillman) {
            put("seed", json!(self.seed));
        }
        if self.command == Command::Gin {
            put("trials", json!(self.trials));
        }
        Value::Object(m)
    }
}

/// What the process prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn load(args: &Args) -> Result<Option<ProblemFile>, Failure> {
    let Some(path) = &args.problem else {
        return if args.command.needs_problem() {
            Err(Failure::Error(format!("{} needs a problem file", args.command.name())))
        } else {
            Ok(None)
        };
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
    ProblemFile::parse(&text).map(Some).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn envelope(args: &Args, problem: Option<&ProblemFile>, out: &Outcome) -> Value {
    json!({
        "tool": "reeslab",
        "tool_version": TOOL_VERSION,
        "command": args.command.name(),
        "problem": problem.map(|p| json!({
            "hash": p.hash(),
            "vars": p.ring.vars,
            "degrees": p.ring.degrees.iter().map(|d| [d.d1, d.d2]).collect::<Vec<_>>(),
            "field": p.ring.field.characteristic(),
            "order": p.ring.order.to_string(),
            "ideal": p.ideal.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "family": p.family.canonical(),
        })),
        "parameters": args.parameters(),
        "status": if out.missing.is_empty() { "ok" } else { "needs-input" },
        "missing": out.missing,
        "result": out.result,
        "citations": out.citations,
        "assumptions": out.assumptions,
    })
}

fn render(args: &Args, report: &Value) -> String {
    match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("serializable report");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = report["text"].as_str().unwrap_or_default().to_string();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    }
}

/// Run one invocation against `cache` (None disables caching).
pub fn execute(args: &Args, cache: Option<&Cache>) -> Rendered {
    let mut stderr = String::new();
    let problem = match load(args) {
        Ok(p) => p,
        Err(f) => return failure(args, f),
    };
    let key = hex_sha256(
        format!(
            "{TOOL_VERSION}\n{}\n{}\n{}",
            args.command.name(),
            problem.as_ref().map(|p| p.canonical()).unwrap_or_default(),
            args.parameters()
        )
        .as_bytes(),
    );
    let produce = || -> Result<Value, Failure> {
        let out = commands::run(args, problem.as_ref())?;
        if !out.missing.is_empty() {
            return Err(Failure::NeedsInputReport(Box::new(envelope(args, problem.as_ref(), &out)), out.text));
        }
        let mut report = envelope(args, problem.as_ref(), &out);
        report["text"] = json!(out.text);
        Ok(report)
    };
    let result = match cache {
        Some(c) => c.lookup_store(&key, produce).map(|(v, l)| {
            if args.verbose {
                let what = match l {
                    Lookup::Hit => "hit",
                    Lookup::Miss => "miss",
                    Lookup::Repaired => "repaired",
                };
                stderr.push_str(&format!("cache {what}: {key}\n"));
            }
            v
        }),
        None => produce(),
    };
    match result {
        Ok(mut full) => {
            let text = full["text"].as_str().unwrap_or_default().to_string();
            if let Some(o) = full.as_object_mut() {
                o.remove("text");
            }
            let shown = match args.format {
                Format::Json => render(args, &full),
                Format::Text => render(args, &json!({"text": text})),
            };
            Rendered { stdout: shown, stderr, code: 0 }
        }
        Err(f) => {
            let mut r = failure(args, f);
            r.stderr = stderr + &r.stderr;
            r
        }
    }
}

fn failure(args: &Args, f: Failure) -> Rendered {
    match f {
        Failure::Error(msg) => Rendered { stdout: String::new(), stderr: format!("error: {msg}\n"), code: 1 },
        Failure::NeedsInput(names) => {
            let report = json!({
                "tool": "reeslab",
                "tool_version": TOOL_VERSION,
                "command": args.command.name(),
                "parameters": args.parameters(),
                "status": "needs-input",
                "missing": names,
            });
            let text = format!("needs input: {}", names.join(", "));
            let stdout = match args.format {
                Format::Json => render(args, &report),
                Format::Text => render(args, &json!({"text": text})),
            };
            let stderr = if args.format == Format::Json { format!("{text}\n") } else { String::new() };
            Rendered { stdout, stderr, code: 2 }
        }
        Failure::NeedsInputReport(report, text) => {
            let missing: Vec<String> =
                report["missing"].as_array().map(|a| a.iter().filter_map(|v| v.as_str().map(String::from)).collect()).unwrap_or_default();
            let stdout = match args.format {
                Format::Json => render(args, &report),
                Format::Text => render(args, &json!({"text": text})),
            };
            let stderr = if args.format == Format::Json { format!("needs input: {}\n", missing.join(", ")) } else { String::new() };
            Rendered { stdout, stderr, code: 2 }
        }
    }
}

/// Parse `argv`, run, and return what to print.
pub fn run_from<I, T>(argv: I) -> Rendered
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let s = e.render().to_string();
            return if code == 0 {
                Rendered { stdout: s, stderr: String::new(), code }
            } else {
                Rendered { stdout: String::new(), stderr: s, code }
            };
        }
    };
    let cache = (!args.no_cache).then(Cache::from_env);
    execute(&args, cache.as_ref())
}
