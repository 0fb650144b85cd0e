use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ldual::characters::{character_from_crystal, langlands_branching};
use ldual::crystal::{CrystalGraph, Monomial, MonomialCrystal, DEFAULT_BUDGET};
use ldual::liealg::{CartanData, Weight};
use ldual::sweep::{campaign_json, run_campaign, CAMPAIGNS};
use ldual::Error;

/// Directory used for artifacts when no --out is given.
const CACHE_ENV: &str = "LDUAL_CACHE_DIR";

#[derive(Parser)]
#[command(name = "ldual", version, about = "Langlands duality for crystals and characters")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the monomial crystal of an irreducible and print its census.
    Crystal {
        #[command(flatten)]
        target: Target,
        /// Highest monomial, e.g. "1_0^2 2_1"; overrides the default parity.
        #[arg(long)]
        seed: Option<String>,
        /// Export the Langlands dual crystal on the P' elements instead.
        #[arg(long)]
        dual: bool,
        /// Maximal number of crystal elements.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Artifact path; defaults to $LDUAL_CACHE_DIR or stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose the folded character into dual irreducibles.
    Branch {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification campaign; exit 1 if any assertion fails.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(CAMPAIGNS))]
        campaign: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct Target {
    /// Type name such as B2, G2, A2x2, or a Cartan datum as JSON.
    #[arg(long = "type")]
    ty: String,
    /// Comma-separated fundamental weight coordinates.
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) | Error::Singular(_) | Error::DivisionByZero => Failure::Run(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn parse_type(s: &str) -> Result<CartanData, Failure> {
    if s.trim_start().starts_with('{') {
        let c: CartanData = serde_json::from_str(s).map_err(|e| Failure::Usage(format!("bad Cartan JSON: {e}")))?;
        let lacing = if c.lacing == 0 { c.labels.iter().copied().max().unwrap_or(1) } else { c.lacing };
        return Ok(CartanData::with_lacing(c.name, c.cartan, c.labels, lacing)?);
    }
    Ok(CartanData::from_name(s)?)
}

fn parse_weight(c: &CartanData, s: &str) -> Result<Weight, Failure> {
    let coords = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::Usage(format!("bad weight {s:?}")))?;
    let lam = Weight(coords);
    c.check_dim(&lam)?;
    if !c.dominant(&lam) {
        return Err(Error::NotDominant(lam).into());
    }
    Ok(lam)
}

fn weight_tag(w: &Weight) -> String {
    w.0.iter().map(i64::to_string).collect::<Vec<_>>().join("_")
}

/// Writes to `out`, to the cache directory under `name`, or to stdout.
fn emit(text: &str, out: Option<PathBuf>, name: &str) -> Result<(), Failure> {
    let path = out.or_else(|| std::env::var_os(CACHE_ENV).map(|d| PathBuf::from(d).join(name)));
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| Failure::Run(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(&p, text).map_err(|e| Failure::Run(format!("{}: {e}", p.display())))?;
            say(&format!("wrote {}", p.display()));
        }
        None => say_raw(text),
    }
    Ok(())
}

/// Prints a line; a closed pipe is not an error.
fn say(line: &str) {
    say_raw(&format!("{line}\n"));
}

fn say_raw(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn census(g: &CrystalGraph<Monomial>) -> Vec<String> {
    let mut lines = vec![format!("elements {}", g.len())];
    let tilde = g.tilde_subcrystal();
    let comps = tilde.components();
    lines.push(format!("tilde elements {}, components {}", tilde.len(), comps.len()));
    for members in comps {
        let tops: Vec<String> = members
            .iter()
            .filter(|&&x| tilde.e.iter().all(|ei| ei[x].is_none()))
            .map(|&x| tilde.wt[x].to_string())
            .collect();
        lines.push(format!("  component highest {} size {}", tops.join(" "), members.len()));
    }
    lines
}

fn cmd_crystal(
    target: Target,
    seed: Option<String>,
    dual: bool,
    budget: usize,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let c = parse_type(&target.ty)?;
    let ops = MonomialCrystal::new(c.clone())?;
    let given = target.weight.as_deref().map(|s| parse_weight(&c, s)).transpose()?;
    let top = match seed {
        Some(s) => {
            let m: Monomial = s.parse()?;
            let wt = m.weight(c.rank());
            if !c.dominant(&wt) || given.as_ref().is_some_and(|w| *w != wt) {
                return Err(Failure::Usage(format!("seed {m} has weight {wt}")));
            }
            m
        }
        None => {
            let lam = given.ok_or_else(|| Failure::Usage("--weight or --seed is required".into()))?;
            ops.highest(&lam)?
        }
    };
    let lam = top.weight(c.rank());
    let g = CrystalGraph::generate(&ops, top.clone(), budget)?;
    say(&format!("type {} weight {} seed {}", c.name, lam, top));
    for line in census(&g) {
        say(&line);
    }
    let stem = format!("crystal-{}-{}{}", c.name, weight_tag(&lam), if dual { "-dual" } else { "" });
    let (art, ext) = match format {
        Format::Text => {
            say(&format!("character {}", character_from_crystal(&g).to_y_notation()));
            return Ok(());
        }
        Format::Dot if dual => (g.tilde_subcrystal().to_dot(&stem), "dot"),
        Format::Dot => (g.to_dot(&stem), "dot"),
        Format::Json if dual => (pretty(&g.tilde_subcrystal().to_json()), "json"),
        Format::Json => (pretty(&g.to_json()), "json"),
    };
    emit(&art, out, &format!("{stem}.{ext}"))
}

fn cmd_branch(target: Target, format: Format, out: Option<PathBuf>) -> Result<(), Failure> {
    let c = parse_type(&target.ty)?;
    let s = target.weight.ok_or_else(|| Failure::Usage("--weight is required".into()))?;
    let lam = parse_weight(&c, &s)?;
    let rows = langlands_branching(&c, &lam)?;
    let text = match format {
        Format::Json => pretty(&Value::Array(
            rows.iter().map(|(mu, m)| json!({ "weight": mu, "multiplicity": m })).collect(),
        )),
        Format::Text => rows.iter().map(|(mu, m)| format!("{mu} {m}\n")).collect(),
        Format::Dot => return Err(Failure::Usage("branch has no dot output".into())),
    };
    emit(&text, out, &format!("branch-{}-{}.{}", c.name, weight_tag(&lam), if format == Format::Json { "json" } else { "txt" }))
}

/// Returns whether every assertion passed.
fn cmd_verify(campaign: &str, format: Format, out: Option<PathBuf>) -> Result<bool, Failure> {
    let results = run_campaign(campaign)?;
    let passed = results.iter().all(|(_, r)| r.passed());
    let text = match format {
        Format::Json => pretty(&campaign_json(&results)),
        Format::Text => {
            let mut s = String::new();
            for (k, r) in &results {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                s += &format!("{verdict} criterion {k}: {} checks, {} failed\n", r.entries.len(), r.failures().len());
                for f in r.failures() {
                    s += &format!("  {} {} {}: {}\n", f.module, f.relation_id, f.vector, f.witness_polynomial);
                }
            }
            s
        }
        Format::Dot => return Err(Failure::Usage("verify has no dot output".into())),
    };
    let ext = if format == Format::Json { "json" } else { "txt" };
    emit(&text, out, &format!("verify-{campaign}.{ext}"))?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Crystal { target, seed, dual, budget, format, out } => {
            cmd_crystal(target, seed, dual, budget, format, out).map(|_| true)
        }
        Cmd::Branch { target, format, out } => cmd_branch(target, format, out).map(|_| true),
        Cmd::Verify { campaign, format, out } => cmd_verify(&campaign, format, out),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
