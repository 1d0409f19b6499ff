use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nilricci::catalog::CatalogEntry;
use nilricci::io::{matrix_strings, parse_algebra_json, parse_metric_arg};
use nilricci::nice::{NewtonConfig, Outcome, RealizeConfig, Realizer};
use nilricci::rational::{parse_q, to_f64};
use nilricci::signature::{ricci_signature, sign_set};
use nilricci::{Catalog, Error, LieAlgebra, SignatureTriple};

mod text;

const EXIT_VALIDATION: u8 = 2;
const EXIT_INCOMPLETE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "nilricci", version, about = "Ricci signatures of left-invariant metrics on nilpotent Lie groups")]
struct Cli {
    #[arg(long, global = true, env = "NILRICCI_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the randomized searches.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, global = true)]
    max_iters: Option<usize>,
    /// Comma-separated ε values, e.g. `1/4,1/16,1/64`.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_eps)]
    eps_ladder: Option<Vec<f64>>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in algebras.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Ricci form, block reduction and signature of one metric.
    Ricci {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// `diag:a1,…,an` or a metric JSON file.
        #[arg(long)]
        metric: String,
        /// JSON array of column expressions, or the list inline: `e4,e3,e5+e3+e1,e1,e2`.
        #[arg(long)]
        basis_change: Option<String>,
    },
    /// The admissible signature set.
    SignSet {
        #[command(flatten)]
        algebra: AlgebraArg,
    },
    /// Certified metrics for one or all admissible signatures.
    Realize {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// `s-,s0,s+`
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        target: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Sign sets and realizations for every catalog entry against the stored rows.
    Table3 {
        /// Catalog JSON to use instead of the built-in one.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { id: String },
}

#[derive(Args)]
struct AlgebraArg {
    /// Catalog id (e.g. `L6_11`, `m0(7)`) or path to an algebra JSON file.
    #[arg(long)]
    algebra: String,
}

fn parse_eps(s: &str) -> Result<f64, String> {
    let v = parse_q(s).map_err(|e| e.to_string())?;
    let f = to_f64(&v);
    if f > 0.0 {
        Ok(f)
    } else {
        Err(format!("ε must be positive, got {s}"))
    }
}

/// Result of a subcommand: the report and the exit code it implies.
struct Report {
    json: Value,
    text: String,
    code: u8,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Self { json, text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&r.json).expect("JSON values serialize") + "\n",
                Format::Text => r.text,
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(r.code)
        }
        Err(e) => {
            match cli.format {
                Format::Json => println!("{}", json!({ "error": e.to_string() })),
                Format::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(if e.is_internal() { EXIT_INTERNAL } else { EXIT_VALIDATION })
        }
    }
}

fn realize_config(cli: &Cli) -> RealizeConfig {
    let mut newton = NewtonConfig::default();
    if let Some(n) = cli.max_iters {
        newton.max_iters = n;
    }
    if let Some(l) = &cli.eps_ladder {
        newton.eps_ladder = l.clone();
    }
    RealizeConfig {
        newton,
        seed: cli.seed,
        ..RealizeConfig::default()
    }
}

fn run(cli: &Cli) -> nilricci::Result<Report> {
    let catalog = Catalog::builtin();
    match &cli.command {
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                let ids = catalog.list();
                Ok(Report::ok(json!(ids), ids.iter().map(|i| format!("{i}\n")).collect()))
            }
            CatalogAction::Show { id } => {
                let e = catalog.lookup(id)?;
                let json = serde_json::to_value(&e.raw)?;
                Ok(Report::ok(json, text::entry(&e)))
            }
        },
        Command::Ricci {
            algebra,
            metric,
            basis_change,
        } => {
            let (id, alg, _) = load_algebra(catalog, &algebra.algebra)?;
            let cols = basis_change.as_deref().map(read_basis_change).transpose()?;
            let g = parse_metric_arg(alg.dim(), metric, cols)?;
            let r = ricci_signature(&alg, &g)?;
            let [n1, n2, n3, n4] = r.splitting.sizes();
            let b = &r.reduced.blocks;
            let json = json!({
                "algebra": id,
                "gram": matrix_strings(g.gram()),
                "ric_form": matrix_strings(&r.ric_form),
                "splitting": { "k_plus": n1, "o_plus": n2, "k_minus": n3, "o_minus": n4 },
                "adapted_basis": matrix_strings(&r.splitting.basis),
                "blocks": {
                    "Z": matrix_strings(&b.z), "V": matrix_strings(&b.v), "X": matrix_strings(&b.x),
                    "W": matrix_strings(&b.w), "Y": matrix_strings(&b.y),
                },
                "reduced": matrix_strings(&b.r),
                "signature": r.signature,
                "full_inertia": r.full_inertia,
                "p": n3,
                "m": r.reduced.reduced_signature,
            });
            Ok(Report::ok(json, text::ricci(&id, &r)))
        }
        Command::SignSet { algebra } => {
            let (id, alg, _) = load_algebra(catalog, &algebra.algebra)?;
            let set = sign_set(alg.dimension_profile()?);
            let rows: Vec<Value> = set
                .triples
                .iter()
                .map(|t| {
                    let decs: Vec<Value> = set
                        .decompositions(t)
                        .into_iter()
                        .map(|(p, m)| json!({ "p": p, "m": m }))
                        .collect();
                    json!({ "signature": t, "decompositions": decs })
                })
                .collect();
            let json = json!({ "algebra": id, "profile": set.profile, "sign_set": rows });
            Ok(Report::ok(json, text::sign_set(&id, &set)))
        }
        Command::Realize { algebra, target, all } => {
            let (id, alg, entry) = load_algebra(catalog, &algebra.algebra)?;
            let cfg = realize_config(cli);
            let realizer = match &entry {
                Some(e) => Realizer::for_entry(e, cfg)?,
                None => Realizer::new(&alg, cfg)?,
            };
            let outcomes = if *all {
                realizer.realize_all()?
            } else {
                let t = parse_target(target.as_deref().expect("clap requires --target without --all"))?;
                vec![realizer.realize(t)?]
            };
            let code = if outcomes.iter().all(Outcome::is_realized) { 0 } else { EXIT_INCOMPLETE };
            let json = json!({ "algebra": id, "outcomes": outcomes });
            Ok(Report {
                json,
                text: text::outcomes(&id, &outcomes),
                code,
            })
        }
        Command::Table3 { catalog: path, max_dim } => {
            let owned;
            let cat = match path {
                Some(p) => {
                    owned = Catalog::from_json(&std::fs::read_to_string(p)?)?;
                    &owned
                }
                None => catalog,
            };
            let cfg = realize_config(cli);
            let mut rows = Vec::new();
            for e in cat.entries().iter().filter(|e| e.algebra.dim() <= *max_dim) {
                rows.push(table_row(e, cfg.clone())?);
            }
            let failed = rows.iter().filter(|r| !r.pass()).count();
            let json = json!({
                "rows": rows.iter().map(TableRow::to_json).collect::<Vec<_>>(),
                "summary": { "entries": rows.len(), "pass": rows.len() - failed, "fail": failed },
            });
            Ok(Report {
                json,
                text: text::table(&rows),
                code: if failed == 0 { 0 } else { EXIT_INCOMPLETE },
            })
        }
    }
}

pub(crate) struct TableRow {
    pub id: String,
    pub dim: usize,
    pub expected: Option<Vec<SignatureTriple>>,
    pub computed: Vec<SignatureTriple>,
    pub outcomes: Vec<Outcome>,
}

impl TableRow {
    pub fn sign_set_matches(&self) -> Option<bool> {
        self.expected.as_ref().map(|e| e == &self.computed)
    }

    pub fn realized(&self) -> usize {
        self.outcomes.iter().filter(|o| o.is_realized()).count()
    }

    pub fn pass(&self) -> bool {
        self.sign_set_matches() != Some(false) && self.realized() == self.outcomes.len()
    }

    fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "dim": self.dim,
            "expected": self.expected,
            "computed": self.computed,
            "sign_set_match": self.sign_set_matches(),
            "realized": self.realized(),
            "targets": self.outcomes.len(),
            "status": if self.pass() { "PASS" } else { "FAIL" },
            "outcomes": self.outcomes,
        })
    }
}

fn table_row(e: &CatalogEntry, cfg: RealizeConfig) -> nilricci::Result<TableRow> {
    let realizer = Realizer::for_entry(e, cfg)?;
    let mut expected: Option<Vec<SignatureTriple>> = e.expected.as_ref().map(|s| s.iter().copied().collect());
    if let Some(v) = expected.as_mut() {
        v.sort();
    }
    Ok(TableRow {
        id: e.id.clone(),
        dim: e.algebra.dim(),
        expected,
        computed: realizer.sign_set().triples.iter().copied().collect(),
        outcomes: realizer.realize_all()?,
    })
}

/// A readable file is parsed as algebra JSON; anything else is a catalog id.
fn load_algebra(catalog: &Catalog, arg: &str) -> nilricci::Result<(String, LieAlgebra, Option<CatalogEntry>)> {
    if Path::new(arg).is_file() {
        let alg = parse_algebra_json(&std::fs::read_to_string(arg)?)?;
        let n = alg.dim();
        let alg = alg.with_labels((1..=n).map(|i| format!("e{i}")).collect());
        return Ok((arg.to_string(), alg, None));
    }
    let e = catalog.lookup(arg)?;
    Ok((e.id.clone(), e.algebra.clone(), Some(e)))
}

fn read_basis_change(arg: &str) -> nilricci::Result<Vec<String>> {
    if Path::new(arg).is_file() {
        return Ok(serde_json::from_str(&std::fs::read_to_string(arg)?)?);
    }
    Ok(arg.split(',').map(|s| s.trim().to_string()).collect())
}

fn parse_target(s: &str) -> nilricci::Result<SignatureTriple> {
    let parts: Vec<&str> = s.trim().trim_matches(|c| c == '(' || c == ')').split(',').collect();
    let bad = || Error::Parse(format!("target must look like `s-,s0,s+`, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<usize> = parts
        .iter()
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect::<nilricci::Result<_>>()?;
    Ok(SignatureTriple::new(v[0], v[1], v[2]))
}
