use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use twistcalc_core::claims;
use twistcalc_core::cobordism::{self, PatternMode};
use twistcalc_core::layers;
use twistcalc_core::mcg::{self, Slope};
use twistcalc_core::plumbing::{self, PlumbingGraph};
use twistcalc_core::seifert::{self, ScanOptions, SeifertData};
use twistcalc_core::{parse_word, CatalogId, Error, Parallelism};

#[derive(Parser)]
#[command(name = "twistcalc", version, about = "Exact torus mapping-class, plumbing, Seifert and contact-layer calculus")]
struct Cli {
    /// Machine-readable output; integers are decimal strings.
    #[arg(long, global = true)]
    json: bool,
    /// Spread independent cases over threads. Output order is unchanged.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Twist words and SL(2,Z).
    #[command(subcommand)]
    Mcg(McgCmd),
    /// Plumbing graphs.
    #[command(subcommand)]
    Plumbing(PlumbingCmd),
    /// Seifert fibered spaces.
    #[command(subcommand)]
    Seifert(SeifertCmd),
    /// Surgery configurations and the b2+ certificate.
    #[command(subcommand)]
    Cobordism(CobordismCmd),
    /// Toric layer traces.
    #[command(subcommand)]
    Layers(LayersCmd),
    /// Recompute every numeric claim and compare with the expected values.
    VerifyPaper,
}

#[derive(Subcommand)]
enum McgCmd {
    /// Matrix of a word.
    Eval { word: String },
    /// Twist slope of each factor.
    Slopes { word: String },
    /// Elliptic, parabolic or hyperbolic, with trace and finite order.
    Classify { word: String },
    /// `g w g⁻¹` as a word in twists along moved slopes.
    Conjugate {
        word: String,
        #[arg(long)]
        by: String,
    },
    /// Image of a slope (`p/q`, `m`, `inf` or `x,y`) under a word.
    Act {
        word: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
}

#[derive(Subcommand)]
enum PlumbingCmd {
    /// Determinant, inertia, boundary homology and bad vertices of a graph file.
    Analyze { file: PathBuf },
    /// A built-in graph, e.g. `Plum`, `E7tilde`, `VillaA(2)`, `Chain(3,-2)`.
    Catalog { id: String },
}

#[derive(Subcommand)]
enum SeifertCmd {
    /// Sign-change scan of δ_t over spin^c tuples.
    LspaceCheck {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<i64>,
        /// Comma-separated ξ_1,…,ξ_n.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Option<Vec<i64>>,
        /// Scan the fixed window [-N, N]; also scales the default ξ₀.
        #[arg(long)]
        window: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        xi0: Option<i64>,
    },
    /// Star-shaped plumbing of a genus-0 space.
    ToPlumbing { file: PathBuf },
    /// First homology from the surgery presentation.
    Homology { file: PathBuf },
}

#[derive(Subcommand)]
enum CobordismCmd {
    /// Look for the γ pattern in a positive word and attach the plumbing data.
    Certify {
        word: String,
        /// Accept a³b a³b a³b aᵏ blocks in place of the exact γ shape.
        #[arg(long)]
        relaxed_pattern: bool,
    },
    /// Surgery layers, linking matrix and regluing map of a positive word.
    Config { word: String },
}

#[derive(Subcommand)]
enum LayersCmd {
    /// Boundary-slope trace of the twelve surgeries removing a Lutz layer.
    Trace {
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
}

/// What a subcommand produced, and whether it counts as a success.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Report { text: text.into(), json, ok: true }
    }
}

/// Exit 2 for malformed input, 1 for everything that went wrong later.
fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Syntax { .. } | Error::Input(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = Parallelism::from_flag(cli.parallel);
    match run(cli.command, mode) {
        Ok(r) => {
            let out = if cli.json {
                serde_json::to_string_pretty(&r.json).expect("values serialize")
            } else {
                r.text.trim_end().to_string()
            };
            // a closed pipe is not our failure
            let _ = writeln!(io::stdout().lock(), "{out}");
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(&e),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn run(cmd: Command, mode: Parallelism) -> Result<Report, Error> {
    match cmd {
        Command::Mcg(c) => run_mcg(c),
        Command::Plumbing(c) => run_plumbing(c),
        Command::Seifert(c) => run_seifert(c, mode),
        Command::Cobordism(c) => run_cobordism(c, mode),
        Command::Layers(LayersCmd::Trace { n }) => {
            let t = layers::reduce_torsion_script(n)?;
            let ok = t.accumulated_matrix().is_identity();
            Ok(Report { text: t.to_string(), json: t.to_json(), ok })
        }
        Command::VerifyPaper => {
            let results = claims::verify_paper(mode)?;
            let mut text = String::new();
            for r in &results {
                let mark = if r.passed() { "pass" } else { "FAIL" };
                text += &format!("{mark}  {:<28} {}\n", r.claim_id, r.description);
                if !r.passed() {
                    text += &format!("      expected {}\n      computed {}\n", r.expected, r.computed);
                }
            }
            let passed = results.iter().filter(|r| r.passed()).count();
            text += &format!("{passed}/{} claims pass", results.len());
            Ok(Report { text, json: claims::claims_json(&results), ok: passed == results.len() })
        }
    }
}

fn run_mcg(cmd: McgCmd) -> Result<Report, Error> {
    Ok(match cmd {
        McgCmd::Eval { word } => {
            let w = parse_word(&word)?;
            let m = mcg::eval_word(&w);
            let text = format!("{m}{}", if m.is_identity() { "  (identity)" } else { "" });
            Report::ok(text, json!({"word": w.to_string(), "matrix": m, "identity": m.is_identity()}))
        }
        McgCmd::Slopes { word } => {
            let w = parse_word(&word)?;
            let slopes = mcg::layer_slopes(&w);
            let text = slopes.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
            Report::ok(text, json!({"word": w.to_string(), "slopes": slopes}))
        }
        McgCmd::Classify { word } => {
            let m = mcg::eval_word(&parse_word(&word)?);
            let c = mcg::classify_monodromy(&m);
            let order = c.order.map_or("infinite".to_string(), |k| k.to_string());
            let text = format!("{}, trace {}, order {order}", c.kind, c.trace);
            Report::ok(
                text,
                json!({"matrix": m, "kind": c.kind, "trace": c.trace.to_string(), "order": c.order.map(|k| k.to_string())}),
            )
        }
        McgCmd::Conjugate { word, by } => {
            let w = parse_word(&word)?;
            let g = parse_word(&by)?;
            let out = mcg::conjugate_word(&w, &g);
            let m = mcg::eval_word(&out);
            Report::ok(format!("{out}\n{m}"), json!({"word": out.to_string(), "factors": out, "matrix": m}))
        }
        McgCmd::Act { word, slope } => {
            let w = parse_word(&word)?;
            let s: Slope = slope.parse()?;
            let image = mcg::act_on_slope(&mcg::eval_word(&w), &s);
            Report::ok(image.to_string(), json!({"slope": s, "image": image}))
        }
    })
}

fn run_plumbing(cmd: PlumbingCmd) -> Result<Report, Error> {
    let (graph, name) = match cmd {
        PlumbingCmd::Analyze { file } => {
            let g: PlumbingGraph = read_json(&file)?;
            (g, file.display().to_string())
        }
        PlumbingCmd::Catalog { id } => {
            let id: CatalogId = id.parse()?;
            (plumbing::catalog(&id)?, id.to_string())
        }
    };
    let report = plumbing::analyze(&graph);
    let mut json = report.to_json();
    json["name"] = json!(name);
    json["graph"] = serde_json::to_value(&graph).expect("graph serializes");
    let text = format!("{name}\n{report}\nintersection matrix\n{}", plumbing::intersection_matrix(&graph));
    Ok(Report::ok(text, json))
}

fn run_seifert(cmd: SeifertCmd, mode: Parallelism) -> Result<Report, Error> {
    Ok(match cmd {
        SeifertCmd::LspaceCheck { file, t, xi, window, xi0 } => {
            let d: SeifertData = read_json(&file)?;
            let opts = ScanOptions { xi0, t, xi, window, mode };
            let r = seifert::lspace_check(&d, &opts)?;
            let mut text = format!("{}\nlambda {}, xi0 {}\n", r.data, r.data.lambda(), r.xi0);
            for v in &r.tuples {
                text += &format!(
                    "t {:>3}  xi {:?}  window [{}, {}]  changes {}  tails {}  unique min {}\n",
                    v.params.t,
                    v.params.xi,
                    v.window.0,
                    v.window.1,
                    v.scan.changes,
                    if v.scan.tail_certain { "certain" } else { "open" },
                    v.unique_min
                );
            }
            text += r.verdict();
            // outside a > 2g the scan is informational only
            let ok = !r.applicable || r.all_pass();
            Report { text, json: r.to_json(), ok }
        }
        SeifertCmd::ToPlumbing { file } => {
            let d: SeifertData = read_json(&file)?;
            let g = seifert::seifert_to_plumbing(&d)?;
            let report = plumbing::analyze(&g);
            let mut json = report.to_json();
            json["graph"] = serde_json::to_value(&g).expect("graph serializes");
            Report::ok(format!("{d}\nweights {:?}\nedges {:?}\n{report}", g.weights(), g.edges()), json)
        }
        SeifertCmd::Homology { file } => {
            let d: SeifertData = read_json(&file)?;
            let h = seifert::surgery_homology(&d)?;
            Report::ok(format!("H1 = {h}"), json!({"data": d, "homology": h, "text": h.to_string()}))
        }
    })
}

fn run_cobordism(cmd: CobordismCmd, mode: Parallelism) -> Result<Report, Error> {
    Ok(match cmd {
        CobordismCmd::Certify { word, relaxed_pattern } => {
            let w = parse_word(&word)?;
            let pattern = if relaxed_pattern { PatternMode::Relaxed } else { PatternMode::Strict };
            let c = cobordism::b2plus_certificate(&w, pattern, mode)?;
            let text = if c.found {
                let norm = c.normalization.map(|n| n.to_string()).unwrap_or_default();
                let (a, b) = c.positions.unwrap_or_default();
                format!(
                    "pattern found ({norm}), factors {a}..{b}, exponents {:?}\nplumbing det {}, inertia {}\nb2+ >= 1",
                    c.exponents,
                    c.det.as_ref().map(ToString::to_string).unwrap_or_default(),
                    c.inertia.map(|i| i.to_string()).unwrap_or_default(),
                )
            } else {
                "no gamma pattern found; no certificate".to_string()
            };
            Report { text, json: c.to_json(), ok: c.found }
        }
        CobordismCmd::Config { word } => {
            let w = parse_word(&word)?;
            let cfg = cobordism::config_from_word(&w, None)?;
            let lk = cobordism::linking_matrix(&cfg);
            let reglue = cobordism::regluing_matrix(&cfg);
            let mut text = String::from("level   slope  count\n");
            for l in cfg.layers().iter().rev() {
                text += &format!("{:<7} {:<6} {}\n", l.level.to_string(), l.slope.to_string(), l.count);
            }
            text += &format!("linking matrix\n{}\nregluing {reglue}", lk.to_string().trim_end());
            let layers: Vec<Value> = cfg
                .layers()
                .iter()
                .map(|l| json!({"level": l.level.to_string(), "slope": l.slope, "count": l.count.to_string()}))
                .collect();
            Report::ok(text, json!({"layers": layers, "linking_matrix": lk, "regluing": reglue}))
        }
    })
}
