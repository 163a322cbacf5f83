//! The `lexsym` command line. [`run`] is the whole program minus process
//! plumbing, so tests can drive it in-process.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lexsym_core::analysis::{check_first_iteration_consequences, verify_wl_separation};
use lexsym_core::decompose::{complement_twin_quotient, component_decomposition, qut, twin_quotient};
use lexsym_core::group::automorphisms;
use lexsym_core::io::{parse_graph, parse_graph6_corpus, to_graph6, to_text, Format};
use lexsym_core::sweep::{sweep, SweepOptions};
use lexsym_core::wl::stable_colouring;
use lexsym_core::{analyze_product, lex_product, Error, Graph};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Largest oracle bound accepted on the command line.
pub const MAX_ORACLE_BOUND: usize = 30;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Auto,
    Text,
    Graph6,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Auto => Format::Auto,
            FormatArg::Text => Format::Text,
            FormatArg::Graph6 => Format::Graph6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Graph6,
}

#[derive(Debug, Parser)]
#[command(
    name = "lexsym",
    version,
    about = "WL refinement and symmetry analysis of lexicographic graph products"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Input graph format.
    #[arg(long, global = true, value_enum, default_value = "auto")]
    pub format: FormatArg,
    /// Emit JSON reports.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest vertex count handed to the automorphism oracle.
    #[arg(long, global = true, default_value_t = 14)]
    pub max_degree: usize,
    /// Largest graph on which WL refinement is run.
    #[arg(long, global = true, default_value_t = 256)]
    pub max_wl_vertices: usize,
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the lexicographic product X[Y].
    Product {
        x: PathBuf,
        y: PathBuf,
        /// Output format for the product.
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
    },
    /// Stable 2-WL colouring.
    Wl { graph: PathBuf },
    /// Automorphism group order, orbits and orbitals.
    Aut { graph: PathBuf },
    /// Wreath conditions, group expressions and classical cross-check for X[Y].
    Analyze { x: PathBuf, y: PathBuf },
    /// Twin quotients and component decomposition.
    Decompose { graph: PathBuf },
    /// Certified expression for the quantum automorphism group.
    Qut { graph: PathBuf },
    /// Run every check on X[Y]; exits 2 if any fails.
    Verify { x: PathBuf, y: PathBuf },
    /// Exhaustive classical check over pairs of small graphs.
    Sweep {
        #[arg(long)]
        max_nx: usize,
        #[arg(long)]
        max_ny: usize,
        /// graph6 corpus to draw factors from.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Include per-pair records in the report.
        #[arg(long)]
        records: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn compute<E: Into<Error>>(e: E) -> Failure {
    Failure::from(e.into())
}

/// Parse `argv` (including the program name), run the verb, write the report
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.as_bytes());
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "lexsym: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "lexsym: {msg}");
            EXIT_COMPUTE
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let g = &cli.global;
    if g.max_degree > MAX_ORACLE_BOUND {
        return Err(Failure::Usage(format!(
            "--max-degree {} exceeds the supported maximum {MAX_ORACLE_BOUND}",
            g.max_degree
        )));
    }
    match &cli.command {
        Command::Product { x, y, emit } => cmd_product(g, x, y, *emit),
        Command::Wl { graph } => cmd_wl(g, graph),
        Command::Aut { graph } => cmd_aut(g, graph),
        Command::Analyze { x, y } => cmd_analyze(g, x, y),
        Command::Decompose { graph } => cmd_decompose(g, graph),
        Command::Qut { graph } => cmd_qut(g, graph),
        Command::Verify { x, y } => cmd_verify(g, x, y),
        Command::Sweep {
            max_nx,
            max_ny,
            corpus,
            records,
        } => cmd_sweep(g, *max_nx, *max_ny, corpus.as_deref(), *records),
    }
}

fn read_graph(g: &Global, path: &Path) -> Result<Graph, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
    parse_graph(&text, g.format.into()).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn wl_budget(g: &Global, n: usize) -> Result<(), Failure> {
    if n > g.max_wl_vertices {
        Err(Failure::Compute(format!(
            "graph on {n} vertices exceeds the WL budget {}; raise it with --max-wl-vertices",
            g.max_wl_vertices
        )))
    } else {
        Ok(())
    }
}

fn cmd_product(g: &Global, x: &Path, y: &Path, emit: Emit) -> Outcome {
    let (x, y) = (read_graph(g, x)?, read_graph(g, y)?);
    let z = lex_product(&x, &y).map_err(compute)?;
    if g.json {
        return Ok(pretty(&json!({"schema": 1, "graph": z, "graph6": to_graph6(&z)})));
    }
    Ok(match emit {
        Emit::Text => to_text(&z),
        Emit::Graph6 => format!("{}\n", to_graph6(&z)),
    })
}

fn cmd_wl(g: &Global, path: &Path) -> Outcome {
    let graph = read_graph(g, path)?;
    wl_budget(g, graph.n())?;
    let trace = stable_colouring(&graph);
    let stable = trace.stable();
    let rows = stable.rows();
    if g.json {
        return Ok(pretty(&json!({
            "schema": 1,
            "rounds": trace.refinement_count(),
            "stable_round": trace.stable_round,
            "classes": stable.num_colours(),
            "vertex_classes": stable.vertex_class_count(),
            "colour": rows,
        })));
    }
    let mut s = format!(
        "rounds {}\nclasses {}\nvertex_classes {}\n",
        trace.refinement_count(),
        stable.num_colours(),
        stable.vertex_class_count()
    );
    for row in rows {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    Ok(s)
}

fn cmd_aut(g: &Global, path: &Path) -> Outcome {
    let graph = read_graph(g, path)?;
    let group = automorphisms(&graph, g.max_degree).map_err(compute)?;
    let orbits = group.orbits();
    let orbitals = group.orbitals();
    let generators: Vec<&[usize]> = group.generators().iter().map(|p| p.images()).collect();
    if g.json {
        return Ok(pretty(&json!({
            "schema": 1,
            "order": group.order(),
            "orbits": orbits,
            "orbitals_count": orbitals.len(),
            "generators": generators,
        })));
    }
    let orbit_text: Vec<String> = orbits
        .iter()
        .map(|o| {
            format!(
                "{{{}}}",
                o.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            )
        })
        .collect();
    Ok(format!(
        "order {}\norbits {}\norbitals {}\n",
        group.order(),
        orbit_text.join(" "),
        orbitals.len()
    ))
}

fn cmd_analyze(g: &Global, x: &Path, y: &Path) -> Outcome {
    let (x, y) = (read_graph(g, x)?, read_graph(g, y)?);
    let report = analyze_product(&x, &y, g.max_degree).map_err(compute)?;
    let n = x.n() * y.n();
    let separation = if !report.conditions.wreath_holds {
        Value::from("not_applicable")
    } else if n > g.max_wl_vertices {
        Value::from("skipped(budget)")
    } else {
        serde_json::to_value(verify_wl_separation(&x, &y)).expect("serialisable")
    };
    let mut v = report.to_json();
    v["separation"] = separation;
    if g.json {
        return Ok(pretty(&v));
    }
    let c = &report.conditions;
    let mut s = format!(
        "condition_i {}\ncondition_ii {}\nwreath_holds {}\nverdict {}\nquantum {}\nclassical {}\n",
        c.condition_i,
        c.condition_ii,
        c.wreath_holds,
        v["verdict"].as_str().unwrap_or("?"),
        report.quantum_expr,
        report.classical_expr.simplify(),
    );
    match &report.classical {
        Some(cc) => s.push_str(&format!(
            "aut_order {}\nwreath_order {}\nequal {}\n",
            cc.aut_order, cc.wreath_order, cc.equal
        )),
        None => s.push_str("classical_check skipped(bound)\n"),
    }
    if let Some(r) = &report.reason {
        s.push_str(&format!("reason {r}\n"));
    }
    Ok(s)
}

fn cmd_decompose(g: &Global, path: &Path) -> Outcome {
    let graph = read_graph(g, path)?;
    let v = json!({
        "schema": 1,
        "twin_quotient": twin_quotient(&graph),
        "complement_twin_quotient": complement_twin_quotient(&graph),
        "components": component_decomposition(&graph, g.max_degree),
    });
    Ok(pretty(&v))
}

fn cmd_qut(g: &Global, path: &Path) -> Outcome {
    let graph = read_graph(g, path)?;
    wl_budget(g, graph.n())?;
    let e = qut(&graph, g.max_degree);
    if g.json {
        return Ok(pretty(&json!({
            "schema": 1,
            "expr": e.to_string(),
            "tree": e.to_json(),
            "graphs": e.graphs_json(),
        })));
    }
    Ok(format!("{e}\n"))
}

fn cmd_verify(g: &Global, x: &Path, y: &Path) -> Outcome {
    let (x, y) = (read_graph(g, x)?, read_graph(g, y)?);
    let z = lex_product(&x, &y).map_err(compute)?;
    wl_budget(g, z.n())?;
    let report = analyze_product(&x, &y, g.max_degree).map_err(compute)?;
    let mut failures: Vec<String> = Vec::new();

    let separation = verify_wl_separation(&x, &y);
    let separated = separation.inner_outer_edges_separated && separation.inner_outer_nonedges_separated;
    if report.conditions.wreath_holds && !separated {
        failures.push("conditions hold but WL does not separate inner from outer pairs".into());
    }
    let first = check_first_iteration_consequences(&x, &y);
    if !first.violations.is_empty() {
        failures.push(format!("{} first-round violations", first.violations.len()));
    }
    let iff = report.classical.as_ref().map(|c| {
        let ok = if report.conditions.wreath_holds {
            c.equal
        } else {
            lexsym_core::num_bigint::BigUint::from(c.aut_order) > c.wreath_order
        };
        if !ok {
            failures.push("classical order contradicts the wreath conditions".into());
        }
        ok
    });

    // Relabel the product at random and compare invariants.
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut perm: Vec<usize> = (0..z.n()).collect();
    perm.shuffle(&mut rng);
    let relabelled = z.relabel(&perm);
    let classes = |h: &Graph| stable_colouring(h).stable().num_colours();
    let mut invariant = classes(&z) == classes(&relabelled);
    if z.n() <= g.max_degree {
        let a = automorphisms(&z, g.max_degree).map_err(compute)?.order();
        let b = automorphisms(&relabelled, g.max_degree).map_err(compute)?.order();
        invariant &= a == b;
    }
    if !invariant {
        failures.push("invariants changed under relabelling".into());
    }

    let v = json!({
        "schema": 1,
        "wreath_holds": report.conditions.wreath_holds,
        "separation": separation,
        "first_iteration": first,
        "classical_iff": match iff {
            Some(ok) => Value::from(ok),
            None => Value::from("skipped(bound)"),
        },
        "relabelling_invariant": invariant,
        "seed": g.seed,
        "failures": failures,
    });
    if failures.is_empty() {
        Ok(pretty(&v))
    } else {
        Err(Failure::Compute(format!(
            "verification failed: {}\n{}",
            failures.join("; "),
            serde_json::to_string(&v).expect("serialisable")
        )))
    }
}

fn cmd_sweep(g: &Global, max_nx: usize, max_ny: usize, corpus: Option<&Path>, records: bool) -> Outcome {
    let mut opts = SweepOptions::new(max_nx, max_ny);
    opts.bound = g.max_degree;
    if let Some(path) = corpus {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
        opts.corpus = Some(
            parse_graph6_corpus(&text).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?,
        );
    }
    let mut summary = sweep(&opts).map_err(compute)?;
    if !records {
        summary.records.clear();
    }
    let mut v = serde_json::to_value(&summary).expect("serialisable");
    if !records {
        v.as_object_mut().expect("object").remove("records");
    }
    let mut out = json!({"schema": 1, "max_nx": max_nx, "max_ny": max_ny, "bound": g.max_degree});
    for (k, val) in v.as_object().expect("object") {
        out[k] = val.clone();
    }
    Ok(pretty(&out))
}
