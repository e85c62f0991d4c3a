//! `coxwall`: command-line front end.
//!
//! Exit status: 0 on success, 1 when a computed check fails (or a resource
//! bound is hit), 2 on bad input.

use clap::{Args, Parser, Subcommand, ValueEnum};
use coxwall::automorphisms::{build_wall_fixing_automorphism, star_fixing_automorphisms};
use coxwall::classification::{
    is_hyperbolic, is_rigid, nerve, DiagramAutomorphism, StarFixingWitness,
};
use coxwall::complexes::{bourdon_system, cell_census_with_limit, system_from_graph, LinkGraph};
use coxwall::coxeter::{enumerate_ball_with_limit, presets, CoxeterSystem, DEFAULT_MAX_VERTICES};
use coxwall::even_polytopes::{
    andreev_check_str, coxeter_cell, even_polyhedra_table, instantiate_rank3, parallel_classes, verify_parallel_class,
    verify_simple,
};
use coxwall::walls::{check_axiom_m, check_axiom_m_pairs, is_geodesic_path_str};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "coxwall", version, about = "Walls, cells and automorphisms of Coxeter systems")]
struct Cli {
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArg {
    /// Coxeter matrix file: {"rank", "labels", "names"?}.
    #[arg(long, conflicts_with = "preset")]
    system: Option<PathBuf>,
    /// Built-in system, e.g. A3, H3, affine-A2, W6-K33, H3-bar, I2(7).
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the Cayley ball of a given radius.
    Ball {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decide whether a word is a geodesic path in the Cayley graph.
    Geodesic {
        #[command(flatten)]
        sys: SystemArg,
        /// Space-separated generator names.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Check the wall-length identity for pairs of a ball.
    WallsCheck {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long)]
        radius: usize,
        /// Check this many random pairs instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Faces of the nerve.
    Nerve {
        #[command(flatten)]
        sys: SystemArg,
    },
    /// Moussong's hyperbolicity criterion; exit 1 if not hyperbolic.
    Hyperbolic {
        #[command(flatten)]
        sys: SystemArg,
    },
    /// Rigidity test; exit 1 with a witness if not rigid.
    Rigid {
        #[command(flatten)]
        sys: SystemArg,
    },
    /// Face poset of the Coxeter cell of a finite system.
    Cell {
        #[command(flatten)]
        sys: SystemArg,
        /// Also check parallel classes and simplicity.
        #[arg(long)]
        verify: bool,
    },
    /// The table of even hyperbolic polyhedra, or an Andreev check.
    Table {
        #[arg(long, default_value_t = 3)]
        rank: usize,
        /// Instantiate the rank-3 families and run the Andreev check on each.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 12)]
        n_cap: u32,
        /// Values of m for the A1xI2(m) row.
        #[arg(long, value_delimiter = ',', default_value = "5,7,8,9,10,11,12")]
        m: Vec<u32>,
        /// Check a single cellulation (with --angles).
        #[arg(long, requires = "angles")]
        cellulation: Option<String>,
        /// Three angles such as pi/2,pi/3,pi/4.
        #[arg(long, value_delimiter = ',')]
        angles: Vec<String>,
    },
    /// Build W(p, K_{q,q}) or W(k, L); with --radius, its cell census.
    Building {
        #[arg(long, required_unless_present = "graph")]
        p: Option<u32>,
        #[arg(long, required_unless_present = "graph")]
        q: Option<usize>,
        /// Link graph {"vertices", "edges", "names"?} (with --k).
        #[arg(long, requires = "k", conflicts_with_all = ["p", "q"])]
        graph: Option<PathBuf>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Cosets wW_T with minimal representative in the ball, T in the nerve.
    Census {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long)]
        radius: usize,
    },
    /// Wall-fixing automorphism from a star-fixing diagram automorphism.
    Autom {
        #[command(flatten)]
        sys: SystemArg,
        /// Generator, by name or index.
        #[arg(long)]
        s: String,
        /// Permutation file: a JSON array of indices or names. Defaults to
        /// the first star-fixing automorphism for s.
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Exit 1 unless every check passes.
        #[arg(long)]
        verify: bool,
    },
    /// Graphviz rendering of a ball.
    ExportDot {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long)]
        radius: usize,
    },
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<coxwall::Error> for Failure {
    fn from(e: coxwall::Error) -> Self {
        match e {
            coxwall::Error::ResourceLimit { .. } => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Output text and whether the computed check passed.
struct Output {
    text: String,
    ok: bool,
}

fn json_output(v: &Value, ok: bool) -> Output {
    Output { text: serde_json::to_string_pretty(v).expect("serializable") + "\n", ok }
}

fn max_vertices() -> Result<usize, Failure> {
    match std::env::var("COXWALL_MAX_VERTICES") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Failure::Input(format!("COXWALL_MAX_VERTICES must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(DEFAULT_MAX_VERTICES),
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_system(arg: &SystemArg) -> Result<CoxeterSystem, Failure> {
    match (&arg.system, &arg.preset) {
        (Some(path), _) => Ok(CoxeterSystem::from_json(&read(path)?)?),
        (None, Some(name)) => Ok(presets::by_name(name)?),
        (None, None) => Err(Failure::Input("one of --system or --preset is required".into())),
    }
}

fn generator(sys: &CoxeterSystem, text: &str) -> Result<usize, Failure> {
    match text.parse::<usize>() {
        Ok(i) if i < sys.rank() => Ok(i),
        Ok(i) => Err(Failure::Input(format!("generator index {i} out of range"))),
        Err(_) => Ok(sys.generator_index(text)?),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Ball { sys, radius, format } => {
            let sys = load_system(sys)?;
            let ball = enumerate_ball_with_limit(&sys, *radius, max_vertices()?)?;
            Ok(match format {
                Format::Json => json_output(&to_json(&ball.to_export()), true),
                Format::Dot => Output { text: ball.to_dot()?, ok: true },
            })
        }
        Command::ExportDot { sys, radius } => {
            let sys = load_system(sys)?;
            let ball = enumerate_ball_with_limit(&sys, *radius, max_vertices()?)?;
            Ok(Output { text: ball.to_dot()?, ok: true })
        }
        Command::Geodesic { sys, word } => {
            let sys = load_system(sys)?;
            let report = is_geodesic_path_str(&sys, word)?;
            let nf = sys.normal_form(word)?;
            let mut v = to_json(&report);
            v["reduced"] = json!(sys.is_reduced_str(word)?);
            v["normal_form"] = json!(sys.word_names(nf.word()));
            Ok(json_output(&v, report.geodesic))
        }
        Command::WallsCheck { sys, radius, sample } => {
            let sys = load_system(sys)?;
            let ball = enumerate_ball_with_limit(&sys, *radius, max_vertices()?)?;
            let report = match sample {
                None => check_axiom_m(&ball),
                Some(n) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    let pairs: Vec<(usize, usize)> =
                        (0..*n).map(|_| (rng.gen_range(0..ball.len()), rng.gen_range(0..ball.len()))).filter(|(a, b)| a != b).collect();
                    check_axiom_m_pairs(&ball, Some(&pairs))
                }
            };
            Ok(json_output(&to_json(&report), report.passed()))
        }
        Command::Nerve { sys } => {
            let sys = load_system(sys)?;
            let n = nerve(&sys);
            let names = |mask: u64| -> Vec<&str> { (0..sys.rank()).filter(|s| mask >> s & 1 == 1).map(|s| sys.name(s)).collect() };
            let v = json!({
                "dimension": n.dimension(),
                "faces": n.named_faces(&sys),
                "maximal_faces": n.maximal_faces().into_iter().map(names).collect::<Vec<_>>(),
            });
            Ok(json_output(&v, true))
        }
        Command::Hyperbolic { sys } => {
            let sys = load_system(sys)?;
            let r = is_hyperbolic(&sys);
            Ok(json_output(&to_json(&r), r.hyperbolic))
        }
        Command::Rigid { sys } => {
            let sys = load_system(sys)?;
            let r = is_rigid(&sys);
            Ok(json_output(&to_json(&r), r.rigid))
        }
        Command::Cell { sys, verify } => {
            let sys = load_system(sys)?;
            let cell = coxeter_cell(&sys)?;
            let mut v = to_json(&cell.to_export());
            v["face_vector"] = json!(cell.face_vector());
            let mut ok = true;
            if *verify {
                let classes = parallel_classes(&cell);
                let classes_ok = classes.iter().all(|c| verify_parallel_class(&cell, c));
                let simple = verify_simple(&cell);
                ok = classes_ok && simple;
                v["checks"] = json!({
                    "parallel_classes": classes.iter().map(|c| c.edges.len()).collect::<Vec<_>>(),
                    "reflections_swap_edges": classes_ok,
                    "simple": simple,
                });
            }
            Ok(json_output(&v, ok))
        }
        Command::Table { rank, check, n_cap, m, cellulation, angles } => {
            if let Some(id) = cellulation {
                if angles.len() != 3 {
                    return Err(Failure::Input(format!("--angles takes three values, got {}", angles.len())));
                }
                let r = andreev_check_str(id, [&angles[0], &angles[1], &angles[2]])?;
                return Ok(json_output(&to_json(&r), r.passed));
            }
            if !*check {
                return Ok(json_output(&to_json(&even_polyhedra_table(*rank)?), true));
            }
            if *rank != 3 {
                return Err(Failure::Input("--check applies to the rank-3 table".into()));
            }
            let mut ok = true;
            let mut rows = Vec::new();
            for inst in instantiate_rank3(*n_cap, m) {
                let r = coxwall::even_polytopes::andreev_check(&inst.cellulation, inst.angles)?;
                ok &= r.passed;
                let mut row = to_json(&inst);
                row["andreev"] = to_json(&r);
                rows.push(row);
            }
            Ok(json_output(&Value::Array(rows), ok))
        }
        Command::Building { p, q, graph, k, radius } => {
            let sys = match graph {
                Some(path) => {
                    let g = LinkGraph::from_json(&read(path)?)?;
                    system_from_graph(&g, k.expect("clap enforces --k"))?
                }
                None => bourdon_system(p.expect("clap enforces --p"), q.expect("clap enforces --q"))?,
            };
            match radius {
                None => Ok(json_output(&to_json(&sys.to_file()), true)),
                Some(r) => Ok(json_output(&to_json(&cell_census_with_limit(&sys, *r, max_vertices()?)?), true)),
            }
        }
        Command::Census { sys, radius } => {
            let sys = load_system(sys)?;
            let c = cell_census_with_limit(&sys, *radius, max_vertices()?)?;
            Ok(json_output(&to_json(&c), true))
        }
        Command::Autom { sys, s, f, radius, verify } => {
            let sys = load_system(sys)?;
            let s = generator(&sys, s)?;
            let witness = match f {
                Some(path) => {
                    let perm = parse_perm(&sys, &read(path)?)?;
                    StarFixingWitness { s, automorphism: DiagramAutomorphism { perm } }
                }
                None => star_fixing_automorphisms(&sys)
                    .into_iter()
                    .find(|w| w.s == s)
                    .ok_or_else(|| Failure::Input(format!("no star-fixing automorphism fixes {}", sys.name(s))))?,
            };
            let phi = build_wall_fixing_automorphism(&sys, &witness, *radius)?;
            Ok(json_output(&phi.to_json(&sys), !*verify || phi.checks.all()))
        }
    }
}

fn parse_perm(sys: &CoxeterSystem, text: &str) -> Result<Vec<usize>, Failure> {
    let v: Vec<Value> = serde_json::from_str(text).map_err(|e| Failure::Input(format!("permutation file: {e}")))?;
    v.iter()
        .map(|x| match x {
            Value::Number(n) => n
                .as_u64()
                .map(|n| n as usize)
                .filter(|&n| n < sys.rank())
                .ok_or_else(|| Failure::Input(format!("bad generator index {n}"))),
            Value::String(name) => generator(sys, name),
            other => Err(Failure::Input(format!("bad permutation entry {other}"))),
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    let (text, code) = match result {
        Ok(out) => (Some(out.text), if out.ok { 0 } else { 1 }),
        Err(Failure::Check(msg)) => {
            eprintln!("coxwall: {msg}");
            (None, 1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("coxwall: {msg}");
            (None, 2)
        }
    };
    if let Some(text) = text {
        match &cli.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("coxwall: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            None => print!("{text}"),
        }
    }
    ExitCode::from(code)
}
