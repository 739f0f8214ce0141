//! Command-line front end: every operation of the calculator behind one
//! binary, reading and writing the shared JSON schemas.
//!
//! Exit codes: 0 success, 1 domain/parse error, 2 capacity, 3 selftest
//! failure.

mod render;

use braidcx::json::{
    bar_combo_from_json, bar_combo_to_json, bracket_from_str, cobar_combo_from_json,
    cobar_combo_to_json, diagram_combo_from_json, diagram_combo_to_json, diagram_to_json,
    dual_combo_from_json, dual_combo_to_json, tree_to_json, ComboJson, ComboTermJson,
    WordComboJson,
};
use braidcx::rat::format_q;
use braidcx::theta::Caps;
use braidcx::{
    bar_differential, cobar_differential, differential, dual_differential, enumerate_diagrams,
    free_lie_dimension, ihx_system, is_exact, lift_cocycle, milnor_dims, pair,
    primitive_homology_dims, product, shuffle_product, theta, theta_sum, theta_tilde,
    tree_normal_form, tree_of_bracket, verify_bar_cocycle, yang_baxter_elements, Context,
    Convention, Error, Quotient,
};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Read;
use std::process::ExitCode;

#[derive(Clone, Copy, ValueEnum)]
enum QuotientArg {
    Dbar,
    D,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Samelson,
    Whitehead,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "braidcx", about = "Exact calculator for braid diagram complexes")]
struct Cli {
    /// Strand count
    #[arg(long, global = true, default_value_t = 2)]
    m: usize,
    /// Ambient dimension (>= 3); only its parity affects orientations
    #[arg(long, global = true, default_value_t = 3)]
    n: usize,
    /// Diagram algebra: with (Dbar) or without (D) multiple edges
    #[arg(long, global = true, value_enum, default_value = "dbar")]
    quotient: QuotientArg,
    /// Bracket convention used by theta
    #[arg(long, global = true, value_enum, default_value = "samelson")]
    convention: ConventionArg,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: FormatArg,
    /// Resource cap for basis enumerations
    #[arg(long, global = true, default_value_t = 2_000_000)]
    cap: u64,
    /// Seed for randomized property runs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Differential of a diagram combo (edge contractions)
    Diff { input: Option<String> },
    /// Dual differential of a dual combo (vertex blow-ups)
    DualDiff { input: Option<String> },
    /// Product of two diagram combos
    Mult { lhs: String, rhs: String },
    /// Bar or cobar differential of a word combo (side tag decides)
    BarDiff { input: Option<String> },
    /// Shuffle product of two bar combos
    Shuffle { lhs: String, rhs: String },
    /// Pairing of a cobar combo against a bar combo
    Pair { lhs: String, rhs: String },
    /// Theta of a bracket expression, e.g. --bracket "[[3,1],[3,2]]"
    Theta {
        #[arg(long)]
        bracket: String,
    },
    /// The tree of a bracket, or with --image its theta-tilde image
    Tree {
        #[arg(long)]
        bracket: String,
        /// Project theta(bracket) to trees instead of printing T(B)
        #[arg(long)]
        image: bool,
        /// Reduce modulo IHX to the caterpillar-preferred normal form
        #[arg(long)]
        reduce: bool,
    },
    /// Lift a primitive cocycle seed to a full bar cocycle
    Lift { input: Option<String> },
    /// Check that a bar combo is closed
    Verify { input: Option<String> },
    /// Dimension of the primitive delta*-homology in one degree
    Homology {
        #[arg(long)]
        degree: isize,
        /// Largest free-vertex count scanned per block
        #[arg(long, default_value_t = 3)]
        max_free: usize,
    },
    /// Dimension formulas: Milnor/braid invariant counts, tree-space
    /// quotients, free graded Lie algebra components
    Dims {
        /// P_r(m) and M_r(m) for the given r
        #[arg(long)]
        milnor: bool,
        #[arg(long)]
        r: Option<u64>,
        /// Quotient dimension of trees on these leaves, e.g. --trees 1,2,3
        #[arg(long)]
        trees: Option<String>,
        /// Free graded Lie dimension, e.g. --free-lie g,len,degree
        #[arg(long)]
        free_lie: Option<String>,
    },
    /// All canonical diagrams with the given edge and free counts
    Enumerate {
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        free: usize,
    },
    /// Map every Yang-Baxter relation through theta and test exactness
    YbCheck,
    /// Run the randomized property suites
    Selftest {
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

fn read_input(path: &Option<String>) -> Result<String, Error> {
    match path.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{p}: {e}"))),
    }
}

fn read_file(path: &str) -> Result<String, Error> {
    read_input(&Some(path.to_string()))
}

fn parse_combo_json(s: &str) -> Result<ComboJson, Error> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("combo JSON at {}: {e}", e.column())))
}

fn parse_word_json(s: &str) -> Result<WordComboJson, Error> {
    serde_json::from_str(s)
        .map_err(|e| Error::Parse(format!("word-combo JSON at {}: {e}", e.column())))
}

fn run(cli: &Cli) -> Result<(), Error> {
    let ctx = Context::new(
        cli.m,
        cli.n,
        match cli.quotient {
            QuotientArg::Dbar => Quotient::Dbar,
            QuotientArg::D => Quotient::D,
        },
    )?;
    let convention = match cli.convention {
        ConventionArg::Samelson => Convention::Samelson,
        ConventionArg::Whitehead => Convention::Whitehead,
    };
    let caps = Caps::with_candidates(cli.cap);
    let text = matches!(cli.format, FormatArg::Text);

    match &cli.cmd {
        Cmd::Diff { input } => {
            let x = diagram_combo_from_json(&parse_combo_json(&read_input(input)?)?, Some(ctx))?;
            let d = differential(&x)?;
            if text {
                print!("{}", render::render_diagram_combo(&d));
            } else {
                println!("{}", serde_json::to_string(&diagram_combo_to_json(&d)).unwrap());
            }
        }
        Cmd::DualDiff { input } => {
            let x = dual_combo_from_json(&parse_combo_json(&read_input(input)?)?, Some(ctx))?;
            let d = dual_differential(&x)?;
            if text {
                print!("{}", render::render_dual_combo(&d));
            } else {
                println!("{}", serde_json::to_string(&dual_combo_to_json(&d)).unwrap());
            }
        }
        Cmd::Mult { lhs, rhs } => {
            let x = diagram_combo_from_json(&parse_combo_json(&read_file(lhs)?)?, Some(ctx))?;
            let y = diagram_combo_from_json(&parse_combo_json(&read_file(rhs)?)?, Some(ctx))?;
            let p = product(&x, &y)?;
            if text {
                print!("{}", render::render_diagram_combo(&p));
            } else {
                println!("{}", serde_json::to_string(&diagram_combo_to_json(&p)).unwrap());
            }
        }
        Cmd::BarDiff { input } => {
            let j = parse_word_json(&read_input(input)?)?;
            match j.side.as_str() {
                "bar" => {
                    let x = bar_combo_from_json(&j, Some(ctx))?;
                    let d = bar_differential(&x)?;
                    if text {
                        print!("{}", render::render_bar_combo(&d));
                    } else {
                        println!("{}", serde_json::to_string(&bar_combo_to_json(&d)).unwrap());
                    }
                }
                "cobar" => {
                    let x = cobar_combo_from_json(&j, Some(ctx))?;
                    let d = cobar_differential(&x)?;
                    if text {
                        print!("{}", render::render_cobar_combo(&d));
                    } else {
                        println!("{}", serde_json::to_string(&cobar_combo_to_json(&d)).unwrap());
                    }
                }
                other => return Err(Error::Parse(format!("unknown side {other:?}"))),
            }
        }
        Cmd::Shuffle { lhs, rhs } => {
            let x = bar_combo_from_json(&parse_word_json(&read_file(lhs)?)?, Some(ctx))?;
            let y = bar_combo_from_json(&parse_word_json(&read_file(rhs)?)?, Some(ctx))?;
            let s = shuffle_product(&x, &y)?;
            if text {
                print!("{}", render::render_bar_combo(&s));
            } else {
                println!("{}", serde_json::to_string(&bar_combo_to_json(&s)).unwrap());
            }
        }
        Cmd::Pair { lhs, rhs } => {
            let x = cobar_combo_from_json(&parse_word_json(&read_file(lhs)?)?, Some(ctx))?;
            let y = bar_combo_from_json(&parse_word_json(&read_file(rhs)?)?, Some(ctx))?;
            let v = pair(&x, &y)?;
            if text {
                println!("{}", format_q(&v));
            } else {
                println!("{}", serde_json::json!({ "value": format_q(&v) }));
            }
        }
        Cmd::Theta { bracket } => {
            let b = bracket_from_str(bracket)?;
            let t = theta(&b, ctx, convention)?;
            if text {
                print!("{}", render::render_dual_combo(&t));
            } else {
                println!("{}", serde_json::to_string(&dual_combo_to_json(&t)).unwrap());
            }
        }
        Cmd::Tree { bracket, image, reduce } => {
            let b = bracket_from_str(bracket)?;
            let mut trees = if *image {
                theta_tilde(&theta(&b, ctx, convention)?)?
            } else {
                tree_of_bracket(&b, ctx)?
            };
            if *reduce {
                trees = tree_normal_form(ctx, &trees, cli.cap)?;
            }
            if text {
                print!("{}", render::render_tree_combo(&trees));
            } else {
                let j = ComboJson {
                    terms: trees
                        .iter()
                        .map(|(t, c)| ComboTermJson {
                            coeff: format_q(c),
                            diagram: tree_to_json(t),
                        })
                        .collect(),
                };
                println!("{}", serde_json::to_string(&j).unwrap());
            }
        }
        Cmd::Lift { input } => {
            let z0 = diagram_combo_from_json(&parse_combo_json(&read_input(input)?)?, Some(ctx))?;
            let z = lift_cocycle(&z0, caps)?;
            if text {
                print!("{}", render::render_bar_combo(&z));
                print!("{}", render::render_transcript(&z));
            } else {
                println!("{}", serde_json::to_string(&bar_combo_to_json(&z)).unwrap());
                eprint!("{}", render::render_transcript(&z));
            }
        }
        Cmd::Verify { input } => {
            let z = bar_combo_from_json(&parse_word_json(&read_input(input)?)?, Some(ctx))?;
            let ok = verify_bar_cocycle(&z)?;
            println!("{ok}");
        }
        Cmd::Homology { degree, max_free } => {
            let mut c = caps;
            c.max_free = *max_free;
            let dim = primitive_homology_dims(ctx, *degree, c)?;
            if text {
                println!("{dim}");
            } else {
                println!("{}", serde_json::json!({ "degree": degree, "dim": dim }));
            }
        }
        Cmd::Dims { milnor, r, trees, free_lie } => {
            if *milnor {
                let r = r.ok_or_else(|| Error::Domain("--milnor needs --r".into()))?;
                let (p, mm) = milnor_dims(cli.m as u64, r)?;
                println!("{{\"P\":{p},\"M\":{mm}}}");
            } else if let Some(ts) = trees {
                let leaves: Vec<usize> = ts
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("leaf {s:?}"))))
                    .collect::<Result<_, _>>()?;
                let sys = ihx_system(ctx, &leaves, cli.cap)?;
                println!("{}", serde_json::json!({ "dim": sys.quotient_dim() }));
            } else if let Some(fl) = free_lie {
                let parts: Vec<usize> = fl
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("part {s:?}"))))
                    .collect::<Result<_, _>>()?;
                if parts.len() != 3 {
                    return Err(Error::Domain("--free-lie wants g,len,degree".into()));
                }
                let dim = free_lie_dimension(parts[0], parts[1], parts[2])?;
                println!("{}", serde_json::json!({ "dim": dim }));
            } else {
                return Err(Error::Domain(
                    "dims wants one of --milnor, --trees, --free-lie".into(),
                ));
            }
        }
        Cmd::Enumerate { edges, free } => {
            let ds = enumerate_diagrams(ctx, *edges, *free, cli.cap)?;
            if text {
                for d in &ds {
                    println!("{}", render::render_diagram(d));
                }
            } else {
                let v: Vec<_> = ds.iter().map(diagram_to_json).collect();
                println!("{}", serde_json::to_string(&v).unwrap());
            }
        }
        Cmd::YbCheck => {
            let els = yang_baxter_elements(cli.m, cli.n)?;
            let mut all_ok = true;
            for el in &els {
                let th = theta_sum(&el.terms, ctx, convention)?;
                let exact = is_exact(&th, caps)?;
                all_ok &= exact;
                println!(
                    "{} {}{}",
                    if exact { "ok " } else { "FAIL" },
                    el.label,
                    if el.implied { " (implied)" } else { "" }
                );
            }
            if !all_ok {
                return Err(Error::Domain("a Yang-Baxter element is not exact".into()));
            }
        }
        Cmd::Selftest { cases } => {
            let reports = braidcx::selftest::run_all(cli.seed, *cases)?;
            let mut failed = false;
            for rep in &reports {
                match &rep.result {
                    Ok(()) => println!("ok   {} ({} cases)", rep.name, rep.cases),
                    Err(e) => {
                        failed = true;
                        println!("FAIL {}: {e}", rep.name);
                    }
                }
            }
            if failed {
                std::process::exit(3);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Capacity(msg)) => {
            eprintln!("capacity error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
