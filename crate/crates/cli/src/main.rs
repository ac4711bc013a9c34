use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use treeramsey::colouring::{make_construction, Colour, ConstructionKind, ConstructionParams, TwoColouring};
use treeramsey::counterexamples::{
    demo_thm62, gen_thm13, gen_thm14, verify_thm13, verify_thm14, CounterexampleCertificate, ExactCheck, Thm62Params,
};
use treeramsey::embed::{decide_arrows, Arrow};
use treeramsey::ramsey::{lower_bound, ramsey_exact_with, SearchConfig};
use treeramsey::rational::parse_rational64;
use treeramsey::tree::{cut_with_small_boundary, decompose_balanced, decompose_bipartite_skew, make_caterpillar, Tree, TreeProfile};
use treeramsey::weights::{abc_sets, max_weight, qr_report, verify_solution, Digraph, WeightProblem};
use treeramsey::Error;

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "treeramsey", version, about = "Ramsey numbers of pairs of trees")]
struct Cli {
    /// Worker threads for parallel searches.
    #[arg(long, global = true, default_value_t = 1, env = "TREERAMSEY_JOBS")]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The four-construction lower bound from class sizes or from two trees.
    LowerBound(LowerBoundArgs),
    /// Print a tree as JSON (or DOT).
    GenTree {
        #[command(flatten)]
        tree: TreeArg,
        #[arg(long)]
        dot: bool,
    },
    /// Print one of the extremal colourings A1, A2, B1-B4.
    GenConstruction {
        #[arg(long)]
        kind: ConstructionKind,
        #[arg(long)]
        t1: usize,
        #[arg(long)]
        t2: usize,
        #[arg(long, default_value_t = 1)]
        s1: usize,
        #[arg(long, default_value_t = 1)]
        s2: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Does a colouring contain a red T or a blue S?
    CheckArrows {
        #[arg(long)]
        colouring_file: PathBuf,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        budget: Budget,
    },
    /// Exact R(T, S) by exhaustive colouring search.
    Ramsey {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Certificate for the first counterexample family.
    #[command(name = "verify-thm13")]
    VerifyThm13 {
        #[arg(long = "C")]
        c: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        dot: bool,
    },
    /// Certificate for the second counterexample family.
    #[command(name = "verify-thm14")]
    VerifyThm14 {
        #[arg(long = "C")]
        c: usize,
        #[arg(long)]
        rho: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        dot: bool,
    },
    /// Maximum alpha-weight function and A/B/C sets of a digraph, or the
    /// Q/R report of a colouring at a vertex.
    Weights(WeightsArgs),
    /// Split a tree into two subtrees.
    Decompose {
        #[command(flatten)]
        tree: TreeArg,
        #[arg(long, value_enum, default_value_t = DecomposeMode::Balanced)]
        mode: DecomposeMode,
        /// Skew parameter for `skew`, epsilon for `cut`.
        #[arg(long, value_parser = rational, default_value = "1/10")]
        param: Rational64,
    },
    /// Random colourings against the expansion property of the
    /// random-construction argument.
    #[command(name = "demo-thm62")]
    DemoThm62 {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational, default_value = "1")]
        c: Rational64,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, value_parser = rational)]
        red_prob: Option<Rational64>,
        #[arg(long)]
        max_sets: Option<u64>,
    },
}

#[derive(Args)]
struct LowerBoundArgs {
    #[arg(long, requires_all = ["t2", "s1", "s2"], conflicts_with_all = ["tree", "tree_file"])]
    t1: Option<usize>,
    #[arg(long)]
    t2: Option<usize>,
    #[arg(long)]
    s1: Option<usize>,
    #[arg(long)]
    s2: Option<usize>,
    #[command(flatten)]
    pair: OptionalPair,
}

#[derive(Args)]
struct OptionalPair {
    #[arg(long)]
    tree: Option<String>,
    #[arg(long)]
    tree_file: Option<PathBuf>,
    #[arg(long)]
    other: Option<String>,
    #[arg(long)]
    other_file: Option<PathBuf>,
}

#[derive(Args)]
struct TreeArg {
    /// pathK, starK, caterpillar:t1,t2, spider:legs,len, dstar:a,b, randomK, thm13:C,r, thm14:C,rho,r
    #[arg(long, required_unless_present = "tree_file")]
    tree: Option<String>,
    /// JSON {"n","edges"} or text (vertex count, then one edge per line).
    #[arg(long, conflicts_with = "tree")]
    tree_file: Option<PathBuf>,
    #[command(flatten)]
    seed: Seed,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long, required_unless_present = "tree_file")]
    tree: Option<String>,
    #[arg(long, conflicts_with = "tree")]
    tree_file: Option<PathBuf>,
    #[arg(long, required_unless_present = "other_file")]
    other: Option<String>,
    #[arg(long, conflicts_with = "other")]
    other_file: Option<PathBuf>,
    #[command(flatten)]
    seed: Seed,
}

#[derive(Args)]
struct Budget {
    /// Node budget for exhaustive searches.
    #[arg(long, env = "TREERAMSEY_BUDGET", default_value_t = 50_000_000)]
    budget: u64,
}

#[derive(Args)]
struct Seed {
    #[arg(long, env = "TREERAMSEY_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct WeightsArgs {
    #[arg(long, required_unless_present = "colouring_file", conflicts_with = "colouring_file")]
    digraph_file: Option<PathBuf>,
    #[arg(long, requires = "x")]
    colouring_file: Option<PathBuf>,
    /// Vertex for the Q/R report.
    #[arg(long)]
    x: Option<usize>,
    #[arg(long, value_enum, default_value_t = ColourArg::Red)]
    colour: ColourArg,
    #[arg(long, value_parser = rational, default_value = "2")]
    alpha: Rational64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColourArg {
    Red,
    Blue,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecomposeMode {
    Balanced,
    Skew,
    Cut,
}

fn rational(s: &str) -> Result<Rational64, String> {
    parse_rational64(s).map_err(|e| e.to_string())
}

/// Failure of a verb: a usage problem or a negative answer with a message.
enum Fail {
    Usage(String),
    Negative(Value),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::NotFound(_) | Error::Infeasible(_) => Fail::Negative(json!({ "error": e.to_string() })),
            _ => Fail::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(u8, String), Fail>;

fn numbers(spec: &str, rest: &str, count: usize) -> Result<Vec<usize>, Fail> {
    let parts: Vec<usize> = rest
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Fail::Usage(format!("bad numbers in tree `{spec}`")))?;
    if parts.len() != count {
        return Err(Fail::Usage(format!("tree `{spec}` needs {count} numbers")));
    }
    Ok(parts)
}

fn parse_tree(spec: &str, seed: u64) -> Result<Tree, Fail> {
    let spec = spec.trim();
    if let Some((name, rest)) = spec.split_once(':') {
        return Ok(match name {
            "caterpillar" => {
                let v = numbers(spec, rest, 2)?;
                make_caterpillar(v[0], v[1])?
            }
            "spider" => {
                let v = numbers(spec, rest, 2)?;
                Tree::spider(v[0], v[1])
            }
            "dstar" => {
                let v = numbers(spec, rest, 2)?;
                Tree::double_star(v[0], v[1])?
            }
            "thm13" => {
                let v = numbers(spec, rest, 2)?;
                gen_thm13(v[0], v[1])?.t
            }
            "thm14" => {
                let v = numbers(spec, rest, 3)?;
                gen_thm14(v[0], v[1], v[2])?.t
            }
            _ => return Err(Fail::Usage(format!("unknown tree family `{name}`"))),
        });
    }
    let split = spec.find(|c: char| c.is_ascii_digit()).unwrap_or(spec.len());
    let (name, num) = spec.split_at(split);
    let k: usize = num.parse().map_err(|_| Fail::Usage(format!("unknown tree `{spec}`")))?;
    match name {
        "path" => Ok(Tree::path(k)?),
        "star" => Ok(Tree::star(k)),
        "random" => Ok(Tree::random(k, &mut ChaCha8Rng::seed_from_u64(seed))),
        _ => Err(Fail::Usage(format!("unknown tree `{spec}`"))),
    }
}

fn read(path: &PathBuf) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &PathBuf) -> Result<Value, Fail> {
    serde_json::from_str(&read(path)?).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn read_tree(path: &PathBuf) -> Result<Tree, Fail> {
    let text = read(path)?;
    match serde_json::from_str::<Value>(&text) {
        Ok(v) => Ok(Tree::from_json(&v)?),
        Err(_) => Ok(Tree::from_text(&text)?),
    }
}

fn load_tree(spec: Option<&String>, file: Option<&PathBuf>, seed: u64) -> Result<Tree, Fail> {
    match (spec, file) {
        (Some(s), _) => parse_tree(s, seed),
        (None, Some(f)) => read_tree(f),
        (None, None) => Err(Fail::Usage("a tree is required".into())),
    }
}

fn load_pair(p: &PairArgs) -> Result<(Tree, Tree), Fail> {
    Ok((
        load_tree(p.tree.as_ref(), p.tree_file.as_ref(), p.seed.seed)?,
        load_tree(p.other.as_ref(), p.other_file.as_ref(), p.seed.seed.wrapping_add(1))?,
    ))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn tree_dot(t: &Tree) -> String {
    let mut s = String::from("graph T {\n");
    for v in 0..t.n() {
        let _ = writeln!(s, "  {v};");
    }
    for &(u, v) in t.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    s
}

fn class_profile(a: usize, b: usize) -> Result<TreeProfile, Fail> {
    if a < b || b == 0 {
        return Err(Fail::Usage(format!("class sizes need {a} >= {b} >= 1")));
    }
    Ok(TreeProfile {
        n: a + b,
        t1: a,
        t2: b,
        max_degree: 0,
        leaf_count: 0,
    })
}

fn lower_bound_verb(a: &LowerBoundArgs, seed: u64) -> Outcome {
    let (pt, ps) = match (a.t1, a.t2, a.s1, a.s2) {
        (Some(t1), Some(t2), Some(s1), Some(s2)) => (class_profile(t1, t2)?, class_profile(s1, s2)?),
        _ => {
            let p = &a.pair;
            let t = load_tree(p.tree.as_ref(), p.tree_file.as_ref(), seed)?;
            let s = load_tree(p.other.as_ref(), p.other_file.as_ref(), seed.wrapping_add(1))?;
            (t.profile(), s.profile())
        }
    };
    let rbar = lower_bound(&pt, &ps)?;
    Ok((OK, pretty(&json!({ "rbar": rbar }))))
}

fn arrows_verb(file: &PathBuf, pair: &PairArgs, budget: u64) -> Outcome {
    let col = TwoColouring::from_json(&read_json(file)?)?;
    let (t, s) = load_pair(pair)?;
    let arrow = decide_arrows(&col, &t, &s, budget);
    let code = match arrow {
        Arrow::RedT(_) | Arrow::BlueS(_) => OK,
        Arrow::Neither => NEGATIVE,
        Arrow::Unknown => UNKNOWN,
    };
    let mut v = serde_json::to_value(&arrow).expect("serializable");
    v["budget"] = json!(budget);
    Ok((code, pretty(&v)))
}

fn ramsey_verb(pair: &PairArgs, nmax: usize, budget: u64, jobs: usize) -> Outcome {
    let (t, s) = load_pair(pair)?;
    if nmax > 64 {
        return Err(Fail::Usage("nmax is at most 64".into()));
    }
    let cfg = SearchConfig {
        jobs: jobs.max(1),
        ..SearchConfig::new(budget)
    };
    let out = ramsey_exact_with(&t, &s, nmax, &cfg);
    let mut v = serde_json::to_value(&out).expect("serializable");
    v["certificateN"] = json!(out.certificate.as_ref().map(|c| c.n));
    v["jobs"] = json!(cfg.jobs);
    let code = match (out.value, out.budget_exhausted) {
        (Some(_), _) => OK,
        (None, true) => UNKNOWN,
        (None, false) => NEGATIVE,
    };
    Ok((code, pretty(&v)))
}

fn certificate_out(cert: &CounterexampleCertificate, dot: bool) -> (u8, String) {
    let code = if cert.red_t || cert.blue_s || cert.exact_red == ExactCheck::Present || cert.exact_blue == ExactCheck::Present {
        NEGATIVE
    } else {
        OK
    };
    if dot {
        return (code, cert.certificate.colouring.to_dot());
    }
    (code, pretty(&serde_json::to_value(cert).expect("serializable")))
}

fn weights_verb(a: &WeightsArgs) -> Outcome {
    if let Some(file) = &a.colouring_file {
        let col = TwoColouring::from_json(&read_json(file)?)?;
        let colour = match a.colour {
            ColourArg::Red => Colour::Red,
            ColourArg::Blue => Colour::Blue,
        };
        let x = a.x.ok_or_else(|| Fail::Usage("--x is required with --colouring-file".into()))?;
        let rep = qr_report(&col, x, colour, a.alpha)?;
        let code = if rep.holds() { OK } else { NEGATIVE };
        return Ok((code, pretty(&serde_json::to_value(&rep).expect("serializable"))));
    }
    let file = a.digraph_file.as_ref().ok_or_else(|| Fail::Usage("--digraph-file is required".into()))?;
    let digraph = Digraph::from_json(&read_json(file)?)?;
    let problem = WeightProblem::new(digraph, a.alpha)?;
    let sol = max_weight(&problem);
    let abc = abc_sets(&problem);
    let checks = abc.checks(&problem);
    let verified = verify_solution(&problem, &sol);
    let v = json!({
        "alpha": a.alpha.to_string(),
        "solution": sol,
        "verified": verified,
        "abc": abc,
        "checks": checks,
    });
    let code = if verified && checks.all() { OK } else { NEGATIVE };
    Ok((code, pretty(&v)))
}

fn decompose_verb(tree: &TreeArg, mode: DecomposeMode, param: Rational64) -> Outcome {
    let t = load_tree(tree.tree.as_ref(), tree.tree_file.as_ref(), tree.seed.seed)?;
    let v = match mode {
        DecomposeMode::Balanced => serde_json::to_value(decompose_balanced(&t)?),
        DecomposeMode::Skew => serde_json::to_value(decompose_bipartite_skew(&t, param)?),
        DecomposeMode::Cut => serde_json::to_value(cut_with_small_boundary(&t, param)?),
    }
    .expect("serializable");
    Ok((OK, pretty(&v)))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::LowerBound(a) => lower_bound_verb(&a, 0),
        Command::GenTree { tree, dot } => {
            let t = load_tree(tree.tree.as_ref(), tree.tree_file.as_ref(), tree.seed.seed)?;
            Ok((OK, if dot { tree_dot(&t) } else { pretty(&t.to_json()) }))
        }
        Command::GenConstruction { kind, t1, t2, s1, s2, dot } => {
            let p = ConstructionParams {
                kind,
                t1,
                t2,
                tau1: s1,
                tau2: s2,
            };
            let c = make_construction(&p)?;
            Ok((OK, if dot { c.to_dot() } else { pretty(&c.to_json()) }))
        }
        Command::CheckArrows { colouring_file, pair, budget } => arrows_verb(&colouring_file, &pair, budget.budget),
        Command::Ramsey { pair, nmax, budget } => ramsey_verb(&pair, nmax, budget.budget, cli.jobs),
        Command::VerifyThm13 { c, r, budget, dot } => Ok(certificate_out(&verify_thm13(c, r, budget.budget)?, dot)),
        Command::VerifyThm14 { c, rho, r, budget, dot } => {
            Ok(certificate_out(&verify_thm14(c, rho, r, budget.budget)?, dot))
        }
        Command::Weights(a) => weights_verb(&a),
        Command::Decompose { tree, mode, param } => decompose_verb(&tree, mode, param),
        Command::DemoThm62 {
            n,
            c,
            seed,
            trials,
            red_prob,
            max_sets,
        } => {
            let mut p = Thm62Params::new(n, c, seed.seed, trials);
            p.red_prob = red_prob.or(p.red_prob);
            if let Some(m) = max_sets {
                p.max_sets = m;
            }
            let report = demo_thm62(&p)?;
            let code = if report.trials.iter().all(|t| t.pass) { OK } else { NEGATIVE };
            Ok((code, pretty(&serde_json::to_value(&report).expect("serializable"))))
        }
    }
}

/// Ignores a closed stdout, as when piped into `head`.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{}", text.trim_end());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli) {
        Ok((code, text)) => {
            emit(&text);
            ExitCode::from(code)
        }
        Err(Fail::Negative(v)) => {
            emit(&pretty(&v));
            ExitCode::from(NEGATIVE)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}
