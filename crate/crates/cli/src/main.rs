use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use couniv::harness::{self, run_suite, RunConfig, Sizes, Suite};
use couniv::pw::{run_scenario, scenario_with_shape, ScenarioBounds};
use couniv::quotient::{QuotientMap, QuotientSnapshot};
use couniv::target_groups::GroupId;
use couniv::{sym_member_bounded, with_group, IndexChain, PhiContext, ReducedWord, SearchBounds, SubbasicSpec};

#[derive(Parser)]
#[command(name = "couniv", version, about = "Free-group neighborhoods and quotient maps onto countable groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Target group: zp<p>, symfin, dyadic, finite:<file>, finite-sym:<d>.
    #[arg(long, global = true, default_value = "symfin")]
    group: String,
    /// Index chain: dyadic or adic:<b>.
    #[arg(long, global = true, default_value = "dyadic")]
    chain: IndexChain,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 3)]
    max_factors: usize,
    #[arg(long = "max-conj", global = true, default_value_t = 2)]
    max_conj: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a word given as space-separated letters such as `5' 31 5`.
    Reduce {
        word: String,
        /// Also print the cyclic reduction `core` and `wing`.
        #[arg(long)]
        cyclic: bool,
    },
    /// Evaluate the scale function φ_n on a word.
    Phi {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        word: String,
        /// Print the recursion tree.
        #[arg(long)]
        explain: bool,
    },
    /// Search for a certificate of membership in a subbasic neighborhood.
    Member {
        #[arg(long)]
        word: String,
        /// Dilation of the slot levels.
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// Translate word.
        #[arg(long, default_value = "")]
        h: String,
    },
    /// Build or verify the quotient map onto the chosen group.
    Quotient {
        #[command(subcommand)]
        action: QuotientAction,
    },
    /// Piecewise-word maps on sample points.
    Pw {
        #[command(subcommand)]
        action: PwAction,
    },
    /// Run verification suites and print a JSON report.
    Verify {
        /// Comma-separated suites, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, value_enum, default_value_t = Scale::Full)]
        bounds: Scale,
    },
}

#[derive(Subcommand)]
enum QuotientAction {
    Build {
        #[arg(long, default_value_t = 128)]
        depth: usize,
        #[arg(long, default_value_t = 64)]
        n_max: u64,
        /// Fibers recorded in the output.
        #[arg(long, default_value_t = 6)]
        fibers: u64,
        /// Greedy steps recorded per fiber.
        #[arg(long, default_value_t = 32)]
        positions: usize,
        #[arg(long)]
        out: PathBuf,
    },
    Verify {
        #[arg(long)]
        map: PathBuf,
        /// Comma-separated from eq1, mainlemma, continuity, openness, sur.
        #[arg(long, default_value = "eq1,mainlemma,continuity,openness")]
        suite: String,
        #[arg(long, value_enum, default_value_t = Scale::Full)]
        bounds: Scale,
    },
}

#[derive(Subcommand)]
enum PwAction {
    /// One random openness scenario, printed as a transcript.
    Demo {
        #[arg(long, default_value_t = 3)]
        sample_size: usize,
        #[arg(long, default_value_t = 2)]
        coords: usize,
        #[arg(long, default_value_t = 2)]
        conjugators: usize,
        #[arg(long, default_value_t = 2)]
        u: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    /// The acceptance sizes.
    Full,
    /// Smoke-test sizes.
    Small,
}

impl Scale {
    fn sizes(self) -> Sizes {
        match self {
            Scale::Full => Sizes::default(),
            Scale::Small => Sizes::small(),
        }
    }
}

fn parse_word(s: &str) -> Result<ReducedWord> {
    s.parse().with_context(|| format!("cannot parse word {s:?}"))
}

fn emit(global: &Global, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    // a closed pipe (e.g. `| head`) is not an error
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(path) = &global.json {
        fs::write(path, format!("{text}\n")).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn run_config(g: &Global, suites: Vec<Suite>, sizes: Sizes) -> Result<RunConfig> {
    Ok(RunConfig {
        group: g.group.clone(),
        chain: g.chain,
        bounds: SearchBounds::new(g.max_factors, g.max_conj)?,
        suites,
        seed: g.seed,
        sizes,
        ..RunConfig::default()
    })
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    match cli.command {
        Command::Reduce { word, cyclic } => {
            let w = parse_word(&word)?;
            if cyclic {
                let (core, wing) = w.cyclic_reduce();
                println!("{w}\ncore: {core}\nwing: {wing}");
            } else {
                println!("{w}");
            }
        }
        Command::Phi { n, word, explain } => {
            let ctx = PhiContext::new(g.chain);
            let w = parse_word(&word)?;
            if explain {
                println!("{}", ctx.explain(n, &w).render(200).trim_end());
            } else {
                println!("{}", ctx.phi(n, &w));
            }
        }
        Command::Member { word, k, h } => {
            let ctx = PhiContext::new(g.chain);
            let spec = SubbasicSpec::new(parse_word(&h)?, k)?;
            let bounds = SearchBounds::new(g.max_factors, g.max_conj)?;
            let result = sym_member_bounded(&ctx, &parse_word(&word)?, &spec, bounds)?;
            emit(g, &serde_json::to_value(result)?)?;
        }
        Command::Quotient { action: QuotientAction::Build { depth, n_max, fibers, positions, out } } => {
            let any = g.group.parse::<GroupId>()?.build()?;
            let snap = with_group!(&any, o => {
                QuotientMap::build(o.clone(), g.chain, depth, n_max)?.snapshot(&g.group, fibers, positions)
            })?;
            let text = serde_json::to_string_pretty(&snap)?;
            fs::write(&out, format!("{text}\n")).with_context(|| format!("cannot write {}", out.display()))?;
            println!("wrote {} ({} fibers, depth {depth})", out.display(), snap.fibers.len());
        }
        Command::Quotient { action: QuotientAction::Verify { map, suite, bounds } } => {
            let text = fs::read_to_string(&map).with_context(|| format!("cannot read {}", map.display()))?;
            let snap: QuotientSnapshot = serde_json::from_str(&text).context("malformed map file")?;
            let any = snap.group.parse::<GroupId>()?.build()?;
            let rebuilt = with_group!(&any, o => {
                let positions = snap.fibers.first().map_or(0, |f| f.choices.len());
                QuotientMap::build(o.clone(), snap.chain, snap.depth, snap.n_max)?
                    .snapshot(&snap.group, snap.fibers.len() as u64, positions)
            })?;
            if rebuilt != snap {
                bail!("map file does not match a fresh construction with its parameters");
            }
            let suites = Suite::parse_list(&suite)?;
            if let Some(s) = suites
                .iter()
                .find(|s| !matches!(s, Suite::Eq1 | Suite::MainLemma | Suite::Continuity | Suite::Openness | Suite::Sur))
            {
                bail!("suite {s} does not concern the quotient map");
            }
            let cfg = RunConfig {
                group: snap.group.clone(),
                chain: snap.chain,
                depth: snap.depth,
                n_max: snap.n_max,
                ..run_config(g, suites, bounds.sizes())?
            };
            let report = run_suite(&cfg)?;
            emit(g, &serde_json::to_value(&report)?)?;
            return Ok(!report.has_fail());
        }
        Command::Pw { action: PwAction::Demo { sample_size, coords, conjugators, u } } => {
            if sample_size == 0 || coords == 0 {
                bail!("sample size and coordinate count must be at least 1");
            }
            let any = g.group.parse::<GroupId>()?.build()?;
            let shape = ScenarioBounds { sample_size, dim: coords, conjugators, u_max: u };
            let mut rng = harness::stream(g.seed, "pw demo");
            let transcript = with_group!(&any, o => {
                let sc = scenario_with_shape(o, shape, &mut rng)?;
                run_scenario(o, &sc).map(|t| serde_json::to_value(t).expect("transcript serializes"))
            })?;
            emit(g, &json!({ "group": g.group, "seed": g.seed, "transcript": transcript }))?;
        }
        Command::Verify { suite, bounds } => {
            let report = run_suite(&run_config(g, Suite::parse_list(&suite)?, bounds.sizes())?)?;
            emit(g, &serde_json::to_value(&report)?)?;
            return Ok(!report.has_fail());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
