//! `rci`: realizability checks, width queries, sampling, interactive play,
//! verification and game compilation for control-improvisation instances.
//!
//! Exit codes: 0 success or realizable, 1 unrealizable, 2 usage or input
//! error, 3 internal invariant violation.

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rci_core::games::{compile_grid, compile_rsg, GridPatrolInstance, Rsg};
use rci_core::harness::{
    episode_rng, exact_distribution_with_limit, run_episodes, Adversary, AdversaryKind,
    ReplChannel, DEFAULT_NODE_LIMIT,
};
use rci_core::improviser::{
    check_realizability, width_to_json, Improviser, RealizabilityReport, WidthOraclePair,
};
use rci_core::instance::{Backend, InstanceFile, LoadedInstance};
use rci_core::rational::{approx_decimal, format_rational, parse_rational};
use rci_core::{Error, History, Rational, Result, Turn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "rci",
    version,
    about = "Reactive control improvisation with exact arithmetic"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Width backend: auto, table or generic.
    #[arg(long, global = true, default_value = "auto")]
    backend: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Instance JSON file.
    instance: PathBuf,
    /// Override the instance's epsilon (p/q).
    #[arg(long)]
    epsilon: Option<String>,
    /// Override the instance's rho (p/q).
    #[arg(long)]
    rho: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide realizability and report widths, epsilon_opt and rho_min.
    Check(InstanceArgs),
    /// Widths of I and A after a history.
    Widths {
        #[command(flatten)]
        inst: InstanceArgs,
        /// History as symbols ("" or "λ" for the empty history).
        #[arg(long, default_value = "")]
        history: String,
    },
    /// Sample plays of the improviser against an adversary.
    Sample {
        #[command(flatten)]
        inst: InstanceArgs,
        /// scripted:W, cyclic:W, random[:SEED], greedy[:hard|:admissible] or policy:STATE=MOVE,...
        #[arg(long, default_value = "greedy")]
        adversary: String,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Play interactively as the adversary.
    Play(InstanceArgs),
    /// Run many seeded episodes and report empirical constraint statistics.
    Verify {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value = "greedy")]
        adversary: String,
        #[arg(long, default_value_t = 10_000)]
        episodes: u64,
        /// Slack for the statistical soft and randomness checks.
        #[arg(long, default_value = "1/50")]
        tolerance: String,
    },
    /// Exact play distribution against a deterministic adversary.
    Exact {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value = "greedy")]
        adversary: String,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
    },
    /// Compile a game graph into an instance file.
    CompileGame {
        game: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        rho: String,
        /// Write the instance here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compile a grid patrol description into an instance file.
    CompileGrid {
        grid: PathBuf,
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        rho: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_invariant_violation() { 3 } else { 2 })
        }
    }
}

struct Session {
    loaded: LoadedInstance,
    oracles: WidthOraclePair,
}

fn open(args: &InstanceArgs, backend: Backend) -> Result<Session> {
    let mut loaded = LoadedInstance::load(&args.instance)?;
    if let Some(e) = &args.epsilon {
        loaded.instance.epsilon = parse_rational(e)?;
    }
    if let Some(r) = &args.rho {
        loaded.instance.rho = parse_rational(r)?;
    }
    let report =
        rci_core::game::validate_instance(&loaded.instance, rci_core::game::DEFAULT_MAX_HORIZON);
    if !report.is_valid() {
        let issues: Vec<String> = report.issues.iter().map(ToString::to_string).collect();
        return Err(Error::Input(issues.join("; ")));
    }
    let oracles = loaded.oracles(backend)?;
    Ok(Session { loaded, oracles })
}

fn adversary_kind(text: &str, s: &Session) -> Result<AdversaryKind> {
    AdversaryKind::parse(text, &s.loaded.instance.alphabet, s.loaded.hard_dfa.clone())
}

fn rational_text(r: &Rational) -> String {
    format!("{} (≈{})", format_rational(r), approx_decimal(r, 6))
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Reports unrealizability and returns exit code 1, or `None` to continue.
fn require_realizable(s: &Session) -> Result<Option<u8>> {
    let r = check_realizability(&s.loaded.instance, &s.oracles)?;
    if r.realizable {
        return Ok(None);
    }
    eprintln!(
        "instance is not realizable: epsilon_opt = {}, rho_min = {}",
        rational_text(&r.epsilon_opt),
        r.rho_min
    );
    Ok(Some(1))
}

fn run(cli: &Cli) -> Result<u8> {
    let backend: Backend = cli.backend.parse()?;
    match &cli.command {
        Command::Check(args) => {
            let s = open(args, backend)?;
            let r = check_realizability(&s.loaded.instance, &s.oracles)?;
            match cli.format {
                Format::Json => print_json(&r)?,
                Format::Human => print_report(&r),
            }
            Ok(if r.realizable { 0 } else { 1 })
        }
        Command::Widths { inst, history } => {
            let s = open(inst, backend)?;
            let alphabet = &s.loaded.instance.alphabet;
            let h = alphabet.parse_word(history)?;
            History::from_word(h.clone(), s.loaded.instance.horizon)?;
            let (wi, wa) = (s.oracles.width_i(&h)?, s.oracles.width_a(&h)?);
            let shown = if h.is_empty() {
                "λ".to_string()
            } else {
                alphabet.render(&h)
            };
            match cli.format {
                Format::Json => print_json(&json!({
                    "history": alphabet.render(&h),
                    "width_I": width_to_json(&wi),
                    "width_A": width_to_json(&wa),
                }))?,
                Format::Human => {
                    println!("history: {shown}");
                    println!("width_I: {wi}");
                    println!("width_A: {wa}");
                }
            }
            Ok(0)
        }
        Command::Sample {
            inst,
            adversary,
            count,
        } => {
            let s = open(inst, backend)?;
            if let Some(code) = require_realizable(&s)? {
                return Ok(code);
            }
            let kind = adversary_kind(adversary, &s)?;
            if matches!(kind, AdversaryKind::Repl) {
                return Err(Error::Input(
                    "use the play subcommand for interactive adversaries".into(),
                ));
            }
            let c = &s.loaded.instance;
            let mut plays = Vec::new();
            for e in 0..*count {
                let mut rng = episode_rng(cli.seed, e);
                let mut adv = Adversary::for_episode(kind.clone(), e);
                let play = rci_core::improviser::improvise_play(c, &s.oracles, &mut adv, &mut rng)?;
                let hard = c.hard.accepts(&play);
                plays.push(json!({
                    "play": c.alphabet.render(&play),
                    "hard": hard,
                    "soft": hard && c.soft.accepts(&play),
                }));
            }
            match cli.format {
                Format::Json => print_json(&json!({ "plays": plays, "seed": cli.seed }))?,
                Format::Human => {
                    for p in &plays {
                        println!(
                            "{}  hard={} soft={}",
                            p["play"].as_str().unwrap_or_default(),
                            yes_no(&p["hard"]),
                            yes_no(&p["soft"])
                        );
                    }
                }
            }
            Ok(0)
        }
        Command::Play(args) => play(cli, args, backend),
        Command::Verify {
            inst,
            adversary,
            episodes,
            tolerance,
        } => {
            let s = open(inst, backend)?;
            if let Some(code) = require_realizable(&s)? {
                return Ok(code);
            }
            let tol = parse_rational(tolerance)?;
            let kind = adversary_kind(adversary, &s)?;
            let stats = run_episodes(&s.loaded.instance, &s.oracles, &kind, *episodes, cli.seed)?;
            let c = &s.loaded.instance;
            let soft_freq = if stats.episodes == 0 {
                Rational::from_integer(1.into())
            } else {
                Rational::new(stats.soft_hits.into(), stats.episodes.into())
            };
            let soft_ok = soft_freq >= Rational::from_integer(1.into()) - &c.epsilon - &tol;
            let random_ok = stats.max_play_frequency <= &c.rho + &tol;
            match cli.format {
                Format::Json => print_json(&stats)?,
                Format::Human => {
                    println!("episodes: {}", stats.episodes);
                    println!("seed: {}", stats.seed);
                    println!("hard violations: {}", stats.hard_violations);
                    println!(
                        "soft hits: {} ({})",
                        stats.soft_hits,
                        rational_text(&soft_freq)
                    );
                    println!(
                        "max play frequency: {}",
                        rational_text(&stats.max_play_frequency)
                    );
                    println!(
                        "soft check (>= 1 - epsilon - tol): {}",
                        if soft_ok { "pass" } else { "fail" }
                    );
                    println!(
                        "randomness check (<= rho + tol): {}",
                        if random_ok { "pass" } else { "fail" }
                    );
                }
            }
            if stats.hard_violations > 0 {
                eprintln!(
                    "error: {} plays violated the hard constraint",
                    stats.hard_violations
                );
                return Ok(3);
            }
            Ok(0)
        }
        Command::Exact {
            inst,
            adversary,
            node_limit,
        } => {
            let s = open(inst, backend)?;
            if let Some(code) = require_realizable(&s)? {
                return Ok(code);
            }
            let kind = adversary_kind(adversary, &s)?;
            let c = &s.loaded.instance;
            let d = exact_distribution_with_limit(
                c,
                &s.oracles,
                &mut Adversary::new(kind),
                *node_limit,
            )?;
            match cli.format {
                Format::Json => print_json(&d)?,
                Format::Human => {
                    for (play, p) in d.iter() {
                        println!("{}  {}", c.alphabet.render(play), rational_text(p));
                    }
                    let a_mass = d.mass_where(|w| c.hard.accepts(w) && c.soft.accepts(w));
                    println!("total: {}", rational_text(&d.total()));
                    println!("admissible mass: {}", rational_text(&a_mass));
                    println!(
                        "max play probability: {}",
                        rational_text(&d.max_probability())
                    );
                }
            }
            Ok(0)
        }
        Command::CompileGame {
            game,
            n,
            epsilon,
            rho,
            output,
        } => {
            let g = Rsg::from_json(&read(game)?)?;
            let pair = compile_rsg(&g)?;
            let file =
                InstanceFile::from_pair(&pair, *n, parse_rational(epsilon)?, parse_rational(rho)?)?;
            emit(
                &file,
                output,
                pair.hard.state_count(),
                pair.soft.state_count(),
            )
        }
        Command::CompileGrid {
            grid,
            epsilon,
            rho,
            output,
        } => {
            let g = GridPatrolInstance::from_json(&read(grid)?)?;
            let pair = compile_grid(&g)?;
            let file = InstanceFile::from_pair(
                &pair,
                g.n,
                parse_rational(epsilon)?,
                parse_rational(rho)?,
            )?;
            emit(
                &file,
                output,
                pair.hard.state_count(),
                pair.soft.state_count(),
            )
        }
    }
}

fn yes_no(v: &Value) -> &'static str {
    if v.as_bool() == Some(true) {
        "yes"
    } else {
        "no"
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(file: &InstanceFile, output: &Option<PathBuf>, hard: usize, soft: usize) -> Result<u8> {
    let text = file.to_json()?;
    match output {
        Some(path) => {
            std::fs::write(path, text + "\n")?;
            eprintln!(
                "wrote {} (hard: {hard} states, soft: {soft} states)",
                path.display()
            );
        }
        None => println!("{text}"),
    }
    Ok(0)
}

fn print_report(r: &RealizabilityReport) {
    println!("realizable: {}", if r.realizable { "yes" } else { "no" });
    println!("width_I: {}", r.width_i);
    println!("width_A: {}", r.width_a);
    println!("epsilon_opt: {}", rational_text(&r.epsilon_opt));
    match &r.rho_min {
        rci_core::improviser::RhoBound::Finite(q) => println!("rho_min: {}", rational_text(q)),
        rci_core::improviser::RhoBound::Unbounded => println!("rho_min: inf"),
    }
}

struct StdinChannel;

impl ReplChannel for StdinChannel {
    fn read_line(&mut self, prompt: &str) -> Result<Option<String>> {
        print!("{prompt}");
        std::io::stdout().flush()?;
        let mut line = String::new();
        if std::io::stdin().lock().read_line(&mut line)? == 0 {
            return Ok(None);
        }
        Ok(Some(line))
    }

    fn report(&mut self, message: &str) -> Result<()> {
        println!("{message}");
        Ok(())
    }
}

fn play(cli: &Cli, args: &InstanceArgs, backend: Backend) -> Result<u8> {
    let s = open(args, backend)?;
    if let Some(code) = require_realizable(&s)? {
        return Ok(code);
    }
    let c = &s.loaded.instance;
    let mut imp = Improviser::new(c, &s.oracles)?;
    let mut adv = Adversary::repl(Box::new(StdinChannel));
    let mut rng = episode_rng(cli.seed, 0);
    loop {
        match imp.turn() {
            Turn::Ended => break,
            Turn::Ours => {
                let u = imp.choose(&mut rng)?;
                println!("improviser: {}", c.alphabet.name(u));
            }
            Turn::Adversary => match adv.next_move(imp.history(), &s.oracles) {
                Ok(u) => imp.observe(u)?,
                Err(Error::Aborted) => {
                    println!("aborted");
                    return Ok(0);
                }
                Err(e) => return Err(e),
            },
        }
    }
    let play = imp.into_play();
    let hard = c.hard.accepts(&play);
    let soft = hard && c.soft.accepts(&play);
    match cli.format {
        Format::Json => {
            print_json(&json!({"play": c.alphabet.render(&play), "hard": hard, "soft": soft}))?
        }
        Format::Human => {
            println!("play: {}", c.alphabet.render(&play));
            println!(
                "hard: {}  soft: {}",
                if hard { "yes" } else { "no" },
                if soft { "yes" } else { "no" }
            );
        }
    }
    Ok(0)
}
