use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use thetalift_core::check::{self, CheckConfig, Suite};
use thetalift_core::corpus::enumerate_corpus;
use thetalift_core::grothendieck::{big_m_star, m_star};
use thetalift_core::lifts::{lift_with, LiftResult, Tower};
use thetalift_core::occurrence::{first_occurrence, nonzero_levels};
use thetalift_core::rearrange::{invert, len_k, longest_ladder, reduce_chain, run_algorithm, transform_t};
use thetalift_core::{dsl, json as js, CoreError, Form, GLFactor, HalfInt, Result, StandardModule};

#[derive(Parser)]
#[command(name = "thetalift", version, about = "Standard modules, the ladder algorithm and theta lifts")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TowerArg {
    Down,
    Up,
}

impl From<TowerArg> for Tower {
    fn from(t: TowerArg) -> Tower {
        match t {
            TowerArg::Down => Tower::Down,
            TowerArg::Up => Tower::Up,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RingOp {
    Mstar,
    #[value(name = "Mstar", alias = "big-mstar")]
    BigMstar,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a module and print its canonical form.
    Parse { input: Option<String> },
    /// Sort the alpha-block.
    Sort { input: Option<String> },
    /// Run the algorithm on the alpha-block.
    Alg {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        trace: bool,
        input: Option<String>,
    },
    /// Length of the longest ladder ending in k, with the ladder.
    Len {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        input: Option<String>,
    },
    /// Apply T(shorten, shift) to an algorithm output.
    Transform {
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        shorten: usize,
        shift: usize,
        input: Option<String>,
    },
    /// Recover the standard module from an algorithm output.
    Invert {
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        input: Option<String>,
    },
    /// Classify an algorithm output step by step down to a standard module.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        input: Option<String>,
    },
    /// First occurrence on both towers.
    Occurrence { input: Option<String> },
    /// Lift to one level of one tower.
    Lift {
        #[arg(long, allow_hyphen_values = true)]
        level: i64,
        #[arg(long, value_enum)]
        tower: TowerArg,
        /// Expand a trailing character chain into the block.
        #[arg(long)]
        normalize: bool,
        input: Option<String>,
    },
    /// Lifts on both towers, from the first occurrence downwards.
    Lifts {
        /// Every level of the window instead of just the first occurrence.
        #[arg(long)]
        all: bool,
        /// Levels per tower with --all.
        #[arg(long, default_value_t = 6)]
        count: usize,
        input: Option<String>,
    },
    /// Expand m* or M* of one segment, e.g. `D[0,2]` or `Z[1/2,3/2]`.
    Ring {
        #[arg(value_enum)]
        op: RingOp,
        segment: String,
    },
    /// List every sorted block within the bounds.
    Enumerate {
        #[arg(long, default_value_t = 2)]
        max_segments: usize,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        max_end: String,
        #[arg(long, default_value = "0")]
        alpha: String,
    },
    /// Run a property suite over the corpus ("all" runs every suite).
    Check {
        suite: String,
        #[arg(long, default_value_t = 4)]
        max_segments: usize,
        #[arg(long, default_value = "3")]
        max_end: String,
    },
}

fn read_input(input: Option<String>) -> Result<String> {
    match input {
        Some(s) if s != "-" => Ok(s),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CoreError::InvalidParameter(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn half(s: &str) -> Result<HalfInt> {
    s.trim()
        .parse::<HalfInt>()
        .map_err(|_| CoreError::InvalidParameter(format!("'{s}' is not an integer or a half-integer k/2")))
}

fn module_tail(m: &StandardModule) -> String {
    format!("; {}", dsl::render_token(&m.tempered))
}

fn lift_line(m: &StandardModule, level: i64, tower: Tower, normalize: bool) -> Result<(String, Value)> {
    let r = lift_with(m, level, tower, normalize)?;
    let text = match &r {
        LiftResult::Zero => format!("{tower} {level}: zero"),
        LiftResult::Module { module, .. } => format!("{tower} {level}: {}", dsl::render(module)),
    };
    Ok((text, js::lift(&r, level, tower)))
}

/// Prints the result; `Ok(false)` means the command found counterexamples.
fn run(cli: Cli) -> Result<bool> {
    let json = cli.json;
    let emit = |text: String, value: Value| {
        if json {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        } else {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    };
    match cli.command {
        Command::Parse { input } => {
            let m = dsl::parse(&read_input(input)?)?;
            emit(format!("{}\n{}\n", dsl::render(&m), dsl::display(&m)), js::module(&m));
        }
        Command::Sort { input } => {
            let m = dsl::parse(&read_input(input)?)?.sorted()?;
            emit(dsl::render(&m), js::module(&m));
        }
        Command::Alg { k, trace, input } => {
            let m = dsl::parse(&read_input(input)?)?;
            let k = half(&k)?;
            let (r, t) = run_algorithm(&m.block, k, trace)?;
            let parts = dsl::parse_parts(&dsl::render(&m))?;
            let mut text = String::new();
            if let Some(t) = &t {
                text.push_str(&t.render(&module_tail(&m)));
            }
            text.push_str(&format!("iterations: {}\n", r.iterations));
            text.push_str(&dsl::render_rearranged(&r, &parts));
            emit(text, js::algorithm(&r, t.as_ref()));
        }
        Command::Len { k, input } => {
            let m = dsl::parse(&read_input(input)?)?;
            let k = half(&k)?;
            let ladder = longest_ladder(&m.block, k)?;
            let n = len_k(&m.block, k)?;
            let rungs: Vec<Value> = ladder.rungs.iter().map(js::segment).collect();
            emit(
                format!("len_{k} = {n}\nladder: {ladder}\n"),
                json!({ "schema": js::SCHEMA, "k": k.to_string(), "len": n, "ladder": rungs }),
            );
        }
        Command::Transform { k, shorten, shift, input } => {
            let k = k.as_deref().map(half).transpose()?;
            let (r, parts) = dsl::parse_rearranged(&read_input(input)?, k)?;
            let factors = transform_t(&r, shorten, shift)?;
            let text = dsl::render_parts(&dsl::Parts { factors: factors.clone(), ..parts });
            let fs: Vec<Value> = factors.iter().map(js::factor).collect();
            emit(text, json!({ "schema": js::SCHEMA, "factors": fs }));
        }
        Command::Invert { k, input } => {
            let k = k.as_deref().map(half).transpose()?;
            let (r, parts) = dsl::parse_rearranged(&read_input(input)?, k)?;
            let block = invert(&r)?;
            let m = dsl::Parts { factors: block.factors, ..parts }.module()?;
            emit(dsl::render(&m), js::module(&m));
        }
        Command::Reduce { k, input } => {
            let k = k.as_deref().map(half).transpose()?;
            let (r, parts) = dsl::parse_rearranged(&read_input(input)?, k)?;
            let steps = reduce_chain(&r)?;
            let mut text = String::new();
            for s in &steps {
                let delta: Vec<String> = s.delta.iter().map(|d| GLFactor::Delta(*d).to_string()).collect();
                let delta = if delta.is_empty() { "-".to_string() } else { delta.join(" x ") };
                text.push_str(&format!(
                    "case {}: delta = {delta}; residual {}\n",
                    s.case,
                    dsl::render_rearranged(&s.residual, &parts)
                ));
            }
            emit(text, js::reduction(&steps));
        }
        Command::Occurrence { input } => {
            let m = dsl::parse(&read_input(input)?)?;
            let r = first_occurrence(&m)?;
            let dims = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            let text = format!(
                "l(tau) = {}\nf = {}\nwitness: {}\nl_down = {}\nl_up = {}\nl_down + l_up = {}\nm_down = {}\nm_up = {}\n",
                r.l_tau,
                r.f,
                r.witness,
                r.l_down,
                r.l_up,
                r.l_down + r.l_up,
                dims(r.m_down),
                dims(r.m_up)
            );
            emit(text, js::occurrence(&m, &r));
        }
        Command::Lift { level, tower, normalize, input } => {
            let m = dsl::parse(&read_input(input)?)?;
            let (text, value) = lift_line(&m, level, tower.into(), normalize)?;
            emit(text, value);
        }
        Command::Lifts { all, count, input } => {
            let m = dsl::parse(&read_input(input)?)?;
            let mut text = String::new();
            let mut values = Vec::new();
            for tower in [Tower::Down, Tower::Up] {
                let set = nonzero_levels(&m, tower)?;
                let levels = if all { set.top(count) } else { set.top(1) };
                text.push_str(&format!("{tower}: nonzero exactly at levels <= {} of parity {}\n", set.max, set.kappa.rem_euclid(2)));
                for level in levels {
                    let (line, value) = lift_line(&m, level, tower, false)?;
                    text.push_str(&line);
                    text.push('\n');
                    values.push(value);
                }
            }
            emit(text, json!({ "schema": js::SCHEMA, "lifts": values }));
        }
        Command::Ring { op, segment } => {
            let f = dsl::parse_factor(&segment)?;
            let (s, form) = match f {
                GLFactor::Delta(s) => (s, Form::Delta),
                GLFactor::Zeta(s) => (s, Form::Zeta),
                GLFactor::LQ { .. } => unreachable!("the parser reads D or Z only"),
            };
            let r = match op {
                RingOp::Mstar => m_star(s, form),
                RingOp::BigMstar => big_m_star(s, form),
            };
            emit(r.render(), js::ring(&r));
        }
        Command::Enumerate { max_segments, max_end, alpha } => {
            let blocks = enumerate_corpus(max_segments, half(&max_end)?, half(&alpha)?)?;
            let lines: Vec<String> = blocks.iter().map(|b| dsl::render_factors(&b.factors)).collect();
            let mut text = lines.join("\n");
            text.push('\n');
            emit(text, json!({ "schema": js::SCHEMA, "count": lines.len(), "blocks": lines }));
        }
        Command::Check { suite, max_segments, max_end } => {
            let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
            let cfg = CheckConfig { max_segments, max_end: half(&max_end)?, ..CheckConfig::default() };
            let mut ok = true;
            let mut text = String::new();
            let mut values = Vec::new();
            for s in suites {
                let r = check::run(s, &cfg)?;
                ok &= r.passed();
                text.push_str(&r.render());
                values.push(json!({
                    "suite": s.to_string(),
                    "cases": r.cases,
                    "passed": r.passed(),
                    "elapsed_ms": r.elapsed.as_millis() as u64,
                    "counterexamples": r.counterexamples.iter()
                        .map(|c| json!({ "source": c.source, "detail": c.detail }))
                        .collect::<Vec<_>>(),
                }));
            }
            emit(text, json!({ "schema": js::SCHEMA, "reports": values }));
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            if json {
                println!("{}", json!({ "schema": js::SCHEMA, "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
