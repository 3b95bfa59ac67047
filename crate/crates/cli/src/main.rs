use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use hanoi_kernel::analysis::{
    big_json, expected, gamma_formula, q_formula, Analyzer, DEFAULT_DEPTH, KLEIN_FOUR, LEMMAS,
    MAX_DEPTH,
};
use hanoi_kernel::game::{self, GameState};
use hanoi_kernel::words::relator;
use hanoi_kernel::{Error, Letter, Word, WreathRecursion};

/// Deepest tree used for relator checks and portrait export.
const MAX_PORTRAIT_DEPTH: usize = 10;
const MAX_TAU: usize = 6;

#[derive(Parser)]
#[command(name = "hanoi-kernel", version)]
#[command(about = "Finite-depth verification of the Hanoi towers group and its rigid kernel")]
struct Cli {
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one lemma (or `all`) at a truncation depth
    Verify {
        /// Lemma id, or `all`
        id: Option<String>,
        /// List the lemma ids and exit
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Allow depths above the default budget
        #[arg(long)]
        slow: bool,
    },
    /// |Q_{n,N}| for 1 <= n <= n_max and n < N <= depth
    Qtable {
        #[arg(long, default_value_t = 2)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long)]
        slow: bool,
    },
    /// Exact-sequence bookkeeping and the rigid kernel verdict
    KernelReport {
        #[arg(long, default_value_t = 2)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long)]
        slow: bool,
    },
    /// Evaluate the relators tau^n(w_i) at a depth
    Relators {
        #[arg(long, default_value_t = 4)]
        max_tau: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// The Towers of Hanoi game
    Game {
        #[command(subcommand)]
        action: GameAction,
    },
    /// Export an element as a portrait
    Export {
        #[command(subcommand)]
        what: ExportWhat,
    },
}

#[derive(Subcommand)]
enum GameAction {
    /// Apply one move to a state such as 2,1,3,2,2,1
    Act {
        #[arg(long)]
        state: String,
        #[arg(long = "move")]
        mv: char,
    },
    /// Shortest solution moving n disks from peg 1 to peg 3
    Solve {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum ExportWhat {
    Portrait {
        /// Word expression, e.g. acab, [a,b]^c, tau^2(w1)
        word: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

struct Outcome {
    body: String,
    summary: Vec<String>,
    pass: bool,
}

fn entry(id: impl Into<String>, computed: Value, expected: Value) -> Value {
    let pass = computed == expected;
    json!({"id": id.into(), "computed": computed, "expected": expected, "pass": pass})
}

fn document(command: &str, params: Value, results: Vec<Value>) -> Outcome {
    let pass = results.iter().all(|r| r["pass"] == json!(true));
    let summary = results
        .iter()
        .map(|r| {
            format!(
                "{:<5} {}",
                if r["pass"] == json!(true) {
                    "PASS"
                } else {
                    "FAIL"
                },
                r["id"].as_str().unwrap_or("?")
            )
        })
        .collect();
    let doc = json!({"command": command, "params": params, "results": results, "pass": pass});
    Outcome {
        body: serde_json::to_string_pretty(&doc).expect("json values serialize"),
        summary,
        pass,
    }
}

/// Entry of the expected table, or the closed formula past its end.
fn expected_int(key: &str, formula: impl Fn() -> BigUint) -> BigUint {
    match expected().get(key) {
        Some(_) => expected().int(key),
        None => formula(),
    }
}

fn analyzer(slow: bool) -> Analyzer {
    Analyzer::with_depth_cap(if slow { MAX_DEPTH } else { DEFAULT_DEPTH })
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Verify { list: true, .. } => {
            let results: Vec<Value> = LEMMAS
                .iter()
                .map(|(id, statement)| json!({"id": id, "statement": statement}))
                .collect();
            Ok(Outcome {
                body: serde_json::to_string_pretty(
                    &json!({"command": "verify", "lemmas": results}),
                )
                .expect("json values serialize"),
                summary: LEMMAS
                    .iter()
                    .map(|(id, s)| format!("{id:<13} {s}"))
                    .collect(),
                pass: true,
            })
        }
        Command::Verify {
            id, depth, slow, ..
        } => {
            let id =
                id.ok_or_else(|| Error::Parse("verify needs a lemma id, `all` or --list".into()))?;
            let a = analyzer(slow);
            let ids: Vec<&str> = if id == "all" {
                LEMMAS.iter().map(|(id, _)| *id).collect()
            } else {
                vec![id.as_str()]
            };
            let mut results = Vec::new();
            for id in ids {
                let r = a.verify(id, depth)?;
                results.push(serde_json::to_value(&r).expect("reports serialize"));
            }
            Ok(document(
                "verify",
                json!({"id": id, "depth": depth, "slow": slow}),
                results,
            ))
        }
        Command::Qtable { n_max, depth, slow } => {
            let a = analyzer(slow);
            let mut results = Vec::new();
            for (n, row) in a.q_table(n_max, depth)? {
                let want = big_json(&expected_int(&format!("q.{n}"), || q_formula(n)));
                for e in row {
                    results.push(entry(
                        format!("q({},{n})", e.depth),
                        big_json(&e.order),
                        want.clone(),
                    ));
                }
            }
            Ok(document(
                "qtable",
                json!({"n_max": n_max, "depth": depth, "slow": slow}),
                results,
            ))
        }
        Command::KernelReport { n_max, depth, slow } => {
            let a = analyzer(slow);
            let report = a.kernel_report(n_max, depth)?;
            let table = expected();
            let mut results = vec![entry(
                "gamma.1",
                big_json(&report.gamma1),
                big_json(&table.int("gamma.1")),
            )];
            for row in &report.rows {
                let n = row.n;
                let gamma_key = format!("gamma.{}", n + 1);
                let gamma = expected_int(&gamma_key, || gamma_formula(n + 1));
                results.push(entry(
                    gamma_key,
                    big_json(&row.gamma_next),
                    big_json(&gamma),
                ));
                let q = expected_int(&format!("q.{n}"), || q_formula(n));
                for e in &row.q {
                    results.push(entry(
                        format!("q({},{n})", e.depth),
                        big_json(&e.order),
                        big_json(&q),
                    ));
                }
                let k = table
                    .int("index.derived_stab_over_rist")
                    .pow(3u32.pow(n as u32));
                results.push(entry(
                    format!("K({n},{})", n + 1),
                    big_json(&row.k),
                    big_json(&k),
                ));
                results.push(entry(
                    format!("H({n},{})", n + 1),
                    big_json(&row.h),
                    json!(4),
                ));
                results.push(entry(
                    format!("elab({n})"),
                    json!(row.elementary_abelian_2),
                    json!(true),
                ));
                results.push(entry(
                    format!("stable({n})"),
                    json!(row.q_stable),
                    json!(true),
                ));
            }
            let h = &report.h_subspace;
            results.push(json!({
                "id": "h_subspace",
                "computed": serde_json::to_value(h).expect("serializes"),
                "expected": {"dim": 2, "inside_u": true, "generators_in_stab2": true},
                "pass": h.subspace.dim() == 2 && h.inside_u && h.generators_in_stab2,
            }));
            results.push(entry(
                "kernel",
                json!({"order": report.kernel_order.as_ref().map(big_json), "type": report.kernel_type}),
                json!({"order": 4, "type": KLEIN_FOUR}),
            ));
            let mut out = document(
                "kernel-report",
                json!({"n_max": n_max, "depth": depth, "slow": slow}),
                results,
            );
            if let Some(f) = &report.first_failure {
                out.summary.push(format!("first failure: {f}"));
            }
            out.summary.push(match &report.kernel_type {
                Some(t) => format!("rigid kernel: order 4, {t}"),
                None => "rigid kernel: not determined".into(),
            });
            Ok(out)
        }
        Command::Relators { max_tau, depth } => {
            if depth > MAX_PORTRAIT_DEPTH || max_tau > MAX_TAU {
                return Err(Error::ResourceCap(format!(
                    "relators supports depth <= {MAX_PORTRAIT_DEPTH} and max-tau <= {MAX_TAU}"
                )));
            }
            let rec = WreathRecursion::hanoi();
            let mut results = Vec::new();
            for s in ["aa", "bb", "cc"] {
                let w = Word::plain(s)?;
                results.push(entry(s, json!(rec.check_relator(&w, depth)), json!(true)));
            }
            for i in 1..=4 {
                let w = relator(i)?;
                for n in 0..=max_tau {
                    results.push(entry(
                        format!("tau^{n}(w{i})"),
                        json!(rec.check_relator(&w.tau_pow(n), depth)),
                        json!(true),
                    ));
                }
            }
            let ab = rec.check_relator(&Word::plain("ab")?, depth);
            results.push(entry("ab", json!(ab), json!(depth == 0)));
            Ok(document(
                "relators",
                json!({"max_tau": max_tau, "depth": depth}),
                results,
            ))
        }
        Command::Game { action } => match action {
            GameAction::Act { state, mv } => {
                let s: GameState = state.parse()?;
                let m = Letter::from_char(mv)
                    .ok_or_else(|| Error::Parse(format!("unknown move {mv:?}")))?;
                let by_game = game::apply_move(&s, m);
                let portrait = WreathRecursion::hanoi().evaluate(&Word::letter(m), s.disks());
                let by_tree = GameState::from_vertex(&portrait.apply(&s.to_vertex())?);
                let mut out = document(
                    "game act",
                    json!({"state": s.to_string(), "move": mv.to_string()}),
                    vec![entry(
                        "act",
                        json!(by_game.to_string()),
                        json!(by_tree.to_string()),
                    )],
                );
                out.summary.push(by_game.to_string());
                Ok(out)
            }
            GameAction::Solve { n } => {
                let w = game::solve(n)?;
                let end = game::apply_word(&GameState::tower(n, 1)?, &w);
                let target = GameState::tower(n, 3)?;
                let mut computed = Map::new();
                computed.insert("length".into(), json!(w.len()));
                computed.insert("reaches_goal".into(), json!(end == target));
                let expected = json!({"length": (1u64 << n) - 1, "reaches_goal": true});
                let pass = Value::Object(computed.clone()) == expected;
                computed.insert("word".into(), json!(w.to_string()));
                computed.insert("moves".into(), json!(game::move_list(&w)));
                let mut out = document(
                    "game solve",
                    json!({"n": n}),
                    vec![
                        json!({"id": "solve", "computed": computed, "expected": expected, "pass": pass}),
                    ],
                );
                out.summary.push(w.to_string());
                Ok(out)
            }
        },
        Command::Export {
            what:
                ExportWhat::Portrait {
                    word,
                    depth,
                    format,
                },
        } => {
            if depth > MAX_PORTRAIT_DEPTH {
                return Err(Error::ResourceCap(format!(
                    "export supports depth <= {MAX_PORTRAIT_DEPTH}"
                )));
            }
            let w: Word = word.parse()?;
            let p = WreathRecursion::hanoi().evaluate(&w, depth);
            let body = match format {
                Format::Dot => p.to_dot(),
                Format::Json => serde_json::to_string_pretty(&p).expect("portraits serialize"),
            };
            Ok(Outcome {
                body,
                summary: vec![format!("{} letters at depth {depth}", w.len())],
                pass: true,
            })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceCap(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::new()
        .parse_filters(&std::env::var("LOGLEVEL").unwrap_or_else(|_| "warn".into()))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let mut body = out.body;
            if !body.ends_with('\n') {
                body.push('\n');
            }
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &body) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{body}"),
            }
            for line in &out.summary {
                eprintln!("{line}");
            }
            eprintln!(
                "{}",
                if out.pass {
                    "overall: PASS"
                } else {
                    "overall: FAIL"
                }
            );
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
