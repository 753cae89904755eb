use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use gamemu::gen::seed_from_env;
use gamemu::ode::{emit_g_formula, refine_reach, to_f64, ReachQuery, ReachVerdict};
use gamemu::proof::{check_proof, Proof, Verdict};
use gamemu::selftest;
use gamemu::semantics::{default_support, eval_formula, Structure, StructureSpace, DEFAULT_CAP};
use gamemu::syntax::{parse_formula_infer, Formula, GameSignature, Logic};
use gamemu::translate::{g1, g_combined, lfp_to_mu, mu_to_lfp, parikh_f, parse_lfp};

const DEFAULT_SEED: u64 = 2024;

#[derive(Parser)]
#[command(name = "gamemu", version, about = "First-order game logic and modal mu-calculus toolkit")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for `equiv` and `selftest` (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report wall-clock time (on stderr, or as `elapsed_ms` with --json).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Gl,
    Mu,
}

impl From<KindArg> for Logic {
    fn from(k: KindArg) -> Logic {
        match k {
            KindArg::Gl => Logic::Gl,
            KindArg::Mu => Logic::Mu,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    /// Game formulas to fixpoint formulas.
    F,
    /// Fixpoint formulas to game formulas (one-element structures).
    G1,
    /// Fixpoint formulas to game formulas via sabotage (game-shaped fragment).
    G,
    /// Fixpoint formulas to least fixpoint logic.
    Mu2lfp,
    /// Least fixpoint logic to fixpoint formulas.
    Lfp2mu,
}

impl Direction {
    fn name(self) -> &'static str {
        match self {
            Direction::F => "f",
            Direction::G1 => "g1",
            Direction::G => "g",
            Direction::Mu2lfp => "mu2lfp",
            Direction::Lfp2mu => "lfp2mu",
        }
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Evaluate a formula on a structure file.
    Check {
        structure: String,
        /// Formula text, or `@path` to read it from a file.
        formula: String,
        /// Logic of the formula; inferred when omitted.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Translate a formula.
    Translate {
        #[arg(long, value_enum)]
        dir: Direction,
        formula: String,
    },
    /// Check a proof file (JSON lines).
    Prove {
        proof: String,
        #[arg(long, value_enum, default_value = "gl")]
        calculus: KindArg,
    },
    /// Run the reachability refinement on a query file.
    Reach {
        query: String,
        /// Also print the first-order Taylor condition and reachability formulas.
        #[arg(long)]
        formulas: bool,
    },
    /// Compare two formulas on every structure up to a domain bound.
    Equiv {
        left: String,
        right: String,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        /// Generators per action parameter tuple.
        #[arg(long, default_value_t = 1)]
        max_gen: usize,
    },
    /// Run the randomized invariant suites.
    Selftest {
        /// Cases per suite.
        #[arg(long, default_value_t = 20)]
        rounds: usize,
        /// Seed; defaults to GAMEMU_SEED, then 2024.
        #[arg(long)]
        seed: Option<u64>,
        /// Restrict to the named suites.
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Check { .. } => "check",
            Verb::Translate { .. } => "translate",
            Verb::Prove { .. } => "prove",
            Verb::Reach { .. } => "reach",
            Verb::Equiv { .. } => "equiv",
            Verb::Selftest { .. } => "selftest",
        }
    }
}

/// A finished verb: the JSON report, its text rendering and whether the
/// verdict was positive.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

type Res<T> = Result<T, String>;

fn read_file(path: &str) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn formula_text(arg: &str) -> Res<String> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(read_file(path)?.trim().to_string()),
        None => Ok(arg.to_string()),
    }
}

fn parse_any(src: &str, kind: Option<KindArg>) -> Res<(Formula, GameSignature, Logic)> {
    match kind {
        Some(k) => {
            let logic = Logic::from(k);
            parse_formula_infer(src, logic)
                .map(|(f, s)| (f, s, logic))
                .map_err(|e| e.to_string())
        }
        None => match parse_formula_infer(src, Logic::Gl) {
            Ok((f, s)) => Ok((f, s, Logic::Gl)),
            Err(gl_err) => parse_formula_infer(src, Logic::Mu)
                .map(|(f, s)| (f, s, Logic::Mu))
                .map_err(|_| gl_err.to_string()),
        },
    }
}

fn assignment_json(vars: &[String], values: &[usize]) -> Value {
    let m: serde_json::Map<String, Value> = vars.iter().zip(values).map(|(v, u)| (v.clone(), json!(u))).collect();
    Value::Object(m)
}

fn assignment_text(vars: &[String], values: &[usize]) -> String {
    if vars.is_empty() {
        return "(empty assignment)".into();
    }
    vars.iter()
        .zip(values)
        .map(|(v, u)| format!("{v}={u}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn check(structure: &str, formula: &str, kind: Option<KindArg>) -> Res<Report> {
    let st = Structure::from_json_str(&read_file(structure)?).map_err(|e| format!("{structure}: {e}"))?;
    let (f, sig, logic) = parse_any(&formula_text(formula)?, kind)?;
    st.check_signature(&sig).map_err(|e| e.to_string())?;
    let sup = default_support(&[&f], &[]);
    let set = eval_formula(&st, &f, &sup).map_err(|e| e.to_string())?;
    let rows = set.assignments();
    let total = st.domain.pow(sup.len() as u32);
    let valid = set.is_full();
    let mut text = format!("formula: {f}\nsupport: ");
    text += &if sup.is_empty() { "(none)".to_string() } else { sup.join(" ") };
    let _ = writeln!(text, "\nsatisfying: {} of {total}", rows.len());
    for r in &rows {
        let _ = writeln!(text, "  {}", assignment_text(&sup, r));
    }
    let _ = write!(text, "valid: {valid}");
    Ok(Report {
        json: json!({
            "formula": f.to_string(),
            "kind": logic.to_string(),
            "support": sup,
            "satisfying": rows.iter().map(|r| assignment_json(&sup, r)).collect::<Vec<_>>(),
            "states": total,
            "valid": valid,
        }),
        text,
        ok: valid,
    })
}

fn translate(dir: Direction, formula: &str) -> Res<Report> {
    let src = formula_text(formula)?;
    let (input, output) = match dir {
        Direction::Lfp2mu => {
            let l = parse_lfp(&src, None).map_err(|e| e.to_string())?;
            let f = lfp_to_mu(&l).map_err(|e| e.to_string())?;
            (l.to_string(), f.to_string())
        }
        Direction::F => {
            let (f, _, _) = parse_any(&src, Some(KindArg::Gl))?;
            (f.to_string(), parikh_f(&f).to_string())
        }
        Direction::G1 | Direction::G | Direction::Mu2lfp => {
            let (f, _, _) = parse_any(&src, Some(KindArg::Mu))?;
            let out = match dir {
                Direction::G1 => g1(&f).to_string(),
                Direction::G => g_combined(&f).map_err(|e| e.to_string())?.to_string(),
                _ => {
                    let vars: Vec<String> = gamemu::syntax::all_vars(&f).into_iter().collect();
                    mu_to_lfp(&f, &vars).map_err(|e| e.to_string())?.to_string()
                }
            };
            (f.to_string(), out)
        }
    };
    Ok(Report {
        json: json!({"dir": dir.name(), "input": input, "output": output}),
        text: output,
        ok: true,
    })
}

fn prove(path: &str, calculus: KindArg) -> Res<Report> {
    let logic = Logic::from(calculus);
    let p = Proof::from_jsonl(&read_file(path)?, logic).map_err(|e| format!("{path}: {e}"))?;
    let verdict = check_proof(&p, logic);
    let mut json = json!({"calculus": logic.to_string(), "lines": p.lines.len()});
    let text = match &verdict {
        Verdict::Accepted => {
            json["accepted"] = json!(true);
            "Accepted".to_string()
        }
        Verdict::Rejected { line, reason } => {
            let formula = p.lines.get(*line).map(|l| l.formula.to_string()).unwrap_or_default();
            json["accepted"] = json!(false);
            json["rejected"] = json!({"line": line + 1, "formula": formula, "reason": reason});
            format!("Rejected line {}: {reason}\n  {formula}", line + 1)
        }
    };
    Ok(Report {
        json,
        text,
        ok: verdict.is_accepted(),
    })
}

fn number(r: &BigRational) -> Value {
    json!({"exact": r.to_string(), "approx": to_f64(r)})
}

fn reach(path: &str, formulas: bool) -> Res<Report> {
    let q = ReachQuery::from_json(&read_file(path)?).map_err(|e| format!("{path}: {e}"))?;
    let r = refine_reach(&q).map_err(|e| e.to_string())?;
    let verdict = r.verdict.to_string();
    let mut text = format!(
        "{verdict}\nN = {}\nlevel 0: |y - x - t F(x)| = {} {} t^2/2 N = {}\nchecks: {}",
        to_f64(&r.n),
        to_f64(&r.level0.lhs),
        if r.level0.holds { "<=" } else { ">" },
        to_f64(&r.level0.bound),
        r.checks
    );
    let mut json = json!({
        "verdict": verdict,
        "passed": r.verdict.is_pass(),
        "n": number(&r.n),
        "level0": {"lhs": number(&r.level0.lhs), "bound": number(&r.level0.bound), "holds": r.level0.holds},
        "checks": r.checks,
    });
    match r.verdict {
        ReachVerdict::PassedToDepth(d) => json["depth"] = json!(d),
        ReachVerdict::NoWitnessFound { depth, budget_exhausted } => {
            json["depth"] = json!(depth);
            json["budget_exhausted"] = json!(budget_exhausted);
        }
        ReachVerdict::RejectedAtLevel0 => {}
    }
    if formulas {
        let g = emit_g_formula(&q.field, &q.k);
        let _ = write!(text, "\nG: {}\nmu: {}\ngame: {}", g.g, g.mu, g.game);
        json["formulas"] = json!({"g": g.g, "mu": g.mu, "game": g.game});
    }
    Ok(Report {
        json,
        text,
        ok: r.verdict.is_pass(),
    })
}

struct Counterexample {
    structure: Structure,
    assignment: Vec<usize>,
    left: bool,
}

fn equiv(left: &str, right: &str, max_domain: usize, max_gen: usize) -> Res<Report> {
    let (a, sa, _) = parse_any(&formula_text(left)?, None)?;
    let (b, sb, _) = parse_any(&formula_text(right)?, None)?;
    let mut sig = sa;
    sig.merge(&sb).map_err(|e| e.to_string())?;
    let space = StructureSpace::new(&sig, max_domain, max_gen, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let all = space.to_vec();
    let sup = default_support(&[&a, &b], &[]);
    let found = all
        .par_iter()
        .map(|st| -> Res<Option<Counterexample>> {
            let l = eval_formula(st, &a, &sup).map_err(|e| e.to_string())?;
            let r = eval_formula(st, &b, &sup).map_err(|e| e.to_string())?;
            let diff = l
                .assignments()
                .into_iter()
                .find(|w| !r.contains(w))
                .map(|w| (w, true))
                .or_else(|| r.assignments().into_iter().find(|w| !l.contains(w)).map(|w| (w, false)));
            Ok(diff.map(|(assignment, left)| Counterexample {
                structure: st.clone(),
                assignment,
                left,
            }))
        })
        .find_first(|r| !matches!(r, Ok(None)))
        .transpose()?
        .flatten();
    let mut json = json!({
        "left": a.to_string(),
        "right": b.to_string(),
        "max_domain": max_domain,
        "max_gen": max_gen,
        "structures": all.len(),
        "equivalent": found.is_none(),
    });
    let text = match &found {
        None => format!(
            "equivalent on {} structures (|D| <= {max_domain}, <= {max_gen} generators)",
            all.len()
        ),
        Some(c) => {
            json["counterexample"] = json!({
                "structure": c.structure.to_json(),
                "assignment": assignment_json(&sup, &c.assignment),
                "left": c.left,
                "right": !c.left,
            });
            format!(
                "not equivalent\nstructure: {}\nassignment: {}\nleft: {}, right: {}",
                c.structure.to_json(),
                assignment_text(&sup, &c.assignment),
                c.left,
                !c.left
            )
        }
    };
    Ok(Report {
        json,
        text,
        ok: found.is_none(),
    })
}

fn run_selftest(rounds: usize, seed: Option<u64>, suites: &[String]) -> Res<Report> {
    let seed = seed.unwrap_or_else(|| seed_from_env(DEFAULT_SEED));
    let reports = selftest::run(seed, rounds, suites)?;
    let ok = reports.iter().all(selftest::SuiteReport::passed);
    let mut text = format!("seed {seed}, {rounds} rounds");
    for r in &reports {
        match &r.failure {
            None => {
                let _ = write!(text, "\n{} PASS ({} cases)", r.name, r.cases);
            }
            Some(e) => {
                let _ = write!(text, "\n{} FAIL: {e}", r.name);
            }
        }
    }
    Ok(Report {
        json: json!({"seed": seed, "rounds": rounds, "suites": reports, "passed": ok}),
        text,
        ok,
    })
}

fn dispatch(verb: &Verb) -> Res<Report> {
    match verb {
        Verb::Check { structure, formula, kind } => check(structure, formula, *kind),
        Verb::Translate { dir, formula } => translate(*dir, formula),
        Verb::Prove { proof, calculus } => prove(proof, *calculus),
        Verb::Reach { query, formulas } => reach(query, *formulas),
        Verb::Equiv {
            left,
            right,
            max_domain,
            max_gen,
        } => equiv(left, right, *max_domain, *max_gen),
        Verb::Selftest { rounds, seed, suites } => run_selftest(*rounds, *seed, suites),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = dispatch(&cli.verb);
    let elapsed = start.elapsed();
    let (mut json, text, code) = match outcome {
        Ok(r) => (r.json, Some(r.text), if r.ok { 0 } else { 1 }),
        Err(e) => (json!({"error": e}), None, 2),
    };
    if cli.json {
        let mut out = BTreeMap::new();
        out.insert("verb".to_string(), json!(cli.verb.name()));
        out.insert("exit_code".to_string(), json!(code));
        if let Value::Object(m) = json.take() {
            out.extend(m);
        }
        if cli.timing {
            out.insert("elapsed_ms".to_string(), json!(elapsed.as_millis() as u64));
        }
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable report"));
    } else {
        match text {
            Some(t) => println!("{t}"),
            None => eprintln!("error: {}", json["error"].as_str().unwrap_or_default()),
        }
        if cli.timing {
            eprintln!("time: {:.3}s", elapsed.as_secs_f64());
        }
    }
    ExitCode::from(code)
}
