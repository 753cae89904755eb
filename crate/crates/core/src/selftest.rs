//! Randomized invariant suites behind the `selftest` verb. Each suite checks
//! library output against the library evaluator on small enumerated
//! structures; the independent oracles live in the test tree.

use rayon::prelude::*;
use serde::Serialize;

use crate::gen::{Gen, GenConfig};
use crate::ode::{refine_reach, ReachQuery, ReachVerdict};
use crate::proof::{check_proof, deduction_transform, mutations, Verdict, AXIOMS};
use crate::semantics::{default_support, eval_formula, Structure, StructureSpace, DEFAULT_CAP};
use crate::syntax::*;
use crate::translate::{g1, lfp_to_mu, mu_to_lfp, parikh_f};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

type Outcome = Result<usize, String>;

pub const SUITES: &[&str] = &["axioms", "translate-f", "translate-g1", "lfp-round-trip", "proofs", "reach"];

fn structures(sig: &GameSignature, max_domain: usize) -> Result<Vec<Structure>, String> {
    StructureSpace::new(sig, max_domain, 1, DEFAULT_CAP)
        .map(|s| s.to_vec())
        .map_err(|e| e.to_string())
}

fn same(st: &Structure, a: &Formula, b: &Formula) -> Result<bool, String> {
    let sup = default_support(&[a, b], &[]);
    let l = eval_formula(st, a, &sup).map_err(|e| e.to_string())?;
    let r = eval_formula(st, b, &sup).map_err(|e| e.to_string())?;
    Ok(l == r)
}

fn equal_everywhere(all: &[Structure], a: &Formula, b: &Formula, what: &str) -> Result<(), String> {
    for st in all {
        if !same(st, a, b)? {
            return Err(format!("{what}: `{a}` and `{b}` differ on a structure with |D|={}", st.domain));
        }
    }
    Ok(())
}

fn axioms(seed: u64, rounds: usize) -> Outcome {
    let all = structures(&GenConfig::default().signature(), 2)?;
    let mut n = 0;
    for (name, logics) in AXIOMS {
        for &logic in *logics {
            let mut g = Gen::new(seed ^ ((n as u64) << 16), GenConfig::default());
            for _ in 0..rounds {
                let f = g.axiom_instance(name, logic, 2);
                let sup = default_support(&[&f], &[]);
                for st in &all {
                    let full = eval_formula(st, &f, &sup).map_err(|e| e.to_string())?.is_full();
                    if !full {
                        return Err(format!("{name} instance `{f}` is not valid"));
                    }
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

fn translate_f(seed: u64, rounds: usize) -> Outcome {
    let all = structures(&GenConfig::default().signature(), 2)?;
    let mut g = Gen::new(seed, GenConfig::default());
    for _ in 0..rounds {
        let phi = g.gl_formula(3);
        equal_everywhere(&all, &parikh_f(&phi), &phi, "F")?;
    }
    Ok(rounds)
}

fn translate_g1(seed: u64, rounds: usize) -> Outcome {
    let all = structures(&GenConfig::default().signature(), 1)?;
    let mut g = Gen::new(seed, GenConfig::default());
    for _ in 0..rounds {
        let phi = g.mu_formula(3);
        equal_everywhere(&all, &g1(&phi), &phi, "G1")?;
    }
    Ok(rounds)
}

fn lfp_round_trip(seed: u64, rounds: usize) -> Outcome {
    let cfg = GenConfig {
        actions: vec![],
        ..GenConfig::default()
    };
    let all = structures(&cfg.signature(), 2)?;
    let mut g = Gen::new(seed, cfg);
    for _ in 0..rounds {
        let phi = g.mu_formula(3);
        let vars: Vec<String> = all_vars(&phi).into_iter().collect();
        let lfp = mu_to_lfp(&phi, &vars).map_err(|e| format!("{phi}: {e}"))?;
        let back = lfp_to_mu(&lfp).map_err(|e| format!("{lfp}: {e}"))?;
        equal_everywhere(&all, &back, &phi, "LFP round trip")?;
    }
    Ok(rounds)
}

fn proofs(seed: u64, rounds: usize) -> Outcome {
    let mut g = Gen::new(seed, GenConfig::default());
    let mut n = 0;
    for k in 0..rounds {
        let p = g.hypothesis_proof(2 + k % 3);
        let d = deduction_transform(&p).map_err(|e| format!("deduction: {e}"))?;
        for q in [&p, &d] {
            if check_proof(q, Logic::Gl) != Verdict::Accepted {
                return Err(format!("proof rejected:\n{q}"));
            }
            for (m, r) in mutations(q) {
                if check_proof(&r, Logic::Gl).is_accepted() {
                    return Err(format!("mutation {m:?} accepted"));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

fn reach(_seed: u64, _rounds: usize) -> Outcome {
    let harmonic = |y: &str| {
        format!(
            r#"{{"vars":["x1","x2"],"field":["x2","-x1"],"x0":[1,0],"y":{y},"t":1.5707963,"K":2,
                "depth":6,"grid":{{"radius":0.05,"points":5}}}}"#
        )
    };
    let cases = [
        (harmonic("[0,-1]"), ReachVerdict::PassedToDepth(6)),
        (harmonic("[1.9,1.9]"), ReachVerdict::RejectedAtLevel0),
        (
            r#"{"vars":["x"],"field":["x"],"x0":[1],"y":[2.718281828],"t":1,"K":3,"depth":4}"#.to_string(),
            ReachVerdict::PassedToDepth(4),
        ),
    ];
    for (src, want) in &cases {
        let q = ReachQuery::from_json(src).map_err(|e| e.to_string())?;
        let got = refine_reach(&q).map_err(|e| e.to_string())?.verdict;
        if got != *want {
            return Err(format!("expected {want}, got {got}"));
        }
    }
    Ok(cases.len())
}

/// Runs the named suites (all when `only` is empty) in parallel. Reports come
/// back in `SUITES` order.
pub fn run(seed: u64, rounds: usize, only: &[String]) -> Result<Vec<SuiteReport>, String> {
    if let Some(bad) = only.iter().find(|s| !SUITES.contains(&s.as_str())) {
        return Err(format!("unknown suite `{bad}`"));
    }
    let picked: Vec<&str> = SUITES
        .iter()
        .copied()
        .filter(|s| only.is_empty() || only.iter().any(|o| o == s))
        .collect();
    Ok(picked
        .par_iter()
        .map(|&name| {
            let f: fn(u64, usize) -> Outcome = match name {
                "axioms" => axioms,
                "translate-f" => translate_f,
                "translate-g1" => translate_g1,
                "lfp-round-trip" => lfp_round_trip,
                "proofs" => proofs,
                _ => reach,
            };
            let (cases, failure) = match f(seed, rounds) {
                Ok(n) => (n, None),
                Err(e) => (0, Some(e)),
            };
            SuiteReport {
                name: name.to_string(),
                cases,
                failure,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let reports = run(7, 3, &[]).unwrap();
        assert_eq!(reports.len(), SUITES.len());
        for r in &reports {
            assert!(r.passed(), "{}: {:?}", r.name, r.failure);
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run(1, 1, &["nope".into()]).is_err());
    }
}
