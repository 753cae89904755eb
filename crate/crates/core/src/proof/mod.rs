//! Hilbert-style proofs for the game logic and fixpoint calculi: checking,
//! derived rules, the deduction transformation and proof mutations.

pub mod axioms;
pub mod check;
pub mod derive;
pub mod mutate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::syntax::{parse_formula_infer, Formula, GameSignature, Logic, SyntaxError, Term};

pub use axioms::{check_axiom_instance, check_axiom_with, AXIOMS};
pub use check::{check_proof, is_tautology, Verdict};
pub use derive::{deduction_transform, derive_schema, gexists_proof, Schema};
pub use mutate::{mutations, Mutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("unknown axiom schema `{0}`")]
    UnknownSchema(String),
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("malformed proof file: {0}")]
    Format(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Hypothesis,
    Taut,
    EqAxiom,
    Axiom {
        name: String,
        bindings: BTreeMap<String, Term>,
    },
    Mp(usize, usize),
    Mon(usize),
    DiaInd(usize),
    MuInd(usize),
}

impl Justification {
    pub fn axiom(name: &str) -> Justification {
        Justification::Axiom {
            name: name.to_string(),
            bindings: BTreeMap::new(),
        }
    }

    pub fn premises(&self) -> Vec<usize> {
        match *self {
            Justification::Mp(i, j) => vec![i, j],
            Justification::Mon(i) | Justification::DiaInd(i) | Justification::MuInd(i) => vec![i],
            _ => vec![],
        }
    }

    fn map_premises(&self, f: impl Fn(usize) -> usize) -> Justification {
        match *self {
            Justification::Mp(i, j) => Justification::Mp(f(i), f(j)),
            Justification::Mon(i) => Justification::Mon(f(i)),
            Justification::DiaInd(i) => Justification::DiaInd(f(i)),
            Justification::MuInd(i) => Justification::MuInd(f(i)),
            ref other => other.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub formula: Formula,
    pub just: Justification,
}

/// Lines are addressed by position. When `goal` is set the last line must
/// be exactly that formula.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Proof {
    pub hypothesis: Option<Formula>,
    pub goal: Option<Formula>,
    pub lines: Vec<Line>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    /// Drops lines the conclusion does not depend on.
    pub fn prune(&self) -> Proof {
        let n = self.lines.len();
        if n == 0 {
            return self.clone();
        }
        let mut needed = vec![false; n];
        needed[n - 1] = true;
        for k in (0..n).rev() {
            if needed[k] {
                for p in self.lines[k].just.premises() {
                    if p < k {
                        needed[p] = true;
                    }
                }
            }
        }
        let mut remap = vec![0; n];
        let mut lines = Vec::new();
        for k in 0..n {
            if needed[k] {
                remap[k] = lines.len();
                let l = &self.lines[k];
                lines.push(Line {
                    formula: l.formula.clone(),
                    just: l.just.map_premises(|p| remap[p]),
                });
            }
        }
        Proof {
            hypothesis: self.hypothesis.clone(),
            goal: self.goal.clone(),
            lines,
        }
    }

    /// JSON lines: an optional header `{"hypothesis", "goal"}` followed by one
    /// object per line with 1-based ids.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        if self.hypothesis.is_some() || self.goal.is_some() {
            let mut head = Map::new();
            if let Some(h) = &self.hypothesis {
                head.insert("hypothesis".into(), json!(h.to_string()));
            }
            if let Some(g) = &self.goal {
                head.insert("goal".into(), json!(g.to_string()));
            }
            out.push_str(&Value::Object(head).to_string());
            out.push('\n');
        }
        for (k, l) in self.lines.iter().enumerate() {
            let just = match &l.just {
                Justification::Hypothesis => json!({"kind": "hypothesis"}),
                Justification::Taut => json!({"kind": "taut"}),
                Justification::EqAxiom => json!({"kind": "eq"}),
                Justification::Axiom { name, bindings } => {
                    let mut o = json!({"kind": "axiom", "name": name});
                    if !bindings.is_empty() {
                        let b: BTreeMap<_, _> = bindings.iter().map(|(k, t)| (k, t.to_string())).collect();
                        o["bindings"] = json!(b);
                    }
                    o
                }
                Justification::Mp(i, j) => json!({"kind": "mp", "from": [i + 1, j + 1]}),
                Justification::Mon(i) => json!({"kind": "mon", "from": i + 1}),
                Justification::DiaInd(i) => json!({"kind": "diaind", "from": i + 1}),
                Justification::MuInd(i) => json!({"kind": "muind", "from": i + 1}),
            };
            let row = json!({"id": k + 1, "formula": l.formula.to_string(), "just": just});
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the JSON-lines format. Ids may be any distinct integers; a
    /// premise naming an id that has not appeared yet is kept as a forward
    /// reference for the checker to reject.
    pub fn from_jsonl(src: &str, logic: Logic) -> Result<Proof, ProofError> {
        let bad = |msg: String| ProofError::Format(msg);
        let mut sig = GameSignature::new();
        let parse = |text: &str, sig: &mut GameSignature| -> Result<Formula, ProofError> {
            let (f, s) = parse_formula_infer(text, logic)?;
            sig.merge(&s)?;
            Ok(f)
        };
        let mut proof = Proof::default();
        let mut rows = Vec::new();
        for (n, raw) in src.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            let v: Value = serde_json::from_str(raw).map_err(|e| bad(format!("line {}: {e}", n + 1)))?;
            if v.get("id").is_none() {
                if let Some(h) = v.get("hypothesis").and_then(Value::as_str) {
                    proof.hypothesis = Some(parse(h, &mut sig)?);
                }
                if let Some(g) = v.get("goal").and_then(Value::as_str) {
                    proof.goal = Some(parse(g, &mut sig)?);
                }
                continue;
            }
            rows.push((n + 1, v));
        }
        let mut index: HashMap<i64, usize> = HashMap::new();
        for (pos, (n, v)) in rows.iter().enumerate() {
            let id = v["id"].as_i64().ok_or_else(|| bad(format!("line {n}: id is not an integer")))?;
            if index.insert(id, pos).is_some() {
                return Err(bad(format!("line {n}: duplicate id {id}")));
            }
        }
        // Unknown ids map past the end so the checker reports them as forward.
        let resolve = |id: &Value, n: usize| -> Result<usize, ProofError> {
            let id = id.as_i64().ok_or_else(|| bad(format!("line {n}: premise is not an integer")))?;
            Ok(index.get(&id).copied().unwrap_or(usize::MAX))
        };
        for (n, v) in &rows {
            let text = v["formula"]
                .as_str()
                .ok_or_else(|| bad(format!("line {n}: missing formula")))?;
            let formula = parse(text, &mut sig)?;
            let j = &v["just"];
            let kind = j["kind"].as_str().ok_or_else(|| bad(format!("line {n}: missing kind")))?;
            let single = || resolve(&j["from"], *n);
            let just = match kind {
                "hypothesis" => Justification::Hypothesis,
                "taut" => Justification::Taut,
                "eq" => Justification::EqAxiom,
                "axiom" => {
                    let name = j["name"]
                        .as_str()
                        .ok_or_else(|| bad(format!("line {n}: axiom without name")))?;
                    let mut bindings = BTreeMap::new();
                    if let Some(b) = j.get("bindings").and_then(Value::as_object) {
                        for (k, t) in b {
                            let t = t.as_str().ok_or_else(|| bad(format!("line {n}: binding `{k}`")))?;
                            bindings.insert(k.clone(), crate::syntax::parse_term(t, &sig)?);
                        }
                    }
                    Justification::Axiom {
                        name: name.to_string(),
                        bindings,
                    }
                }
                "mp" => {
                    let from = j["from"]
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| bad(format!("line {n}: mp needs two premises")))?;
                    Justification::Mp(resolve(&from[0], *n)?, resolve(&from[1], *n)?)
                }
                "mon" => Justification::Mon(single()?),
                "diaind" => Justification::DiaInd(single()?),
                "muind" => Justification::MuInd(single()?),
                other => return Err(bad(format!("line {n}: unknown justification `{other}`"))),
            };
            proof.lines.push(Line { formula, just });
        }
        Ok(proof)
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(h) = &self.hypothesis {
            writeln!(f, "hypothesis: {h}")?;
        }
        for (k, l) in self.lines.iter().enumerate() {
            let just = match &l.just {
                Justification::Hypothesis => "hyp".to_string(),
                Justification::Taut => "taut".to_string(),
                Justification::EqAxiom => "eq".to_string(),
                Justification::Axiom { name, .. } => name.clone(),
                Justification::Mp(i, j) => format!("MP {} {}", i + 1, j + 1),
                Justification::Mon(i) => format!("M {}", i + 1),
                Justification::DiaInd(i) => format!("I* {}", i + 1),
                Justification::MuInd(i) => format!("Imu {}", i + 1),
            };
            writeln!(f, "{:>3}. {}    [{just}]", k + 1, l.formula)?;
        }
        Ok(())
    }
}
