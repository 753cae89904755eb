use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::SemanticsError;
use crate::syntax::{GameSignature, ASSIGN, QUANT};

/// Index of a tuple over `{0..n}` in lexicographic order, first component
/// most significant.
pub fn encode_tuple(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &u| acc * n + u)
}

pub fn decode_tuple(mut idx: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

pub fn tuple_count(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    pub arity: usize,
    /// Value at every argument tuple, indexed by `encode_tuple`.
    pub values: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationTable {
    pub arity: usize,
    /// Membership of every tuple, indexed by `encode_tuple`.
    pub members: Vec<bool>,
}

/// A (k, ℓ)-ary action: for each parameter tuple, the generators of the
/// upward-closed family of sets Angel can force. A generator is a sorted
/// list of indices of k-tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionTable {
    pub k: usize,
    pub l: usize,
    pub map: Vec<Vec<Vec<usize>>>,
}

/// Finite first-order neighbourhood structure with domain `{0..domain}`.
/// The quantifier `*` and assignment `:=` are interpreted implicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    pub domain: usize,
    pub functions: BTreeMap<String, FunctionTable>,
    pub relations: BTreeMap<String, RelationTable>,
    pub actions: BTreeMap<String, ActionTable>,
}

impl Structure {
    pub fn new(domain: usize) -> Result<Structure, SemanticsError> {
        if domain == 0 {
            return Err(SemanticsError::Structure("domain must be non-empty".into()));
        }
        Ok(Structure {
            domain,
            functions: BTreeMap::new(),
            relations: BTreeMap::new(),
            actions: BTreeMap::new(),
        })
    }

    pub fn with_function(mut self, name: &str, arity: usize, f: impl Fn(&[usize]) -> usize) -> Self {
        let n = self.domain;
        let values = (0..tuple_count(n, arity))
            .map(|i| f(&decode_tuple(i, n, arity)) % n)
            .collect();
        self.functions.insert(name.to_string(), FunctionTable { arity, values });
        self
    }

    pub fn with_relation(mut self, name: &str, arity: usize, tuples: &[&[usize]]) -> Self {
        let n = self.domain;
        let mut members = vec![false; tuple_count(n, arity)];
        for t in tuples {
            members[encode_tuple(t, n)] = true;
        }
        self.relations.insert(name.to_string(), RelationTable { arity, members });
        self
    }

    /// `gens(params)` lists the generators, each a list of k-tuples.
    pub fn with_action(
        mut self,
        name: &str,
        k: usize,
        l: usize,
        gens: impl Fn(&[usize]) -> Vec<Vec<Vec<usize>>>,
    ) -> Self {
        let n = self.domain;
        let map = (0..tuple_count(n, l))
            .map(|p| {
                gens(&decode_tuple(p, n, l))
                    .into_iter()
                    .map(|g| normalize_generator(g.iter().map(|t| encode_tuple(t, n)).collect()))
                    .collect()
            })
            .collect();
        self.actions.insert(name.to_string(), ActionTable { k, l, map });
        self
    }

    pub fn signature(&self) -> GameSignature {
        let mut sig = GameSignature::new();
        for (f, t) in &self.functions {
            sig.functions.insert(f.clone(), t.arity);
        }
        for (r, t) in &self.relations {
            sig.relations.insert(r.clone(), t.arity);
        }
        for (a, t) in &self.actions {
            sig.actions.insert(a.clone(), (t.k, t.l));
        }
        sig
    }

    /// Checks that every symbol of `sig` is interpreted with the right arity.
    pub fn check_signature(&self, sig: &GameSignature) -> Result<(), SemanticsError> {
        for (f, &a) in &sig.functions {
            match self.functions.get(f) {
                Some(t) if t.arity == a => {}
                Some(t) => return Err(arity_err(f, a, t.arity)),
                None => return Err(SemanticsError::Uninterpreted(f.clone())),
            }
        }
        for (r, &a) in &sig.relations {
            match self.relations.get(r) {
                Some(t) if t.arity == a => {}
                Some(t) => return Err(arity_err(r, a, t.arity)),
                None => return Err(SemanticsError::Uninterpreted(r.clone())),
            }
        }
        for (name, &(k, l)) in &sig.actions {
            if name == QUANT {
                continue;
            }
            match self.actions.get(name) {
                Some(t) if (t.k, t.l) == (k, l) => {}
                Some(t) => {
                    return Err(SemanticsError::Structure(format!(
                        "action `{name}` has arity ({}, {}), expected ({k}, {l})",
                        t.k, t.l
                    )))
                }
                None => return Err(SemanticsError::Uninterpreted(name.clone())),
            }
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Structure, SemanticsError> {
        let v: Value = serde_json::from_str(s).map_err(|e| SemanticsError::Structure(e.to_string()))?;
        Structure::from_json(&v)
    }

    /// Reads the structure file format. Function tables are given either as
    /// graph rows `[args..., value]` covering every argument tuple, as value
    /// rows `[value]` in lexicographic argument order, or as an object
    /// `{"arity": a, "table": [...]}`. Relations list their tuples, or use
    /// `{"arity": a, "tuples": [...]}`.
    pub fn from_json(v: &Value) -> Result<Structure, SemanticsError> {
        let bad = |m: String| SemanticsError::Structure(m);
        let n = v
            .get("domain")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing `domain`".into()))? as usize;
        let mut st = Structure::new(n)?;
        let elem = |x: &Value| -> Result<usize, SemanticsError> {
            match x.as_u64() {
                Some(u) if (u as usize) < n => Ok(u as usize),
                _ => Err(bad(format!("`{x}` is not a domain element"))),
            }
        };
        let tuple = |x: &Value| -> Result<Vec<usize>, SemanticsError> {
            x.as_array()
                .ok_or_else(|| bad(format!("`{x}` is not a tuple")))?
                .iter()
                .map(elem)
                .collect()
        };
        if let Some(fs) = v.get("functions").and_then(Value::as_object) {
            for (name, spec) in fs {
                check_name(name)?;
                let table = parse_function(spec, n, &elem, &tuple)
                    .map_err(|e| bad(format!("function `{name}`: {e}")))?;
                st.functions.insert(name.clone(), table);
            }
        }
        if let Some(rs) = v.get("relations").and_then(Value::as_object) {
            for (name, spec) in rs {
                check_name(name)?;
                let (arity, rows) = match spec {
                    Value::Object(o) => (
                        o.get("arity").and_then(Value::as_u64).map(|a| a as usize),
                        o.get("tuples").cloned().unwrap_or(Value::Array(vec![])),
                    ),
                    other => (None, other.clone()),
                };
                let rows: Vec<Vec<usize>> = rows
                    .as_array()
                    .ok_or_else(|| bad(format!("relation `{name}` must list tuples")))?
                    .iter()
                    .map(tuple)
                    .collect::<Result<_, _>>()?;
                let arity = match (arity, rows.first()) {
                    (Some(a), _) => a,
                    (None, Some(r)) => r.len(),
                    (None, None) => {
                        return Err(bad(format!("relation `{name}` is empty; give its arity")))
                    }
                };
                let mut members = vec![false; tuple_count(n, arity)];
                for r in rows {
                    if r.len() != arity {
                        return Err(bad(format!("relation `{name}` mixes arities")));
                    }
                    members[encode_tuple(&r, n)] = true;
                }
                st.relations.insert(name.clone(), RelationTable { arity, members });
            }
        }
        if let Some(acts) = v.get("actions").and_then(Value::as_object) {
            for (name, spec) in acts {
                check_name(name)?;
                if name == QUANT || name == ASSIGN {
                    return Err(bad(format!("`{name}` is built in and must not be interpreted")));
                }
                let ar = spec
                    .get("arity")
                    .and_then(Value::as_array)
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| bad(format!("action `{name}` needs `arity: [k, l]`")))?;
                let k = ar[0].as_u64().ok_or_else(|| bad("bad arity".into()))? as usize;
                let l = ar[1].as_u64().ok_or_else(|| bad("bad arity".into()))? as usize;
                let mut map = vec![Vec::new(); tuple_count(n, l)];
                let entries = spec.get("map").and_then(Value::as_array).cloned().unwrap_or_default();
                for e in entries {
                    let params = tuple(e.get("params").unwrap_or(&Value::Array(vec![])))?;
                    if params.len() != l {
                        return Err(bad(format!("action `{name}`: parameter tuple of wrong length")));
                    }
                    let gens = e
                        .get("generators")
                        .and_then(Value::as_array)
                        .ok_or_else(|| bad(format!("action `{name}`: missing generators")))?;
                    let mut out = Vec::new();
                    for g in gens {
                        let members = g
                            .as_array()
                            .ok_or_else(|| bad(format!("action `{name}`: generator must be a list")))?;
                        let mut idx = Vec::new();
                        for m in members {
                            let t = tuple(m)?;
                            if t.len() != k {
                                return Err(bad(format!("action `{name}`: generator tuple of wrong length")));
                            }
                            idx.push(encode_tuple(&t, n));
                        }
                        out.push(normalize_generator(idx));
                    }
                    map[encode_tuple(&params, n)] = out;
                }
                st.actions.insert(name.clone(), ActionTable { k, l, map });
            }
        }
        Ok(st)
    }

    pub fn to_json(&self) -> Value {
        let n = self.domain;
        let mut fs = Map::new();
        for (name, t) in &self.functions {
            let rows: Vec<Value> = t
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let mut row = decode_tuple(i, n, t.arity);
                    row.push(*v);
                    json!(row)
                })
                .collect();
            fs.insert(name.clone(), json!({"arity": t.arity, "table": rows}));
        }
        let mut rs = Map::new();
        for (name, t) in &self.relations {
            let rows: Vec<Value> = t
                .members
                .iter()
                .enumerate()
                .filter(|(_, m)| **m)
                .map(|(i, _)| json!(decode_tuple(i, n, t.arity)))
                .collect();
            rs.insert(name.clone(), json!({"arity": t.arity, "tuples": rows}));
        }
        let mut acts = Map::new();
        for (name, t) in &self.actions {
            let map: Vec<Value> = t
                .map
                .iter()
                .enumerate()
                .filter(|(_, g)| !g.is_empty())
                .map(|(p, gens)| {
                    let gens: Vec<Value> = gens
                        .iter()
                        .map(|g| json!(g.iter().map(|&i| decode_tuple(i, n, t.k)).collect::<Vec<_>>()))
                        .collect();
                    json!({"params": decode_tuple(p, n, t.l), "generators": gens})
                })
                .collect();
            acts.insert(name.clone(), json!({"arity": [t.k, t.l], "map": map}));
        }
        json!({"domain": n, "functions": fs, "relations": rs, "actions": acts})
    }
}

fn arity_err(name: &str, expected: usize, found: usize) -> SemanticsError {
    SemanticsError::Structure(format!(
        "`{name}` has arity {found} in the structure, expected {expected}"
    ))
}

fn check_name(name: &str) -> Result<(), SemanticsError> {
    if name.is_empty() {
        return Err(SemanticsError::Structure("empty symbol name".into()));
    }
    Ok(())
}

pub(crate) fn normalize_generator(mut g: Vec<usize>) -> Vec<usize> {
    g.sort_unstable();
    g.dedup();
    g
}

fn parse_function(
    spec: &Value,
    n: usize,
    elem: &dyn Fn(&Value) -> Result<usize, SemanticsError>,
    tuple: &dyn Fn(&Value) -> Result<Vec<usize>, SemanticsError>,
) -> Result<FunctionTable, String> {
    let (arity, rows) = match spec {
        Value::Object(o) => (
            o.get("arity").and_then(Value::as_u64).map(|a| a as usize),
            o.get("table").cloned().ok_or("missing `table`")?,
        ),
        other => (None, other.clone()),
    };
    let rows = rows.as_array().ok_or("table must be a list")?.clone();
    // A flat list of values is a value table.
    let rows: Vec<Vec<usize>> = if rows.iter().all(Value::is_u64) {
        rows.iter()
            .map(|v| elem(v).map(|u| vec![u]))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?
    } else {
        rows.iter().map(tuple).collect::<Result<_, _>>().map_err(|e| e.to_string())?
    };
    let width = rows.first().map(Vec::len).unwrap_or(1);
    if rows.iter().any(|r| r.len() != width) {
        return Err("rows of different lengths".into());
    }
    let graph_arity = width.checked_sub(1).ok_or("empty row")?;
    let value_arity = (0..=16).find(|&a| tuple_count(n, a) == rows.len());
    let use_graph = match arity {
        Some(a) => a == graph_arity && !(width == 1 && value_arity == Some(a) && a != 0),
        None => tuple_count(n, graph_arity) == rows.len(),
    };
    if use_graph {
        let mut values = vec![None; tuple_count(n, graph_arity)];
        for r in &rows {
            let (args, v) = r.split_at(graph_arity);
            let slot = &mut values[encode_tuple(args, n)];
            if slot.is_some() {
                return Err(format!("duplicate row for {args:?}"));
            }
            *slot = Some(v[0]);
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or("function is not total")?;
        return Ok(FunctionTable {
            arity: graph_arity,
            values,
        });
    }
    if width != 1 {
        return Err("graph rows do not cover every argument tuple".into());
    }
    let a = match (arity, value_arity) {
        (Some(a), Some(b)) if a == b => a,
        (None, Some(b)) => b,
        _ => return Err("value table length is not a power of the domain size".into()),
    };
    Ok(FunctionTable {
        arity: a,
        values: rows.into_iter().map(|r| r[0]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_the_documented_format() {
        let src = r#"{"domain": 2, "functions": {"f": [[0],[1]]}, "relations": {"R": [[1]]},
            "actions": {"a": {"arity": [1,1], "map": [{"params": [0], "generators": [[[1]]]},
            {"params": [1], "generators": [[[0]]]}]}}}"#;
        let st = Structure::from_json_str(src).unwrap();
        assert_eq!(st.functions["f"], FunctionTable { arity: 1, values: vec![0, 1] });
        assert_eq!(st.relations["R"].members, vec![false, true]);
        assert_eq!(st.actions["a"].map, vec![vec![vec![1]], vec![vec![0]]]);
        let back = Structure::from_json(&st.to_json()).unwrap();
        assert_eq!(back, st);
    }

    #[test]
    fn graph_rows_and_constants() {
        let src = r#"{"domain": 2, "functions": {"s": [[0,1],[1,0]], "c": [[1]]}}"#;
        let st = Structure::from_json_str(src).unwrap();
        assert_eq!(st.functions["s"].values, vec![1, 0]);
        assert_eq!(st.functions["c"], FunctionTable { arity: 0, values: vec![1] });
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Structure::from_json_str(r#"{"domain": 0}"#).is_err());
        assert!(Structure::from_json_str(r#"{"domain": 2, "relations": {"R": [[2]]}}"#).is_err());
        assert!(Structure::from_json_str(
            r#"{"domain": 1, "actions": {"*": {"arity": [1,0], "map": []}}}"#
        )
        .is_err());
    }
}
