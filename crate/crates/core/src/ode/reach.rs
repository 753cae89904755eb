//! Numeric integration and the depth-bounded refinement of the reachability
//! fixpoint `Z ↦ {(x,y,t) ∈ G : ∃u (x,u,t/2),(u,y,t/2) ∈ Z}`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::poly::{rat_f64, to_f64, Poly};
use super::{OdeError, PolyVectorField, Taylor, TaylorCheck};

/// Largest step used when building the midpoint tree.
const MAX_STEP: f64 = 1e-3;

/// Classical fourth-order Runge-Kutta over `[0, t]`.
pub fn rk4_integrate(field: &PolyVectorField, x0: &[f64], t: f64, steps: usize) -> Result<Vec<f64>, OdeError> {
    let mut x = x0.to_vec();
    rk4_steps(field, &mut x, t / steps.max(1) as f64, steps.max(1), None)?;
    Ok(x)
}

fn rk4_steps(field: &PolyVectorField, x: &mut [f64], h: f64, n: usize, k: Option<f64>) -> Result<(), OdeError> {
    let axpy = |a: &[f64], s: f64, b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p + s * q).collect() };
    for _ in 0..n {
        let k1 = field.eval_f64(x)?;
        let k2 = field.eval_f64(&axpy(x, h / 2.0, &k1))?;
        let k3 = field.eval_f64(&axpy(x, h / 2.0, &k2))?;
        let k4 = field.eval_f64(&axpy(x, h, &k3))?;
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if let Some(k) = k {
            if x.iter().any(|c| !c.is_finite() || c.abs() > k) {
                return Err(OdeError::Escape(k.to_string()));
            }
        }
    }
    Ok(())
}

/// States at the dyadic times `t·j/2^depth`, `j = 0..=2^depth`.
pub fn trajectory_midpoints(
    field: &PolyVectorField,
    x0: &[f64],
    t: f64,
    depth: u32,
    k: f64,
) -> Result<Vec<Vec<f64>>, OdeError> {
    if depth > 24 {
        return Err(OdeError::Precondition("depth above 24".into()));
    }
    let segments = 1usize << depth;
    let seg = t / segments as f64;
    let sub = ((seg.abs() / MAX_STEP).ceil() as usize).max(1);
    let mut x = x0.to_vec();
    let mut out = vec![x.clone()];
    for _ in 0..segments {
        rk4_steps(field, &mut x, seg / sub as f64, sub, Some(k))?;
        out.push(x.clone());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub radius: f64,
    pub points: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { radius: 0.0, points: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct ReachQuery {
    pub field: PolyVectorField,
    pub x0: Vec<BigRational>,
    pub y: Vec<BigRational>,
    pub t: BigRational,
    pub k: BigRational,
    pub depth: u32,
    pub grid: Grid,
    pub eps: BigRational,
    /// Maximum number of Taylor checks before giving up.
    pub budget: usize,
}

pub const DEFAULT_BUDGET: usize = 200_000;
pub const DEFAULT_EPS: f64 = 1e-9;

fn number(v: &Value, what: &str) -> Result<BigRational, OdeError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(super::rat(i))
            } else {
                rat_f64(n.as_f64().unwrap_or(f64::NAN))
            }
        }
        Value::String(s) => {
            let p = Poly::parse(s)?;
            let constant = match p.terms().next() {
                None => Some(BigRational::zero()),
                Some((m, c)) if m.is_empty() => Some(c.clone()),
                _ => None,
            };
            constant.ok_or_else(|| OdeError::Input(format!("{what}: `{s}` is not a constant")))
        }
        _ => Err(OdeError::Input(format!("{what} must be a number"))),
    }
}

fn point(v: &Value, what: &str) -> Result<Vec<BigRational>, OdeError> {
    v.as_array()
        .ok_or_else(|| OdeError::Input(format!("{what} must be an array")))?
        .iter()
        .map(|c| number(c, what))
        .collect()
}

impl ReachQuery {
    /// Reads `{"vars","field","x0","y","t","K","depth","grid","eps","budget"}`.
    /// Numbers are JSON numbers (taken at their exact binary value) or
    /// strings such as `"3/2"`.
    pub fn from_json(src: &str) -> Result<ReachQuery, OdeError> {
        let v: Value = serde_json::from_str(src).map_err(|e| OdeError::Input(e.to_string()))?;
        let strs = |key: &str| -> Result<Vec<String>, OdeError> {
            v[key]
                .as_array()
                .ok_or_else(|| OdeError::Input(format!("`{key}` must be an array of strings")))?
                .iter()
                .map(|s| {
                    s.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| OdeError::Input(format!("`{key}` must be an array of strings")))
                })
                .collect()
        };
        let vars = strs("vars")?;
        let comps = strs("field")?
            .iter()
            .map(|s| Poly::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let field = PolyVectorField::new(vars, comps)?;
        let depth = v["depth"].as_u64().unwrap_or(0);
        let grid = match v.get("grid") {
            Some(g) => serde_json::from_value(g.clone()).map_err(|e| OdeError::Input(format!("grid: {e}")))?,
            None => Grid::default(),
        };
        let eps = match v.get("eps") {
            Some(e) => number(e, "eps")?,
            None => rat_f64(DEFAULT_EPS)?,
        };
        let q = ReachQuery {
            field,
            x0: point(&v["x0"], "x0")?,
            y: point(&v["y"], "y")?,
            t: number(&v["t"], "t")?,
            k: number(&v["K"], "K")?,
            depth: u32::try_from(depth).map_err(|_| OdeError::Input("depth too large".into()))?,
            grid,
            eps,
            budget: v["budget"].as_u64().map(|b| b as usize).unwrap_or(DEFAULT_BUDGET),
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<(), OdeError> {
        let l = self.field.dim();
        if self.x0.len() != l || self.y.len() != l {
            return Err(OdeError::Input(format!("x0 and y must have {l} coordinates")));
        }
        if !self.k.is_positive() {
            return Err(OdeError::Precondition("K must be positive".into()));
        }
        if self.t.is_negative() {
            return Err(OdeError::Precondition("t must be non-negative".into()));
        }
        if self.eps.is_negative() {
            return Err(OdeError::Precondition("eps must be non-negative".into()));
        }
        if self.depth > 24 {
            return Err(OdeError::Precondition("depth above 24".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReachVerdict {
    PassedToDepth(u32),
    RejectedAtLevel0,
    /// The first depth at which no midpoint was found; `budget_exhausted`
    /// is set when the search stopped because of the check budget.
    NoWitnessFound { depth: u32, budget_exhausted: bool },
}

impl ReachVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, ReachVerdict::PassedToDepth(_))
    }
}

impl fmt::Display for ReachVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReachVerdict::PassedToDepth(m) => write!(f, "PassedToDepth({m})"),
            ReachVerdict::RejectedAtLevel0 => f.write_str("RejectedAtLevel0"),
            ReachVerdict::NoWitnessFound { depth, budget_exhausted } => {
                write!(f, "NoWitnessFound({depth})")?;
                if *budget_exhausted {
                    f.write_str(" [budget exhausted]")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReachReport {
    pub verdict: ReachVerdict,
    /// Bound `N ≥ sup |(DF)F|∞` over the box.
    pub n: BigRational,
    pub level0: TaylorCheck,
    /// Number of Taylor checks performed.
    pub checks: usize,
}

struct Search<'a> {
    taylor: &'a Taylor,
    eps: &'a BigRational,
    /// Exact seeds at the dyadic times of the deepest level.
    tree: Vec<Vec<BigRational>>,
    levels: u32,
    offsets: Vec<Vec<BigRational>>,
    budget: usize,
    checks: usize,
    exhausted: bool,
}

impl Search<'_> {
    fn taylor(&mut self, x: &[BigRational], y: &[BigRational], t: &BigRational) -> Result<bool, OdeError> {
        if self.checks >= self.budget {
            self.exhausted = true;
            return Ok(false);
        }
        self.checks += 1;
        Ok(self.taylor.check(x, y, t, self.eps)?.holds)
    }

    /// Does `(x, y, t)` lie in the depth-`d` approximant, for the node
    /// covering leaf slots `[lo, lo + width)` of the midpoint tree?
    fn passes(
        &mut self,
        x: &[BigRational],
        y: &[BigRational],
        t: &BigRational,
        d: u32,
        lo: usize,
        width: usize,
    ) -> Result<bool, OdeError> {
        if !self.taylor(x, y, t)? {
            return Ok(false);
        }
        if d == 0 {
            return Ok(true);
        }
        let half = t / super::rat(2);
        let seed = self.tree[lo + width / 2].clone();
        // The chord midpoint is exact for fields whose flow is affine in time.
        let chord: Vec<BigRational> = x.iter().zip(y).map(|(a, b)| (a + b) / super::rat(2)).collect();
        let grid = self
            .offsets
            .iter()
            .map(|off| seed.iter().zip(off).map(|(s, o)| s + o).collect::<Vec<_>>());
        let candidates: Vec<Vec<BigRational>> = std::iter::once(seed.clone())
            .chain((chord != seed).then_some(chord))
            .chain(grid.skip(1))
            .collect();
        for u in candidates {
            if self.exhausted {
                return Ok(false);
            }
            if !self.taylor.in_box(&u) {
                continue;
            }
            if self.passes(x, &u, &half, d - 1, lo, width / 2)?
                && self.passes(&u, y, &half, d - 1, lo + width / 2, width / 2)?
            {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Grid offsets with the zero offset first.
fn grid_offsets(dim: usize, grid: &Grid) -> Result<Vec<Vec<BigRational>>, OdeError> {
    let zero = vec![BigRational::zero(); dim];
    let mut out = vec![zero.clone()];
    if grid.points < 2 || grid.radius <= 0.0 {
        return Ok(out);
    }
    let r = rat_f64(grid.radius)?;
    let steps: Vec<BigRational> = (0..grid.points)
        .map(|i| -&r + &r * super::rat(2 * i as i64) / super::rat(grid.points as i64 - 1))
        .collect();
    let total = grid
        .points
        .checked_pow(dim as u32)
        .filter(|n| *n <= 1_000_000)
        .ok_or_else(|| OdeError::Precondition("grid too large".into()))?;
    for mut idx in 0..total {
        let mut p = Vec::with_capacity(dim);
        for _ in 0..dim {
            p.push(steps[idx % grid.points].clone());
            idx /= grid.points;
        }
        if p != zero {
            out.push(p);
        }
    }
    Ok(out)
}

/// Checks the query against increasing approximants of the reachability
/// fixpoint, using integrator midpoints first and the grid as a fallback.
pub fn refine_reach(q: &ReachQuery) -> Result<ReachReport, OdeError> {
    q.validate()?;
    let taylor = Taylor::new(&q.field, q.k.clone())?;
    let level0 = taylor.check(&q.x0, &q.y, &q.t, &q.eps)?;
    let mut report = ReachReport {
        verdict: ReachVerdict::RejectedAtLevel0,
        n: taylor.n.clone(),
        level0: level0.clone(),
        checks: 1,
    };
    if !level0.holds {
        return Ok(report);
    }
    if q.depth == 0 {
        report.verdict = ReachVerdict::PassedToDepth(0);
        return Ok(report);
    }
    let x0: Vec<f64> = q.x0.iter().map(to_f64).collect();
    let traj = trajectory_midpoints(&q.field, &x0, to_f64(&q.t), q.depth, to_f64(&q.k))?;
    let tree = traj
        .iter()
        .map(|p| p.iter().map(|c| rat_f64(*c)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut search = Search {
        taylor: &taylor,
        eps: &q.eps,
        tree,
        levels: q.depth,
        offsets: grid_offsets(q.field.dim(), &q.grid)?,
        budget: q.budget,
        checks: 1,
        exhausted: false,
    };
    let width = 1usize << search.levels;
    for d in 1..=q.depth {
        if !search.passes(&q.x0, &q.y, &q.t, d, 0, width)? {
            report.verdict = ReachVerdict::NoWitnessFound {
                depth: d,
                budget_exhausted: search.exhausted,
            };
            report.checks = search.checks;
            return Ok(report);
        }
    }
    report.verdict = ReachVerdict::PassedToDepth(q.depth);
    report.checks = search.checks;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::rat;

    fn harmonic_query(y: [f64; 2], depth: u32) -> ReachQuery {
        ReachQuery::from_json(&format!(
            r#"{{"vars":["x1","x2"],"field":["x2","-1*x1"],"x0":[1,0],"y":[{},{}],
               "t":1.5707963,"K":2,"depth":{depth},"grid":{{"radius":0.05,"points":5}},"eps":1e-9}}"#,
            y[0], y[1]
        ))
        .unwrap()
    }

    #[test]
    fn integrator() {
        let one = PolyVectorField::parse(&["x"], &["1"]).unwrap();
        assert_eq!(rk4_integrate(&one, &[0.0], 1.0, 4).unwrap(), vec![1.0]);
        let exp = PolyVectorField::parse(&["x"], &["x"]).unwrap();
        let e = rk4_integrate(&exp, &[1.0], 1.0, 1000).unwrap()[0];
        assert!((e - std::f64::consts::E).abs() < 1e-9);
        let h = PolyVectorField::parse(&["x1", "x2"], &["x2", "-1*x1"]).unwrap();
        let p = rk4_integrate(&h, &[1.0, 0.0], 2.0 * std::f64::consts::PI, 10000).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-6 && p[1].abs() < 1e-6);
        assert!(matches!(
            trajectory_midpoints(&exp, &[1.0], 2.0, 3, 3.0),
            Err(OdeError::Escape(_))
        ));
    }

    #[test]
    fn harmonic_quarter_turn() {
        let r = refine_reach(&harmonic_query([0.0, -1.0], 6)).unwrap();
        assert_eq!(r.verdict, ReachVerdict::PassedToDepth(6));
        let r = refine_reach(&harmonic_query([1.9, 1.9], 6)).unwrap();
        assert_eq!(r.verdict, ReachVerdict::RejectedAtLevel0);
    }

    #[test]
    fn exponential() {
        let q = ReachQuery::from_json(
            r#"{"vars":["x"],"field":["x"],"x0":[1],"y":[2.718281828],"t":1,"K":3,"depth":4}"#,
        )
        .unwrap();
        assert_eq!(refine_reach(&q).unwrap().verdict, ReachVerdict::PassedToDepth(4));
    }

    #[test]
    fn constant_field_is_exact() {
        let mk = |y: &str| {
            ReachQuery::from_json(&format!(
                r#"{{"vars":["x"],"field":["1"],"x0":[0],"y":[{y}],"t":"1/2","K":2,"depth":3,"eps":0,
                   "grid":{{"radius":0.1,"points":3}}}}"#
            ))
            .unwrap()
        };
        assert!(refine_reach(&mk("\"1/2\"")).unwrap().verdict.is_pass());
        assert_eq!(refine_reach(&mk("\"3/5\"")).unwrap().verdict, ReachVerdict::RejectedAtLevel0);
        assert_eq!(mk("\"1/2\"").t, BigRational::new(1.into(), 2.into()));
        assert_eq!(mk("1").k, rat(2));
    }
}
