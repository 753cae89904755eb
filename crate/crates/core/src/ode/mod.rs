//! Polynomial ODEs: Lie derivatives, the second-order Taylor condition, and
//! a bisection refinement of continuous reachability over a box `|u|∞ ≤ K`.

pub mod emit;
pub mod poly;
pub mod reach;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use emit::{emit_g_formula, GFormulas};
pub use poly::{rat, rat_f64, to_f64, Poly};
pub use reach::{
    refine_reach, rk4_integrate, trajectory_midpoints, ReachQuery, ReachReport, ReachVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OdeError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("trajectory leaves the box |u| <= {0}; enlarge K")]
    Escape(String),
}

/// `x̄' = θ̄` with one polynomial per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    pub vars: Vec<String>,
    pub components: Vec<Poly>,
}

impl PolyVectorField {
    pub fn new(vars: Vec<String>, components: Vec<Poly>) -> Result<Self, OdeError> {
        if vars.len() != components.len() {
            return Err(OdeError::Input(format!(
                "{} variables but {} components",
                vars.len(),
                components.len()
            )));
        }
        let mut seen = vars.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != vars.len() {
            return Err(OdeError::Input("duplicate variable".into()));
        }
        for c in &components {
            if let Some(v) = c.vars().into_iter().find(|v| !vars.contains(v)) {
                return Err(OdeError::Input(format!("component mentions unknown variable `{v}`")));
            }
        }
        Ok(PolyVectorField { vars, components })
    }

    pub fn parse(vars: &[&str], components: &[&str]) -> Result<Self, OdeError> {
        let comps = components.iter().map(|s| Poly::parse(s)).collect::<Result<_, _>>()?;
        Self::new(vars.iter().map(|s| s.to_string()).collect(), comps)
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    fn env<T: Clone>(&self, x: &[T]) -> BTreeMap<String, T> {
        self.vars.iter().cloned().zip(x.iter().cloned()).collect()
    }

    pub fn eval(&self, x: &[BigRational]) -> Result<Vec<BigRational>, OdeError> {
        let env = self.env(x);
        self.components.iter().map(|c| c.eval(&env)).collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<Vec<f64>, OdeError> {
        let env = self.env(x);
        self.components.iter().map(|c| c.eval_f64(&env)).collect()
    }
}

/// `Σᵢ ∂δ/∂xᵢ · θᵢ`.
pub fn lie_derivative(delta: &Poly, field: &PolyVectorField) -> Result<Poly, OdeError> {
    if let Some(v) = delta.vars().into_iter().find(|v| !field.vars.contains(v)) {
        return Err(OdeError::Precondition(format!("`{v}` is not a state variable")));
    }
    Ok(field
        .vars
        .iter()
        .zip(&field.components)
        .fold(Poly::zero(), |acc, (v, theta)| acc.add(&delta.derivative(v).mul(theta))))
}

/// The second derivative of the flow, `(DF)F`, componentwise.
pub fn ddf(field: &PolyVectorField) -> Vec<Poly> {
    field
        .components
        .iter()
        .map(|c| lie_derivative(c, field).expect("components mention only state variables"))
        .collect()
}

/// Upper bound of `|P(u)|∞` over `|u|∞ ≤ K` by summing absolute coefficients.
pub fn sup_norm_bound(p: &[Poly], k: &BigRational) -> BigRational {
    p.iter()
        .map(|c| c.coefficient_bound(k))
        .max()
        .unwrap_or_else(BigRational::zero)
}

pub fn inf_norm(v: &[BigRational]) -> BigRational {
    v.iter().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
}

/// Both sides of the Taylor condition for one tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorCheck {
    /// `|y − x − tF(x)|∞`
    pub lhs: BigRational,
    /// `t²/2 · N`
    pub bound: BigRational,
    pub holds: bool,
}

/// Taylor condition with the bound `N` on `|(DF)F|∞` computed once.
#[derive(Clone, Debug)]
pub struct Taylor {
    pub field: PolyVectorField,
    pub k: BigRational,
    pub n: BigRational,
}

impl Taylor {
    pub fn new(field: &PolyVectorField, k: BigRational) -> Result<Self, OdeError> {
        if !k.is_positive() {
            return Err(OdeError::Precondition("K must be positive".into()));
        }
        let n = sup_norm_bound(&ddf(field), &k);
        Ok(Taylor {
            field: field.clone(),
            k,
            n,
        })
    }

    pub fn in_box(&self, x: &[BigRational]) -> bool {
        inf_norm(x) <= self.k
    }

    /// Exact check of `|y − x − tF(x)|∞ ≤ t²/2 · N + eps`.
    pub fn check(
        &self,
        x: &[BigRational],
        y: &[BigRational],
        t: &BigRational,
        eps: &BigRational,
    ) -> Result<TaylorCheck, OdeError> {
        let l = self.field.dim();
        if x.len() != l || y.len() != l {
            return Err(OdeError::Input(format!("points must have {l} coordinates")));
        }
        if t.is_negative() {
            return Err(OdeError::Precondition("t must be non-negative".into()));
        }
        for (name, p) in [("x", x), ("y", y)] {
            if !self.in_box(p) {
                return Err(OdeError::Precondition(format!("{name} lies outside |u| <= K")));
            }
        }
        let fx = self.field.eval(x)?;
        let diff: Vec<BigRational> = (0..l).map(|i| &y[i] - &x[i] - t * &fx[i]).collect();
        let lhs = inf_norm(&diff);
        let bound = t * t / rat(2) * &self.n;
        let holds = lhs <= &bound + eps;
        Ok(TaylorCheck { lhs, bound, holds })
    }

    /// Floating-point variant with the slack `eps` added to the bound.
    pub fn check_f64(&self, x: &[f64], y: &[f64], t: f64, eps: f64) -> Result<bool, OdeError> {
        let k = to_f64(&self.k);
        let l = self.field.dim();
        if x.len() != l || y.len() != l {
            return Err(OdeError::Input(format!("points must have {l} coordinates")));
        }
        if x.iter().chain(y).any(|c| c.abs() > k) {
            return Err(OdeError::Precondition("point lies outside |u| <= K".into()));
        }
        let fx = self.field.eval_f64(x)?;
        let lhs = (0..l)
            .map(|i| (y[i] - x[i] - t * fx[i]).abs())
            .fold(0.0, f64::max);
        Ok(lhs <= t * t / 2.0 * to_f64(&self.n) + eps)
    }
}

/// `|y − x − tF(x)|∞ ≤ t²/2 · sup_norm_bound(ddf(F), K)` in exact arithmetic.
pub fn taylor_cond(
    field: &PolyVectorField,
    x: &[BigRational],
    y: &[BigRational],
    t: &BigRational,
    k: &BigRational,
) -> Result<bool, OdeError> {
    Ok(Taylor::new(field, k.clone())?.check(x, y, t, &BigRational::zero())?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic() -> PolyVectorField {
        PolyVectorField::parse(&["x1", "x2"], &["x2", "-1*x1"]).unwrap()
    }

    fn q(x: f64) -> BigRational {
        rat_f64(x).unwrap()
    }

    #[test]
    fn lie_derivatives() {
        let exp = PolyVectorField::parse(&["x"], &["x"]).unwrap();
        let d = lie_derivative(&Poly::parse("x^2").unwrap(), &exp).unwrap();
        assert_eq!(d, Poly::parse("2*x^2").unwrap());
        let circle = Poly::parse("x1^2 + x2^2").unwrap();
        assert!(lie_derivative(&circle, &harmonic()).unwrap().is_zero());
        let one = PolyVectorField::parse(&["x"], &["1"]).unwrap();
        assert_eq!(lie_derivative(&Poly::var("x"), &one).unwrap(), Poly::parse("1").unwrap());
        assert!(lie_derivative(&Poly::var("z"), &one).is_err());
    }

    #[test]
    fn ddf_and_bounds() {
        let d = ddf(&harmonic());
        assert_eq!(d, vec![Poly::parse("-x1").unwrap(), Poly::parse("-x2").unwrap()]);
        assert_eq!(sup_norm_bound(&d, &rat(2)), rat(2));
        let exp = PolyVectorField::parse(&["x"], &["x"]).unwrap();
        assert_eq!(sup_norm_bound(&ddf(&exp), &rat(3)), rat(3));
        let one = PolyVectorField::parse(&["x"], &["1"]).unwrap();
        assert_eq!(sup_norm_bound(&ddf(&one), &rat(3)), rat(0));
    }

    #[test]
    fn taylor_examples() {
        let one = PolyVectorField::parse(&["x"], &["1"]).unwrap();
        let t = BigRational::new(3.into(), 4.into());
        let tenth = BigRational::new(1.into(), 10.into());
        assert!(taylor_cond(&one, &[rat(0)], std::slice::from_ref(&t), &t, &rat(2)).unwrap());
        assert!(!taylor_cond(&one, &[rat(0)], &[&t + &tenth], &t, &rat(2)).unwrap());

        let h = Taylor::new(&harmonic(), rat(2)).unwrap();
        let t = q(std::f64::consts::FRAC_PI_2);
        let c = h.check(&[rat(1), rat(0)], &[rat(0), rat(-1)], &t, &rat(0)).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, rat(1));
        assert!((to_f64(&c.bound) - 2.4674).abs() < 1e-3);
        assert!(matches!(
            h.check(&[rat(1), rat(0)], &[rat(3), rat(3)], &t, &rat(0)),
            Err(OdeError::Precondition(_))
        ));
        let c = h.check(&[rat(1), rat(0)], &[q(1.9), q(1.9)], &t, &rat(0)).unwrap();
        assert!(!c.holds);
        assert!((to_f64(&c.lhs) - 3.4708).abs() < 1e-3);
    }
}
