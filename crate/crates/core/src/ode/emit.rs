//! Prints the first-order description of the Taylor condition and the two
//! reachability formulas built on it, with `<=` and polynomial atoms.

use std::collections::BTreeMap;

use num_rational::BigRational;

use super::poly::{rat, Poly};
use super::{ddf, PolyVectorField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GFormulas {
    /// The Taylor condition as a formula over `x̄, ȳ, t`.
    pub g: String,
    /// Reachability as a greatest fixpoint.
    pub mu: String,
    /// Reachability as a repeated game.
    pub game: String,
}

fn avoid(base: String, taken: &[String]) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// `|v|∞ ≤ |w|∞` for `v` a vector and `w` a vector of polynomials,
/// unfolded into linear atoms per component.
fn norm_le(v: &[Poly], w: &[Poly]) -> String {
    let all_le = |rhs: &Poly| -> String {
        let atoms: Vec<String> = v
            .iter()
            .flat_map(|a| [format!("{a} <= {rhs}"), format!("{} <= {rhs}", a.neg())])
            .collect();
        conj(&atoms)
    };
    let mut cases = Vec::new();
    for wj in w {
        let pos = all_le(wj);
        if !cases.contains(&pos) {
            cases.push(pos);
        }
        let neg = all_le(&wj.neg());
        if !cases.contains(&neg) {
            cases.push(neg);
        }
    }
    if cases.is_empty() {
        cases.push(all_le(&Poly::zero()));
    }
    disj(&cases)
}

fn conj(parts: &[String]) -> String {
    join(parts, " & ", "true")
}

fn disj(parts: &[String]) -> String {
    join(parts, " | ", "false")
}

fn join(parts: &[String], sep: &str, empty: &str) -> String {
    match parts.len() {
        0 => empty.to_string(),
        1 => parts[0].clone(),
        _ => parts.iter().map(|p| format!("({p})")).collect::<Vec<_>>().join(sep),
    }
}

/// The three reachability artifacts for `x̄' = θ̄` on the box `|u|∞ ≤ K`.
/// State variables keep their names; targets, midpoints and the sampled
/// point are `y_x`, `u_x`, `z_x`, and time is `t`.
pub fn emit_g_formula(field: &PolyVectorField, k: &BigRational) -> GFormulas {
    let xs = &field.vars;
    let pick = |prefix: &str| -> Vec<String> {
        xs.iter().map(|x| avoid(format!("{prefix}_{x}"), xs)).collect()
    };
    let ys = pick("y");
    let us = pick("u");
    let zs = pick("z");
    let t = avoid("t".to_string(), xs);
    let tp = Poly::var(&t);
    let kp = Poly::constant(k.clone());

    // 2(y − x − tθ) componentwise.
    let lhs: Vec<Poly> = (0..xs.len())
        .map(|i| {
            Poly::var(&ys[i])
                .sub(&Poly::var(&xs[i]))
                .sub(&tp.mul(&field.components[i]))
                .scale(&rat(2))
        })
        .collect();
    let to_z: BTreeMap<String, Poly> = xs.iter().cloned().zip(zs.iter().map(|z| Poly::var(z))).collect();
    let t2 = tp.mul(&tp);
    let rhs: Vec<Poly> = ddf(field).iter().map(|p| t2.mul(&p.substitute(&to_z))).collect();
    let in_box: Vec<String> = zs
        .iter()
        .flat_map(|z| [format!("{z} <= {kp}"), format!("-{z} <= {kp}")])
        .collect();
    let body = format!("{} & ({})", conj(&in_box), norm_le(&lhs, &rhs));
    let g = if rhs.iter().all(Poly::is_zero) {
        norm_le(&lhs, &[])
    } else {
        format!("exists {} . ({body})", zs.join(", "))
    };

    let assign = |lhs: &[String], rhs: &[String]| -> Vec<String> {
        lhs.iter().zip(rhs).map(|(a, b)| format!("{a} := {b}")).collect()
    };
    let dias = |asg: &[String], inner: &str| -> String {
        asg.iter().rev().fold(inner.to_string(), |acc, a| format!("<{a}> {acc}"))
    };
    let halve = format!("{t} := {t}/2");
    let mu = format!(
        "nu X . (({g}) & exists {} . <{halve}> ({} & {}))",
        us.join(", "),
        dias(&assign(xs, &us), "X"),
        dias(&assign(&ys, &us), "X"),
    );
    let pick_u: Vec<String> = us.iter().map(|u| format!("{u} := *")).collect();
    let game = format!(
        "[({halve} ; ({})^d ; (({}) ++ ({})))*] ({g})",
        pick_u.join(" ; "),
        assign(xs, &us).join(" ; "),
        assign(&ys, &us).join(" ; "),
    );
    GFormulas { g, mu, game }
}
