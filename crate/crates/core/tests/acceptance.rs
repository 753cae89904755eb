//! Acceptance suite: one PASS/FAIL line per criterion. Seeds come from
//! `GAMEMU_SEED` (default 2024).

mod common;

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use gamemu::gen::{seed_from_env, Gen, GenConfig};
use gamemu::ode::{
    rat, rat_f64, refine_reach, rk4_integrate, to_f64, PolyVectorField, Poly, ReachQuery, ReachVerdict, Taylor,
};
use gamemu::proof::{
    check_proof, deduction_transform, derive_schema, gexists_proof, mutations, Proof, Schema, Verdict, AXIOMS,
};
use gamemu::semantics::{default_support, eval_formula, eval_game, eval_mu, Space, StateSet, Structure, StructureSpace, DEFAULT_CAP};
use gamemu::syntax::*;
use gamemu::translate::{g1, g_combined, lfp_to_mu, mu_to_lfp, parikh_f, sabotage_gadget};
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;

use common::{to_set, Oracle, Set};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn(u64) -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn base_sig() -> GameSignature {
    GenConfig::default().signature()
}

fn structures(sig: &GameSignature, max_domain: usize, max_gen: usize) -> Vec<Structure> {
    StructureSpace::new(sig, max_domain, max_gen, DEFAULT_CAP)
        .expect("enumerable signature")
        .to_vec()
}

fn sorted_support(fs: &[&Formula]) -> Vec<String> {
    default_support(fs, &[])
}

/// Library denotation compared against the reference evaluator on `other`.
fn same_denotation(st: &Structure, lib: &Formula, reference: &Formula) -> Result<bool, String> {
    let sup = sorted_support(&[lib, reference]);
    let l = eval_formula(st, lib, &sup).map_err(|e| e.to_string())?;
    let o = Oracle::new(st, &sup).eval(reference);
    Ok(to_set(&l) == o)
}

fn c1_axiom_sweep(seed: u64) -> Outcome {
    let sig = base_sig();
    let all = structures(&sig, 2, 2);
    let mut total = 0usize;
    for (name, logics) in AXIOMS {
        for &logic in *logics {
            let mut g = Gen::new(seed ^ name.len() as u64 ^ (logic as u64) << 8, GenConfig::default());
            let instances: Vec<Formula> = (0..200).map(|_| g.axiom_instance(name, logic, 2)).collect();
            let bad = instances.par_iter().enumerate().find_map_any(|(i, f)| {
                let sup = sorted_support(&[f]);
                for st in &all {
                    let valid = eval_formula(st, f, &sup).map(|s| s.is_full()).unwrap_or(false);
                    // Cross-check the first few instances with the reference evaluator.
                    let valid = if i < 10 {
                        valid && Oracle::new(st, &sup).eval(f).len() == st.domain.pow(sup.len() as u32)
                    } else {
                        valid
                    };
                    if !valid {
                        return Some(format!("{name} ({logic}) instance `{f}` fails on a structure with |D|={}", st.domain));
                    }
                }
                None
            });
            if let Some(msg) = bad {
                return Err(msg);
            }
            total += instances.len();
        }
    }
    Ok(format!("{total} instances valid on {} structures", all.len()))
}

fn substitution_cfg() -> GenConfig {
    GenConfig {
        functions: vec![("f".into(), 1)],
        vars: vec!["x".into(), "y".into(), "z".into()],
        ..GenConfig::default()
    }
}

fn c2_substitution(seed: u64) -> Outcome {
    let mut g = Gen::new(seed, substitution_cfg());
    for logic in [Logic::Gl, Logic::Mu] {
        for case in 0..500 {
            let phi = g.formula(logic, 3);
            let x = g.var();
            let theta = g.term();
            let sub = substitute_var(&phi, &x, &theta, logic);
            let domain = 2 + case % 2;
            let st = g.structure(domain, 2);
            let mut extras = vec![x.clone()];
            extras.extend(term_vars(&theta));
            let sup = default_support(&[&phi, &sub], &extras);
            let lhs = to_set(&eval_formula(&st, &sub, &sup).map_err(|e| e.to_string())?);
            let o = Oracle::new(&st, &sup);
            let den = o.eval(&phi);
            let xi = sup.iter().position(|v| *v == x).expect("x in support");
            let rhs: Set = o
                .states()
                .into_iter()
                .filter(|w| {
                    let mut w2 = w.clone();
                    w2[xi] = o.term(w, &theta);
                    den.contains(&w2)
                })
                .collect();
            ensure(lhs == rhs, || format!("{logic}: ({phi})[{x}:={theta}] = {sub}"))?;
        }
    }
    for _ in 0..200 {
        let phi = g.mu_formula_open(3, "X");
        let rho = g.mu_formula(2);
        let sub = substitute_fixvar(&phi, "X", &rho);
        let st = g.structure(2, 2);
        let sup = default_support(&[&phi, &rho, &sub], &[]);
        let lhs = to_set(&eval_formula(&st, &sub, &sup).map_err(|e| e.to_string())?);
        let o = Oracle::new(&st, &sup);
        let env = HashMap::from([("X".to_string(), o.eval(&rho))]);
        let rhs = o.formula(&phi, &env);
        ensure(lhs == rhs, || format!("({phi})[X:={rho}] = {sub}"))?;
        // The library's own interpretation argument must agree too.
        let space = Space::new(st.domain, sup.clone()).map_err(|e| e.to_string())?;
        let rho_set = StateSet::from_fn(space, |w| env["X"].contains(w));
        let via_interp = eval_mu(&st, &[("X".to_string(), rho_set)].into(), &phi, &sup).map_err(|e| e.to_string())?;
        ensure(to_set(&via_interp) == rhs, || format!("interpretation of X in {phi}"))?;
    }
    Ok("1000 variable and 200 fixpoint substitutions exact".into())
}

fn c3_coincidence_bound_effect(seed: u64) -> Outcome {
    let mut g = Gen::new(seed, substitution_cfg());
    for case in 0..500 {
        let logic = if case % 2 == 0 { Logic::Gl } else { Logic::Mu };
        let phi = g.formula(logic, 3);
        let st = g.structure(2, 2);
        let sup = default_support(&[&phi], &["x".into(), "y".into(), "z".into()]);
        let den = to_set(&eval_formula(&st, &phi, &sup).map_err(|e| e.to_string())?);
        let fv = free_ind_vars(&phi);
        let keep: Vec<usize> = (0..sup.len()).filter(|&i| fv.contains(&sup[i])).collect();
        let mut verdicts: HashMap<Vec<usize>, bool> = HashMap::new();
        for w in Oracle::new(&st, &sup).states() {
            let key: Vec<usize> = keep.iter().map(|&i| w[i]).collect();
            let inside = den.contains(&w);
            if *verdicts.entry(key).or_insert(inside) != inside {
                return Err(format!("coincidence fails for {phi} (FV = {fv:?})"));
            }
        }
    }
    let vars: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
    for _ in 0..500 {
        let a = g.game(3);
        let st = g.structure(2, 2);
        let sup = default_support(&[&dia(a.clone(), tt())], &vars);
        let space = Space::new(st.domain, sup.clone()).map_err(|e| e.to_string())?;
        let o = Oracle::new(&st, &sup);
        let goal: Set = o.states().into_iter().filter(|_| g.rng_bool()).collect();
        let goal_set = StateSet::from_fn(space.clone(), |w| goal.contains(w));
        let full = to_set(&eval_game(&st, &a, &goal_set).map_err(|e| e.to_string())?);
        let bv = bound_vars(&a);
        let outside: Vec<usize> = (0..sup.len()).filter(|&i| !bv.contains(&sup[i])).collect();
        for w in o.states() {
            let restricted = StateSet::from_fn(space.clone(), |v| {
                goal.contains(v) && outside.iter().all(|&i| v[i] == w[i])
            });
            let r = to_set(&eval_game(&st, &a, &restricted).map_err(|e| e.to_string())?);
            if r.contains(&w) != full.contains(&w) {
                return Err(format!("bound effect fails for {a} (BV = {bv:?})"));
            }
        }
    }
    Ok("500 coincidence and 500 bound-effect cases exact".into())
}

trait CoinFlip {
    fn rng_bool(&mut self) -> bool;
}

impl CoinFlip for Gen {
    fn rng_bool(&mut self) -> bool {
        use rand::Rng;
        self.rng.gen()
    }
}

fn c4_least_fixpoint(seed: u64) -> Outcome {
    let mut g = Gen::new(
        seed,
        GenConfig {
            vars: vec!["x".into(), "y".into(), "z".into()],
            ..GenConfig::default()
        },
    );
    let sup: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
    for _ in 0..100 {
        let a = g.game(2);
        let st = g.structure(2, 2);
        let space = Space::new(2, sup.clone()).map_err(|e| e.to_string())?;
        let o = Oracle::new(&st, &sup);
        let states = o.states();
        ensure(states.len() == 8, || "eight states".into())?;
        let subset = |mask: u32| -> Set {
            states.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, w)| w.clone()).collect()
        };
        let goal = subset(g.rng_u32() & 0xff);
        let goal_set = StateSet::from_fn(space.clone(), |w| goal.contains(w));
        let lib = to_set(&eval_game(&st, &star(a.clone()), &goal_set).map_err(|e| e.to_string())?);
        let env = HashMap::new();
        let images: Vec<Set> = (0..256u32).map(|m| o.game(&a, &subset(m), &env)).collect();
        let mut meet: Set = states.iter().cloned().collect();
        for m in 0..256u32 {
            let z = subset(m);
            let pre: BTreeSet<_> = goal.union(&images[m as usize]).cloned().collect();
            if pre.is_subset(&z) {
                meet = meet.intersection(&z).cloned().collect();
            }
            // Monotonicity against every superset differing in one state.
            for bit in 0..8 {
                let m2 = m | 1 << bit;
                if !images[m as usize].is_subset(&images[m2 as usize]) {
                    return Err(format!("{a} is not monotone"));
                }
            }
        }
        ensure(lib == meet, || format!("({a})* differs from the meet of pre-fixpoints"))?;
    }
    Ok("100 loops equal the meet of all 256 pre-fixpoints; all images monotone".into())
}

trait U32 {
    fn rng_u32(&mut self) -> u32;
}

impl U32 for Gen {
    fn rng_u32(&mut self) -> u32 {
        use rand::Rng;
        self.rng.gen()
    }
}

fn c5_translation_f(seed: u64) -> Outcome {
    let all = structures(&base_sig(), 2, 2);
    let mut g = Gen::new(seed, GenConfig::default());
    let formulas: Vec<Formula> = (0..100).map(|_| g.gl_formula(4)).collect();
    let bad = formulas.par_iter().find_map_any(|phi| {
        let out = parikh_f(phi);
        if all_fixvars(&out).len() > 2 {
            return Some(format!("{out} uses more than two fixpoint variables"));
        }
        for st in &all {
            match same_denotation(st, &out, phi) {
                Ok(true) => {}
                Ok(false) => return Some(format!("F({phi}) = {out} differs")),
                Err(e) => return Some(e),
            }
        }
        None
    });
    match bad {
        Some(msg) => Err(msg),
        None => Ok(format!("100 formulas equal on {} structures, <= 2 fixpoint names", all.len())),
    }
}

fn c6_translation_g1(seed: u64) -> Outcome {
    let singles = structures(&base_sig(), 1, 2);
    let mut g = Gen::new(seed, GenConfig::default());
    for _ in 0..100 {
        let phi = g.mu_formula(4);
        let out = g1(&phi);
        check_logic(&out, Logic::Gl).map_err(|e| e.to_string())?;
        for st in &singles {
            ensure(same_denotation(st, &out, &phi)?, || format!("G1({phi}) = {out} differs"))?;
        }
    }
    Ok(format!("100 formulas equal on all {} one-element structures", singles.len()))
}

fn c7_sabotage(_seed: u64) -> Outcome {
    let all = structures(&base_sig(), 2, 2);
    let a = atomic("a", &["x"], vec![Term::var("x")]);
    let gad = sabotage_gadget(&a, "ctop", "cbot").map_err(|e| e.to_string())?;
    let sup: Vec<String> = ["x", "s_a", "d_a", "ctop", "cbot"].iter().map(|s| s.to_string()).collect();
    let pos = |v: &str| sup.iter().position(|w| w == v).expect("in support");
    let (s, d, top, bot) = (pos("s_a"), pos("d_a"), pos("ctop"), pos("cbot"));
    let mut checked = 0;
    for st in &all {
        let o = Oracle::new(st, &sup);
        let states = o.states();
        let distinct: Vec<&Vec<usize>> = states.iter().filter(|w| w[top] != w[bot]).collect();
        let space = Space::new(st.domain, sup.clone()).map_err(|e| e.to_string())?;
        // Every goal that is a union of x-slices of R plus the two extremes.
        let goals: Vec<Set> = vec![
            Set::new(),
            o.all(),
            o.eval(&rel("R", vec![Term::var("x")])),
            o.eval(&not(rel("R", vec![Term::var("x")]))),
            o.eval(&eq(Term::var("x"), Term::var("s_a"))),
        ];
        for goal in &goals {
            let goal_set = StateSet::from_fn(space.clone(), |w| goal.contains(w));
            let ev = |g: &Game| -> Result<Set, String> {
                Ok(to_set(&eval_game(st, g, &goal_set).map_err(|e| e.to_string())?))
            };
            let guarded = ev(&gad.guarded)?;
            let plain = o.game(&a, goal, &HashMap::new());
            for w in &distinct {
                if w[s] == w[bot] {
                    ensure(guarded.contains(*w) == plain.contains(*w), || "unsabotaged case differs".into())?;
                } else if w[s] == w[top] && w[d] == w[top] {
                    ensure(guarded.contains(*w), || "Angel-saboteur state missing".into())?;
                } else if w[s] == w[top] && w[d] == w[bot] {
                    ensure(!guarded.contains(*w), || "Demon-saboteur state present".into())?;
                }
            }
            let angel = ev(&seq(gad.angel_sab.clone(), gad.guarded.clone()))?;
            let demon = ev(&seq(gad.demon_sab.clone(), gad.guarded.clone()))?;
            let init = ev(&seq(gad.init.clone(), gad.guarded.clone()))?;
            let orig = ev(&seq(gad.init.clone(), a.clone()))?;
            for w in &distinct {
                ensure(angel.contains(*w), || "Angel sabotage does not win".into())?;
                ensure(!demon.contains(*w), || "Demon sabotage does not block".into())?;
                ensure(init.contains(*w) == orig.contains(*w), || "initialised gadget differs".into())?;
            }
            checked += 1;
        }
    }
    Ok(format!("three cases hold for {checked} goals over {} structures", all.len()))
}

fn c8_g_combined(seed: u64) -> Outcome {
    let all = structures(&base_sig(), 2, 2);
    let mut g = Gen::new(seed, GenConfig::default());
    let mut formulas = Vec::new();
    while formulas.len() < 50 {
        let phi = parikh_f(&g.gl_formula(3));
        if !all_fixvars(&phi).is_empty() {
            formulas.push(phi);
        }
    }
    let bad = formulas.par_iter().find_map_any(|phi| {
        let out = match g_combined(phi) {
            Ok(o) => o,
            Err(e) => return Some(format!("G({phi}): {e}")),
        };
        for st in &all {
            match same_denotation(st, &out, phi) {
                Ok(true) => {}
                Ok(false) => return Some(format!("G({phi}) = {out} differs")),
                Err(e) => return Some(e),
            }
        }
        None
    });
    match bad {
        Some(msg) => Err(msg),
        None => Ok(format!("50 fragment formulas equal on {} structures", all.len())),
    }
}

fn c9_lfp_round_trip(seed: u64) -> Outcome {
    let cfg = GenConfig {
        actions: vec![],
        ..GenConfig::default()
    };
    let sig = cfg.signature();
    let all = structures(&sig, 2, 2);
    let mut g = Gen::new(seed, cfg);
    for _ in 0..50 {
        let phi = g.mu_formula(4);
        let vars: Vec<String> = all_vars(&phi).into_iter().collect();
        let lfp = mu_to_lfp(&phi, &vars).map_err(|e| format!("{phi}: {e}"))?;
        let back = lfp_to_mu(&lfp).map_err(|e| format!("{lfp}: {e}"))?;
        for st in &all {
            ensure(same_denotation(st, &back, &phi)?, || format!("{phi} -> {lfp} -> {back} differs"))?;
        }
    }
    Ok(format!("50 round trips equal on {} structures", all.len()))
}

fn gl(s: &str) -> Formula {
    parse_formula_infer(s, Logic::Gl).expect("valid formula").0
}

fn game_of(s: &str) -> Game {
    match gl(&format!("<{s}> true")) {
        Formula::Dia(g, _) => *g,
        _ => unreachable!(),
    }
}

fn shipped_proofs() -> Vec<(&'static str, &'static str)> {
    vec![
        ("gexists", include_str!("../proofs/gexists.jsonl")),
        ("cplus", include_str!("../proofs/cplus.jsonl")),
        ("mc", include_str!("../proofs/mc.jsonl")),
        ("ic", include_str!("../proofs/ic.jsonl")),
    ]
}

/// Accepted, and every single-line mutation rejected.
fn robust(p: &Proof, what: &str) -> Result<usize, String> {
    let v = check_proof(p, Logic::Gl);
    ensure(v == Verdict::Accepted, || format!("{what} rejected: {v:?}\n{p}"))?;
    let ms = mutations(p);
    for (m, q) in &ms {
        ensure(!check_proof(q, Logic::Gl).is_accepted(), || format!("{what}: mutation {m:?} accepted"))?;
    }
    Ok(ms.len())
}

fn c10_proofs(seed: u64) -> Outcome {
    let start = Instant::now();
    let mut muts = 0;
    for (name, text) in shipped_proofs() {
        let p = Proof::from_jsonl(text, Logic::Gl).map_err(|e| format!("{name}: {e}"))?;
        muts += robust(&p, name)?;
    }
    let built = vec![
        ("G-exists", gexists_proof("x", &gl("R(x) & x = y"), &gl("R(y)"))),
        (
            "C+",
            derive_schema(Schema::Cplus, &game_of("(a(x:y) ; ?R(x))* ++ (x := *)^d"), &gl("R(x)"), &gl("R(y)"), &tt()),
        ),
        ("Mc", derive_schema(Schema::Mc, &game_of("a(x:y)*"), &gl("R(x)"), &gl("x = y"), &gl("R(y)"))),
        ("Ic", derive_schema(Schema::Ic, &game_of("x := *"), &gl("R(x)"), &gl("R(y)"), &gl("y = y"))),
    ];
    for (name, p) in built {
        let p = p.map_err(|e| format!("{name}: {e}"))?;
        muts += robust(&p, name)?;
    }
    let mut g = Gen::new(seed, GenConfig::default());
    let random: Vec<Proof> = (0..100).map(|k| g.hypothesis_proof(2 + k % 4)).collect();
    let counts = random
        .par_iter()
        .map(|p| -> Result<usize, String> {
            let d = deduction_transform(p).map_err(|e| format!("deduction: {e}\n{p}"))?;
            Ok(robust(p, "random hypothesis proof")? + robust(&d, "deduction output")?)
        })
        .collect::<Result<Vec<_>, _>>()?;
    muts += counts.iter().sum::<usize>();
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("all proofs accepted, {muts} mutations rejected in {:.1}s", elapsed.as_secs_f64()))
}

fn c11_taylor_necessity(seed: u64) -> Outcome {
    use rand::Rng;
    let mut rng = Gen::new(seed, GenConfig::default()).rng;
    let k = 3.0;
    let mut samples = 0;
    for _ in 0..100 {
        let dim = rng.gen_range(1..=2);
        let vars: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
        let monomials: Vec<String> = {
            let mut m = vec!["1".to_string()];
            for v in &vars {
                m.push(v.clone());
            }
            for (i, a) in vars.iter().enumerate() {
                for b in &vars[i..] {
                    m.push(format!("{a}*{b}"));
                }
            }
            m
        };
        let comps: Vec<String> = (0..dim)
            .map(|_| {
                let terms: Vec<String> = monomials
                    .iter()
                    .map(|m| format!("{}*{m}", rng.gen_range(-2i32..=2)))
                    .collect();
                terms.join(" + ")
            })
            .collect();
        let field = PolyVectorField::new(
            vars.clone(),
            comps.iter().map(|c| Poly::parse(c)).collect::<Result<_, _>>().map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let taylor = Taylor::new(&field, rat(3)).map_err(|e| e.to_string())?;
        // Trajectory at step h until it leaves the box or time 1 is reached.
        let h = 1e-3;
        let mut x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut traj = vec![x.clone()];
        for _ in 0..1000 {
            x = rk4_integrate(&field, &x, h, 1).map_err(|e| e.to_string())?;
            if x.iter().any(|c| !c.is_finite() || c.abs() > k) {
                break;
            }
            traj.push(x.clone());
        }
        for _ in 0..20 {
            let i = rng.gen_range(0..traj.len());
            let j = rng.gen_range(i..traj.len());
            let t = (j - i) as f64 * h;
            let ok = taylor.check_f64(&traj[i], &traj[j], t, 1e-7).map_err(|e| e.to_string())?;
            ensure(ok, || format!("field {comps:?}: samples {i}..{j} violate the bound"))?;
            samples += 1;
        }
    }
    Ok(format!("{samples} trajectory samples satisfy the Taylor bound"))
}

fn harmonic_query(y: [&str; 2], depth: u32) -> ReachQuery {
    ReachQuery::from_json(&format!(
        r#"{{"vars":["x1","x2"],"field":["x2","-1*x1"],"x0":[1,0],"y":[{},{}],"t":1.5707963,"K":2,
            "depth":{depth},"grid":{{"radius":0.05,"points":5}},"eps":1e-9}}"#,
        y[0], y[1]
    ))
    .expect("valid query")
}

fn c12_positive(_seed: u64) -> Outcome {
    let start = Instant::now();
    let r = refine_reach(&harmonic_query(["0", "-1"], 6)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.verdict == ReachVerdict::PassedToDepth(6), || format!("harmonic: {}", r.verdict))?;
    ensure(elapsed < Duration::from_secs(10), || format!("harmonic took {elapsed:?}"))?;
    let q = ReachQuery::from_json(r#"{"vars":["x"],"field":["x"],"x0":[1],"y":[2.718281828],"t":1,"K":3,"depth":4}"#)
        .map_err(|e| e.to_string())?;
    let e = refine_reach(&q).map_err(|e| e.to_string())?;
    ensure(e.verdict == ReachVerdict::PassedToDepth(4), || format!("exponential: {}", e.verdict))?;
    Ok(format!(
        "harmonic {} in {:.2}s, exponential {}",
        r.verdict,
        elapsed.as_secs_f64(),
        e.verdict
    ))
}

// The query time is a truncation of pi/2, not the constant.
#[allow(clippy::approx_constant)]
fn c13_rejection(_seed: u64) -> Outcome {
    let r = refine_reach(&harmonic_query(["1.9", "1.9"], 6)).map_err(|e| e.to_string())?;
    ensure(r.verdict == ReachVerdict::RejectedAtLevel0, || format!("verdict {}", r.verdict))?;
    // π ∈ [3.14159265358, 3.14159265359], so t = π/2 lies in [lo, hi].
    let q = |s: &str| Poly::parse(s).unwrap().terms().next().unwrap().1.clone();
    let (pi_lo, pi_hi) = (q("3.14159265358"), q("3.14159265359"));
    let (t_lo, t_hi) = (pi_lo / rat(2), pi_hi / rat(2));
    // Field (x2, −x1) at x = (1, 0) is (0, −1): y − x − tF(x) = (0.9, 1.9 + t).
    let lhs_lo = q("1.9") + &t_lo;
    let bound_hi = &t_hi * &t_hi / rat(2) * rat(2);
    ensure(lhs_lo > bound_hi, || "interval arithmetic does not separate".into())?;
    // The library's figures for t = 1.5707963 agree to 1e-6 with the exact ones.
    let t = rat_f64(1.5707963).map_err(|e| e.to_string())?;
    let lhs = q("1.9") + &t;
    let bound = &t * &t;
    let close = |a: &BigRational, b: &BigRational| (a - b).abs() < q("0.000001");
    ensure(close(&r.level0.lhs, &lhs) && close(&r.level0.bound, &bound), || {
        format!("library lhs {} bound {}", to_f64(&r.level0.lhs), to_f64(&r.level0.bound))
    })?;
    ensure(r.n == rat(2), || "sup-norm bound differs from 2".into())?;
    Ok(format!(
        "RejectedAtLevel0: lhs >= {:.4} > bound <= {:.4}",
        to_f64(&lhs_lo),
        to_f64(&bound_hi)
    ))
}

fn main() {
    let seed = seed_from_env(2024);
    let criteria: Vec<Criterion> = vec![
        (1, "axiom soundness sweep", c1_axiom_sweep),
        (2, "substitution lemmas", c2_substitution),
        (3, "coincidence and bound effect", c3_coincidence_bound_effect),
        (4, "monotonicity and least fixpoints", c4_least_fixpoint),
        (5, "translation F", c5_translation_f),
        (6, "translation G1 on singletons", c6_translation_g1),
        (7, "sabotage gadget", c7_sabotage),
        (8, "combined translation on the loop fragment", c8_g_combined),
        (9, "LFP round trip", c9_lfp_round_trip),
        (10, "proof checker", c10_proofs),
        (11, "ODE Taylor necessity", c11_taylor_necessity),
        (12, "ODE positive cases", c12_positive),
        (13, "ODE certified rejection", c13_rejection),
    ];
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    println!("acceptance (seed {seed})");
    let mut failed = 0;
    for (n, name, run) in criteria {
        if filter.is_some_and(|f| f != n) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(|| run(seed)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if filter.is_none() {
        println!(
            "criterion 14 N/A   not reproducible at desk scale: the general fixpoint-to-game translation, \
             relative completeness and the proof-theoretic round trip (criteria 5-9 cover the semantics)"
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
