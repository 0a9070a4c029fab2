use std::fmt::Write as _;
use std::io::Read;

use num_complex::Complex64;
use qrl_core::lattice::CurveConfig;
use qrl_core::linalg::Field;
use qrl_core::quiver::{DimVector, Quiver};
use qrl_core::rational::{fmt_q, parse_q, Q};
use qrl_core::reps::{
    check_stability, dual_destabilizer, parse_representation, slope_theta, verify_ci_dim, AnyRepresentation,
    GradedSubspace, Representation, StabilityBudget, StabilityVerdict,
};
use qrl_core::strata::{singular_model_summary, strata_report, ONE_VERTEX_NOTE};
use qrl_core::walls::{
    ample_walls_through_h0, character_general, combined_weight_vector, det_weight_vector, enumerate_chambers,
    is_generic, quiver_walls, verify_correspondence, ThetaVector, WallError,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{parse_config, Config};
use crate::{read_input, Cli, CliError, Command, Output, Side};

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn fmt_vec(v: &[Q]) -> String {
    format!("({})", v.iter().map(fmt_q).collect::<Vec<_>>().join(","))
}

fn parse_dim(text: &str, s: usize) -> Result<DimVector, CliError> {
    let v: Vec<u32> = text
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| CliError::Usage(format!("bad dimension vector {text:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    if v.len() != s {
        return Err(CliError::Usage(format!("dimension vector {text:?} needs {s} entries")));
    }
    Ok(DimVector(v))
}

fn parse_theta(text: &str) -> Result<ThetaVector, CliError> {
    let v = text
        .split(',')
        .map(|t| parse_q(t).map_err(|e| CliError::Usage(format!("bad theta {text:?}: {e}"))))
        .collect::<Result<Vec<Q>, _>>()?;
    Ok(ThetaVector(v))
}

fn resolve_seed(cli: &Cli, env_seed: Option<&str>, config: Option<&Config>) -> Result<u64, CliError> {
    if let Some(s) = cli.seed {
        return Ok(s);
    }
    if let Some(s) = env_seed {
        return s.trim().parse().map_err(|_| CliError::Usage(format!("{} is not an integer: {s:?}", crate::SEED_ENV)));
    }
    Ok(config.map_or(0, |c| c.document.options.seeds.default))
}

pub(crate) fn dispatch(cli: &Cli, stdin: &mut dyn Read, env_seed: Option<&str>) -> Result<Output, CliError> {
    let load = |path: &str, stdin: &mut dyn Read| -> Result<Config, CliError> { parse_config(&read_input(path, stdin)?) };
    match &cli.command {
        Command::Quiver { config } => quiver(&load(config, stdin)?),
        Command::Roots { config, bound } => roots(&load(config, stdin)?, bound.as_deref()),
        Command::Walls { config, side } => walls(&load(config, stdin)?, *side),
        Command::Chambers { config } => chambers(&load(config, stdin)?),
        Command::Character { config, pol, ell } => character(&load(config, stdin)?, pol, *ell),
        Command::Correspondence { config, samples } => {
            let c = load(config, stdin)?;
            let seed = resolve_seed(cli, env_seed, Some(&c))?;
            correspondence(&c, samples.unwrap_or(c.document.options.budgets.samples), seed)
        }
        Command::Strata { config } => strata(&load(config, stdin)?),
        Command::CbCheck { config, n } => cb_check(&load(config, stdin)?, n.as_deref()),
        Command::MomentVerify { config, trials, tol, n } => {
            let c = load(config, stdin)?;
            let seed = resolve_seed(cli, env_seed, Some(&c))?;
            moment_verify(&c, *trials, *tol, n.as_deref(), seed)
        }
        Command::Stability { rep, theta, probes, restarts, tol, max_iter } => {
            let rep = parse_representation(&read_input(rep, stdin)?)?;
            let d = StabilityBudget::default();
            let budget = StabilityBudget {
                probes: probes.unwrap_or(d.probes),
                restarts: restarts.unwrap_or(d.restarts),
                tol: tol.unwrap_or(d.tol),
                max_iter: max_iter.unwrap_or(d.max_iter),
                seed: resolve_seed(cli, env_seed, None)?,
            };
            stability(&rep, &parse_theta(theta)?, &budget)
        }
        Command::Summary { config } => {
            let c = load(config, stdin)?;
            let seed = resolve_seed(cli, env_seed, Some(&c))?;
            summary(&c, seed)
        }
    }
}

fn quiver(c: &Config) -> Result<Output, CliError> {
    let q = Quiver::from_config(&c.curve).map_err(|e| CliError::Invariant { name: "quiver".into(), message: e.to_string() })?;
    let cartan = q.cartan();
    let dot = q.to_dot();
    let mut human = dot.clone();
    human.push_str("\ncartan:\n");
    for row in &cartan {
        let _ = writeln!(human, "  {}", row.iter().map(|x| format!("{x:>3}")).collect::<Vec<_>>().join(" "));
    }
    Ok(Output {
        result: json!({ "loops": q.loops(), "edges": q.edges(), "cartan": cartan, "dot": dot }),
        human,
    })
}

fn quiver_of(cfg: &CurveConfig) -> Result<Quiver, CliError> {
    Quiver::from_config(cfg).map_err(|e| CliError::Invariant { name: "quiver".into(), message: e.to_string() })
}

fn roots(c: &Config, bound: Option<&str>) -> Result<Output, CliError> {
    let q = quiver_of(&c.curve)?;
    let bound = match bound {
        Some(b) => parse_dim(b, q.s())?,
        None => c.curve.mult(),
    };
    let mut list: Vec<DimVector> = bound.box_iter().filter(|a| q.is_positive_root(a)).collect();
    list.sort();
    let mut human = format!("positive roots below {bound}: {}\n", list.len());
    let entries: Vec<Value> = list
        .iter()
        .map(|a| {
            let _ = writeln!(human, "  {a}  d={}  p={}", q.d_form(a), q.p_of(a));
            json!({ "root": a, "d": q.d_form(a), "p": q.p_of(a) })
        })
        .collect();
    Ok(Output { result: json!({ "bound": bound, "roots": entries }), human })
}

fn walls(c: &Config, side: Side) -> Result<Output, CliError> {
    let q = quiver_of(&c.curve)?;
    let n = c.curve.mult();
    let mut result = serde_json::Map::new();
    let mut human = String::new();
    if matches!(side, Side::Quiver | Side::Both) {
        let w = quiver_walls(&q, &n)?;
        let _ = writeln!(human, "quiver walls: {}", w.len());
        for wall in &w {
            let sources: Vec<String> = wall.sources.iter().map(ToString::to_string).collect();
            let _ = writeln!(human, "  W{}  sources {}", wall.normal, sources.join(" "));
        }
        result.insert("quiver".into(), to_value(&w));
    }
    if matches!(side, Side::Ample | Side::Both) {
        let w = ample_walls_through_h0(&c.curve)?;
        let _ = writeln!(human, "ample walls through H0: {}", w.len());
        for wall in &w {
            let _ = writeln!(human, "  beta {}  {}·a = {}", wall.beta, fmt_vec(&wall.coeffs), fmt_q(&-wall.constant.clone()));
        }
        result.insert("ample".into(), to_value(&w));
    }
    Ok(Output { result: Value::Object(result), human })
}

fn chambers(c: &Config) -> Result<Output, CliError> {
    let q = quiver_of(&c.curve)?;
    match enumerate_chambers(&q, &c.curve.mult()) {
        Ok(r) => {
            let mut human = format!("chambers: {}\n", r.count);
            for ch in &r.chambers {
                let _ = writeln!(
                    human,
                    "  signature {:?}  theta {}  generic {}",
                    ch.signature,
                    fmt_vec(&ch.representative.0),
                    ch.generic
                );
            }
            Ok(Output { result: to_value(&r), human })
        }
        Err(WallError::NoWallStructure) => Ok(Output {
            result: json!({ "count": Value::Null, "chambers": [], "note": ONE_VERTEX_NOTE }),
            human: format!("chambers: none ({ONE_VERTEX_NOTE})\n"),
        }),
        Err(e) => Err(e.into()),
    }
}

fn character(c: &Config, pol: &str, ell: Option<i64>) -> Result<Output, CliError> {
    let a = c.polarization(pol)?;
    let ell = ell.unwrap_or(c.document.options.ell);
    let cfg = &c.curve;
    let q = quiver_of(cfg)?;
    let n = cfg.mult();
    let theta = character_general(cfg, a)?;
    if !theta.pair(&n).is_zero_q() {
        return Err(CliError::Math("character is not orthogonal to n".into()));
    }
    let weights = det_weight_vector(cfg, &a.0, ell)?;
    let combined = combined_weight_vector(cfg, a, ell)?;
    let normals: Vec<DimVector> = quiver_walls(&q, &n)?.into_iter().map(|w| w.normal).collect();
    let genericity = is_generic(&theta, &q, &n)?;
    let human = format!(
        "polarization {pol} = {}\ntheta = {}\ngeneric: {}\ndet weights (ell={ell}) = {}\n",
        fmt_vec(&a.0),
        fmt_vec(&theta.0),
        genericity.generic,
        fmt_vec(&weights)
    );
    Ok(Output {
        result: json!({
            "polarization": pol,
            "a": a,
            "theta": theta,
            "ell": ell,
            "det_weights": weights.iter().map(fmt_q).collect::<Vec<_>>(),
            "combined_weights": combined.iter().map(fmt_q).collect::<Vec<_>>(),
            "wall_normals": normals,
            "signature": theta.signature(&normals),
            "genericity": genericity,
        }),
        human,
    })
}

trait IsZeroQ {
    fn is_zero_q(&self) -> bool;
}

impl IsZeroQ for Q {
    fn is_zero_q(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

fn correspondence(c: &Config, samples: usize, seed: u64) -> Result<Output, CliError> {
    let r = verify_correspondence(&c.curve, samples, seed)?;
    let mut human = format!("seed {seed}\nample walls checked: {}\n", r.walls.len());
    for w in &r.walls {
        let _ = writeln!(
            human,
            "  beta {}  vertices {}  samples {}  vanish {}",
            w.beta,
            w.vertices.len(),
            w.samples.len(),
            w.all_vanish
        );
    }
    let _ = writeln!(human, "adjacent chambers: {}  distinct images: {}", r.adjacent_chambers.len(), r.distinct_images);
    for ch in &r.adjacent_chambers {
        let _ = writeln!(
            human,
            "  a {} -> theta {}  generic {}",
            fmt_vec(&ch.ample.point.0),
            fmt_vec(&ch.theta.0),
            ch.genericity.generic
        );
    }
    Ok(Output { result: to_value(&r), human })
}

fn strata(c: &Config) -> Result<Output, CliError> {
    let r = strata_report(&c.curve)?;
    let mut human = String::from("strata:\n");
    for s in &r {
        let _ = writeln!(
            human,
            "  {:<24} dim {:>3} / {}{}",
            s.label,
            s.dimension,
            s.ambient_dimension,
            if s.open { "  (open)" } else { "" }
        );
    }
    Ok(Output { result: json!({ "strata": r }), human })
}

fn cb_check(c: &Config, n: Option<&str>) -> Result<Output, CliError> {
    let q = quiver_of(&c.curve)?;
    let n = match n {
        Some(t) => parse_dim(t, q.s())?,
        None => c.curve.mult(),
    };
    let v = q.cb_simple_exists(&n).map_err(|e| CliError::Invariant { name: "quiver".into(), message: e.to_string() })?;
    let mut human = format!("n = {n}  p(n) = {}  root: {}  simple exists: {}\n", v.p_n, v.n_is_root, v.exists);
    if let Some(w) = v.witness() {
        let _ = writeln!(human, "  violated by {}  (sum p = {})", w.decomposition, w.p_sum);
    }
    Ok(Output { result: json!({ "n": n, "verdict": v }), human })
}

fn moment_verify(c: &Config, trials: Option<usize>, tol: Option<f64>, n: Option<&str>, seed: u64) -> Result<Output, CliError> {
    let q = quiver_of(&c.curve)?;
    let n = match n {
        Some(t) => parse_dim(t, q.s())?,
        None => c.curve.mult(),
    };
    let mut opts = c.solver_options();
    if let Some(t) = tol {
        opts.tol = t;
    }
    let trials = trials.unwrap_or(c.document.options.budgets.trials);
    let advisory = !q.cb_simple_exists(&n).map(|v| v.exists).unwrap_or(false);
    let r = verify_ci_dim(&q, &n, trials, seed, &opts)?;
    let human = format!(
        "n = {n}  dim Rep = {}  target rank = {}  expected dim = {}\npassed {}/{} trials (seed {seed}){}\n",
        r.rep_dim,
        r.target_rank,
        r.expected_dim,
        r.passed,
        r.trials.len(),
        if advisory { "  [advisory: no simple representations expected]" } else { "" }
    );
    let mut result = to_value(&r);
    result["advisory"] = Value::Bool(advisory);
    Ok(Output { result, human })
}

fn subspace_json<F: Field>(w: &GradedSubspace<F>, entry: impl Fn(&F) -> Value) -> Value {
    json!({
        "dim_vector": w.dim_vector(),
        "bases": w.bases.iter().map(|b| b.iter().map(|v| v.iter().map(&entry).collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn verdict_json<F: Field>(
    rep: &Representation<F>,
    theta: &ThetaVector,
    v: &StabilityVerdict<F>,
    entry: impl Fn(&F) -> Value + Copy,
) -> Result<(Value, String), CliError> {
    let mut out = json!({ "kind": v.kind() });
    let mut human = format!("verdict: {}\n", v.kind());
    match v {
        StabilityVerdict::CertifiedUnstable { beta, slope, witness } => {
            out["beta"] = to_value(beta);
            out["slope"] = Value::String(fmt_q(slope));
            out["witness"] = subspace_json(witness, entry);
            let _ = writeln!(human, "  destabilizing subrepresentation {beta}, slope {}", fmt_q(slope));
        }
        StabilityVerdict::StrictlySemistableWitness { beta, witness } => {
            out["beta"] = to_value(beta);
            out["slope"] = Value::String(fmt_q(&slope_theta(theta, beta)?));
            out["witness"] = subspace_json(witness, entry);
            let _ = writeln!(human, "  slope-zero subrepresentation {beta}");
        }
        StabilityVerdict::NoDestabilizerFound { trials, tolerance, unverified } => {
            out["trials"] = json!(trials);
            out["tolerance"] = json!(tolerance);
            out["unverified"] = json!(unverified);
            let _ = writeln!(
                human,
                "  search budget: {trials} numeric trials, tolerance {tolerance:e}, {unverified} unverified hits; not a proof of semistability"
            );
        }
    }
    if let (StabilityVerdict::CertifiedUnstable { .. }, Some(w)) = (v, v.witness()) {
        let d = dual_destabilizer(rep, theta, w)?;
        if !d.invariant || d.slope <= Q::from_integer(0.into()) {
            return Err(CliError::Math("dual destabilizer does not verify".into()));
        }
        out["dual"] = json!({ "beta": d.beta, "slope": fmt_q(&d.slope), "invariant": d.invariant });
        let _ = writeln!(human, "  dual: {} destabilizes the dual for -theta (slope {})", d.beta, fmt_q(&d.slope));
    }
    Ok((out, human))
}

fn stability(rep: &AnyRepresentation, theta: &ThetaVector, budget: &StabilityBudget) -> Result<Output, CliError> {
    let (verdict, human) = match rep {
        AnyRepresentation::Rational(r) => {
            let v = check_stability(r, theta, budget)?;
            verdict_json(r, theta, &v, |x: &Q| Value::String(fmt_q(x)))?
        }
        AnyRepresentation::Complex(r) => {
            let v = check_stability(r, theta, budget)?;
            verdict_json(r, theta, &v, |z: &Complex64| json!([z.re, z.im]))?
        }
    };
    Ok(Output {
        result: json!({
            "mode": rep.mode(),
            "n": rep.n(),
            "theta": theta,
            "budget": budget,
            "verdict": verdict,
        }),
        human,
    })
}

fn summary(c: &Config, seed: u64) -> Result<Output, CliError> {
    let s = singular_model_summary(&c.curve, seed)?;
    let mut human = String::new();
    let _ = writeln!(human, "curves: {}  n = {}  gcd = {}", s.s, s.n, s.primitivity_gcd);
    let _ = writeln!(human, "v^2 = {}  dim M = {}", s.v_squared, s.moduli_dimension);
    let _ = writeln!(
        human,
        "p(n) = {}  dim Rep = {}  dim mu^-1(0) = {}  dim quotient = {}",
        s.p_n, s.rep_dimension, s.mu_zero_dimension, s.quotient_dimension
    );
    let _ = writeln!(human, "simple representations: {}", s.simple_existence.exists);
    let _ = writeln!(human, "walls: {} quiver, {} ample", s.quiver_walls.len(), s.ample_walls.len());
    match &s.quiver_chambers {
        Some(ch) => {
            let _ = writeln!(
                human,
                "chambers: {} quiver, {} ample adjacent to H0",
                ch.count,
                s.correspondence.adjacent_chambers.len()
            );
        }
        None => {
            let _ = writeln!(human, "chambers: none");
        }
    }
    let _ = writeln!(human, "strata:");
    for st in &s.strata {
        let _ = writeln!(human, "  {:<24} dim {}", st.label, st.dimension);
    }
    for note in &s.notes {
        let _ = writeln!(human, "note: {note}");
    }
    Ok(Output { result: to_value(&s), human })
}
