//! Acceptance suite: one PASS/FAIL line per criterion, each with its
//! runtime bound.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use num_traits::{Signed, Zero};
use qrl_core::lattice::{CurveConfig, DegreeVector};
use qrl_core::linalg::Matrix;
use qrl_core::quiver::{DimVector, Quiver};
use qrl_core::reps::{
    check_stability, dual_destabilizer, parse_representation, representation_to_json, verify_ci_dim,
    AnyRepresentation, Representation, SolverOptions, StabilityBudget, StabilityVerdict,
};
use qrl_core::strata::strata_report;
use qrl_core::walls::{
    ample_walls_through_h0, character_general, enumerate_chambers, quiver_walls, restrict_weights_to_type,
    verify_correspondence, wall_slice_vertices, ThetaVector,
};
use qrl_core::Q;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn qrl(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qrl")).args(args).env_remove("QRL_SEED").output().unwrap()
}

fn random_positive(rng: &mut ChaCha8Rng, s: usize) -> DegreeVector {
    DegreeVector::new((0..s).map(|_| Q::new(rng.gen_range(1..=60).into(), rng.gen_range(1..=12).into())).collect())
        .unwrap()
}

fn pairing_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let s = rng.gen_range(1..=5);
        let cfg = random_config(&mut rng, s, 6, 3);
        let q = Quiver::from_config(&cfg).unwrap();
        for beta in below(&cfg.mult()).into_iter().filter(|b| !b.is_zero()) {
            let v = cfg.vector_of_beta(&beta).unwrap().vector;
            let expected = oracle_d(&cfg, &beta);
            assert_eq!(cfg.mukai_pairing(&v, &v).unwrap(), expected);
            assert_eq!(q.d_form(&beta), expected);
        }
    }
}

fn wall_points_vanish(cfg: &CurveConfig, seed: u64) {
    let report = verify_correspondence(cfg, 5, seed).unwrap();
    let walls = ample_walls_through_h0(cfg).unwrap();
    assert_eq!(walls.len(), report.walls.len());
    let h0 = cfg.h0deg_vector();
    for (wall, check) in walls.iter().zip(&report.walls) {
        assert!(check.all_vanish);
        for a in check.samples.iter().chain(&wall_slice_vertices(cfg, wall)) {
            let xi: Vec<Q> = a.iter().zip(&h0.0).map(|(x, d)| x - d).collect();
            for b in &wall.sources {
                let pair = xi.iter().zip(&b.0).fold(Q::zero(), |acc, (x, &k)| acc + x * qi(k.into()));
                assert!(pair.is_zero(), "wall {} source {b}", wall.beta);
            }
        }
    }
}

fn wall_correspondence() {
    wall_points_vanish(&elliptic_pair(), 0);
    wall_points_vanish(&affine_a1(), 0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..20 {
        let s = rng.gen_range(2..=4);
        let cfg = random_config(&mut rng, s, 4, 2);
        wall_points_vanish(&cfg, k);
    }
}

fn character_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fx = fixtures();
    for (_, cfg) in &fx {
        assert!(character_general(cfg, &cfg.h0deg_vector()).unwrap().0.iter().all(Zero::is_zero));
    }
    for k in 0..1000 {
        let (_, cfg) = &fx[k % fx.len()];
        let a = random_positive(&mut rng, cfg.s());
        let theta = character_general(cfg, &a).unwrap();
        assert!(theta.pair(&cfg.mult()).is_zero());
        if cfg.s() >= 2 {
            let q = Quiver::from_config(cfg).unwrap();
            let normals: Vec<DimVector> = quiver_walls(&q, &cfg.mult()).unwrap().into_iter().map(|w| w.normal).collect();
            let c = Q::new(rng.gen_range(1..=30).into(), rng.gen_range(1..=7).into());
            let scaled = character_general(cfg, &a.scaled(&c)).unwrap();
            assert_eq!(theta.signature(&normals), scaled.signature(&normals));
        }
    }
}

fn block_restriction() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (name, cfg) in fixtures() {
        let q = Quiver::from_config(&cfg).unwrap();
        let points = [cfg.h0deg_vector(), random_positive(&mut rng, cfg.s()), random_positive(&mut rng, cfg.s())];
        for tau in q.decompositions(&cfg.mult()).unwrap() {
            for ell in [1, 5, 10] {
                for a in &points {
                    let got = restrict_weights_to_type(&cfg, &a.0, ell, &tau).unwrap();
                    for (part, w) in tau.parts.iter().zip(&got) {
                        let v = cfg.vector_of_beta(&part.beta).unwrap().vector;
                        let degree = v.div.iter().zip(&a.0).fold(Q::zero(), |acc, (&c, x)| acc + x * qi(c));
                        assert_eq!(w, &(degree * qi(ell) + qi(v.euler)), "{name} {tau} ell {ell}");
                    }
                }
            }
        }
    }
}

fn complete_intersection_dimension() {
    let opts = SolverOptions { rank_tol: 1e-8, ..SolverOptions::default() };
    // one vertex, two loops: 2p((2)) + 4 − 1 = 13 with d((2)) = 8
    for (cfg, n, dim) in [(affine_a1(), dv(&[1, 1]), 3), (elliptic_pair(), dv(&[1, 1]), 7), (one_vertex(), dv(&[2]), 13)] {
        let q = Quiver::from_config(&cfg).unwrap();
        let p = q.p_of(&n);
        assert_eq!(2 * p + n.square_norm() as i64 - 1, dim);
        let report = verify_ci_dim(&q, &n, 10, 100, &opts).unwrap();
        assert_eq!(report.expected_dim, dim);
        assert_eq!(report.target_rank, n.square_norm() - 1);
        let good = report
            .trials
            .iter()
            .filter(|t| {
                t.residual.is_some_and(|r| r <= 1e-10)
                    && t.rank == Some(report.target_rank as usize)
                    && t.local_dim == Some(dim)
            })
            .count();
        assert!(good >= 9, "n={n}: {good}/10");
    }
}

fn simplicity_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (name, cfg) in fixtures() {
        let q = Quiver::from_config(&cfg).unwrap();
        for n in below(&DimVector(vec![3; q.s()])) {
            if n.is_zero() || n.total() > 3 {
                continue;
            }
            for trial in 0..50 {
                let rep = if trial % 2 == 0 {
                    Representation::random_rational(&q, &n, &mut rng, 3).unwrap()
                } else {
                    let k = DimVector(n.0.iter().map(|&m| rng.gen_range(0..=m)).collect());
                    triangular_rep(&q, &n, &k, &mut rng)
                };
                assert_eq!(rep.is_simple(0.0), oracle_is_simple(&rep), "{name} n={n} trial {trial}");
            }
        }
    }
    let q = Quiver::from_config(&affine_a1()).unwrap();
    let one = |v: i64| Matrix::from_row_major(1, 1, vec![qi(v)]);
    let simple = Representation::new(q.clone(), dv(&[1, 1]), vec![one(1), one(0)], vec![one(0), one(1)]).unwrap();
    let split = Representation::new(q, dv(&[1, 1]), vec![one(1), one(0)], vec![one(0), one(0)]).unwrap();
    assert!(simple.is_simple(0.0));
    assert!(!split.is_simple(0.0));
}

fn load_rational(name: &str) -> Representation<Q> {
    match parse_representation(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap() {
        AnyRepresentation::Rational(r) => r,
        AnyRepresentation::Complex(_) => panic!("expected a rational fixture"),
    }
}

fn check_dual<F: qrl_core::linalg::Field>(rep: &Representation<F>, theta: &ThetaVector, v: &StabilityVerdict<F>) {
    if let StabilityVerdict::CertifiedUnstable { beta, witness, .. } = v {
        let d = dual_destabilizer(rep, theta, witness).unwrap();
        assert!(d.invariant);
        assert!(d.slope.is_positive());
        let expected = DimVector(rep.n().0.iter().zip(&beta.0).map(|(a, b)| a - b).collect());
        assert_eq!(d.beta, expected);
    }
}

fn stability_behaviour() {
    let budget = StabilityBudget::default();
    let unstable = load_rational("rep_unstable.json");
    let theta = ThetaVector::from_ints(&[-1, 1]);
    let v = check_stability(&unstable, &theta, &budget).unwrap();
    match &v {
        StabilityVerdict::CertifiedUnstable { beta, witness, .. } => {
            assert_eq!(beta, &dv(&[0, 1]));
            assert!(unstable.is_invariant(witness, 0.0));
            assert_eq!(witness.dim_vector(), dv(&[0, 1]));
        }
        other => panic!("unexpected verdict {}", other.kind()),
    }
    check_dual(&unstable, &theta, &v);

    let simple = load_rational("rep_simple.json");
    for (a, b) in [(1, 1), (-1, 1), (2, 1), (-2, 1), (3, 2), (-3, 2), (5, 1), (-5, 1), (7, 3), (-7, 3)] {
        let t = ThetaVector(vec![-Q::new(a.into(), b.into()), Q::new(a.into(), b.into())]);
        let v = check_stability(&simple, &t, &budget).unwrap();
        assert_eq!(v.kind(), "no_destabilizer_found", "theta {t:?}");
    }

    let sum = Representation::direct_sum(&[simple.clone(), simple.clone()]).unwrap();
    let v = check_stability(&sum, &theta, &budget).unwrap();
    assert_eq!(v.kind(), "strictly_semistable_witness");
    assert_eq!(v.beta(), Some(&dv(&[1, 1])));
    assert!(sum.is_invariant(v.witness().unwrap(), 0.0));

    // chain of three (−2)-curves: a simple (1,1,0) plus the vertex (0,0,1)
    // sits on the wall θ·(0,0,1) = 0.
    let q3 = Quiver::from_config(&chain3()).unwrap();
    let one = |v: i64| Matrix::from_row_major(1, 1, vec![qi(v)]);
    let empty = |r: usize, c: usize| Matrix::<Q>::zeros(r, c);
    let arrows = q3.arrows().to_vec();
    let mut left_x = Vec::new();
    let mut left_y = Vec::new();
    for a in &arrows {
        let inside = a.source < 2 && a.target < 2;
        let (ns, nt) = (usize::from(a.source < 2), usize::from(a.target < 2));
        left_x.push(if inside { one(1) } else { empty(nt, ns) });
        left_y.push(if inside { one(2) } else { empty(ns, nt) });
    }
    let left = Representation::new(q3.clone(), dv(&[1, 1, 0]), left_x, left_y).unwrap();
    assert!(left.is_simple(0.0));
    let point = Representation::zero(&q3, &dv(&[0, 0, 1])).unwrap();
    let sum = Representation::direct_sum(&[left, point]).unwrap();
    let wall = ThetaVector::from_ints(&[1, -1, 0]);
    let v = check_stability(&sum, &wall, &budget).unwrap();
    assert_eq!(v.kind(), "strictly_semistable_witness");
    assert!(sum.is_invariant(v.witness().unwrap(), 0.0));
    assert!(wall.pair(v.beta().unwrap()).is_zero());
    let off = ThetaVector::from_ints(&[1, 1, -2]);
    let v = check_stability(&sum, &off, &budget).unwrap();
    assert_eq!(v.kind(), "certified_unstable");
    check_dual(&sum, &off, &v);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let qa = Quiver::from_config(&affine_a1()).unwrap();
    for _ in 0..10 {
        let k = DimVector(vec![rng.gen_range(0..=2), rng.gen_range(0..=2)]);
        let rep = triangular_rep(&qa, &dv(&[2, 2]), &k, &mut rng);
        let t = ThetaVector::from_ints(&[-rng.gen_range(1..=4), 0]);
        let t = ThetaVector(vec![t.0[0].clone(), -t.0[0].clone()]);
        let v = check_stability(&rep, &t, &budget).unwrap();
        if let Some(w) = v.witness() {
            assert!(rep.is_invariant(w, 0.0));
        }
        check_dual(&rep, &t, &v);
    }
}

fn chamber_check(cfg: &CurveConfig) {
    let q = Quiver::from_config(cfg).unwrap();
    let (hyper, signs) = oracle_chamber_signs(cfg);
    let report = enumerate_chambers(&q, &cfg.mult()).unwrap();
    assert_eq!(report.count, signs.len());
    let mut found: Vec<Vec<i8>> = report
        .chambers
        .iter()
        .map(|ch| {
            hyper
                .iter()
                .map(|b| {
                    let v = ch.representative.pair(b);
                    assert!(!v.is_zero());
                    if v.is_positive() { 1 } else { -1 }
                })
                .collect()
        })
        .collect();
    found.sort();
    assert_eq!(found, signs);
}

fn chamber_enumeration() {
    for cfg in [affine_a1(), elliptic_pair()] {
        let q = Quiver::from_config(&cfg).unwrap();
        assert_eq!(enumerate_chambers(&q, &cfg.mult()).unwrap().count, 2);
        chamber_check(&cfg);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let cfg = random_config(&mut rng, 3, 4, 3);
        chamber_check(&cfg);
    }
}

fn crawley_boevey_combinatorics() {
    for (cfg, n) in [(affine_a1(), dv(&[1, 1])), (elliptic_pair(), dv(&[1, 1])), (one_vertex(), dv(&[2]))] {
        let q = Quiver::from_config(&cfg).unwrap();
        assert!(q.cb_simple_exists(&n).unwrap().exists, "n={n}");
    }
    let q = Quiver::from_config(&affine_a1()).unwrap();
    let v = q.cb_simple_exists(&dv(&[2, 2])).unwrap();
    assert!(!v.exists);
    let w = v.witness().unwrap();
    assert_eq!(w.decomposition.expanded(), vec![dv(&[1, 1]), dv(&[1, 1])]);
    let dims: Vec<i64> = strata_report(&one_vertex()).unwrap().iter().map(|r| r.dimension).collect();
    assert_eq!(dims, vec![10, 4]);
}

fn cli_contract() {
    let schema: Value =
        serde_json::from_str(include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schema.json"))).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let e = fixture("elliptic_pair.json");
    for args in [
        vec!["--json", "--seed", "5", "summary", e.as_str()],
        vec!["--json", "--seed", "5", "moment-verify", e.as_str(), "--trials", "2"],
        vec!["--json", "character", e.as_str(), "--pol", "H"],
    ] {
        let a = qrl(&args);
        let b = qrl(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert!(validator.is_valid(&v), "{args:?}");
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v);
    }
    for name in ["rep_unstable.json", "rep_simple.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let rep = parse_representation(&text).unwrap();
        let emitted = serde_json::to_string(&representation_to_json(&rep)).unwrap();
        let back = parse_representation(&emitted).unwrap();
        assert_eq!(back, rep);
        assert_eq!(serde_json::to_string(&representation_to_json(&back)).unwrap(), emitted);
        assert!(validator.is_valid(&serde_json::from_str::<Value>(&emitted).unwrap()));
    }
    for (name, code) in [("bad_json.json", 2), ("equal_slope.json", 3), ("odd_diagonal.json", 3)] {
        let out = qrl(&["--json", "summary", &fixture(name)]);
        assert_eq!(out.status.code(), Some(code), "{name}");
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(validator.is_valid(&v));
        assert_eq!(v["error"]["exit_code"], code);
    }
}

fn main() {
    let criteria: [(&str, u64, fn()); 10] = [
        ("pairing identity v(beta)^2 = d(beta)", 5, pairing_identity),
        ("ample walls map into quiver walls", 10, wall_correspondence),
        ("character contract", 5, character_contract),
        ("block restriction of determinant weights", 5, block_restriction),
        ("complete-intersection dimension of the zero fibre", 30, complete_intersection_dimension),
        ("simplicity against invariant-subspace oracle", 20, simplicity_oracle),
        ("stability verdicts and duality", 30, stability_behaviour),
        ("chamber enumeration against sign-vector oracle", 30, chamber_enumeration),
        ("simple-existence and strata combinatorics", 5, crawley_boevey_combinatorics),
        ("command-line contract", 5, cli_contract),
    ];
    std::panic::set_hook(Box::new(|info| eprintln!("  {info}")));
    let mut failed = 0;
    for (k, (name, bound, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(run)).is_ok();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*bound);
        let verdict = if ok && in_time { "PASS" } else { "FAIL" };
        if verdict == "FAIL" {
            failed += 1;
        }
        let note = if ok && !in_time { " (over time bound)" } else { "" };
        println!(
            "criterion {:>2}: {verdict}  {name}  [{:.2}s < {bound}s]{note}",
            k + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
