//! Points of `μ⁻¹(0)` by damped Gauss–Newton, and the local dimension
//! check at those points.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{RepError, Representation};
use crate::linalg::numerical_rank;
use crate::quiver::{DimVector, Quiver};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Target for `‖μ‖_F`.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative singular-value cutoff for numerical rank.
    pub rank_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200, rank_tol: 1e-8 }
    }
}

fn flatten(blocks: &[crate::linalg::Matrix<Complex64>]) -> DVector<Complex64> {
    DVector::from_iterator(blocks.iter().map(|b| b.data().len()).sum(), blocks.iter().flat_map(|b| b.data().iter().copied()))
}

/// Gauss–Newton iteration from `start`: each step is the minimum-norm
/// least-squares solution of `dμ · δ = −μ`, halved until the residual
/// drops.
pub fn solve_from(start: &Representation<Complex64>, opts: &SolverOptions) -> Result<Representation<Complex64>, RepError> {
    let mut rep = start.clone();
    let mut res = rep.moment_residual();
    for _ in 0..opts.max_iter {
        if res <= opts.tol {
            return Ok(rep);
        }
        let j = rep.moment_differential().to_nalgebra();
        let r = flatten(&rep.moment_map());
        let svd = j.svd(true, true);
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let Ok(step) = svd.solve(&r, 1e-13 * smax.max(1.0)) else {
            break;
        };
        let z = rep.coordinates();
        let mut alpha = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let cand: Vec<Complex64> = z.iter().zip(step.iter()).map(|(a, d)| a - d * alpha).collect();
            let next = rep.with_coordinates(&cand);
            let nres = next.moment_residual();
            if nres < res {
                rep = next;
                res = nres;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if res <= opts.tol {
        Ok(rep)
    } else {
        Err(RepError::NoConvergence { residual: res, iterations: opts.max_iter })
    }
}

/// Seeded random start followed by [`solve_from`].
pub fn solve_moment_zero(
    q: &Quiver,
    n: &DimVector,
    seed: u64,
    opts: &SolverOptions,
) -> Result<Representation<Complex64>, RepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Representation::random_complex(q, n, &mut rng)?;
    solve_from(&start, opts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiTrial {
    pub seed: u64,
    pub residual: Option<f64>,
    pub rank: Option<usize>,
    pub local_dim: Option<i64>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiDimReport {
    pub n: DimVector,
    pub seed: u64,
    pub rep_dim: u64,
    pub target_rank: u64,
    pub expected_dim: i64,
    pub options: SolverOptions,
    pub trials: Vec<CiTrial>,
    pub passed: usize,
}

/// At each solved point the rank of `dμ` should be `nᵀn − 1`, so that
/// `dim Rep(Q̄, n) − rank = 2p(n) + nᵀn − 1`.
pub fn verify_ci_dim(q: &Quiver, n: &DimVector, trials: usize, seed: u64, opts: &SolverOptions) -> Result<CiDimReport, RepError> {
    if n.len() != q.s() {
        return Err(RepError::Length { expected: q.s(), found: n.len() });
    }
    let rep_dim = q.rep_dim(n);
    let target_rank = n.square_norm().saturating_sub(1);
    let expected_dim = q.mu_zero_expected_dim(n);
    let mut out = Vec::with_capacity(trials);
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        let trial = match solve_moment_zero(q, n, s, opts) {
            Ok(rep) => {
                let rank = numerical_rank(&rep.moment_differential().to_nalgebra(), opts.rank_tol);
                let local_dim = rep_dim as i64 - rank as i64;
                CiTrial {
                    seed: s,
                    residual: Some(rep.moment_residual()),
                    rank: Some(rank),
                    local_dim: Some(local_dim),
                    ok: rank as u64 == target_rank && local_dim == expected_dim,
                }
            }
            Err(_) => CiTrial { seed: s, residual: None, rank: None, local_dim: None, ok: false },
        };
        out.push(trial);
    }
    let passed = out.iter().filter(|t| t.ok).count();
    Ok(CiDimReport { n: n.clone(), seed, rep_dim, target_rank, expected_dim, options: *opts, trials: out, passed })
}
