//! King θ-stability: search for destabilizing subrepresentations.
//!
//! The exact phase closes coordinate and random probe vectors under the
//! arrows and takes sums of the invariant spans found. The numeric phase
//! minimizes the invariance defect over products of Grassmannians for each
//! candidate dimension vector, then re-verifies any hit in the field of the
//! representation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{GradedSubspace, RepError, Representation};
use crate::linalg::{Field, Matrix};
use crate::quiver::DimVector;
use crate::rational::{fmt_q, Q};
use crate::walls::ThetaVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityBudget {
    /// Random probe vectors per vertex in the exact phase.
    pub probes: usize,
    /// Random restarts per dimension vector in the numeric phase.
    pub restarts: usize,
    /// Invariance-defect threshold.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for StabilityBudget {
    fn default() -> Self {
        Self { probes: 4, restarts: 5, tol: 1e-10, max_iter: 300, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StabilityVerdict<F> {
    CertifiedUnstable { beta: DimVector, slope: Q, witness: GradedSubspace<F> },
    StrictlySemistableWitness { beta: DimVector, witness: GradedSubspace<F> },
    /// Not a proof of semistability; records the search effort.
    NoDestabilizerFound { trials: usize, tolerance: f64, unverified: usize },
}

impl<F> StabilityVerdict<F> {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::CertifiedUnstable { .. } => "certified_unstable",
            Self::StrictlySemistableWitness { .. } => "strictly_semistable_witness",
            Self::NoDestabilizerFound { .. } => "no_destabilizer_found",
        }
    }

    pub fn beta(&self) -> Option<&DimVector> {
        match self {
            Self::CertifiedUnstable { beta, .. } | Self::StrictlySemistableWitness { beta, .. } => Some(beta),
            Self::NoDestabilizerFound { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&GradedSubspace<F>> {
        match self {
            Self::CertifiedUnstable { witness, .. } | Self::StrictlySemistableWitness { witness, .. } => Some(witness),
            Self::NoDestabilizerFound { .. } => None,
        }
    }
}

/// `(θ·β) / Σ β_i`.
pub fn slope_theta(theta: &ThetaVector, beta: &DimVector) -> Result<Q, RepError> {
    if theta.len() != beta.len() {
        return Err(RepError::Length { expected: beta.len(), found: theta.len() });
    }
    if beta.is_zero() {
        return Err(RepError::UndefinedSlope);
    }
    Ok(theta.pair(beta) / Q::from_integer(beta.total().into()))
}

const SPAN_TOL: f64 = 1e-9;
const MAX_SUBSPACES: usize = 128;

fn push_new<F: Field>(found: &mut Vec<GradedSubspace<F>>, sub: GradedSubspace<F>, tol: f64) -> bool {
    if !sub.is_proper_nonzero() || found.len() >= MAX_SUBSPACES || found.iter().any(|w| w.same_as(&sub, tol)) {
        return false;
    }
    found.push(sub);
    true
}

fn exact_phase<F: Field>(rep: &Representation<F>, budget: &StabilityBudget, rng: &mut ChaCha8Rng, tol: f64) -> Vec<GradedSubspace<F>> {
    let mut found = Vec::new();
    for (i, &ni) in rep.n().0.iter().enumerate() {
        let ni = ni as usize;
        for k in 0..ni {
            let mut v = vec![F::zero(); ni];
            v[k] = F::one();
            push_new(&mut found, rep.cyclic_subrep(i, &v, tol), tol);
        }
        for _ in 0..budget.probes {
            if ni == 0 {
                break;
            }
            let v: Vec<F> = (0..ni).map(|_| F::from_q(&Q::from_integer(rng.gen_range(-3i64..=3).into()))).collect();
            push_new(&mut found, rep.cyclic_subrep(i, &v, tol), tol);
        }
    }
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            let s = found[i].sum(&found[j], tol);
            push_new(&mut found, s, tol);
        }
        i += 1;
    }
    found
}

struct Defect {
    x: Vec<DMatrix<Complex64>>,
    y: Vec<DMatrix<Complex64>>,
    ends: Vec<(usize, usize)>,
}

impl Defect {
    fn new(rep: &Representation<Complex64>) -> Self {
        Self {
            x: rep.x().iter().map(Matrix::to_nalgebra).collect(),
            y: rep.y().iter().map(Matrix::to_nalgebra).collect(),
            ends: rep.quiver().arrows().iter().map(|a| (a.source, a.target)).collect(),
        }
    }

    fn terms(&self) -> impl Iterator<Item = (&DMatrix<Complex64>, usize, usize)> {
        self.x
            .iter()
            .zip(&self.ends)
            .map(|(m, &(s, t))| (m, s, t))
            .chain(self.y.iter().zip(&self.ends).map(|(m, &(s, t))| (m, t, s)))
    }

    /// `Σ ‖(I − U_t U_t*) A U_s‖²` over all arrows `A: V_s → V_t` of `Q̄`.
    fn value(&self, u: &[DMatrix<Complex64>]) -> f64 {
        self.terms()
            .map(|(a, s, t)| {
                let au = a * &u[s];
                let r = &au - &u[t] * (u[t].adjoint() * &au);
                r.norm_squared()
            })
            .sum()
    }

    fn gradient(&self, u: &[DMatrix<Complex64>]) -> Vec<DMatrix<Complex64>> {
        let mut g: Vec<DMatrix<Complex64>> = u.iter().map(|m| DMatrix::zeros(m.nrows(), m.ncols())).collect();
        for (a, s, t) in self.terms() {
            let au = a * &u[s];
            let resid = &au - &u[t] * (u[t].adjoint() * &au);
            g[s] += a.adjoint() * resid;
            g[t] -= &au * (au.adjoint() * &u[t]);
        }
        for (gi, ui) in g.iter_mut().zip(u) {
            let proj = &*gi - ui * (ui.adjoint() * &*gi);
            *gi = proj;
        }
        g
    }
}

fn orthonormalize(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return m;
    }
    let k = m.ncols();
    m.qr().q().columns(0, k).into_owned()
}

fn random_frame(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    orthonormalize(DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
    }))
}

fn identity_frame(rows: usize) -> DMatrix<Complex64> {
    DMatrix::identity(rows, rows)
}

/// Riemannian gradient descent with backtracking; returns the frames and
/// the final defect.
fn descend(def: &Defect, mut u: Vec<DMatrix<Complex64>>, free: &[bool], iters: usize, target: f64) -> (Vec<DMatrix<Complex64>>, f64) {
    let mut f = def.value(&u);
    let mut step = 1.0;
    for _ in 0..iters {
        if f <= target {
            break;
        }
        let g = def.gradient(&u);
        let gnorm: f64 = g.iter().zip(free).filter(|(_, &fr)| fr).map(|(m, _)| m.norm_squared()).sum();
        if gnorm == 0.0 {
            break;
        }
        let mut accepted = false;
        for _ in 0..50 {
            let cand: Vec<DMatrix<Complex64>> = u
                .iter()
                .zip(&g)
                .zip(free)
                .map(|((ui, gi), &fr)| if fr { orthonormalize(ui - gi * Complex64::new(step, 0.0)) } else { ui.clone() })
                .collect();
            let fc = def.value(&cand);
            if fc <= f - 0.5 * step * gnorm || (fc < f && step < 1e-8) {
                u = cand;
                f = fc;
                accepted = true;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (u, f)
}

/// Column-reduced echelon basis of the column span of `u`, so that exact
/// subspaces are recovered entry by entry.
fn echelon_columns(u: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    let rows: Vec<Vec<Complex64>> = (0..u.ncols()).map(|j| u.column(j).iter().copied().collect()).collect();
    if rows.is_empty() {
        return rows;
    }
    let (r, pivots) = Matrix::from_rows(rows).rref(1e-8);
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

enum NumericHit<F> {
    Exact(GradedSubspace<F>),
    Unverified,
}

fn numeric_candidate<F: Field>(
    rep: &Representation<F>,
    def: &Defect,
    beta: &DimVector,
    budget: &StabilityBudget,
    rng: &mut ChaCha8Rng,
    trials: &mut usize,
) -> Option<NumericHit<F>> {
    let n = rep.n();
    let free: Vec<bool> = n.0.iter().zip(&beta.0).map(|(&ni, &bi)| bi > 0 && bi < ni).collect();
    for _ in 0..budget.restarts.max(1) {
        *trials += 1;
        let u0: Vec<DMatrix<Complex64>> = n
            .0
            .iter()
            .zip(&beta.0)
            .map(|(&ni, &bi)| {
                if bi == ni {
                    identity_frame(ni as usize)
                } else {
                    random_frame(rng, ni as usize, bi as usize)
                }
            })
            .collect();
        let (u, f) = descend(def, u0, &free, budget.max_iter, budget.tol);
        if f > budget.tol {
            if free.iter().all(|&x| !x) {
                return None;
            }
            continue;
        }
        let (u, _) = descend(def, u, &free, 20 * budget.max_iter, 1e-26);
        let bases: Option<Vec<Vec<Vec<F>>>> = u
            .iter()
            .map(|ui| {
                echelon_columns(ui)
                    .into_iter()
                    .map(|c| c.into_iter().map(F::from_complex_approx).collect::<Option<Vec<F>>>())
                    .collect()
            })
            .collect();
        let Some(bases) = bases else {
            return Some(NumericHit::Unverified);
        };
        let sub = GradedSubspace { n: n.clone(), bases };
        let ok = if F::EXACT {
            rep.is_invariant(&sub, 0.0)
        } else {
            sub.dim_vector() == *beta && def.value(&u) <= budget.tol
        };
        return Some(if ok && sub.dim_vector() == *beta { NumericHit::Exact(sub) } else { NumericHit::Unverified });
    }
    None
}

/// King's criterion: `rep` is θ-unstable when some subrepresentation has
/// positive θ-slope, strictly semistable when some proper nonzero one has
/// slope zero.
pub fn check_stability<F: Field>(
    rep: &Representation<F>,
    theta: &ThetaVector,
    budget: &StabilityBudget,
) -> Result<StabilityVerdict<F>, RepError> {
    let n = rep.n();
    if theta.len() != n.len() {
        return Err(RepError::Length { expected: n.len(), found: theta.len() });
    }
    let tn = theta.pair(n);
    if !tn.is_zero() {
        return Err(RepError::ThetaNotOrthogonal(fmt_q(&tn)));
    }
    let tol = if F::EXACT { 0.0 } else { SPAN_TOL };
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);

    let found = exact_phase(rep, budget, &mut rng, tol);
    let mut best: Option<(Q, GradedSubspace<F>)> = None;
    let mut semistable: Option<GradedSubspace<F>> = None;
    for w in found {
        if !rep.is_invariant(&w, tol) {
            continue;
        }
        let slope = slope_theta(theta, &w.dim_vector())?;
        if slope.is_positive() {
            let better = match &best {
                None => true,
                Some((s, b)) => slope > *s || (slope == *s && w.dim_vector() < b.dim_vector()),
            };
            if better {
                best = Some((slope, w));
            }
        } else if slope.is_zero() && semistable.as_ref().is_none_or(|s| w.dim_vector() < s.dim_vector()) {
            semistable = Some(w);
        }
    }
    if let Some((slope, witness)) = best {
        return Ok(StabilityVerdict::CertifiedUnstable { beta: witness.dim_vector(), slope, witness });
    }

    let def = Defect::new(&rep.to_complex());
    let mut candidates: Vec<(Q, DimVector)> = n
        .box_iter()
        .filter(|b| !b.is_zero() && b != n)
        .map(|b| (slope_theta(theta, &b).expect("nonzero"), b))
        .filter(|(s, _)| !s.is_negative())
        .collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut trials = 0;
    let mut unverified = 0;
    for (slope, beta) in candidates {
        if slope.is_zero() && semistable.is_some() {
            break;
        }
        match numeric_candidate(rep, &def, &beta, budget, &mut rng, &mut trials) {
            Some(NumericHit::Exact(witness)) => {
                if slope.is_positive() {
                    return Ok(StabilityVerdict::CertifiedUnstable { beta, slope, witness });
                }
                semistable = Some(witness);
            }
            Some(NumericHit::Unverified) => unverified += 1,
            None => {}
        }
    }
    Ok(match semistable {
        Some(witness) => StabilityVerdict::StrictlySemistableWitness { beta: witness.dim_vector(), witness },
        None => StabilityVerdict::NoDestabilizerFound { trials, tolerance: budget.tol, unverified },
    })
}

/// Witness transported to the dual representation.
#[derive(Debug, Clone, PartialEq)]
pub struct DualWitness<F> {
    pub witness: GradedSubspace<F>,
    pub beta: DimVector,
    /// Slope with respect to `−θ`.
    pub slope: Q,
    pub invariant: bool,
}

/// The annihilator of an invariant `W ⊆ V` is invariant in the dual and
/// has dimension vector `n − β`; since `θ·n = 0` its `−θ`-slope has the
/// sign of the `θ`-slope of `W`.
pub fn dual_destabilizer<F: Field>(
    rep: &Representation<F>,
    theta: &ThetaVector,
    witness: &GradedSubspace<F>,
) -> Result<DualWitness<F>, RepError> {
    let tol = if F::EXACT { 0.0 } else { SPAN_TOL };
    let ann = witness.annihilator(tol);
    let beta = ann.dim_vector();
    let invariant = rep.dual().is_invariant(&ann, tol);
    let slope = if beta.is_zero() { Q::zero() } else { slope_theta(&theta.scaled(&-Q::from_integer(1.into())), &beta)? };
    Ok(DualWitness { witness: ann, beta, slope, invariant })
}
