//! Wall-and-chamber structures on both sides of the correspondence.
//!
//! Quiver side: hyperplanes `θ·α = 0` in `n⊥ ⊗ ℚ` for `α ∈ R₊(n)`.
//! Ample side: walls through `H_0` on the slice `Σ n_i a_i = d_0` of the
//! cone of degree vectors. The affine map `a ↦ a − d` carries the second
//! arrangement onto the first, and the determinant-line-bundle character
//! `θ_i = d_0 a_i − d d_i` extends it to every positive `a`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{CurveConfig, DegreeVector, LatticeError};
use crate::linalg::Matrix;
use crate::quiver::{Decomposition, DimVector, Quiver, QuiverError};
use crate::rational::{dot, fmt_q, primitive_integer, serde_q, serde_q_vec, serde_q_vec_vec, sign, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WallError {
    #[error("theta·n = {0}, expected 0")]
    ThetaNotOrthogonal(String),
    #[error("no wall structure; non-primitive one-vertex case")]
    NoWallStructure,
    #[error("degree vector is off the slice: Σ n_i a_i = {found}, expected {expected}")]
    OffSlice { expected: String, found: String },
    #[error("vector has length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("decomposition sums to {found}, expected {expected}")]
    DecompositionMismatch { expected: DimVector, found: DimVector },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// Rational stability parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaVector(#[serde(with = "serde_q_vec")] pub Vec<Q>);

impl ThetaVector {
    pub fn from_ints(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| Q::from_integer(x.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pair(&self, beta: &DimVector) -> Q {
        self.0
            .iter()
            .zip(&beta.0)
            .fold(Q::zero(), |acc, (t, &b)| acc + t * Q::from_integer(b.into()))
    }

    /// Checks `θ·n = 0`.
    pub fn check_orthogonal(&self, n: &DimVector) -> Result<(), WallError> {
        if self.len() != n.len() {
            return Err(WallError::Length { expected: n.len(), found: self.len() });
        }
        let v = self.pair(n);
        if v.is_zero() {
            Ok(())
        } else {
            Err(WallError::ThetaNotOrthogonal(fmt_q(&v)))
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        Self(self.0.iter().map(|x| x * c).collect())
    }

    /// Signs of `θ·β` for each normal.
    pub fn signature(&self, normals: &[DimVector]) -> Vec<i8> {
        normals.iter().map(|b| sign(&self.pair(b))).collect()
    }
}

/// Primitive direction of the hyperplane `{θ ∈ n⊥ : θ·normal = 0}`, i.e.
/// of the projection of `normal` to `n⊥`, with its first nonzero entry
/// positive. `None` when the normal is proportional to `n`.
pub fn hyperplane_key(normal: &[Q], n: &DimVector) -> Option<Vec<Q>> {
    let nq: Vec<Q> = n.0.iter().map(|&x| Q::from_integer(x.into())).collect();
    let nn = dot(&nq, &nq);
    let an = dot(normal, &nq);
    let proj: Vec<Q> = normal.iter().zip(&nq).map(|(a, ni)| a * &nn - &an * ni).collect();
    if proj.iter().all(Zero::is_zero) {
        return None;
    }
    let mut p = primitive_integer(&proj);
    if p.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        p.iter_mut().for_each(|x| *x = -x.clone());
    }
    Some(p)
}

fn dim_q(b: &DimVector) -> Vec<Q> {
    b.0.iter().map(|&x| Q::from_integer(x.into())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverWall {
    /// Lexicographically smallest root cutting out this hyperplane.
    pub normal: DimVector,
    pub sources: Vec<DimVector>,
}

/// Distinct walls of `R₊(n)` plus the roots proportional to `n`, which
/// vanish on all of `n⊥`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallArrangement {
    pub n: DimVector,
    pub walls: Vec<QuiverWall>,
    pub degenerate: Vec<DimVector>,
}

impl WallArrangement {
    pub fn normals(&self) -> Vec<DimVector> {
        self.walls.iter().map(|w| w.normal.clone()).collect()
    }
}

pub fn wall_arrangement(q: &Quiver, n: &DimVector) -> Result<WallArrangement, WallError> {
    let roots = q.bounded_roots(n)?;
    let mut groups: BTreeMap<Vec<Q>, Vec<DimVector>> = BTreeMap::new();
    let mut degenerate = Vec::new();
    for alpha in roots {
        match hyperplane_key(&dim_q(&alpha), n) {
            Some(k) => groups.entry(k).or_default().push(alpha),
            None => degenerate.push(alpha),
        }
    }
    let mut walls: Vec<QuiverWall> = groups
        .into_values()
        .map(|mut sources| {
            sources.sort();
            QuiverWall { normal: sources[0].clone(), sources }
        })
        .collect();
    walls.sort_by(|a, b| a.normal.cmp(&b.normal));
    Ok(WallArrangement { n: n.clone(), walls, degenerate })
}

/// One wall per distinct hyperplane of `{θ·α = 0 : α ∈ R₊(n)}` in `n⊥`.
pub fn quiver_walls(q: &Quiver, n: &DimVector) -> Result<Vec<QuiverWall>, WallError> {
    Ok(wall_arrangement(q, n)?.walls)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Genericity {
    pub generic: bool,
    pub violators: Vec<DimVector>,
}

/// `θ` is `n`-generic when `θ·α ≠ 0` for every `α ∈ R₊(n)`.
pub fn is_generic(theta: &ThetaVector, q: &Quiver, n: &DimVector) -> Result<Genericity, WallError> {
    theta.check_orthogonal(n)?;
    let violators: Vec<DimVector> =
        q.bounded_roots(n)?.into_iter().filter(|a| theta.pair(a).is_zero()).collect();
    Ok(Genericity { generic: violators.is_empty(), violators })
}

/// Integer basis of `n⊥`: `n_p e_i − n_i e_p` for `i ≠ p`, with `p` the
/// first index where `n` is nonzero.
pub fn orthogonal_basis(n: &DimVector) -> Vec<Vec<Q>> {
    let s = n.len();
    let Some(p) = n.0.iter().position(|&x| x > 0) else {
        return (0..s)
            .map(|i| (0..s).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
    };
    (0..s)
        .filter(|&i| i != p)
        .map(|i| {
            let mut v = vec![Q::zero(); s];
            v[i] = Q::from_integer(n.0[p].into());
            v[p] = -Q::from_integer(n.0[i].into());
            v
        })
        .collect()
}

/// Sign vectors of the open cells of a central arrangement of linear
/// forms in `nvars` variables, each with an interior point. `equalities`
/// restrict the ambient space to a linear subspace.
pub fn central_cells(forms: &[Vec<Q>], equalities: &[Vec<Q>], nvars: usize) -> Vec<(Vec<i8>, Vec<Q>)> {
    let basis: Vec<Vec<Q>> = if equalities.is_empty() {
        (0..nvars).map(|i| unit(nvars, i)).collect()
    } else {
        Matrix::from_rows(equalities.to_vec()).null_space(0.0)
    };
    let k = basis.len();
    let reduced: Vec<Vec<Q>> = forms.iter().map(|f| basis.iter().map(|b| dot(f, b)).collect()).collect();
    if k == 0 || reduced.iter().any(|f| f.iter().all(Zero::is_zero)) {
        return Vec::new();
    }
    let cells = if reduced.is_empty() { vec![(Vec::new(), unit(k, 0))] } else { cells_in(&reduced, k) };
    let mut out: Vec<(Vec<i8>, Vec<Q>)> = cells.into_iter().map(|(sig, y)| (sig, combine(&y, &basis, nvars))).collect();
    out.sort_by(|a, b| b.0.cmp(&a.0));
    out
}

fn unit(k: usize, i: usize) -> Vec<Q> {
    (0..k).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

fn combine(y: &[Q], basis: &[Vec<Q>], nvars: usize) -> Vec<Q> {
    let mut x = vec![Q::zero(); nvars];
    for (yj, b) in y.iter().zip(basis) {
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi += yj * bi;
        }
    }
    x
}

/// Cells of nonzero forms on `ℚ^k`, refined one form at a time. The cells
/// split by a new form `f` are the cells of the earlier forms restricted to
/// `f = 0`; each is pushed off the hyperplane to both sides.
fn cells_in(forms: &[Vec<Q>], k: usize) -> Vec<(Vec<i8>, Vec<Q>)> {
    if k == 1 {
        return [Q::one(), -Q::one()]
            .into_iter()
            .map(|y| (forms.iter().map(|f| sign(&(&f[0] * &y))).collect(), vec![y]))
            .collect();
    }
    let mut cells: Vec<(Vec<i8>, Vec<Q>)> = vec![(Vec::new(), unit(k, 0))];
    for (level, f) in forms.iter().enumerate() {
        let earlier = &forms[..level];
        let basis = Matrix::from_rows(vec![f.clone()]).null_space(0.0);
        let restricted: Vec<Vec<Q>> = earlier.iter().map(|g| basis.iter().map(|b| dot(g, b)).collect()).collect();
        let mut split: BTreeMap<Vec<i8>, Vec<Q>> = BTreeMap::new();
        if restricted.iter().all(|g| g.iter().any(|x| !x.is_zero())) {
            let on_plane = if restricted.is_empty() {
                vec![(Vec::new(), vec![Q::zero(); k - 1])]
            } else {
                cells_in(&restricted, k - 1)
            };
            for (tau, w) in on_plane {
                split.insert(tau, combine(&w, &basis, k));
            }
        }
        let ff = dot(f, f);
        let mut next = Vec::with_capacity(cells.len() + split.len());
        for (sig, y) in cells {
            if let Some(p) = split.get(&sig) {
                let mut eps = Q::one();
                for g in earlier {
                    let gf = dot(g, f);
                    if !gf.is_zero() {
                        let bound = dot(g, p).abs() / (gf.abs() * Q::from_integer(2.into()));
                        if bound < eps {
                            eps = bound;
                        }
                    }
                }
                let step = &eps / &ff;
                for s in [1i8, -1] {
                    let z: Vec<Q> =
                        p.iter().zip(f).map(|(a, b)| if s > 0 { a + &step * b } else { a - &step * b }).collect();
                    let mut c = sig.clone();
                    c.push(s);
                    next.push((c, z));
                }
            } else {
                let mut c = sig;
                c.push(sign(&dot(f, &y)));
                next.push((c, y));
            }
        }
        cells = next;
    }
    cells
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chamber {
    /// Signs of `θ·normal` over the canonical wall normals.
    pub signature: Vec<i8>,
    /// Primitive integer interior point.
    pub representative: ThetaVector,
    pub generic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberReport {
    pub n: DimVector,
    pub walls: Vec<DimVector>,
    pub count: usize,
    pub chambers: Vec<Chamber>,
}

/// Full-dimensional cells of the quiver arrangement restricted to `n⊥`.
pub fn enumerate_chambers(q: &Quiver, n: &DimVector) -> Result<ChamberReport, WallError> {
    if q.s() != n.len() {
        return Err(WallError::Length { expected: q.s(), found: n.len() });
    }
    if q.s() == 1 {
        return Err(WallError::NoWallStructure);
    }
    let arr = wall_arrangement(q, n)?;
    let basis = orthogonal_basis(n);
    let normals = arr.normals();
    let forms: Vec<Vec<Q>> = normals
        .iter()
        .map(|w| {
            let wq = dim_q(w);
            basis.iter().map(|b| dot(&wq, b)).collect()
        })
        .collect();
    let mut chambers = Vec::new();
    for (sig, t) in central_cells(&forms, &[], basis.len()) {
        let mut theta = vec![Q::zero(); n.len()];
        for (ti, b) in t.iter().zip(&basis) {
            for (x, bj) in theta.iter_mut().zip(b) {
                *x += ti * bj;
            }
        }
        let representative = ThetaVector(primitive_integer(&theta));
        if representative.signature(&normals) != sig {
            return Err(WallError::Consistency("chamber representative has the wrong signature".into()));
        }
        let generic = is_generic(&representative, q, n)?.generic;
        chambers.push(Chamber { signature: sig, representative, generic });
    }
    Ok(ChamberReport { n: n.clone(), walls: normals, count: chambers.len(), chambers })
}

/// Wall `χ Σ β_i a_i − d_0 χ_β = 0` through `H_0` on the degree side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmpleWall {
    pub beta: DimVector,
    pub sources: Vec<DimVector>,
    pub chi_beta: i64,
    /// Coefficients `χ β_i` of the linear form in `a`.
    #[serde(with = "serde_q_vec")]
    pub coeffs: Vec<Q>,
    /// Constant term `−d_0 χ_β`.
    #[serde(with = "serde_q")]
    pub constant: Q,
}

impl AmpleWall {
    pub fn eval(&self, a: &[Q]) -> Q {
        dot(&self.coeffs, a) + &self.constant
    }
}

/// Walls relevant to the polystable sheaf: one per hyperplane cut out on
/// the slice by some `β ∈ R₊(n)`.
pub fn ample_walls_through_h0(cfg: &CurveConfig) -> Result<Vec<AmpleWall>, WallError> {
    let q = Quiver::from_config(cfg)?;
    let n = cfg.mult();
    let chi = Q::from_integer(cfg.total_chi().into());
    let d0 = Q::from_integer(cfg.total_h0deg().into());
    let mut groups: BTreeMap<Vec<Q>, Vec<DimVector>> = BTreeMap::new();
    for beta in q.bounded_roots(&n)? {
        let coeffs: Vec<Q> = dim_q(&beta).iter().map(|b| b * &chi).collect();
        if let Some(k) = hyperplane_key(&coeffs, &n) {
            groups.entry(k).or_default().push(beta);
        }
    }
    let h0 = cfg.h0deg_vector();
    let mut out = Vec::new();
    for mut sources in groups.into_values() {
        sources.sort();
        let beta = sources[0].clone();
        let chi_beta: i64 = beta.0.iter().zip(cfg.chi()).map(|(&b, c)| i64::from(b) * c).sum();
        let coeffs: Vec<Q> = dim_q(&beta).iter().map(|b| b * &chi).collect();
        let constant = -(&d0 * Q::from_integer(chi_beta.into()));
        let wall = AmpleWall { beta, sources, chi_beta, coeffs, constant };
        if !wall.eval(&h0.0).is_zero() {
            return Err(WallError::Consistency(format!("wall {} misses H0", wall.beta)));
        }
        out.push(wall);
    }
    out.sort_by(|a, b| a.beta.cmp(&b.beta));
    Ok(out)
}

fn check_slice(cfg: &CurveConfig, a: &[Q]) -> Result<(), WallError> {
    if a.len() != cfg.s() {
        return Err(WallError::Length { expected: cfg.s(), found: a.len() });
    }
    let total: Q = a
        .iter()
        .zip(cfg.mult().0)
        .fold(Q::zero(), |acc, (x, n)| acc + x * Q::from_integer(n.into()));
    let d0 = Q::from_integer(cfg.total_h0deg().into());
    if total != d0 {
        return Err(WallError::OffSlice { expected: fmt_q(&d0), found: fmt_q(&total) });
    }
    Ok(())
}

/// `Ξ(a) = a − d` on the slice `Σ n_i a_i = d_0`.
pub fn xi_map(cfg: &CurveConfig, a: &[Q]) -> Result<ThetaVector, WallError> {
    check_slice(cfg, a)?;
    Ok(ThetaVector(
        a.iter().zip(cfg.h0deg()).map(|(x, &d)| x - Q::from_integer(d.into())).collect(),
    ))
}

/// `θ_i = d_0 a_i − d d_i` with `d_0 = Σ n_i d_i` and `d = Σ n_i a_i`.
pub fn character_general(cfg: &CurveConfig, a: &DegreeVector) -> Result<ThetaVector, WallError> {
    if a.len() != cfg.s() {
        return Err(WallError::Length { expected: cfg.s(), found: a.len() });
    }
    let d0 = Q::from_integer(cfg.total_h0deg().into());
    let d = a
        .0
        .iter()
        .zip(cfg.mult().0)
        .fold(Q::zero(), |acc, (x, n)| acc + x * Q::from_integer(n.into()));
    Ok(ThetaVector(
        a.0.iter()
            .zip(cfg.h0deg())
            .map(|(x, &di)| &d0 * x - &d * Q::from_integer(di.into()))
            .collect(),
    ))
}

/// Weights `(D_i·H) ℓ + χ_i` of the determinant line bundle of `ℓH`.
pub fn det_weight_vector(cfg: &CurveConfig, a: &[Q], ell: i64) -> Result<Vec<Q>, WallError> {
    if a.len() != cfg.s() {
        return Err(WallError::Length { expected: cfg.s(), found: a.len() });
    }
    let l = Q::from_integer(ell.into());
    Ok(a.iter()
        .zip(cfg.chi())
        .map(|(x, &c)| x * &l + Q::from_integer(c.into()))
        .collect())
}

/// Weights of `λ(ℓH)^{d_0} ⊗ λ(ℓH_0)^{−d}`: `d_0 w(a) − d w(d)`.
pub fn combined_weight_vector(cfg: &CurveConfig, a: &DegreeVector, ell: i64) -> Result<Vec<Q>, WallError> {
    let d0 = Q::from_integer(cfg.total_h0deg().into());
    let d = a
        .0
        .iter()
        .zip(cfg.mult().0)
        .fold(Q::zero(), |acc, (x, n)| acc + x * Q::from_integer(n.into()));
    let wa = det_weight_vector(cfg, &a.0, ell)?;
    let wh = det_weight_vector(cfg, &cfg.h0deg_vector().0, ell)?;
    Ok(wa.iter().zip(&wh).map(|(x, y)| &d0 * x - &d * y).collect())
}

/// Restriction of the determinant character to the stabilizer of a point
/// of type `τ`: the weight on `GL(U_j)` is `Σ_l β^(j)_l w_l`, which must
/// equal `(Δ_j·H) ℓ + χ(E_j)`.
pub fn restrict_weights_to_type(
    cfg: &CurveConfig,
    a: &[Q],
    ell: i64,
    tau: &Decomposition,
) -> Result<Vec<Q>, WallError> {
    let n = cfg.mult();
    let total = tau.total();
    if total != n {
        return Err(WallError::DecompositionMismatch { expected: n, found: total });
    }
    let weights = det_weight_vector(cfg, a, ell)?;
    let l = Q::from_integer(ell.into());
    let mut out = Vec::with_capacity(tau.parts.len());
    for part in &tau.parts {
        let block = part
            .beta
            .0
            .iter()
            .zip(&weights)
            .fold(Q::zero(), |acc, (&b, w)| acc + w * Q::from_integer(b.into()));
        let v = cfg.vector_of_beta(&part.beta)?.vector;
        let degree = v
            .div
            .iter()
            .zip(a)
            .fold(Q::zero(), |acc, (&c, x)| acc + x * Q::from_integer(c.into()));
        let expected = degree * &l + Q::from_integer(v.euler.into());
        if block != expected {
            return Err(WallError::Consistency(format!(
                "block weight {} != {} for part {}",
                fmt_q(&block),
                fmt_q(&expected),
                part.beta
            )));
        }
        out.push(block);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmpleChamber {
    /// Signs of each ample wall form at the point.
    pub signature: Vec<i8>,
    pub point: DegreeVector,
}

/// Chambers of the ample arrangement whose closure contains `H_0`, each
/// with a positive interior point on the slice.
pub fn adjacent_ample_chambers(cfg: &CurveConfig, walls: &[AmpleWall]) -> Vec<AmpleChamber> {
    let s = cfg.s();
    if s < 2 {
        return Vec::new();
    }
    let forms: Vec<Vec<Q>> = walls.iter().map(|w| w.coeffs.clone()).collect();
    let slice: Vec<Q> = cfg.mult().0.iter().map(|&x| Q::from_integer(x.into())).collect();
    let h0 = cfg.h0deg_vector();
    let cells = if forms.is_empty() {
        // A single chamber; step along the first basis direction of n⊥.
        vec![(Vec::new(), orthogonal_basis(&cfg.mult()).swap_remove(0))]
    } else {
        central_cells(&forms, &[slice], s)
    };
    cells
        .into_iter()
        .map(|(signature, t)| {
            let max = t.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero);
            let dmin = h0.0.iter().min().cloned().unwrap_or_else(Q::one);
            let lambda = if max.is_zero() { Q::zero() } else { dmin / (max * Q::from_integer(BigInt::from(2))) };
            let point = DegreeVector(h0.0.iter().zip(&t).map(|(d, ti)| d + &lambda * ti).collect());
            AmpleChamber { signature, point }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallSampleCheck {
    pub beta: DimVector,
    pub sources: Vec<DimVector>,
    #[serde(with = "serde_q_vec_vec")]
    pub vertices: Vec<Vec<Q>>,
    #[serde(with = "serde_q_vec_vec")]
    pub samples: Vec<Vec<Q>>,
    /// `Ξ(a)·β = 0` held exactly at every sample, for every source.
    pub all_vanish: bool,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberImage {
    pub ample: AmpleChamber,
    pub theta: ThetaVector,
    /// Signs of `θ·β` against the image walls `W_β`.
    pub image_signature: Vec<i8>,
    pub genericity: Genericity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub seed: u64,
    pub walls: Vec<WallSampleCheck>,
    pub adjacent_chambers: Vec<ChamberImage>,
    /// Different ample chambers land in different quiver chambers.
    pub distinct_images: bool,
}

/// Vertices of `{a ≥ 0, Σ n_i a_i = d_0, wall(a) = 0}` by scanning basic
/// solutions with at most two nonzero coordinates.
pub fn wall_slice_vertices(cfg: &CurveConfig, wall: &AmpleWall) -> Vec<Vec<Q>> {
    let s = cfg.s();
    let n: Vec<Q> = cfg.mult().0.iter().map(|&x| Q::from_integer(x.into())).collect();
    let d0 = Q::from_integer(cfg.total_h0deg().into());
    let rhs = -wall.constant.clone();
    let mut out: Vec<Vec<Q>> = Vec::new();
    let mut push = |v: Vec<Q>| {
        if v.iter().all(|x| !x.is_negative()) && !out.contains(&v) {
            out.push(v);
        }
    };
    for i in 0..s {
        let ai = &d0 / &n[i];
        if &wall.coeffs[i] * &ai == rhs {
            let mut v = vec![Q::zero(); s];
            v[i] = ai;
            push(v);
        }
    }
    for i in 0..s {
        for j in (i + 1)..s {
            let det = &n[i] * &wall.coeffs[j] - &n[j] * &wall.coeffs[i];
            if det.is_zero() {
                continue;
            }
            let ai = (&d0 * &wall.coeffs[j] - &n[j] * &rhs) / &det;
            let aj = (&n[i] * &rhs - &wall.coeffs[i] * &d0) / &det;
            let mut v = vec![Q::zero(); s];
            v[i] = ai;
            v[j] = aj;
            push(v);
        }
    }
    out.sort();
    out
}

pub fn verify_correspondence(
    cfg: &CurveConfig,
    samples_per_wall: usize,
    seed: u64,
) -> Result<CorrespondenceReport, WallError> {
    let q = Quiver::from_config(cfg)?;
    let n = cfg.mult();
    let walls = ample_walls_through_h0(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::with_capacity(walls.len());
    for wall in &walls {
        let vertices = wall_slice_vertices(cfg, wall);
        let mut samples = Vec::with_capacity(samples_per_wall);
        let mut skipped = None;
        for _ in 0..samples_per_wall.max(1) {
            let weights: Vec<Q> =
                vertices.iter().map(|_| Q::from_integer(rng.gen_range(1..=16).into())).collect();
            let total = weights.iter().fold(Q::zero(), |acc, w| acc + w);
            let mut a = vec![Q::zero(); cfg.s()];
            for (v, w) in vertices.iter().zip(&weights) {
                for (x, vi) in a.iter_mut().zip(v) {
                    *x += w * vi / &total;
                }
            }
            if vertices.is_empty() || a.iter().any(|x| !x.is_positive()) {
                skipped = Some("empty positive region on the wall".to_string());
                samples.clear();
                break;
            }
            samples.push(a);
        }
        let mut all_vanish = true;
        for a in &samples {
            if !wall.eval(a).is_zero() {
                return Err(WallError::Consistency(format!("sample off wall {}", wall.beta)));
            }
            let theta = xi_map(cfg, a)?;
            for b in &wall.sources {
                if !theta.pair(b).is_zero() {
                    all_vanish = false;
                }
            }
        }
        if !all_vanish {
            return Err(WallError::Consistency(format!("Ξ does not carry wall {} into W_β", wall.beta)));
        }
        if samples_per_wall == 0 {
            samples.clear();
        }
        checks.push(WallSampleCheck {
            beta: wall.beta.clone(),
            sources: wall.sources.clone(),
            vertices,
            samples,
            all_vanish,
            skipped,
        });
    }

    let image_walls: Vec<DimVector> = walls.iter().map(|w| w.beta.clone()).collect();
    let chi_sign = if cfg.total_chi() > 0 { 1 } else { -1 };
    let mut images = Vec::new();
    if q.s() >= 2 {
        for chamber in adjacent_ample_chambers(cfg, &walls) {
            let theta = character_general(cfg, &chamber.point)?;
            let image_signature = theta.signature(&image_walls);
            if image_signature.iter().any(|&x| x == 0) {
                return Err(WallError::Consistency("adjacent chamber maps onto a wall".into()));
            }
            let expected: Vec<i8> = chamber.signature.iter().map(|&x| x * chi_sign).collect();
            if image_signature != expected {
                return Err(WallError::Consistency("chamber signature not preserved".into()));
            }
            let genericity = is_generic(&theta, &q, &n)?;
            images.push(ChamberImage { ample: chamber, theta, image_signature, genericity });
        }
    }
    let mut sigs: Vec<&Vec<i8>> = images.iter().map(|c| &c.image_signature).collect();
    sigs.sort();
    sigs.dedup();
    let distinct_images = sigs.len() == images.len();
    Ok(CorrespondenceReport { seed, walls: checks, adjacent_chambers: images, distinct_images })
}

/// Candidate `v`-wall from a bounded scan over sub-curves `Γ = Σ γ_i D_i`
/// with `0 < γ < n` and `|χ_Γ| ≤ bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateVWall {
    pub gamma: DimVector,
    pub chi_gamma: i64,
    /// Primitive normal `c` of the hyperplane `c·a = 0`.
    #[serde(with = "serde_q_vec")]
    pub normal: Vec<Q>,
    pub through_h0: bool,
}

/// Hyperplanes `χ (γ·a) = χ_Γ (n·a)` meeting the open positive cone, one
/// per distinct hyperplane.
pub fn bounded_v_wall_scan(cfg: &CurveConfig, bound: u32) -> Vec<CandidateVWall> {
    let n = cfg.mult();
    let chi = cfg.total_chi();
    let h0 = cfg.h0deg_vector();
    let mut seen: BTreeMap<Vec<Q>, CandidateVWall> = BTreeMap::new();
    for gamma in n.box_iter() {
        if gamma.is_zero() || gamma == n {
            continue;
        }
        for chi_gamma in -(bound as i64)..=(bound as i64) {
            let c: Vec<Q> = gamma
                .0
                .iter()
                .zip(&n.0)
                .map(|(&g, &ni)| Q::from_integer((chi * i64::from(g) - chi_gamma * i64::from(ni)).into()))
                .collect();
            let has_pos = c.iter().any(|x| x.is_positive());
            let has_neg = c.iter().any(|x| x.is_negative());
            if !(has_pos && has_neg) {
                continue;
            }
            let mut key = primitive_integer(&c);
            if key.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                key.iter_mut().for_each(|x| *x = -x.clone());
            }
            let through_h0 = dot(&key, &h0.0).is_zero();
            seen.entry(key.clone()).or_insert(CandidateVWall { gamma: gamma.clone(), chi_gamma, normal: key, through_h0 });
        }
    }
    seen.into_values().collect()
}
