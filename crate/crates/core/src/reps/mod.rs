//! Representations of the doubled quiver.
//!
//! Every arrow `e: s(e) → t(e)` of `Q` carries a forward matrix `x_e`
//! (`n_t × n_s`) and a backward matrix `y_e` (`n_s × n_t`). Scalars are
//! either exact rationals or double-precision complex numbers.

mod io;
mod solve;
mod stability;

pub use io::{parse_representation, representation_to_json, AnyRepresentation, RepIoError, REP_SCHEMA_VERSION};
pub use solve::{solve_from, solve_moment_zero, verify_ci_dim, CiDimReport, CiTrial, SolverOptions};
pub use stability::{
    check_stability, dual_destabilizer, slope_theta, DualWitness, StabilityBudget, StabilityVerdict,
};

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::linalg::{Field, Matrix, Span};
use crate::quiver::{DimVector, Quiver, QuiverError};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("expected {expected} arrow matrices, found {found}")]
    ArrowCount { expected: usize, found: usize },
    #[error("{kind} matrix of arrow {arrow} has shape {found:?}, expected {expected:?}")]
    Shape { arrow: usize, kind: &'static str, expected: (usize, usize), found: (usize, usize) },
    #[error("dimension vector has length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("representations live on different quivers")]
    QuiverMismatch,
    #[error("group element block {0} is singular")]
    SingularBlock(usize),
    #[error("theta·n = {0}, expected 0")]
    ThetaNotOrthogonal(String),
    #[error("slope of the zero dimension vector is undefined")]
    UndefinedSlope,
    #[error("solver did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation<F> {
    quiver: Quiver,
    n: DimVector,
    x: Vec<Matrix<F>>,
    y: Vec<Matrix<F>>,
}

fn offsets(n: &DimVector) -> Vec<usize> {
    let mut out = Vec::with_capacity(n.len());
    let mut acc = 0;
    for &ni in &n.0 {
        out.push(acc);
        acc += ni as usize;
    }
    out
}

impl<F: Field> Representation<F> {
    pub fn new(quiver: Quiver, n: DimVector, x: Vec<Matrix<F>>, y: Vec<Matrix<F>>) -> Result<Self, RepError> {
        if n.len() != quiver.s() {
            return Err(RepError::Length { expected: quiver.s(), found: n.len() });
        }
        let m = quiver.arrows().len();
        for v in [&x, &y] {
            if v.len() != m {
                return Err(RepError::ArrowCount { expected: m, found: v.len() });
            }
        }
        for (k, a) in quiver.arrows().iter().enumerate() {
            let (ns, nt) = (n.0[a.source] as usize, n.0[a.target] as usize);
            if x[k].shape() != (nt, ns) {
                return Err(RepError::Shape { arrow: k, kind: "forward", expected: (nt, ns), found: x[k].shape() });
            }
            if y[k].shape() != (ns, nt) {
                return Err(RepError::Shape { arrow: k, kind: "backward", expected: (ns, nt), found: y[k].shape() });
            }
        }
        Ok(Self { quiver, n, x, y })
    }

    pub fn zero(quiver: &Quiver, n: &DimVector) -> Result<Self, RepError> {
        let shapes: Vec<(usize, usize)> = quiver
            .arrows()
            .iter()
            .map(|a| (n.0.get(a.target).copied().unwrap_or(0) as usize, n.0.get(a.source).copied().unwrap_or(0) as usize))
            .collect();
        let x = shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect();
        let y = shapes.iter().map(|&(r, c)| Matrix::zeros(c, r)).collect();
        Self::new(quiver.clone(), n.clone(), x, y)
    }

    /// Entries drawn by `entry` in arrow order, forward matrix first.
    pub fn random_with(quiver: &Quiver, n: &DimVector, mut entry: impl FnMut() -> F) -> Result<Self, RepError> {
        let zero = Self::zero(quiver, n)?;
        let mut fill = |m: &Matrix<F>| {
            let (r, c) = m.shape();
            Matrix::from_row_major(r, c, (0..r * c).map(|_| entry()).collect())
        };
        let mut x = Vec::with_capacity(zero.x.len());
        let mut y = Vec::with_capacity(zero.y.len());
        for (a, b) in zero.x.iter().zip(&zero.y) {
            x.push(fill(a));
            y.push(fill(b));
        }
        Self::new(quiver.clone(), n.clone(), x, y)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn n(&self) -> &DimVector {
        &self.n
    }

    pub fn x(&self) -> &[Matrix<F>] {
        &self.x
    }

    pub fn y(&self) -> &[Matrix<F>] {
        &self.y
    }

    pub fn total_dim(&self) -> usize {
        self.n.total() as usize
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> Representation<G> {
        Representation {
            quiver: self.quiver.clone(),
            n: self.n.clone(),
            x: self.x.iter().map(|m| m.map(f)).collect(),
            y: self.y.iter().map(|m| m.map(f)).collect(),
        }
    }

    pub fn to_complex(&self) -> Representation<Complex64> {
        self.map(Field::to_complex)
    }

    /// `m_i = Σ_{t(e)=i} x_e y_e − Σ_{s(e)=i} y_e x_e`.
    pub fn moment_map(&self) -> Vec<Matrix<F>> {
        let mut m: Vec<Matrix<F>> = self.n.0.iter().map(|&k| Matrix::zeros(k as usize, k as usize)).collect();
        for (k, a) in self.quiver.arrows().iter().enumerate() {
            m[a.target] = &m[a.target] + &(&self.x[k] * &self.y[k]);
            m[a.source] = &m[a.source] - &(&self.y[k] * &self.x[k]);
        }
        m
    }

    /// `‖μ‖_F`.
    pub fn moment_residual(&self) -> f64 {
        self.moment_map().iter().map(Matrix::frobenius_sq).sum::<f64>().sqrt()
    }

    pub fn act(&self, g: &GroupElement<F>) -> Result<Self, RepError> {
        if g.blocks.len() != self.n.len() {
            return Err(RepError::Length { expected: self.n.len(), found: g.blocks.len() });
        }
        for (i, b) in g.blocks.iter().enumerate() {
            if b.shape() != (self.n.0[i] as usize, self.n.0[i] as usize) {
                return Err(RepError::Shape { arrow: i, kind: "group", expected: (self.n.0[i] as usize, self.n.0[i] as usize), found: b.shape() });
            }
        }
        let mut x = Vec::with_capacity(self.x.len());
        let mut y = Vec::with_capacity(self.y.len());
        for (k, a) in self.quiver.arrows().iter().enumerate() {
            x.push(&(&g.blocks[a.target] * &self.x[k]) * &g.inverses[a.source]);
            y.push(&(&g.blocks[a.source] * &self.y[k]) * &g.inverses[a.target]);
        }
        Self::new(self.quiver.clone(), self.n.clone(), x, y)
    }

    /// Number of scalar coordinates of `Rep(Q̄, n)`.
    pub fn coordinate_count(&self) -> usize {
        self.x.iter().chain(&self.y).map(|m| m.rows() * m.cols()).sum()
    }

    /// Coordinates in arrow order, forward entries then backward entries,
    /// each row-major.
    pub fn coordinates(&self) -> Vec<F> {
        let mut out = Vec::with_capacity(self.coordinate_count());
        for (a, b) in self.x.iter().zip(&self.y) {
            out.extend_from_slice(a.data());
            out.extend_from_slice(b.data());
        }
        out
    }

    pub fn with_coordinates(&self, z: &[F]) -> Self {
        assert_eq!(z.len(), self.coordinate_count());
        let mut pos = 0;
        let mut take = |m: &Matrix<F>| {
            let len = m.rows() * m.cols();
            let out = Matrix::from_row_major(m.rows(), m.cols(), z[pos..pos + len].to_vec());
            pos += len;
            out
        };
        let mut x = Vec::with_capacity(self.x.len());
        let mut y = Vec::with_capacity(self.y.len());
        for (a, b) in self.x.iter().zip(&self.y) {
            x.push(take(a));
            y.push(take(b));
        }
        Self { quiver: self.quiver.clone(), n: self.n.clone(), x, y }
    }

    /// Matrix of `(δx, δy) ↦ Σ [δx, y] + [x, δy]` in the coordinates of
    /// [`Self::coordinates`]; rows are the blocks of `μ`, row-major.
    pub fn moment_differential(&self) -> Matrix<F> {
        let block_off: Vec<usize> = {
            let mut acc = 0;
            self.n
                .0
                .iter()
                .map(|&k| {
                    let o = acc;
                    acc += (k * k) as usize;
                    o
                })
                .collect()
        };
        let nrows = self.n.square_norm() as usize;
        let ncols = self.coordinate_count();
        let mut d = Matrix::zeros(nrows, ncols);
        let mut col = 0;
        let put = |d: &mut Matrix<F>, col: usize, v: usize, m: &Matrix<F>, sgn: bool| {
            let k = self.n.0[v] as usize;
            for i in 0..k {
                for j in 0..k {
                    let r = block_off[v] + i * k + j;
                    d[(r, col)] = if sgn {
                        d[(r, col)].clone() + m[(i, j)].clone()
                    } else {
                        d[(r, col)].clone() - m[(i, j)].clone()
                    };
                }
            }
        };
        for (e, a) in self.quiver.arrows().iter().enumerate() {
            let (x, y) = (&self.x[e], &self.y[e]);
            for (forward, shape) in [(true, x.shape()), (false, y.shape())] {
                for p in 0..shape.0 {
                    for q in 0..shape.1 {
                        let mut unit = Matrix::zeros(shape.0, shape.1);
                        unit[(p, q)] = F::one();
                        let (at_t, at_s) = if forward {
                            (&unit * y, y * &unit)
                        } else {
                            (x * &unit, &unit * x)
                        };
                        put(&mut d, col, a.target, &at_t, true);
                        put(&mut d, col, a.source, &at_s, false);
                        col += 1;
                    }
                }
            }
        }
        d
    }

    /// Arrow operators of `Q̄` on the total space `⊕ V_i`, forward then
    /// backward for each arrow.
    pub fn total_operators(&self) -> Vec<Matrix<F>> {
        let off = offsets(&self.n);
        let big = self.total_dim();
        let mut out = Vec::with_capacity(2 * self.x.len());
        for (k, a) in self.quiver.arrows().iter().enumerate() {
            for (m, row0, col0) in [(&self.x[k], off[a.target], off[a.source]), (&self.y[k], off[a.source], off[a.target])] {
                let mut t = Matrix::zeros(big, big);
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        t[(row0 + i, col0 + j)] = m[(i, j)].clone();
                    }
                }
                out.push(t);
            }
        }
        out
    }

    /// Burnside test: the algebra generated by the vertex idempotents and
    /// all arrow operators is the full matrix algebra of the total space.
    pub fn is_simple(&self, tol: f64) -> bool {
        let big = self.total_dim();
        if big == 0 {
            return false;
        }
        let off = offsets(&self.n);
        let mut gens = Vec::new();
        for (i, &ni) in self.n.0.iter().enumerate() {
            if ni == 0 {
                continue;
            }
            let mut e = Matrix::zeros(big, big);
            for k in 0..ni as usize {
                e[(off[i] + k, off[i] + k)] = F::one();
            }
            gens.push(e);
        }
        gens.extend(self.total_operators().into_iter().filter(|m| !m.is_zero_within(tol)));
        let mut span = Span::new(big * big, tol);
        let mut queue: Vec<Matrix<F>> = Vec::new();
        for g in &gens {
            if span.insert(g.data().to_vec()) {
                queue.push(g.clone());
            }
        }
        while let Some(a) = queue.pop() {
            if span.is_full() {
                break;
            }
            for g in &gens {
                let mut p = g * &a;
                if !F::EXACT {
                    let norm = p.frobenius_sq().sqrt();
                    if norm <= tol {
                        continue;
                    }
                    p = p.map(|z| z.to_complex() / norm).map(|z| F::from_complex_approx(*z).expect("float field"));
                }
                if span.insert(p.data().to_vec()) {
                    queue.push(p);
                }
            }
        }
        span.is_full()
    }

    /// Smallest subrepresentation containing `vector ∈ V_vertex`.
    pub fn cyclic_subrep(&self, vertex: usize, vector: &[F], tol: f64) -> GradedSubspace<F> {
        let mut spans: Vec<Span<F>> = self.n.0.iter().map(|&k| Span::new(k as usize, tol)).collect();
        let mut queue = Vec::new();
        if spans[vertex].insert(vector.to_vec()) {
            queue.push((vertex, vector.to_vec()));
        }
        while let Some((i, v)) = queue.pop() {
            for (k, a) in self.quiver.arrows().iter().enumerate() {
                if a.source == i {
                    let w = self.x[k].mul_vec(&v);
                    if spans[a.target].insert(w.clone()) {
                        queue.push((a.target, w));
                    }
                }
                if a.target == i {
                    let w = self.y[k].mul_vec(&v);
                    if spans[a.source].insert(w.clone()) {
                        queue.push((a.source, w));
                    }
                }
            }
        }
        GradedSubspace::from_spans(self.n.clone(), &spans)
    }

    /// Whether `sub` is preserved by every arrow of `Q̄`.
    pub fn is_invariant(&self, sub: &GradedSubspace<F>, tol: f64) -> bool {
        let spans = sub.spans(tol);
        for (k, a) in self.quiver.arrows().iter().enumerate() {
            for v in &sub.bases[a.source] {
                if !spans[a.target].contains(&self.x[k].mul_vec(v)) {
                    return false;
                }
            }
            for v in &sub.bases[a.target] {
                if !spans[a.source].contains(&self.y[k].mul_vec(v)) {
                    return false;
                }
            }
        }
        true
    }

    /// Blockwise direct sum.
    pub fn direct_sum(reps: &[Self]) -> Result<Self, RepError> {
        let first = reps.first().ok_or(RepError::Length { expected: 1, found: 0 })?;
        if reps.iter().any(|r| r.quiver != first.quiver) {
            return Err(RepError::QuiverMismatch);
        }
        let n = reps.iter().skip(1).fold(first.n.clone(), |acc, r| acc.add(&r.n));
        let blockdiag = |ms: Vec<&Matrix<F>>| {
            let rows = ms.iter().map(|m| m.rows()).sum();
            let cols = ms.iter().map(|m| m.cols()).sum();
            let mut out = Matrix::zeros(rows, cols);
            let (mut r0, mut c0) = (0, 0);
            for m in ms {
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        out[(r0 + i, c0 + j)] = m[(i, j)].clone();
                    }
                }
                r0 += m.rows();
                c0 += m.cols();
            }
            out
        };
        let m = first.x.len();
        let x = (0..m).map(|k| blockdiag(reps.iter().map(|r| &r.x[k]).collect())).collect();
        let y = (0..m).map(|k| blockdiag(reps.iter().map(|r| &r.y[k]).collect())).collect();
        Self::new(first.quiver.clone(), n, x, y)
    }

    /// Dual representation: `x'_e = y_eᵀ`, `y'_e = x_eᵀ`.
    pub fn dual(&self) -> Self {
        Self {
            quiver: self.quiver.clone(),
            n: self.n.clone(),
            x: self.y.iter().map(Matrix::transpose).collect(),
            y: self.x.iter().map(Matrix::transpose).collect(),
        }
    }
}

impl Representation<Q> {
    /// Random integer entries in `[-bound, bound]`.
    pub fn random_rational<R: Rng>(quiver: &Quiver, n: &DimVector, rng: &mut R, bound: i64) -> Result<Self, RepError> {
        Self::random_with(quiver, n, || Q::from_integer(rng.gen_range(-bound..=bound).into()))
    }
}

impl Representation<Complex64> {
    /// Entries with real and imaginary parts uniform in `[-1, 1]`.
    pub fn random_complex<R: Rng>(quiver: &Quiver, n: &DimVector, rng: &mut R) -> Result<Self, RepError> {
        Self::random_with(quiver, n, || Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
    }
}

/// Element of `G(n) = ∏ GL(n_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<F> {
    blocks: Vec<Matrix<F>>,
    inverses: Vec<Matrix<F>>,
}

impl<F: Field> GroupElement<F> {
    pub fn new(blocks: Vec<Matrix<F>>, tol: f64) -> Result<Self, RepError> {
        let inverses = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| b.inverse(tol).ok_or(RepError::SingularBlock(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { blocks, inverses })
    }

    /// Central element `(c·I, …, c·I)`.
    pub fn scalar(n: &DimVector, c: F) -> Result<Self, RepError> {
        Self::new(n.0.iter().map(|&k| Matrix::scalar(k as usize, c.clone())).collect(), 0.0)
    }

    pub fn blocks(&self) -> &[Matrix<F>] {
        &self.blocks
    }

    /// `g_i m_i g_i⁻¹` blockwise.
    pub fn conjugate(&self, m: &[Matrix<F>]) -> Vec<Matrix<F>> {
        m.iter()
            .zip(self.blocks.iter().zip(&self.inverses))
            .map(|(mi, (g, gi))| &(g * mi) * gi)
            .collect()
    }
}

/// Graded subspace `W = ⊕ W_i ⊆ ⊕ V_i`, one basis per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedSubspace<F> {
    pub n: DimVector,
    pub bases: Vec<Vec<Vec<F>>>,
}

impl<F: Field> GradedSubspace<F> {
    pub fn from_spans(n: DimVector, spans: &[Span<F>]) -> Self {
        Self { n, bases: spans.iter().map(Span::basis).collect() }
    }

    /// Spans rebuilt from the stored bases.
    pub fn spans(&self, tol: f64) -> Vec<Span<F>> {
        self.bases
            .iter()
            .zip(&self.n.0)
            .map(|(b, &k)| {
                let mut s = Span::new(k as usize, tol);
                for v in b {
                    s.insert(v.clone());
                }
                s
            })
            .collect()
    }

    pub fn dim_vector(&self) -> DimVector {
        DimVector(self.bases.iter().map(|b| b.len() as u32).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.bases.iter().all(Vec::is_empty)
    }

    pub fn is_proper_nonzero(&self) -> bool {
        !self.is_zero() && self.dim_vector() != self.n
    }

    /// `W + W'` as a graded subspace.
    pub fn sum(&self, other: &Self, tol: f64) -> Self {
        let mut spans = self.spans(tol);
        for (s, b) in spans.iter_mut().zip(&other.bases) {
            for v in b {
                s.insert(v.clone());
            }
        }
        Self::from_spans(self.n.clone(), &spans)
    }

    /// Mutual containment.
    pub fn same_as(&self, other: &Self, tol: f64) -> bool {
        if self.dim_vector() != other.dim_vector() {
            return false;
        }
        let spans = self.spans(tol);
        spans.iter().zip(&other.bases).all(|(s, b)| b.iter().all(|v| s.contains(v)))
    }

    /// Annihilator `W^⊥ ⊆ ⊕ V_i^*` under the bilinear pairing; it has
    /// dimension vector `n − dim W`.
    pub fn annihilator(&self, tol: f64) -> Self {
        let bases = self
            .bases
            .iter()
            .zip(&self.n.0)
            .map(|(b, &k)| {
                let k = k as usize;
                if b.is_empty() {
                    (0..k)
                        .map(|i| (0..k).map(|j| if i == j { F::one() } else { F::zero() }).collect())
                        .collect()
                } else {
                    Matrix::from_rows(b.clone()).null_space(tol)
                }
            })
            .collect();
        Self { n: self.n.clone(), bases }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_vec};
    use num_traits::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn affine_a1() -> Quiver {
        Quiver::new(vec![0, 0], vec![vec![0, 2], vec![2, 0]]).unwrap()
    }

    fn col(v: &[i64]) -> Matrix<Q> {
        Matrix::from_row_major(v.len(), 1, q_vec(v))
    }

    fn row(v: &[i64]) -> Matrix<Q> {
        Matrix::from_row_major(1, v.len(), q_vec(v))
    }

    /// Affine A₁, n = (1,1), arrows given as scalars.
    pub(crate) fn a1_rep(x: [i64; 2], y: [i64; 2]) -> Representation<Q> {
        Representation::new(
            affine_a1(),
            DimVector(vec![1, 1]),
            x.iter().map(|&v| col(&[v])).collect(),
            y.iter().map(|&v| row(&[v])).collect(),
        )
        .unwrap()
    }

    #[test]
    fn shapes_are_checked() {
        let q = affine_a1();
        let bad = Representation::new(q.clone(), DimVector(vec![1, 2]), vec![col(&[1]), col(&[1])], vec![row(&[1]), row(&[1])]);
        assert!(matches!(bad, Err(RepError::Shape { arrow: 0, .. })));
        let bad = Representation::<Q>::new(q, DimVector(vec![1, 1]), vec![], vec![]);
        assert!(matches!(bad, Err(RepError::ArrowCount { .. })));
    }

    #[test]
    fn moment_map_examples() {
        let r = a1_rep([2, 3], [5, 7]);
        let m = r.moment_map();
        assert_eq!(m[0][(0, 0)], q(-(5 * 2 + 7 * 3)));
        assert_eq!(m[1][(0, 0)], q(2 * 5 + 3 * 7));
        let loop1 = Quiver::new(vec![1], vec![vec![0]]).unwrap();
        let r = Representation::new(loop1, DimVector(vec![1]), vec![col(&[4])], vec![row(&[9])]).unwrap();
        assert!(r.moment_map()[0][(0, 0)].is_zero());
        let r = a1_rep([2, 3], [0, 0]);
        assert!(r.moment_map().iter().all(|b| b.is_zero_within(0.0)));
    }

    #[test]
    fn differential_examples() {
        assert_eq!(a1_rep([0, 0], [0, 0]).moment_differential().rank(0.0), 0);
        let r = a1_rep([1, 0], [0, 0]);
        assert!(r.moment_residual() == 0.0);
        assert_eq!(r.moment_differential().rank(0.0), 1);
        let d = a1_rep([1, 2], [3, 4]).moment_differential();
        assert_eq!(d.shape(), (2, 4));
    }

    #[test]
    fn group_action() {
        let r = a1_rep([2, 3], [5, 7]);
        let g = GroupElement::new(vec![Matrix::scalar(1, q(2)), Matrix::scalar(1, q(3))], 0.0).unwrap();
        let gr = r.act(&g).unwrap();
        assert_eq!(gr.x()[0][(0, 0)], q(3));
        assert_eq!(gr.moment_map(), g.conjugate(&r.moment_map()));
        let c = GroupElement::scalar(r.n(), q(7)).unwrap();
        assert_eq!(r.act(&c).unwrap(), r);
        assert!(matches!(
            GroupElement::new(vec![Matrix::scalar(1, q(0))], 0.0),
            Err(RepError::SingularBlock(0))
        ));
    }

    #[test]
    fn simplicity() {
        assert!(a1_rep([1, 0], [0, 1]).is_simple(0.0));
        assert!(!a1_rep([1, 1], [0, 0]).is_simple(0.0));
        let s = a1_rep([1, 0], [0, 1]);
        assert!(!Representation::direct_sum(&[s.clone(), s.clone()]).unwrap().is_simple(0.0));
        assert!(s.to_complex().is_simple(1e-9));
    }

    #[test]
    fn cyclic_subreps() {
        let r = a1_rep([1, 0], [0, 0]);
        let w = r.cyclic_subrep(1, &q_vec(&[1]), 0.0);
        assert_eq!(w.dim_vector(), DimVector(vec![0, 1]));
        assert!(r.is_invariant(&w, 0.0));
        assert_eq!(r.cyclic_subrep(0, &q_vec(&[1]), 0.0).dim_vector(), DimVector(vec![1, 1]));
        assert!(r.cyclic_subrep(0, &q_vec(&[0]), 0.0).is_zero());
        let s = a1_rep([1, 0], [0, 1]);
        assert_eq!(s.cyclic_subrep(1, &q_vec(&[3]), 0.0).dim_vector(), DimVector(vec![1, 1]));
    }

    #[test]
    fn duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = Quiver::new(vec![1, 0], vec![vec![0, 1], vec![1, 0]]).unwrap();
        let r = Representation::random_rational(&q, &DimVector(vec![2, 1]), &mut rng, 3).unwrap();
        assert_eq!(r.dual().dual(), r);
        let mt: Vec<Matrix<Q>> = r.moment_map().iter().map(Matrix::transpose).collect();
        assert_eq!(r.dual().moment_map(), mt);
        let u = a1_rep([1, 0], [0, 0]);
        let w = u.cyclic_subrep(1, &q_vec(&[1]), 0.0);
        let ann = w.annihilator(0.0);
        assert_eq!(ann.dim_vector(), DimVector(vec![1, 0]));
        assert!(u.dual().is_invariant(&ann, 0.0));
    }

    #[test]
    fn direct_sum_blocks() {
        let a = a1_rep([1, 2], [3, 4]);
        let b = a1_rep([5, 6], [7, 8]);
        let s = Representation::direct_sum(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(s.n(), &DimVector(vec![2, 2]));
        let m = s.moment_map();
        assert_eq!(m[0][(0, 0)], a.moment_map()[0][(0, 0)]);
        assert_eq!(m[0][(1, 1)], b.moment_map()[0][(0, 0)]);
        assert!(m[0][(0, 1)].is_zero());
    }
}
