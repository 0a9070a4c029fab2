//! The quiver attached to a polystable sheaf, its Cartan data, positive
//! roots bounded by a dimension vector and root decompositions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::CurveConfig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("self-intersection {value} of curve {i} is odd")]
    OddSelfIntersection { i: usize, value: i64 },
    #[error("self-intersection {value} of curve {i} is below -2")]
    SelfIntersectionBelowMinusTwo { i: usize, value: i64 },
    #[error("edge matrix is not symmetric with zero diagonal")]
    BadEdgeMatrix,
    #[error("quiver has no vertices")]
    Empty,
    #[error("dimension vector has length {found}, quiver has {expected} vertices")]
    Length { expected: usize, found: usize },
}

/// Non-negative integer vector indexed by the vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn zeros(s: usize) -> Self {
        Self(vec![0; s])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    /// `Σ n_i²`, the dimension of `gl(n)`.
    pub fn square_norm(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x) * u64::from(x)).sum()
    }

    pub fn le(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise difference; `None` unless `other ≤ self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if !other.le(self) {
            return None;
        }
        Some(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u32) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&x| i64::from(x)).collect()
    }

    /// All vectors `0 ≤ β ≤ self` in lexicographic order.
    pub fn box_iter(&self) -> impl Iterator<Item = DimVector> + '_ {
        let total: u64 = self.0.iter().map(|&x| u64::from(x) + 1).product();
        (0..total).map(move |mut idx| {
            let mut out = vec![0u32; self.0.len()];
            for i in (0..self.0.len()).rev() {
                let base = u64::from(self.0[i]) + 1;
                out[i] = (idx % base) as u32;
                idx /= base;
            }
            DimVector(out)
        })
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for DimVector {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// One arrow of `Q`; its reverse in the doubled quiver is implicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub index: u32,
}

impl Arrow {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawQuiver")]
pub struct Quiver {
    loops: Vec<u32>,
    edges: Vec<Vec<u32>>,
    #[serde(skip_serializing)]
    arrows: Vec<Arrow>,
}

#[derive(Deserialize)]
struct RawQuiver {
    loops: Vec<u32>,
    edges: Vec<Vec<u32>>,
}

impl TryFrom<RawQuiver> for Quiver {
    type Error = QuiverError;
    fn try_from(r: RawQuiver) -> Result<Self, Self::Error> {
        Quiver::new(r.loops, r.edges)
    }
}

impl Quiver {
    /// Builds the quiver with `loops[i]` loops at vertex `i` and
    /// `edges[i][j]` undirected edges between `i` and `j`. Edges are
    /// oriented from the smaller to the larger vertex.
    pub fn new(loops: Vec<u32>, edges: Vec<Vec<u32>>) -> Result<Self, QuiverError> {
        let s = loops.len();
        if s == 0 {
            return Err(QuiverError::Empty);
        }
        if edges.len() != s || edges.iter().any(|r| r.len() != s) {
            return Err(QuiverError::BadEdgeMatrix);
        }
        for i in 0..s {
            if edges[i][i] != 0 {
                return Err(QuiverError::BadEdgeMatrix);
            }
            for j in 0..s {
                if edges[i][j] != edges[j][i] {
                    return Err(QuiverError::BadEdgeMatrix);
                }
            }
        }
        let mut arrows = Vec::new();
        for i in 0..s {
            for k in 0..loops[i] {
                arrows.push(Arrow { source: i, target: i, index: k });
            }
            for j in (i + 1)..s {
                for k in 0..edges[i][j] {
                    arrows.push(Arrow { source: i, target: j, index: k });
                }
            }
        }
        Ok(Self { loops, edges, arrows })
    }

    /// Vertex per curve, `D_i²/2 + 1` loops at vertex `i` and `D_i·D_j`
    /// edges between `i` and `j`.
    pub fn from_config(cfg: &CurveConfig) -> Result<Self, QuiverError> {
        let g = cfg.gram();
        let s = cfg.s();
        let mut loops = Vec::with_capacity(s);
        for (i, row) in g.iter().enumerate() {
            let v = row[i];
            if v % 2 != 0 {
                return Err(QuiverError::OddSelfIntersection { i, value: v });
            }
            if v < -2 {
                return Err(QuiverError::SelfIntersectionBelowMinusTwo { i, value: v });
            }
            loops.push((v / 2 + 1) as u32);
        }
        let edges = (0..s)
            .map(|i| (0..s).map(|j| if i == j { 0 } else { g[i][j] as u32 }).collect())
            .collect();
        Self::new(loops, edges)
    }

    pub fn s(&self) -> usize {
        self.loops.len()
    }

    pub fn loops(&self) -> &[u32] {
        &self.loops
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    /// Fixed orientation: loops of vertex `i`, then edges `i → j` for `j > i`.
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let s = self.s();
        (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| {
                        if i == j {
                            2 - 2 * i64::from(self.loops[i])
                        } else {
                            -i64::from(self.edges[i][j])
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn check_len(&self, beta: &DimVector) -> Result<(), QuiverError> {
        if beta.len() != self.s() {
            return Err(QuiverError::Length { expected: self.s(), found: beta.len() });
        }
        Ok(())
    }

    /// `d(β) = βᵀ(−C)β`.
    pub fn d_form(&self, beta: &DimVector) -> i64 {
        let c = self.cartan();
        let b = beta.as_i64();
        let mut acc = 0;
        for i in 0..b.len() {
            for j in 0..b.len() {
                acc -= b[i] * c[i][j] * b[j];
            }
        }
        acc
    }

    /// `p(β) = d(β)/2 + 1`.
    pub fn p_of(&self, beta: &DimVector) -> i64 {
        self.d_form(beta) / 2 + 1
    }

    /// Connectivity of the full subgraph on `supp(β)`.
    pub fn support_connected(&self, beta: &DimVector) -> bool {
        let support: Vec<usize> = (0..beta.len()).filter(|&i| beta.0[i] > 0).collect();
        let Some(&start) = support.first() else {
            return false;
        };
        let mut seen = vec![false; self.s()];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in &support {
                if !seen[j] && self.edges[i][j] > 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        support.iter().all(|&i| seen[i])
    }

    /// `α ≠ 0`, connected support, and `d(α) ≥ −2`.
    pub fn is_positive_root(&self, alpha: &DimVector) -> bool {
        alpha.len() == self.s()
            && !alpha.is_zero()
            && self.support_connected(alpha)
            && self.d_form(alpha) >= -2
    }

    /// `R₊(n)`: positive roots `α ≤ n` other than `0` and `n`, in
    /// lexicographic order.
    pub fn bounded_roots(&self, n: &DimVector) -> Result<Vec<DimVector>, QuiverError> {
        self.check_len(n)?;
        Ok(n.box_iter().filter(|a| a != n && self.is_positive_root(a)).collect())
    }

    /// Every way of writing `n = Σ k_j β^(j)` with distinct positive roots
    /// `β^(j)` and `k_j > 0`. The trivial decomposition comes first, then
    /// by number of parts and lexicographic part order.
    pub fn decompositions(&self, n: &DimVector) -> Result<Vec<Decomposition>, QuiverError> {
        self.check_len(n)?;
        let roots: Vec<DimVector> = n.box_iter().filter(|a| self.is_positive_root(a)).collect();
        let mut out = Vec::new();
        let mut parts = Vec::new();
        decompose(&roots, 0, n.clone(), &mut parts, &mut out);
        let mut uniq: BTreeSet<Decomposition> = BTreeSet::new();
        for d in out {
            uniq.insert(d);
        }
        let mut v: Vec<Decomposition> = uniq.into_iter().collect();
        v.sort_by(|a, b| a.parts.len().cmp(&b.parts.len()).then_with(|| a.cmp(b)));
        Ok(v)
    }

    /// Existence criterion for simple representations in `μ⁻¹(0)`.
    pub fn cb_simple_exists(&self, n: &DimVector) -> Result<CbVerdict, QuiverError> {
        self.check_len(n)?;
        let p_n = self.p_of(n);
        if !self.is_positive_root(n) {
            return Ok(CbVerdict { exists: false, n_is_root: false, p_n, violations: Vec::new() });
        }
        let mut violations: Vec<CbViolation> = self
            .decompositions(n)?
            .into_iter()
            .filter(|d| !d.is_trivial())
            .filter_map(|d| {
                let sum: i64 = d.parts.iter().map(|p| i64::from(p.k) * self.p_of(&p.beta)).sum();
                (sum >= p_n).then(|| CbViolation { summands: d.expanded(), p_sum: sum, decomposition: d })
            })
            .collect();
        violations.sort_by(|a, b| b.p_sum.cmp(&a.p_sum).then_with(|| a.decomposition.cmp(&b.decomposition)));
        Ok(CbVerdict { exists: violations.is_empty(), n_is_root: true, p_n, violations })
    }

    /// `2p(n) + nᵀn − 1`.
    pub fn mu_zero_expected_dim(&self, n: &DimVector) -> i64 {
        2 * self.p_of(n) + n.square_norm() as i64 - 1
    }

    /// `dim Rep(Q̄, n) = 2 Σ_e n_{s(e)} n_{t(e)}`.
    pub fn rep_dim(&self, n: &DimVector) -> u64 {
        self.arrows
            .iter()
            .map(|a| 2 * u64::from(n.0[a.source]) * u64::from(n.0[a.target]))
            .sum()
    }

    /// Graphviz rendering; vertices labeled `i:L` with `L` the loop count.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("// schema_version 1\ngraph Q {\n");
        for i in 0..self.s() {
            out.push_str(&format!("  v{i} [label=\"{i}:{}\"];\n", self.loops[i]));
        }
        for a in &self.arrows {
            if a.is_loop() {
                out.push_str(&format!("  v{} -- v{} [style=dashed];\n", a.source, a.target));
            } else {
                out.push_str(&format!("  v{} -- v{};\n", a.source, a.target));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn decompose(
    roots: &[DimVector],
    start: usize,
    rest: DimVector,
    parts: &mut Vec<Part>,
    out: &mut Vec<Decomposition>,
) {
    if rest.is_zero() {
        out.push(Decomposition::new(parts.clone()));
        return;
    }
    for idx in start..roots.len() {
        let beta = &roots[idx];
        let mut remaining = rest.clone();
        let mut k = 0;
        while let Some(r) = remaining.checked_sub(beta) {
            k += 1;
            remaining = r;
            parts.push(Part { k, beta: beta.clone() });
            decompose(roots, idx + 1, remaining.clone(), parts, out);
            parts.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Part {
    pub k: u32,
    pub beta: DimVector,
}

/// Representation type `τ = (k_1, β^(1); …; k_r, β^(r))`, parts sorted by β.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Decomposition {
    pub parts: Vec<Part>,
}

impl Decomposition {
    pub fn new(mut parts: Vec<Part>) -> Self {
        parts.sort_by(|a, b| a.beta.cmp(&b.beta).then(a.k.cmp(&b.k)));
        Self { parts }
    }

    pub fn trivial(n: &DimVector) -> Self {
        Self { parts: vec![Part { k: 1, beta: n.clone() }] }
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.len() == 1 && self.parts[0].k == 1
    }

    pub fn total(&self) -> DimVector {
        let s = self.parts.first().map_or(0, |p| p.beta.len());
        self.parts
            .iter()
            .fold(DimVector::zeros(s), |acc, p| acc.add(&p.beta.scale(p.k)))
    }

    /// Plain sum with repetitions, `β^(j)` repeated `k_j` times.
    pub fn expanded(&self) -> Vec<DimVector> {
        self.parts
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.beta.clone(), p.k as usize))
            .collect()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if p.k != 1 {
                write!(f, "{}·", p.k)?;
            }
            write!(f, "{}", p.beta)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbViolation {
    pub decomposition: Decomposition,
    pub summands: Vec<DimVector>,
    pub p_sum: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbVerdict {
    pub exists: bool,
    pub n_is_root: bool,
    pub p_n: i64,
    /// Sorted by decreasing `Σ p(β^(i))`.
    pub violations: Vec<CbViolation>,
}

impl CbVerdict {
    /// The most violating decomposition.
    pub fn witness(&self) -> Option<&CbViolation> {
        self.violations.first()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector(v.to_vec())
    }

    fn from_gram(g: Vec<Vec<i64>>) -> Quiver {
        let s = g.len();
        let cfg = CurveConfig::new(g, vec![1; s], vec![1; s], vec![1; s]).unwrap();
        Quiver::from_config(&cfg).unwrap()
    }

    fn elliptic_pair() -> Quiver {
        from_gram(vec![vec![0, 2], vec![2, 0]])
    }

    fn affine_a1() -> Quiver {
        from_gram(vec![vec![-2, 2], vec![2, -2]])
    }

    #[test]
    fn quivers_from_configs() {
        let q = elliptic_pair();
        assert_eq!(q.loops(), &[1, 1]);
        assert_eq!(q.edges()[0][1], 2);
        assert_eq!(q.cartan(), vec![vec![0, -2], vec![-2, 0]]);
        let q = affine_a1();
        assert_eq!(q.loops(), &[0, 0]);
        assert_eq!(q.cartan(), vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(q.arrows().len(), 2);
        let q = from_gram(vec![vec![2]]);
        assert_eq!(q.loops(), &[2]);
        assert_eq!(q.cartan(), vec![vec![-2]]);
    }

    #[test]
    fn orientation_is_lexicographic() {
        let q = Quiver::new(vec![1, 0, 0], vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]]).unwrap();
        let pairs: Vec<(usize, usize)> = q.arrows().iter().map(|a| (a.source, a.target)).collect();
        assert_eq!(pairs, vec![(0, 0), (0, 1), (0, 2), (0, 2)]);
        assert!(Quiver::new(vec![0, 0], vec![vec![0, 1], vec![0, 0]]).is_err());
    }

    #[test]
    fn quadratic_form() {
        assert_eq!(elliptic_pair().d_form(&dv(&[1, 1])), 4);
        assert_eq!(affine_a1().d_form(&dv(&[1, 1])), 0);
        assert_eq!(affine_a1().d_form(&dv(&[0, 0])), 0);
        assert_eq!(elliptic_pair().p_of(&dv(&[1, 1])), 3);
        assert_eq!(affine_a1().p_of(&dv(&[1, 0])), 0);
        assert_eq!(affine_a1().p_of(&dv(&[0, 0])), 1);
    }

    #[test]
    fn roots() {
        let q = affine_a1();
        assert!(q.is_positive_root(&dv(&[1, 0])));
        assert!(!q.is_positive_root(&dv(&[0, 0])));
        assert!(!q.is_positive_root(&dv(&[2, 0])));
        let disjoint = Quiver::new(vec![1, 1], vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert!(!disjoint.is_positive_root(&dv(&[1, 1])));
        assert_eq!(q.bounded_roots(&dv(&[1, 1])).unwrap(), vec![dv(&[0, 1]), dv(&[1, 0])]);
        assert_eq!(elliptic_pair().bounded_roots(&dv(&[1, 1])).unwrap(), vec![dv(&[0, 1]), dv(&[1, 0])]);
        assert!(q.bounded_roots(&dv(&[1, 0])).unwrap().is_empty());
        assert!(q.bounded_roots(&dv(&[1])).is_err());
    }

    #[test]
    fn decompositions_of_small_vectors() {
        let q = affine_a1();
        let ds = q.decompositions(&dv(&[1, 1])).unwrap();
        assert_eq!(ds.len(), 2);
        assert!(ds[0].is_trivial());
        assert_eq!(ds[1].expanded(), vec![dv(&[0, 1]), dv(&[1, 0])]);

        let og = from_gram(vec![vec![2]]);
        let ds = og.decompositions(&dv(&[2])).unwrap();
        assert_eq!(
            ds,
            vec![
                Decomposition::trivial(&dv(&[2])),
                Decomposition::new(vec![Part { k: 2, beta: dv(&[1]) }])
            ]
        );
        let ds = q.decompositions(&dv(&[1, 0])).unwrap();
        assert_eq!(ds, vec![Decomposition::trivial(&dv(&[1, 0]))]);
        for d in q.decompositions(&dv(&[2, 2])).unwrap() {
            assert_eq!(d.total(), dv(&[2, 2]));
        }
    }

    #[test]
    fn crawley_boevey_criterion() {
        assert!(elliptic_pair().cb_simple_exists(&dv(&[1, 1])).unwrap().exists);
        assert!(affine_a1().cb_simple_exists(&dv(&[1, 1])).unwrap().exists);
        let v = affine_a1().cb_simple_exists(&dv(&[2, 2])).unwrap();
        assert!(!v.exists);
        assert_eq!(v.witness().unwrap().summands, vec![dv(&[1, 1]), dv(&[1, 1])]);
        let v = affine_a1().cb_simple_exists(&dv(&[2, 0])).unwrap();
        assert!(!v.exists && !v.n_is_root);
    }

    #[test]
    fn expected_dimensions() {
        assert_eq!(affine_a1().mu_zero_expected_dim(&dv(&[1, 1])), 3);
        assert_eq!(elliptic_pair().mu_zero_expected_dim(&dv(&[1, 1])), 7);
        let one_loop = Quiver::new(vec![1], vec![vec![0]]).unwrap();
        assert_eq!(one_loop.mu_zero_expected_dim(&dv(&[1])), 2);
        assert_eq!(affine_a1().rep_dim(&dv(&[1, 1])), 4);
        assert_eq!(elliptic_pair().rep_dim(&dv(&[1, 1])), 8);
    }

    #[test]
    fn dot_output() {
        let dot = affine_a1().to_dot();
        assert!(dot.contains("v0 [label=\"0:0\"]"));
        assert_eq!(dot.matches("v0 -- v1;").count(), 2);
    }
}
