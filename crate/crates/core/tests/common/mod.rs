//! Fixtures, random generators and brute-force oracles shared by the
//! integration tests.

#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use qrl_core::lattice::CurveConfig;
use qrl_core::linalg::Matrix;
use qrl_core::quiver::{DimVector, Quiver};
use qrl_core::reps::Representation;
use qrl_core::Q;
use rand::Rng;

pub fn elliptic_pair() -> CurveConfig {
    CurveConfig::new(vec![vec![0, 2], vec![2, 0]], vec![1, 1], vec![1, 1], vec![1, 1]).unwrap()
}

pub fn affine_a1() -> CurveConfig {
    CurveConfig::new(vec![vec![-2, 2], vec![2, -2]], vec![1, 1], vec![1, 1], vec![1, 1]).unwrap()
}

pub fn one_vertex() -> CurveConfig {
    CurveConfig::new(vec![vec![2]], vec![1], vec![2], vec![1]).unwrap()
}

pub fn chain3() -> CurveConfig {
    CurveConfig::new(
        vec![vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]],
        vec![1, 1, 1],
        vec![1, 1, 1],
        vec![1, 1, 1],
    )
    .unwrap()
}

pub fn fixtures() -> Vec<(&'static str, CurveConfig)> {
    vec![
        ("elliptic_pair", elliptic_pair()),
        ("affine_a1", affine_a1()),
        ("one_vertex", one_vertex()),
        ("chain3", chain3()),
    ]
}

pub fn dv(v: &[u32]) -> DimVector {
    DimVector(v.to_vec())
}

pub fn qi(x: i64) -> Q {
    Q::from_integer(x.into())
}

/// Random valid configuration with `s` curves, off-diagonal gram entries
/// in `[0, gram_bound]`, diagonal entries in `{−2, 0, …}` up to
/// `gram_bound`, multiplicities in `[1, mult_bound]` and a common slope.
pub fn random_config<R: Rng>(rng: &mut R, s: usize, gram_bound: i64, mult_bound: u32) -> CurveConfig {
    let mut gram = vec![vec![0i64; s]; s];
    for i in 0..s {
        let top = gram_bound.max(0) / 2;
        gram[i][i] = 2 * rng.gen_range(-1..=top);
        for j in (i + 1)..s {
            let g = rng.gen_range(0..=gram_bound);
            gram[i][j] = g;
            gram[j][i] = g;
        }
    }
    let p = loop {
        let p: i64 = rng.gen_range(-3..=3);
        if p != 0 {
            break p;
        }
    };
    let qd: i64 = rng.gen_range(1..=3);
    let k: Vec<i64> = (0..s).map(|_| rng.gen_range(1..=3)).collect();
    let chi = k.iter().map(|&x| p * x).collect();
    let h0deg = k.iter().map(|&x| qd * x).collect();
    let mult = (0..s).map(|_| rng.gen_range(1..=mult_bound)).collect();
    CurveConfig::new(gram, chi, mult, h0deg).expect("generator produces valid configs")
}

/// `βᵀ G β` computed directly from the gram matrix.
pub fn oracle_d(cfg: &CurveConfig, beta: &DimVector) -> i64 {
    let g = cfg.gram();
    let mut d = 0;
    for i in 0..beta.len() {
        for j in 0..beta.len() {
            d += i64::from(beta.0[i]) * g[i][j] * i64::from(beta.0[j]);
        }
    }
    d
}

pub fn oracle_is_root(cfg: &CurveConfig, beta: &DimVector) -> bool {
    if beta.is_zero() || oracle_d(cfg, beta) < -2 {
        return false;
    }
    let support: Vec<usize> = (0..beta.len()).filter(|&i| beta.0[i] > 0).collect();
    let mut seen = vec![support[0]];
    let mut k = 0;
    while k < seen.len() {
        let i = seen[k];
        for &j in &support {
            if !seen.contains(&j) && cfg.gram()[i][j] > 0 {
                seen.push(j);
            }
        }
        k += 1;
    }
    seen.len() == support.len()
}

/// Every `β` with `0 ≤ β ≤ n`, in lexicographic order.
pub fn below(n: &DimVector) -> Vec<DimVector> {
    let mut out = vec![Vec::new()];
    for &m in &n.0 {
        out = out.into_iter().flat_map(|p: Vec<u32>| (0..=m).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out.into_iter().map(DimVector).collect()
}

/// Roots `β` with `0 < β < n`.
pub fn oracle_proper_roots(cfg: &CurveConfig) -> Vec<DimVector> {
    let n = cfg.mult();
    below(&n).into_iter().filter(|b| *b != n && oracle_is_root(cfg, b)).collect()
}

/// Feasibility of `{x : a·x ≥ b}` by Fourier–Motzkin elimination.
pub fn fm_feasible(mut rows: Vec<(Vec<Q>, Q)>, nvars: usize) -> bool {
    for j in 0..nvars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for (a, b) in rows {
            if a[j].is_positive() {
                pos.push((a, b));
            } else if a[j].is_negative() {
                neg.push((a, b));
            } else {
                rest.push((a, b));
            }
        }
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                let cp = Q::one() / &ap[j];
                let cn = Q::one() / -&an[j];
                let a: Vec<Q> = ap.iter().zip(an).map(|(x, y)| x * &cp + y * &cn).collect();
                let row = (a, bp * &cp + bn * &cn);
                if !rest.contains(&row) {
                    rest.push(row);
                }
            }
        }
        rows = rest;
    }
    rows.iter().all(|(_, b)| !b.is_positive())
}

/// Chambers of `{θ·β = 0 : β ∈ R₊(n)}` in `n⊥`, as the feasible sign
/// vectors over the non-degenerate root hyperplanes.
pub fn oracle_chamber_signs(cfg: &CurveConfig) -> (Vec<DimVector>, Vec<Vec<i8>>) {
    let n = cfg.mult();
    let s = n.len();
    let last = Q::from_integer(n.0[s - 1].into());
    let reduce = |beta: &DimVector| -> Vec<Q> {
        let bl = Q::from_integer(beta.0[s - 1].into());
        (0..s - 1)
            .map(|i| Q::from_integer(beta.0[i].into()) - &bl * Q::from_integer(n.0[i].into()) / &last)
            .collect()
    };
    let mut hyper: Vec<DimVector> = Vec::new();
    let mut forms: Vec<Vec<Q>> = Vec::new();
    for beta in oracle_proper_roots(cfg) {
        let f = reduce(&beta);
        if f.iter().any(|x| !x.is_zero()) {
            hyper.push(beta);
            forms.push(f);
        }
    }
    let mut out = Vec::new();
    let mut stack: Vec<Vec<i8>> = vec![Vec::new()];
    while let Some(sig) = stack.pop() {
        let rows = forms
            .iter()
            .zip(&sig)
            .map(|(f, &e)| (f.iter().map(|x| x * qi(e.into())).collect(), Q::one()))
            .collect();
        if !fm_feasible(rows, s - 1) {
            continue;
        }
        if sig.len() == forms.len() {
            out.push(sig);
            continue;
        }
        for e in [-1i8, 1] {
            let mut next = sig.clone();
            next.push(e);
            stack.push(next);
        }
    }
    out.sort();
    (hyper, out)
}

/// Absolute simplicity for total dimension at most 3. A proper invariant
/// graded subspace has dimension 1 or 2, so it exists iff some vertex
/// carries an invariant line in the representation or in its dual.
pub fn oracle_is_simple(rep: &Representation<Q>) -> bool {
    let n = rep.n();
    assert!(n.total() <= 3, "oracle covers total dimension at most 3");
    if n.total() <= 1 {
        return n.total() == 1;
    }
    let arrows = rep.quiver().arrows().to_vec();
    for i in 0..n.len() {
        if n.0[i] == 0 {
            continue;
        }
        for dual in [false, true] {
            let (mut out, mut loops) = (Vec::new(), Vec::new());
            for (e, a) in arrows.iter().enumerate() {
                let (x, y) = (&rep.x()[e], &rep.y()[e]);
                let (x, y) = if dual { (y.transpose(), x.transpose()) } else { (x.clone(), y.clone()) };
                if a.source == i && a.target == i {
                    loops.push(x);
                    loops.push(y);
                } else if a.source == i {
                    out.push(x);
                } else if a.target == i {
                    out.push(y);
                }
            }
            if has_invariant_line(n.0[i] as usize, &out, &loops) {
                return false;
            }
        }
    }
    true
}

fn mat_rows(m: &Matrix<Q>) -> Vec<Vec<Q>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn mat_mul(a: &Matrix<Q>, b: &Matrix<Q>) -> Vec<Vec<Q>> {
    (0..a.rows())
        .map(|r| {
            (0..b.cols()).map(|c| (0..a.cols()).fold(Q::zero(), |acc, k| acc + &a.row(r)[k] * &b.row(k)[c])).collect()
        })
        .collect()
}

/// Line in `ℚ̄^d` killed by every `out` map and preserved by every loop.
/// Such a line lies in the largest loop-invariant subspace of the joint
/// kernel of `out` and of all loop commutators; the loops commute there,
/// so any nonzero such subspace contains a common eigenvector.
fn has_invariant_line(d: usize, out: &[Matrix<Q>], loops: &[Matrix<Q>]) -> bool {
    let mut rows: Vec<Vec<Q>> = out.iter().flat_map(mat_rows).collect();
    for a in loops {
        for b in loops {
            let ab = mat_mul(a, b);
            let ba = mat_mul(b, a);
            rows.extend(ab.into_iter().zip(ba).map(|(r, t)| r.iter().zip(&t).map(|(x, y)| x - y).collect::<Vec<Q>>()));
        }
    }
    let mut basis = null_space(&rows, d);
    loop {
        if basis.is_empty() {
            return false;
        }
        let k = basis.len();
        // (c, e_1, …, e_r) with L_j (B c) = B e_j for every loop L_j.
        let width = k * (loops.len() + 1);
        let mut system = Vec::new();
        for (j, l) in loops.iter().enumerate() {
            let lb: Vec<Vec<Q>> = basis.iter().map(|b| l.mul_vec(b)).collect();
            for r in 0..d {
                let mut row = vec![Q::zero(); width];
                for c in 0..k {
                    row[c] = lb[c][r].clone();
                    row[k * (j + 1) + c] = -basis[c][r].clone();
                }
                system.push(row);
            }
        }
        let keep: Vec<Vec<Q>> = independent(
            null_space(&system, width)
                .iter()
                .map(|v| (0..d).map(|r| (0..k).fold(Q::zero(), |acc, j| acc + &v[j] * &basis[j][r])).collect())
                .collect(),
        );
        if keep.len() == basis.len() {
            return true;
        }
        basis = keep;
    }
}

/// Basis of `{x : rows · x = 0}` by reduced row echelon form.
pub fn null_space(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[r].clone();
        for k in 0..m.len() {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                for (x, y) in m[k].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); ncols];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

fn independent(vs: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    for v in vs {
        let mut cand = out.clone();
        cand.push(v.clone());
        if exact_rank(&cand) > out.len() {
            out.push(v);
        }
    }
    out
}

/// Rank of a list of vectors by fraction-free elimination.
pub fn exact_rank(vs: &[Vec<Q>]) -> usize {
    let mut rows: Vec<Vec<Q>> = vs.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(r, p);
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let f = &rows[k][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[k].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Random rational representation preserving the coordinate subspace of
/// dimension `k`, conjugated by random unitriangular-times-permutation
/// blocks so the subspace is not a coordinate one.
pub fn triangular_rep<R: Rng>(q: &Quiver, n: &DimVector, k: &DimVector, rng: &mut R) -> Representation<Q> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    let entry = |rows: usize, cols: usize, kr: u32, kc: u32, rng: &mut R| {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let zero = c < kc as usize && r >= kr as usize;
                data.push(if zero { Q::zero() } else { qi(rng.gen_range(-3..=3)) });
            }
        }
        Matrix::from_row_major(rows, cols, data)
    };
    for a in q.arrows() {
        let (ns, nt) = (n.0[a.source] as usize, n.0[a.target] as usize);
        x.push(entry(nt, ns, k.0[a.target], k.0[a.source], rng));
        y.push(entry(ns, nt, k.0[a.source], k.0[a.target], rng));
    }
    let rep = Representation::new(q.clone(), n.clone(), x, y).unwrap();
    let blocks: Vec<Matrix<Q>> = n
        .0
        .iter()
        .map(|&m| {
            let m = m as usize;
            let mut g = Matrix::identity(m);
            for r in 0..m {
                for c in (r + 1)..m {
                    g[(r, c)] = qi(rng.gen_range(-1..=1));
                }
            }
            g
        })
        .collect();
    let g = qrl_core::reps::GroupElement::new(blocks, 0.0).unwrap();
    rep.act(&g).unwrap()
}
