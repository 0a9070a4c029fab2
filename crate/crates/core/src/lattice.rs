//! Curve configurations and exact Mukai-lattice arithmetic.
//!
//! A configuration records the numerical shadow of a polystable sheaf
//! `F = F_1^{n_1} ⊕ … ⊕ F_s^{n_s}` of pure dimension one: the intersection
//! matrix of the supports `D_i`, the Euler characteristics `χ_i`, the
//! multiplicities `n_i` and the degrees `d_i = H_0·D_i` of a reference
//! polarization. Mukai vectors of rank zero live in the basis `D_1..D_s`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quiver::DimVector;
use crate::rational::{serde_q_vec, Q};

/// Bound on the magnitude of every integer input. Keeps all derived
/// integer quantities (pairings, quadratic forms) far inside `i64`.
pub const INPUT_BOUND: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("configuration has no curves")]
    Empty,
    #[error("{field} has length {found}, expected {expected}")]
    Length { field: &'static str, expected: usize, found: usize },
    #[error("gram matrix is not symmetric at ({i},{j})")]
    Asymmetric { i: usize, j: usize },
    #[error("gram diagonal entry {i} is odd ({value})")]
    OddDiagonal { i: usize, value: i64 },
    #[error("gram diagonal entry {i} is below -2 ({value})")]
    DiagonalBelowMinusTwo { i: usize, value: i64 },
    #[error("negative intersection number at ({i},{j})")]
    NegativeIntersection { i: usize, j: usize },
    #[error("multiplicity {i} must be positive")]
    NonPositiveMultiplicity { i: usize },
    #[error("degree {i} must be positive")]
    NonPositiveDegree { i: usize },
    #[error("equal-slope violated at ({i},{j})")]
    EqualSlope { i: usize, j: usize },
    #[error("total Euler characteristic is zero")]
    ZeroEulerCharacteristic,
    #[error("{field} entry {i} exceeds the supported magnitude")]
    OutOfRange { field: &'static str, i: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension vector is zero")]
    ZeroBeta,
    #[error("slope undefined: {0}")]
    UndefinedSlope(&'static str),
    #[error("degree vector entry {0} is not positive")]
    NonPositiveDegreeVector(usize),
}

impl LatticeError {
    /// Short name of the violated invariant, used in diagnostics.
    pub fn invariant(&self) -> &'static str {
        match self {
            Self::Empty | Self::Length { .. } | Self::DimensionMismatch(..) => "shape",
            Self::Asymmetric { .. } => "symmetric-gram",
            Self::OddDiagonal { .. } => "even-diagonal",
            Self::DiagonalBelowMinusTwo { .. } => "diagonal-at-least-minus-two",
            Self::NegativeIntersection { .. } => "non-negative-intersection",
            Self::NonPositiveMultiplicity { .. } => "positive-multiplicity",
            Self::NonPositiveDegree { .. } | Self::NonPositiveDegreeVector(_) => "positive-degree",
            Self::EqualSlope { .. } => "equal-slope",
            Self::ZeroEulerCharacteristic => "nonzero-euler-characteristic",
            Self::OutOfRange { .. } => "input-range",
            Self::ZeroBeta => "nonzero-beta",
            Self::UndefinedSlope(_) => "slope-denominator",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCurveConfig")]
pub struct CurveConfig {
    gram: Vec<Vec<i64>>,
    chi: Vec<i64>,
    mult: Vec<u32>,
    h0deg: Vec<i64>,
}

#[derive(Deserialize)]
struct RawCurveConfig {
    gram: Vec<Vec<i64>>,
    chi: Vec<i64>,
    mult: Vec<u32>,
    h0deg: Vec<i64>,
}

impl TryFrom<RawCurveConfig> for CurveConfig {
    type Error = LatticeError;
    fn try_from(r: RawCurveConfig) -> Result<Self, Self::Error> {
        CurveConfig::new(r.gram, r.chi, r.mult, r.h0deg)
    }
}

impl CurveConfig {
    pub fn new(
        gram: Vec<Vec<i64>>,
        chi: Vec<i64>,
        mult: Vec<u32>,
        h0deg: Vec<i64>,
    ) -> Result<Self, LatticeError> {
        let s = gram.len();
        if s == 0 {
            return Err(LatticeError::Empty);
        }
        for row in &gram {
            if row.len() != s {
                return Err(LatticeError::Length { field: "gram row", expected: s, found: row.len() });
            }
        }
        for (field, len) in [("chi", chi.len()), ("mult", mult.len()), ("h0deg", h0deg.len())] {
            if len != s {
                return Err(LatticeError::Length { field, expected: s, found: len });
            }
        }
        for i in 0..s {
            for j in 0..s {
                if gram[i][j].abs() > INPUT_BOUND {
                    return Err(LatticeError::OutOfRange { field: "gram", i });
                }
            }
            if chi[i].abs() > INPUT_BOUND {
                return Err(LatticeError::OutOfRange { field: "chi", i });
            }
            if h0deg[i].abs() > INPUT_BOUND {
                return Err(LatticeError::OutOfRange { field: "h0deg", i });
            }
            if i64::from(mult[i]) > INPUT_BOUND {
                return Err(LatticeError::OutOfRange { field: "mult", i });
            }
        }
        for i in 0..s {
            for j in (i + 1)..s {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::Asymmetric { i, j });
                }
                if gram[i][j] < 0 {
                    return Err(LatticeError::NegativeIntersection { i, j });
                }
            }
            let g = gram[i][i];
            if g % 2 != 0 {
                return Err(LatticeError::OddDiagonal { i, value: g });
            }
            if g < -2 {
                return Err(LatticeError::DiagonalBelowMinusTwo { i, value: g });
            }
            if mult[i] == 0 {
                return Err(LatticeError::NonPositiveMultiplicity { i });
            }
            if h0deg[i] <= 0 {
                return Err(LatticeError::NonPositiveDegree { i });
            }
        }
        for i in 0..s {
            for j in (i + 1)..s {
                if chi[i] * h0deg[j] != chi[j] * h0deg[i] {
                    return Err(LatticeError::EqualSlope { i, j });
                }
            }
        }
        let total: i64 = chi.iter().zip(&mult).map(|(c, &n)| c * i64::from(n)).sum();
        if total == 0 {
            return Err(LatticeError::ZeroEulerCharacteristic);
        }
        Ok(Self { gram, chi, mult, h0deg })
    }

    pub fn s(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn chi(&self) -> &[i64] {
        &self.chi
    }

    pub fn mult(&self) -> DimVector {
        DimVector(self.mult.clone())
    }

    pub fn h0deg(&self) -> &[i64] {
        &self.h0deg
    }

    /// `χ = Σ n_i χ_i`.
    pub fn total_chi(&self) -> i64 {
        self.chi.iter().zip(&self.mult).map(|(c, &n)| c * i64::from(n)).sum()
    }

    /// `d_0 = Σ n_i d_i = H_0·D`.
    pub fn total_h0deg(&self) -> i64 {
        self.h0deg.iter().zip(&self.mult).map(|(d, &n)| d * i64::from(n)).sum()
    }

    pub fn h0deg_vector(&self) -> DegreeVector {
        DegreeVector(self.h0deg.iter().map(|&d| Q::from_integer(d.into())).collect())
    }

    /// Mukai vector `v_i = (0, [D_i], χ_i)` of the i-th stable summand.
    pub fn summand_vector(&self, i: usize) -> MukaiVector {
        let mut div = vec![0; self.s()];
        div[i] = 1;
        MukaiVector { rank: 0, div, euler: self.chi[i] }
    }

    /// Mukai vector `v = (0, [D], χ)` of the whole polystable sheaf.
    pub fn total_vector(&self) -> MukaiVector {
        MukaiVector {
            rank: 0,
            div: self.mult.iter().map(|&n| i64::from(n)).collect(),
            euler: self.total_chi(),
        }
    }

    /// `gcd(n_1, …, n_s, χ)`; 1 when `v` passes the primitivity proxy.
    pub fn primitivity_gcd(&self) -> u64 {
        self.total_vector().content()
    }

    pub fn mukai_pairing(&self, v: &MukaiVector, w: &MukaiVector) -> Result<i64, LatticeError> {
        let s = self.s();
        if v.div.len() != s {
            return Err(LatticeError::DimensionMismatch(v.div.len(), s));
        }
        if w.div.len() != s {
            return Err(LatticeError::DimensionMismatch(w.div.len(), s));
        }
        let mut c1 = 0i64;
        for i in 0..s {
            if v.div[i] == 0 {
                continue;
            }
            for j in 0..s {
                c1 += v.div[i] * self.gram[i][j] * w.div[j];
            }
        }
        Ok(c1 - v.rank * w.euler - v.euler * w.rank)
    }

    pub fn is_positive(&self, v: &MukaiVector) -> Result<bool, LatticeError> {
        let sq = self.mukai_pairing(v, v)?;
        if sq < -2 {
            return Ok(false);
        }
        let div_zero = v.div.iter().all(|&x| x == 0);
        Ok(if v.rank > 0 {
            true
        } else if v.rank < 0 {
            false
        } else if div_zero {
            v.euler > 0
        } else {
            v.div.iter().all(|&x| x >= 0) && v.euler != 0
        })
    }

    /// `v(β) = Σ β_i v_i`, flagged when `gcd(β, χ_β) > 1`.
    pub fn vector_of_beta(&self, beta: &DimVector) -> Result<BetaVector, LatticeError> {
        if beta.len() != self.s() {
            return Err(LatticeError::DimensionMismatch(beta.len(), self.s()));
        }
        if beta.is_zero() {
            return Err(LatticeError::ZeroBeta);
        }
        let div: Vec<i64> = beta.0.iter().map(|&b| i64::from(b)).collect();
        let euler = div.iter().zip(&self.chi).map(|(b, c)| b * c).sum();
        let vector = MukaiVector { rank: 0, div, euler };
        let gcd = vector.content();
        Ok(BetaVector { vector, gcd })
    }

    /// `μ_H(v) = χ(v) / (c_1(v)·H)` for a rank-zero vector.
    pub fn slope(&self, v: &MukaiVector, a: &DegreeVector) -> Result<Q, LatticeError> {
        if v.rank != 0 {
            return Err(LatticeError::UndefinedSlope("rank is not zero"));
        }
        if v.div.len() != a.0.len() {
            return Err(LatticeError::DimensionMismatch(v.div.len(), a.0.len()));
        }
        let den = v
            .div
            .iter()
            .zip(&a.0)
            .fold(Q::zero(), |acc, (&c, x)| acc + x * Q::from_integer(c.into()));
        if den.is_zero() {
            return Err(LatticeError::UndefinedSlope("c1·H vanishes"));
        }
        Ok(Q::from_integer(v.euler.into()) / den)
    }
}

/// Rank-zero-friendly Mukai vector `(rank, c_1, χ)` with `c_1` written in
/// the `D_1..D_s` basis of its configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MukaiVector {
    pub rank: i64,
    pub div: Vec<i64>,
    pub euler: i64,
}

impl MukaiVector {
    pub fn new(rank: i64, div: Vec<i64>, euler: i64) -> Self {
        Self { rank, div, euler }
    }

    /// gcd of all coordinates.
    pub fn content(&self) -> u64 {
        let mut g = BigInt::from(self.rank).abs();
        for &d in &self.div {
            g = g.gcd(&BigInt::from(d));
        }
        g = g.gcd(&BigInt::from(self.euler));
        u64::try_from(g).unwrap_or(u64::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaVector {
    pub vector: MukaiVector,
    pub gcd: u64,
}

impl BetaVector {
    /// Non-primitivity warning, if any.
    pub fn warning(&self) -> Option<String> {
        (self.gcd > 1).then(|| format!("v(beta) is divisible by {}", self.gcd))
    }
}

/// Degrees `a_i = H·D_i` of an ample class on the support curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeVector(#[serde(with = "serde_q_vec")] pub Vec<Q>);

impl DegreeVector {
    pub fn new(a: Vec<Q>) -> Result<Self, LatticeError> {
        if let Some(i) = a.iter().position(|x| !x.is_positive()) {
            return Err(LatticeError::NonPositiveDegreeVector(i));
        }
        Ok(Self(a))
    }

    pub fn from_ints(a: &[i64]) -> Result<Self, LatticeError> {
        Self::new(a.iter().map(|&x| Q::from_integer(x.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, c: &Q) -> Self {
        Self(self.0.iter().map(|x| x * c).collect())
    }
}
