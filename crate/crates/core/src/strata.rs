//! Stratification of the singular locus of the local model, and a summary
//! document joining the lattice and quiver sides.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{CurveConfig, LatticeError, MukaiVector};
use crate::quiver::{CbVerdict, Decomposition, DimVector, Quiver, QuiverError};
use crate::walls::{
    ample_walls_through_h0, enumerate_chambers, quiver_walls, verify_correspondence, AmpleWall, ChamberReport,
    CorrespondenceReport, QuiverWall, WallError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("v(beta)^2 = {v_squared} but d(beta) = {d} for beta = {beta}")]
    PairingMismatch { beta: DimVector, v_squared: i64, d: i64 },
    #[error("wall counts disagree: {ample} ample walls, {quiver} quiver walls")]
    WallCountMismatch { ample: usize, quiver: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Wall(#[from] WallError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartRecord {
    pub k: u32,
    pub beta: DimVector,
    pub mukai: MukaiVector,
    pub d: i64,
    pub p: i64,
    pub is_root: bool,
    pub simple_exists: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRecord {
    pub decomposition: Decomposition,
    pub label: String,
    pub open: bool,
    /// `2 Σ_j p(β^(j))` over distinct parts.
    pub dimension: i64,
    /// `2 p(n)`.
    pub ambient_dimension: i64,
    pub parts: Vec<PartRecord>,
    /// Every part carries a simple representation, so the stratum is
    /// nonempty.
    pub realized: bool,
    pub wall: Option<DimVector>,
}

fn associated_wall(tau: &Decomposition, walls: &[QuiverWall]) -> Option<DimVector> {
    walls
        .iter()
        .find(|w| tau.parts.iter().any(|p| w.sources.contains(&p.beta)))
        .map(|w| w.normal.clone())
}

/// One record per decomposition of `n`, the open stratum first.
pub fn strata_report(cfg: &CurveConfig) -> Result<Vec<StratumRecord>, StrataError> {
    let q = Quiver::from_config(cfg)?;
    let n = cfg.mult();
    let walls = quiver_walls(&q, &n)?;
    let ambient = 2 * q.p_of(&n);
    let mut out = Vec::new();
    for tau in q.decompositions(&n)? {
        let mut parts = Vec::with_capacity(tau.parts.len());
        for part in &tau.parts {
            let mukai = cfg.vector_of_beta(&part.beta)?.vector;
            let v_squared = cfg.mukai_pairing(&mukai, &mukai)?;
            let d = q.d_form(&part.beta);
            if v_squared != d {
                return Err(StrataError::PairingMismatch { beta: part.beta.clone(), v_squared, d });
            }
            parts.push(PartRecord {
                k: part.k,
                beta: part.beta.clone(),
                mukai,
                d,
                p: q.p_of(&part.beta),
                is_root: q.is_positive_root(&part.beta),
                simple_exists: q.cb_simple_exists(&part.beta)?.exists,
            });
        }
        let dimension = 2 * parts.iter().map(|p| p.p).sum::<i64>();
        let realized = parts.iter().all(|p| p.simple_exists);
        out.push(StratumRecord {
            label: tau.to_string(),
            open: tau.is_trivial(),
            dimension,
            ambient_dimension: ambient,
            parts,
            realized,
            wall: if tau.is_trivial() { None } else { associated_wall(&tau, &walls) },
            decomposition: tau,
        });
    }
    Ok(out)
}

/// Number of quiver walls carrying a part of some decomposition of `n`
/// with exactly two distinct parts.
pub fn two_part_wall_count(q: &Quiver, n: &DimVector, walls: &[QuiverWall]) -> Result<usize, StrataError> {
    let decs: Vec<Decomposition> = q.decompositions(n)?.into_iter().filter(|d| d.parts.len() == 2).collect();
    Ok(walls
        .iter()
        .filter(|w| decs.iter().any(|d| d.parts.iter().any(|p| w.sources.contains(&p.beta))))
        .count())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub s: usize,
    pub n: DimVector,
    pub mukai_vector: MukaiVector,
    pub v_squared: i64,
    pub moduli_dimension: i64,
    pub primitivity_gcd: u64,
    pub quiver: Quiver,
    pub cartan: Vec<Vec<i64>>,
    pub p_n: i64,
    pub rep_dimension: u64,
    pub mu_zero_dimension: i64,
    pub quotient_dimension: i64,
    pub simple_existence: CbVerdict,
    pub strata: Vec<StratumRecord>,
    pub quiver_walls: Vec<QuiverWall>,
    pub ample_walls: Vec<AmpleWall>,
    pub quiver_chambers: Option<ChamberReport>,
    pub correspondence: CorrespondenceReport,
    pub two_part_walls: usize,
    pub notes: Vec<String>,
}

pub const ONE_VERTEX_NOTE: &str = "non-primitive one-vertex case; no adjacent-chamber resolution structure";
pub const FINITE_QUOTIENT_NOTE: &str =
    "each stratum is an open subset of a finite quotient of a product of smaller quiver varieties; the quotient group is not computed";

/// Dimensions, strata, walls and chambers on both sides, and the
/// character map at the adjacent ample chambers.
pub fn singular_model_summary(cfg: &CurveConfig, seed: u64) -> Result<ModelSummary, StrataError> {
    let q = Quiver::from_config(cfg)?;
    let n = cfg.mult();
    let v = cfg.total_vector();
    let v_squared = cfg.mukai_pairing(&v, &v)?;
    let qw = quiver_walls(&q, &n)?;
    let aw = ample_walls_through_h0(cfg)?;
    if aw.len() != qw.len() {
        return Err(StrataError::WallCountMismatch { ample: aw.len(), quiver: qw.len() });
    }
    let quiver_chambers = match enumerate_chambers(&q, &n) {
        Ok(c) => Some(c),
        Err(WallError::NoWallStructure) => None,
        Err(e) => return Err(e.into()),
    };
    let mut notes = Vec::new();
    if cfg.s() == 1 {
        notes.push(ONE_VERTEX_NOTE.to_string());
    }
    notes.push(FINITE_QUOTIENT_NOTE.to_string());
    Ok(ModelSummary {
        s: cfg.s(),
        mukai_vector: v,
        v_squared,
        moduli_dimension: v_squared + 2,
        primitivity_gcd: cfg.primitivity_gcd(),
        cartan: q.cartan(),
        p_n: q.p_of(&n),
        rep_dimension: q.rep_dim(&n),
        mu_zero_dimension: q.mu_zero_expected_dim(&n),
        quotient_dimension: 2 * q.p_of(&n),
        simple_existence: q.cb_simple_exists(&n)?,
        strata: strata_report(cfg)?,
        two_part_walls: two_part_wall_count(&q, &n, &qw)?,
        quiver_walls: qw,
        ample_walls: aw,
        quiver_chambers,
        correspondence: verify_correspondence(cfg, 2, seed)?,
        quiver: q,
        n,
        notes,
    })
}
