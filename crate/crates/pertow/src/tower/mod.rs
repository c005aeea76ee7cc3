//! Monomial perfectoid towers: construction, Frobenius projections, the
//! tower axioms as finite window checks, the cartesian characterization of
//! controlled torsion, decomposition into torsion-free and perfect parts,
//! and gluing.

mod axioms;
mod cartesian;
mod glue;
pub mod window;

pub use axioms::{check_axioms, pillar_check, AxiomReport, AxiomStatus};
pub use cartesian::{check_cartesian_g, CartesianGReport, TorsionMapOverride};
pub use glue::{
    decompose_tower, glue_towers, AttachMap, AttachTarget, DecompositionReport, GlueReport,
};

use thiserror::Error;

use crate::levelring::{
    mod_pillar, radical_quotient, Characteristic, LevelRingError, LevelRingSpec, Pillar,
};
use crate::Window;

#[derive(Debug, Error)]
pub enum TowerError {
    #[error(transparent)]
    Ring(#[from] LevelRingError),
    #[error("tower base must sit at level 0 (got level {0})")]
    BaseLevelNonzero(u32),
    #[error("level {0} is not materialized (tower has {1} levels)")]
    LevelOutOfRange(u32, usize),
    #[error("condition (c) fails on the window: {0}")]
    NotPurelyInseparable(String),
    #[error("the perfect side of a gluing must be reduced")]
    NotReduced,
    #[error("attaching map is incomplete or ill-defined: {0}")]
    MapNotDefined(String),
    #[error("unsupported gluing shape: {0}")]
    Unsupported(String),
    #[error("tilt depth {depth} needs levels up to {needed}, but only {have} are materialized")]
    DepthExceedsLevels {
        depth: u32,
        needed: u32,
        have: usize,
    },
}

/// A materialized tower of level rings. All levels share the generator
/// exponent vectors of the base; the transition map multiplies exponents by
/// p. Individual levels can be replaced to study broken towers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    pub levels: Vec<LevelRingSpec>,
    /// Conditions that are assumed rather than checked (adic separatedness
    /// cannot be witnessed by truncated representatives).
    pub assumed: Vec<&'static str>,
}

impl TowerSpec {
    pub fn prime(&self) -> u64 {
        self.levels[0].prime
    }

    pub fn base(&self) -> &LevelRingSpec {
        &self.levels[0]
    }

    pub fn level(&self, i: u32) -> Result<&LevelRingSpec, TowerError> {
        self.levels
            .get(i as usize)
            .ok_or(TowerError::LevelOutOfRange(i, self.levels.len()))
    }

    pub fn top_level(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    /// Perfect towers are the pure-p ones: I_0 = (0) and the transition maps
    /// are the absolute Frobenius.
    pub fn is_perfect(&self) -> bool {
        self.base().characteristic == Characteristic::PureP
    }

    /// Replace one level in place, for constructing broken towers in tests
    /// and falsification runs.
    pub fn with_level_spec(mut self, i: u32, spec: LevelRingSpec) -> Self {
        self.levels[i as usize] = spec;
        self
    }

    /// The special fiber R_i/I_0R_i as a pure-p spec.
    pub fn special_fiber(&self, i: u32) -> Result<LevelRingSpec, TowerError> {
        Ok(mod_pillar(self.level(i)?, Pillar::I0)?)
    }

    /// (R_i/I_0R_i)_red.
    pub fn reduced_special_fiber(&self, i: u32) -> Result<LevelRingSpec, TowerError> {
        Ok(radical_quotient(&self.special_fiber(i)?))
    }

    /// Degree weights for pure windows of the special fiber: the residue of
    /// P weighs nothing, original variables weigh one.
    pub fn fiber_weights(&self, fiber: &LevelRingSpec) -> Vec<u64> {
        fiber
            .variables
            .iter()
            .map(|v| {
                if self.base().variables.contains(v) {
                    1
                } else {
                    0
                }
            })
            .collect()
    }
}

/// Materialize a monomial tower over a level-0 spec: level i reinterprets
/// the same generator exponent vectors in the p^i-rescaled variables.
pub fn build_monomial_tower(level0: &LevelRingSpec, levels: u32) -> Result<TowerSpec, TowerError> {
    if level0.level != 0 {
        return Err(TowerError::BaseLevelNonzero(level0.level));
    }
    let mut all = Vec::with_capacity(levels as usize + 1);
    for i in 0..=levels {
        all.push(LevelRingSpec::new(
            level0.prime,
            level0.precision,
            i,
            level0.characteristic,
            level0.variables.clone(),
            level0.generators.clone(),
        )?);
    }
    Ok(TowerSpec {
        levels: all,
        assumed: vec!["(e) I_0-adically Zariskian"],
    })
}

/// The i-th Frobenius projection F_i: R_{i+1}/I_0R_{i+1} -> R_i/I_0R_i,
/// verified on the window: t̄_i ∘ F_i is the absolute Frobenius monomial by
/// monomial, and every target monomial is hit.
#[derive(Clone, Debug)]
pub struct FrobeniusProjection {
    pub level: u32,
    pub source_fiber: LevelRingSpec,
    pub target_fiber: LevelRingSpec,
    pub surjective_on_window: bool,
}

impl FrobeniusProjection {
    /// Image of the fiber monomial P^j X^β of level i+1 at level i, modulo
    /// I_0; `None` when the monomial dies (the kernel is I_1 on honest towers).
    pub fn map_monomial(&self, tower: &TowerSpec, j: u64, beta: &[u32]) -> Option<(u64, Vec<u32>)> {
        let tgt = &tower.levels[self.level as usize];
        window::reduce_fiber(tgt, j, beta)
    }
}

/// Construct and window-verify F_i. Fails with `NotPurelyInseparable` when
/// the image of the absolute Frobenius escapes the image of t̄_i.
pub fn frobenius_projection(
    tower: &TowerSpec,
    i: u32,
    window: Window,
) -> Result<FrobeniusProjection, TowerError> {
    let lower = tower.level(i)?;
    let upper = tower.level(i + 1)?;
    let d = window.degree;
    let p = tower.prime();
    // condition (c): φ(m) lands in the image of t̄_i for every window monomial
    for beta in crate::levelring::exponent_vectors(upper.num_variables(), d) {
        let q_up = upper.p_rank();
        let m_up = upper.ann_exponent(&beta).unwrap_or(u64::MAX);
        for j in 0..q_up.min(m_up) {
            // φ(P^j X^β) = P^{pj} X^{pβ}
            let pj = j * p;
            let pbeta: Vec<u32> = beta.iter().map(|e| e * p as u32).collect();
            let phi_alive = window::reduce_fiber(upper, pj, &pbeta).is_some();
            if !phi_alive {
                continue;
            }
            // preimage candidate is (j, β) at level i
            if window::reduce_fiber(lower, j, &beta).is_none() {
                return Err(TowerError::NotPurelyInseparable(format!(
                    "Frobenius of {} is not in the image of the transition map",
                    upper.monomial_string(j, &beta)
                )));
            }
        }
    }
    // surjectivity (d): every live level-i fiber monomial is (j', α) for a
    // live level-(i+1) monomial with the same label
    let mut surjective = true;
    for alpha in crate::levelring::exponent_vectors(lower.num_variables(), d) {
        let q_lo = lower.p_rank();
        let m_lo = lower.ann_exponent(&alpha).unwrap_or(u64::MAX);
        for j in 0..q_lo.min(m_lo) {
            let alpha_up = window::remap_exps(&lower.variables, &alpha, upper);
            let hit = alpha_up
                .as_ref()
                .and_then(|a| window::reduce_fiber(upper, j, a))
                .is_some();
            if !hit {
                surjective = false;
            }
        }
    }
    Ok(FrobeniusProjection {
        level: i,
        source_fiber: mod_pillar(upper, Pillar::I0)?,
        target_fiber: mod_pillar(lower, Pillar::I0)?,
        surjective_on_window: surjective,
    })
}

/// Pillar generator of I_k extended to level `level` (level >= k), as a
/// monomial label: P^{p^{level-k}}. Perfect towers have zero pillars.
pub fn pillar_label(tower: &TowerSpec, k: u32, level: u32) -> Option<u64> {
    if tower.is_perfect() {
        return None;
    }
    Some(tower.prime().pow(level - k))
}
