//! Canonical exact arithmetic in tower-level rings.
//!
//! A mixed-characteristic level ring at level `i` is
//! `(Z/p^N)[P, X_2, ..., X_n] / (P^{p^i} - p, monomial ideal)`, where `P`
//! plays the role of `p^{1/p^i}` and `X_j` of `x_j^{1/p^i}`. A pure-p spec is
//! an `F_p` monomial quotient with no `P` symbol (any nilpotent residue of
//! `P` becomes an ordinary variable). Generator exponent vectors are shared
//! across levels: only their interpretation rescales, which keeps transition
//! and Frobenius maps combinatorial.
//!
//! Elements are stored per x-monomial: the coefficient attached to `X^α`
//! lives in `(Z/p^N)[P] / (P^{p^i} - p, P^{m(α)})`, where `m(α)` is the least
//! pillar exponent of a generator whose x-part divides `α`. This encodes
//! monomial-ideal membership exactly, term by term.

mod element;
mod quotients;

pub use element::{normal_form, RawTerm, RingElement};
pub use quotients::{
    mod_pillar, radical_quotient, torsion_free_quotient, torsion_monomials, Pillar, TorsionMonomial,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LevelRingError {
    #[error("the unit ideal is rejected (generator with all exponents zero)")]
    UnitIdeal,
    #[error("unknown variable `{0}`")]
    VariableMismatch(String),
    #[error("operands belong to different ring specs")]
    SpecMismatch,
    #[error("pillar I_1 does not exist at level 0")]
    NoPillar,
    #[error("invalid ring spec: {0}")]
    BadSpec(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Characteristic {
    #[serde(rename = "mixed")]
    Mixed,
    #[serde(rename = "pure-p")]
    PureP,
}

/// A monomial `P^a · X^α`; in pure-p specs `p_exp` must be zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PMonomial {
    pub p_exp: u32,
    pub x_exps: Vec<u32>,
}

impl PMonomial {
    pub fn new(p_exp: u32, x_exps: Vec<u32>) -> Self {
        PMonomial { p_exp, x_exps }
    }

    pub fn is_unit(&self) -> bool {
        self.p_exp == 0 && self.x_exps.iter().all(|&e| e == 0)
    }

    fn divides(&self, other: &PMonomial) -> bool {
        self.p_exp <= other.p_exp
            && self
                .x_exps
                .iter()
                .zip(&other.x_exps)
                .all(|(a, b)| a <= b)
    }

    pub fn total_degree(&self) -> u64 {
        self.p_exp as u64 + self.x_exps.iter().map(|&e| e as u64).sum::<u64>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRingSpec {
    pub prime: u64,
    pub precision: u32,
    pub level: u32,
    pub characteristic: Characteristic,
    pub variables: Vec<String>,
    pub generators: Vec<PMonomial>,
}

impl LevelRingSpec {
    pub fn new(
        prime: u64,
        precision: u32,
        level: u32,
        characteristic: Characteristic,
        variables: Vec<String>,
        generators: Vec<PMonomial>,
    ) -> Result<Self, LevelRingError> {
        let mut spec = LevelRingSpec {
            prime,
            precision,
            level,
            characteristic,
            variables,
            generators,
        };
        spec.validate_shape()?;
        spec.canonicalize()?;
        Ok(spec)
    }

    pub fn mixed(
        prime: u64,
        precision: u32,
        level: u32,
        variables: Vec<&str>,
        generators: Vec<PMonomial>,
    ) -> Result<Self, LevelRingError> {
        Self::new(
            prime,
            precision,
            level,
            Characteristic::Mixed,
            variables.into_iter().map(String::from).collect(),
            generators,
        )
    }

    pub fn pure(
        prime: u64,
        level: u32,
        variables: Vec<&str>,
        generators: Vec<PMonomial>,
    ) -> Result<Self, LevelRingError> {
        Self::new(
            prime,
            1,
            level,
            Characteristic::PureP,
            variables.into_iter().map(String::from).collect(),
            generators,
        )
    }

    fn validate_shape(&self) -> Result<(), LevelRingError> {
        if !is_prime(self.prime) {
            return Err(LevelRingError::BadSpec(format!("{} is not prime", self.prime)));
        }
        if self.precision == 0 {
            return Err(LevelRingError::BadSpec("precision must be >= 1".into()));
        }
        if self.characteristic == Characteristic::PureP {
            if self.precision != 1 {
                return Err(LevelRingError::BadSpec(
                    "pure-p specs have precision 1".into(),
                ));
            }
            if self.generators.iter().any(|g| g.p_exp != 0) {
                return Err(LevelRingError::BadSpec(
                    "pure-p specs carry no P symbol; generators must have p_exp = 0".into(),
                ));
            }
        }
        // coefficient values stay below p^N and products must fit in u128
        let pn = (self.prime as u128).checked_pow(self.precision);
        match pn {
            Some(v) if v < (1u128 << 63) => {}
            _ => {
                return Err(LevelRingError::BadSpec(
                    "p^precision too large for exact coefficient arithmetic".into(),
                ))
            }
        }
        if (self.prime as u128).checked_pow(self.level).is_none()
            || (self.prime as u128).pow(self.level) > (1 << 24)
        {
            return Err(LevelRingError::BadSpec("p^level too large".into()));
        }
        let n = self.variables.len();
        for g in &self.generators {
            if g.x_exps.len() != n {
                return Err(LevelRingError::BadSpec(
                    "generator exponent arity does not match variables".into(),
                ));
            }
        }
        let mut names = self.variables.clone();
        names.sort();
        names.dedup();
        if names.len() != self.variables.len() {
            return Err(LevelRingError::BadSpec("duplicate variable names".into()));
        }
        if self.variables.iter().any(|v| v.is_empty()) {
            return Err(LevelRingError::BadSpec("empty variable name".into()));
        }
        Ok(())
    }

    /// Reduce generators to a minimal set and strip variables that are
    /// killed outright (a generator equal to a single variable).
    fn canonicalize(&mut self) -> Result<(), LevelRingError> {
        loop {
            if self.generators.iter().any(PMonomial::is_unit) {
                return Err(LevelRingError::UnitIdeal);
            }
            minimalize(&mut self.generators);
            // a generator that is exactly one variable to the first power
            // kills that variable from the presentation
            let killed = self.generators.iter().position(|g| {
                g.p_exp == 0
                    && g.x_exps.iter().filter(|&&e| e > 0).count() == 1
                    && g.x_exps.iter().all(|&e| e <= 1)
            });
            let Some(idx) = killed else {
                break;
            };
            let var = self.generators[idx]
                .x_exps
                .iter()
                .position(|&e| e == 1)
                .expect("checked above");
            self.generators.remove(idx);
            self.variables.remove(var);
            // any other generator involving the dead variable reduces to zero
            self.generators.retain(|g| g.x_exps[var] == 0);
            for g in &mut self.generators {
                g.x_exps.remove(var);
            }
        }
        self.generators.sort_by(|a, b| {
            (a.total_degree(), &a.x_exps, a.p_exp).cmp(&(b.total_degree(), &b.x_exps, b.p_exp))
        });
        self.generators.dedup();
        Ok(())
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn variable_index(&self, name: &str) -> Result<usize, LevelRingError> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| LevelRingError::VariableMismatch(name.to_string()))
    }

    /// Rank of the coefficient ring over Z/p^N: p^level for mixed specs
    /// (the P-basis 1, P, ..., P^{p^i - 1}), 1 for pure-p.
    pub fn p_rank(&self) -> u64 {
        match self.characteristic {
            Characteristic::Mixed => self.prime.pow(self.level),
            Characteristic::PureP => 1,
        }
    }

    /// p^N as an exact machine integer.
    pub fn coeff_modulus(&self) -> u128 {
        (self.prime as u128).pow(self.precision)
    }

    /// m(α): least generator pillar exponent over generators whose x-part
    /// divides α; `None` when no generator applies (the coefficient module is
    /// free). Truncation-independent.
    pub fn ann_exponent(&self, x_exps: &[u32]) -> Option<u64> {
        debug_assert_eq!(x_exps.len(), self.num_variables());
        self.generators
            .iter()
            .filter(|g| g.x_exps.iter().zip(x_exps).all(|(a, b)| a <= b))
            .map(|g| g.p_exp as u64)
            .min()
    }

    /// Like `ann_exponent` but saturated in the x-direction: the limit of
    /// m(kα) for large k; only the support of α matters.
    pub fn ann_exponent_saturated(&self, x_exps: &[u32]) -> Option<u64> {
        self.generators
            .iter()
            .filter(|g| {
                g.x_exps
                    .iter()
                    .zip(x_exps)
                    .all(|(a, b)| *a == 0 || *b > 0)
            })
            .map(|g| g.p_exp as u64)
            .min()
    }

    /// Additive order exponent of the basis element P^j · X^α under the
    /// p^N truncation: the stored coefficient in slot j is reduced mod p^e.
    pub fn slot_order_capped(&self, x_exps: &[u32], j: u64) -> u32 {
        let q = self.p_rank();
        let cap = self.precision as u64 * q;
        let m_eff = self.ann_exponent(x_exps).map_or(cap, |m| m.min(cap));
        if m_eff <= j {
            0
        } else {
            (m_eff - j).div_ceil(q) as u32
        }
    }

    /// Additive order exponent of P^j · X^α in the untruncated ring:
    /// `None` means infinite order (a free Z_p summand), `Some(0)` means the
    /// basis slot is dead. Pure-p rings are F_p-algebras, so live slots have
    /// order exactly p.
    pub fn slot_order_exact(&self, x_exps: &[u32], j: u64) -> Option<u32> {
        let q = self.p_rank();
        let raw = match self.ann_exponent(x_exps) {
            None => None,
            Some(m) if m <= j => return Some(0),
            Some(m) => Some((m - j).div_ceil(q) as u32),
        };
        match self.characteristic {
            Characteristic::PureP => Some(1),
            Characteristic::Mixed => raw,
        }
    }

    /// Is the untruncated ring reduced? Decided combinatorially on supports.
    pub fn is_reduced(&self) -> bool {
        let n = self.num_variables();
        for mask in 0u32..(1 << n) {
            let indicator: Vec<u32> = (0..n).map(|v| u32::from(mask >> v & 1 == 1)).collect();
            let m_ind = self.ann_exponent(&indicator);
            let m_sat = self.ann_exponent_saturated(&indicator);
            // a live squarefree monomial with a vanishing power
            if m_sat == Some(0) && m_ind != Some(0) {
                return false;
            }
            // a live P-multiple over an eventually-torsion support
            if self.characteristic == Characteristic::Mixed
                && m_sat.is_some()
                && m_ind.map_or(true, |m| m >= 2)
            {
                return false;
            }
        }
        true
    }

    /// Render a monomial for reports and witnesses.
    pub fn monomial_string(&self, p_exp: u64, x_exps: &[u32]) -> String {
        let mut parts = Vec::new();
        if p_exp > 0 {
            let sym = if self.characteristic == Characteristic::Mixed && self.level == 0 {
                "p".to_string()
            } else {
                "P".to_string()
            };
            if p_exp == 1 {
                parts.push(sym);
            } else {
                parts.push(format!("{sym}^{p_exp}"));
            }
        }
        for (v, &e) in self.variables.iter().zip(x_exps) {
            if e == 1 {
                parts.push(v.clone());
            } else if e > 1 {
                parts.push(format!("{v}^{e}"));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for LevelRingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeff = match self.characteristic {
            Characteristic::Mixed => format!("Z/{}^{}", self.prime, self.precision),
            Characteristic::PureP => format!("F_{}", self.prime),
        };
        let vars = if self.characteristic == Characteristic::Mixed {
            let mut v = vec!["P".to_string()];
            v.extend(self.variables.iter().cloned());
            v.join(", ")
        } else {
            self.variables.join(", ")
        };
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| self.monomial_string(g.p_exp as u64, &g.x_exps))
            .collect();
        write!(
            f,
            "{}[{}] level {} / ({})",
            coeff,
            vars,
            self.level,
            gens.join(", ")
        )
    }
}

// deserialization revalidates, so hand-written files cannot bypass the invariants
impl<'de> Deserialize<'de> for LevelRingSpec {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            prime: u64,
            precision: u32,
            level: u32,
            characteristic: Characteristic,
            variables: Vec<String>,
            generators: Vec<PMonomial>,
        }
        let raw = Raw::deserialize(deserializer)?;
        LevelRingSpec::new(
            raw.prime,
            raw.precision,
            raw.level,
            raw.characteristic,
            raw.variables,
            raw.generators,
        )
        .map_err(serde::de::Error::custom)
    }
}

fn minimalize(gens: &mut Vec<PMonomial>) {
    let mut keep: Vec<PMonomial> = Vec::new();
    let mut sorted = gens.clone();
    sorted.sort_by_key(|g| g.total_degree());
    for g in sorted {
        if !keep.iter().any(|k| k.divides(&g)) {
            keep.push(g);
        }
    }
    *gens = keep;
}

/// Trial-division primality test for CLI validation.
pub fn is_prime_u64(n: u64) -> bool {
    is_prime(n)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// All exponent vectors of length `nvars` with total degree <= `max_deg`,
/// in deglex order (degree ascending, then lexicographic).
pub fn exponent_vectors(nvars: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let mut cur = vec![0u32; nvars];
        compositions(d, 0, &mut cur, &mut out);
        if nvars == 0 {
            break; // only the empty vector at degree 0
        }
    }
    out
}

fn compositions(remaining: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.is_empty() {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == cur.len() - 1 {
        cur[pos] = remaining;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        compositions(remaining - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// Deglex comparison of exponent vectors of equal arity.
pub fn deglex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

pub(crate) fn ppow(p: u64, e: u32) -> u128 {
    (p as u128).pow(e)
}
