//! Tower axiom verification on finite windows.
//!
//! Every check is exact on the window and reports either verified-on-window
//! or a concrete witness monomial, minimal in deglex order. The Zariskian
//! condition has no finite certificate and is reported as assumed.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::levelring::{exponent_vectors, LevelRingSpec};
use crate::tower::window::{check_bijective, reduce_fiber, remap_exps, torsion_window, WinMap};
use crate::tower::{pillar_label, TowerError, TowerSpec};
use crate::Window;

use num_bigint::BigInt;
use num_traits::One;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum AxiomStatus {
    VerifiedOnWindow,
    Failed { witness: String },
    Assumed,
}

impl AxiomStatus {
    pub fn is_failure(&self) -> bool {
        matches!(self, AxiomStatus::Failed { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub levels: u32,
    pub window: Window,
    pub axioms: BTreeMap<String, AxiomStatus>,
}

impl AxiomReport {
    /// All finitely checkable axioms verified ((e) stays assumed).
    pub fn all_verified(&self) -> bool {
        !self.axioms.values().any(AxiomStatus::is_failure)
    }

    pub fn first_failure(&self) -> Option<(&str, &str)> {
        self.axioms.iter().find_map(|(k, v)| match v {
            AxiomStatus::Failed { witness } => Some((k.as_str(), witness.as_str())),
            _ => None,
        })
    }
}

/// Check axioms (a)-(d), (f-1), (f-2), (g) of a tower on the window, across
/// levels 0..=L where L is capped by the materialized levels.
pub fn check_axioms(tower: &TowerSpec, levels: u32, window: Window) -> AxiomReport {
    let top = levels.min(tower.top_level());
    let mut axioms = BTreeMap::new();
    axioms.insert("a".to_string(), check_a(tower));
    axioms.insert("b".to_string(), check_b(tower, top, window));
    axioms.insert("c".to_string(), check_c(tower, top, window));
    axioms.insert("d".to_string(), check_d(tower, top, window));
    axioms.insert("e".to_string(), AxiomStatus::Assumed);
    axioms.insert("f1".to_string(), check_f1(tower, window));
    axioms.insert("f2".to_string(), check_f2(tower, top, window));
    axioms.insert("g".to_string(), check_g(tower, top, window));
    AxiomReport {
        levels: top,
        window,
        axioms,
    }
}

fn check_a(tower: &TowerSpec) -> AxiomStatus {
    // p ∈ I_0 holds by construction: I_0 = (p) in mixed characteristic and
    // I_0 = (0) with p = 0 for perfect towers.
    let _ = tower;
    AxiomStatus::VerifiedOnWindow
}

/// (b): t̄_i injective on the special fibers. The transition map sends
/// distinct monomials to distinct monomials, so injectivity on the window
/// means no live monomial dies.
fn check_b(tower: &TowerSpec, top: u32, window: Window) -> AxiomStatus {
    let p = tower.prime();
    for i in 0..top {
        let lower = &tower.levels[i as usize];
        let upper = &tower.levels[i as usize + 1];
        for alpha in exponent_vectors(lower.num_variables(), window.degree) {
            let m = lower.ann_exponent(&alpha).unwrap_or(u64::MAX);
            for j in 0..lower.p_rank().min(m) {
                let image = remap_exps(&lower.variables, &alpha, upper)
                    .map(|a| a.iter().map(|e| e * p as u32).collect::<Vec<u32>>())
                    .and_then(|pa| reduce_fiber(upper, j * p, &pa));
                if image.is_none() {
                    return AxiomStatus::Failed {
                        witness: format!(
                            "t̄_{} kills {}",
                            i,
                            lower.monomial_string(j, &alpha)
                        ),
                    };
                }
            }
        }
    }
    AxiomStatus::VerifiedOnWindow
}

/// (c): Im(φ) ⊆ Im(t̄_i) on R_{i+1}/I_0R_{i+1}.
fn check_c(tower: &TowerSpec, top: u32, window: Window) -> AxiomStatus {
    let p = tower.prime();
    for i in 0..top {
        let lower = &tower.levels[i as usize];
        let upper = &tower.levels[i as usize + 1];
        for beta in exponent_vectors(upper.num_variables(), window.degree) {
            let m = upper.ann_exponent(&beta).unwrap_or(u64::MAX);
            for j in 0..upper.p_rank().min(m) {
                let pbeta: Vec<u32> = beta.iter().map(|e| e * p as u32).collect();
                if reduce_fiber(upper, j * p, &pbeta).is_none() {
                    continue; // φ(m) = 0 is trivially in the image
                }
                let preimage = remap_exps(&upper.variables, &beta, lower)
                    .and_then(|a| reduce_fiber(lower, j, &a));
                if preimage.is_none() {
                    return AxiomStatus::Failed {
                        witness: format!(
                            "φ({}) escapes Im(t̄_{})",
                            upper.monomial_string(j, &beta),
                            i
                        ),
                    };
                }
            }
        }
    }
    AxiomStatus::VerifiedOnWindow
}

/// (d): F_i surjective, by hitting every live target monomial.
fn check_d(tower: &TowerSpec, top: u32, window: Window) -> AxiomStatus {
    for i in 0..top {
        let lower = &tower.levels[i as usize];
        let upper = &tower.levels[i as usize + 1];
        for alpha in exponent_vectors(lower.num_variables(), window.degree) {
            let m = lower.ann_exponent(&alpha).unwrap_or(u64::MAX);
            for j in 0..lower.p_rank().min(m) {
                let hit = remap_exps(&lower.variables, &alpha, upper)
                    .and_then(|a| reduce_fiber(upper, j, &a))
                    .is_some();
                if !hit {
                    return AxiomStatus::Failed {
                        witness: format!(
                            "F_{} misses {}",
                            i,
                            lower.monomial_string(j, &alpha)
                        ),
                    };
                }
            }
        }
    }
    AxiomStatus::VerifiedOnWindow
}

/// (f-1): I_1^p = I_0R_1 as monomial ideals of R_1.
fn check_f1(tower: &TowerSpec, window: Window) -> AxiomStatus {
    if tower.is_perfect() {
        return AxiomStatus::VerifiedOnWindow; // both sides are (0)
    }
    if tower.top_level() < 1 {
        return AxiomStatus::Failed {
            witness: "tower has no level 1".to_string(),
        };
    }
    let r1 = &tower.levels[1];
    let lhs = pillar_label(tower, 1, 1).expect("mixed pillar") * tower.prime();
    let rhs = pillar_label(tower, 0, 1).expect("mixed pillar");
    match ideal_windows_equal(r1, lhs, rhs, window.degree) {
        None => AxiomStatus::VerifiedOnWindow,
        Some(witness) => AxiomStatus::Failed { witness },
    }
}

/// Compare the window monomial sets of two principal monomial ideals
/// (P^a) and (P^b) in `spec`.
fn ideal_windows_equal(spec: &LevelRingSpec, a: u64, b: u64, max_deg: u32) -> Option<String> {
    let q = spec.p_rank();
    for alpha in exponent_vectors(spec.num_variables(), max_deg) {
        let m = spec.ann_exponent(&alpha).unwrap_or(u64::MAX);
        for j in 0..q.min(m) {
            let in_lhs = j >= a;
            let in_rhs = j >= b;
            if in_lhs != in_rhs {
                return Some(format!(
                    "{} lies in exactly one side",
                    spec.monomial_string(j, &alpha)
                ));
            }
        }
    }
    None
}

/// (f-2): Ker(F_i) = I_1 · (R_{i+1}/I_0R_{i+1}) on the window.
fn check_f2(tower: &TowerSpec, top: u32, window: Window) -> AxiomStatus {
    if tower.is_perfect() {
        // pillar is zero: the kernel must vanish, which reduces to (b) of
        // the Frobenius-inverse structure; verify the kernel is empty
        for i in 0..top {
            let lower = &tower.levels[i as usize];
            let upper = &tower.levels[i as usize + 1];
            for beta in exponent_vectors(upper.num_variables(), window.degree) {
                if upper.ann_exponent(&beta) == Some(0) {
                    continue;
                }
                let dead = remap_exps(&upper.variables, &beta, lower)
                    .and_then(|a| reduce_fiber(lower, 0, &a))
                    .is_none();
                if dead {
                    return AxiomStatus::Failed {
                        witness: format!(
                            "perfect-tower F_{} has {} in its kernel",
                            i,
                            upper.monomial_string(0, &beta)
                        ),
                    };
                }
            }
        }
        return AxiomStatus::VerifiedOnWindow;
    }
    for i in 0..top {
        let lower = &tower.levels[i as usize];
        let upper = &tower.levels[i as usize + 1];
        let i1_exp = pillar_label(tower, 1, i + 1).expect("mixed pillar");
        for beta in exponent_vectors(upper.num_variables(), window.degree) {
            let m = upper.ann_exponent(&beta).unwrap_or(u64::MAX);
            for j in 0..upper.p_rank().min(m) {
                let in_kernel = remap_exps(&upper.variables, &beta, lower)
                    .and_then(|a| reduce_fiber(lower, j, &a))
                    .is_none();
                let in_i1 = j >= i1_exp;
                if in_kernel != in_i1 {
                    return AxiomStatus::Failed {
                        witness: format!(
                            "{}: kernel membership {} vs I_1 membership {} at level {}",
                            upper.monomial_string(j, &beta),
                            in_kernel,
                            in_i1,
                            i + 1
                        ),
                    };
                }
            }
        }
    }
    AxiomStatus::VerifiedOnWindow
}

/// (g): I_0 kills the torsion, and the Frobenius projection restricts to a
/// bijection of the torsion windows compatible with the inclusions into the
/// special fibers.
fn check_g(tower: &TowerSpec, top: u32, window: Window) -> AxiomStatus {
    if tower.is_perfect() {
        // I_0 = (0): the torsion is everything and (F_i)_tor = F_i, whose
        // bijectivity is covered by (b)/(d); I_0 · R_i = 0 holds trivially
        return AxiomStatus::VerifiedOnWindow;
    }
    // part 1: p · (R_i)_tor = 0
    for i in 0..=top {
        let spec = &tower.levels[i as usize];
        let q = spec.p_rank();
        for alpha in exponent_vectors(spec.num_variables(), window.degree) {
            let Some(m) = spec.ann_exponent(&alpha) else {
                continue;
            };
            for j in 0..q.min(m) {
                if j + q < m {
                    return AxiomStatus::Failed {
                        witness: format!(
                            "p does not kill the torsion monomial {} at level {}",
                            spec.monomial_string(j, &alpha),
                            i
                        ),
                    };
                }
            }
        }
    }
    // part 2: (F_i)_tor is a bijection commuting with the fiber square
    for i in 0..top {
        let lower = &tower.levels[i as usize];
        let upper = &tower.levels[i as usize + 1];
        let tor_up = torsion_window(upper, window.degree);
        let tor_lo = torsion_window(lower, window.degree);
        let f_tor = WinMap::from_fn(&tor_up, &tor_lo, 1, |(j, beta)| {
            let alpha = match remap_exps(&upper.variables, beta, lower) {
                Some(a) => a,
                None => return vec![],
            };
            match crate::tower::window::reduce_exact(lower, *j, &alpha) {
                Some((label, coeff)) => vec![(label, coeff)],
                None => vec![],
            }
        });
        // the square with the fiber inclusions commutes by construction of
        // reduce_exact; bijectivity is the finite content
        let (bijective, witness) = check_bijective(&tor_up, &tor_lo, &f_tor);
        if !bijective {
            return AxiomStatus::Failed {
                witness: format!(
                    "(F_{})_tor is not a bijection of torsion windows: {}",
                    i,
                    witness.unwrap_or_default()
                ),
            };
        }
        // explicit commuting-square spot check on the window basis
        for gen in &tor_up.gens {
            let (j, beta) = &gen.label;
            let via_f = remap_exps(&upper.variables, beta, lower)
                .and_then(|a| crate::tower::window::reduce_exact(lower, *j, &a))
                .and_then(|((jj, aa), coeff)| {
                    // include into the fiber: any p-multiple dies there
                    if coeff == BigInt::one() {
                        reduce_fiber(lower, jj, &aa)
                    } else {
                        None
                    }
                });
            let via_phi = reduce_fiber(upper, *j, beta)
                .and_then(|(_, bb)| remap_exps(&upper.variables, &bb, lower))
                .and_then(|aa| reduce_fiber(lower, *j, &aa));
            if via_f != via_phi {
                return AxiomStatus::Failed {
                    witness: format!(
                        "torsion square does not commute at {}",
                        upper.monomial_string(*j, beta)
                    ),
                };
            }
        }
    }
    AxiomStatus::VerifiedOnWindow
}

/// Exact pillar compatibility: I_{i+1}^{[p]} = I_i R_{i+1} as monomial
/// ideals, checked on the window, together with (f-1).
pub fn pillar_check(tower: &TowerSpec, i: u32, window: Window) -> Result<bool, TowerError> {
    let upper = tower.level(i + 1)?;
    if tower.is_perfect() {
        return Ok(true); // all pillars are (0)
    }
    let lhs = pillar_label(tower, i + 1, i + 1).expect("mixed pillar") * tower.prime();
    let rhs = pillar_label(tower, i, i + 1).expect("mixed pillar");
    let frobenius_compat = ideal_windows_equal(upper, lhs, rhs, window.degree).is_none();
    let f1 = !check_f1(tower, window).is_failure();
    Ok(frobenius_compat && f1)
}
