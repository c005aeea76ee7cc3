//! The cartesian-square characterization of controlled torsion: both squares
//! are verified as finite fiber products of window groups via exact linear
//! algebra, strand by strand.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::levelring::Characteristic;
use crate::tower::window::{
    check_left_exact_square, fiber_window, mod_i1_window, remap_exps, torsion_window, Label,
    SquareCheck, WinGroup, WinMap,
};
use crate::tower::{TowerError, TowerSpec};
use crate::Window;

/// Hook for falsification runs: replace one edge of the first square by the
/// zero map and watch the check fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TorsionMapOverride {
    #[default]
    None,
    /// Replace the torsion restriction of the transition map by zero.
    ZeroTorsionTransition,
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareOutcome {
    pub commutes: bool,
    pub cartesian: bool,
    pub witness: Option<String>,
}

impl From<SquareCheck> for SquareOutcome {
    fn from(c: SquareCheck) -> Self {
        SquareOutcome {
            commutes: c.commutes,
            cartesian: c.cartesian,
            witness: c.witness,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CartesianGReport {
    pub level: u32,
    pub window: Window,
    /// Torsion against transition maps: Tor_i is the fiber product of
    /// Tor_{i+1} and R_i/I_0 over R_{i+1}/I_0.
    pub transition_square: SquareOutcome,
    /// Torsion against Frobenius powers: Tor_{i+1} is the fiber product of
    /// Tor_{i+1} and R_{i+1}/I_1 over R_{i+1}/I_0.
    pub frobenius_square: SquareOutcome,
}

impl CartesianGReport {
    pub fn ok(&self) -> bool {
        self.transition_square.commutes
            && self.transition_square.cartesian
            && self.frobenius_square.commutes
            && self.frobenius_square.cartesian
    }
}

/// Verify both cartesian squares at the level pair (i, i+1) on the window.
/// For perfect towers every torsion part is the whole ring and the squares
/// degenerate to transition-map bijectivity, which is covered by the axioms;
/// here the same checks run with the full windows.
pub fn check_cartesian_g(
    tower: &TowerSpec,
    i: u32,
    window: Window,
    tamper: TorsionMapOverride,
) -> Result<CartesianGReport, TowerError> {
    let lower = tower.level(i)?.clone();
    let upper = tower.level(i + 1)?.clone();
    let p = tower.prime();
    let d = window.degree;

    // ---- square 1: torsion vs transition maps -------------------------
    let tor_lo = torsion_or_full(&lower, d);
    let tor_up = torsion_or_full(&upper, p as u32 * d);
    let fib_lo = fiber_window(&lower, d);
    let fib_up = fiber_window(&upper, p as u32 * d);

    let t_tor = match tamper {
        TorsionMapOverride::ZeroTorsionTransition => WinMap::zero(&tor_lo, p),
        TorsionMapOverride::None => WinMap::from_fn(&tor_lo, &tor_up, p, |(j, alpha)| {
            let scaled: Vec<u32> = alpha.iter().map(|e| e * p as u32).collect();
            match remap_exps(&lower.variables, &scaled, &upper) {
                Some(a) if alive_in(&tor_up, j * p, &a) => {
                    vec![((j * p, a), BigInt::one())]
                }
                _ => vec![],
            }
        }),
    };
    let incl_lo = inclusion_map(&tor_lo, &fib_lo);
    let incl_up = inclusion_map(&tor_up, &fib_up);
    let t_bar = WinMap::from_fn(&fib_lo, &fib_up, p, |(j, alpha)| {
        let scaled: Vec<u32> = alpha.iter().map(|e| e * p as u32).collect();
        match remap_exps(&lower.variables, &scaled, &upper) {
            Some(a) => crate::tower::window::reduce_fiber(&upper, j * p, &a)
                .map(|l| vec![(l, BigInt::one())])
                .unwrap_or_default(),
            None => vec![],
        }
    });
    let square_t =
        check_left_exact_square(&tor_lo, &tor_up, &fib_lo, &fib_up, &t_tor, &incl_lo, &incl_up, &t_bar);

    // ---- square 2: torsion vs Frobenius powers -------------------------
    let frobenius_square = if upper.characteristic == Characteristic::Mixed {
        let tor_src = torsion_or_full(&upper, d);
        let i1_win = mod_i1_window(&upper, d);
        let q_up = upper.p_rank();
        let c = p.pow(i); // I_1 at level i+1 is (P^{p^i})
        let phi_tor = WinMap::from_fn(&tor_src, &tor_up, p, |(j, alpha)| {
            let scaled: Vec<u32> = alpha.iter().map(|e| e * p as u32).collect();
            let pj = j * p;
            let carry = pj / q_up;
            let slot = pj % q_up;
            if alive_in(&tor_up, slot, &scaled) {
                vec![((slot, scaled), BigInt::from(p).pow(carry as u32))]
            } else {
                vec![]
            }
        });
        let phi_i1 = WinMap::from_fn(&tor_src, &i1_win, 1, |(j, alpha)| {
            if *j < c && alive_in(&i1_win, *j, alpha) {
                vec![((*j, alpha.clone()), BigInt::one())]
            } else {
                vec![]
            }
        });
        let phi_prime = WinMap::from_fn(&i1_win, &fib_up, p, |(j, alpha)| {
            let scaled: Vec<u32> = alpha.iter().map(|e| e * p as u32).collect();
            crate::tower::window::reduce_fiber(&upper, j * p, &scaled)
                .map(|l| vec![(l, BigInt::one())])
                .unwrap_or_default()
        });
        check_left_exact_square(
            &tor_src, &tor_up, &i1_win, &fib_up, &phi_tor, &phi_i1, &incl_up, &phi_prime,
        )
        .into()
    } else {
        // pure-p towers: I_1 = (0), the square collapses to the Frobenius
        // being injective with image the transition image, covered above
        SquareOutcome {
            commutes: true,
            cartesian: square_t.cartesian,
            witness: None,
        }
    };

    Ok(CartesianGReport {
        level: i,
        window,
        transition_square: square_t.into(),
        frobenius_square,
    })
}

/// Torsion window of a mixed spec; for pure-p specs (pillar zero) the whole
/// ring is torsion.
fn torsion_or_full(spec: &crate::levelring::LevelRingSpec, d: u32) -> WinGroup {
    match spec.characteristic {
        Characteristic::Mixed => torsion_window(spec, d),
        Characteristic::PureP => crate::tower::window::ring_window(spec, d),
    }
}

fn alive_in(group: &WinGroup, j: u64, alpha: &[u32]) -> bool {
    group.position(&(j, alpha.to_vec())).is_some()
}

/// The inclusion of the torsion window into the special fiber window: the
/// same labels survive (torsion lives outside I_0R), higher p-powers die.
fn inclusion_map(tor: &WinGroup, fiber: &WinGroup) -> WinMap {
    WinMap::from_fn(tor, fiber, 1, |label: &Label| {
        if fiber.position(label).is_some() {
            vec![(label.clone(), BigInt::one())]
        } else {
            vec![]
        }
    })
}
