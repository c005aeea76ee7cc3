//! Decomposition of a tower into its torsion-free and perfect parts with
//! cartesian certificates, and the converse gluing construction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::levelring::{
    radical_quotient, torsion_free_quotient, Characteristic, LevelRingSpec, PMonomial,
};
use crate::tower::axioms::{check_axioms, AxiomReport};
use crate::tower::cartesian::SquareOutcome;
use crate::tower::window::{
    check_bijective, check_left_exact_square, pure_window, remap_exps, ring_window, WinGen,
    WinGroup, WinMap,
};
use crate::tower::{build_monomial_tower, TowerError, TowerSpec};
use crate::Window;

#[derive(Clone, Debug, Serialize)]
pub struct LevelCertificate {
    pub level: u32,
    pub square: SquareOutcome,
    /// lem-BC hypothesis: no window monomial is both torsion and nilpotent.
    pub torsion_radical_disjoint: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub torsion_free: TowerSpec,
    pub reduced_fiber: TowerSpec,
    pub overlap: TowerSpec,
    pub certificates: Vec<LevelCertificate>,
}

impl DecompositionReport {
    pub fn all_certified(&self) -> bool {
        self.certificates
            .iter()
            .all(|c| c.square.commutes && c.square.cartesian && c.torsion_radical_disjoint)
    }
}

/// Decompose a mixed-characteristic tower: levelwise torsion-free quotient
/// and reduced special fiber, with each square R_i -> R̃_i over the reduced
/// fibers certified cartesian on the window.
pub fn decompose_tower(
    tower: &TowerSpec,
    window: Window,
) -> Result<DecompositionReport, TowerError> {
    if tower.is_perfect() {
        return Err(TowerError::Unsupported(
            "a perfect tower equals its reduced part; nothing to decompose".into(),
        ));
    }
    let d = window.degree;
    let mut tilde_levels = Vec::new();
    let mut red_levels = Vec::new();
    let mut overlap_levels = Vec::new();
    let mut certificates = Vec::new();
    for (i, spec) in tower.levels.iter().enumerate() {
        let tilde = torsion_free_quotient(spec)?;
        let red = tower.reduced_special_fiber(i as u32)?;
        let tilde_tower_probe = TowerSpec {
            levels: vec![tilde.clone()],
            assumed: vec![],
        };
        let red_tilde = tilde_tower_probe.reduced_special_fiber(0)?;

        let a = ring_window(spec, d);
        let b1 = ring_window(&tilde, d);
        let red_weights = tower.fiber_weights(&red);
        let red_tilde_weights = tower.fiber_weights(&red_tilde);
        let b2 = pure_window(&red, d, &red_weights);
        let c = pure_window(&red_tilde, d, &red_tilde_weights);

        let f1 = projection_map(&a, spec, &b1, &tilde);
        let f2 = to_reduced_map(&a, spec, &b2, &red);
        let g1 = to_reduced_map(&b1, &tilde, &c, &red_tilde);
        let g2 = projection_map(&b2, &red, &c, &red_tilde);
        let square = check_left_exact_square(&a, &b1, &b2, &c, &f1, &f2, &g1, &g2);

        // lem-BC: torsion ∩ nilradical = (0), monomial by monomial
        let mut disjoint = true;
        let mut witness = None;
        for gen in &a.gens {
            let (j, alpha) = &gen.label;
            let torsion = spec.ann_exponent(alpha).is_some();
            let m_sat = spec.ann_exponent_saturated(alpha);
            let nilpotent = match m_sat {
                Some(0) => true,
                Some(_) => *j >= 1,
                None => false,
            };
            if torsion && nilpotent {
                disjoint = false;
                witness = Some(format!(
                    "{} is torsion and nilpotent at level {}",
                    spec.monomial_string(*j, alpha),
                    i
                ));
                break;
            }
        }

        let square_witness = square.witness.clone();
        certificates.push(LevelCertificate {
            level: i as u32,
            square: square.into(),
            torsion_radical_disjoint: disjoint,
            witness: witness.or(square_witness),
        });
        tilde_levels.push(tilde);
        red_levels.push(red);
        overlap_levels.push(red_tilde);
    }
    Ok(DecompositionReport {
        torsion_free: TowerSpec {
            levels: tilde_levels,
            assumed: tower.assumed.clone(),
        },
        reduced_fiber: TowerSpec {
            levels: red_levels,
            assumed: vec![],
        },
        overlap: TowerSpec {
            levels: overlap_levels,
            assumed: vec![],
        },
        certificates,
    })
}

/// Quotient projection between windows of specs over the same coefficient
/// data, matching variables by name (eliminated variables kill monomials).
fn projection_map(
    src_win: &WinGroup,
    src: &LevelRingSpec,
    tgt_win: &WinGroup,
    tgt: &LevelRingSpec,
) -> WinMap {
    let src_vars = src.variables.clone();
    let tgt = tgt.clone();
    let tgt_win_probe = tgt_win.clone();
    WinMap::from_fn(src_win, tgt_win, 1, move |(j, alpha)| {
        match remap_exps(&src_vars, alpha, &tgt) {
            Some(a) if tgt_win_probe.position(&(*j, a.clone())).is_some() => {
                vec![((*j, a), BigInt::one())]
            }
            _ => vec![],
        }
    })
}

/// Projection of a mixed ring window onto its reduced special fiber: the
/// residue of P dies (it is nilpotent), monomials surviving the radical map
/// across by name.
fn to_reduced_map(
    src_win: &WinGroup,
    src: &LevelRingSpec,
    tgt_win: &WinGroup,
    red: &LevelRingSpec,
) -> WinMap {
    let src_vars = src.variables.clone();
    let red = red.clone();
    let tgt_win_probe = tgt_win.clone();
    WinMap::from_fn(src_win, tgt_win, 1, move |(j, alpha)| {
        if *j >= 1 {
            return vec![]; // P is nilpotent in the special fiber
        }
        match remap_exps(&src_vars, alpha, &red) {
            Some(a) if tgt_win_probe.position(&(0, a.clone())).is_some() => {
                vec![((0, a), BigInt::one())]
            }
            _ => vec![],
        }
    })
}

/// How an attaching map sends a perfect-side variable into the reduced
/// special fiber of the base tower.
#[derive(Clone, Debug, PartialEq, Eq, serde::Deserialize, Serialize)]
#[serde(untagged)]
pub enum AttachTarget {
    Named(String),
}

/// Attaching map on generators: perfect-side variable name to either "0" or
/// the name of a variable of the reduced special fiber.
pub type AttachMap = BTreeMap<String, String>;

#[derive(Clone, Debug, Serialize)]
pub struct GlueConditions {
    /// The level squares 0 -> R_i -> R'_i ⊕ S_i -> red_i are exact.
    pub fiber_squares: Vec<SquareOutcome>,
    /// (i)/(iii): I_0 R_i maps isomorphically onto I_0 S_i.
    pub pillar_i0: Vec<bool>,
    /// (ii)/(iii): I_1 R_i maps isomorphically onto I_1 S_i (levels >= 1).
    pub pillar_i1: Vec<bool>,
    /// (iv): torsion parts surject onto the corner torsion.
    pub torsion_surjective: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct GlueReport {
    pub tower: TowerSpec,
    pub conditions: GlueConditions,
    pub axioms: AxiomReport,
}

impl GlueReport {
    pub fn all_verified(&self) -> bool {
        self.axioms.all_verified()
            && self.conditions.fiber_squares.iter().all(|s| s.commutes && s.cartesian)
            && self.conditions.pillar_i0.iter().all(|&b| b)
            && self.conditions.pillar_i1.iter().all(|&b| b)
            && self.conditions.torsion_surjective.iter().all(|&b| b)
    }
}

/// Glue a reduced perfect monomial ring onto a tower along its reduced
/// special fiber. Two attaching shapes are supported: the augmentation
/// (every perfect-side variable to 0, requiring the reduced fiber to be
/// the prime field) and the identity renaming (the perfect side is the
/// reduced fiber itself). Both cover the torsion constructions for monomial
/// quotients; the output is verified levelwise.
pub fn glue_towers(
    perfect_side: &LevelRingSpec,
    tower: &TowerSpec,
    attach: &AttachMap,
    window: Window,
) -> Result<GlueReport, TowerError> {
    if perfect_side.characteristic != Characteristic::PureP {
        return Err(TowerError::Unsupported(
            "the glued side must be a pure-p (perfect) monomial ring".into(),
        ));
    }
    if perfect_side.prime != tower.prime() {
        return Err(TowerError::Unsupported("primes differ".into()));
    }
    if radical_quotient(perfect_side) != *perfect_side {
        return Err(TowerError::NotReduced);
    }
    if perfect_side.level != 0 {
        return Err(TowerError::BaseLevelNonzero(perfect_side.level));
    }
    for v in &perfect_side.variables {
        if !attach.contains_key(v) {
            return Err(TowerError::MapNotDefined(format!(
                "variable `{v}` has no attaching target"
            )));
        }
    }
    let red0 = tower.reduced_special_fiber(0)?;
    let all_zero = perfect_side.variables.iter().all(|v| attach[v] == "0");
    let all_named = perfect_side.variables.iter().all(|v| attach[v] != "0");

    let glued = if all_zero {
        if red0.num_variables() != 0 {
            return Err(TowerError::Unsupported(
                "attaching everything to 0 needs the reduced special fiber to be the prime field"
                    .into(),
            ));
        }
        if let Some(shared) = perfect_side
            .variables
            .iter()
            .find(|v| tower.base().variables.contains(v))
        {
            return Err(TowerError::Unsupported(format!(
                "variable name `{shared}` appears on both sides"
            )));
        }
        glue_augmentation(perfect_side, tower)?
    } else if all_named {
        // identity shape: renaming the perfect side along the map must give
        // exactly the reduced special fiber
        let renamed = rename_onto(perfect_side, attach, &red0)?;
        if renamed != red0 {
            return Err(TowerError::MapNotDefined(
                "named attaching must identify the perfect side with the reduced special fiber"
                    .into(),
            ));
        }
        tower.clone()
    } else {
        return Err(TowerError::Unsupported(
            "mixed attaching targets are not supported; use all-0 or a full renaming".into(),
        ));
    };

    let conditions = verify_glue_conditions(perfect_side, tower, &glued, attach, window)?;
    let axioms = check_axioms(&glued, glued.top_level(), window);
    Ok(GlueReport {
        tower: glued,
        conditions,
        axioms,
    })
}

fn glue_augmentation(
    perfect_side: &LevelRingSpec,
    tower: &TowerSpec,
) -> Result<TowerSpec, TowerError> {
    let base = tower.base();
    let ns = base.num_variables();
    let nr = perfect_side.num_variables();
    let mut variables: Vec<&str> = base.variables.iter().map(String::as_str).collect();
    variables.extend(perfect_side.variables.iter().map(String::as_str));
    let mut generators = Vec::new();
    for g in &base.generators {
        let mut exps = g.x_exps.clone();
        exps.extend(std::iter::repeat(0).take(nr));
        generators.push(PMonomial::new(g.p_exp, exps));
    }
    for g in &perfect_side.generators {
        let mut exps = vec![0u32; ns];
        exps.extend(g.x_exps.iter().cloned());
        generators.push(PMonomial::new(0, exps));
    }
    for v in 0..nr {
        // the perfect side sits in p-torsion: p * v = 0
        let mut exps = vec![0u32; ns + nr];
        exps[ns + v] = 1;
        generators.push(PMonomial::new(1, exps));
        // and it meets the base variables only at zero
        for w in 0..ns {
            let mut cross = vec![0u32; ns + nr];
            cross[ns + v] = 1;
            cross[w] = 1;
            generators.push(PMonomial::new(0, cross));
        }
    }
    let glued_base =
        LevelRingSpec::mixed(base.prime, base.precision, 0, variables, generators)?;
    build_monomial_tower(&glued_base, tower.top_level())
}

fn rename_onto(
    perfect_side: &LevelRingSpec,
    attach: &AttachMap,
    red0: &LevelRingSpec,
) -> Result<LevelRingSpec, TowerError> {
    let mut targets = Vec::new();
    for v in &perfect_side.variables {
        let t = &attach[v];
        if !red0.variables.contains(t) {
            return Err(TowerError::MapNotDefined(format!(
                "`{v}` maps to `{t}`, not a variable of the reduced special fiber"
            )));
        }
        targets.push(t.clone());
    }
    {
        let mut sorted = targets.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != targets.len() {
            return Err(TowerError::MapNotDefined(
                "named attaching targets must be distinct".into(),
            ));
        }
    }
    // rebuild the perfect side in the reduced fiber's coordinate order
    let perm: Vec<usize> = red0
        .variables
        .iter()
        .map(|t| {
            targets
                .iter()
                .position(|u| u == t)
                .ok_or_else(|| TowerError::MapNotDefined(format!("`{t}` is not hit")))
        })
        .collect::<Result<_, _>>()?;
    let gens = perfect_side
        .generators
        .iter()
        .map(|g| PMonomial::new(0, perm.iter().map(|&src| g.x_exps[src]).collect()))
        .collect();
    let vars: Vec<&str> = red0.variables.iter().map(String::as_str).collect();
    Ok(LevelRingSpec::pure(perfect_side.prime, red0.level, vars, gens)?)
}

/// Window verification of the gluing conditions: the level squares are
/// cartesian, pillar ideals correspond isomorphically, torsion surjects.
fn verify_glue_conditions(
    perfect_side: &LevelRingSpec,
    base_tower: &TowerSpec,
    glued: &TowerSpec,
    attach: &AttachMap,
    window: Window,
) -> Result<GlueConditions, TowerError> {
    let d = window.degree;
    let p = glued.prime();
    let mut fiber_squares = Vec::new();
    let mut pillar_i0 = Vec::new();
    let mut pillar_i1 = Vec::new();
    let mut torsion_surjective = Vec::new();
    for i in 0..=glued.top_level() {
        let out = glued.level(i)?;
        let s_i = base_tower.level(i)?;
        let perfect_i = LevelRingSpec::new(
            perfect_side.prime,
            1,
            i,
            Characteristic::PureP,
            perfect_side.variables.clone(),
            perfect_side.generators.clone(),
        )
        .map_err(TowerError::Ring)?;
        let red_i = base_tower.reduced_special_fiber(i)?;

        let a = ring_window(out, d);
        let b1 = pure_window(&perfect_i, d, &vec![1; perfect_i.num_variables()]);
        let b2 = ring_window(s_i, d);
        let red_weights = base_tower.fiber_weights(&red_i);
        let c = pure_window(&red_i, d, &red_weights);

        // translate glued-ring variables to perfect-side variables: under the
        // augmentation they share names, under a renaming we invert the map
        let name_map: BTreeMap<String, String> = if perfect_side
            .variables
            .iter()
            .all(|v| attach[v] == "0")
        {
            perfect_side
                .variables
                .iter()
                .map(|v| (v.clone(), v.clone()))
                .collect()
        } else {
            attach.iter().map(|(u, t)| (t.clone(), u.clone())).collect()
        };
        let f1 = out_to_perfect(&a, out, &b1, &perfect_i, &name_map);
        let f2 = out_to_base(&a, out, &b2, s_i);
        let g1 = perfect_to_red(&b1, &perfect_i, &c, &red_i, attach);
        let g2 = to_reduced_map(&b2, s_i, &c, &red_i);
        let square = check_left_exact_square(&a, &b1, &b2, &c, &f1, &f2, &g1, &g2);
        fiber_squares.push(SquareOutcome::from(square));

        // pillar correspondence through the base projection
        pillar_i0.push(pillar_ideals_match(out, s_i, d, p.pow(i)));
        if i >= 1 {
            pillar_i1.push(pillar_ideals_match(out, s_i, d, p.pow(i - 1)));
        }

        // (iv): every reduced-fiber window monomial is hit by the perfect
        // side (entirely torsion over its zero pillar) or by the torsion of
        // the base tower
        let mut hit = vec![false; c.len()];
        for entries in &g1.entries {
            for (t, _) in entries {
                hit[*t] = true;
            }
        }
        for (src_idx, entries) in g2.entries.iter().enumerate() {
            if s_i.ann_exponent(&b2.gens[src_idx].label.1).is_none() {
                continue; // not a torsion element of the base
            }
            for (t, _) in entries {
                hit[*t] = true;
            }
        }
        torsion_surjective.push(hit.iter().all(|&h| h));
    }
    Ok(GlueConditions {
        fiber_squares,
        pillar_i0,
        pillar_i1,
        torsion_surjective,
    })
}

/// The projection of the glued ring onto the perfect side: positive powers
/// of P die, variables translate through `name_map`, untranslated variables
/// die.
fn out_to_perfect(
    a: &WinGroup,
    out: &LevelRingSpec,
    b1: &WinGroup,
    perfect: &LevelRingSpec,
    name_map: &BTreeMap<String, String>,
) -> WinMap {
    let out_vars = out.variables.clone();
    let perfect = perfect.clone();
    let name_map = name_map.clone();
    let probe = b1.clone();
    WinMap::from_fn(a, b1, 1, move |(j, alpha)| {
        if *j >= 1 {
            return vec![];
        }
        let mut target = vec![0u32; perfect.num_variables()];
        for (v, &e) in out_vars.iter().zip(alpha) {
            if e == 0 {
                continue;
            }
            match name_map
                .get(v)
                .and_then(|u| perfect.variables.iter().position(|pv| pv == u))
            {
                Some(idx) => target[idx] += e,
                None => return vec![],
            }
        }
        if probe.position(&(0, target.clone())).is_some() {
            vec![((0, target), BigInt::one())]
        } else {
            vec![]
        }
    })
}

/// The projection of the glued ring onto the base tower level: perfect-side
/// variables die.
fn out_to_base(a: &WinGroup, out: &LevelRingSpec, b2: &WinGroup, s: &LevelRingSpec) -> WinMap {
    let out_vars = out.variables.clone();
    let s = s.clone();
    let probe = b2.clone();
    WinMap::from_fn(a, b2, 1, move |(j, alpha)| {
        match remap_exps(&out_vars, alpha, &s) {
            Some(sa) if probe.position(&(*j, sa.clone())).is_some() => {
                vec![((*j, sa), BigInt::one())]
            }
            _ => vec![],
        }
    })
}

/// The attaching map on the perfect-side window.
fn perfect_to_red(
    b1: &WinGroup,
    perfect: &LevelRingSpec,
    c: &WinGroup,
    red: &LevelRingSpec,
    attach: &AttachMap,
) -> WinMap {
    let perfect_vars = perfect.variables.clone();
    let attach = attach.clone();
    let red = red.clone();
    let probe = c.clone();
    WinMap::from_fn(b1, c, 1, move |(_, alpha)| {
        let mut target = vec![0u32; red.num_variables()];
        for (v, &e) in perfect_vars.iter().zip(alpha) {
            if e == 0 {
                continue;
            }
            match attach.get(v).map(String::as_str) {
                Some("0") | None => return vec![],
                Some(name) => match red.variables.iter().position(|r| r == name) {
                    Some(idx) => target[idx] += e,
                    None => return vec![],
                },
            }
        }
        if probe.position(&(0, target.clone())).is_some() {
            vec![((0, target), BigInt::one())]
        } else {
            vec![]
        }
    })
}

/// I_0 (c = p^i) or I_1 (c = p^{i-1}) correspondence: the window subgroup
/// (P^c)·out maps bijectively onto (P^c)·S under the base projection.
fn pillar_ideals_match(out: &LevelRingSpec, s: &LevelRingSpec, d: u32, c: u64) -> bool {
    let src = pillar_multiple_window(out, d, c);
    let tgt = pillar_multiple_window(s, d, c);
    let out_vars = out.variables.clone();
    let s_probe = s.clone();
    let tgt_probe = tgt.clone();
    let map = WinMap::from_fn(&src, &tgt, 1, move |(j, alpha)| {
        match remap_exps(&out_vars, alpha, &s_probe) {
            Some(sa) if tgt_probe.position(&(*j, sa.clone())).is_some() => {
                vec![((*j, sa), BigInt::one())]
            }
            _ => vec![],
        }
    });
    check_bijective(&src, &tgt, &map).0
}

/// Window presentation of the subgroup (P^c)·R inside the exact ring window:
/// slots with j >= c keep their order, lower slots contribute their
/// p-multiples (order drops by the carry count).
fn pillar_multiple_window(spec: &LevelRingSpec, d: u32, c: u64) -> WinGroup {
    let q = spec.p_rank();
    let base = ring_window(spec, d);
    let mut gens = Vec::new();
    for g in base.gens {
        let (j, _) = &g.label;
        if *j >= c {
            gens.push(g);
        } else {
            let s = (c - j).div_ceil(q) as u32;
            match g.order {
                None => gens.push(WinGen { order: None, ..g }),
                Some(e) if e > s => gens.push(WinGen {
                    order: Some(e - s),
                    ..g
                }),
                Some(_) => {}
            }
        }
    }
    WinGroup::new(spec.prime, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> Window {
        Window::new(4, 4)
    }

    fn zp_tower(p: u64, levels: u32) -> TowerSpec {
        let base = LevelRingSpec::mixed(p, 4, 0, vec![], vec![]).unwrap();
        build_monomial_tower(&base, levels).unwrap()
    }

    #[test]
    fn decompose_two_point() {
        let base =
            LevelRingSpec::mixed(2, 4, 0, vec!["x"], vec![PMonomial::new(1, vec![1])]).unwrap();
        let t = build_monomial_tower(&base, 2).unwrap();
        let dec = decompose_tower(&t, window()).unwrap();
        assert!(dec.all_certified(), "{:?}", dec.certificates);
        // torsion-free part is the Z_p tower, reduced part is F_p[x]
        assert!(dec.torsion_free.base().variables.is_empty());
        assert_eq!(dec.reduced_fiber.base().variables, vec!["x"]);
        assert!(dec.reduced_fiber.base().generators.is_empty());
        assert!(dec.overlap.base().variables.is_empty());
    }

    #[test]
    fn decompose_zp_tower_degenerates() {
        let t = zp_tower(2, 2);
        let dec = decompose_tower(&t, window()).unwrap();
        assert!(dec.all_certified());
        assert_eq!(dec.torsion_free.levels, t.levels);
        assert!(dec.reduced_fiber.base().variables.is_empty());
    }

    #[test]
    fn glue_reproduces_torsion_example() {
        // F_p[x,y] -> F_p glued onto the Z_p tower gives the torsion tower
        let t = zp_tower(2, 2);
        let perfect = LevelRingSpec::pure(2, 0, vec!["x", "y"], vec![]).unwrap();
        let attach: AttachMap =
            BTreeMap::from([("x".to_string(), "0".to_string()), ("y".to_string(), "0".to_string())]);
        let report = glue_towers(&perfect, &t, &attach, window()).unwrap();
        assert!(report.all_verified(), "{:?}", report.conditions);
        let expected = build_monomial_tower(
            &LevelRingSpec::mixed(
                2,
                4,
                0,
                vec!["x", "y"],
                vec![PMonomial::new(1, vec![1, 0]), PMonomial::new(1, vec![0, 1])],
            )
            .unwrap(),
            2,
        )
        .unwrap();
        assert_eq!(report.tower.levels, expected.levels);
    }

    #[test]
    fn glue_identity_returns_base() {
        let base = LevelRingSpec::mixed(3, 4, 0, vec![], vec![]).unwrap();
        let t = build_monomial_tower(&base, 2).unwrap();
        let perfect = LevelRingSpec::pure(3, 0, vec![], vec![]).unwrap();
        let attach: AttachMap = BTreeMap::new();
        let report = glue_towers(&perfect, &t, &attach, window()).unwrap();
        assert!(report.all_verified());
        assert_eq!(report.tower.levels, t.levels);
    }

    #[test]
    fn glue_one_variable_gives_two_point_tower() {
        let t = zp_tower(3, 2);
        let perfect = LevelRingSpec::pure(3, 0, vec!["x"], vec![]).unwrap();
        let attach: AttachMap = BTreeMap::from([("x".to_string(), "0".to_string())]);
        let report = glue_towers(&perfect, &t, &attach, window()).unwrap();
        assert!(report.all_verified());
        let expected = build_monomial_tower(
            &LevelRingSpec::mixed(3, 4, 0, vec!["x"], vec![PMonomial::new(1, vec![1])]).unwrap(),
            2,
        )
        .unwrap();
        assert_eq!(report.tower.levels, expected.levels);
        assert!(report.axioms.all_verified());
    }

    #[test]
    fn glue_rejects_non_reduced() {
        let t = zp_tower(2, 1);
        let bad = LevelRingSpec::pure(2, 0, vec!["x"], vec![PMonomial::new(0, vec![2])]).unwrap();
        let attach: AttachMap = BTreeMap::from([("x".to_string(), "0".to_string())]);
        assert!(matches!(
            glue_towers(&bad, &t, &attach, window()),
            Err(TowerError::NotReduced)
        ));
    }

    #[test]
    fn glue_rejects_missing_map() {
        let t = zp_tower(2, 1);
        let perfect = LevelRingSpec::pure(2, 0, vec!["x"], vec![]).unwrap();
        let attach: AttachMap = BTreeMap::new();
        assert!(matches!(
            glue_towers(&perfect, &t, &attach, window()),
            Err(TowerError::MapNotDefined(_))
        ));
    }

    #[test]
    fn glue_then_decompose_round_trip() {
        let t = zp_tower(2, 2);
        let perfect = LevelRingSpec::pure(2, 0, vec!["x", "y"], vec![]).unwrap();
        let attach: AttachMap =
            BTreeMap::from([("x".to_string(), "0".to_string()), ("y".to_string(), "0".to_string())]);
        let glued = glue_towers(&perfect, &t, &attach, window()).unwrap();
        let dec = decompose_tower(&glued.tower, window()).unwrap();
        assert!(dec.all_certified());
        assert_eq!(dec.torsion_free.levels, t.levels);
        // the reduced part recovers the perfect side at every level
        for lvl in &dec.reduced_fiber.levels {
            assert_eq!(lvl.variables, perfect.variables);
            assert_eq!(lvl.generators, perfect.generators);
        }
    }
}
