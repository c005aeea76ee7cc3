use super::{
    exponent_vectors, Characteristic, LevelRingError, LevelRingSpec, PMonomial,
};

/// Which distinguished pillar ideal to quotient by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pillar {
    /// I_0 = (p), i.e. (P^{p^i}) at level i.
    I0,
    /// I_1 extended to the current level: (P^{p^{i-1}}), defined for i >= 1.
    I1,
}

/// Quotient of a level ring by a pillar ideal. The result is a pure-p
/// monomial ring in which the residue of P (when it survives) is an ordinary
/// nilpotent variable, its order recorded as a plain monomial generator.
pub fn mod_pillar(spec: &LevelRingSpec, which: Pillar) -> Result<LevelRingSpec, LevelRingError> {
    if spec.characteristic == Characteristic::PureP {
        // perfect-tower pillars are zero; the quotient is the ring itself
        return Ok(spec.clone());
    }
    let nilpotency: u64 = match which {
        Pillar::I0 => spec.prime.pow(spec.level),
        Pillar::I1 => {
            if spec.level == 0 {
                return Err(LevelRingError::NoPillar);
            }
            spec.prime.pow(spec.level - 1)
        }
    };
    let p_name = fresh_name(&spec.variables, "P");
    let mut variables = vec![p_name];
    variables.extend(spec.variables.iter().cloned());
    let mut generators = vec![PMonomial::new(
        0,
        prepend(nilpotency as u32, &vec![0; spec.num_variables()]),
    )];
    for g in &spec.generators {
        generators.push(PMonomial::new(0, prepend(g.p_exp, &g.x_exps)));
    }
    LevelRingSpec::new(
        spec.prime,
        1,
        spec.level,
        Characteristic::PureP,
        variables,
        generators,
    )
}

fn prepend(head: u32, rest: &[u32]) -> Vec<u32> {
    let mut v = Vec::with_capacity(rest.len() + 1);
    v.push(head);
    v.extend_from_slice(rest);
    v
}

fn fresh_name(taken: &[String], base: &str) -> String {
    if !taken.iter().any(|v| v == base) {
        return base.to_string();
    }
    let mut i = 0;
    loop {
        let cand = format!("{base}{i}");
        if !taken.iter().any(|v| *v == cand) {
            return cand;
        }
        i += 1;
    }
}

/// Radical quotient of a pure-p monomial ring: squarefree-ize every
/// generator. Idempotent; the output is reduced.
pub fn radical_quotient(spec: &LevelRingSpec) -> LevelRingSpec {
    assert_eq!(
        spec.characteristic,
        Characteristic::PureP,
        "radical quotient applies to pure-p specs; take mod_pillar first"
    );
    let generators = spec
        .generators
        .iter()
        .map(|g| PMonomial::new(0, g.x_exps.iter().map(|&e| e.min(1)).collect()))
        .collect();
    LevelRingSpec::new(
        spec.prime,
        1,
        spec.level,
        Characteristic::PureP,
        spec.variables.clone(),
        generators,
    )
    .expect("squarefree-izing a valid spec cannot create the unit ideal")
}

/// An I_0-torsion monomial X^α together with its annihilator exponent m(α):
/// p^{ceil(m/p^i)} kills it and no smaller p-power does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionMonomial {
    pub x_exps: Vec<u32>,
    pub ann_exponent: u64,
}

/// All I_0-torsion monomials of total degree <= `max_deg`, in deglex order.
/// The predicate is combinatorial (some generator's x-part divides α) and is
/// exact for the untruncated ring.
pub fn torsion_monomials(spec: &LevelRingSpec, max_deg: u32) -> Vec<TorsionMonomial> {
    assert_eq!(
        spec.characteristic,
        Characteristic::Mixed,
        "torsion is taken with respect to I_0 = (p) in mixed characteristic"
    );
    let mut out = Vec::new();
    for alpha in exponent_vectors(spec.num_variables(), max_deg) {
        match spec.ann_exponent(&alpha) {
            Some(m) if m >= 1 => out.push(TorsionMonomial {
                x_exps: alpha,
                ann_exponent: m,
            }),
            _ => {}
        }
    }
    out
}

/// Maximal I_0-torsion-free quotient: every torsion monomial is killed
/// outright by dropping the pillar exponent of the generators that carry an
/// x-part. Re-running `torsion_monomials` on the output finds nothing.
pub fn torsion_free_quotient(spec: &LevelRingSpec) -> Result<LevelRingSpec, LevelRingError> {
    assert_eq!(
        spec.characteristic,
        Characteristic::Mixed,
        "the torsion-free quotient applies to mixed-characteristic specs"
    );
    let generators = spec
        .generators
        .iter()
        .map(|g| {
            if g.x_exps.iter().any(|&e| e > 0) {
                PMonomial::new(0, g.x_exps.clone())
            } else {
                g.clone()
            }
        })
        .collect();
    LevelRingSpec::new(
        spec.prime,
        spec.precision,
        spec.level,
        Characteristic::Mixed,
        spec.variables.clone(),
        generators,
    )
}
