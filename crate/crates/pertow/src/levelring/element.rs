use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{deglex, ppow, LevelRingError, LevelRingSpec};

/// One summand of a raw (unreduced) formal sum: `coeff * P^p_exp * X^x_exps`.
#[derive(Clone, Debug)]
pub struct RawTerm {
    pub coeff: BigInt,
    pub p_exp: u64,
    pub x_exps: Vec<u32>,
}

impl RawTerm {
    pub fn new(coeff: i64, p_exp: u64, x_exps: Vec<u32>) -> Self {
        RawTerm {
            coeff: BigInt::from(coeff),
            p_exp,
            x_exps,
        }
    }
}

/// Deglex-ordered key for element terms.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Key(Vec<u32>);

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        deglex(&self.0, &other.0)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A canonical ring element: for each x-monomial a coefficient vector over
/// the P-basis, each slot already reduced modulo its exact annihilator and
/// modulo p^N. Two elements are equal in the ring iff the representations
/// are identical.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    spec: Arc<LevelRingSpec>,
    terms: BTreeMap<Key, Vec<u128>>,
}

impl RingElement {
    pub fn zero(spec: &Arc<LevelRingSpec>) -> Self {
        RingElement {
            spec: Arc::clone(spec),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: &Arc<LevelRingSpec>) -> Self {
        Self::from_raw_terms(spec, &[RawTerm::new(1, 0, vec![0; spec.num_variables()])])
            .expect("unit monomial is always well-formed")
    }

    pub fn variable(spec: &Arc<LevelRingSpec>, name: &str) -> Result<Self, LevelRingError> {
        let idx = spec.variable_index(name)?;
        let mut exps = vec![0; spec.num_variables()];
        exps[idx] = 1;
        Self::from_raw_terms(spec, &[RawTerm::new(1, 0, exps)])
    }

    /// The pillar generator: p itself, i.e. P^{p^level}.
    pub fn pillar(spec: &Arc<LevelRingSpec>) -> Self {
        Self::from_raw_terms(
            spec,
            &[RawTerm::new(1, spec.p_rank(), vec![0; spec.num_variables()])],
        )
        .expect("pillar monomial is always well-formed")
    }

    pub fn monomial(
        spec: &Arc<LevelRingSpec>,
        coeff: i64,
        p_exp: u64,
        x_exps: Vec<u32>,
    ) -> Result<Self, LevelRingError> {
        Self::from_raw_terms(spec, &[RawTerm::new(coeff, p_exp, x_exps)])
    }

    /// Canonical normal form of a formal sum. Carries P^{p^i} -> p, reduces
    /// every slot modulo its annihilator, and drops vanished terms.
    pub fn from_raw_terms(
        spec: &Arc<LevelRingSpec>,
        raw: &[RawTerm],
    ) -> Result<Self, LevelRingError> {
        let n = spec.num_variables();
        let q = spec.p_rank();
        let mut acc: BTreeMap<Key, Vec<BigInt>> = BTreeMap::new();
        for term in raw {
            if term.x_exps.len() != n {
                return Err(LevelRingError::BadSpec(format!(
                    "term arity {} does not match {} variables",
                    term.x_exps.len(),
                    n
                )));
            }
            if term.coeff.is_zero() {
                continue;
            }
            let carries = term.p_exp / q;
            let slot = (term.p_exp % q) as usize;
            let mut c = term.coeff.clone();
            for _ in 0..carries {
                c *= BigInt::from(spec.prime);
            }
            let entry = acc
                .entry(Key(term.x_exps.clone()))
                .or_insert_with(|| vec![BigInt::zero(); q as usize]);
            entry[slot] += c;
        }
        let mut terms = BTreeMap::new();
        for (key, slots) in acc {
            let reduced = reduce_slots(spec, &key.0, &slots);
            if reduced.iter().any(|&c| c != 0) {
                terms.insert(key, reduced);
            }
        }
        Ok(RingElement {
            spec: Arc::clone(spec),
            terms,
        })
    }

    pub fn spec(&self) -> &Arc<LevelRingSpec> {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total x-degree of the largest monomial, if nonzero.
    pub fn max_degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|k| k.0.iter().map(|&e| e as u64).sum())
            .max()
    }

    /// Iterate (x_exps, coefficient slots) in deglex order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (&[u32], &[u128])> {
        self.terms.iter().map(|(k, v)| (k.0.as_slice(), v.as_slice()))
    }

    fn check_spec(&self, other: &RingElement) -> Result<(), LevelRingError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(LevelRingError::SpecMismatch)
        }
    }

    fn raw_terms(&self) -> Vec<RawTerm> {
        self.terms
            .iter()
            .flat_map(|(k, slots)| {
                slots.iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| RawTerm {
                    coeff: BigInt::from(c),
                    p_exp: j as u64,
                    x_exps: k.0.clone(),
                })
            })
            .collect()
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, LevelRingError> {
        self.check_spec(other)?;
        let mut raw = self.raw_terms();
        raw.extend(other.raw_terms());
        Self::from_raw_terms(&self.spec, &raw)
    }

    pub fn neg(&self) -> RingElement {
        let raw: Vec<RawTerm> = self
            .terms
            .iter()
            .flat_map(|(k, slots)| {
                slots.iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| RawTerm {
                    coeff: -BigInt::from(c),
                    p_exp: j as u64,
                    x_exps: k.0.clone(),
                })
            })
            .collect();
        Self::from_raw_terms(&self.spec, &raw).expect("negation preserves well-formedness")
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement, LevelRingError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement, LevelRingError> {
        self.check_spec(other)?;
        let mut raw = Vec::new();
        for (ka, sa) in &self.terms {
            for (kb, sb) in &other.terms {
                let key: Vec<u32> = ka.0.iter().zip(&kb.0).map(|(a, b)| a + b).collect();
                for (ja, &ca) in sa.iter().enumerate() {
                    if ca == 0 {
                        continue;
                    }
                    for (jb, &cb) in sb.iter().enumerate() {
                        if cb == 0 {
                            continue;
                        }
                        // slots stay below p^N < 2^63, so the product fits
                        raw.push(RawTerm {
                            coeff: BigInt::from(ca) * BigInt::from(cb),
                            p_exp: ja as u64 + jb as u64,
                            x_exps: key.clone(),
                        });
                    }
                }
            }
        }
        Self::from_raw_terms(&self.spec, &raw)
    }

    pub fn pow(&self, mut e: u32) -> Result<RingElement, LevelRingError> {
        let mut base = self.clone();
        let mut acc = RingElement::one(&self.spec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: i64) -> RingElement {
        let raw: Vec<RawTerm> = self
            .terms
            .iter()
            .flat_map(|(k, slots)| {
                slots.iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, &v)| RawTerm {
                    coeff: BigInt::from(v) * BigInt::from(c),
                    p_exp: j as u64,
                    x_exps: k.0.clone(),
                })
            })
            .collect();
        Self::from_raw_terms(&self.spec, &raw).expect("scaling preserves well-formedness")
    }
}

fn reduce_slots(spec: &LevelRingSpec, x_exps: &[u32], slots: &[BigInt]) -> Vec<u128> {
    slots
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let order = spec.slot_order_capped(x_exps, j as u64);
            if order == 0 {
                return 0;
            }
            let modulus = BigInt::from(ppow(spec.prime, order));
            let mut r = c % &modulus;
            if r.is_negative() {
                r += &modulus;
            }
            r.to_u128().expect("reduced coefficient fits in u128")
        })
        .collect()
}

/// Canonical normal form of a raw formal sum in the given ring.
pub fn normal_form(
    spec: &Arc<LevelRingSpec>,
    raw: &[RawTerm],
) -> Result<RingElement, LevelRingError> {
    RingElement::from_raw_terms(spec, raw)
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (key, slots) in &self.terms {
            for (j, &c) in slots.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let mono = self.spec.monomial_string(j as u64, &key.0);
                if mono == "1" {
                    parts.push(format!("{c}"));
                } else if c == 1 {
                    parts.push(mono);
                } else {
                    parts.push(format!("{c}*{mono}"));
                }
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelring::PMonomial;

    fn two_point(p: u64, n: u32) -> Arc<LevelRingSpec> {
        Arc::new(
            LevelRingSpec::mixed(p, n, 0, vec!["x"], vec![PMonomial::new(1, vec![1])]).unwrap(),
        )
    }

    #[test]
    fn ideal_generator_vanishes() {
        // in Z_p[x]/(px), N=3: p*x -> 0
        let spec = two_point(2, 3);
        let px = RingElement::monomial(&spec, 1, 1, vec![1]).unwrap();
        assert!(px.is_zero());
        let x = RingElement::variable(&spec, "x").unwrap();
        let p = RingElement::pillar(&spec);
        assert!(x.mul(&p).unwrap().is_zero());
    }

    #[test]
    fn difference_of_squares() {
        // (p + x)(p - x) = p^2 - x^2 in Z_p[x]/(px), N=3
        let spec = two_point(3, 3);
        let p = RingElement::pillar(&spec);
        let x = RingElement::variable(&spec, "x").unwrap();
        let lhs = p.add(&x).unwrap().mul(&p.sub(&x).unwrap()).unwrap();
        let rhs = p.mul(&p).unwrap().sub(&x.mul(&x).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_zero());
        // brute-force membership: lhs - (p^2 - x^2) must be in the ideal,
        // i.e. normal form zero, which is what equality of normal forms says
    }

    #[test]
    fn carry_relation_level_one() {
        // level 1, p = 2, no ideal: (P + 1)^2 = 3 + 2P via P^2 = 2
        let spec = Arc::new(LevelRingSpec::mixed(2, 4, 1, vec![], vec![]).unwrap());
        let p_half = RingElement::monomial(&spec, 1, 1, vec![]).unwrap();
        let one = RingElement::one(&spec);
        let sq = p_half.add(&one).unwrap().pow(2).unwrap();
        let expected = RingElement::from_raw_terms(
            &spec,
            &[RawTerm::new(3, 0, vec![]), RawTerm::new(2, 1, vec![])],
        )
        .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn identity_and_generator_products() {
        let spec = two_point(5, 4);
        let x = RingElement::variable(&spec, "x").unwrap();
        let one = RingElement::one(&spec);
        assert_eq!(x.mul(&one).unwrap(), x);
        let p = RingElement::pillar(&spec);
        assert!(x.mul(&p).unwrap().is_zero());
    }

    #[test]
    fn pb_level_one_product() {
        // level-1 ring with generators P·X, P·Y: X * P = 0
        let spec = Arc::new(
            LevelRingSpec::mixed(
                2,
                4,
                1,
                vec!["x", "y"],
                vec![PMonomial::new(1, vec![1, 0]), PMonomial::new(1, vec![0, 1])],
            )
            .unwrap(),
        );
        let x = RingElement::variable(&spec, "x").unwrap();
        let p_frac = RingElement::monomial(&spec, 1, 1, vec![0, 0]).unwrap();
        assert!(!x.is_zero());
        assert!(!p_frac.is_zero());
        assert!(x.mul(&p_frac).unwrap().is_zero());
    }

    #[test]
    fn spec_mismatch_is_detected() {
        let a = two_point(2, 3);
        let b = two_point(3, 3);
        let xa = RingElement::variable(&a, "x").unwrap();
        let xb = RingElement::variable(&b, "x").unwrap();
        assert_eq!(xa.mul(&xb).unwrap_err(), LevelRingError::SpecMismatch);
    }

    #[test]
    fn unknown_variable() {
        let spec = two_point(2, 3);
        assert_eq!(
            RingElement::variable(&spec, "z").unwrap_err(),
            LevelRingError::VariableMismatch("z".into())
        );
    }

    #[test]
    fn truncation_caps_p_powers() {
        let spec = two_point(2, 3);
        let p = RingElement::pillar(&spec);
        assert!(p.pow(3).unwrap().is_zero());
        assert!(!p.pow(2).unwrap().is_zero());
    }
}
