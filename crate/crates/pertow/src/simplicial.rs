//! Simplicial complexes, Stanley–Reisner and p-Stanley–Reisner ideals,
//! reduced simplicial homology over F_p, links, and Reisner's criterion for
//! Cohen–Macaulayness.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactlin::{BoundedComplex, FinAbPresentation, IntMatrix};
use crate::levelring::{LevelRingError, LevelRingSpec, PMonomial};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("the void complex is excluded; provide at least one facet")]
    EmptyComplex,
    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<String>),
    #[error("invalid complex: {0}")]
    BadComplex(String),
    #[error(transparent)]
    Ring(#[from] LevelRingError),
}

/// A finite simplicial complex given by its vertex list and inclusion-maximal
/// facets. Faces are enumerated from the facets on demand. The complex always
/// contains the empty face; the void complex (no faces at all) is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    facets: Vec<BTreeSet<usize>>,
}

impl SimplicialComplex {
    /// Build from vertex names and facets listed by vertex name. Non-maximal
    /// and duplicate facet entries are absorbed.
    pub fn new(vertices: Vec<&str>, facets: Vec<Vec<&str>>) -> Result<Self, SimplicialError> {
        let names: Vec<String> = vertices.into_iter().map(String::from).collect();
        let mut sets = Vec::new();
        for f in facets {
            let mut s = BTreeSet::new();
            for v in f {
                let idx = names
                    .iter()
                    .position(|n| n == v)
                    .ok_or_else(|| SimplicialError::BadComplex(format!("unknown vertex `{v}`")))?;
                s.insert(idx);
            }
            sets.push(s);
        }
        Self::from_indexed(names, sets)
    }

    fn from_indexed(
        vertices: Vec<String>,
        facets: Vec<BTreeSet<usize>>,
    ) -> Result<Self, SimplicialError> {
        if facets.is_empty() {
            return Err(SimplicialError::EmptyComplex);
        }
        if vertices.len() > 16 {
            return Err(SimplicialError::BadComplex(
                "complexes are capped at 16 vertices".into(),
            ));
        }
        {
            let mut seen = vertices.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != vertices.len() {
                return Err(SimplicialError::BadComplex("duplicate vertex names".into()));
            }
        }
        let mut maximal: Vec<BTreeSet<usize>> = Vec::new();
        for f in facets {
            if maximal.iter().any(|m| f.is_subset(m)) {
                continue;
            }
            maximal.retain(|m| !m.is_subset(&f));
            maximal.push(f);
        }
        maximal.sort_by(|a, b| {
            let va: Vec<usize> = a.iter().cloned().collect();
            let vb: Vec<usize> = b.iter().cloned().collect();
            (va.len(), va).cmp(&(vb.len(), vb))
        });
        let covered: BTreeSet<usize> = maximal.iter().flatten().cloned().collect();
        for (i, v) in vertices.iter().enumerate() {
            if !covered.contains(&i) {
                return Err(SimplicialError::BadComplex(format!(
                    "vertex `{v}` appears in no facet"
                )));
            }
        }
        Ok(SimplicialComplex {
            vertices,
            facets: maximal,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn facets(&self) -> impl Iterator<Item = Vec<&str>> {
        self.facets
            .iter()
            .map(|f| f.iter().map(|&i| self.vertices[i].as_str()).collect())
    }

    /// dim Δ; the complex {∅} has dimension -1.
    pub fn dim(&self) -> i64 {
        self.facets
            .iter()
            .map(|f| f.len() as i64 - 1)
            .max()
            .expect("at least one facet")
    }

    pub fn is_face_indices(&self, face: &BTreeSet<usize>) -> bool {
        self.facets.iter().any(|f| face.is_subset(f))
    }

    fn face_indices(&self, face: &[&str]) -> Result<BTreeSet<usize>, SimplicialError> {
        let mut s = BTreeSet::new();
        for v in face {
            let idx = self
                .vertices
                .iter()
                .position(|n| n == v)
                .ok_or_else(|| {
                    SimplicialError::NotAFace(face.iter().map(|s| s.to_string()).collect())
                })?;
            s.insert(idx);
        }
        Ok(s)
    }

    /// All faces (including ∅), grouped by cardinality: index k holds the
    /// faces with k vertices, so index 0 is the empty face alone.
    pub fn faces_by_size(&self) -> Vec<Vec<BTreeSet<usize>>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &self.facets {
            let elems: Vec<usize> = f.iter().cloned().collect();
            for mask in 0u32..(1 << elems.len()) {
                let sub: Vec<usize> = elems
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                seen.insert(sub);
            }
        }
        let max_size = (self.dim() + 1).max(0) as usize;
        let mut out = vec![Vec::new(); max_size + 1];
        for face in seen {
            let k = face.len();
            out[k].push(face.into_iter().collect());
        }
        out
    }

    pub fn face_count(&self, dim: i64) -> usize {
        if dim < -1 {
            return 0;
        }
        let by_size = self.faces_by_size();
        by_size.get((dim + 1) as usize).map_or(0, |fs| fs.len())
    }

    /// Reduced Euler characteristic: Σ (-1)^q f_q over q >= -1.
    pub fn euler_characteristic_reduced(&self) -> i64 {
        self.faces_by_size()
            .iter()
            .enumerate()
            .map(|(k, faces)| {
                let sign = if k % 2 == 0 { -1 } else { 1 }; // k = q + 1
                sign * faces.len() as i64
            })
            .sum()
    }

    /// Minimal non-faces: subsets that are not faces while all their proper
    /// subsets are. Returned in (size, lex) order.
    pub fn minimal_non_faces(&self) -> Vec<BTreeSet<usize>> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let face: BTreeSet<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if self.is_face_indices(&face) {
                continue;
            }
            let minimal = face.iter().all(|&v| {
                let mut sub = face.clone();
                sub.remove(&v);
                self.is_face_indices(&sub)
            });
            if minimal {
                out.push(face);
            }
        }
        out.sort_by(|a, b| {
            let va: Vec<usize> = a.iter().cloned().collect();
            let vb: Vec<usize> = b.iter().cloned().collect();
            (va.len(), va).cmp(&(vb.len(), vb))
        });
        out
    }

    /// lk_Δ F = {G : G ∩ F = ∅, G ∪ F ∈ Δ}; lk ∅ = Δ.
    pub fn link(&self, face: &[&str]) -> Result<SimplicialComplex, SimplicialError> {
        let f = self.face_indices(face)?;
        if !self.is_face_indices(&f) {
            return Err(SimplicialError::NotAFace(
                face.iter().map(|s| s.to_string()).collect(),
            ));
        }
        let link_facets: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .filter(|h| f.is_subset(h))
            .map(|h| h.difference(&f).cloned().collect())
            .collect();
        // re-index onto the vertices that actually appear
        let used: Vec<usize> = {
            let mut u: Vec<usize> = link_facets.iter().flatten().cloned().collect();
            u.sort();
            u.dedup();
            u
        };
        let names: Vec<String> = used.iter().map(|&i| self.vertices[i].clone()).collect();
        let remap = |s: &BTreeSet<usize>| -> BTreeSet<usize> {
            s.iter()
                .map(|i| used.binary_search(i).expect("used vertex"))
                .collect()
        };
        SimplicialComplex::from_indexed(names, link_facets.iter().map(remap).collect())
    }

    /// The cone over this complex with a fresh apex vertex.
    pub fn cone(&self, apex: &str) -> Result<SimplicialComplex, SimplicialError> {
        if self.vertices.iter().any(|v| v == apex) {
            return Err(SimplicialError::BadComplex(format!(
                "apex `{apex}` already a vertex"
            )));
        }
        let mut vertices = self.vertices.clone();
        vertices.push(apex.to_string());
        let apex_idx = vertices.len() - 1;
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let mut g = f.clone();
                g.insert(apex_idx);
                g
            })
            .collect();
        SimplicialComplex::from_indexed(vertices, facets)
    }

    /// Boundary matrices of the reduced chain complex, augmentation included:
    /// modules C_{-1}, C_0, ..., C_dim with d_q: C_q -> C_{q-1}.
    fn reduced_chain_matrices(&self) -> (Vec<usize>, Vec<IntMatrix>) {
        let by_size = self.faces_by_size();
        let sizes: Vec<usize> = by_size.iter().map(|fs| fs.len()).collect();
        let mut diffs = Vec::new();
        for k in 1..by_size.len() {
            let lower = &by_size[k - 1];
            let upper = &by_size[k];
            let mut d = IntMatrix::zero(lower.len(), upper.len());
            for (j, face) in upper.iter().enumerate() {
                let elems: Vec<usize> = face.iter().cloned().collect();
                for (pos, &v) in elems.iter().enumerate() {
                    let mut sub = face.clone();
                    sub.remove(&v);
                    let sv: Vec<usize> = sub.iter().cloned().collect();
                    let i = lower
                        .binary_search_by(|probe| {
                            let pv: Vec<usize> = probe.iter().cloned().collect();
                            pv.cmp(&sv)
                        })
                        .expect("boundary face present");
                    let sign = if pos % 2 == 0 { 1 } else { -1 };
                    d[(i, j)] = BigInt::from(sign);
                }
            }
            diffs.push(d);
        }
        (sizes, diffs)
    }

    /// Ranks of reduced simplicial homology H̃_q(Δ; F_p) for q = 0..=dim.
    pub fn reduced_homology(&self, p: u64) -> Vec<usize> {
        let (sizes, diffs) = self.reduced_chain_matrices();
        let pp = BigInt::from(p);
        let complex = BoundedComplex {
            modules: sizes
                .iter()
                .map(|&n| FinAbPresentation::free(n).quotient_by(&pp))
                .collect(),
            differentials: diffs,
        };
        let h = complex
            .homology()
            .expect("simplicial chain complexes satisfy d∘d = 0");
        // h[0] is H̃_{-1}; report q = 0..=dim
        h.into_iter()
            .skip(1)
            .map(|g| {
                assert_eq!(g.free_rank, 0, "mod-p homology is a torsion group");
                g.torsion.len()
            })
            .collect()
    }

    /// Reisner's criterion over F_p: Cohen–Macaulay iff H̃_q(lk F; F_p) = 0
    /// for every face F (including ∅) and every q < dim lk F. On failure the
    /// witness is the first offending (face, q) in (size, lex) order.
    pub fn reisner_cm_check(&self, p: u64) -> (bool, Option<(Vec<String>, i64)>) {
        for faces in self.faces_by_size() {
            for face in faces {
                let names: Vec<&str> = face.iter().map(|&i| self.vertices[i].as_str()).collect();
                let lk = self.link(&names).expect("enumerated faces are faces");
                let ranks = lk.reduced_homology(p);
                let top = lk.dim();
                for (q, &rank) in ranks.iter().enumerate() {
                    if (q as i64) < top && rank > 0 {
                        return (
                            false,
                            Some((names.iter().map(|s| s.to_string()).collect(), q as i64)),
                        );
                    }
                }
            }
        }
        (true, None)
    }
}

/// Stanley–Reisner ideal: k[Δ] = F_p[x_v : v ∈ Δ] / (minimal non-faces).
pub fn stanley_reisner_ideal(
    complex: &SimplicialComplex,
    p: u64,
) -> Result<LevelRingSpec, SimplicialError> {
    let n = complex.vertices.len();
    let gens = complex
        .minimal_non_faces()
        .into_iter()
        .map(|face| {
            let mut exps = vec![0u32; n];
            for v in face {
                exps[v] = 1;
            }
            PMonomial::new(0, exps)
        })
        .collect();
    let vars: Vec<&str> = complex.vertices.iter().map(String::as_str).collect();
    Ok(LevelRingSpec::pure(p, 0, vars, gens)?)
}

/// p-Stanley–Reisner ideal: the first vertex plays the role of p, so a
/// minimal non-face containing it contributes a generator with p-exponent 1.
pub fn p_stanley_reisner_ideal(
    complex: &SimplicialComplex,
    p: u64,
    precision: u32,
) -> Result<LevelRingSpec, SimplicialError> {
    let n = complex.vertices.len();
    if n == 0 {
        return Err(SimplicialError::EmptyComplex);
    }
    let gens = complex
        .minimal_non_faces()
        .into_iter()
        .map(|face| {
            let p_exp = u32::from(face.contains(&0));
            let mut exps = vec![0u32; n - 1];
            for v in face {
                if v > 0 {
                    exps[v - 1] = 1;
                }
            }
            PMonomial::new(p_exp, exps)
        })
        .collect();
    let vars: Vec<&str> = complex.vertices[1..].iter().map(String::as_str).collect();
    Ok(LevelRingSpec::mixed(p, precision, 0, vars, gens)?)
}

/// Parse the `.cplx` text format: first non-comment line lists the vertex
/// names, each following line is one facet.
pub fn parse_cplx(text: &str) -> Result<SimplicialComplex, SimplicialError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| SimplicialError::BadComplex("missing vertex line".into()))?;
    let vertices: Vec<&str> = header.split_whitespace().collect();
    let facets: Vec<Vec<&str>> = lines.map(|l| l.split_whitespace().collect()).collect();
    SimplicialComplex::new(vertices, facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hollow_triangle() -> SimplicialComplex {
        SimplicialComplex::new(
            vec!["v1", "v2", "v3"],
            vec![vec!["v1", "v2"], vec!["v1", "v3"], vec!["v2", "v3"]],
        )
        .unwrap()
    }

    #[test]
    fn two_points_sr_ideal() {
        let c = SimplicialComplex::new(vec!["v1", "v2"], vec![vec!["v1"], vec!["v2"]]).unwrap();
        let sr = stanley_reisner_ideal(&c, 3).unwrap();
        assert_eq!(sr.generators, vec![PMonomial::new(0, vec![1, 1])]);
        let psr = p_stanley_reisner_ideal(&c, 3, 4).unwrap();
        assert_eq!(psr.variables, vec!["v2"]);
        assert_eq!(psr.generators, vec![PMonomial::new(1, vec![1])]);
    }

    #[test]
    fn full_simplex_has_no_non_faces() {
        let c = SimplicialComplex::new(vec!["a", "b", "c"], vec![vec!["a", "b", "c"]]).unwrap();
        assert!(c.minimal_non_faces().is_empty());
        let sr = stanley_reisner_ideal(&c, 2).unwrap();
        assert!(sr.generators.is_empty());
    }

    #[test]
    fn edge_psr_is_free() {
        let c = SimplicialComplex::new(vec!["v1", "v2"], vec![vec!["v1", "v2"]]).unwrap();
        let psr = p_stanley_reisner_ideal(&c, 5, 4).unwrap();
        assert!(psr.generators.is_empty());
        assert_eq!(psr.variables, vec!["v2"]);
    }

    #[test]
    fn discrete_three_points_psr() {
        let c = SimplicialComplex::new(
            vec!["v1", "v2", "v3"],
            vec![vec!["v1"], vec!["v2"], vec!["v3"]],
        )
        .unwrap();
        let psr = p_stanley_reisner_ideal(&c, 2, 4).unwrap();
        assert_eq!(
            psr.generators,
            vec![
                PMonomial::new(1, vec![0, 1]),
                PMonomial::new(1, vec![1, 0]),
                PMonomial::new(0, vec![1, 1]),
            ]
        );
    }

    #[test]
    fn links() {
        let hollow = hollow_triangle();
        assert_eq!(hollow.link(&[]).unwrap(), hollow);
        let lk = hollow.link(&["v1"]).unwrap();
        assert_eq!(lk.dim(), 0);
        assert_eq!(lk.face_count(0), 2);
        let full =
            SimplicialComplex::new(vec!["v1", "v2", "v3"], vec![vec!["v1", "v2", "v3"]]).unwrap();
        let lk = full.link(&["v1"]).unwrap();
        assert_eq!(lk.dim(), 1);
        assert_eq!(lk.face_count(1), 1);
        assert!(matches!(
            hollow.link(&["v1", "v2", "v3"]),
            Err(SimplicialError::NotAFace(_))
        ));
    }

    #[test]
    fn link_of_facet_is_empty_complex() {
        let hollow = hollow_triangle();
        let lk = hollow.link(&["v1", "v2"]).unwrap();
        assert_eq!(lk.dim(), -1);
        assert_eq!(lk.face_count(-1), 1);
        assert!(lk.reduced_homology(2).is_empty());
    }

    #[test]
    fn homology_of_contractible_and_circle() {
        let full =
            SimplicialComplex::new(vec!["a", "b", "c"], vec![vec!["a", "b", "c"]]).unwrap();
        assert_eq!(full.reduced_homology(2), vec![0, 0, 0]);
        for p in [2, 3, 5] {
            assert_eq!(hollow_triangle().reduced_homology(p), vec![0, 1]);
        }
    }

    #[test]
    fn reisner_two_points() {
        let c = SimplicialComplex::new(vec!["v1", "v2"], vec![vec!["v1"], vec!["v2"]]).unwrap();
        for p in [2, 3, 5, 7] {
            assert_eq!(c.reisner_cm_check(p), (true, None));
        }
    }

    #[test]
    fn cone_kills_homology() {
        let coned = hollow_triangle().cone("apex").unwrap();
        for p in [2, 3] {
            assert!(coned.reduced_homology(p).iter().all(|&r| r == 0));
        }
    }

    #[test]
    fn euler_characteristic_matches_homology() {
        for complex in [
            hollow_triangle(),
            SimplicialComplex::new(vec!["v1", "v2"], vec![vec!["v1"], vec!["v2"]]).unwrap(),
            hollow_triangle().cone("apex").unwrap(),
        ] {
            let chi = complex.euler_characteristic_reduced();
            for p in [2, 3] {
                let ranks = complex.reduced_homology(p);
                let alt: i64 = ranks
                    .iter()
                    .enumerate()
                    .map(|(q, &r)| if q % 2 == 0 { r as i64 } else { -(r as i64) })
                    .sum();
                assert_eq!(chi, alt, "Euler characteristic mismatch at p={p}");
            }
        }
    }

    #[test]
    fn link_dimension_bound() {
        let c = hollow_triangle();
        for faces in c.faces_by_size() {
            for face in faces {
                let names: Vec<&str> = face.iter().map(|&i| c.vertices[i].as_str()).collect();
                let lk = c.link(&names).unwrap();
                assert!(lk.dim() <= c.dim() - face.len() as i64);
            }
        }
    }

    #[test]
    fn parse_cplx_roundtrip() {
        let text = "# comment\nv1 v2 v3\nv1 v2\nv1 v3\nv2 v3\n";
        let c = parse_cplx(text).unwrap();
        assert_eq!(c, hollow_triangle());
        assert!(parse_cplx("").is_err());
        assert!(parse_cplx("v1 v2\nv1 v3\n").is_err());
    }
}
