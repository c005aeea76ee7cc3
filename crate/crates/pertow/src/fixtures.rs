//! Named fixtures shared by tests, the acceptance suite, and the CLI docs:
//! reference complexes and the standard tower corpus.

use std::collections::BTreeMap;

use crate::levelring::LevelRingSpec;
use crate::simplicial::{p_stanley_reisner_ideal, SimplicialComplex};
use crate::tower::{build_monomial_tower, TowerSpec};

/// The 6-vertex (vertex-minimal) triangulation of the real projective plane.
pub fn rp2_six_vertex() -> SimplicialComplex {
    SimplicialComplex::new(
        vec!["v1", "v2", "v3", "v4", "v5", "v6"],
        vec![
            vec!["v1", "v2", "v4"],
            vec!["v1", "v2", "v5"],
            vec!["v1", "v3", "v4"],
            vec!["v1", "v3", "v6"],
            vec!["v1", "v5", "v6"],
            vec!["v2", "v3", "v5"],
            vec!["v2", "v3", "v6"],
            vec!["v2", "v4", "v6"],
            vec!["v3", "v4", "v5"],
            vec!["v4", "v5", "v6"],
        ],
    )
    .expect("fixture is well-formed")
}

/// Two isolated points; the smallest complex with a monomial relation.
pub fn two_points() -> SimplicialComplex {
    SimplicialComplex::new(vec!["v1", "v2"], vec![vec!["v1"], vec!["v2"]])
        .expect("fixture is well-formed")
}

/// Three isolated points.
pub fn three_points_discrete() -> SimplicialComplex {
    SimplicialComplex::new(
        vec!["v1", "v2", "v3"],
        vec![vec!["v1"], vec!["v2"], vec!["v3"]],
    )
    .expect("fixture is well-formed")
}

/// The path v1 - v2 - v3.
pub fn path_three() -> SimplicialComplex {
    SimplicialComplex::new(
        vec!["v1", "v2", "v3"],
        vec![vec!["v1", "v2"], vec!["v2", "v3"]],
    )
    .expect("fixture is well-formed")
}

/// Boundary of the tetrahedron: a shellable 2-sphere.
pub fn sphere_boundary_tetrahedron() -> SimplicialComplex {
    SimplicialComplex::new(
        vec!["v1", "v2", "v3", "v4"],
        vec![
            vec!["v1", "v2", "v3"],
            vec!["v1", "v2", "v4"],
            vec!["v1", "v3", "v4"],
            vec!["v2", "v3", "v4"],
        ],
    )
    .expect("fixture is well-formed")
}

/// The octahedron boundary: another shellable 2-sphere.
pub fn octahedron() -> SimplicialComplex {
    SimplicialComplex::new(
        vec!["v1", "v2", "v3", "v4", "v5", "v6"],
        vec![
            vec!["v1", "v2", "v3"],
            vec!["v1", "v3", "v4"],
            vec!["v1", "v4", "v5"],
            vec!["v1", "v2", "v5"],
            vec!["v6", "v2", "v3"],
            vec!["v6", "v3", "v4"],
            vec!["v6", "v4", "v5"],
            vec!["v6", "v2", "v5"],
        ],
    )
    .expect("fixture is well-formed")
}

/// Hollow triangle (a circle).
pub fn hollow_triangle() -> SimplicialComplex {
    SimplicialComplex::new(
        vec!["v1", "v2", "v3"],
        vec![vec!["v1", "v2"], vec!["v1", "v3"], vec!["v2", "v3"]],
    )
    .expect("fixture is well-formed")
}

/// Full 2-simplex.
pub fn full_triangle() -> SimplicialComplex {
    SimplicialComplex::new(vec!["v1", "v2", "v3"], vec![vec!["v1", "v2", "v3"]])
        .expect("fixture is well-formed")
}

/// Full 3-simplex.
pub fn full_tetrahedron() -> SimplicialComplex {
    SimplicialComplex::new(
        vec!["v1", "v2", "v3", "v4"],
        vec![vec!["v1", "v2", "v3", "v4"]],
    )
    .expect("fixture is well-formed")
}

/// Two disjoint edges: disconnected, hence not Cohen–Macaulay.
pub fn two_disjoint_edges() -> SimplicialComplex {
    SimplicialComplex::new(
        vec!["v1", "v2", "v3", "v4"],
        vec![vec!["v1", "v2"], vec!["v3", "v4"]],
    )
    .expect("fixture is well-formed")
}

/// Two triangles glued at one vertex; the link of the glue point is
/// disconnected, so the complex fails Reisner's criterion.
pub fn bowtie() -> SimplicialComplex {
    SimplicialComplex::new(
        vec!["v1", "v2", "v3", "v4", "v5"],
        vec![vec!["v1", "v2", "v3"], vec!["v1", "v4", "v5"]],
    )
    .expect("fixture is well-formed")
}

/// The complex corpus used by the Reisner/depth cross-checks.
pub fn complex_corpus() -> BTreeMap<&'static str, SimplicialComplex> {
    BTreeMap::from([
        ("two-points", two_points()),
        ("three-points", three_points_discrete()),
        ("path-3", path_three()),
        ("hollow-triangle", hollow_triangle()),
        ("full-triangle", full_triangle()),
        ("full-tetrahedron", full_tetrahedron()),
        ("sphere-dS3", sphere_boundary_tetrahedron()),
        ("octahedron", octahedron()),
        ("rp2-6", rp2_six_vertex()),
        ("two-disjoint-edges", two_disjoint_edges()),
        ("bowtie", bowtie()),
    ])
}

/// The Z_p tower: levels Z_p[p^{1/p^i}].
pub fn zp_tower(p: u64, precision: u32, levels: u32) -> TowerSpec {
    let base = LevelRingSpec::mixed(p, precision, 0, vec![], vec![]).expect("valid spec");
    build_monomial_tower(&base, levels).expect("tower builds")
}

/// Perfect tower over F_p[x] with Frobenius transitions.
pub fn perfect_fx_tower(p: u64, levels: u32) -> TowerSpec {
    let base = LevelRingSpec::pure(p, 0, vec!["x"], vec![]).expect("valid spec");
    build_monomial_tower(&base, levels).expect("tower builds")
}

/// p-Stanley–Reisner tower of a complex (v1 plays the role of p).
pub fn psr_tower(complex: &SimplicialComplex, p: u64, precision: u32, levels: u32) -> TowerSpec {
    let base = p_stanley_reisner_ideal(complex, p, precision).expect("valid p-SR spec");
    build_monomial_tower(&base, levels).expect("tower builds")
}

/// The torsion gluing example: Z_p[[x,y]]/(px, py) with p-power roots.
pub fn pb_tower(p: u64, precision: u32, levels: u32) -> TowerSpec {
    use crate::levelring::PMonomial;
    let base = LevelRingSpec::mixed(
        p,
        precision,
        0,
        vec!["x", "y"],
        vec![PMonomial::new(1, vec![1, 0]), PMonomial::new(1, vec![0, 1])],
    )
    .expect("valid spec");
    build_monomial_tower(&base, levels).expect("tower builds")
}
