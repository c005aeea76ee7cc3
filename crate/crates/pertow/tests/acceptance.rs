//! Acceptance suite: one test per criterion, each printing a pass line.
//! Windows, tolerances, and expected values are pinned here; the suite is
//! the exit gate for the library.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use pertow::exactlin::{
    homology_of_complex, kernel_basis, smith_normal_form, BoundedComplex, FinAbPresentation,
    HomologyGroup, IntMatrix,
};
use pertow::fixtures;
use pertow::koszul::{graded_depth, koszul_homology_raw, tilt_koszul_compare, KoszulInput};
use pertow::levelring::LevelRingSpec;
use pertow::simplicial::stanley_reisner_ideal;
use pertow::tiltops::{tilt_iso_check, tilt_level_truncated};
use pertow::tower::{
    check_axioms, check_cartesian_g, decompose_tower, glue_towers, AttachMap,
    TorsionMapOverride, TowerSpec,
};
use pertow::Window;

fn window() -> Window {
    Window::new(8, 4)
}

fn grp(free: usize, torsion: Vec<u64>) -> HomologyGroup {
    HomologyGroup {
        free_rank: free,
        torsion: torsion.into_iter().map(BigInt::from).collect(),
    }
}

/// The tower corpus shared by several criteria.
fn tower_corpus() -> Vec<(&'static str, TowerSpec)> {
    vec![
        ("zp-p2", fixtures::zp_tower(2, 4, 3)),
        ("zp-p3", fixtures::zp_tower(3, 4, 3)),
        ("perfect-fx-p2", fixtures::perfect_fx_tower(2, 3)),
        ("psr-two-point-p2", fixtures::psr_tower(&fixtures::two_points(), 2, 4, 3)),
        ("psr-two-point-p3", fixtures::psr_tower(&fixtures::two_points(), 3, 4, 3)),
        ("psr-three-point-p2", fixtures::psr_tower(&fixtures::three_points_discrete(), 2, 4, 3)),
        ("psr-path-p3", fixtures::psr_tower(&fixtures::path_three(), 3, 4, 3)),
        ("pb-p2", fixtures::pb_tower(2, 4, 3)),
    ]
}

#[test]
fn criterion_1_rp2_cohen_macaulay_iff_p_is_odd() {
    let rp2 = fixtures::rp2_six_vertex();
    let start = Instant::now();
    let (cm2, witness) = rp2.reisner_cm_check(2);
    assert!(start.elapsed().as_secs_f64() < 5.0, "p = 2 check exceeded 5 s");
    assert!(!cm2, "the projective plane is not CM at p = 2");
    let (face, q) = witness.expect("failure carries a witness");
    assert!(face.is_empty(), "the witness link is the empty face");
    assert_eq!(q, 1, "the witness degree is 1");
    for p in [3u64, 5, 7] {
        let start = Instant::now();
        let (cm, _) = rp2.reisner_cm_check(p);
        assert!(start.elapsed().as_secs_f64() < 5.0, "p = {p} check exceeded 5 s");
        assert!(cm, "the projective plane is CM at p = {p}");
    }
    println!("criterion 1 PASS: reisner(RP2) false at p=2 with witness (∅, 1), true at p=3,5,7");
}

#[test]
fn criterion_2_reisner_equivalence_across_corpus() {
    let corpus = fixtures::complex_corpus();
    assert!(corpus.len() >= 10, "corpus must contain at least 10 complexes");
    let mut disagreements = Vec::new();
    let mut checked = 0;
    for (name, complex) in &corpus {
        let expected_dim = (complex.dim() + 1) as u32;
        for p in [2u64, 3] {
            let sr = stanley_reisner_ideal(complex, p).expect("SR ring builds");
            let depth = graded_depth(&sr).expect("depth computes");
            let (cm, _) = complex.reisner_cm_check(p);
            let depth_says_cm = depth == expected_dim;
            if cm != depth_says_cm {
                disagreements.push(format!("{name} at p={p}: reisner={cm}, depth={depth}"));
            }
            checked += 1;
        }
    }
    assert!(disagreements.is_empty(), "disagreements: {disagreements:?}");
    println!(
        "criterion 2 PASS: depth route and Reisner route agree on {} complex/prime pairs",
        checked
    );
}

#[test]
fn criterion_3_koszul_homology_is_tilting_invariant() {
    let cases: Vec<(&str, Box<dyn Fn() -> pertow::simplicial::SimplicialComplex>)> = vec![
        ("two-point", Box::new(fixtures::two_points)),
        ("three-point-discrete", Box::new(fixtures::three_points_discrete)),
        ("path-graph", Box::new(fixtures::path_three)),
    ];
    for (name, complex) in &cases {
        for p in [2u64, 3, 5] {
            let tower = fixtures::psr_tower(&complex(), p, 4, 4);
            let start = Instant::now();
            let report = tilt_koszul_compare(&tower, 0, window()).expect("comparison runs");
            let elapsed = start.elapsed().as_secs_f64();
            assert!(elapsed < 30.0, "{name} at p={p} took {elapsed:.1} s");
            assert!(
                report.all_match,
                "{name} at p={p}: {:?} vs {:?}",
                report.mixed, report.tilt
            );
            if *name == "two-point" {
                assert_eq!(report.mixed[0], grp(0, vec![p]));
                assert_eq!(report.mixed[1], grp(0, vec![p]));
                assert!(report.mixed[2].is_zero());
                assert_eq!(report.tilt[0], grp(0, vec![p]));
                assert_eq!(report.tilt[1], grp(0, vec![p]));
                assert!(report.tilt[2].is_zero());
            }
        }
    }
    println!("criterion 3 PASS: invariant factors match in all degrees for 3 towers x p in {{2,3,5}}");
}

#[test]
fn criterion_4_decomposition_and_gluing_round_trip() {
    let w = window();
    // decompose the torsion tower at levels 0..=2: all squares cartesian
    let pb = fixtures::pb_tower(2, 4, 2);
    let dec = decompose_tower(&pb, w).expect("decomposition runs");
    assert!(dec.all_certified(), "{:?}", dec.certificates);
    assert_eq!(dec.certificates.len(), 3);
    // gluing F_p[x,y] -> F_p onto the Z_p tower reproduces the same levels
    let zp = fixtures::zp_tower(2, 4, 2);
    let perfect = LevelRingSpec::pure(2, 0, vec!["x", "y"], vec![]).unwrap();
    let attach: AttachMap = BTreeMap::from([
        ("x".to_string(), "0".to_string()),
        ("y".to_string(), "0".to_string()),
    ]);
    let glued = glue_towers(&perfect, &zp, &attach, w).expect("gluing runs");
    assert!(glued.all_verified());
    assert_eq!(glued.tower.levels, pb.levels, "glued tower equals the torsion tower");
    // and the decomposition of the glued tower recovers both inputs
    let round = decompose_tower(&glued.tower, w).expect("decomposition runs");
    assert!(round.all_certified());
    assert_eq!(round.torsion_free.levels, zp.levels);
    for lvl in &round.reduced_fiber.levels {
        assert_eq!(lvl.variables, perfect.variables);
        assert_eq!(lvl.generators, perfect.generators);
    }
    println!("criterion 4 PASS: decomposition certified and gluing reproduces the torsion tower");
}

#[test]
fn criterion_5_axiom_suite_with_sabotage() {
    let w = window();
    let towers = vec![
        ("zp", fixtures::zp_tower(2, 4, 3)),
        ("perfect-fx", fixtures::perfect_fx_tower(2, 3)),
        ("psr-two-point", fixtures::psr_tower(&fixtures::two_points(), 2, 4, 3)),
        ("psr-three-point", fixtures::psr_tower(&fixtures::three_points_discrete(), 3, 4, 3)),
        ("psr-path", fixtures::psr_tower(&fixtures::path_three(), 2, 4, 3)),
    ];
    for (name, tower) in &towers {
        let report = check_axioms(tower, 3, w);
        assert!(report.all_verified(), "{name}: {:?}", report.first_failure());
        for i in 0..3 {
            assert!(
                pertow::tower::pillar_check(tower, i, w).expect("pillar check runs"),
                "{name}: pillar compatibility at level {i}"
            );
        }
    }
    // sabotage: drop one generator at level 1 only
    let pb = fixtures::pb_tower(2, 4, 2);
    let tampered = LevelRingSpec::mixed(
        2,
        4,
        1,
        vec!["x", "y"],
        vec![pertow::levelring::PMonomial::new(1, vec![1, 0])],
    )
    .unwrap();
    let broken = pb.clone().with_level_spec(1, tampered);
    let report = check_axioms(&broken, 2, w);
    assert!(!report.all_verified(), "the mutant must fail");
    let (axiom, witness) = report.first_failure().expect("failure carries a witness");
    assert!(!witness.is_empty());
    println!(
        "criterion 5 PASS: 5 towers verified at L=3, D=8, N=4; dropped-generator mutant fails axiom ({axiom}) with witness `{witness}`"
    );
}

#[test]
fn criterion_6_tilt_isomorphisms_and_closed_forms() {
    let w = window();
    for (name, tower) in &tower_corpus() {
        for i in 0..tower.top_level() {
            let report = tilt_iso_check(tower, i, w).expect("check runs");
            assert!(report.ok(), "{name} level {i}: {:?}", report.witness);
        }
    }
    // depth-3 tilt carrier of the Z_p tower is F_p[T]/(T^{p^3})
    for p in [2u64, 3] {
        let zp = fixtures::zp_tower(p, 4, 3);
        let tilt = tilt_level_truncated(&zp, 0, 3, w).expect("tilt materializes");
        assert!(tilt.verified(), "{:?}", tilt.witness);
        assert_eq!(tilt.carrier_rank as u64, p.pow(3));
        assert_eq!(tilt.truncation_exponent, p.pow(3));
        assert_eq!(tilt.closed_form.variables, vec!["T"]);
        assert!(tilt.closed_form.generators.is_empty());
    }
    // each p-SR tower tilts to the Stanley-Reisner ring of the same complex
    let complexes = [
        fixtures::two_points(),
        fixtures::three_points_discrete(),
        fixtures::path_three(),
    ];
    for complex in &complexes {
        for p in [2u64, 3] {
            let tower = fixtures::psr_tower(complex, p, 4, 3);
            let tilt = tilt_level_truncated(&tower, 0, 3, w).expect("tilt materializes");
            assert!(tilt.verified(), "{:?}", tilt.witness);
            let renamed = tilt
                .closed_form_with_pillar_named("v1")
                .expect("rename succeeds");
            let sr = stanley_reisner_ideal(complex, p).expect("SR ring builds");
            assert_eq!(renamed.variables, sr.variables);
            assert_eq!(renamed.generators, sr.generators);
        }
    }
    println!("criterion 6 PASS: tilt isomorphisms verified; closed forms match the expected rings");
}

#[test]
fn criterion_7_cartesian_characterization() {
    let w = window();
    for (name, tower) in &tower_corpus() {
        for i in 0..tower.top_level() {
            let report =
                check_cartesian_g(tower, i, w, TorsionMapOverride::None).expect("check runs");
            assert!(report.ok(), "{name} level {i}: {report:?}");
        }
    }
    // zeroing the torsion restriction of the transition map breaks the square
    let pb = fixtures::pb_tower(2, 4, 2);
    let broken = check_cartesian_g(&pb, 0, w, TorsionMapOverride::ZeroTorsionTransition)
        .expect("check runs");
    assert!(!broken.ok());
    let witness = broken
        .transition_square
        .witness
        .clone()
        .expect("failure carries a witness");
    assert!(!witness.is_empty());
    println!("criterion 7 PASS: torsion squares cartesian on the corpus; zeroed mutant fails with `{witness}`");
}

#[test]
fn criterion_8_exact_linear_algebra_properties() {
    let mut rng = ChaCha12Rng::seed_from_u64(0x5eed);
    // 1000 randomized Smith normal forms
    for trial in 0..1000 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let m = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-20i64..=20)));
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d, "u*m*v != d in trial {trial}");
        assert_eq!(snf.u.det().abs(), BigInt::one(), "det u in trial {trial}");
        assert_eq!(snf.v.det().abs(), BigInt::one(), "det v in trial {trial}");
        let diag = snf.diagonal();
        for pair in diag.windows(2) {
            if pair[0].is_zero() {
                assert!(pair[1].is_zero(), "zero order broken in trial {trial}");
            } else {
                assert!(
                    (&pair[1] % &pair[0]).is_zero(),
                    "divisibility broken in trial {trial}"
                );
            }
        }
        for d in &diag {
            assert!(!d.is_negative());
        }
    }
    // homology invariance under random unimodular basis change
    for trial in 0..200 {
        let n2 = rng.gen_range(1..=4);
        let n1 = rng.gen_range(1..=4);
        let n0 = rng.gen_range(1..=4);
        let d1 = IntMatrix::from_fn(n0, n1, |_, _| BigInt::from(rng.gen_range(-4i64..=4)));
        // build d2 inside ker(d1) so the composite vanishes
        let k = kernel_basis(&d1);
        let mix = IntMatrix::from_fn(k.cols(), n2, |_, _| BigInt::from(rng.gen_range(-3i64..=3)));
        let d2 = k.mul(&mix);
        let complex = BoundedComplex {
            modules: vec![
                FinAbPresentation::free(n0),
                FinAbPresentation::free(n1),
                FinAbPresentation::free(n2),
            ],
            differentials: vec![d1.clone(), d2.clone()],
        };
        let h = homology_of_complex(&complex).expect("valid complex");
        let (u0, _) = random_unimodular(n0, &mut rng);
        let (u1, u1_inv) = random_unimodular(n1, &mut rng);
        let (u2, _) = random_unimodular(n2, &mut rng);
        let conjugated = BoundedComplex {
            modules: vec![
                FinAbPresentation::free(n0),
                FinAbPresentation::free(n1),
                FinAbPresentation::free(n2),
            ],
            differentials: vec![u0.mul(&d1).mul(&u1_inv), u1.mul(&d2).mul(&u2)],
        };
        let h2 = homology_of_complex(&conjugated).expect("valid conjugated complex");
        assert_eq!(h, h2, "homology changed under basis change in trial {trial}");
    }
    println!("criterion 8 PASS: 1000 SNF instances and 200 basis-change invariance checks");
}

/// A random unimodular matrix together with its inverse, as a product of
/// elementary operations.
fn random_unimodular(n: usize, rng: &mut ChaCha12Rng) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut u_inv = IntMatrix::identity(n);
    if n == 0 {
        return (u, u_inv);
    }
    for _ in 0..8 {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        // u += c * (row j into row i); inverse gets the opposite op appended
        // on the other side
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = c.clone();
        let mut e_inv = IntMatrix::identity(n);
        e_inv[(i, j)] = -c;
        u = e.mul(&u);
        u_inv = u_inv.mul(&e_inv);
    }
    (u, u_inv)
}

#[test]
fn criterion_9_window_stability_of_koszul_values() {
    let small = Window::new(8, 4);
    let large = Window::new(10, 5);
    let cases: Vec<(&str, Box<dyn Fn() -> pertow::simplicial::SimplicialComplex>)> = vec![
        ("two-point", Box::new(fixtures::two_points)),
        ("three-point-discrete", Box::new(fixtures::three_points_discrete)),
        ("path-graph", Box::new(fixtures::path_three)),
    ];
    let mut checked = 0;
    for (name, complex) in &cases {
        for p in [2u64, 3, 5] {
            let tower = fixtures::psr_tower(&complex(), p, 4, 4);
            // mixed side
            let mixed = KoszulInput::standard(tower.base()).expect("input builds");
            let a = koszul_homology_raw(&mixed, small).expect("computes");
            let b = koszul_homology_raw(&mixed, large).expect("computes");
            assert_eq!(a.groups, b.groups, "{name} mixed side at p={p}");
            // tilt side
            let tilt = tilt_level_truncated(&tower, 0, 4, small).expect("tilt materializes");
            let tilt_input = KoszulInput::standard(&tilt.closed_form).expect("input builds");
            let ta = koszul_homology_raw(&tilt_input, small).expect("computes");
            let tb = koszul_homology_raw(&tilt_input, large).expect("computes");
            assert_eq!(ta.groups, tb.groups, "{name} tilt side at p={p}");
            checked += 2;
        }
    }
    println!("criterion 9 PASS: {checked} homology lists identical at (D,N) = (8,4) and (10,5)");
}
