use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weightforge::derived::{zero_triangle, Complex, DerivedMorphism, DerivedObject};
use weightforge::quiver::{fixture_q0, fixture_q1, hom_basis, projective, simple, Rep};
use weightforge::random::{random_complex, random_quiver, QuiverShape};
use weightforge::spectral::{
    build_perturbed_tower, build_tower, epimorphism_criterion, gr_heart,
    heart_filtration_from_degeneration, k0_check_triangle, k0_class, run_ss, run_ss_on_tower,
    strictness_check, weight_filtration_homology, HomFunctor, K0Class,
};
use weightforge::weight::Mode;

const T: Mode = Mode::Transversal;

fn conc(m: &Rep) -> DerivedObject {
    DerivedObject::new(Complex::concentrated(m, 0))
}

fn dims(s: &[weightforge::linalg::Subspace]) -> Vec<usize> {
    s.iter().map(|s| s.dim()).collect()
}

#[test]
fn tower_of_projective() {
    let q = fixture_q1();
    let t = build_tower(&conc(&projective(&q, 0)), T).unwrap();
    assert_eq!((t.lo, t.hi()), (0, 1));
    assert_eq!(t.level(0).cohomology(0).rep, simple(&q, 1));
    assert!(t.to_x[1].is_iso());
    assert_eq!(t.graded(1).cohomology(0).rep, simple(&q, 0));
}

#[test]
fn projective_sequence_degenerates() {
    let q = fixture_q1();
    let ss = run_ss(HomFunctor::THomology, &conc(&projective(&q, 0)), T).unwrap();
    let e1 = ss.page(1).unwrap();
    let at = |k, n| e1.entries.iter().find(|e| e.k == k && e.n == n).unwrap().dims.clone();
    assert_eq!(at(0, 0), vec![0, 1]);
    assert_eq!(at(1, 0), vec![1, 0]);
    assert!(ss.degenerates_at_e2);
    assert!(ss.oracle_agrees && ss.converges && ss.e_inf_matches_filtration);
    assert_eq!(dims(ss.filtration_step(0, 0).unwrap()), vec![0, 1]);
    assert_eq!(dims(ss.filtration_step(0, 1).unwrap()), vec![1, 1]);
}

#[test]
fn zero_object_has_empty_pages() {
    let q = fixture_q1();
    let ss = run_ss(HomFunctor::TotalDim, &DerivedObject::zero(q), T).unwrap();
    assert!(ss.pages.iter().all(|p| p.entries.iter().all(|e| e.dims.iter().all(|&d| d == 0))));
    assert!(ss.degenerates_at_e2 && ss.converges);
}

#[test]
fn filtration_on_cohomology() {
    let q = fixture_q1();
    let x = conc(&projective(&q, 0));
    assert_eq!(dims(&weight_filtration_homology(&x, 0, 0, T).unwrap()), vec![0, 1]);
    assert_eq!(dims(&weight_filtration_homology(&x, 0, 5, T).unwrap()), vec![1, 1]);
    assert_eq!(dims(&weight_filtration_homology(&x, 0, -5, T).unwrap()), vec![0, 0]);
    assert!(run_ss(HomFunctor::DimAtVertex(7), &x, T).is_err());
}

#[test]
fn perturbed_towers_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut nontrivial = 0;
    for _ in 0..25 {
        let q = random_quiver(&mut rng, QuiverShape::default());
        let x = DerivedObject::new(random_complex(&mut rng, &q, 3, 2));
        let canon = run_ss(HomFunctor::THomology, &x, T).unwrap();
        let tower = build_perturbed_tower(&x, T, &mut rng).unwrap();
        for h in [HomFunctor::THomology, HomFunctor::TotalDim, HomFunctor::DimAtVertex(0)] {
            let ss = run_ss_on_tower(h, &tower).unwrap();
            assert!(ss.oracle_agrees && ss.converges && ss.e_inf_matches_filtration);
            assert!(ss.degenerates_at_e2);
        }
        let ss = run_ss_on_tower(HomFunctor::THomology, &tower).unwrap();
        nontrivial += usize::from(ss.stable_page > 1);
        assert_eq!(ss.filtration, canon.filtration);
    }
    assert!(nontrivial > 0, "no perturbed tower had a nonzero d_1");
}

#[test]
fn strictness_on_inclusion() {
    let q = fixture_q1();
    let (sv, pu) = (simple(&q, 1), projective(&q, 0));
    let (x, y) = (conc(&sv), conc(&pu));
    let f = DerivedMorphism::from_chain_map(
        &x,
        &y,
        &weightforge::derived::ChainMap::new(
            x.complex().clone(),
            y.complex().clone(),
            vec![hom_basis(&sv, &pu).unwrap().remove(0)],
        )
        .unwrap(),
    );
    for i in -1..=2 {
        assert!(strictness_check(&f, 0, i, T).unwrap());
    }
    assert!(strictness_check(&DerivedMorphism::identity(&y), 0, 0, T).unwrap());
    assert!(strictness_check(&DerivedMorphism::zero(&x, &y), 0, 0, T).unwrap());
}

#[test]
fn heart_filtrations() {
    let q = fixture_q1();
    let f = heart_filtration_from_degeneration(&projective(&q, 0), T).unwrap();
    assert_eq!(
        f.steps.iter().map(|s| dims(s)).collect::<Vec<_>>(),
        vec![vec![0, 0], vec![0, 1], vec![1, 1]]
    );
    assert!(f.is_increasing() && f.is_separated() && f.is_exhaustive());
    assert!(f.agrees_with_module().unwrap());

    let q0 = fixture_q0();
    for m in [simple(&q0, 0), projective(&q0, 0), simple(&q0, 1)] {
        let f = heart_filtration_from_degeneration(&m, Mode::StupidOnProj).unwrap();
        assert!(f.is_increasing() && f.is_separated() && f.is_exhaustive());
        assert!(f.steps_are_subobjects());
    }
}

#[test]
fn graded_pieces() {
    let q = fixture_q1();
    let pu = projective(&q, 0);
    let g = gr_heart(&pu, 1, T).unwrap();
    assert_eq!(g.gr, simple(&q, 0));
    assert_eq!(g.gr_dual, simple(&q, 0));
    assert!(g.is_iso && g.criterion_holds);
    assert!(gr_heart(&pu, 4, T).unwrap().gr.is_zero());
    let sv = simple(&q, 1);
    assert_eq!(gr_heart(&sv, 0, T).unwrap().gr, sv);
    assert!(gr_heart(&pu, 1, Mode::StupidOnProj).is_err());
}

#[test]
fn grothendieck_classes() {
    let q = fixture_q1();
    let pu = Complex::concentrated(&projective(&q, 0), 0);
    assert_eq!(k0_class(&pu), K0Class(vec![1, 1]));
    assert_eq!(k0_class(&pu.shift(1)), k0_class(&pu).neg());
    assert!(k0_class(&Complex::zero(q.clone())).is_zero());
    assert!(k0_check_triangle(&zero_triangle(&pu)));
}

#[test]
fn epimorphisms_detect_weights() {
    let q = fixture_q1();
    assert!(epimorphism_criterion(&simple(&q, 1), 0, T).unwrap());
    assert!(!epimorphism_criterion(&projective(&q, 0), 0, T).unwrap());
    assert!(epimorphism_criterion(&projective(&q, 0), 3, T).unwrap());
}

#[test]
fn stupid_filtration_degenerates_without_transversality() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let q = fixture_q0();
    for _ in 0..20 {
        let x = DerivedObject::new(weightforge::random::random_projective_complex(&mut rng, &q, 3, 2));
        let ss = run_ss(HomFunctor::THomology, &x, Mode::StupidOnProj).unwrap();
        assert!(ss.degenerates_at_e2 && ss.converges && ss.oracle_agrees);
        assert!(ss.e_inf_matches_filtration);
    }
}
