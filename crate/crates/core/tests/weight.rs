use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weightforge::derived::{
    direct_sum, hom_derived, hom_derived_dim, Complex, DerivedMorphism, DerivedObject,
};
use weightforge::quiver::{fixture_q0, fixture_q1, hom_basis, projective, simple};
use weightforge::weight::{
    a_adjoint, b_adjoint, check_transversality, extend_to_decompositions, image_condition_check,
    membership_w, nice_decompose, split_hw_object, weight_decompose, CheckBudget, Mode, Side,
};

fn obj(c: Complex) -> DerivedObject {
    DerivedObject::new(c)
}

fn pu() -> DerivedObject {
    obj(Complex::concentrated(&projective(&fixture_q1(), 0), 0))
}

#[test]
fn module_weight_decomposition() {
    let x = pu();
    let t = weight_decompose(&x, 0, Mode::Transversal).unwrap();
    let q = x.quiver();
    assert_eq!(t.a.cohomology(0).rep, simple(q, 1));
    assert_eq!(t.c.cohomology(0).rep, simple(q, 0));
    assert!(t.is_exact_on_cohomology());
    assert!(membership_w(t.a.complex(), 0, Side::Le, Mode::Transversal).unwrap());
    assert!(membership_w(t.c.complex(), 1, Side::Ge, Mode::Transversal).unwrap());
    assert_eq!(hom_derived_dim(&t.a, &t.c, 0), 0);

    let t = weight_decompose(&x, 3, Mode::Transversal).unwrap();
    assert!(t.c.is_zero());
    assert!(t.u.is_iso());
}

#[test]
fn stupid_decomposition_keeps_upper_degrees() {
    let q = fixture_q1();
    let (pv, pu) = (projective(&q, 1), projective(&q, 0));
    let d = hom_basis(&pv, &pu).unwrap().remove(0);
    let x = obj(Complex::new(q.clone(), 0, vec![pv, pu.clone()], vec![d]).unwrap());
    let t = weight_decompose(&x, -1, Mode::StupidOnProj).unwrap();
    assert_eq!(t.a.complex(), &Complex::concentrated(&pu, 1));
    assert!(membership_w(t.a.complex(), -1, Side::Le, Mode::StupidOnProj).unwrap());
    assert!(membership_w(t.c.complex(), 0, Side::Ge, Mode::StupidOnProj).unwrap());
    assert!(t.is_exact_on_cohomology());
    let s = obj(Complex::concentrated(&simple(&q, 0), 0));
    assert!(weight_decompose(&s, 0, Mode::StupidOnProj).is_err());
}

#[test]
fn nice_decompositions() {
    let q = fixture_q1();
    let t = nice_decompose(&projective(&q, 0), 0).unwrap();
    assert_eq!(t.a.complex(), &Complex::concentrated(&simple(&q, 1), 0));
    assert_eq!(t.c.complex(), &Complex::concentrated(&simple(&q, 0), 0));
    let t = nice_decompose(&projective(&q, 0), 4).unwrap();
    assert!(t.c.complex().is_zero());
    let t = nice_decompose(&simple(&q, 1), -1).unwrap();
    assert!(t.a.complex().is_zero());
    assert!(nice_decompose(&simple(&fixture_q0(), 0), 0).is_err());
}

#[test]
fn image_condition_on_projective() {
    let x = pu();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let c = image_condition_check(&x, 0, &mut rng).unwrap();
        assert!(c.holds && c.matches_filtration);
        assert_eq!(c.image, simple(x.quiver(), 1));
    }
    assert!(image_condition_check(&x, 9, &mut rng).unwrap().holds);
}

#[test]
fn heart_of_w_splits_into_slices() {
    let q = fixture_q1();
    let sv = Complex::concentrated(&simple(&q, 1), 0);
    let su1 = Complex::concentrated(&simple(&q, 0), 1);
    let x = obj(direct_sum(q.clone(), &[sv.clone(), su1]).0);
    let s = split_hw_object(&x).unwrap();
    let degrees: Vec<i32> = s.pieces.iter().map(|p| p.0).collect();
    assert_eq!(degrees, vec![0, 1]);
    assert_eq!(s.pieces[1].1, simple(&q, 0));
    assert_eq!(split_hw_object(&obj(sv)).unwrap().pieces.len(), 1);
    assert!(split_hw_object(&obj(Complex::zero(q))).unwrap().pieces.is_empty());
    assert!(split_hw_object(&pu()).is_err());
}

#[test]
fn adjoints_on_projective() {
    let x = pu();
    let q = x.quiver().clone();
    let b = b_adjoint(&x, 0).unwrap();
    assert_eq!(b.object.cohomology(0).rep, simple(&q, 1));
    assert!(b_adjoint(&x, 5).unwrap().map.is_iso());
    assert!(b_adjoint(&x, -1).unwrap().object.is_zero());
    let a = a_adjoint(&x, 1, 0).unwrap();
    assert_eq!(a.object.cohomology(0).rep, simple(&q, 0));
    let sv = obj(Complex::concentrated(&simple(&q, 1), 0));
    assert!(a_adjoint(&sv, 1, 0).unwrap().object.is_zero());
    assert!(a_adjoint(&x, 0, -1).is_err());

    // Hom(Y, b_0 X) ≅ Hom(Y, X) for Y with cohomology of weight ≤ 0.
    for n in -1..=1 {
        assert_eq!(hom_derived_dim(&sv, &b.object, n), hom_derived_dim(&sv, &x, n));
    }
}

#[test]
fn completing_morphisms_of_decompositions() {
    let x = pu();
    let q = x.quiver().clone();
    let sv = obj(Complex::concentrated(&simple(&q, 1), 0));
    let g = hom_derived(&sv, &x, 0).basis[0].clone();
    let tm = extend_to_decompositions(&g, 0, Mode::Transversal).unwrap();
    assert!(tm.commutes(&g));
    assert!(!tm.h.is_zero());
    assert!(tm.k.is_zero());

    let id = DerivedMorphism::identity(&x);
    let tm = extend_to_decompositions(&id, 0, Mode::Transversal).unwrap();
    assert!(tm.commutes(&id) && tm.h.is_iso());
    let z = DerivedMorphism::zero(&x, &x);
    let tm = extend_to_decompositions(&z, 0, Mode::Transversal).unwrap();
    assert!(tm.commutes(&z) && tm.h.is_zero() && tm.k.is_zero());
}

#[test]
fn duality_on_fixtures() {
    for q in [fixture_q1(), fixture_q0()] {
        let op = q.opposite().into_arc();
        let a = check_transversality(&q, CheckBudget::default()).overall;
        let b = check_transversality(&op, CheckBudget::default()).overall;
        assert_eq!(a, b);
    }
}
