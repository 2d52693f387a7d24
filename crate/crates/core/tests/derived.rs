use weightforge::derived::{
    cone_triangle, direct_sum, formality_split, hom_derived, hom_derived_dim, proj_replace,
    split_idempotent_derived, tau_ge, tau_le, truncation_triangle, Complex,
    DerivedMorphism, DerivedObject,
};
use weightforge::quiver::{ext1, fixture_q1, hom_basis, projective, simple, RepMap};

fn q1_objects() -> (DerivedObject, DerivedObject, DerivedObject) {
    let q = fixture_q1();
    let su = DerivedObject::new(Complex::concentrated(&simple(&q, 0), 0));
    let sv = DerivedObject::new(Complex::concentrated(&simple(&q, 1), 0));
    let pu = DerivedObject::new(Complex::concentrated(&projective(&q, 0), 0));
    (su, sv, pu)
}

#[test]
fn derived_hom_between_simples() {
    let (su, sv, pu) = q1_objects();
    assert_eq!(hom_derived_dim(&su, &sv, 1), 1);
    assert_eq!(hom_derived_dim(&su, &sv, 0), 0);
    for n in -3..=3 {
        assert_eq!(hom_derived_dim(&sv, &su, n), 0, "shift {n}");
    }
    let h = hom_derived(&pu, &pu, 0);
    assert_eq!(h.dim, 1);
    let id = DerivedMorphism::identity(&pu);
    assert!(h.coords(&id).iter().any(|c| !c.is_zero()));
}

#[test]
fn projective_replacement_of_simple_top() {
    let (su, _, _) = q1_objects();
    let r = proj_replace(su.complex());
    let p = r.proj.complex();
    assert_eq!((p.lo(), p.hi()), (-1, 0));
    assert_eq!(p.term(-1), projective(su.quiver(), 1));
    assert_eq!(p.term(0), projective(su.quiver(), 0));
    assert!(r.eps_chain.is_quasi_iso());
}

#[test]
fn cone_of_extension_class_is_projective_cover() {
    let (su, sv, _) = q1_objects();
    let x = su.shift(-1);
    let h = hom_derived(&x, &sv, 0);
    assert_eq!(h.dim, 1);
    let t = cone_triangle(&h.basis[0]);
    assert!(t.is_exact_on_cohomology());
    let h0 = t.c.cohomology(0);
    assert_eq!(h0.rep.dims(), &[1, 1]);
    assert_eq!(h0.rep.matrix(0).rank(), 1);
    assert!(t.c.cohomology(1).rep.is_zero());
}

#[test]
fn composition_and_inverse() {
    let (_, _, pu) = q1_objects();
    let q = pu.quiver().clone();
    // Two models of P_u: itself and the cone of the identity on S_v added to it.
    let sv = simple(&q, 1);
    let contractible = Complex::new(
        q.clone(),
        0,
        vec![sv.clone(), sv.clone()],
        vec![RepMap::identity(&sv)],
    )
    .unwrap();
    let (sum, incls, projs) = direct_sum(q.clone(), &[pu.complex().clone(), contractible]);
    let big = DerivedObject::new(sum);
    let f = DerivedMorphism::from_chain_map(&pu, &big, &incls[0]);
    assert!(f.is_iso());
    let g = f.inverse().unwrap();
    assert!(f.compose(&g).homotopic(&DerivedMorphism::identity(&big)));
    let p0 = DerivedMorphism::from_chain_map(&big, &pu, &projs[0]);
    assert!(g.homotopic(&p0));
}

#[test]
fn shifted_morphism_has_shifted_cohomology() {
    let (_, sv, pu) = q1_objects();
    let f = hom_derived(&sv, &pu, 0).basis[0].clone();
    let f2 = f.shift(2);
    assert_eq!(f2.cohomology(-2), f.cohomology(0));
    assert!(!f2.is_zero());
}

#[test]
fn truncations_of_split_complex() {
    let (su, sv, _) = q1_objects();
    let q = su.quiver().clone();
    let x = direct_sum(q, &[su.complex().shift(1), sv.complex().clone()]).0;
    let (le, _) = tau_le(&x, -1);
    let (ge, _) = tau_ge(&x, 0);
    assert_eq!(le.cohomology_dims(-1), vec![1, 0]);
    assert_eq!(le.cohomology_dims(0), vec![0, 0]);
    assert_eq!(ge.cohomology_dims(0), vec![0, 1]);
    assert_eq!(ge.cohomology_dims(-1), vec![0, 0]);
    assert!(truncation_triangle(&x, -1).is_exact_on_cohomology());
    let (all, incl) = tau_le(&x, 5);
    assert_eq!(all, x);
    assert!(incl.is_quasi_iso());
    assert!(tau_le(&x, -3).0.is_zero());
}

#[test]
fn formality_of_two_term_projective_complex() {
    let q = fixture_q1();
    let pv = projective(&q, 1);
    let pu = projective(&q, 0);
    let d = hom_basis(&pv, &pu).unwrap().remove(0);
    let x = DerivedObject::new(Complex::new(q.clone(), 0, vec![pv, pu], vec![d]).unwrap());
    let fm = formality_split(&x);
    assert_eq!(fm.pieces.len(), 1);
    assert_eq!(fm.pieces[0].0, 1);
    assert_eq!(fm.pieces[0].1, simple(&q, 0));
    assert!(fm.from_x.compose(&fm.to_x).homotopic(&DerivedMorphism::identity(&fm.formal)));
    let acyclic = Complex::new(
        q.clone(),
        0,
        vec![simple(&q, 1), simple(&q, 1)],
        vec![RepMap::identity(&simple(&q, 1))],
    )
    .unwrap();
    assert!(formality_split(&DerivedObject::new(acyclic)).pieces.is_empty());
}

#[test]
fn idempotent_with_extension_block_splits() {
    let (su, sv, _) = q1_objects();
    let q = su.quiver().clone();
    let t = su.shift(-1);
    let (f, incls, projs) = direct_sum(q, &[sv.complex().clone(), t.complex().clone()]);
    let f = DerivedObject::new(f);
    let il = DerivedMorphism::from_chain_map(&sv, &f, &incls[0]);
    let pl = DerivedMorphism::from_chain_map(&f, &sv, &projs[0]);
    let pt = DerivedMorphism::from_chain_map(&f, &t, &projs[1]);
    let c = hom_derived(&t, &sv, 0).basis[0].clone();
    assert_eq!(ext1(&simple(su.quiver(), 0), &simple(su.quiver(), 1)).unwrap().dim, 1);
    let d = il.compose(&c).compose(&pt);
    let e = il.compose(&pl).add(&d);
    assert!(e.compose(&e).homotopic(&e));
    assert!(!d.is_zero());

    let s = split_idempotent_derived(&e).unwrap();
    assert_eq!(s.image.complex().cohomology_dims(0), vec![0, 1]);
    assert_eq!(s.image.complex().cohomology_dims(1), vec![0, 0]);
    assert!(s.projection.compose(&s.inclusion).homotopic(&DerivedMorphism::identity(&s.image)));
    assert!(s.inclusion.compose(&s.projection).homotopic(&e));
}

#[test]
fn trivial_idempotents() {
    let (_, _, pu) = q1_objects();
    let id = DerivedMorphism::identity(&pu);
    let s = split_idempotent_derived(&id).unwrap();
    assert_eq!(s.image.complex().cohomology_dims(0), vec![1, 1]);
    let z = DerivedMorphism::zero(&pu, &pu);
    assert!(split_idempotent_derived(&z).unwrap().image.is_zero());
    let two = id.scale(&weightforge::linalg::Rat::from_int(2));
    assert!(split_idempotent_derived(&two).is_err());
}
