use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::hom::HomSpace;
use super::replacement::{proj_replace, GenImages, Replacement};
use super::{ChainMap, Cohomology, Complex};
use crate::error::{Error, Result};
use crate::linalg::{solve, Rat, RatMatrix};
use crate::quiver::WeightedQuiver;

struct ObjectData {
    complex: Complex,
    replacement: OnceLock<Replacement>,
    cohomology: Mutex<HashMap<i32, Arc<Cohomology>>>,
}

/// An object of the derived category: a complex with its lazily built projective replacement.
#[derive(Clone)]
pub struct DerivedObject(Arc<ObjectData>);

impl fmt::Debug for DerivedObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DerivedObject({:?})", self.0.complex)
    }
}

impl From<Complex> for DerivedObject {
    fn from(c: Complex) -> Self {
        DerivedObject::new(c)
    }
}

impl DerivedObject {
    pub fn new(complex: Complex) -> Self {
        DerivedObject(Arc::new(ObjectData {
            complex,
            replacement: OnceLock::new(),
            cohomology: Mutex::new(HashMap::new()),
        }))
    }

    pub fn zero(q: Arc<WeightedQuiver>) -> Self {
        DerivedObject::new(Complex::zero(q))
    }

    pub fn complex(&self) -> &Complex {
        &self.0.complex
    }

    pub fn quiver(&self) -> &Arc<WeightedQuiver> {
        self.0.complex.quiver()
    }

    pub fn replacement(&self) -> &Replacement {
        self.0
            .replacement
            .get_or_init(|| proj_replace(&self.0.complex))
    }

    pub fn cohomology(&self, n: i32) -> Arc<Cohomology> {
        let mut cache = self.0.cohomology.lock().expect("cohomology cache");
        cache
            .entry(n)
            .or_insert_with(|| Arc::new(self.0.complex.cohomology(n)))
            .clone()
    }

    pub fn shift(&self, k: i32) -> DerivedObject {
        DerivedObject::new(self.complex().shift(k))
    }

    /// Isomorphic to zero in the derived category.
    pub fn is_zero(&self) -> bool {
        self.complex().is_acyclic()
    }

    pub fn same(&self, other: &DerivedObject) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.complex() == other.complex()
    }

    /// `H^n(ε)` per vertex, from the replacement's cohomology basis to ours.
    fn eps_cohomology(&self, n: i32) -> Vec<RatMatrix> {
        let r = self.replacement();
        let hp = r.proj.complex().cohomology(n);
        r.eps_chain.cohomology_map(n, &hp, &self.cohomology(n))
    }
}

/// A morphism `X → Y` in the derived category, stored as a chain map `P(X) → Y`.
#[derive(Clone)]
pub struct DerivedMorphism {
    source: DerivedObject,
    target: DerivedObject,
    images: GenImages,
}

impl fmt::Debug for DerivedMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DerivedMorphism")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("images", &self.images)
            .finish()
    }
}

impl DerivedMorphism {
    pub fn from_images(source: DerivedObject, target: DerivedObject, images: GenImages) -> Self {
        DerivedMorphism {
            source,
            target,
            images,
        }
    }

    /// The class of an honest chain map `X → Y`.
    pub fn from_chain_map(source: &DerivedObject, target: &DerivedObject, c: &ChainMap) -> Self {
        let r = source.replacement();
        let images = r.eps.map(|m, g, v| {
            let x = r.proj.gens(m)[g];
            c.component(m).component(x).mul_vec(v)
        });
        DerivedMorphism::from_images(source.clone(), target.clone(), images)
    }

    pub fn identity(x: &DerivedObject) -> Self {
        let r = x.replacement();
        DerivedMorphism::from_images(x.clone(), x.clone(), r.eps.clone())
    }

    pub fn zero(source: &DerivedObject, target: &DerivedObject) -> Self {
        let images = source.replacement().proj.zero_images(target.complex());
        DerivedMorphism::from_images(source.clone(), target.clone(), images)
    }

    pub fn source(&self) -> &DerivedObject {
        &self.source
    }

    pub fn target(&self) -> &DerivedObject {
        &self.target
    }

    pub fn images(&self) -> &GenImages {
        &self.images
    }

    /// The representing chain map `P(X) → Y`.
    pub fn chain(&self) -> ChainMap {
        self.source
            .replacement()
            .proj
            .chain_map(self.target.complex(), &self.images)
    }

    /// A chain map `P(X) → P(Y)` lifting this morphism through `ε_Y`.
    pub fn lift(&self) -> GenImages {
        let ry = self.target.replacement();
        self.source
            .replacement()
            .proj
            .lift(&self.images, ry.proj.complex(), &ry.eps_chain)
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &DerivedMorphism) -> DerivedMorphism {
        assert!(f.target.same(&self.source), "composition mismatch");
        let lifted = f.lift();
        let g = self.chain();
        let pf = &f.source.replacement().proj;
        let images = lifted.map(|m, gi, v| {
            let x = pf.gens(m)[gi];
            g.component(m).component(x).mul_vec(v)
        });
        DerivedMorphism::from_images(f.source.clone(), self.target.clone(), images)
    }

    pub fn add(&self, g: &DerivedMorphism) -> DerivedMorphism {
        DerivedMorphism::from_images(
            self.source.clone(),
            self.target.clone(),
            self.images.zip(&g.images, |a, b| a + b),
        )
    }

    pub fn sub(&self, g: &DerivedMorphism) -> DerivedMorphism {
        DerivedMorphism::from_images(
            self.source.clone(),
            self.target.clone(),
            self.images.zip(&g.images, |a, b| a - b),
        )
    }

    pub fn scale(&self, c: &Rat) -> DerivedMorphism {
        DerivedMorphism::from_images(
            self.source.clone(),
            self.target.clone(),
            self.images
                .map(|_, _, v| v.iter().map(|x| x * c).collect()),
        )
    }

    pub fn neg(&self) -> DerivedMorphism {
        self.scale(&-Rat::one())
    }

    pub fn hom_space(&self) -> HomSpace {
        HomSpace::new(&self.source.replacement().proj, self.target.complex())
    }

    /// Zero in the derived category (null-homotopic as a map out of `P(X)`).
    pub fn is_zero(&self) -> bool {
        self.hom_space().is_null(&self.images)
    }

    pub fn homotopic(&self, g: &DerivedMorphism) -> bool {
        self.sub(g).is_zero()
    }

    /// `H^n` of this morphism per vertex, in the cohomology bases of `X` and `Y`.
    pub fn cohomology(&self, n: i32) -> Vec<RatMatrix> {
        let p = self.source.replacement().proj.complex();
        let hp = p.cohomology(n);
        let hy = self.target.cohomology(n);
        let hf = self.chain().cohomology_map(n, &hp, &hy);
        let he = self.source.eps_cohomology(n);
        hf.iter()
            .zip(&he)
            .map(|(a, e)| a * &e.inverse().expect("ε is a quasi-isomorphism"))
            .collect()
    }

    fn cohomology_range(&self) -> std::ops::RangeInclusive<i32> {
        let x = self.source.complex();
        let y = self.target.complex();
        let lo = [x, y].iter().filter(|c| !c.is_zero()).map(|c| c.lo()).min();
        let hi = [x, y].iter().filter(|c| !c.is_zero()).map(|c| c.hi()).max();
        match (lo, hi) {
            (Some(l), Some(h)) => l..=h,
            #[allow(clippy::reversed_empty_ranges)]
            _ => 0..=-1,
        }
    }

    /// Invertible on every cohomology.
    pub fn is_iso(&self) -> bool {
        let x = self.source.complex();
        let y = self.target.complex();
        self.cohomology_range().all(|n| {
            x.cohomology_dims(n) == y.cohomology_dims(n)
                && self.cohomology(n).iter().all(|m| m.rank() == m.rows())
        })
    }

    /// `f[k]: X[k] → Y[k]`.
    pub fn shift(&self, k: i32) -> DerivedMorphism {
        let xs = self.source.shift(k);
        let ys = self.target.shift(k);
        let rx = self.source.replacement();
        let pk = rx.proj.complex().shift(k);
        let eps_k = rx.eps_chain.shift(k);
        let to_pk = xs.replacement().proj.lift(&xs.replacement().eps, &pk, &eps_k);
        let fk = self.chain().shift(k);
        let pxs = &xs.replacement().proj;
        let images = to_pk.map(|m, g, v| {
            let x = pxs.gens(m)[g];
            fk.component(m).component(x).mul_vec(v)
        });
        DerivedMorphism::from_images(xs, ys, images)
    }

    /// The inverse of an isomorphism.
    pub fn inverse(&self) -> Result<DerivedMorphism> {
        let x = &self.target;
        let hom = HomSpace::new(&x.replacement().proj, self.source.complex());
        let back = HomSpace::new(&x.replacement().proj, x.complex());
        let basis: Vec<DerivedMorphism> = hom
            .basis()
            .into_iter()
            .map(|im| DerivedMorphism::from_images(x.clone(), self.source.clone(), im))
            .collect();
        let cols: Vec<Vec<Rat>> = basis
            .iter()
            .map(|psi| back.class_coords(&self.compose(psi).images))
            .collect();
        let target = back.class_coords(&x.replacement().eps);
        let m = RatMatrix::from_columns(back.dim(), &cols);
        let c = solve(&m, &target)?.ok_or(Error::NotInvertible)?;
        let psi = DerivedMorphism::from_images(
            x.clone(),
            self.source.clone(),
            hom.combination(&c),
        );
        if !psi.compose(self).homotopic(&DerivedMorphism::identity(&self.source)) {
            return Err(Error::NotInvertible);
        }
        Ok(psi)
    }

    /// Some morphism `X → Y` whose `H^n` equals `targets[n]` for every `n` in range.
    pub fn with_cohomology(
        source: &DerivedObject,
        target: &DerivedObject,
        targets: &HashMap<i32, Vec<RatMatrix>>,
    ) -> Option<DerivedMorphism> {
        let hom = HomSpace::new(&source.replacement().proj, target.complex());
        let basis: Vec<DerivedMorphism> = hom
            .basis()
            .into_iter()
            .map(|im| DerivedMorphism::from_images(source.clone(), target.clone(), im))
            .collect();
        let mut degrees: Vec<i32> = targets.keys().copied().collect();
        degrees.sort_unstable();
        let flat = |maps: &[RatMatrix]| -> Vec<Rat> {
            maps.iter().flat_map(|m| m.entries().to_vec()).collect()
        };
        let rhs: Vec<Rat> = degrees.iter().flat_map(|n| flat(&targets[n])).collect();
        let cols: Vec<Vec<Rat>> = basis
            .iter()
            .map(|b| degrees.iter().flat_map(|&n| flat(&b.cohomology(n))).collect())
            .collect();
        let m = RatMatrix::from_columns(rhs.len(), &cols);
        let c = solve(&m, &rhs).ok()??;
        Some(DerivedMorphism::from_images(
            source.clone(),
            target.clone(),
            hom.combination(&c),
        ))
    }
}

/// `Hom(X, Y[n])` in the derived category.
#[derive(Clone, Debug)]
pub struct DerivedHom {
    pub source: DerivedObject,
    pub target: DerivedObject,
    pub shift: i32,
    pub dim: usize,
    pub basis: Vec<DerivedMorphism>,
    space: HomSpace,
}

impl DerivedHom {
    pub fn space(&self) -> &HomSpace {
        &self.space
    }

    /// Coordinates of a morphism `X → Y[n]` in [`DerivedHom::basis`].
    pub fn coords(&self, f: &DerivedMorphism) -> Vec<Rat> {
        self.space.class_coords(f.images())
    }
}

pub fn hom_derived(x: &DerivedObject, y: &DerivedObject, n: i32) -> DerivedHom {
    let target = if n == 0 { y.clone() } else { y.shift(n) };
    let space = HomSpace::new(&x.replacement().proj, target.complex());
    let basis = space
        .basis()
        .into_iter()
        .map(|im| DerivedMorphism::from_images(x.clone(), target.clone(), im))
        .collect();
    DerivedHom {
        source: x.clone(),
        target,
        shift: n,
        dim: space.dim(),
        basis,
        space,
    }
}

/// Dimension of `Hom(X, Y[n])` without materializing the basis morphisms.
pub fn hom_derived_dim(x: &DerivedObject, y: &DerivedObject, n: i32) -> usize {
    let t = y.complex().shift(n);
    HomSpace::new(&x.replacement().proj, &t).dim()
}
