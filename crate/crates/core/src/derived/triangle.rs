use super::morphism::{DerivedMorphism, DerivedObject};
use super::replacement::GenImages;
use super::{ChainMap, Complex};
use crate::linalg::RatMatrix;
use crate::quiver::RepMap;

/// A distinguished triangle `A → B → C → A[1]`.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub a: DerivedObject,
    pub b: DerivedObject,
    pub c: DerivedObject,
    pub u: DerivedMorphism,
    pub v: DerivedMorphism,
    pub w: DerivedMorphism,
}

impl Triangle {
    /// Replaces the middle object along an isomorphism `φ: B → X` with inverse `ψ`.
    pub fn transport(&self, phi: &DerivedMorphism, psi: &DerivedMorphism) -> Triangle {
        Triangle {
            a: self.a.clone(),
            b: phi.target().clone(),
            c: self.c.clone(),
            u: phi.compose(&self.u),
            v: self.v.compose(psi),
            w: self.w.clone(),
        }
    }

    /// Exactness of the long exact cohomology sequence, checked vertex by vertex.
    pub fn is_exact_on_cohomology(&self) -> bool {
        let degrees = [&self.a, &self.b, &self.c]
            .iter()
            .filter(|o| !o.complex().is_zero())
            .flat_map(|o| [o.complex().lo() - 1, o.complex().hi() + 1])
            .collect::<Vec<_>>();
        let (Some(&lo), Some(&hi)) = (degrees.iter().min(), degrees.iter().max()) else {
            return true;
        };
        let nv = self.a.quiver().vertex_count();
        for n in lo..=hi {
            let hu = self.u.cohomology(n);
            let hv = self.v.cohomology(n);
            let hw = self.w.cohomology(n);
            let hu1 = self.u.cohomology(n + 1);
            // H^n(A[1]) and H^{n+1}(A) are computed separately; identify them.
            let ha1 = self.w.target().cohomology(n);
            let ha = self.a.cohomology(n + 1);
            for x in 0..nv {
                let ident = &ha.class_map[x] * &ha1.section[x];
                let hw = &ident * &hw[x];
                let exact_at = |inc: &RatMatrix, out: &RatMatrix| {
                    (out * inc).is_zero() && inc.rank() + out.rank() == inc.rows()
                };
                if !exact_at(&hu[x], &hv[x]) || !exact_at(&hv[x], &hw) || !exact_at(&hw, &hu1[x]) {
                    return false;
                }
            }
        }
        true
    }
}

/// The mapping-cone triangle `X → Y → cone(f) → X[1]`.
pub fn cone_triangle(f: &DerivedMorphism) -> Triangle {
    let chain = f.chain();
    let (cone, iota, pi) = chain.cone();
    let c = DerivedObject::new(cone);
    let x = f.source();
    let x1 = x.shift(1);
    let eps1 = x.replacement().eps_chain.shift(1);
    let w = DerivedMorphism::from_chain_map(&c, &x1, &eps1.compose(&pi));
    Triangle {
        a: x.clone(),
        b: f.target().clone(),
        c: c.clone(),
        u: f.clone(),
        v: DerivedMorphism::from_chain_map(f.target(), &c, &iota),
        w,
    }
}

/// The triangle `A → B → C → A[1]` of a pair `u: A → B`, `g: B → C` with `g ∘ u = 0`
/// such that the induced `cone(u) → C` is a surjective quasi-isomorphism
/// (short exact sequences, canonical truncations).
///
/// The connecting map is `ε_A[1] ∘ π ∘ lift(ε_C)`, the lift taken through `cone(u) → C`.
pub fn triangle_from_exact_pair(u: &ChainMap, g: &ChainMap) -> Triangle {
    let a = DerivedObject::new(u.source().clone());
    let b = DerivedObject::new(u.target().clone());
    let c = DerivedObject::new(g.target().clone());
    let du = DerivedMorphism::from_chain_map(&a, &b, u);
    let dv = DerivedMorphism::from_chain_map(&b, &c, g);
    let w = connecting(&a, &du, &c, g);
    Triangle {
        a,
        b,
        c,
        u: du,
        v: dv,
        w,
    }
}

fn connecting(
    a: &DerivedObject,
    du: &DerivedMorphism,
    c: &DerivedObject,
    g: &ChainMap,
) -> DerivedMorphism {
    let q = a.quiver().clone();
    let (cone, _, _) = du.chain().cone();
    let ra = a.replacement();
    let pa = ra.proj.complex();
    let comps: Vec<RepMap> = cone
        .degrees()
        .map(|n| {
            let mats = (0..q.vertex_count())
                .map(|x| {
                    let left = pa.term(n + 1).dim(x);
                    let gx = g.component(n).component(x).clone();
                    RatMatrix::zeros(gx.rows(), left).hstack(&gx)
                })
                .collect();
            RepMap::new_unchecked(cone.term(n), g.target().term(n), mats)
        })
        .collect();
    let qmap = ChainMap::new_unchecked(cone.clone(), g.target().clone(), comps);
    let rc = c.replacement();
    let lifted = rc.proj.lift(&rc.eps, &cone, &qmap);
    let images: GenImages = lifted.map(|m, gi, v| {
        let x = rc.proj.gens(m)[gi];
        let left = pa.term(m + 1).dim(x);
        ra.eps_chain
            .component(m + 1)
            .component(x)
            .mul_vec(&v[..left])
    });
    DerivedMorphism::from_images(c.clone(), a.shift(1), images)
}

/// The triangle of a degreewise short exact sequence `0 → A → B → C → 0`.
pub fn ses_triangle(f: &ChainMap, g: &ChainMap) -> Triangle {
    triangle_from_exact_pair(f, g)
}

/// `X → 0 → X[1] → X[1]`, the rotation witnessing `[X[1]] = −[X]`.
pub fn zero_triangle(x: &Complex) -> Triangle {
    let x = DerivedObject::new(x.clone());
    let z = DerivedObject::zero(x.quiver().clone());
    cone_triangle(&DerivedMorphism::zero(&x, &z))
}
