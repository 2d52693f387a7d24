use super::formality::{formality_split, nested_formal};
use super::morphism::{DerivedMorphism, DerivedObject};
use super::{direct_sum, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::quiver::{split_idempotent_module, RepMap};

/// `X ≅ Im e ⊕ Im(1 − e)` on the image side: `p ∘ i = 1` and `i ∘ p = e`.
#[derive(Clone, Debug)]
pub struct IdempotentSplit {
    pub image: DerivedObject,
    pub inclusion: DerivedMorphism,
    pub projection: DerivedMorphism,
}

/// Splits an idempotent endomorphism in the derived category.
///
/// Works on the formal model `⊕ H^n[−n]`; there `e` is upper triangular with
/// blocks `s_n ∈ End H^n` and `Ext^1` terms between neighbouring degrees, and is
/// conjugated to its diagonal before splitting blockwise.
pub fn split_idempotent_derived(e: &DerivedMorphism) -> Result<IdempotentSplit> {
    let x = e.source();
    if !x.same(e.target()) {
        return Err(Error::Shape("idempotent must be an endomorphism".into()));
    }
    if !e.compose(e).homotopic(e) {
        return Err(Error::NotIdempotent);
    }
    let fm = formality_split(x);
    if fm.pieces.is_empty() {
        return Ok(IdempotentSplit {
            image: fm.formal.clone(),
            inclusion: DerivedMorphism::zero(&fm.formal, x),
            projection: DerivedMorphism::zero(x, &fm.formal),
        });
    }
    let pieces: Vec<Complex> = fm
        .pieces
        .iter()
        .map(|(n, r)| Complex::concentrated(r, *n))
        .collect();
    let ef = fm.from_x.compose(e).compose(&fm.to_x);
    let s = split_formal(&pieces, &fm.formal, &ef)?;
    Ok(IdempotentSplit {
        image: s.image,
        inclusion: fm.to_x.compose(&s.inclusion),
        projection: s.projection.compose(&fm.from_x),
    })
}

fn split_formal(
    pieces: &[Complex],
    f: &DerivedObject,
    e: &DerivedMorphism,
) -> Result<IdempotentSplit> {
    let [rest @ .., top] = pieces else {
        unreachable!("at least one piece")
    };
    if rest.is_empty() {
        return split_concentrated(top, f, e);
    }
    let q = f.quiver().clone();
    let l = DerivedObject::new(nested_formal(rest));
    let t = DerivedObject::new(top.clone());
    let (sum, incls, projs) = direct_sum(q.clone(), &[l.complex().clone(), top.clone()]);
    debug_assert!(&sum == f.complex());
    let il = DerivedMorphism::from_chain_map(&l, f, &incls[0]);
    let it = DerivedMorphism::from_chain_map(&t, f, &incls[1]);
    let pl = DerivedMorphism::from_chain_map(f, &l, &projs[0]);
    let pt = DerivedMorphism::from_chain_map(f, &t, &projs[1]);

    let s1 = pl.compose(e).compose(&il);
    let s2 = pt.compose(e).compose(&it);
    let big_s1 = il.compose(&s1).compose(&pl);
    let big_s2 = it.compose(&s2).compose(&pt);
    // Nothing maps from lower degrees to the top piece, so e = S1 + S2 + D.
    let d = il.compose(&pl).compose(e).compose(&it).compose(&pt);
    let xm = big_s1.compose(&d).sub(&d.compose(&big_s2));
    let id = DerivedMorphism::identity(f);
    let h = id.add(&xm);
    let h_inv = id.sub(&xm);

    let lower = split_formal(rest, &l, &s1)?;
    let upper = split_concentrated(top, &t, &s2)?;
    let (ysum, yincl, yproj) = direct_sum(
        q,
        &[lower.image.complex().clone(), upper.image.complex().clone()],
    );
    let y = DerivedObject::new(ysum);
    let yl = &lower.image;
    let yt = &upper.image;
    let y_il = DerivedMorphism::from_chain_map(yl, &y, &yincl[0]);
    let y_it = DerivedMorphism::from_chain_map(yt, &y, &yincl[1]);
    let y_pl = DerivedMorphism::from_chain_map(&y, yl, &yproj[0]);
    let y_pt = DerivedMorphism::from_chain_map(&y, yt, &yproj[1]);
    let diag_incl = il
        .compose(&lower.inclusion)
        .compose(&y_pl)
        .add(&it.compose(&upper.inclusion).compose(&y_pt));
    let diag_proj = y_il
        .compose(&lower.projection)
        .compose(&pl)
        .add(&y_it.compose(&upper.projection).compose(&pt));
    Ok(IdempotentSplit {
        image: y,
        inclusion: h_inv.compose(&diag_incl),
        projection: diag_proj.compose(&h),
    })
}

fn split_concentrated(
    c: &Complex,
    f: &DerivedObject,
    e: &DerivedMorphism,
) -> Result<IdempotentSplit> {
    let n = c.lo();
    let m = c.term(n);
    let h = f.cohomology(n);
    let he = e.cohomology(n);
    let comps = (0..m.quiver().vertex_count())
        .map(|v| &(&h.section[v] * &he[v]) * &h.class_map[v])
        .collect();
    let em = RepMap::new(m.clone(), m.clone(), comps)?;
    let (img, incl, proj) = split_idempotent_module(&m, &em)?;
    let ic = Complex::concentrated(&img, n);
    let y = DerivedObject::new(ic.clone());
    let inclusion = if ic.is_zero() {
        ChainMap::zero(&ic, c)
    } else {
        ChainMap::new(ic.clone(), c.clone(), vec![incl])?
    };
    let projection = ChainMap::new(c.clone(), ic, vec![proj])?;
    Ok(IdempotentSplit {
        inclusion: DerivedMorphism::from_chain_map(&y, f, &inclusion),
        projection: DerivedMorphism::from_chain_map(f, &y, &projection),
        image: y,
    })
}
