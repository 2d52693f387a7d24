use rand::Rng;

use crate::derived::{cone_triangle, hom_derived, DerivedMorphism, DerivedObject, Triangle};
use crate::error::{Error, Result};
use crate::linalg::{solve, RatMatrix};
use crate::weight::{perturbed_weight_decompose, weight_decompose, weight_range, Mode};

/// `0 = L_{lo−1} → L_lo → … → L_hi ≅ X` with `L_k = w≤k X` and graded pieces `Gr_k ∈ w = k`.
#[derive(Clone, Debug)]
pub struct Tower {
    pub object: DerivedObject,
    pub lo: i32,
    /// `L_lo, …, L_hi`.
    pub levels: Vec<DerivedObject>,
    /// `steps[k − lo]: L_{k−1} → L_k`, the first one out of zero.
    pub steps: Vec<DerivedMorphism>,
    /// `u_k: L_k → X`.
    pub to_x: Vec<DerivedMorphism>,
    /// `L_{k−1} → L_k → Gr_k → L_{k−1}[1]`.
    pub grades: Vec<Triangle>,
}

impl Tower {
    pub fn hi(&self) -> i32 {
        self.lo + self.levels.len() as i32 - 1
    }

    pub fn level(&self, k: i32) -> &DerivedObject {
        &self.levels[(k - self.lo) as usize]
    }

    pub fn graded(&self, k: i32) -> &DerivedObject {
        &self.grades[(k - self.lo) as usize].c
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// Levels where the tower may change: the weight range, or for stupid
/// filtrations every degree of the given complex.
fn level_range(x: &DerivedObject, mode: Mode) -> Result<Option<(i32, i32)>> {
    match mode {
        Mode::Transversal => Ok(weight_range(x.complex(), mode)?.map(|r| (r.lo, r.hi))),
        Mode::StupidOnProj => {
            weight_range(x.complex(), mode)?;
            let c = x.complex();
            Ok((!c.is_zero()).then(|| (-c.hi(), -c.lo())))
        }
    }
}

/// `h: A → A'` with `u' ∘ h = u`.
fn factor_through(u: &DerivedMorphism, u2: &DerivedMorphism) -> Result<DerivedMorphism> {
    let basis = hom_derived(u.source(), u2.source(), 0).basis;
    let space = u.hom_space();
    let cols: Vec<_> = basis
        .iter()
        .map(|b| space.class_coords(u2.compose(b).images()))
        .collect();
    let rhs = space.class_coords(u.images());
    let c = solve(&RatMatrix::from_columns(rhs.len(), &cols), &rhs)?
        .ok_or_else(|| Error::Membership("weight truncations do not factor".into()))?;
    Ok(basis
        .iter()
        .zip(&c)
        .fold(DerivedMorphism::zero(u.source(), u2.source()), |acc, (b, x)| {
            acc.add(&b.scale(x))
        }))
}

/// A tower from chosen decompositions `w≤k X → X`, `k = lo..=hi`.
pub fn tower_from_decompositions(
    x: &DerivedObject,
    lo: i32,
    decomps: Vec<Triangle>,
) -> Result<Tower> {
    let levels: Vec<DerivedObject> = decomps.iter().map(|t| t.a.clone()).collect();
    let to_x: Vec<DerivedMorphism> = decomps
        .iter()
        .map(|t| DerivedMorphism::from_images(t.a.clone(), x.clone(), t.u.images().clone()))
        .collect();
    let mut steps = Vec::new();
    let zero = DerivedObject::zero(x.quiver().clone());
    for k in 0..levels.len() {
        steps.push(if k == 0 {
            DerivedMorphism::zero(&zero, &levels[0])
        } else {
            factor_through(&to_x[k - 1], &to_x[k])?
        });
    }
    let grades = steps.iter().map(cone_triangle).collect();
    Ok(Tower {
        object: x.clone(),
        lo,
        levels,
        steps,
        to_x,
        grades,
    })
}

/// The canonical weight tower.
pub fn build_tower(x: &DerivedObject, mode: Mode) -> Result<Tower> {
    let Some((lo, hi)) = level_range(x, mode)? else {
        return tower_from_decompositions(x, 0, Vec::new());
    };
    let decomps = (lo..=hi)
        .map(|k| weight_decompose(x, k, mode))
        .collect::<Result<Vec<_>>>()?;
    tower_from_decompositions(x, lo, decomps)
}

/// A tower built from randomized (non-canonical) weight decompositions.
pub fn build_perturbed_tower<R: Rng>(x: &DerivedObject, mode: Mode, rng: &mut R) -> Result<Tower> {
    let Some((lo, hi)) = level_range(x, mode)? else {
        return tower_from_decompositions(x, 0, Vec::new());
    };
    let decomps = (lo..=hi)
        .map(|k| {
            if k == hi {
                weight_decompose(x, k, mode)
            } else {
                perturbed_weight_decompose(x, k, mode, rng)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    tower_from_decompositions(x, lo, decomps)
}
