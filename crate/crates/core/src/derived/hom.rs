use std::collections::HashMap;

use super::replacement::{GenImages, ProjComplex};
use super::Complex;
use crate::linalg::{image_basis, kernel_basis, left_inverse, Rat, RatMatrix};

/// Chain maps `P → Y` modulo null-homotopic ones, for `P` a complex of free representations.
///
/// A chain map is a vector of generator images; the homotopy classes are a
/// quotient `Z / B` of plain vector spaces.
#[derive(Clone, Debug)]
pub struct HomSpace {
    lo: i32,
    /// `offsets[m − lo][g]`: start of generator `g`'s image in the flat coordinates.
    offsets: Vec<Vec<(usize, usize)>>,
    ncoords: usize,
    /// Representatives of a basis of `Z / B`, as flat coordinates.
    reps: Vec<Vec<Rat>>,
    bdim: usize,
    /// Left inverse of `[B | reps]`; its last rows read off class coordinates.
    reader: RatMatrix,
}

struct PathCache<'a> {
    y: &'a Complex,
    cache: HashMap<(i32, usize), RatMatrix>,
}

impl PathCache<'_> {
    fn get(&mut self, m: i32, p: usize) -> &RatMatrix {
        let y = self.y;
        self.cache
            .entry((m, p))
            .or_insert_with(|| y.term(m).path_matrix(p))
    }
}

impl HomSpace {
    pub fn new(p: &ProjComplex, y: &Complex) -> Self {
        let lo = p.lo();
        let mut offsets: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut ncoords = 0;
        for m in p.degrees() {
            let ty = y.term(m);
            offsets.push(
                p.gens(m)
                    .iter()
                    .map(|&x| {
                        let o = (ncoords, ty.dim(x));
                        ncoords += ty.dim(x);
                        o
                    })
                    .collect(),
            );
        }
        let mut paths = PathCache {
            y,
            cache: HashMap::new(),
        };

        // Chain-map condition d_Y f(g) = f(d g), one block of rows per generator.
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for m in p.degrees() {
            let k = (m - lo) as usize;
            for (g, &x) in p.gens(m).iter().enumerate() {
                let dy = y.diff_component(m, x);
                let mut block = RatMatrix::zeros(dy.rows(), ncoords);
                let (off, len) = offsets[k][g];
                block.add_block(0, off, &dy);
                for (g2, path, c) in p.expand_dgen(m, g) {
                    let (off2, _) = offsets[k + 1][g2];
                    let yp = paths.get(m + 1, path).scale(&c);
                    block.add_block(0, off2, &-&yp);
                }
                debug_assert_eq!(len, dy.cols());
                rows.extend(block.to_rows());
            }
        }
        let cst = RatMatrix::from_rows(rows, ncoords);
        let z = kernel_basis(&cst);

        // Null-homotopic maps d_Y h + h d for h: P^m → Y^{m−1}.
        let mut hcols: Vec<Vec<Rat>> = Vec::new();
        for m in p.degrees() {
            let ty = y.term(m - 1);
            for (g, &x) in p.gens(m).iter().enumerate() {
                for j in 0..ty.dim(x) {
                    let mut col = vec![Rat::zero(); ncoords];
                    let mut unit = vec![Rat::zero(); ty.dim(x)];
                    unit[j] = Rat::one();
                    let (off, _) = offsets[(m - lo) as usize][g];
                    let dh = y.diff_component(m - 1, x).mul_vec(&unit);
                    for (i, v) in dh.into_iter().enumerate() {
                        col[off + i] += &v;
                    }
                    // Generators g0 of degree m − 1 whose differential involves g.
                    if m > lo {
                        let k0 = (m - 1 - lo) as usize;
                        for (g0, &(off0, _)) in offsets[k0].iter().enumerate() {
                            for (g2, path, c) in p.expand_dgen(m - 1, g0) {
                                if g2 != g {
                                    continue;
                                }
                                let v = paths.get(m - 1, path).mul_vec(&unit);
                                for (i, val) in v.into_iter().enumerate() {
                                    col[off0 + i] += &(&c * &val);
                                }
                            }
                        }
                    }
                    hcols.push(col);
                }
            }
        }
        let b = image_basis(&RatMatrix::from_columns(ncoords, &hcols));
        let joint = b.basis().hstack(z.basis());
        let (_, piv) = joint.rref();
        let bdim = b.dim();
        let reps: Vec<Vec<Rat>> = piv
            .iter()
            .filter(|&&c| c >= bdim)
            .map(|&c| joint.column(c))
            .collect();
        let full = b
            .basis()
            .hstack(&RatMatrix::from_columns(ncoords, &reps));
        let reader = left_inverse(&full).expect("independent columns");
        HomSpace {
            lo,
            offsets,
            ncoords,
            reps,
            bdim,
            reader,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ncoords(&self) -> usize {
        self.ncoords
    }

    pub fn flatten(&self, f: &GenImages) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.ncoords];
        for (k, gs) in self.offsets.iter().enumerate() {
            let m = self.lo + k as i32;
            for (g, &(off, len)) in gs.iter().enumerate() {
                let img = &f.get(m)[g];
                debug_assert_eq!(img.len(), len);
                v[off..off + len].clone_from_slice(img);
            }
        }
        v
    }

    pub fn unflatten(&self, v: &[Rat]) -> GenImages {
        GenImages {
            lo: self.lo,
            images: self
                .offsets
                .iter()
                .map(|gs| gs.iter().map(|&(o, l)| v[o..o + l].to_vec()).collect())
                .collect(),
        }
    }

    /// Coordinates of the class of a chain map in the basis [`HomSpace::basis`].
    pub fn class_coords(&self, f: &GenImages) -> Vec<Rat> {
        let v = self.flatten(f);
        let all = self.reader.mul_vec(&v);
        all[self.bdim..].to_vec()
    }

    pub fn is_null(&self, f: &GenImages) -> bool {
        self.class_coords(f).iter().all(Rat::is_zero)
    }

    /// Chain maps representing a basis of the homotopy classes.
    pub fn basis(&self) -> Vec<GenImages> {
        self.reps.iter().map(|r| self.unflatten(r)).collect()
    }

    pub fn combination(&self, coeffs: &[Rat]) -> GenImages {
        let mut v = vec![Rat::zero(); self.ncoords];
        for (c, r) in coeffs.iter().zip(&self.reps) {
            if c.is_zero() {
                continue;
            }
            for (a, b) in v.iter_mut().zip(r) {
                *a += &(c * b);
            }
        }
        self.unflatten(&v)
    }
}
