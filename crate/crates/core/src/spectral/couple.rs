use std::collections::BTreeMap;

use super::tower::Tower;
use crate::linalg::RatMatrix;

pub(crate) type Spot = (i32, i32);

/// The exact couple of a tower at one vertex, `D(k, n) = H^n(L_k)_v`, `E(k, n) = H^n(Gr_k)_v`:
/// `i: D(k−1, n) → D(k, n)`, `j: D(k, n) → E(k, n)`, `κ: E(k, n) → D(k−1, n+1)`.
#[derive(Clone, Debug)]
pub(crate) struct Couple {
    pub lo: i32,
    pub hi: i32,
    pub nlo: i32,
    pub nhi: i32,
    pub ddim: BTreeMap<Spot, usize>,
    pub edim: BTreeMap<Spot, usize>,
    pub i: BTreeMap<Spot, RatMatrix>,
    pub j: BTreeMap<Spot, RatMatrix>,
    pub kappa: BTreeMap<Spot, RatMatrix>,
    /// `H^n(L_hi)_v → H^n(X)_v`.
    pub top: BTreeMap<i32, RatMatrix>,
}

impl Couple {
    /// Couples at every vertex.
    pub fn of_tower(t: &Tower) -> Vec<Couple> {
        let nv = t.object.quiver().vertex_count();
        let objs = t
            .levels
            .iter()
            .chain(t.grades.iter().map(|g| &g.c))
            .chain(std::iter::once(&t.object));
        let (mut nlo, mut nhi) = (0, -1);
        for o in objs {
            if let Some((a, b)) = o.complex().cohomology_range() {
                if nlo > nhi {
                    (nlo, nhi) = (a, b);
                } else {
                    (nlo, nhi) = (nlo.min(a), nhi.max(b));
                }
            }
        }
        let mut out: Vec<Couple> = (0..nv)
            .map(|_| Couple {
                lo: t.lo,
                hi: t.hi(),
                nlo,
                nhi,
                ddim: BTreeMap::new(),
                edim: BTreeMap::new(),
                i: BTreeMap::new(),
                j: BTreeMap::new(),
                kappa: BTreeMap::new(),
                top: BTreeMap::new(),
            })
            .collect();
        if t.is_empty() || nlo > nhi {
            return out;
        }
        for k in t.lo..=t.hi() {
            let g = &t.grades[(k - t.lo) as usize];
            for n in nlo..=nhi {
                let hi_ = t.steps[(k - t.lo) as usize].cohomology(n);
                let hj = g.v.cohomology(n);
                let hw = g.w.cohomology(n);
                // H^n(L_{k−1}[1]) and H^{n+1}(L_{k−1}) are the same space in two bases.
                let ha1 = g.w.target().cohomology(n);
                let ha = g.a.cohomology(n + 1);
                let dl = t.level(k).cohomology(n);
                let el = g.c.cohomology(n);
                for (v, c) in out.iter_mut().enumerate() {
                    c.ddim.insert((k, n), dl.rep.dim(v));
                    c.edim.insert((k, n), el.rep.dim(v));
                    c.i.insert((k, n), hi_[v].clone());
                    c.j.insert((k, n), hj[v].clone());
                    let ident = &ha.class_map[v] * &ha1.section[v];
                    c.kappa.insert((k, n), &ident * &hw[v]);
                }
            }
        }
        let u = &t.to_x[t.levels.len() - 1];
        for n in nlo..=nhi {
            let h = u.cohomology(n);
            for (v, c) in out.iter_mut().enumerate() {
                c.top.insert(n, h[v].clone());
            }
        }
        out
    }

    pub fn d(&self, k: i32, n: i32) -> usize {
        if k < self.lo {
            return 0;
        }
        *self.ddim.get(&(k.min(self.hi), n)).unwrap_or(&0)
    }

    pub fn e(&self, k: i32, n: i32) -> usize {
        *self.edim.get(&(k, n)).unwrap_or(&0)
    }

    /// `i^m: D(a, n) → D(a + m, n)`, the identity beyond the top.
    pub fn i_pow(&self, a: i32, m: i32, n: i32) -> RatMatrix {
        let b = a + m;
        if a < self.lo {
            return RatMatrix::zeros(self.d(b, n), 0);
        }
        let mut out = RatMatrix::identity(self.d(a, n));
        for k in a + 1..=b.min(self.hi) {
            out = match self.i.get(&(k, n)) {
                Some(i) => i * &out,
                None => RatMatrix::zeros(self.d(k, n), out.cols()),
            };
        }
        out
    }

    pub fn j_at(&self, k: i32, n: i32) -> RatMatrix {
        self.j
            .get(&(k, n))
            .cloned()
            .unwrap_or_else(|| RatMatrix::zeros(self.e(k, n), self.d(k, n)))
    }

    pub fn kappa_at(&self, k: i32, n: i32) -> RatMatrix {
        self.kappa
            .get(&(k, n))
            .cloned()
            .unwrap_or_else(|| RatMatrix::zeros(self.d(k - 1, n + 1), self.e(k, n)))
    }
}
