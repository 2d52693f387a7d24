use std::collections::BTreeMap;

use serde::Serialize;

use super::couple::{Couple, Spot};
use super::tower::Tower;
use super::HomFunctor;
use crate::linalg::{kernel_basis, solve, RatMatrix, Subspace};

/// One spot of a page; `(p, q) = (−k, n + k)` in the `E_1^{pq} = H_q(X^p)` indexing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageEntry {
    pub p: i32,
    pub q: i32,
    pub k: i32,
    pub n: i32,
    /// Per vertex for `THomology`, a single total otherwise.
    pub dims: Vec<usize>,
    /// Rank of `d_r` leaving this spot.
    pub d_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Page {
    pub r: usize,
    pub entries: Vec<PageEntry>,
}

/// The weight spectral sequence of one object and one homological functor.
#[derive(Clone, Debug, Serialize)]
pub struct SpecSeq {
    pub functor: HomFunctor,
    pub levels: (i32, i32),
    pub degrees: (i32, i32),
    pub pages: Vec<Page>,
    /// First page after which every differential vanishes.
    pub stable_page: usize,
    pub degenerates_at_e2: bool,
    /// Pages from derived couples agree with `Z_r = κ^{-1}(im i^{r−1})`, `B_r = j(ker i^{r−1})`.
    pub oracle_agrees: bool,
    /// `Σ_p dim E_∞^{p, m−p} = dim H_m(X)`.
    pub converges: bool,
    /// `E_∞` is the graded object of the image filtration on `H(X)`.
    pub e_inf_matches_filtration: bool,
    /// `filtration[n][k − lo + 1][v]`: `Im(H^n(L_k) → H^n X)` at `v`, for `k = lo − 1..=hi`.
    #[serde(skip)]
    pub filtration: BTreeMap<i32, Vec<Vec<Subspace>>>,
}

impl SpecSeq {
    pub fn e_infinity(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    pub fn page(&self, r: usize) -> Option<&Page> {
        self.pages.iter().find(|p| p.r == r)
    }

    /// `W_k H^n` at every vertex.
    pub fn filtration_step(&self, n: i32, k: i32) -> Option<&[Subspace]> {
        let lo = self.levels.0;
        let steps = self.filtration.get(&n)?;
        let idx = (k - lo + 1).clamp(0, steps.len() as i32 - 1) as usize;
        Some(&steps[idx])
    }
}

/// Basis columns of `Z` completing one of `B ⊂ Z`.
fn representatives(z: &Subspace, b: &Subspace) -> RatMatrix {
    let joint = b.basis().hstack(z.basis());
    let (_, piv) = joint.rref();
    let cols: Vec<_> = piv
        .iter()
        .filter(|&&c| c >= b.dim())
        .map(|&c| joint.column(c))
        .collect();
    RatMatrix::from_columns(z.ambient_dim(), &cols)
}

struct Sub {
    z: Subspace,
    b: Subspace,
    reps: RatMatrix,
}

impl Sub {
    fn new(z: Subspace, b: Subspace) -> Self {
        let reps = representatives(&z, &b);
        Sub { z, b, reps }
    }

    fn dim(&self) -> usize {
        self.reps.cols()
    }

    fn class(&self, v: &[crate::linalg::Rat]) -> Vec<crate::linalg::Rat> {
        let m = self.b.basis().hstack(&self.reps);
        let c = solve(&m, v)
            .expect("shapes agree")
            .expect("vector lies in Z");
        c[self.b.dim()..].to_vec()
    }
}

/// Pages `E_1 … E_R` at one vertex, with the ranks of `d_1 … d_{R−1}`.
struct VertexRun {
    subs: Vec<BTreeMap<Spot, Sub>>,
    ranks: Vec<BTreeMap<Spot, usize>>,
    oracle_ok: bool,
}

fn spots(c: &Couple) -> Vec<Spot> {
    let mut out = Vec::new();
    for k in c.lo..=c.hi {
        for n in c.nlo..=c.nhi {
            out.push((k, n));
        }
    }
    out
}

fn run_vertex(c: &Couple, last: usize) -> VertexRun {
    let all = spots(c);
    let mut cur: BTreeMap<Spot, Sub> = all
        .iter()
        .map(|&(k, n)| {
            let e = c.e(k, n);
            ((k, n), Sub::new(Subspace::full(e), Subspace::zero(e)))
        })
        .collect();
    let mut subs = Vec::new();
    let mut ranks = Vec::new();
    let mut oracle_ok = true;
    for r in 1..=last {
        let ri = r as i32;
        oracle_ok &= all.iter().all(|&(k, n)| {
            let s = &cur[&(k, n)];
            let (zo, bo) = oracle(c, ri, k, n);
            zo == s.z && bo == s.b
        });
        if r == last {
            subs.push(cur);
            break;
        }
        // d_r: E_r(k, n) → E_r(k − r, n + 1) through the derived couple.
        let mut d: BTreeMap<Spot, RatMatrix> = BTreeMap::new();
        for &(k, n) in &all {
            let src = &cur[&(k, n)];
            let tgt = cur.get(&(k - ri, n + 1));
            let rows = tgt.map_or(0, Sub::dim);
            let mut cols = Vec::new();
            for z in src.reps.columns() {
                let Some(tgt) = tgt else { break };
                let a = c.kappa_at(k, n).mul_vec(&z);
                let ipow = c.i_pow(k - ri, ri - 1, n + 1);
                let y = solve(&ipow, &a)
                    .expect("shapes agree")
                    .expect("κ of a cycle lifts along i^{r−1}");
                let b = c.j_at(k - ri, n + 1).mul_vec(&y);
                cols.push(tgt.class(&b));
            }
            let m = if tgt.is_some() {
                RatMatrix::from_columns(rows, &cols)
            } else {
                RatMatrix::zeros(0, src.dim())
            };
            d.insert((k, n), m);
        }
        let mut next = BTreeMap::new();
        for &(k, n) in &all {
            let s = &cur[&(k, n)];
            let out = &d[&(k, n)];
            let ker = kernel_basis(out);
            let z = s.b.sum(&ker.map(&s.reps));
            let b = match d.get(&(k + ri, n - 1)) {
                Some(inc) => s.b.sum(&Subspace::span(inc).map(&s.reps)),
                None => s.b.clone(),
            };
            next.insert((k, n), Sub::new(z, b));
        }
        ranks.push(d.iter().map(|(s, m)| (*s, m.rank())).collect());
        subs.push(std::mem::replace(&mut cur, next));
    }
    VertexRun {
        subs,
        ranks,
        oracle_ok,
    }
}

/// `Z_r = κ^{-1}(im i^{r−1})`, `B_r = j(ker i^{r−1})` directly from the couple.
fn oracle(c: &Couple, r: i32, k: i32, n: i32) -> (Subspace, Subspace) {
    let up = c.i_pow(k - r, r - 1, n + 1);
    let z = Subspace::preimage(&c.kappa_at(k, n), &Subspace::span(&up));
    let down = c.i_pow(k, r - 1, n);
    let b = kernel_basis(&down).map(&c.j_at(k, n));
    (z, b)
}

pub(crate) fn run_couples(functor: HomFunctor, tower: &Tower, couples: &[Couple]) -> SpecSeq {
    let c0 = &couples[0];
    let (lo, hi, nlo, nhi) = (c0.lo, c0.hi, c0.nlo, c0.nhi);
    let length = if tower.is_empty() { 0 } else { (hi - lo) as usize };
    let last = length.max(1) + 1;
    let vertices: Vec<usize> = match functor {
        HomFunctor::DimAtVertex(v) => vec![v],
        _ => (0..couples.len()).collect(),
    };
    let runs: Vec<VertexRun> = couples.iter().map(|c| run_vertex(c, last)).collect();

    let pages = (0..last)
        .map(|ri| {
            let entries = spots(c0)
                .into_iter()
                .map(|(k, n)| {
                    let per: Vec<usize> = vertices
                        .iter()
                        .map(|&v| runs[v].subs[ri][&(k, n)].dim())
                        .collect();
                    let d_rank = vertices
                        .iter()
                        .map(|&v| runs[v].ranks.get(ri).map_or(0, |m| m[&(k, n)]))
                        .sum();
                    PageEntry {
                        p: -k,
                        q: n + k,
                        k,
                        n,
                        dims: functor.values(&per),
                        d_rank,
                    }
                })
                .collect();
            Page { r: ri + 1, entries }
        })
        .collect::<Vec<_>>();

    let rank_at = |ri: usize| -> usize {
        vertices
            .iter()
            .map(|&v| runs[v].ranks.get(ri).map_or(0, |m| m.values().sum::<usize>()))
            .sum()
    };
    let stable_page = (1..=last)
        .find(|&r| (r - 1..last).all(|ri| rank_at(ri) == 0))
        .unwrap_or(last);
    let degenerates_at_e2 = (1..last).all(|ri| rank_at(ri) == 0);
    let oracle_agrees = vertices.iter().all(|&v| runs[v].oracle_ok);

    // Image filtration on H^n(X) and its comparison with E_∞.
    let mut filtration = BTreeMap::new();
    let xrange = tower.object.complex().cohomology_range();
    let mut converges = true;
    let mut matches = true;
    for n in nlo..=nhi {
        let steps: Vec<Vec<Subspace>> = (lo - 1..=hi)
            .map(|k| {
                couples
                    .iter()
                    .map(|c| {
                        if tower.is_empty() {
                            return Subspace::zero(0);
                        }
                        let im = Subspace::span(&c.i_pow(k, hi - k, n));
                        im.map(&c.top[&n])
                    })
                    .collect()
            })
            .collect();
        for &v in &vertices {
            let c = &couples[v];
            let hdim = c.top.get(&n).map_or(0, RatMatrix::rows);
            let einf: Vec<usize> = (lo..=hi)
                .map(|k| runs[v].subs[last - 1][&(k, n)].dim())
                .collect();
            converges &= einf.iter().sum::<usize>() == hdim;
            for (idx, k) in (lo..=hi).enumerate() {
                let step = steps[(k - lo + 1) as usize][v].dim() - steps[(k - lo) as usize][v].dim();
                matches &= step == einf[idx];
            }
            matches &= steps.last().is_none_or(|s| s[v].dim() == hdim);
        }
        if xrange.is_some_and(|(a, b)| (a..=b).contains(&n)) {
            filtration.insert(n, steps);
        }
    }
    SpecSeq {
        functor,
        levels: (lo, hi),
        degrees: (nlo, nhi),
        pages,
        stable_page,
        degenerates_at_e2,
        oracle_agrees,
        converges,
        e_inf_matches_filtration: matches,
        filtration,
    }
}
