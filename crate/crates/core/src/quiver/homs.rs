use super::{Rep, RepMap};
use crate::error::Result;
use crate::linalg::{image_basis, kernel_basis, quotient_with_section, Rat, RatMatrix};

/// Offsets of the row-major blocks `Hom_k(M_x, N_y)` for a list of vertex pairs.
fn offsets(m: &Rep, n: &Rep, pairs: impl Iterator<Item = (usize, usize)>) -> (Vec<usize>, usize) {
    let mut offs = Vec::new();
    let mut total = 0;
    for (x, y) in pairs {
        offs.push(total);
        total += n.dim(y) * m.dim(x);
    }
    (offs, total)
}

/// The linear map `(f_x)_x ↦ (f_v M_a − N_a f_u)_{a: u→v}`.
///
/// Its kernel is `Hom(M, N)` and its cokernel is `Ext¹(M, N)` (standard
/// resolution of `M`; path algebras are hereditary).
fn intertwiner_system(m: &Rep, n: &Rep) -> (RatMatrix, Vec<usize>) {
    let q = m.quiver();
    let (voff, vtot) = offsets(m, n, (0..q.vertex_count()).map(|x| (x, x)));
    let (aoff, atot) = offsets(m, n, q.arrows().iter().map(|a| (a.source, a.target)));
    let mut sys = RatMatrix::zeros(atot, vtot);
    for (ai, a) in q.arrows().iter().enumerate() {
        let (u, v) = (a.source, a.target);
        let (mu, mv, nu, nv) = (m.dim(u), m.dim(v), n.dim(u), n.dim(v));
        let ma = m.matrix(ai);
        let na = n.matrix(ai);
        // Row (r, c) of the block: entry (r, c) of f_v M_a − N_a f_u, with r < nv, c < mu.
        for r in 0..nv {
            for c in 0..mu {
                let row = aoff[ai] + r * mu + c;
                for k in 0..mv {
                    let x = &ma[(k, c)];
                    if !x.is_zero() {
                        let col = voff[v] + r * mv + k;
                        sys[(row, col)] += x;
                    }
                }
                for k in 0..nu {
                    let x = &na[(r, k)];
                    if !x.is_zero() {
                        let col = voff[u] + k * mu + c;
                        sys[(row, col)] -= x;
                    }
                }
            }
        }
    }
    (sys, voff)
}

fn unpack(m: &Rep, n: &Rep, voff: &[usize], v: &[Rat]) -> RepMap {
    let comps = (0..m.quiver().vertex_count())
        .map(|x| {
            let (r, c) = (n.dim(x), m.dim(x));
            RatMatrix::from_vec(r, c, v[voff[x]..voff[x] + r * c].to_vec())
        })
        .collect();
    RepMap::new_unchecked(m.clone(), n.clone(), comps)
}

/// A basis of `Hom(M, N)`.
pub fn hom_basis(m: &Rep, n: &Rep) -> Result<Vec<RepMap>> {
    m.check_same_quiver(n)?;
    let (sys, voff) = intertwiner_system(m, n);
    Ok(kernel_basis(&sys)
        .basis_vectors()
        .iter()
        .map(|v| unpack(m, n, &voff, v))
        .collect())
}

pub fn hom_dim(m: &Rep, n: &Rep) -> Result<usize> {
    m.check_same_quiver(n)?;
    let (sys, _) = intertwiner_system(m, n);
    Ok(sys.cols() - sys.rank())
}

/// `Ext¹(M, N)` as the cokernel of the intertwiner system.
///
/// `classes` are representatives in `⊕_{a: u→v} Hom_k(M_u, N_v)`: each one is
/// the arrow data of an extension `0 → N → E → M → 0`, `E_a = [[N_a, c_a], [0, M_a]]`.
#[derive(Clone, Debug)]
pub struct Ext1 {
    pub dim: usize,
    pub classes: Vec<Vec<Rat>>,
}

pub fn ext1(m: &Rep, n: &Rep) -> Result<Ext1> {
    m.check_same_quiver(n)?;
    let (sys, _) = intertwiner_system(m, n);
    let img = image_basis(&sys);
    let (_, section) = quotient_with_section(&img);
    Ok(Ext1 {
        dim: section.cols(),
        classes: section.columns(),
    })
}

/// `Σ_x m_x n_x − Σ_{a: u→v} m_u n_v`, computed from dimension vectors only.
pub fn euler_form(m: &[usize], n: &[usize], arrows: &[(usize, usize)]) -> i64 {
    let vertices: i64 = m.iter().zip(n).map(|(&a, &b)| (a * b) as i64).sum();
    let edges: i64 = arrows.iter().map(|&(u, v)| (m[u] * n[v]) as i64).sum();
    vertices - edges
}
