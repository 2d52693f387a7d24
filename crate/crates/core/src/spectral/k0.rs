use serde::Serialize;

use crate::derived::{Complex, Triangle};

/// Class in `K_0`, in the basis of simples `[S_v]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct K0Class(pub Vec<i64>);

impl K0Class {
    pub fn zero(n: usize) -> Self {
        K0Class(vec![0; n])
    }

    pub fn add(&self, other: &K0Class) -> K0Class {
        K0Class(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> K0Class {
        K0Class(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

/// `Σ_j (−1)^j [H^j X]`, each cohomology counted by its composition factors.
pub fn k0_class(x: &Complex) -> K0Class {
    let mut out = K0Class::zero(x.quiver().vertex_count());
    let Some((lo, hi)) = x.cohomology_range() else {
        return out;
    };
    for j in lo..=hi {
        let sign = if j.rem_euclid(2) == 0 { 1 } else { -1 };
        for (c, d) in out.0.iter_mut().zip(x.cohomology_dims(j)) {
            *c += sign * d as i64;
        }
    }
    out
}

/// `[B] = [A] + [C]`.
pub fn k0_check_triangle(t: &Triangle) -> bool {
    k0_class(t.b.complex()) == k0_class(t.a.complex()).add(&k0_class(t.c.complex()))
}
