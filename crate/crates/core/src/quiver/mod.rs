//! Weighted acyclic quivers and their finite-dimensional representations.

mod filtration;
mod homs;
mod projective;
mod rep;

pub use filtration::{
    gr_module, is_semisimple_slice, split_idempotent_module, w_le_module, w_le_module_candidate,
    SliceWitness,
};
pub use homs::{euler_form, ext1, hom_basis, hom_dim, Ext1};
pub use projective::{projective, projective_cover, simple, FreeRep, ProjectiveCover};
pub use rep::{Rep, RepMap};

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub weight: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A path `source ⇝ target`; the empty arrow list is the lazy path at `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverReport {
    pub acyclic: bool,
    pub admissible: bool,
}

/// A finite acyclic quiver with an integer weight on every vertex.
///
/// Construction rejects cycles, duplicate ids and dangling arrows, and
/// enumerates all paths once; representations share the quiver via `Arc`.
#[derive(Clone)]
pub struct WeightedQuiver {
    vertices: Vec<Vertex>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
    topo: Vec<usize>,
    paths: Vec<Path>,
    between: Vec<Vec<Vec<usize>>>,
    extend: HashMap<(usize, usize), usize>,
}

impl PartialEq for WeightedQuiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for WeightedQuiver {}

impl fmt::Debug for WeightedQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedQuiver")
            .field("vertices", &self.vertices)
            .field("arrows", &self.arrows)
            .finish()
    }
}

fn check_ids<'a>(
    kind: &'static str,
    ids: impl Iterator<Item = &'a str>,
) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::new();
    for (i, id) in ids.enumerate() {
        if index.insert(id.to_string(), i).is_some() {
            return Err(Error::DuplicateId {
                kind,
                id: id.to_string(),
            });
        }
    }
    Ok(index)
}

fn resolve_arrows(
    vertex_index: &HashMap<String, usize>,
    arrows: &[(String, String, String)],
) -> Result<Vec<Arrow>> {
    arrows
        .iter()
        .map(|(id, s, t)| {
            let look = |v: &String| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::DanglingArrow {
                        arrow: id.clone(),
                        vertex: v.clone(),
                    })
            };
            Ok(Arrow {
                id: id.clone(),
                source: look(s)?,
                target: look(t)?,
            })
        })
        .collect()
}

/// Kahn's algorithm; `Err(v)` names a vertex left on a cycle.
fn topological_order(n: usize, arrows: &[Arrow]) -> std::result::Result<Vec<usize>, usize> {
    let mut indeg = vec![0usize; n];
    for a in arrows {
        indeg[a.target] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for a in arrows.iter().filter(|a| a.source == v) {
            indeg[a.target] -= 1;
            if indeg[a.target] == 0 {
                queue.push_back(a.target);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&v| indeg[v] > 0).expect("some vertex on a cycle");
        return Err(stuck);
    }
    Ok(order)
}

/// Checks a raw quiver description without constructing it.
pub fn validate_quiver(
    vertices: &[(String, i32)],
    arrows: &[(String, String, String)],
) -> Result<QuiverReport> {
    let vertex_index = check_ids("vertex", vertices.iter().map(|(id, _)| id.as_str()))?;
    check_ids("arrow", arrows.iter().map(|(id, _, _)| id.as_str()))?;
    let resolved = resolve_arrows(&vertex_index, arrows)?;
    let acyclic = topological_order(vertices.len(), &resolved).is_ok();
    let admissible = resolved
        .iter()
        .all(|a| vertices[a.target].1 < vertices[a.source].1);
    Ok(QuiverReport {
        acyclic,
        admissible,
    })
}

impl WeightedQuiver {
    pub fn new(vertices: Vec<(String, i32)>, arrows: Vec<(String, String, String)>) -> Result<Self> {
        let vertex_index = check_ids("vertex", vertices.iter().map(|(id, _)| id.as_str()))?;
        let arrow_index = check_ids("arrow", arrows.iter().map(|(id, _, _)| id.as_str()))?;
        let resolved = resolve_arrows(&vertex_index, &arrows)?;
        let topo = topological_order(vertices.len(), &resolved)
            .map_err(|v| Error::Cyclic(vertices[v].0.clone()))?;
        let vertices: Vec<Vertex> = vertices
            .into_iter()
            .map(|(id, weight)| Vertex { id, weight })
            .collect();
        let mut q = WeightedQuiver {
            vertices,
            arrows: resolved,
            vertex_index,
            arrow_index,
            topo,
            paths: Vec::new(),
            between: Vec::new(),
            extend: HashMap::new(),
        };
        q.enumerate_paths();
        Ok(q)
    }

    /// Convenience constructor from string slices.
    pub fn from_parts(vertices: &[(&str, i32)], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        Self::new(
            vertices.iter().map(|(v, w)| (v.to_string(), *w)).collect(),
            arrows
                .iter()
                .map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string()))
                .collect(),
        )
    }

    fn enumerate_paths(&mut self) {
        let n = self.vertices.len();
        self.between = vec![vec![Vec::new(); n]; n];
        for v in 0..n {
            let mut stack = vec![Path {
                source: v,
                target: v,
                arrows: Vec::new(),
            }];
            let mut local: Vec<Path> = Vec::new();
            while let Some(p) = stack.pop() {
                local.push(p.clone());
                for (ai, a) in self.arrows.iter().enumerate().rev() {
                    if a.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        stack.push(Path {
                            source: v,
                            target: a.target,
                            arrows,
                        });
                    }
                }
            }
            // Shorter paths first, ties by arrow sequence: a stable basis order.
            local.sort_by(|a, b| (a.arrows.len(), &a.arrows).cmp(&(b.arrows.len(), &b.arrows)));
            for p in local {
                let id = self.paths.len();
                self.between[p.source][p.target].push(id);
                self.paths.push(p);
            }
        }
        let mut by_arrows: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        for (id, p) in self.paths.iter().enumerate() {
            by_arrows.insert((p.source, p.arrows.clone()), id);
        }
        for (id, p) in self.paths.iter().enumerate() {
            for (ai, a) in self.arrows.iter().enumerate() {
                if a.source == p.target {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    self.extend.insert((id, ai), by_arrows[&(p.source, arrows)]);
                }
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn arrow(&self, id: &str) -> Result<usize> {
        self.arrow_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    pub fn weight(&self, v: usize) -> i32 {
        self.vertices[v].weight
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v].id
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn report(&self) -> QuiverReport {
        QuiverReport {
            acyclic: true,
            admissible: self.is_admissible(),
        }
    }

    /// Every arrow strictly decreases weight.
    pub fn is_admissible(&self) -> bool {
        self.arrows
            .iter()
            .all(|a| self.weight(a.target) < self.weight(a.source))
    }

    /// Every arrow weakly decreases weight, so vertex-support truncations are subrepresentations.
    pub fn is_weakly_decreasing(&self) -> bool {
        self.arrows
            .iter()
            .all(|a| self.weight(a.target) <= self.weight(a.source))
    }

    /// Sorted distinct vertex weights.
    pub fn weights(&self) -> Vec<i32> {
        let set: BTreeSet<i32> = self.vertices.iter().map(|v| v.weight).collect();
        set.into_iter().collect()
    }

    pub fn weight_range(&self) -> Option<(i32, i32)> {
        let w = self.weights();
        Some((*w.first()?, *w.last()?))
    }

    pub fn vertices_of_weight(&self, i: i32) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.weight(v) == i)
            .collect()
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == v)
    }

    pub fn path(&self, id: usize) -> &Path {
        &self.paths[id]
    }

    /// Path ids `v ⇝ w` in basis order.
    pub fn paths_between(&self, v: usize, w: usize) -> &[usize] {
        &self.between[v][w]
    }

    /// The path `p` followed by arrow `a`.
    pub fn extend_path(&self, p: usize, a: usize) -> usize {
        self.extend[&(p, a)]
    }

    /// Reverses every arrow and negates every weight.
    pub fn opposite(&self) -> WeightedQuiver {
        WeightedQuiver::new(
            self.vertices
                .iter()
                .map(|v| (v.id.clone(), -v.weight))
                .collect(),
            self.arrows
                .iter()
                .map(|a| {
                    (
                        a.id.clone(),
                        self.vertices[a.target].id.clone(),
                        self.vertices[a.source].id.clone(),
                    )
                })
                .collect(),
        )
        .expect("opposite of an acyclic quiver is acyclic")
    }

    pub fn into_arc(self) -> Arc<WeightedQuiver> {
        Arc::new(self)
    }
}

/// Two vertices `u` (weight 1) and `v` (weight 0) joined by one arrow `a: u → v`.
pub fn fixture_q1() -> Arc<WeightedQuiver> {
    WeightedQuiver::from_parts(&[("u", 1), ("v", 0)], &[("a", "u", "v")])
        .expect("fixture is valid")
        .into_arc()
}

/// The same shape as [`fixture_q1`] with both weights 0.
pub fn fixture_q0() -> Arc<WeightedQuiver> {
    WeightedQuiver::from_parts(&[("u", 0), ("v", 0)], &[("a", "u", "v")])
        .expect("fixture is valid")
        .into_arc()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(
        v: &[(&str, i32)],
        a: &[(&str, &str, &str)],
    ) -> (Vec<(String, i32)>, Vec<(String, String, String)>) {
        (
            v.iter().map(|(x, w)| (x.to_string(), *w)).collect(),
            a.iter()
                .map(|(x, s, t)| (x.to_string(), s.to_string(), t.to_string()))
                .collect(),
        )
    }

    #[test]
    fn validate_fixtures() {
        let (v, a) = raw(&[("u", 1), ("v", 0)], &[("a", "u", "v")]);
        assert_eq!(
            validate_quiver(&v, &a).unwrap(),
            QuiverReport {
                acyclic: true,
                admissible: true
            }
        );
        let (v, a) = raw(&[("u", 0), ("v", 0)], &[("a", "u", "v")]);
        assert_eq!(
            validate_quiver(&v, &a).unwrap(),
            QuiverReport {
                acyclic: true,
                admissible: false
            }
        );
        let (v, a) = raw(&[("x", 5)], &[]);
        assert_eq!(
            validate_quiver(&v, &a).unwrap(),
            QuiverReport {
                acyclic: true,
                admissible: true
            }
        );
    }

    #[test]
    fn validate_rejects_bad_ids() {
        let (v, a) = raw(&[("u", 1), ("u", 0)], &[]);
        assert!(matches!(
            validate_quiver(&v, &a),
            Err(Error::DuplicateId { kind: "vertex", .. })
        ));
        let (v, a) = raw(&[("u", 1)], &[("a", "u", "w")]);
        assert!(matches!(
            validate_quiver(&v, &a),
            Err(Error::DanglingArrow { .. })
        ));
    }

    #[test]
    fn cycles_are_reported_not_constructed() {
        let (v, a) = raw(&[("u", 1), ("v", 0)], &[("a", "u", "v"), ("b", "v", "u")]);
        assert!(!validate_quiver(&v, &a).unwrap().acyclic);
        assert!(matches!(WeightedQuiver::new(v, a), Err(Error::Cyclic(_))));
    }

    #[test]
    fn paths_are_enumerated() {
        let q = WeightedQuiver::from_parts(
            &[("x", 2), ("y", 1), ("z", 0)],
            &[("a", "x", "y"), ("b", "y", "z"), ("c", "x", "z")],
        )
        .unwrap();
        assert_eq!(q.paths_between(0, 2).len(), 2);
        assert_eq!(q.paths_between(0, 0).len(), 1);
        assert_eq!(q.paths_between(2, 0).len(), 0);
        let xy = q.paths_between(0, 1)[0];
        let xyz = q.extend_path(xy, 1);
        assert_eq!(q.path(xyz).arrows, vec![0, 1]);
    }

    #[test]
    fn opposite_negates_weights() {
        let q = fixture_q1();
        let op = q.opposite();
        assert_eq!(op.weight(0), -1);
        assert_eq!(op.arrows()[0].source, 1);
        assert!(op.is_admissible());
    }
}
