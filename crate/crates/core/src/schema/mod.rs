//! Reduced mapping schemata `S = (|S|, F, w)` and their symmetry groups.

mod enumerate;
mod groups;

pub use enumerate::{canonical_form, enumerate_schemata, is_isomorphic, MAX_ENUMERATION_WEIGHT};
pub use groups::{
    automorphism_group, rotation_group, rotation_group_order, symmetry_group, symmetry_group_order, Angle,
    RotationElement, SymmetryElement,
};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A periodic cycle of a schema, listed from its smallest vertex index along
/// `F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    /// `D = Π d(v)` over the cycle, the degree of the return map.
    pub degree: u64,
}

/// A mapping schema with vertices stored by index.
///
/// The processing order lists cycle vertices first (cycles by smallest
/// index, each traversed along `F`), then tree vertices by increasing depth
/// and index, so `F(v)` always precedes a tree vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemaRepr", into = "SchemaRepr")]
pub struct MappingSchema {
    ids: Vec<String>,
    weights: Vec<u32>,
    images: Vec<usize>,
    cycles: Vec<Cycle>,
    cycle_of: Vec<Option<usize>>,
    depth: Vec<usize>,
    order: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct VertexRepr {
    id: String,
    weight: u32,
    image: String,
}

#[derive(Serialize, Deserialize)]
struct SchemaRepr {
    vertices: Vec<VertexRepr>,
}

impl TryFrom<SchemaRepr> for MappingSchema {
    type Error = Error;
    fn try_from(r: SchemaRepr) -> Result<Self> {
        let index: HashMap<&str, usize> = r.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        if index.len() != r.vertices.len() {
            return Err(Error::Validation("duplicate vertex id".into()));
        }
        let images = r
            .vertices
            .iter()
            .map(|v| {
                index
                    .get(v.image.as_str())
                    .copied()
                    .ok_or_else(|| Error::Validation(format!("vertex `{}` maps to unknown vertex `{}`", v.id, v.image)))
            })
            .collect::<Result<Vec<_>>>()?;
        let ids = r.vertices.iter().map(|v| v.id.clone()).collect();
        let weights = r.vertices.iter().map(|v| v.weight).collect();
        MappingSchema::new(ids, weights, images)
    }
}

impl From<MappingSchema> for SchemaRepr {
    fn from(s: MappingSchema) -> Self {
        let vertices = (0..s.len())
            .map(|v| VertexRepr { id: s.ids[v].clone(), weight: s.weights[v], image: s.ids[s.images[v]].clone() })
            .collect();
        SchemaRepr { vertices }
    }
}

impl MappingSchema {
    pub fn new(ids: Vec<String>, weights: Vec<u32>, images: Vec<usize>) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::Validation("a schema needs at least one vertex".into()));
        }
        if weights.len() != n || images.len() != n {
            return Err(Error::Validation("ids, weights and images differ in length".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::Validation(format!("duplicate vertex id `{id}`")));
            }
        }
        for v in 0..n {
            if weights[v] < 1 {
                return Err(Error::Validation(format!("vertex `{}` has weight 0; schemata must be reduced", ids[v])));
            }
            if images[v] >= n {
                return Err(Error::Validation(format!("vertex `{}` has a dangling image", ids[v])));
            }
        }

        // periodic vertices: v with F^k(v) = v for some k ≤ n
        let mut cycle_of = vec![None; n];
        let mut cycles: Vec<Cycle> = Vec::new();
        for v in 0..n {
            if cycle_of[v].is_some() {
                continue;
            }
            let mut u = images[v];
            for _ in 0..n {
                if u == v {
                    break;
                }
                u = images[u];
            }
            if u != v {
                continue;
            }
            let mut verts = vec![v];
            let mut u = images[v];
            while u != v {
                verts.push(u);
                u = images[u];
            }
            let degree = verts.iter().map(|&x| weights[x] as u64 + 1).product();
            for &x in &verts {
                cycle_of[x] = Some(cycles.len());
            }
            cycles.push(Cycle { vertices: verts, degree });
        }

        let mut depth = vec![usize::MAX; n];
        for c in &cycles {
            for &v in &c.vertices {
                depth[v] = 0;
            }
        }
        fn depth_of(v: usize, images: &[usize], depth: &mut [usize]) -> usize {
            if depth[v] == usize::MAX {
                depth[v] = depth_of(images[v], images, depth) + 1;
            }
            depth[v]
        }
        for v in 0..n {
            depth_of(v, &images, &mut depth);
        }

        let mut order: Vec<usize> = cycles.iter().flat_map(|c| c.vertices.iter().copied()).collect();
        let mut tree: Vec<usize> = (0..n).filter(|&v| depth[v] > 0).collect();
        tree.sort_by_key(|&v| (depth[v], v));
        order.extend(tree);

        Ok(Self { ids, weights, images, cycles, cycle_of, depth, order })
    }

    /// Schema with ids `v0, v1, …`.
    pub fn from_images(weights: Vec<u32>, images: Vec<usize>) -> Result<Self> {
        let ids = (0..weights.len()).map(|i| format!("v{i}")).collect();
        Self::new(ids, weights, images)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// `d(v) = w(v) + 1`.
    pub fn degree(&self, v: usize) -> usize {
        self.weights[v] as usize + 1
    }

    pub fn image(&self, v: usize) -> usize {
        self.images[v]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn total_weight(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn cycle_of(&self, v: usize) -> Option<usize> {
        self.cycle_of[v]
    }

    pub fn is_periodic(&self, v: usize) -> bool {
        self.cycle_of[v].is_some()
    }

    /// Number of steps to reach a cycle; 0 on cycles.
    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn processing_order(&self) -> &[usize] {
        &self.order
    }

    /// Non-periodic vertices in processing order.
    pub fn tree_vertices(&self) -> &[usize] {
        let periodic: usize = self.cycles.iter().map(|c| c.vertices.len()).sum();
        &self.order[periodic..]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_fixed_vertex() {
        let s = MappingSchema::from_images(vec![1], vec![0]).unwrap();
        assert_eq!(s.cycles(), &[Cycle { vertices: vec![0], degree: 2 }]);
        assert!(s.tree_vertices().is_empty());
    }

    #[test]
    fn two_cycle() {
        let s = MappingSchema::from_images(vec![1, 1], vec![1, 0]).unwrap();
        assert_eq!(s.cycles(), &[Cycle { vertices: vec![0, 1], degree: 4 }]);
    }

    #[test]
    fn tail() {
        let s = MappingSchema::from_images(vec![1, 2], vec![1, 1]).unwrap();
        assert_eq!(s.cycles(), &[Cycle { vertices: vec![1], degree: 3 }]);
        assert_eq!(s.tree_vertices(), &[0]);
        assert_eq!(s.depth(0), 1);
        assert_eq!(s.total_weight(), 3);
    }

    #[test]
    fn processing_order_puts_images_first() {
        // v3 → v0 → v2 ⟲ , v1 → v2, v4 → v3
        let s = MappingSchema::from_images(vec![1; 5], vec![2, 2, 2, 0, 3]).unwrap();
        assert_eq!(s.processing_order(), &[2, 0, 1, 3, 4]);
        let pos = |v: usize| s.processing_order().iter().position(|&x| x == v).unwrap();
        for v in s.tree_vertices() {
            assert!(pos(s.image(*v)) < pos(*v));
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(MappingSchema::from_images(vec![0], vec![0]), Err(Error::Validation(_))));
        assert!(matches!(MappingSchema::from_images(vec![1], vec![3]), Err(Error::Validation(_))));
        let dangling = r#"{"vertices":[{"id":"a","weight":1,"image":"b"}]}"#;
        assert!(serde_json::from_str::<MappingSchema>(dangling).is_err());
        let dup = r#"{"vertices":[{"id":"a","weight":1,"image":"a"},{"id":"a","weight":1,"image":"a"}]}"#;
        assert!(serde_json::from_str::<MappingSchema>(dup).is_err());
    }

    #[test]
    fn json_shape() {
        let s = serde_json::from_str::<MappingSchema>(
            r#"{"vertices":[{"id":"x","weight":1,"image":"y"},{"id":"y","weight":2,"image":"y"}]}"#,
        )
        .unwrap();
        assert_eq!(s.cycles()[0].degree, 3);
        let back = serde_json::to_string(&s).unwrap();
        assert_eq!(back, r#"{"vertices":[{"id":"x","weight":1,"image":"y"},{"id":"y","weight":2,"image":"y"}]}"#);
    }
}
