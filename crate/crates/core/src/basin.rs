//! Straightening a proper self-map of a finite union of disks onto `B(S)`.
//!
//! Each component `σ` carries `φ_σ = post ∘ β ∘ pre`, a proper map of its
//! disk onto the disk of `F(σ)`. On every cycle the return map has an
//! attracting interior fixed point; it is pushed forward around the cycle
//! and moved to 0, while one of the `D − 1` boundary fixed points of the
//! return map is moved to 1. A tree component is centered at the conformal
//! barycenter of its critical points and rooted at a preimage of its image's
//! root. Together with the relabelings by `Aut(S)` this gives `|G(S)|`
//! conjugacies.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::blaschke::{conformal_barycenter, BlaschkeProduct, Composite, MAX_SYMBOLIC_DEGREE};
use crate::disk::{angle, Complex, MobiusAutomorphism, ZERO};
use crate::error::{Error, Result};
use crate::model::ModelMap;
use crate::schema::{automorphism_group, MappingSchema};

/// Iteration budget when locating the attracting fixed point of a return map.
const MAX_ATTRACTION_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BasinComponent {
    pub label: String,
    pub image: usize,
    pub product: BlaschkeProduct,
    pub pre: MobiusAutomorphism,
    pub post: MobiusAutomorphism,
}

impl BasinComponent {
    /// `post ∘ product ∘ pre` as a single Blaschke product.
    pub fn map(&self) -> Result<BlaschkeProduct> {
        self.product.sandwich(&self.post, &self.pre)
    }

    pub fn apply(&self, z: Complex) -> Complex {
        self.post.apply(self.product.apply(self.pre.apply(z)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BasinRepr", into = "BasinRepr")]
pub struct BasinSystem {
    components: Vec<BasinComponent>,
}

#[derive(Serialize, Deserialize)]
struct ComponentRepr {
    label: String,
    image: String,
}

#[derive(Serialize, Deserialize)]
struct FactorRepr {
    #[serde(flatten)]
    product: BlaschkeProduct,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pre: Option<MobiusAutomorphism>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    post: Option<MobiusAutomorphism>,
}

#[derive(Serialize, Deserialize)]
struct BasinRepr {
    components: Vec<ComponentRepr>,
    factors: IndexMap<String, FactorRepr>,
}

impl TryFrom<BasinRepr> for BasinSystem {
    type Error = Error;
    fn try_from(mut r: BasinRepr) -> Result<Self> {
        let index = |l: &str| {
            r.components
                .iter()
                .position(|c| c.label == l)
                .ok_or_else(|| Error::Validation(format!("unknown component `{l}`")))
        };
        let images = r.components.iter().map(|c| index(&c.image)).collect::<Result<Vec<_>>>()?;
        let mut components = Vec::with_capacity(images.len());
        for (c, image) in r.components.iter().zip(images) {
            let f = r
                .factors
                .swap_remove(&c.label)
                .ok_or_else(|| Error::Validation(format!("no factor for component `{}`", c.label)))?;
            components.push(BasinComponent {
                label: c.label.clone(),
                image,
                product: f.product,
                pre: f.pre.unwrap_or_default(),
                post: f.post.unwrap_or_default(),
            });
        }
        if let Some(extra) = r.factors.keys().next() {
            return Err(Error::Validation(format!("factor for unknown component `{extra}`")));
        }
        BasinSystem::new(components)
    }
}

impl From<BasinSystem> for BasinRepr {
    fn from(b: BasinSystem) -> Self {
        let components = b
            .components
            .iter()
            .map(|c| ComponentRepr { label: c.label.clone(), image: b.components[c.image].label.clone() })
            .collect();
        let factors = b
            .components
            .into_iter()
            .map(|c| {
                let keep = |m: MobiusAutomorphism| (!m.is_identity(0.0)).then_some(m);
                (c.label, FactorRepr { product: c.product, pre: keep(c.pre), post: keep(c.post) })
            })
            .collect();
        BasinRepr { components, factors }
    }
}

impl BasinSystem {
    pub fn new(components: Vec<BasinComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Validation("a basin system needs at least one component".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for c in &components {
            if !seen.insert(c.label.as_str()) {
                return Err(Error::Validation(format!("duplicate component `{}`", c.label)));
            }
            if c.image >= components.len() {
                return Err(Error::Validation(format!("component `{}` has a dangling image", c.label)));
            }
        }
        Ok(Self { components })
    }

    /// `φ_v = A_{F(v)} ∘ β_v ∘ A_v⁻¹`: the member `m` seen in the disk
    /// coordinates `A_v`.
    pub fn from_model(m: &ModelMap, coordinates: &[MobiusAutomorphism]) -> Result<Self> {
        let s = m.schema();
        if coordinates.len() != s.len() {
            return Err(Error::Domain("one coordinate change per vertex required".into()));
        }
        let components = (0..s.len())
            .map(|v| BasinComponent {
                label: s.id(v).to_string(),
                image: s.image(v),
                product: m.factor(v).clone(),
                pre: coordinates[v].inverse(),
                post: coordinates[s.image(v)],
            })
            .collect();
        Self::new(components)
    }

    pub fn components(&self) -> &[BasinComponent] {
        &self.components
    }

    pub fn derive_schema(&self) -> Result<MappingSchema> {
        let mut weights = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let d = c.product.degree();
            if d < 2 {
                return Err(Error::Validation(format!("component `{}` has degree {d} < 2", c.label)));
            }
            weights.push(d as u32 - 1);
        }
        MappingSchema::new(
            self.components.iter().map(|c| c.label.clone()).collect(),
            weights,
            self.components.iter().map(|c| c.image).collect(),
        )
    }
}

/// One conjugacy onto `B(S)`: component `σ` is sent to vertex `vertex` by
/// `map`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartEntry {
    pub vertex: String,
    pub map: MobiusAutomorphism,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Straightening {
    pub model: ModelMap,
    pub conjugacy: IndexMap<String, ChartEntry>,
}

impl Straightening {
    /// Largest `|ψ_{F(σ)}(φ_σ(z)) − β_v(ψ_σ(z))|` over a few sample points per
    /// component.
    pub fn residual(&self, b: &BasinSystem) -> f64 {
        let s = self.model.schema();
        let probes = [ZERO, Complex::new(0.5, 0.1), Complex::new(-0.3, 0.6), Complex::new(0.1, -0.7), Complex::new(0.0, 1.0)];
        let mut worst: f64 = 0.0;
        for c in b.components() {
            let here = &self.conjugacy[&c.label];
            let there = &self.conjugacy[&b.components[c.image].label];
            let v = s.index_of(&here.vertex).expect("conjugacy targets schema vertices");
            for &z in &probes {
                let lhs = there.map.apply(c.apply(z));
                let rhs = self.model.factor(v).apply(here.map.apply(z));
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }
}

/// The attracting fixed point of a composite self-map of the disk.
pub fn interior_fixed_point(comp: &Composite) -> Result<Complex> {
    let mut z = ZERO;
    for _ in 0..MAX_ATTRACTION_STEPS {
        let next = comp.apply(z);
        let step = (next - z).norm();
        z = next;
        if step < 1e-8 || z.norm() > 1.0 - 1e-9 {
            break;
        }
    }
    if z.norm() < 1.0 - 1e-9 {
        for _ in 0..8 {
            let (w, dw) = comp.apply_with_derivative(z);
            let den = dw - Complex::new(1.0, 0.0);
            if den.norm() < 1e-12 {
                break;
            }
            let next = z - (w - z) / den;
            if !(next.norm() < 1.0) {
                break;
            }
            z = next;
        }
        let (w, dw) = comp.apply_with_derivative(z);
        if (w - z).norm() < 1e-12 && dw.norm() < 1.0 {
            return Ok(z);
        }
    }
    if comp.degree() <= MAX_SYMBOLIC_DEGREE {
        return comp.to_product()?.fixed_points()?.interior.ok_or(Error::NoInteriorFixedPoint);
    }
    Err(Error::NoInteriorFixedPoint)
}

fn by_angle(mut pts: Vec<Complex>) -> Vec<Complex> {
    pts.sort_by(|a, b| angle(*a).total_cmp(&angle(*b)));
    pts
}

/// All `|G(S)|` conjugacies of `b` onto members of `B(S)`, `S` the derived
/// schema. Ordered by automorphism of `S`, then by the boundary choices:
/// cycles in schema order with fixed points by argument in `[0, 2π)`, then
/// tree components in processing order with preimages by argument.
pub fn straighten(b: &BasinSystem) -> Result<Vec<Straightening>> {
    let s = b.derive_schema()?;
    let n = s.len();
    let phi = b.components.iter().map(|c| c.map()).collect::<Result<Vec<_>>>()?;

    let mut center = vec![ZERO; n];
    let mut cycle_roots: Vec<Vec<Complex>> = Vec::new();
    for c in s.cycles() {
        let maps: Vec<&BlaschkeProduct> = c.vertices.iter().map(|&v| &phi[v]).collect();
        let comp = Composite::new(&maps);
        let mut p = interior_fixed_point(&comp)?;
        for &v in &c.vertices {
            center[v] = p;
            p = phi[v].apply(p);
        }
        let roots = by_angle(comp.boundary_fixed_points()?);
        if roots.len() as u64 != c.degree - 1 {
            return Err(Error::Numerical(format!("expected {} boundary fixed points, found {}", c.degree - 1, roots.len())));
        }
        cycle_roots.push(roots);
    }
    for &v in s.tree_vertices() {
        center[v] = conformal_barycenter(&phi[v].critical_points()?)?.point;
    }

    let radices: Vec<usize> = s
        .cycles()
        .iter()
        .map(|c| c.degree as usize - 1)
        .chain(s.tree_vertices().iter().map(|&v| s.degree(v)))
        .collect();
    let mut normalized: Vec<(Vec<BlaschkeProduct>, Vec<MobiusAutomorphism>)> = Vec::new();
    let mut choice = vec![0usize; radices.len()];
    'outer: loop {
        let mut root = vec![ZERO; n];
        for (ci, c) in s.cycles().iter().enumerate() {
            let mut z = cycle_roots[ci][choice[ci]];
            for &v in &c.vertices {
                root[v] = z;
                z = crate::disk::project_to_circle(phi[v].apply(z));
            }
        }
        let nc = s.cycles().len();
        for (ti, &v) in s.tree_vertices().iter().enumerate() {
            root[v] = by_angle(phi[v].preimages(root[s.image(v)])?)[choice[nc + ti]];
        }
        let psi = (0..n).map(|v| MobiusAutomorphism::from_specs(center[v], root[v])).collect::<Result<Vec<_>>>()?;
        let factors = (0..n)
            .map(|v| {
                let c = &b.components[v];
                let post = psi[s.image(v)].compose(&c.post)?;
                let pre = c.pre.compose(&psi[v].inverse())?;
                c.product.sandwich(&post, &pre)
            })
            .collect::<Result<Vec<_>>>()?;
        normalized.push((factors, psi));

        let mut i = radices.len();
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < radices[i] {
                break;
            }
            choice[i] = 0;
        }
    }

    let mut out = Vec::with_capacity(normalized.len());
    for iota in automorphism_group(&s) {
        let mut inv = vec![0; n];
        for (v, &u) in iota.iter().enumerate() {
            inv[u] = v;
        }
        for (factors, psi) in &normalized {
            let model = ModelMap::new(s.clone(), iota.iter().map(|&u| factors[u].clone()).collect())?;
            let conjugacy = (0..n)
                .map(|sigma| {
                    (b.components[sigma].label.clone(), ChartEntry { vertex: s.id(inv[sigma]).to_string(), map: psi[sigma] })
                })
                .collect();
            out.push(Straightening { model, conjugacy });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::ONE;
    use crate::model::{conjugacy_equivalent, random_member};
    use crate::random::{automorphism, seeded};
    use crate::schema::{enumerate_schemata, symmetry_group_order};

    fn single(label: &str, product: BlaschkeProduct) -> BasinSystem {
        BasinSystem::new(vec![BasinComponent {
            label: label.into(),
            image: 0,
            product,
            pre: MobiusAutomorphism::identity(),
            post: MobiusAutomorphism::identity(),
        }])
        .unwrap()
    }

    #[test]
    fn derive_schema_examples() {
        let s = single("a", BlaschkeProduct::power(2)).derive_schema().unwrap();
        assert_eq!((s.len(), s.weight(0), s.image(0)), (1, 1, 0));
        let comp = |label: &str, image, d| BasinComponent {
            label: label.into(),
            image,
            product: BlaschkeProduct::power(d),
            pre: MobiusAutomorphism::identity(),
            post: MobiusAutomorphism::identity(),
        };
        let swap = BasinSystem::new(vec![comp("a", 1, 2), comp("b", 0, 2)]).unwrap().derive_schema().unwrap();
        assert_eq!(swap.cycles()[0].degree, 4);
        let tail = BasinSystem::new(vec![comp("a", 1, 2), comp("b", 1, 3)]).unwrap().derive_schema().unwrap();
        assert_eq!(tail.weights(), &[1, 2]);
        assert_eq!(tail.tree_vertices(), &[0]);
        let bad = BasinSystem::new(vec![comp("a", 0, 1)]).unwrap();
        assert!(matches!(bad.derive_schema(), Err(Error::Validation(_))));
    }

    #[test]
    fn square_map_straightens_to_itself() {
        let b = single("a", BlaschkeProduct::power(2));
        let out = straighten(&b).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].model.factor(0), &BlaschkeProduct::power(2));
        assert!(out[0].conjugacy["a"].map.is_identity(1e-12));
    }

    #[test]
    fn minus_square() {
        let b = single("a", BlaschkeProduct::new(-ONE, vec![ZERO, ZERO]).unwrap());
        let out = straighten(&b).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].model.factor(0).distance(&BlaschkeProduct::power(2)) < 1e-12);
        let h = out[0].conjugacy["a"].map;
        assert!((h.eval(Complex::new(0.3, 0.2)).unwrap() + Complex::new(0.3, 0.2)).norm() < 1e-12);
    }

    #[test]
    fn attracting_hypothesis_checked() {
        let a = Complex::new(-0.5, 0.0);
        let b = single("a", BlaschkeProduct::new(ONE, vec![a, a]).unwrap());
        assert_eq!(straighten(&b).unwrap_err(), Error::NoInteriorFixedPoint);
    }

    #[test]
    fn scrambled_members_round_trip() {
        let mut rng = seeded(21);
        for s in enumerate_schemata(3).unwrap() {
            let m = random_member(&s, &mut rng).unwrap();
            let coords: Vec<_> = (0..s.len()).map(|_| automorphism(&mut rng, 0.7)).collect();
            let b = BasinSystem::from_model(&m, &coords).unwrap();
            let out = straighten(&b).unwrap();
            assert_eq!(out.len() as u64, symmetry_group_order(&s));
            for st in &out {
                st.model.validate_membership().unwrap();
                assert!(st.residual(&b) < 1e-9);
                assert!(conjugacy_equivalent(&m, &st.model, 1e-9).unwrap().is_some());
            }
        }
    }

    #[test]
    fn normalized_input_includes_identity() {
        let s = MappingSchema::from_images(vec![1, 1, 1], vec![1, 2, 2]).unwrap();
        let m = random_member(&s, &mut seeded(4)).unwrap();
        let b = BasinSystem::from_model(&m, &vec![MobiusAutomorphism::identity(); 3]).unwrap();
        let out = straighten(&b).unwrap();
        assert!(out[0].model.distance(&m) < 1e-9);
        assert!(out[0].conjugacy.values().all(|e| e.map.is_identity(1e-9)));
    }

    #[test]
    fn json_round_trip() {
        let s = MappingSchema::from_images(vec![1, 1], vec![1, 0]).unwrap();
        let m = random_member(&s, &mut seeded(8)).unwrap();
        let coords: Vec<_> = (0..2).map(|i| automorphism(&mut seeded(i), 0.5)).collect();
        let b = BasinSystem::from_model(&m, &coords).unwrap();
        let text = serde_json::to_string(&b).unwrap();
        assert!(text.contains(r#""components":[{"label":"v0","image":"v1"}"#) && text.contains(r#""pre":{"a":"#));
        assert_eq!(serde_json::from_str::<BasinSystem>(&text).unwrap(), b);
        let plain = r#"{"components":[{"label":"a","image":"a"}],"factors":{"a":{"c":[1,0],"zeros":[[0,0],[0,0]]}}}"#;
        let b: BasinSystem = serde_json::from_str(plain).unwrap();
        assert!(b.components()[0].pre.is_identity(0.0));
    }
}
