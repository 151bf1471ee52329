//! Exact symmetry groups of a schema.
//!
//! `Aut(S)` is the group of weight-preserving permutations commuting with `F`.
//! `N(S)` is the group of rotation assignments `η_v = e^{2πiθ_v}` with
//! `η_v^{d(v)} = η_{F(v)}`, kept as exact rational angles. `G(S)` is the
//! semidirect product, with `(ι₁, θ₁)·(ι₂, θ₂) = (ι₁∘ι₂, v ↦ θ₁(ι₂v) + θ₂(v))`,
//! which is composition of the maps `(v, z) ↦ (ι(v), η_v z)`.

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::MappingSchema;

pub type Angle = Ratio<i64>;

fn reduce(a: Angle) -> Angle {
    a - a.floor()
}

/// Angles `θ_v ∈ [0, 1)` indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RotationElement {
    pub angles: Vec<Angle>,
}

impl Serialize for RotationElement {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(self.angles.iter().map(|a| a.to_string()))
    }
}

impl RotationElement {
    pub fn identity(n: usize) -> Self {
        Self { angles: vec![Angle::zero(); n] }
    }

    /// Builds the element from one index per choice slot: for each cycle the
    /// base angle `j/(D − 1)`, then for each tree vertex `k` in
    /// `θ_v = (θ_{F(v)} + k)/d(v)`, all in processing order.
    pub fn from_choices(s: &MappingSchema, choices: &[usize]) -> Self {
        let mut angles = vec![Angle::zero(); s.len()];
        let mut it = choices.iter();
        for c in s.cycles() {
            let j = *it.next().expect("missing cycle choice");
            let mut theta = Angle::new(j as i64, c.degree as i64 - 1);
            for &v in &c.vertices {
                angles[v] = theta;
                theta = reduce(theta * s.degree(v) as i64);
            }
        }
        for &v in s.tree_vertices() {
            let k = *it.next().expect("missing tree choice");
            angles[v] = (angles[s.image(v)] + k as i64) / s.degree(v) as i64;
        }
        Self { angles }
    }

    /// Inverse of [`RotationElement::from_choices`].
    pub fn choices(&self, s: &MappingSchema) -> Vec<usize> {
        let mut out = Vec::with_capacity(s.cycles().len() + s.tree_vertices().len());
        for c in s.cycles() {
            let j = self.angles[c.vertices[0]] * (c.degree as i64 - 1);
            out.push(j.to_integer() as usize);
        }
        for &v in s.tree_vertices() {
            let k = self.angles[v] * s.degree(v) as i64 - self.angles[s.image(v)];
            out.push(k.to_integer() as usize);
        }
        out
    }

    /// `d(v)·θ_v ≡ θ_{F(v)} (mod 1)` at every vertex.
    pub fn is_valid(&self, s: &MappingSchema) -> bool {
        self.angles.len() == s.len()
            && (0..s.len()).all(|v| {
                let a = self.angles[v];
                a >= Angle::zero() && a < Angle::from_integer(1) && reduce(a * s.degree(v) as i64) == self.angles[s.image(v)]
            })
    }
}

/// An element `(ι, θ)` of `G(S)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SymmetryElement {
    pub automorphism: Vec<usize>,
    pub rotation: RotationElement,
}

impl SymmetryElement {
    pub fn identity(n: usize) -> Self {
        Self { automorphism: (0..n).collect(), rotation: RotationElement::identity(n) }
    }

    pub fn is_identity(&self) -> bool {
        self.automorphism.iter().enumerate().all(|(i, &j)| i == j) && self.rotation.angles.iter().all(|a| a.is_zero())
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.automorphism.len();
        let automorphism = (0..n).map(|v| self.automorphism[other.automorphism[v]]).collect();
        let angles = (0..n)
            .map(|v| reduce(self.rotation.angles[other.automorphism[v]] + other.rotation.angles[v]))
            .collect();
        Self { automorphism, rotation: RotationElement { angles } }
    }

    pub fn inverse(&self) -> Self {
        let n = self.automorphism.len();
        let mut inv = vec![0; n];
        for (v, &u) in self.automorphism.iter().enumerate() {
            inv[u] = v;
        }
        let angles = (0..n).map(|v| reduce(-self.rotation.angles[inv[v]])).collect();
        Self { automorphism: inv, rotation: RotationElement { angles } }
    }

    pub fn is_valid(&self, s: &MappingSchema) -> bool {
        is_automorphism(s, &self.automorphism) && self.rotation.is_valid(s)
    }
}

fn is_automorphism(s: &MappingSchema, iota: &[usize]) -> bool {
    let n = s.len();
    if iota.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &u in iota {
        if u >= n || std::mem::replace(&mut hit[u], true) {
            return false;
        }
    }
    (0..n).all(|v| s.weight(iota[v]) == s.weight(v) && iota[s.image(v)] == s.image(iota[v]))
}

/// All of `Aut(S)`, in lexicographic order of the image vectors (identity
/// first). Backtracking over vertices, pruning on weights and on
/// `ι(F(v)) = F(ι(v))` wherever both sides are assigned.
pub fn automorphism_group(s: &MappingSchema) -> Vec<Vec<usize>> {
    fn extend(s: &MappingSchema, iota: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let v = iota.len();
        let n = s.len();
        if v == n {
            out.push(iota.clone());
            return;
        }
        for u in 0..n {
            if used[u] || s.weight(u) != s.weight(v) {
                continue;
            }
            iota.push(u);
            let consistent = (0..=v).all(|x| {
                let fx = s.image(x);
                fx > v || iota[fx] == s.image(iota[x])
            });
            if consistent {
                used[u] = true;
                extend(s, iota, used, out);
                used[u] = false;
            }
            iota.pop();
        }
    }
    let mut out = Vec::new();
    extend(s, &mut Vec::with_capacity(s.len()), &mut vec![false; s.len()], &mut out);
    out
}

/// `|N(S)| = Π_cycles (D − 1) · Π_{non-periodic v} d(v)`.
pub fn rotation_group_order(s: &MappingSchema) -> u64 {
    let cyc: u64 = s.cycles().iter().map(|c| c.degree - 1).product();
    let tree: u64 = s.tree_vertices().iter().map(|&v| s.degree(v) as u64).product();
    cyc * tree
}

fn choice_radices(s: &MappingSchema) -> Vec<usize> {
    s.cycles()
        .iter()
        .map(|c| c.degree as usize - 1)
        .chain(s.tree_vertices().iter().map(|&v| s.degree(v)))
        .collect()
}

/// All of `N(S)`, ordered lexicographically by choice vector.
pub fn rotation_group(s: &MappingSchema) -> Vec<RotationElement> {
    let radices = choice_radices(s);
    let mut choices = vec![0usize; radices.len()];
    let mut out = Vec::new();
    loop {
        out.push(RotationElement::from_choices(s, &choices));
        let mut i = radices.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            choices[i] += 1;
            if choices[i] < radices[i] {
                break;
            }
            choices[i] = 0;
        }
    }
}

/// All of `G(S)`, automorphism-major.
pub fn symmetry_group(s: &MappingSchema) -> Vec<SymmetryElement> {
    let rot = rotation_group(s);
    automorphism_group(s)
        .into_iter()
        .flat_map(|iota| rot.iter().map(move |r| SymmetryElement { automorphism: iota.clone(), rotation: r.clone() }))
        .collect()
}

pub fn symmetry_group_order(s: &MappingSchema) -> u64 {
    automorphism_group(s).len() as u64 * rotation_group_order(s)
}
