//! The action of `G(S)` on `B(S)` by re-marking.
//!
//! A marking `(ι, q)` of `β` defines `h(v, z) = (ι(v), q(v) z)`, and
//! `h⁻¹ ∘ β ∘ h` is again in `B(S)`: its factor at `v` is
//! `z ↦ conj(q(F(v))) β_{ι(v)}(q(v) z)`. With markings labeled through the
//! boundary conjugacy, `g · β = h_{g⁻¹}⁻¹ ∘ β ∘ h_{g⁻¹}` is a left action.

use std::collections::HashMap;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::random::seeded;
use crate::schema::{symmetry_group, MappingSchema, SymmetryElement};

use super::{boundary_markings, marking_for, random_member, BoundaryMarking, ModelMap};

/// Conjugates `m` by the rotation-and-relabeling of a marking.
pub fn apply_marking(m: &ModelMap, mk: &BoundaryMarking) -> Result<ModelMap> {
    let s = m.schema();
    let factors = (0..s.len())
        .map(|v| {
            let f = m.factor(mk.automorphism[v]);
            let q = mk.points[v];
            let zeros = f.zeros().iter().map(|&a| q.conj() * a).collect();
            let c = mk.points[s.image(v)].conj() * f.apply(q);
            BlaschkeProduct::new(c, zeros)
        })
        .collect::<Result<Vec<_>>>()?;
    ModelMap::new(s.clone(), factors)
}

pub fn act(g: &SymmetryElement, m: &ModelMap) -> Result<ModelMap> {
    apply_marking(m, &marking_for(m, &g.inverse())?)
}

/// `g · m` for every `g` in [`symmetry_group`] order.
pub fn orbit(m: &ModelMap) -> Result<Vec<(SymmetryElement, ModelMap)>> {
    let markings = boundary_markings(m)?;
    let by_element: HashMap<&SymmetryElement, &BoundaryMarking> = markings.iter().map(|mk| (&mk.element, mk)).collect();
    symmetry_group(m.schema())
        .into_iter()
        .map(|g| {
            let mk = by_element[&g.inverse()];
            Ok((g, apply_marking(m, mk)?))
        })
        .collect()
}

/// Some `g` with `g · m1 = m2` factor-wise within `tol`, if one exists.
pub fn conjugacy_equivalent(m1: &ModelMap, m2: &ModelMap, tol: f64) -> Result<Option<SymmetryElement>> {
    if m1.schema() != m2.schema() {
        return Err(Error::Domain("maps belong to different schemata".into()));
    }
    for mk in boundary_markings(m1)? {
        if apply_marking(m1, &mk)?.distance(m2) <= tol {
            return Ok(Some(mk.element.inverse()));
        }
    }
    Ok(None)
}

/// Number of probes used when none are supplied.
pub const DEFAULT_PROBES: usize = 20;

pub fn default_probes(s: &MappingSchema, seed: u64) -> Result<Vec<ModelMap>> {
    let mut rng = seeded(seed);
    (0..DEFAULT_PROBES).map(|_| random_member(s, &mut rng)).collect()
}

/// Elements of `G(S)` fixing every probe within `tol`.
pub fn kernel_n0(s: &MappingSchema, probes: &[ModelMap], tol: f64) -> Result<Vec<SymmetryElement>> {
    let mut kernel = symmetry_group(s);
    for p in probes {
        if p.schema() != s {
            return Err(Error::Domain("probe belongs to a different schema".into()));
        }
        let moved: HashMap<SymmetryElement, f64> =
            orbit(p)?.into_iter().map(|(g, q)| (g, q.distance(p))).collect();
        kernel.retain(|g| moved[g] <= tol);
    }
    Ok(kernel)
}

/// `|Ḡ(S)| = |G(S)| / |N₀(S)|`.
pub fn effective_group_order(s: &MappingSchema, probes: &[ModelMap], tol: f64) -> Result<u64> {
    let g = symmetry_group(s).len() as u64;
    Ok(g / kernel_n0(s, probes, tol)?.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::{Complex, ZERO};
    use crate::schema::{enumerate_schemata, symmetry_group_order, Angle};

    const TOL: f64 = 1e-9;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn identity_acts_trivially() {
        let mut rng = seeded(2);
        for s in enumerate_schemata(3).unwrap() {
            let m = random_member(&s, &mut rng).unwrap();
            let e = SymmetryElement::identity(s.len());
            assert!(act(&e, &m).unwrap().distance(&m) < TOL);
        }
    }

    #[test]
    fn center_map_is_fixed() {
        for s in enumerate_schemata(3).unwrap() {
            let m = ModelMap::center(&s);
            for (_, image) in orbit(&m).unwrap() {
                assert!(image.distance(&m) < 1e-12);
            }
        }
    }

    #[test]
    fn order_two_rotation_on_weight_two_vertex() {
        let s = MappingSchema::from_images(vec![2], vec![0]).unwrap();
        let f = BlaschkeProduct::boundary_rooted(vec![ZERO, ZERO, c(0.4, 0.0)]).unwrap();
        let m = ModelMap::new(s.clone(), vec![f.clone()]).unwrap();
        let g = symmetry_group(&s).into_iter().find(|g| g.rotation.angles[0] == Angle::new(1, 2)).unwrap();
        let out = act(&g, &m).unwrap();
        out.validate_membership().unwrap();
        // conjugation by z ↦ q z with q the second boundary fixed point
        let q = marking_for(&m, &g).unwrap().points[0];
        assert!((f.apply(q) - q).norm() < 1e-12 && (q - crate::disk::ONE).norm() > 0.1);
        let expected = BlaschkeProduct::boundary_rooted(vec![ZERO, ZERO, q.conj() * 0.4]).unwrap();
        assert!(out.factor(0).distance(&expected) < 1e-12);
        assert!(act(&g, &out).unwrap().distance(&m) < TOL);
    }

    #[test]
    fn action_axioms() {
        let mut rng = seeded(9);
        for w in 1..=3 {
            for s in enumerate_schemata(w).unwrap() {
                let group = symmetry_group(&s);
                for _ in 0..2 {
                    let m = random_member(&s, &mut rng).unwrap();
                    let images: HashMap<SymmetryElement, ModelMap> = orbit(&m).unwrap().into_iter().collect();
                    for g1 in &group {
                        let outer: HashMap<SymmetryElement, ModelMap> =
                            orbit(&images[g1]).unwrap().into_iter().collect();
                        for g2 in &group {
                            // g2 · (g1 · m) = (g2 g1) · m
                            let lhs = &outer[g2];
                            let rhs = &images[&g2.compose(g1)];
                            assert!(lhs.distance(rhs) < 1e-8, "{s:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let single = MappingSchema::from_images(vec![2], vec![0]).unwrap();
        let probes = default_probes(&single, 1).unwrap();
        assert_eq!(kernel_n0(&single, &probes, TOL).unwrap().len(), 1);

        let tail = MappingSchema::from_images(vec![1, 1], vec![1, 1]).unwrap();
        let probes = default_probes(&tail, 1).unwrap();
        let k = kernel_n0(&tail, &probes, TOL).unwrap();
        assert_eq!(k.len(), 2);
        assert!(k.iter().any(|g| g.rotation.angles[0] == Angle::new(1, 2)));
        assert_eq!(effective_group_order(&tail, &probes, TOL).unwrap(), 1);

        let two_cycle = MappingSchema::from_images(vec![1, 1], vec![1, 0]).unwrap();
        let probes = default_probes(&two_cycle, 1).unwrap();
        assert_eq!(kernel_n0(&two_cycle, &probes, TOL).unwrap().len(), 1);
        assert_eq!(effective_group_order(&two_cycle, &probes, TOL).unwrap(), 6);
    }

    #[test]
    fn kernel_is_subgroup() {
        for w in 1..=3 {
            for s in enumerate_schemata(w).unwrap() {
                let probes = default_probes(&s, 4).unwrap();
                let k = kernel_n0(&s, &probes[..5], TOL).unwrap();
                assert_eq!(symmetry_group_order(&s) % k.len() as u64, 0);
                for a in &k {
                    for b in &k {
                        assert!(k.contains(&a.compose(&b.inverse())));
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_members_are_equivalent() {
        let mut rng = seeded(12);
        for s in enumerate_schemata(3).unwrap() {
            let m = random_member(&s, &mut rng).unwrap();
            let other = random_member(&s, &mut rng).unwrap();
            for (g, image) in orbit(&m).unwrap() {
                image.validate_membership().unwrap();
                let witness = conjugacy_equivalent(&m, &image, TOL).unwrap().expect("same orbit");
                assert!(act(&witness, &m).unwrap().distance(&image) < TOL);
                let _ = g;
            }
            assert!(conjugacy_equivalent(&m, &other, TOL).unwrap().is_none());
        }
    }
}
