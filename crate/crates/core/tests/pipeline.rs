//! End-to-end flows across modules, through the JSON formats.

use blaschke_core::basin::straighten;
use blaschke_core::model::{act, conjugacy_equivalent, random_member};
use blaschke_core::random::{automorphism, seeded};
use blaschke_core::schema::{enumerate_schemata, symmetry_group};
use blaschke_core::{BasinSystem, MappingSchema, ModelMap};

#[test]
fn scrambled_center_straightens_to_center() {
    let mut rng = seeded(1);
    for s in enumerate_schemata(3).unwrap() {
        let center = ModelMap::center(&s);
        let coords: Vec<_> = (0..s.len()).map(|_| automorphism(&mut rng, 0.6)).collect();
        let b = BasinSystem::from_model(&center, &coords).unwrap();
        let out = straighten(&b).unwrap();
        assert_eq!(out.len(), symmetry_group(&s).len());
        for st in &out {
            // the center map is fixed by all of G(S)
            assert!(st.model.distance(&center) < 1e-9, "{s:?} {:e}", st.model.distance(&center));
            assert!(st.model.is_post_critically_finite());
        }
    }
}

#[test]
fn straightening_survives_json() {
    let mut rng = seeded(2);
    let s: MappingSchema = serde_json::from_str(
        r#"{"vertices":[{"id":"x","weight":1,"image":"y"},{"id":"y","weight":2,"image":"y"},{"id":"z","weight":1,"image":"y"}]}"#,
    )
    .unwrap();
    let m = random_member(&s, &mut rng).unwrap();
    let coords: Vec<_> = (0..s.len()).map(|_| automorphism(&mut rng, 0.6)).collect();
    let b = BasinSystem::from_model(&m, &coords).unwrap();
    let parsed: BasinSystem = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
    assert_eq!(parsed.derive_schema().unwrap(), s);

    let direct = straighten(&b).unwrap();
    let via_json = straighten(&parsed).unwrap();
    assert_eq!(direct.len(), via_json.len());
    for (a, c) in direct.iter().zip(&via_json) {
        assert!(a.model.distance(&c.model) < 1e-12);
    }
    // straightened maps differ from m by the action, and the action moves
    // them back
    for st in &direct {
        let g = conjugacy_equivalent(&st.model, &m, 1e-8).unwrap().expect("same orbit");
        assert!(act(&g, &st.model).unwrap().distance(&m) < 1e-8);
    }
}
