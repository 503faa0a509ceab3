use std::collections::HashMap;

use diagres::category::{
    bar_cobar, builtin_category, builtin_resolution, builtin_resolutions, counterexample_resolution, verify_resolution,
    Arrow, CategoryResolution, FiniteCategory, BUILTIN_CATEGORIES,
};
use diagres::free::{OperadElement, SliceEnumerator};
use diagres::linalg::{int, Scalar};
use diagres::Error;

fn el(res: &CategoryResolution, text: &str, src: &str, tgt: &str) -> OperadElement {
    let c = &res.category;
    OperadElement::parse(text, &res.alphabet, c.object(tgt).unwrap(), vec![c.object(src).unwrap()]).unwrap()
}

#[test]
fn loading_and_saturation() {
    let two = FiniteCategory::from_json(
        r#"{"objects":["V1","V2","V3"],
            "morphisms":[{"name":"f","src":"V1","tgt":"V2"},{"name":"g","src":"V2","tgt":"V3"},{"name":"h","src":"V1","tgt":"V3"}],
            "compose":{"g|f":"h"}}"#,
    )
    .unwrap();
    assert_eq!(two.objects.len(), 3);
    assert_eq!(two.morphisms.len(), 3);
    assert!(two.is_acyclic());
    assert_eq!(two, builtin_category("two-arrow").unwrap());

    // a missing composite becomes a new morphism
    let sat = FiniteCategory::from_json(
        r#"{"objects":["A","B","C"],"morphisms":[{"name":"f","src":"A","tgt":"B"},{"name":"g","src":"B","tgt":"C"}]}"#,
    )
    .unwrap();
    assert_eq!(sat.morphisms.len(), 3);
    let gf = sat.compose(Arrow::Mor(1), Arrow::Mor(0)).unwrap();
    assert_eq!(sat.arrow_name(gf), "g*f");

    let trivial = FiniteCategory::from_json(r#"{"objects":["V"],"morphisms":[]}"#).unwrap();
    assert!(trivial.morphisms.is_empty());
    assert_eq!(trivial.hom(0, 0), vec![Arrow::Id(0)]);

    let cube = builtin_category("cube").unwrap();
    assert_eq!(cube.objects.len(), 8);
    assert!(cube.is_acyclic());
    // subsets of a 3-element set with b ⊊ a
    assert_eq!(cube.morphisms.len(), 19);
    assert_eq!(cube.longest_chain(), Some(3));
    let (one, eight) = (cube.object("1").unwrap(), cube.object("8").unwrap());
    assert_eq!(cube.hom(one, eight).len(), 1);

    let iso = builtin_category("iso").unwrap();
    assert!(!iso.is_acyclic());
    let (f, g) = (Arrow::Mor(iso.morphism("f").unwrap()), Arrow::Mor(iso.morphism("g").unwrap()));
    assert_eq!(iso.compose(f, g), Some(Arrow::Id(1)));
    assert_eq!(iso.compose_word(&[f, g, f]), Some(f));
}

#[test]
fn loading_rejects_bad_tables() {
    let dangling = FiniteCategory::from_json(r#"{"objects":["A"],"morphisms":[{"name":"f","src":"A","tgt":"B"}]}"#);
    assert!(matches!(dangling, Err(Error::Schema(_))));
    let nonassoc = FiniteCategory::from_json(
        r#"{"objects":["A","B"],
            "morphisms":[{"name":"f","src":"A","tgt":"B"},{"name":"f2","src":"A","tgt":"B"},{"name":"e","src":"B","tgt":"B"}],
            "compose":{"e|e":"e","e|f":"f2","e|f2":"f"}}"#,
    );
    match nonassoc {
        Err(Error::Schema(msg)) => assert!(msg.contains("associative"), "{msg}"),
        other => panic!("expected a schema error, got {other:?}"),
    }
    assert!(matches!(FiniteCategory::from_json("{}"), Err(Error::Schema(_))));
    assert!(matches!(
        FiniteCategory::from_json(r#"{"objects":[],"morphisms":[]}"#),
        Err(Error::Schema(_))
    ));
    let bad_key = FiniteCategory::from_json(
        r#"{"objects":["A","B"],"morphisms":[{"name":"f","src":"A","tgt":"B"}],"compose":{"f":"f"}}"#,
    );
    assert!(matches!(bad_key, Err(Error::Schema(_))));
}

#[test]
fn builtin_resolutions_as_printed() {
    let res = builtin_resolution("single-morphism/homotopy").unwrap();
    let names: Vec<&str> = res.generators().iter().map(|&g| res.alphabet.gen(g).name.as_str()).collect();
    assert_eq!(names, ["f", "g", "H"]);
    let dh = res.d.value(&res.alphabet, res.gen("H").unwrap());
    assert_eq!(dh, el(&res, "f(L1)", "V1", "V2").sub(&el(&res, "g(L1)", "V1", "V2")));

    let minimal = builtin_resolution("two-arrow/minimal").unwrap();
    assert_eq!(minimal.alphabet.len(), 2);
    assert_eq!(minimal.d.values().count(), 0);
    assert!(minimal.is_minimal());

    let cube = builtin_resolution("cube").unwrap();
    assert_eq!(cube.alphabet.len(), 12 + 6 + 1);
    let face = cube.d.value(&cube.alphabet, cube.gen("8743").unwrap());
    let expected = el(&cube, "84(43(L1))", "3", "8").sub(&el(&cube, "87(73(L1))", "3", "8"));
    assert_eq!(face, expected);
    let dh = cube.d.value(&cube.alphabet, cube.gen("H").unwrap());
    let printed = [
        (1, "84(4321(L1))"),
        (1, "8743(31(L1))"),
        (-1, "8642(21(L1))"),
        (1, "87(7531(L1))"),
        (-1, "8765(51(L1))"),
        (-1, "86(6521(L1))"),
    ];
    let mut expected = OperadElement::zero(7, vec![0]);
    for (c, t) in printed {
        expected.axpy(&int(c), &el(&cube, t, "1", "8"));
    }
    assert_eq!(dh, expected);
    assert!(cube.square_defects().is_empty());
    assert!(cube.is_minimal());
}

#[test]
fn assumption_checker() {
    for name in BUILTIN_CATEGORIES {
        for res in builtin_resolutions(name).unwrap() {
            res.check_assumptions().unwrap_or_else(|e| panic!("{}: {e}", res.name));
        }
    }
    assert!(matches!(
        counterexample_resolution().unwrap().check_assumptions(),
        Err(Error::Verification { .. })
    ));
    // flipping one sign in dH breaks d² = 0
    let mut cube = builtin_resolution("cube").unwrap();
    let h = cube.gen("H").unwrap();
    let mut dh = cube.d.value(&cube.alphabet, h);
    let (t, _) = dh.terms.iter().next().map(|(t, c)| (t.clone(), c.clone())).unwrap();
    dh.terms.insert(t, Scalar::from_integer((-7).into()));
    cube.d.set(&cube.alphabet, h, dh).unwrap();
    match cube.check_assumptions() {
        Err(Error::Verification { what, witness }) => {
            assert!(what.contains("d^2"));
            assert!(witness.starts_with("d d H"));
        }
        other => panic!("mutation not detected: {other:?}"),
    }
    // a degree-1 generator with zero boundary
    let mut bad = builtin_resolution("two-arrow/presentation").unwrap();
    bad.set_d("H", &[(1, &["g", "f"]), (-1, &["g", "f"])]).unwrap();
    assert!(bad.check_assumptions().is_err());
}

#[test]
fn bar_cobar_differential() {
    let cat = builtin_category("two-arrow").unwrap();
    let bc = bar_cobar(&cat, None).unwrap();
    assert_eq!(bc.alphabet.len(), 4);
    let gf = bc.gen("[g|f]").unwrap();
    assert_eq!(bc.alphabet.gen(gf).degree, 1);
    let expected = el(&bc, "[g]([f](L1))", "V1", "V3").sub(&el(&bc, "[h](L1)", "V1", "V3"));
    assert_eq!(bc.d.value(&bc.alphabet, gf), expected);
    assert!(bc.d.get(bc.gen("[f]").unwrap()).is_none());
    assert!(!bc.is_minimal());

    // a path of three arrows: expand d on [k|g|f] by hand
    let path = FiniteCategory::from_json(
        r#"{"objects":["A","B","C","D"],
            "morphisms":[{"name":"f","src":"A","tgt":"B"},{"name":"g","src":"B","tgt":"C"},{"name":"k","src":"C","tgt":"D"}]}"#,
    )
    .unwrap();
    let bc = bar_cobar(&path, None).unwrap();
    let d3 = bc.d.value(&bc.alphabet, bc.gen("[k|g|f]").unwrap());
    let mut expected = OperadElement::zero(3, vec![0]);
    for (c, t) in [
        (-1, "[k|g]([f](L1))"),
        (1, "[k]([g|f](L1))"),
        (1, "[k|g*f](L1)"),
        (-1, "[k*g|f](L1)"),
    ] {
        expected.axpy(&int(c), &el(&bc, t, "A", "D"));
    }
    assert_eq!(d3, expected);
    assert!(bc.square_defects().is_empty());
    bc.check_assumptions().unwrap();

    let single = bar_cobar(&builtin_category("single-morphism").unwrap(), None).unwrap();
    assert!(single.d.values().next().is_none());
}

#[test]
fn bar_cobar_on_a_non_acyclic_category() {
    let iso = builtin_category("iso").unwrap();
    assert!(bar_cobar(&iso, None).is_err());
    let bc = bar_cobar(&iso, Some(4)).unwrap();
    assert_eq!(bc.truncation, Some(4));
    // two chains of each length
    assert_eq!(bc.alphabet.len(), 8);
    assert!(bc.square_defects().is_empty());
    bc.check_assumptions().unwrap();
    let d = bc.d.value(&bc.alphabet, bc.gen("[g|f]").unwrap());
    let expected = el(&bc, "[g]([f](L1))", "V1", "V1").sub(&OperadElement::unit(0));
    assert_eq!(d, expected);
    let report = verify_resolution(&bc, Some(3));
    assert!(report.truncated);
    assert!(report.slices.iter().all(|s| !s.complete));
}

/// Number of words of generators from `v` to `w` in each degree, by dynamic
/// programming over paths.
fn slice_dims(res: &CategoryResolution, v: usize, w: usize, max_len: usize) -> HashMap<usize, usize> {
    let mut current: HashMap<(usize, usize), usize> = HashMap::new();
    current.insert((v, 0), 1);
    let mut total: HashMap<usize, usize> = HashMap::new();
    for _ in 0..=max_len {
        let mut next = HashMap::new();
        for (&(obj, deg), &n) in &current {
            if obj == w {
                *total.entry(deg).or_default() += n;
            }
            for (_, info) in res.alphabet.gens() {
                if info.ins[0] == obj {
                    *next.entry((info.out, deg + info.degree)).or_default() += n;
                }
            }
        }
        current = next;
    }
    total
}

#[test]
fn slice_enumeration_matches_path_count() {
    let bc = bar_cobar(&builtin_category("cube").unwrap(), None).unwrap();
    let mut e = SliceEnumerator::new(&bc.alphabet, |_| true, 3);
    for v in 0..8 {
        for w in 0..8 {
            let dims = slice_dims(&bc, v, w, 3);
            for deg in 0..=3 {
                let n = dims.get(&deg).copied().unwrap_or(0);
                assert_eq!(e.trees(w, &[v], deg).len(), n, "{v} -> {w} degree {deg}");
            }
            // Euler characteristic of the slice equals the number of morphisms
            let chi: i64 = (0..=3)
                .map(|d| {
                    let n = e.trees(w, &[v], d).len() as i64;
                    if d % 2 == 0 {
                        n
                    } else {
                        -n
                    }
                })
                .sum();
            assert_eq!(chi, bc.category.hom(v, w).len() as i64);
        }
    }
}

#[test]
fn resolutions_have_the_right_homology() {
    let mut all: Vec<CategoryResolution> = Vec::new();
    for name in BUILTIN_CATEGORIES {
        all.extend(builtin_resolutions(name).unwrap());
        let cat = builtin_category(name).unwrap();
        if cat.is_acyclic() {
            all.push(bar_cobar(&cat, None).unwrap());
        }
    }
    for res in &all {
        let report = verify_resolution(res, None);
        assert!(!report.truncated, "{}", res.name);
        assert!(report.pass(), "{}: {report:?}", res.name);
        let n = res.category.objects.len();
        assert_eq!(report.slices.len(), n * n);
        for s in &report.slices {
            assert!(s.complete);
            assert_eq!(s.homology.first().copied().unwrap_or(0), s.morphisms);
        }
    }
    let cube = verify_resolution(&builtin_resolution("cube").unwrap(), None);
    let s = cube.slices.iter().find(|s| s.src == "1" && s.tgt == "8").unwrap();
    assert_eq!(s.homology, vec![1]);
    // without H the cube slice 1 → 8 has homology in degree 1
    let mut broken = builtin_resolution("cube").unwrap();
    let h = broken.gen("H").unwrap();
    broken.d.set(&broken.alphabet, h, OperadElement::zero(7, vec![0])).unwrap();
    let report = verify_resolution(&broken, None);
    let s = report.slices.iter().find(|s| s.src == "1" && s.tgt == "8").unwrap();
    assert!(!s.pass);
    assert!(!report.pass());
}

#[test]
fn json_round_trip() {
    for name in ["single-morphism/homotopy", "cube", "two-arrow/presentation"] {
        let res = builtin_resolution(name).unwrap();
        let text = res.to_json().to_string();
        let back = CategoryResolution::from_json(&text).unwrap();
        assert_eq!(back.alphabet.len(), res.alphabet.len());
        assert_eq!(back.d, res.d);
        assert_eq!(back.labels, res.labels);
        assert_eq!(back.category, res.category);
    }
    let user = CategoryResolution::from_json(
        r#"{"category":"single-morphism",
            "generators":[{"name":"f","degree":0,"src":"V1","tgt":"V2","label":"f"},{"name":"K","degree":1,"src":"V1","tgt":"V2"}],
            "differential":{"K":[["f(L1)","1"]]}}"#,
    )
    .unwrap();
    assert!(user.check_assumptions().is_err());
    let err = CategoryResolution::from_json(r#"{"category":"nope","generators":[]}"#);
    assert!(matches!(err, Err(Error::Schema(_))));
}
