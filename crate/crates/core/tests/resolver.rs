use diagres::category::{bar_cobar, builtin_category, builtin_resolution, counterexample_resolution, CategoryResolution};
use diagres::chi::TensorElement;
use diagres::error::Error;
use diagres::free::OperadElement;
use diagres::linalg::{int, one};
use diagres::resolver::{DInfinity, Extension, IdealUsed, Kind, KoszulGeneratorGrid, ResolverConfig};

fn config(max_arity: usize) -> ResolverConfig {
    ResolverConfig {
        max_arity,
        ..ResolverConfig::default()
    }
}

fn build(res: CategoryResolution, config: ResolverConfig) -> DInfinity {
    let grid = KoszulGeneratorGrid::ass(config.max_arity).unwrap();
    DInfinity::build(grid, res, config).unwrap()
}

fn named(name: &str, max_arity: usize) -> DInfinity {
    build(builtin_resolution(name).unwrap(), config(max_arity))
}

fn f_id(d: &DInfinity, name: &str) -> u32 {
    d.res.gen(name).unwrap()
}

#[test]
fn koszul_grid_for_ass() {
    let grid = KoszulGeneratorGrid::ass(6).unwrap();
    assert_eq!((grid.arity, grid.degree), (2, 0));
    for (i, (k, a, d)) in grid.entries().into_iter().enumerate() {
        assert_eq!(k, i + 1);
        assert_eq!(a, k + 1);
        assert_eq!(d, k - 1);
        assert_eq!((grid.a(k), grid.d(k)), (k + 1, k as isize - 1));
    }
    let ok = r#"{"operad":{"generators":[{"name":"m","arity":2}],"rewrites":[["m(1, m(2, 3))","m(m(1, 2), 3)"]]},
        "resolution":{"generators":[{"name":"m2","arity":2},{"name":"m3","arity":3,"degree":1}],
            "differential":{"m3":[["m2(m2(1, 2), 3)","1"],["m2(1, m2(2, 3))","-1"]]}},
        "projection":{"m2":[["m(1, 2)","1"]]}}"#;
    let g = KoszulGeneratorGrid::from_json(ok).unwrap();
    assert_eq!(g.entries(), vec![(1, 2, 0), (2, 3, 1)]);
    let back = KoszulGeneratorGrid::from_json(&g.to_json().to_string()).unwrap();
    assert_eq!(back.entries(), g.entries());
    // off the grid
    let off = ok.replace(r#""arity":3,"degree":1"#, r#""arity":3,"degree":2"#);
    assert!(KoszulGeneratorGrid::from_json(&off).is_err());
    // Φ(d m3) ≠ d Φ(m3)
    let broken = ok.replace(r#"["m2(1, m2(2, 3))","-1"]"#, r#"["m2(1, m2(2, 3))","1"]"#);
    assert!(KoszulGeneratorGrid::from_json(&broken).is_err());
}

#[test]
fn generators_and_degrees() {
    let d = named("two-arrow/presentation", 3);
    assert_eq!(d.xs.len(), 2);
    for (&(x, f), &id) in &d.xf {
        let info = d.alphabet.gen(id);
        let fi = d.alphabet.gen(f);
        assert_eq!(info.degree, d.degree_of(x) + fi.degree + 1);
        assert_eq!(info.out, fi.out);
        assert_eq!(info.ins, vec![fi.ins[0]; d.arity_of(x)]);
        assert_eq!(d.kinds[id as usize], Kind::XF { x, f });
    }
    // d x_v is the colourized A∞ relation, d f is the category differential
    let mu3 = d.xv[&(1, 0)];
    assert_eq!(
        d.d.value(&d.alphabet, mu3).display(&d.alphabet),
        "mu2_V1[12](mu2_V1[12](L1, L2), L3) - mu2_V1[12](L1, mu2_V1[12](L2, L3))"
    );
    let h = f_id(&d, "H");
    assert_eq!(d.d.value(&d.alphabet, h), d.res.d.value(&d.res.alphabet, h));
}

#[test]
fn polarization_rules() {
    let d = named("two-arrow/presentation", 3);
    let a = &d.alphabet;
    let (f, g) = (f_id(&d, "f"), f_id(&d, "g"));
    for x in [0, 1] {
        // x⟨f⟩ = x_f, x⟨id⟩ = 0
        assert_eq!(d.polarize(x, &d.generator(f)).unwrap(), d.generator(d.xf[&(x, f)]));
        assert!(d.polarize(x, &OperadElement::unit(1)).unwrap().is_zero());
        // x⟨gf⟩ = x_g χ⟦f⟧ + g x_f
        let n = d.arity_of(x);
        let gf = OperadElement::word(a, &[g, f], 2);
        let mut expected = d.compose_tensor(&d.generator(d.xf[&(x, g)]), &TensorElement::power(&d.generator(f), n)).unwrap();
        expected.axpy(&one(), &d.generator(g).compose(a, &[d.generator(d.xf[&(x, f)])]).unwrap());
        assert_eq!(d.polarize(x, &gf).unwrap(), expected);
    }
    // bracketing independence, and the formula on words with 2-cells
    let cube = named("cube", 2);
    let (brackets, formula) = cube.check_formula_lemma(3).unwrap();
    assert!(brackets.pass && brackets.checked > 0, "{brackets:?}");
    assert!(formula.pass, "{formula:?}");
    let words = cube.words(3);
    assert!(words.iter().any(|w| w.len() == 2 && cube.scalar_degree(w) == 1));
    for w in words.iter().filter(|w| w.len() == 3).take(20) {
        let colour = cube.alphabet.gen(w[0]).out;
        let one_two = cube.extend_word(0, w, colour, Extension::Polarization, 1).unwrap();
        let two_one = cube.extend_word(0, w, colour, Extension::Polarization, 2).unwrap();
        assert_eq!(one_two, two_one);
    }
}

#[test]
fn right_hand_sides() {
    let d = named("single-morphism/trivial", 3);
    let f = f_id(&d, "f");
    // arity 2 over a degree-0 f: φ = 0
    assert!(d.rhs(0, f).unwrap().is_zero());
    assert!(d.omega_of(0, f).unwrap().value.is_zero());
    // arity 3: a nonzero degree-0 cycle which is a boundary of ω
    let phi = d.rhs(1, f).unwrap();
    assert!(!phi.is_zero());
    assert_eq!(phi.degree(&d.alphabet), Some(0));
    assert!(d.d.apply(&d.alphabet, &phi).is_zero());
    let omega = &d.omega_of(1, f).unwrap().value;
    assert_eq!(d.d.apply(&d.alphabet, omega), phi);
    // φ is minus the differential of the principal part
    let p = d.principal(1, f).unwrap();
    assert_eq!(d.d.apply(&d.alphabet, &p).scaled(&int(-1)), phi);

    // a corrupted χ is detected by dφ ≠ 0
    let mut bad = named("two-arrow/presentation", 3);
    let h = f_id(&bad, "H");
    let chi3 = bad.chi.get_mut(&3).unwrap();
    let v = chi3.values.get_mut(&h).unwrap();
    *v = v.scaled(&int(-1));
    let phi = bad.rhs(1, h).unwrap();
    assert!(!bad.d.apply(&bad.alphabet, &phi).is_zero());
}

#[test]
fn omega_lies_in_the_ideals() {
    // free category: the ideal is generated by X_F(<n) alone
    let strict = ResolverConfig {
        strict_ideal: true,
        ..config(3)
    };
    let d = build(builtin_resolution("single-morphism/trivial").unwrap(), strict.clone());
    for e in &d.omega {
        assert_eq!(e.ideal, IdealUsed::Strict);
        assert!(d.in_ideal(&e.value, d.arity_of(e.x), true));
        assert_eq!(e.localized, Some(true));
    }
    let report = d.verify().unwrap();
    assert!(report.pass(), "{:?}", report.failure());
    assert_eq!(report.strict_ideal.attempted, 2);

    let bc = bar_cobar(&builtin_category("single-morphism").unwrap(), None).unwrap();
    let d = build(bc, config(3));
    assert!(d.omega.iter().all(|e| d.in_ideal(&e.value, d.arity_of(e.x), false)));
    assert!(d.verify().unwrap().pass());

    // with a homotopy: the full ideal, with the smaller one tried first
    let d = build(builtin_resolution("two-arrow/presentation").unwrap(), strict);
    let report = d.verify().unwrap();
    assert!(report.pass(), "{:?}", report.failure());
    assert_eq!(report.strict_ideal.attempted, d.omega.len());
    for e in &d.omega {
        assert!(d.in_ideal(&e.value, d.arity_of(e.x), false));
        if e.ideal == IdealUsed::Strict {
            assert!(d.in_ideal(&e.value, d.arity_of(e.x), true));
        }
    }
}

#[test]
fn projection_and_slices() {
    let d = named("two-arrow/presentation", 3);
    for id in d.xf.values() {
        assert!(d.project(&d.generator(*id)).unwrap().is_zero());
    }
    let report = d.verify().unwrap();
    assert!(report.pass(), "{:?}", report.failure());
    assert!(report.phi_chain_map.checked >= d.alphabet.len());
    // (V1 V1 → V3) in arity 2
    let s = report.slices.iter().find(|s| s.out == "V3" && s.ins == ["V1", "V1"]).unwrap();
    assert_eq!(s.homology, vec![2, 0]);
    assert_eq!(s.expected, vec![2, 0]);
    assert_eq!(s.phi_rank, 2);
    // every mixed slice of arity 3 into V3
    assert_eq!(report.slices.iter().filter(|s| s.out == "V3" && s.ins.len() == 3).count(), 27);
    for s in &report.slices {
        let homs: usize = s.ins.iter().map(|v| if v.as_str() <= s.out.as_str() { 1 } else { 0 }).product();
        assert_eq!(s.expected[0], (1..=s.ins.len()).product::<usize>() * homs);
    }
}

#[test]
fn assumptions_are_enforced() {
    let grid = || KoszulGeneratorGrid::ass(3).unwrap();
    let err = DInfinity::build(grid(), counterexample_resolution().unwrap(), config(3)).unwrap_err();
    assert!(matches!(err, Error::Verification { .. }), "{err}");
    let iso = builtin_category("iso").unwrap();
    let mut res = CategoryResolution::new("iso", iso.clone());
    res.add_generator("f", 0, 0, 1, iso.morphism("f")).unwrap();
    res.add_generator("g", 0, 1, 0, iso.morphism("g")).unwrap();
    let err = DInfinity::build(grid(), res, config(3)).unwrap_err();
    assert!(matches!(err, Error::Invalid(_)), "{err}");
}

#[test]
fn output_is_deterministic() {
    let a = named("single-morphism/homotopy", 3);
    let b = named("single-morphism/homotopy", 3);
    let ra = a.verify().unwrap();
    let rb = b.verify().unwrap();
    let ja = serde_json::to_string_pretty(&a.to_json(&ra)).unwrap();
    let jb = serde_json::to_string_pretty(&b.to_json(&rb)).unwrap();
    assert_eq!(ja, jb);
    assert!(ja.contains("\"mu3<H>[123]\""));
}
