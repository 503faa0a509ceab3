use diagres::category::{
    bar_cobar, builtin_category, builtin_resolution, counterexample_resolution, CategoryResolution, FiniteCategory,
};
use diagres::chi::{
    chi_barcobar_2, chi_construct, chi_iterate, coassociativity_defects, expand_with, interval_coproduct,
    validated_barcobar_chi2, verify_c1_c6, ChiMap, SignConvention, TensorElement,
};
use diagres::free::{GenId, OperadElement, Tree};
use diagres::linalg::{int, one, ratio, sign};
use diagres::perm::Permutation;
use diagres::Error;

fn gen(res: &CategoryResolution, name: &str) -> OperadElement {
    OperadElement::generator(&res.alphabet, res.gen(name).unwrap())
}

fn tensor(res: &CategoryResolution, names: &[&str]) -> TensorElement {
    let factors: Vec<OperadElement> = names.iter().map(|n| gen(res, n)).collect();
    TensorElement::tensor(&factors)
}

fn path(len: usize) -> FiniteCategory {
    let objects: Vec<String> = (0..=len).map(|i| format!("P{i}")).collect();
    let morphisms = (0..len)
        .map(|i| (format!("a{i}"), objects[i].clone(), objects[i + 1].clone()))
        .collect();
    FiniteCategory::new(objects, morphisms, vec![]).unwrap()
}

/// Pairs of generator tensors `R`, `S` with `R ∘ S` defined, over generators
/// of the given power.
fn composable_pairs(res: &CategoryResolution, n: usize) -> Vec<(TensorElement, TensorElement)> {
    let gens = res.generators();
    let by_pair = |out: usize, input: usize| -> Vec<GenId> {
        gens.iter().copied().filter(|&g| res.tgt(g) == out && res.src(g) == input).collect()
    };
    let mut out = Vec::new();
    for &a in &gens {
        for &b in &gens {
            if res.src(a) != res.tgt(b) {
                continue;
            }
            let tops = by_pair(res.tgt(a), res.src(a));
            let bottoms = by_pair(res.tgt(b), res.src(b));
            // every assignment of parallel generators to the n factors
            let pick = |choices: &[GenId], seed: usize| -> TensorElement {
                let factors: Vec<OperadElement> = (0..n)
                    .map(|i| OperadElement::generator(&res.alphabet, choices[(seed + i) % choices.len()]))
                    .collect();
                TensorElement::tensor(&factors)
            };
            for s in 0..tops.len() {
                for t in 0..bottoms.len() {
                    out.push((pick(&tops, s), pick(&bottoms, t)));
                }
            }
        }
    }
    out
}

#[test]
fn tensor_composition_signs() {
    let res = builtin_resolution("cube").unwrap();
    let a = &res.alphabet;
    // degree-0 factors: plain product
    let r = tensor(&res, &["84", "84"]);
    let s = tensor(&res, &["42", "42"]);
    let p = r.compose(a, &s).unwrap();
    let w = vec![Tree::from_word(&[res.gen("84").unwrap(), res.gen("42").unwrap()]); 2];
    assert_eq!(p.terms.len(), 1);
    assert_eq!(p.terms[&w], one());
    // r = (8743 ⊗ 8743), s = (31 ⊗ 31): no odd s before an odd r
    let r = tensor(&res, &["8743", "8743"]);
    let s = tensor(&res, &["31", "31"]);
    assert_eq!(r.compose(a, &s).unwrap().terms.values().next().unwrap(), &one());
    // r = (84 ⊗ 84), s = (4321 ⊗ 4321): |r_i| = 0, so +1
    let r = tensor(&res, &["84", "84"]);
    let s = tensor(&res, &["4321", "4321"]);
    assert_eq!(r.compose(a, &s).unwrap().terms.values().next().unwrap(), &one());
    let bc = bar_cobar(&path(4), None).unwrap();
    let b = &bc.alphabet;
    let r = tensor(&bc, &["[a3|a2]", "[a3|a2]"]);
    let s = tensor(&bc, &["[a1*a0]", "[a1*a0]"]);
    assert_eq!(r.compose(b, &s).unwrap().terms.values().next().unwrap(), &one());
    // |r_2||s_1| = 1
    let r = tensor(&bc, &["[a3*a2]", "[a3|a2]"]);
    let s = tensor(&bc, &["[a1|a0]", "[a1*a0]"]);
    assert_eq!(r.compose(b, &s).unwrap().terms.values().next().unwrap(), &int(-1));
}

#[test]
fn tensor_composition_is_a_graded_associative_derivation_compatible_product() {
    let bc = bar_cobar(&path(4), None).unwrap();
    let a = &bc.alphabet;
    let pairs = composable_pairs(&bc, 3);
    assert!(pairs.len() > 50);
    for (r, s) in &pairs {
        let rs = r.compose(a, s).unwrap();
        // independent sign evaluation
        let (rw, _) = r.terms.iter().next().unwrap();
        let (sw, _) = s.terms.iter().next().unwrap();
        let mut e = 0;
        for i in 0..3 {
            for j in 0..i {
                e += rw[i].degree(a) * sw[j].degree(a);
            }
        }
        assert_eq!(rs.terms.values().next().unwrap(), &sign(e % 2 == 1));
        // d(R∘S) = dR∘S + (−1)^|R| R∘dS
        let lhs = rs.differential(a, &bc.d);
        let rd = r.degree(a).unwrap();
        let mut rhs = r.differential(a, &bc.d).compose(a, s).unwrap();
        rhs.axpy(&sign(rd % 2 == 1), &r.compose(a, &s.differential(a, &bc.d)).unwrap());
        assert_eq!(lhs, rhs);
        // (R∘S)·τ = (R·τ)∘(S·τ)
        for t in Permutation::all(3) {
            assert_eq!(rs.act(a, &t), r.act(a, &t).compose(a, &s.act(a, &t)).unwrap());
        }
    }
    let mut triples = 0;
    for (r, s) in &pairs {
        for (_, t) in pairs.iter().filter(|(s2, _)| s2 == s) {
            triples += 1;
            assert_eq!(
                r.compose(a, s).unwrap().compose(a, t).unwrap(),
                r.compose(a, &s.compose(a, t).unwrap()).unwrap()
            );
        }
    }
    assert!(triples >= 10);
}

#[test]
fn signed_action_is_a_right_action() {
    let bc = bar_cobar(&builtin_category("cube").unwrap(), None).unwrap();
    let a = &bc.alphabet;
    let x = tensor(&bc, &["[84|42|21]", "[84|41]", "[81]"])
        .add(&tensor(&bc, &["[86|61]", "[82|21]", "[84|42|21]"]));
    let perms = Permutation::all(3);
    for s in &perms {
        for t in &perms {
            assert_eq!(x.act(a, s).act(a, t), x.act(a, &s.then(t)));
        }
    }
    // swapping two odd factors costs a sign
    let y = tensor(&bc, &["[86|61]", "[84|41]"]);
    let swapped = y.act(a, &Permutation::transposition(2, 0));
    assert_eq!(swapped, tensor(&bc, &["[84|41]", "[86|61]"]).scaled(&int(-1)));
    // symmetrization is idempotent and lands in invariants
    let z = x.symmetrize(a);
    assert_eq!(z.symmetrize(a), z);
    for s in &perms {
        assert_eq!(z.act(a, s), z);
    }
}

#[test]
fn degree_one_formula_on_the_homotopy_example() {
    let res = builtin_resolution("single-morphism/homotopy").unwrap();
    let a = &res.alphabet;
    let h = res.gen("H").unwrap();
    let ns = tensor(&res, &["H", "g"]).add(&tensor(&res, &["f", "H"]));
    let chi = chi_construct(&res, 2, 1).unwrap();
    assert_eq!(chi.values[&h], ns.symmetrize(a));
    // dχ(H) = χ(dH) holds for the unsymmetrized formula as well
    let target = tensor(&res, &["f", "f"]).sub(&tensor(&res, &["g", "g"]));
    assert_eq!(ns.differential(a, &res.d), target);
    assert_eq!(chi.values[&h].differential(a, &res.d), target);
    let half = ratio(1, 2);
    let expected = ns.add(&tensor(&res, &["g", "H"]).add(&tensor(&res, &["H", "f"]))).scaled(&half);
    assert_eq!(chi.values[&h], expected);
    let report = verify_c1_c6(&res, &chi, 3);
    assert!(report.pass(), "{report:?}");
    for n in [3, 4] {
        let chi = chi_construct(&res, n, 1).unwrap();
        assert!(verify_c1_c6(&res, &chi, 2).pass());
    }
}

#[test]
fn counterexample_has_no_chi() {
    let res = counterexample_resolution().unwrap();
    match chi_construct(&res, 2, 1) {
        Err(Error::NoSolution { witness, .. }) => {
            let a = &res.alphabet;
            let cycle = tensor(&res, &["f", "f"]).add(&tensor(&res, &["g", "g"]));
            assert!(witness.contains(&cycle.display(a)), "{witness}");
            assert!(witness.contains("is a cycle but not a boundary"));
        }
        other => panic!("expected NoSolution, got {other:?}"),
    }
}

#[test]
fn constructed_chi_on_builtins() {
    for name in ["trivial", "single-morphism/trivial", "two-arrow/presentation", "two-arrow/minimal", "cube"] {
        let res = builtin_resolution(name).unwrap();
        for n in [2, 3] {
            let chi = chi_construct(&res, n, res.max_degree()).unwrap();
            let report = verify_c1_c6(&res, &chi, 3);
            assert!(report.pass(), "{name} n={n}: {report:?}");
        }
    }
    // degree-0 generators go to f^⊗n
    let res = builtin_resolution("single-morphism/trivial").unwrap();
    let chi = chi_construct(&res, 4, 0).unwrap();
    assert_eq!(chi.values[&res.gen("f").unwrap()], tensor(&res, &["f"; 4]));
}

fn model_map(res: &CategoryResolution) -> ChiMap {
    let mut chi = ChiMap::new(2);
    for g in res.generators() {
        chi.values.insert(g, interval_coproduct(res, &Tree::from_word(&[g]), res.tgt(g)).unwrap());
    }
    chi
}

#[test]
fn barcobar_coproduct_sign_validation() {
    let two = bar_cobar(&builtin_category("two-arrow").unwrap(), None).unwrap();
    // [g|f] ↦ [g|f]⊗[h] + [g][f]⊗[g|f]
    let v = chi_barcobar_2(&two, SignConvention::Shifted).unwrap();
    let gf = two.gen("[g|f]").unwrap();
    let mut expected = tensor(&two, &["[g|f]", "[h]"]);
    expected.axpy(
        &one(),
        &TensorElement::tensor(&[
            OperadElement::word(&two.alphabet, &[two.gen("[g]").unwrap(), two.gen("[f]").unwrap()], 0),
            gen(&two, "[g|f]"),
        ]),
    );
    assert_eq!(v.values[&gf], expected);
    let printed = chi_barcobar_2(&two, SignConvention::Printed).unwrap();
    assert!(!verify_c1_c6(&two, &printed, 1).condition("C6").unwrap().pass);

    let path = bar_cobar(&path(3), None).unwrap();
    let cube = bar_cobar(&builtin_category("cube").unwrap(), None).unwrap();
    for res in [&two, &path, &cube] {
        let (chi, convention) = validated_barcobar_chi2(res).unwrap();
        if res.max_degree() >= 2 {
            assert_eq!(convention, SignConvention::Interval);
            let shifted = chi_barcobar_2(res, SignConvention::Shifted).unwrap();
            assert!(!verify_c1_c6(res, &shifted, 1).condition("C6").unwrap().pass);
        }
        // the model coproduct agrees on generators and on products up to length 3
        let model = model_map(res);
        assert_eq!(model, chi);
        let gens = res.generators();
        for &x in &gens {
            for &y in gens.iter().filter(|&&y| res.tgt(y) == res.src(x)) {
                let t = Tree::from_word(&[x, y]);
                assert_eq!(interval_coproduct(res, &t, res.tgt(x)), chi.apply_tree(res, &t, res.tgt(x)));
                for &z in gens.iter().filter(|&&z| res.tgt(z) == res.src(y)) {
                    let t = Tree::from_word(&[x, y, z]);
                    assert_eq!(interval_coproduct(res, &t, res.tgt(x)), chi.apply_tree(res, &t, res.tgt(x)));
                }
            }
        }
        let report = verify_c1_c6(res, &chi, 3);
        for c in ["C2", "C3", "C4", "C5", "C6"] {
            assert!(report.condition(c).unwrap().pass, "{}: {report:?}", res.name);
        }
        assert!(coassociativity_defects(res, &chi).is_empty());
        let sym = chi.symmetrized(res);
        assert!(verify_c1_c6(res, &sym, 3).pass());
    }
}

#[test]
fn iterated_coproducts() {
    let cube = bar_cobar(&builtin_category("cube").unwrap(), None).unwrap();
    let a = &cube.alphabet;
    let (chi2, _) = validated_barcobar_chi2(&cube).unwrap();
    assert_eq!(chi_iterate(&cube, &chi2, 2).unwrap(), chi2);
    let chi3 = chi_iterate(&cube, &chi2, 3).unwrap();
    let chi4 = chi_iterate(&cube, &chi2, 4).unwrap();
    for chi in [&chi3, &chi4] {
        let report = verify_c1_c6(&cube, chi, 2);
        for c in ["C2", "C3", "C4", "C5", "C6"] {
            assert!(report.condition(c).unwrap().pass, "{report:?}");
        }
    }
    // (id^i ⊗ χ₂ ⊗ id^{b−i−1}) χ_b = χ_{b+1}
    for (g, v) in &chi3.values {
        for i in 0..3 {
            assert_eq!(&expand_with(&cube, &chi2, v, i).unwrap(), &chi4.values[g]);
        }
    }
    for (g, v) in &chi2.values {
        assert_eq!(&expand_with(&cube, &chi2, v, 1).unwrap(), &chi3.values[g]);
    }
    let sym = chi3.symmetrized(&cube);
    for v in sym.values.values() {
        for s in Permutation::all(3) {
            assert_eq!(&v.act(a, &s), v);
        }
    }
    assert!(verify_c1_c6(&cube, &sym, 2).pass());
}
