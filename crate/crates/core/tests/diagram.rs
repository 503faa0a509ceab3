use std::collections::BTreeMap;

use diagres::category::{builtin_category, Arrow, FiniteCategory};
use diagres::diagram::{apply_functor, DiagramElement, DiagramOperad, OperadMorphism, OperadPresentation};
use diagres::linalg::{homology, int, one, Solver};
use diagres::perm::Permutation;
use diagres::sigma::random::{induced_part, Generator, Orbit};
use diagres::sigma::{compose_product, ArityPart, BasisElement, ColouredSigmaModule};

fn ass(cat: &str) -> DiagramOperad {
    DiagramOperad::new(OperadPresentation::ass(), builtin_category(cat).unwrap())
}

fn ass_inf(cat: &str, n: usize) -> DiagramOperad {
    DiagramOperad::new(OperadPresentation::ass_infinity(n), builtin_category(cat).unwrap())
}

fn arrow(c: &FiniteCategory, name: &str) -> Arrow {
    Arrow::Mor(c.morphism(name).unwrap())
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn colour_words(colours: usize, n: usize) -> Vec<Vec<usize>> {
    let mut words = vec![Vec::new()];
    for _ in 0..n {
        words = words
            .into_iter()
            .flat_map(|w| {
                (0..colours).map(move |c| {
                    let mut w = w.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    words
}

fn degree_of(d: &DiagramOperad, e: &DiagramElement) -> usize {
    d.degree(e.terms.keys().next().unwrap())
}

#[test]
fn morphisms_intertwine_operations() {
    let d = ass("two-arrow");
    let c = &d.category;
    for name in ["f", "g", "h"] {
        let f = arrow(c, name);
        let (s, t) = (c.src(f), c.tgt(f));
        let mu_s = d.operation("mu2(1, 2)", s).unwrap();
        let mu_t = d.operation("mu2(1, 2)", t).unwrap();
        let lhs = d.compose(&d.morphism(f), &[mu_s]).unwrap();
        let rhs = d.compose(&mu_t, &[d.morphism(f), d.morphism(f)]).unwrap();
        assert_eq!(lhs, rhs, "{name}");
        assert_eq!(lhs.ins, vec![s, s]);
    }
    // composites of morphisms
    let g_f = d.compose(&d.morphism(arrow(c, "g")), &[d.morphism(arrow(c, "f"))]).unwrap();
    assert_eq!(g_f, d.morphism(arrow(c, "h")));
    let mixed = d.compose(&d.operation("mu2(1, 2)", 2).unwrap(), &[d.morphism(arrow(c, "g")), d.morphism(arrow(c, "h"))]).unwrap();
    assert_eq!(mixed.ins, vec![1, 0]);
    assert_eq!(d.display(&mixed), "1*mu2(1, 2)[g, h]");
}

#[test]
fn identities_are_units() {
    let d = ass_inf("two-arrow", 4);
    let c = &d.category;
    let mu3 = d.operation("mu3(1, 2, 3)", 2).unwrap();
    let a = d
        .compose(&mu3, &[d.morphism(arrow(c, "h")), d.unit(2), d.morphism(arrow(c, "g"))])
        .unwrap();
    assert_eq!(d.compose(&d.unit(2), std::slice::from_ref(&a)).unwrap(), a);
    let units: Vec<DiagramElement> = a.ins.iter().map(|&v| d.unit(v)).collect();
    assert_eq!(d.compose(&a, &units).unwrap(), a);
    assert!(d.compose(&a, &[d.unit(0)]).is_err());
    assert!(d.graft(&a, 1, &d.unit(0)).is_err());
}

/// The regular representation of `Ass` on each colour, composed with the
/// arity-one module of all arrows.
fn product_dims(cat: &FiniteCategory, max_arity: usize) -> BTreeMap<(usize, usize, Vec<usize>, usize), usize> {
    let colours: Vec<String> = cat.objects.clone();
    let k = colours.len();
    let unit_basis = (0..k)
        .map(|v| BasisElement { name: format!("1_{v}"), degree: 0, out: v, ins: vec![v] })
        .collect();
    let mut a = BTreeMap::from([(1, ArityPart { basis: unit_basis, transpositions: vec![], differential: None })]);
    for n in 2..=max_arity {
        let gens: Vec<Generator> = (0..k)
            .map(|v| Generator { arity: n, out: v, ins: vec![v; n], degree: 0, orbit: Orbit::Free })
            .collect();
        a.insert(n, induced_part(&gens, None));
    }
    let a = ColouredSigmaModule::new(colours.clone(), a).unwrap();
    let mut basis = Vec::new();
    for s in 0..k {
        for t in 0..k {
            for f in cat.hom(s, t) {
                basis.push(BasisElement { name: cat.arrow_name(f), degree: 0, out: t, ins: vec![s] });
            }
        }
    }
    let c = ColouredSigmaModule::new(colours, BTreeMap::from([(1, ArityPart { basis, transpositions: vec![], differential: None })])).unwrap();
    compose_product(&a, &c, max_arity).unwrap().module.dims()
}

#[test]
fn slice_dimensions() {
    for name in ["single-morphism", "two-arrow", "cube"] {
        let d = ass(name);
        let c = &d.category;
        let k = c.objects.len();
        let oracle = product_dims(c, 3);
        for n in 1..=3 {
            for out in 0..k {
                for ins in colour_words(k, n) {
                    let formula = factorial(n) * ins.iter().map(|&v| c.hom(v, out).len()).product::<usize>();
                    let dim = d.slice_dim(out, &ins, 0);
                    assert_eq!(dim, formula, "{name} {out} {ins:?}");
                    assert_eq!(oracle.get(&(n, out, ins.clone(), 0)).copied().unwrap_or(0), dim, "{name} {out} {ins:?}");
                }
            }
        }
    }
}

#[test]
fn normal_forms_are_stable() {
    let d = ass("two-arrow");
    let c = &d.category;
    let e = d.operation("mu2(1, mu2(mu2(2, 3), 4))", 2).unwrap();
    assert_eq!(d.normalize(&e).unwrap(), e);
    assert_eq!(d.display(&e), "1*mu2(mu2(mu2(1, 2), 3), 4)[id_V3, id_V3, id_V3, id_V3]");
    for ins in colour_words(3, 3) {
        for t in d.basis(2, &ins, 0) {
            assert!(d.operad.is_normal(&t.tree));
            let (shape, arrows, sigma) = t.canonical_form();
            assert_eq!(shape.leaves(), vec![0, 1, 2]);
            for (p, a) in arrows.iter().enumerate() {
                assert_eq!(t.arrows[sigma.apply(p)], *a);
            }
            assert!(arrows.iter().all(|&a| c.tgt(a) == 2));
        }
    }
}

#[test]
fn symmetric_action() {
    let d = ass_inf("two-arrow", 4);
    let c = &d.category;
    let mu3 = d.operation("mu3(1, 2, 3)", 2).unwrap();
    let a = d
        .compose(&mu3, &[d.morphism(arrow(c, "h")), d.morphism(arrow(c, "g")), d.unit(2)])
        .unwrap();
    for s in Permutation::all(3) {
        let acted = d.act(&a, &s).unwrap();
        assert_eq!(acted.ins, s.act_on(&a.ins));
        for t in Permutation::all(3) {
            assert_eq!(d.act(&acted, &t).unwrap(), d.act(&a, &s.then(&t)).unwrap());
        }
        // d is equivariant
        assert_eq!(d.differential(&acted).unwrap(), d.act(&d.differential(&a).unwrap(), &s).unwrap());
    }
}

#[test]
fn composition_axioms_with_signs() {
    let d = ass_inf("cube", 4);
    let c = &d.category;
    let f = |n: &str| d.morphism(arrow(c, n));
    // cube vertex k has index k - 1
    let a = d.compose(&d.operation("mu3(1, 2, 3)", 6).unwrap(), &[f("75"), d.unit(6), f("73")]).unwrap();
    let b = d.compose(&d.operation("mu3(1, 3, 2)", 4).unwrap(), &[d.unit(4), f("51"), f("51")]).unwrap();
    let e = d.compose(&d.operation("mu2(1, 2)", 2).unwrap(), &[f("31"), d.unit(2)]).unwrap();
    let odd = |x: &DiagramElement| degree_of(&d, x) % 2 == 1;
    assert!(odd(&a) && odd(&b));
    // sequential
    let lhs = d.graft(&d.graft(&a, 0, &b).unwrap(), 1, &d.operation("mu3(1, 2, 3)", 1).unwrap());
    let mu3_1 = d.operation("mu3(1, 2, 3)", 0).unwrap();
    assert!(lhs.is_err());
    let inner = d.compose(&d.operation("mu3(1, 2, 3)", 4).unwrap(), &[d.unit(4), d.unit(4), d.unit(4)]).unwrap();
    let lhs = d.graft(&d.graft(&a, 0, &b).unwrap(), 0, &inner).unwrap();
    let rhs = d.graft(&a, 0, &d.graft(&b, 0, &inner).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    // parallel: (a ∘_1 b) ∘_{1+ar b} x = (−1)^{|b||x|} (a ∘_2 x) ∘_1 b
    let mu3_7 = d.operation("mu3(1, 2, 3)", 6).unwrap();
    let lhs = d.graft(&d.graft(&a, 0, &b).unwrap(), 3, &mu3_7).unwrap();
    let rhs = d.graft(&d.graft(&a, 1, &mu3_7).unwrap(), 0, &b).unwrap().scaled(&int(-1));
    assert_eq!(lhs, rhs);
    let lhs = d.graft(&d.graft(&a, 0, &b).unwrap(), 4, &e).unwrap();
    let rhs = d.graft(&d.graft(&a, 2, &e).unwrap(), 0, &b).unwrap();
    assert_eq!(lhs, rhs);
    // Leibniz: d(a ∘_i b) = da ∘_i b + (−1)^{|a|} a ∘_i db
    for (x, i, y) in [(&a, 0, &b), (&a, 2, &e), (&b, 1, &mu3_1)] {
        let lhs = d.differential(&d.graft(x, i, y).unwrap()).unwrap();
        let mut rhs = d.graft(&d.differential(x).unwrap(), i, y).unwrap();
        let sign = if odd(x) { int(-1) } else { one() };
        rhs.axpy(&sign, &d.graft(x, i, &d.differential(y).unwrap()).unwrap());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn extension_to_diagrams_is_functorial() {
    let cat = builtin_category("two-arrow").unwrap();
    let phi = OperadMorphism::ass_infinity_to_ass(4);
    phi.check().unwrap();
    let id = OperadMorphism::identity(&phi.source);
    let composite = phi.after(&id).unwrap();
    assert_eq!(composite.values, phi.values);
    let id_ass = OperadMorphism::identity(&phi.target);
    assert_eq!(id_ass.after(&phi).unwrap().values, phi.values);

    let xi = apply_functor(&phi, &cat).unwrap();
    let xi_id = apply_functor(&id, &cat).unwrap();
    let s = &xi.source;
    let c = &s.category;
    let f = |n: &str| s.morphism(arrow(c, n));
    let a = s.compose(&s.operation("mu2(1, 2)", 2).unwrap(), &[f("g"), s.unit(2)]).unwrap();
    let b = s.compose(&s.operation("mu2(mu2(1, 2), 3)", 1).unwrap(), &[f("f"), s.unit(1), s.unit(1)]).unwrap();
    let m3 = s.operation("mu3(2, 1, 3)", 0).unwrap();
    assert_eq!(xi_id.apply(&a).unwrap(), a);
    // ξ(a ∘ (b, y)) = ξ(a) ∘ (ξ(b), ξ(y)) and ξ commutes with the action
    let t = &xi.target;
    let composite = s.compose(&a, &[b.clone(), f("h")]).unwrap();
    let mapped = t
        .compose(&xi.apply(&a).unwrap(), &[xi.apply(&b).unwrap(), xi.apply(&f("h")).unwrap()])
        .unwrap();
    assert_eq!(xi.apply(&composite).unwrap(), mapped);
    assert!(xi.apply(&m3).unwrap().is_zero());
    for sigma in Permutation::all(3) {
        assert_eq!(xi.apply(&s.act(&b, &sigma).unwrap()).unwrap(), t.act(&xi.apply(&b).unwrap(), &sigma).unwrap());
    }
    // a morphism that breaks the differential is rejected
    let mut bad = phi.clone();
    bad.values[1] = phi.target.planar(&[("mu2(mu2(1, 2), 3)", 1)]).unwrap();
    assert!(OperadMorphism::new(bad.source.clone(), bad.target.clone(), bad.values.clone()).is_err());
    let mut wrong = OperadMorphism::identity(&phi.source);
    wrong.values[1] = wrong.values[1].iter().map(|(t, c)| (t.clone(), -c.clone())).collect();
    assert!(wrong.check().is_err());
}

#[test]
fn ass_infinity_diagrams_resolve_ass_diagrams() {
    let cat = builtin_category("two-arrow").unwrap();
    let xi = apply_functor(&OperadMorphism::ass_infinity_to_ass(4), &cat).unwrap();
    for n in 2..=4 {
        for ins in colour_words(3, n) {
            let out = 2;
            let target_dim = xi.target.slice_dim(out, &ins, 0);
            let cx = xi.source.slice_complex(out, &ins, n - 2).unwrap();
            let h = homology(&cx).unwrap();
            assert_eq!(h[0].dim, target_dim, "{ins:?}");
            assert!(h[1..].iter().all(|g| g.dim == 0), "{ins:?}");
            let m = xi.matrix(out, &ins, 0).unwrap();
            assert_eq!(Solver::new(&m).rank(), target_dim);
            // boundaries map to zero
            if n > 2 {
                for col in cx.differential(1) {
                    assert!(col.apply(&m).is_zero());
                }
            }
        }
    }
}
