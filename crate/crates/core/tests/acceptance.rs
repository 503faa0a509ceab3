use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use diagres::category::{bar_cobar, builtin_category, builtin_resolution, builtin_resolutions, counterexample_resolution, verify_resolution, CategoryResolution};
use diagres::chi::{chi_construct, coassociativity_defects, validated_barcobar_chi2, verify_c1_c6, TensorElement};
use diagres::free::OperadElement;
use diagres::linalg::{coinvariants, homology, homology_with_action, int, Scalar, SparseVec};
use diagres::perm::{block_perm, cross, Permutation};
use diagres::resolver::{DInfinity, KoszulGeneratorGrid, ResolverConfig};
use diagres::sigma::kunneth_check;
use diagres::sigma::random::{random_group_complex, random_module, RandomParams};
use diagres::Error;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(s: &str) -> Permutation {
    Permutation::parse(s).unwrap()
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

fn permutations() -> Outcome {
    let id = Permutation::identity(1);
    ensure(cross(&[p("[21]"), id, p("[312]")]) == p("[213645]"), || "cross([21], id, [312])".into())?;
    ensure(block_perm(&p("[231]"), &[2, 1, 3]) == p("[345612]"), || "block_perm([231], (2,1,3))".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..1000 {
        let m = rng.gen_range(1..=5);
        let lengths: Vec<usize> = (0..m).map(|_| rng.gen_range(0..=3)).collect();
        let n: usize = lengths.iter().sum();
        // labelled blocks: the action on sequences is the oracle
        let mut next = 0;
        let blocks: Vec<Vec<usize>> = lengths
            .iter()
            .map(|&l| {
                next += l;
                (next - l..next).collect()
            })
            .collect();
        let flat: Vec<usize> = blocks.concat();
        let (s, t) = (random_perm(&mut rng, m), random_perm(&mut rng, m));
        let bs = block_perm(&s, &lengths);
        ensure(bs.act_on(&flat) == s.act_on(&blocks).concat(), || format!("trial {trial}: block_perm({s}, {lengths:?}) on blocks"))?;
        ensure(block_perm(&Permutation::identity(m), &lengths).is_identity(), || format!("trial {trial}: block_perm(id, {lengths:?})"))?;
        let moved = s.act_on(&lengths);
        let lhs = bs.then(&block_perm(&t, &moved));
        ensure(lhs == block_perm(&s.then(&t), &lengths), || format!("trial {trial}: block_perm({s}) then block_perm({t})"))?;
        let inner: Vec<Permutation> = lengths.iter().map(|&l| random_perm(&mut rng, l)).collect();
        let c = cross(&inner);
        let acted: Vec<usize> = blocks.iter().zip(&inner).flat_map(|(b, q)| q.act_on(b)).collect();
        ensure(c.act_on(&flat) == acted, || format!("trial {trial}: cross{inner:?} on blocks"))?;
        ensure(c.then(&c.inverse()) == Permutation::identity(n), || format!("trial {trial}: cross inverse"))?;
        // moving inner permutations past a block permutation
        let lhs = c.then(&bs);
        let rhs = bs.then(&cross(&s.act_on(&inner)));
        ensure(lhs == rhs, || format!("trial {trial}: cross then block_perm"))?;
    }
    Ok("examples exact, 1000 random identities".into())
}

fn kunneth() -> Outcome {
    let params = RandomParams {
        colours: 2,
        max_arity: 3,
        max_degree: 3,
        generators: 2,
        max_dim: 12,
        differential: true,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut slices = 0;
    for trial in 0..50 {
        let a = random_module(&mut rng, &params);
        let b = random_module(&mut rng, &params);
        let report = kunneth_check(&a, &b, 3).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(report.pass(), || format!("trial {trial}: {report:?}"))?;
        slices += report.entries.len();
    }
    Ok(format!("50 random pairs, {slices} slices"))
}

/// `dim H(M)_G` as the average trace of the group on `H(M)`.
fn invariant_dims(hm_actions: &[Vec<Vec<SparseVec>>], dims: &[usize]) -> Vec<usize> {
    let identity: Vec<Vec<SparseVec>> = dims.iter().map(|&n| (0..n).map(SparseVec::unit).collect()).collect();
    let mut group = vec![identity];
    let mut i = 0;
    while i < group.len() {
        for g in hm_actions {
            let prod: Vec<Vec<SparseVec>> = (0..dims.len())
                .map(|k| group[i][k].iter().map(|c| c.apply(&g[k])).collect())
                .collect();
            if !group.contains(&prod) {
                group.push(prod);
            }
        }
        i += 1;
    }
    (0..dims.len())
        .map(|k| {
            let mut total = Scalar::zero();
            for g in &group {
                for (j, col) in g[k].iter().enumerate() {
                    total += col.get(j).cloned().unwrap_or_else(Scalar::zero);
                }
            }
            let avg = total / int(group.len() as i64);
            avg.to_integer().try_into().unwrap()
        })
        .collect()
}

fn maschke() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..100 {
        let n = 2 + trial % 2;
        let (c, actions) = random_group_complex(&mut rng, n, 6, 3);
        let lhs: Vec<usize> = homology(&coinvariants(&c, &actions).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|h| h.dim)
            .collect();
        let hm = homology_with_action(&c, &actions).map_err(|e| e.to_string())?;
        let dims: Vec<usize> = hm.groups.iter().map(|g| g.dim).collect();
        let rhs = invariant_dims(&hm.actions, &dims[..c.top()]);
        ensure(lhs == rhs, || format!("trial {trial} over Σ{n}: H(M_G) = {lhs:?}, H(M)_G = {rhs:?}"))?;
    }
    Ok("100 random complexes over Σ2 and Σ3".into())
}

fn check_resolution(res: &CategoryResolution) -> Result<usize, String> {
    ensure(res.square_defects().is_empty(), || format!("{}: d² ≠ 0", res.name))?;
    let report = verify_resolution(res, None);
    ensure(!report.truncated && report.pass(), || format!("{}: {report:?}", res.name))?;
    for s in &report.slices {
        ensure(s.complete && s.homology.first().copied().unwrap_or(0) == s.morphisms, || format!("{}: slice {s:?}", res.name))?;
        ensure(s.homology.iter().skip(1).all(|&h| h == 0), || format!("{}: slice {s:?}", res.name))?;
    }
    Ok(report.slices.len())
}

fn category_resolutions() -> Outcome {
    let mut slices = 0;
    let mut names = Vec::new();
    for cat in ["cube", "two-arrow", "single-morphism"] {
        for res in builtin_resolutions(cat).map_err(|e| e.to_string())? {
            slices += check_resolution(&res)?;
            names.push(res.name);
        }
    }
    Ok(format!("{} ({slices} slices)", names.join(", ")))
}

fn barcobar() -> Outcome {
    let mut out = Vec::new();
    for cat in ["two-arrow", "cube"] {
        let res = bar_cobar(&builtin_category(cat).unwrap(), None).map_err(|e| e.to_string())?;
        let slices = check_resolution(&res)?;
        out.push(format!("{cat}: {} chains, {slices} slices", res.generators().len()));
    }
    Ok(out.join("; "))
}

fn chi() -> Outcome {
    for cat in ["two-arrow", "cube"] {
        let res = bar_cobar(&builtin_category(cat).unwrap(), None).map_err(|e| e.to_string())?;
        let (chi, convention) = validated_barcobar_chi2(&res).map_err(|e| e.to_string())?;
        let raw = verify_c1_c6(&res, &chi, 3);
        for c in ["C2", "C3", "C4", "C5", "C6"] {
            ensure(raw.condition(c).is_some_and(|r| r.pass), || format!("{cat} ({convention:?}): {raw:?}"))?;
        }
        let defects = coassociativity_defects(&res, &chi);
        ensure(defects.is_empty(), || format!("{cat}: coassociativity fails on {defects:?}"))?;
        let sym = verify_c1_c6(&res, &chi.symmetrized(&res), 3);
        ensure(sym.pass(), || format!("{cat} symmetrized: {sym:?}"))?;
    }
    let res = builtin_resolution("single-morphism/homotopy").unwrap();
    let chi = chi_construct(&res, 2, 1).map_err(|e| format!("dH = f - g: {e}"))?;
    ensure(verify_c1_c6(&res, &chi, 3).pass(), || "dH = f - g: (C1)-(C6)".into())?;
    let bad = counterexample_resolution().unwrap();
    let a = &bad.alphabet;
    let g = |name: &str| OperadElement::generator(a, bad.gen(name).unwrap());
    let cycle = TensorElement::power(&g("f"), 2).add(&TensorElement::power(&g("g"), 2));
    match chi_construct(&bad, 2, 1) {
        Err(Error::NoSolution { witness, .. }) if witness.contains(&cycle.display(a)) => {
            Ok(format!("bar-cobar χ2 on two-arrow and cube; dH = f + g gives NoSolution at {}", cycle.display(a)))
        }
        other => Err(format!("dH = f + g: expected NoSolution, got {other:?}")),
    }
}

/// Summary line and JSON output of one resolution.
fn resolve(res: CategoryResolution) -> Result<(String, String), String> {
    let config = ResolverConfig {
        max_arity: 3,
        max_degree: 2,
        jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        ..ResolverConfig::default()
    };
    let grid = KoszulGeneratorGrid::ass(3).map_err(|e| e.to_string())?;
    let name = res.name.clone();
    let d = DInfinity::build(grid, res, config).map_err(|e| format!("{name}: {e}"))?;
    let report = d.verify().map_err(|e| format!("{name}: {e}"))?;
    let checks = [
        ("ω = 0 in arity 2", &report.omega_arity_two_zero),
        ("ω in the ideal", &report.omega_in_ideal),
        ("d² = 0", &report.d_squared),
        ("Φ chain map", &report.phi_chain_map),
        ("slice homology", &report.slice_homology),
    ];
    for (what, c) in checks {
        ensure(c.pass && c.checked > 0, || format!("{name}: {what}: {c:?}"))?;
    }
    // slice dimensions of Ass over the category: n! times the hom-set sizes
    let cat = &d.res.category;
    for s in &report.slices {
        let out = cat.object(&s.out).unwrap();
        let homs: usize = s.ins.iter().map(|v| cat.hom(cat.object(v).unwrap(), out).len()).product();
        let expected = (1..=s.ins.len()).product::<usize>() * homs;
        ensure(s.homology[0] == expected && s.expected[0] == expected, || format!("{name}: slice {s:?}, expected H0 {expected}"))?;
    }
    let json = serde_json::to_string_pretty(&d.to_json(&report)).unwrap();
    Ok((format!("{name}: {} generators, {} ω, {} slices", d.alphabet.len(), d.omega.len(), report.slices.len()), json))
}

fn resolver(cube_json: &mut Option<String>) -> Outcome {
    let single = builtin_category("single-morphism").unwrap();
    let cases = [
        builtin_resolution("single-morphism/trivial").unwrap(),
        bar_cobar(&single, None).map_err(|e| e.to_string())?,
        builtin_resolution("cube").unwrap(),
    ];
    let mut out = Vec::new();
    for (i, res) in cases.into_iter().enumerate() {
        let (summary, json) = resolve(res)?;
        out.push(format!("({}) {summary}", ['a', 'b', 'c'][i]));
        if i == 2 {
            *cube_json = Some(json);
        }
    }
    Ok(out.join("; "))
}

fn koszul_grid() -> Outcome {
    let grid = KoszulGeneratorGrid::ass(8).map_err(|e| e.to_string())?;
    for (k, a, d) in grid.entries() {
        let g = &grid.resolution.generators[k - 1];
        ensure(a == k + 1 && d + 1 == k && grid.a(k) == k + 1 && grid.d(k) == k as isize - 1, || format!("k = {k}: a = {a}, d = {d}"))?;
        ensure(g.arity == k + 1 && g.degree + 1 == k && g.name == format!("mu{}", k + 1), || format!("generator {} off the grid", g.name))?;
    }
    Ok(format!("a_k = k+1, d_k = k-1 for k = 1..{}", grid.entries().len()))
}

fn determinism(first: &Option<String>) -> Outcome {
    let first = first.as_ref().ok_or("criterion 7(c) produced no output")?;
    let (_, second) = resolve(builtin_resolution("cube").unwrap())?;
    ensure(first.as_bytes() == second.as_bytes(), || "the two runs differ".into())?;
    Ok(format!("{} bytes identical", first.len()))
}

fn run(n: usize, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; over the {}s limit", limit.as_secs())),
        Err(e) => (false, e),
    };
    println!("{} criterion {n}: {detail} ({:.2}s)", if pass { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    pass
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut cube_json = None;
    let results = [
        run(1, secs(1), permutations),
        run(2, secs(60), kunneth),
        run(3, secs(30), maschke),
        run(4, secs(10), category_resolutions),
        run(5, secs(60), barcobar),
        run(6, secs(60), chi),
        run(7, secs(300), || resolver(&mut cube_json)),
        run(8, secs(1), koszul_grid),
        run(9, secs(300), || determinism(&cube_json)),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
