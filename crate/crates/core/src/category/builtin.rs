use super::{CategoryResolution, FiniteCategory};
use crate::error::{Error, Result};

pub const BUILTIN_CATEGORIES: [&str; 5] = ["trivial", "single-morphism", "two-arrow", "cube", "iso"];

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn mor(name: &str, src: &str, tgt: &str) -> (String, String, String) {
    (name.into(), src.into(), tgt.into())
}

/// Cube vertex `k` is the subset of `{0,1,2}` with bit mask `k - 1`; there is
/// one morphism `ab: b → a` whenever `b ⊊ a`.
fn cube() -> Result<FiniteCategory> {
    let objects: Vec<String> = (1..=8).map(|k| k.to_string()).collect();
    let below = |b: usize, a: usize| b != a && (b - 1) & !(a - 1) == 0;
    let mut morphisms = Vec::new();
    let mut rules = Vec::new();
    for a in 1..=8 {
        for b in 1..=8 {
            if below(b, a) {
                morphisms.push(mor(&format!("{a}{b}"), &b.to_string(), &a.to_string()));
                for c in 1..=8 {
                    if below(c, b) {
                        rules.push((format!("{a}{b}"), format!("{b}{c}"), format!("{a}{c}")));
                    }
                }
            }
        }
    }
    FiniteCategory::new(objects, morphisms, rules)
}

pub fn builtin_category(name: &str) -> Result<FiniteCategory> {
    match name {
        "trivial" => FiniteCategory::new(strings(&["V"]), vec![], vec![]),
        "single-morphism" => FiniteCategory::new(strings(&["V1", "V2"]), vec![mor("f", "V1", "V2")], vec![]),
        "two-arrow" => FiniteCategory::new(
            strings(&["V1", "V2", "V3"]),
            vec![mor("f", "V1", "V2"), mor("g", "V2", "V3"), mor("h", "V1", "V3")],
            vec![("g".into(), "f".into(), "h".into())],
        ),
        "cube" => cube(),
        "iso" => FiniteCategory::new(
            strings(&["V1", "V2"]),
            vec![mor("f", "V1", "V2"), mor("g", "V2", "V1")],
            vec![
                ("f".into(), "g".into(), "id_V2".into()),
                ("g".into(), "f".into(), "id_V1".into()),
            ],
        ),
        _ => Err(Error::Schema(format!("unknown built-in category {name:?}"))),
    }
}

/// A resolution with one degree-0 generator per listed morphism.
fn with_morphisms(name: &str, cat: &FiniteCategory, mors: &[&str]) -> Result<CategoryResolution> {
    let mut res = CategoryResolution::new(name, cat.clone());
    for m in mors {
        let i = cat.morphism(m).expect("built-in morphism");
        let (s, t) = (cat.morphisms[i].src, cat.morphisms[i].tgt);
        res.add_generator(m, 0, s, t, Some(i))?;
    }
    Ok(res)
}

fn single_homotopy(name: &str, sign: i64) -> Result<CategoryResolution> {
    let cat = builtin_category("single-morphism")?;
    let mut res = with_morphisms(name, &cat, &["f"])?;
    res.add_generator("g", 0, 0, 1, Some(0))?;
    res.add_generator("H", 1, 0, 1, None)?;
    res.set_d("H", &[(1, &["f"]), (sign, &["g"])])?;
    Ok(res)
}

/// The single-morphism resolution with `dH = f + g`, which violates the
/// standing assumptions.
pub fn counterexample_resolution() -> Result<CategoryResolution> {
    single_homotopy("single-morphism/counterexample", 1)
}

fn cube_resolution() -> Result<CategoryResolution> {
    let cat = builtin_category("cube")?;
    let edges = ["21", "31", "51", "42", "62", "43", "73", "84", "65", "75", "86", "87"];
    let mut res = with_morphisms("cube", &cat, &edges)?;
    let faces = ["4321", "6521", "7531", "8642", "8743", "8765"];
    for f in faces {
        let v: Vec<char> = f.chars().collect();
        let obj = |c: char| cat.object(&c.to_string()).expect("cube vertex");
        res.add_generator(f, 1, obj(v[3]), obj(v[0]), None)?;
        let e = |x: char, y: char| format!("{x}{y}");
        let (ac, cd, ab, bd) = (e(v[0], v[2]), e(v[2], v[3]), e(v[0], v[1]), e(v[1], v[3]));
        res.set_d(f, &[(1, &[&ac, &cd]), (-1, &[&ab, &bd])])?;
    }
    res.add_generator("H", 2, obj_of(&cat, "1"), obj_of(&cat, "8"), None)?;
    res.set_d(
        "H",
        &[
            (1, &["84", "4321"]),
            (1, &["8743", "31"]),
            (-1, &["8642", "21"]),
            (1, &["87", "7531"]),
            (-1, &["8765", "51"]),
            (-1, &["86", "6521"]),
        ],
    )?;
    Ok(res)
}

fn obj_of(cat: &FiniteCategory, name: &str) -> usize {
    cat.object(name).expect("built-in object")
}

/// The resolutions built into the library for a built-in category.
pub fn builtin_resolutions(name: &str) -> Result<Vec<CategoryResolution>> {
    let cat = builtin_category(name)?;
    Ok(match name {
        "trivial" => vec![CategoryResolution::new("trivial", cat)],
        "single-morphism" => vec![
            with_morphisms("single-morphism/trivial", &cat, &["f"])?,
            single_homotopy("single-morphism/homotopy", -1)?,
        ],
        "two-arrow" => {
            let mut full = with_morphisms("two-arrow/presentation", &cat, &["f", "g", "h"])?;
            full.add_generator("H", 1, 0, 2, None)?;
            full.set_d("H", &[(1, &["g", "f"]), (-1, &["h"])])?;
            vec![full, with_morphisms("two-arrow/minimal", &cat, &["f", "g"])?]
        }
        "cube" => vec![cube_resolution()?],
        _ => vec![],
    })
}

/// A built-in resolution by its full name, e.g. `single-morphism/homotopy`,
/// or by category name for the first one listed.
pub fn builtin_resolution(name: &str) -> Result<CategoryResolution> {
    if name == "single-morphism/counterexample" {
        return counterexample_resolution();
    }
    let cat = name.split('/').next().unwrap_or(name);
    builtin_resolutions(cat)?
        .into_iter()
        .find(|r| r.name == name || cat == name)
        .ok_or_else(|| Error::Schema(format!("unknown built-in resolution {name:?}")))
}
