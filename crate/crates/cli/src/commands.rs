use serde_json::{json, Value};

use detchern::cech::{cohomology_group, de_rham_cohomology, Base, SheafSpec};
use detchern::charclass::{char_poly, char_poly_newton, char_poly_split};
use detchern::crystalline::{crystal_obstruction_line, dp_char_poly, ChartLift};
use detchern::{Error, Fp, Integer, Rational, Result, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::input::{build_bundle, Source};
use crate::report::Outcome;

pub struct CohomologyArgs {
    pub sheaf: String,
    pub forms: usize,
    pub q: Option<usize>,
    pub de_rham: bool,
    pub n: Option<usize>,
    pub bound: Option<i32>,
}

pub struct ChernArgs {
    pub bundle: String,
    pub split: bool,
}

pub struct CrystallineArgs {
    pub bundle: String,
    pub classes: Option<Vec<i64>>,
    pub truncation: Option<usize>,
    pub lift_seed: Option<u64>,
}

pub fn h_power(k: usize) -> String {
    match k {
        0 => "1".into(),
        1 => "h".into(),
        2 => "h²".into(),
        3 => "h³".into(),
        _ => format!("h^{k}"),
    }
}

fn torsion_json(t: &[Integer]) -> Value {
    Value::Array(t.iter().map(|n| Value::String(n.to_string())).collect())
}

pub fn cohomology(src: &Source, args: &CohomologyArgs) -> Result<Outcome> {
    match src.base() {
        Base::Z => cohomology_on::<Integer>(src, (), args),
        Base::Q => cohomology_on::<Rational>(src, (), args),
        Base::Fp(p) => cohomology_on::<Fp>(src, p, args),
    }
}

fn cohomology_on<S: Scalar>(src: &Source, params: S::Params, args: &CohomologyArgs) -> Result<Outcome> {
    let x = src.scheme::<S>(params)?;
    let mut text = Vec::new();
    let results = if args.de_rham {
        let rep = de_rham_cohomology(&x, args.bound)?;
        let top = 2 * x.dim();
        let degrees: Vec<usize> = match args.n {
            Some(n) => vec![n],
            None => (0..=top).collect(),
        };
        let groups: Vec<Value> = degrees
            .iter()
            .map(|&n| {
                let rank = rep.rank(n as i64);
                let torsion = rep.torsion(n as i64);
                text.push(format!("H^{n}_dR({}) : rank {rank}{}", src.label, torsion_text(torsion)));
                json!({"n": n, "rank": rank, "torsion": torsion_json(torsion)})
            })
            .collect();
        json!({"scheme": src.label, "de_rham": true, "groups": groups})
    } else {
        let sheaf = if args.sheaf.trim() == "O" {
            SheafSpec::forms(args.forms)
        } else {
            SheafSpec::twisted(args.forms, build_bundle(src, &x, &args.sheaf)?)
        };
        let qs: Vec<usize> = match args.q {
            Some(q) => vec![q],
            None => (0..x.num_charts()).collect(),
        };
        let name = if args.forms == 0 {
            args.sheaf.clone()
        } else {
            format!("Ω^{} ⊗ {}", args.forms, args.sheaf)
        };
        let mut groups = Vec::new();
        for q in qs {
            let g = cohomology_group(&x, &sheaf, q, args.bound)?;
            let weights: Vec<Value> = g.weights.iter().map(|w| json!(w)).collect();
            text.push(format!(
                "H^{q}({}, {name}) : rank {}{}{}",
                src.label,
                g.group.rank,
                torsion_text(&g.group.torsion),
                if g.basis.is_empty() {
                    String::new()
                } else {
                    format!(", {} basis cocycles in weights {:?}", g.basis.len(), g.weights)
                }
            ));
            groups.push(json!({
                "q": q,
                "rank": g.group.rank,
                "torsion": torsion_json(&g.group.torsion),
                "basis_cocycles": g.basis.len(),
                "weights": weights,
            }));
        }
        json!({"scheme": src.label, "sheaf": name, "forms": args.forms, "groups": groups})
    };
    Ok(Outcome {
        base: src.base().to_string(),
        results,
        text,
        passed: true,
    })
}

fn torsion_text(t: &[Integer]) -> String {
    if t.is_empty() {
        String::new()
    } else {
        let parts: Vec<String> = t.iter().map(|n| format!("Z/{n}")).collect();
        format!(", torsion {}", parts.join(" ⊕ "))
    }
}

pub fn chern(src: &Source, args: &ChernArgs) -> Result<Outcome> {
    match src.base() {
        Base::Z => chern_on::<Integer>(src, (), args),
        Base::Q => chern_on::<Rational>(src, (), args),
        Base::Fp(p) => chern_on::<Fp>(src, p, args),
    }
}

/// `c_1 = 3·h, c_2 = 2·h²`, or `c = 1` when every higher class vanishes.
pub fn format_classes<S: Scalar>(coords: &[S]) -> String {
    let parts: Vec<String> = coords
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("c_{k} = {c}·{}", h_power(k)))
        .collect();
    if parts.is_empty() {
        "c = 1".into()
    } else {
        parts.join(", ")
    }
}

fn chern_on<S: Scalar>(src: &Source, params: S::Params, args: &ChernArgs) -> Result<Outcome> {
    let x = src.scheme::<S>(params)?;
    let e = build_bundle(src, &x, &args.bundle)?;
    let (path, c) = if args.split {
        ("split", char_poly_split(&e)?)
    } else {
        ("newton", char_poly_newton(&e)?)
    };
    let coords = c.coordinates_on_h()?;
    let line = format_classes(&coords);
    let classes: serde_json::Map<String, Value> = coords
        .iter()
        .enumerate()
        .map(|(k, v)| (format!("c_{k}"), Value::String(v.to_string())))
        .collect();
    Ok(Outcome {
        base: src.base().to_string(),
        results: json!({
            "scheme": src.label,
            "bundle": args.bundle,
            "rank": e.rank(),
            "path": path,
            "basis": (0..coords.len()).map(h_power).collect::<Vec<_>>(),
            "classes": classes,
            "summary": line,
        }),
        text: vec![format!("{} on {} (rank {}, {path} path): {line}", args.bundle, src.label, e.rank())],
        passed: true,
    })
}

pub fn crystalline(src: &Source, p: Option<u64>, args: &CrystallineArgs) -> Result<Outcome> {
    let p = match (p, src.base()) {
        (Some(p), Base::Fp(q)) if p != q => {
            return Err(Error::InvalidArgument(format!("--p {p} conflicts with base F{q}")))
        }
        (Some(p), _) => {
            if !detchern::rings::is_prime(p) {
                return Err(Error::InvalidArgument(format!("{p} is not prime")));
            }
            p
        }
        (None, Base::Fp(q)) => q,
        (None, _) => return Err(Error::NotFp),
    };
    let x = src.scheme::<Fp>(p)?;
    let l = build_bundle(src, &x, &args.bundle)?;
    let lift = match args.lift_seed {
        Some(seed) => ChartLift::perturbed(&x, &mut ChaCha8Rng::seed_from_u64(seed), 3)?,
        None => ChartLift::canonical(&x)?,
    };
    let ob = crystal_obstruction_line(&l, &lift, None)?;
    let alpha = ob.coordinate_on_h()?;
    let c = char_poly(&l)?;
    let c1 = c.c(1);
    let c1_coord = c.coordinates_on_h()?[1].clone();
    let equal = ob.de_rham_equal(&c1)?;

    // divided-power series of the split classes, as coordinates on h^k
    let classes: Vec<Fp> = match &args.classes {
        Some(v) => v.iter().map(|&a| Fp::new(a, p)).collect(),
        None => vec![alpha.clone()],
    };
    let range = x.dim().min(classes.len());
    let n = args.truncation.unwrap_or(range);
    if n > x.dim() {
        return Err(Error::InvalidArgument(format!(
            "truncation {n} exceeds the cohomological range {} of {}",
            x.dim(),
            src.label
        )));
    }
    let series = dp_char_poly(&p, &classes, n)?;
    let signed: Vec<String> = series.coeffs().iter().map(|c| c.to_string()).collect();
    let unsigned: Vec<String> = series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { (-c.clone()).to_string() } else { c.to_string() })
        .collect();
    let verdict = if equal { "equal" } else { "different" };
    let text = vec![
        format!("α({}) = {alpha}·h, c_1^dR = {c1_coord}·h, verdict: {verdict}", args.bundle),
        format!(
            "det(1 − tα) = Σ a_k t^k/k! with a = ({}); k!·c_k = ({})",
            signed.join(", "),
            unsigned.join(", ")
        ),
    ];
    Ok(Outcome {
        base: format!("F{p}"),
        results: json!({
            "scheme": src.label,
            "bundle": args.bundle,
            "p": p,
            "lift": if args.lift_seed.is_some() { "perturbed" } else { "canonical" },
            "alpha": alpha.to_string(),
            "c1_dR": c1_coord.to_string(),
            "equal": equal,
            "dp_series": {
                "classes": classes.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "truncation": n,
                "signed": signed,
                "unsigned": unsigned,
            },
        }),
        text,
        passed: true,
    })
}
