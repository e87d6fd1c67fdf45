use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Value};
use vknot_core::counting::{
    self, almost_virtual_count, bell, fix_count, fragmented_count, fragmented_count_by_parts,
    set_partitions, v_estimate, vcount,
};
use vknot_core::gauss::parse_gauss;
use vknot_core::petal::{gauss_from_petal, petal_from_gauss, segment_table, PetalError};
use vknot_core::render::{render_crossing_svg, render_petal_svg};
use vknot_core::{Census, CrossingType, MulticrossingSpec, PetalDiagram, RenderOptions, Validity};

use crate::report::{CliReport, Status};

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Globals {
    pub oracle: bool,
    pub census: Census,
}

fn dec(x: &BigUint) -> String {
    x.to_str_radix(10)
}

fn read_input(path: &Path) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

fn write_output(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn type_summary(t: &CrossingType) -> Value {
    let mut v = json!({
        "notation": t.to_spec().to_string(),
        "parts": t.parts(),
    });
    if let Ok(c) = t.classify_triple() {
        v["triple_type"] = json!(c.to_string());
    }
    if t.is_almost_virtual() {
        v["almost_virtual"] = json!({
            "distance": t.almost_virtual_distance(false).unwrap(),
            "reflection_class": t.almost_virtual_distance(true).unwrap(),
        });
    }
    v
}

pub fn validate(text: &str) -> CliReport {
    const CMD: &str = "validate";
    let spec: MulticrossingSpec = match text.parse() {
        Ok(s) => s,
        Err(e) => return CliReport::invalid(CMD, e.to_string()),
    };
    if let Validity::Invalid { offending } = spec.validate() {
        let mut r = CliReport::invalid(
            CMD,
            format!("forbidden triples {offending:?}: one virtual and two classical crossings"),
        );
        r.payload = json!({
            "notation": spec.to_string(),
            "valid": false,
            "forbidden_triples": offending,
        });
        return r;
    }
    let ty = spec.to_type().expect("validated above");
    let mut payload = json!({
        "notation": spec.to_string(),
        "n": spec.n(),
        "valid": true,
        "classes": ty.parts(),
        "classical_pairs": spec.classical_pairs().map(|(i, j)| [i, j]).collect::<Vec<_>>(),
        "virtual_pairs": spec.virtual_pairs().map(|(i, j)| [i, j]).collect::<Vec<_>>(),
        "canonical": ty.canonical(false).to_string(),
    });
    let mut text = vec![
        format!("{spec}: valid virtual {}-crossing", spec.n()),
        format!("classes: {ty}"),
    ];
    if spec.n() == 2 {
        let kind = if ty.parts().len() == 1 {
            "classical 2-crossing"
        } else {
            "virtual 2-crossing"
        };
        payload["kind"] = json!(kind);
        text.push(format!("kind: {kind}"));
    }
    if let Ok(c) = ty.classify_triple() {
        payload["triple_type"] = json!(c.to_string());
        text.push(format!("triple type: {c}"));
    }
    if ty.is_almost_virtual() {
        let d = ty.almost_virtual_distance(false).unwrap();
        let e = ty.almost_virtual_distance(true).unwrap();
        payload["almost_virtual"] = json!({ "distance": d, "reflection_class": e });
        text.push(format!(
            "almost virtual: distance {d}, reflection class {e}"
        ));
    }
    for p in ty.resolve() {
        text.push(format!("  {p}"));
    }
    CliReport::ok(CMD, payload, text)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CountFlags {
    pub bell: bool,
    pub fragmented: bool,
    pub types: bool,
    pub almost: bool,
    pub estimate: bool,
}

impl CountFlags {
    fn any(&self) -> bool {
        self.bell || self.fragmented || self.types || self.almost || self.estimate
    }

    pub fn all() -> Self {
        Self {
            bell: true,
            fragmented: true,
            types: true,
            almost: true,
            estimate: true,
        }
    }
}

pub fn count(n: usize, flags: CountFlags, g: Globals) -> CliReport {
    const CMD: &str = "count";
    let flags = if flags.any() {
        flags
    } else {
        CountFlags::all()
    };
    if n < 2 {
        return CliReport::invalid(CMD, format!("n must be at least 2, got {n}"));
    }
    let mut payload = json!({ "n": n });
    let mut text = vec![format!("n = {n}")];
    if flags.bell {
        let b = bell(n);
        payload["bell"] = json!(dec(&b));
        text.push(format!("bell: {b}"));
    }
    if flags.fragmented {
        let f = fragmented_count(n);
        let by_parts: Vec<String> = (1..=n)
            .map(|k| dec(&fragmented_count_by_parts(n, k)))
            .collect();
        payload["fragmented"] = json!(dec(&f));
        payload["fragmented_by_parts"] = json!(by_parts);
        text.push(format!("fragmented: {f}"));
    }
    let v = match vcount(n) {
        Ok(v) => v,
        Err(e) => return CliReport::internal(CMD, e.to_string()),
    };
    if flags.types {
        let fix: serde_json::Map<String, Value> = counting::divisors(n)
            .into_iter()
            .map(|d| (d.to_string(), json!(dec(&fix_count(n, d).unwrap()))))
            .collect();
        payload["vcount"] = json!(dec(&v));
        payload["fix_by_divisor"] = Value::Object(fix);
        text.push(format!("types up to rotation: {v}"));
    }
    if flags.almost {
        let rot = almost_virtual_count(n, false).unwrap();
        let refl = almost_virtual_count(n, true).unwrap();
        payload["almost_virtual"] = json!({ "rotation": rot, "rotation_reflection": refl });
        text.push(format!(
            "almost virtual: {rot} up to rotation, {refl} with reflection"
        ));
    }
    if flags.estimate {
        let e = v_estimate(n).unwrap();
        let ratio = e.ratio_of(&v);
        payload["estimate"] = json!(e.to_string());
        payload["ratio"] = json!(format!("{ratio:.9}"));
        text.push(format!(
            "asymptotic estimate: {e} (exact/estimate = {ratio:.9})"
        ));
    }
    if g.oracle {
        match oracle(n, &v, g.census) {
            Ok((o, agrees)) => {
                payload["oracle"] = o;
                if !agrees {
                    let mut r =
                        CliReport::internal(CMD, "brute-force oracle disagrees with formulas");
                    r.payload = payload;
                    return r;
                }
                text.push("oracle: brute force agrees".into());
            }
            Err(e) => return CliReport::invalid(CMD, e),
        }
    }
    CliReport::ok(CMD, payload, text)
}

fn oracle(n: usize, v: &BigUint, census: Census) -> Result<(Value, bool), String> {
    let labeled = census.labeled_count(n).map_err(|e| e.to_string())?;
    let orbits = census
        .enumerate_types(n, false)
        .map_err(|e| e.to_string())?
        .len();
    let partitions = set_partitions(n).len();
    let mut fixed = serde_json::Map::new();
    let mut agrees = BigUint::from(labeled) == fragmented_count(n)
        && BigUint::from(orbits) == *v
        && BigUint::from(partitions) == bell(n);
    for d in counting::divisors(n) {
        let f = census.fixed_count(n, d).map_err(|e| e.to_string())?;
        agrees &= BigUint::from(f) == fix_count(n, d).unwrap();
        fixed.insert(d.to_string(), json!(f.to_string()));
    }
    Ok((
        json!({
            "labeled": labeled.to_string(),
            "orbits": orbits.to_string(),
            "set_partitions": partitions.to_string(),
            "fixed_by_divisor": fixed,
            "agrees": agrees,
        }),
        agrees,
    ))
}

pub fn enumerate(n: usize, reflect: bool, g: Globals) -> CliReport {
    const CMD: &str = "enumerate";
    let types = match g.census.enumerate_types(n, reflect) {
        Ok(t) => t,
        Err(e) => return CliReport::invalid(CMD, e.to_string()),
    };
    let entries: Vec<Value> = types.iter().map(type_summary).collect();
    let mut text = vec![format!(
        "{} types of virtual {n}-crossings up to rotation{}",
        types.len(),
        if reflect { " and reflection" } else { "" }
    )];
    for (t, e) in types.iter().zip(&entries) {
        let mut line = format!("{}  {t}", e["notation"].as_str().unwrap());
        if let Some(c) = e.get("triple_type") {
            line.push_str(&format!("  Type {}", c.as_str().unwrap()));
        }
        text.push(line);
    }
    let payload = json!({ "n": n, "reflect": reflect, "count": types.len(), "types": entries });
    CliReport::ok(CMD, payload, text)
}

pub fn petal(
    code: &str,
    out: Option<&PathBuf>,
    svg: Option<&PathBuf>,
    opts: &RenderOptions,
) -> CliReport {
    const CMD: &str = "petal";
    let code = match parse_gauss(code) {
        Ok(c) => c.canonicalize(),
        Err(e) => return CliReport::invalid(CMD, e.to_string()),
    };
    let diagram = match petal_from_gauss(&code) {
        Ok(d) => d,
        Err(e) => return CliReport::internal(CMD, e.to_string()),
    };
    let table = segment_table(&code);
    let json_text = serde_json::to_string(&diagram).unwrap() + "\n";
    if let Some(path) = out {
        if let Err(e) = write_output(path, &json_text) {
            return CliReport::invalid(CMD, e);
        }
    }
    if let Some(path) = svg {
        let text = match render_petal_svg(&diagram, opts) {
            Ok(s) => s,
            Err(e) => return CliReport::internal(CMD, e.to_string()),
        };
        if let Err(e) = write_output(path, &text) {
            return CliReport::invalid(CMD, e);
        }
    }
    let payload = json!({
        "code": code.to_string(),
        "petals": diagram.petals,
        "heights": diagram.heights,
        "classical_pairs": diagram.classical_pairs,
        "segment_table": table.assignments,
    });
    let text = vec![
        format!("code: {code}"),
        format!("petals: {}", diagram.petals),
        format!("diagram: {}", json_text.trim_end()),
    ];
    CliReport::ok(CMD, payload, text)
}

fn load_diagram(path: &Path) -> Result<PetalDiagram, String> {
    let text = read_input(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let d: PetalDiagram =
        serde_json::from_str(&text).map_err(|e| format!("malformed petal JSON: {e}"))?;
    let d = d.normalized();
    let v = d.validate();
    if !v.is_empty() {
        let msgs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        return Err(format!("invalid petal diagram: {}", msgs.join("; ")));
    }
    Ok(d)
}

pub fn recover(path: &Path) -> CliReport {
    const CMD: &str = "recover";
    let d = match load_diagram(path) {
        Ok(d) => d,
        Err(e) => return CliReport::invalid(CMD, e),
    };
    match gauss_from_petal(&d) {
        Ok(code) => CliReport::ok(
            CMD,
            json!({ "code": code.to_string(), "petals": d.petals }),
            vec![code.to_string()],
        ),
        Err(e @ PetalError::Unsupported(_)) => {
            CliReport::invalid(CMD, format!("unsupported diagram: {e}"))
        }
        Err(e) => CliReport::internal(CMD, e.to_string()),
    }
}

fn roundtrip_one(code: &str) -> (Status, Value) {
    let code = match parse_gauss(code) {
        Ok(c) => c.canonicalize(),
        Err(e) => {
            return (
                Status::InvalidInput,
                json!({ "input": code, "error": e.to_string() }),
            )
        }
    };
    let result = petal_from_gauss(&code).and_then(|d| Ok((d.petals, gauss_from_petal(&d)?)));
    match result {
        Ok((petals, back)) => {
            let equal = back == code;
            let status = if equal {
                Status::Ok
            } else {
                Status::InternalError
            };
            (
                status,
                json!({
                    "code": code.to_string(),
                    "recovered": back.to_string(),
                    "petals": petals,
                    "equal": equal,
                }),
            )
        }
        Err(e) => (
            Status::InternalError,
            json!({ "code": code.to_string(), "error": e.to_string() }),
        ),
    }
}

pub fn roundtrip(code: Option<&str>, batch: Option<&PathBuf>) -> CliReport {
    const CMD: &str = "roundtrip";
    match (code, batch) {
        (Some(code), None) => {
            let (status, payload) = roundtrip_one(code);
            let text = vec![format!(
                "{} -> {} petals -> {}: {}",
                payload["code"].as_str().unwrap_or(code),
                payload["petals"],
                payload["recovered"].as_str().unwrap_or("?"),
                if status == Status::Ok {
                    "match"
                } else {
                    "MISMATCH"
                }
            )];
            let mut r = CliReport::ok(CMD, payload, text);
            r.status = status;
            if status != Status::Ok {
                r.diagnostics.push(match status {
                    Status::InvalidInput => r.payload["error"].as_str().unwrap_or("").to_string(),
                    _ => "round trip did not reproduce the input code".into(),
                });
            }
            r
        }
        (None, Some(path)) => {
            let input = match read_input(path) {
                Ok(s) => s,
                Err(e) => {
                    return CliReport::invalid(CMD, format!("cannot read {}: {e}", path.display()))
                }
            };
            let lines: Vec<&str> = input.lines().collect();
            let results: Vec<(Status, Value)> =
                lines.par_iter().map(|l| roundtrip_one(l)).collect();
            let passed = results.iter().filter(|(s, _)| *s == Status::Ok).count();
            let status = results
                .iter()
                .map(|(s, _)| *s)
                .max_by_key(|s| s.exit_code())
                .unwrap_or(Status::Ok);
            let mut diagnostics = Vec::new();
            for (i, (s, v)) in results.iter().enumerate() {
                if *s != Status::Ok {
                    diagnostics.push(format!("line {}: {}", i + 1, v));
                }
            }
            let text = vec![format!("{passed}/{} codes round-trip", results.len())];
            CliReport {
                command: CMD,
                status,
                payload: json!({
                    "total": results.len(),
                    "passed": passed,
                    "results": results.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
                }),
                diagnostics,
                text,
            }
        }
        _ => CliReport::invalid(CMD, "give exactly one of a code or --batch FILE"),
    }
}

pub enum RenderSource<'a> {
    Petal(&'a Path),
    Code(&'a str),
    Crossing(&'a str),
}

pub fn render(src: RenderSource<'_>, out: Option<&PathBuf>, opts: &RenderOptions) -> CliReport {
    const CMD: &str = "render";
    let svg = match src {
        RenderSource::Petal(path) => match load_diagram(path) {
            Ok(d) => render_petal_svg(&d, opts).map_err(|e| e.to_string()),
            Err(e) => return CliReport::invalid(CMD, e),
        },
        RenderSource::Code(code) => match parse_gauss(code) {
            Ok(c) => match petal_from_gauss(&c) {
                Ok(d) => render_petal_svg(&d, opts).map_err(|e| e.to_string()),
                Err(e) => return CliReport::internal(CMD, e.to_string()),
            },
            Err(e) => return CliReport::invalid(CMD, e.to_string()),
        },
        RenderSource::Crossing(text) => match text.parse::<MulticrossingSpec>() {
            Ok(spec) => render_crossing_svg(&spec, opts).map_err(|e| e.to_string()),
            Err(e) => return CliReport::invalid(CMD, e.to_string()),
        },
    };
    let svg = match svg {
        Ok(s) => s,
        Err(e) => return CliReport::invalid(CMD, e),
    };
    match out {
        Some(path) => {
            if let Err(e) = write_output(path, &svg) {
                return CliReport::invalid(CMD, e);
            }
            CliReport::ok(
                CMD,
                json!({ "out": path.display().to_string(), "bytes": svg.len() }),
                vec![format!("wrote {} ({} bytes)", path.display(), svg.len())],
            )
        }
        None => CliReport::ok(
            CMD,
            json!({ "bytes": svg.len(), "svg": svg }),
            vec![svg.trim_end().to_string()],
        ),
    }
}
