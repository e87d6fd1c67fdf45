//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p vknot-cli --test acceptance`.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use vknot_core::counting::{
    self, bell, fix_count, fragmented_count, v_estimate, valid_pair_pattern_count, vcount,
    vcount_prime,
};
use vknot_core::gauss::parse_gauss;
use vknot_core::petal::{
    crossing_sign, gauss_from_petal, petal_bound, petal_from_gauss, segment_table,
};
use vknot_core::render::{render_crossing_svg, render_petal_svg};
use vknot_core::{Census, Passage, RenderOptions, Sign, SignedGaussCode, Token};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn vcount_values() -> Outcome {
    let want = [2u64, 5, 20, 101, 684, 5377, 49342, 510745, 5894550];
    let start = Instant::now();
    let got: Vec<BigUint> = (2..=10).map(|n| vcount(n).unwrap()).collect();
    let took = start.elapsed();
    for (n, (g, w)) in (2..).zip(got.iter().zip(want)) {
        check(*g == big(w), format!("V_{n} = {g}, expected {w}"))?;
    }
    check(took < Duration::from_secs(1), format!("took {took:?}"))?;
    Ok(format!("V_2..V_10 exact in {took:?}"))
}

fn census_oracle() -> Outcome {
    let census = Census::default();
    let start = Instant::now();
    for n in 2..=8 {
        let orbits = census
            .enumerate_types(n, false)
            .map_err(|e| e.to_string())?
            .len() as u64;
        check(
            big(orbits) == vcount(n).unwrap(),
            format!("n={n}: {orbits} orbits"),
        )?;
        check(
            big(census.labeled_count(n).unwrap()) == fragmented_count(n),
            format!("n={n}: labeled count"),
        )?;
        for d in counting::divisors(n) {
            let f = census.fixed_count(n, d).map_err(|e| e.to_string())?;
            check(
                big(f) == fix_count(n, d).unwrap(),
                format!("n={n} d={d}: fixed {f}"),
            )?;
        }
    }
    Ok(format!(
        "brute force matches for n <= 8 in {:?}",
        start.elapsed()
    ))
}

fn prime_formula() -> Outcome {
    for p in [2, 3, 5, 7, 11, 13] {
        check(
            vcount_prime(p).unwrap() == vcount(p).unwrap(),
            format!("p={p}"),
        )?;
    }
    Ok("p in {2,3,5,7,11,13}".into())
}

fn bell_patterns() -> Outcome {
    let start = Instant::now();
    for n in 1..=7 {
        let c = valid_pair_pattern_count(n);
        check(
            big(c) == bell(n),
            format!("n={n}: {c} valid patterns, bell {}", bell(n)),
        )?;
    }
    Ok(format!("n <= 7 in {:?}", start.elapsed()))
}

fn fragmented_values() -> Outcome {
    check(fragmented_count(2) == big(3), "F_2")?;
    check(fragmented_count(3) == big(13), "F_3")?;
    let mut fact = BigUint::from(1u32);
    for n in 2..=40usize {
        fact *= n;
        let f = fragmented_count(n);
        let v = vcount(n).unwrap();
        check(f >= fact, format!("F_{n} < {n}!"))?;
        check(&f / n <= v && v <= f, format!("bounds fail at n={n}"))?;
    }
    Ok("F_2 = 3, F_3 = 13, bounds hold to n = 40".into())
}

fn three_crossing_census() -> Outcome {
    let types = Census::default()
        .enumerate_types(3, false)
        .map_err(|e| e.to_string())?;
    let mut tally = [0; 3];
    for t in &types {
        tally[t.classify_triple().unwrap() as usize] += 1;
    }
    check(types.len() == 5, format!("{} types", types.len()))?;
    check(tally == [2, 2, 1], format!("breakdown {tally:?}"))?;
    Ok("5 types: 2 Type I, 2 Type II, 1 Type III".into())
}

fn almost_virtual_classes() -> Outcome {
    let census = Census::default();
    for n in 2..=8 {
        let rot = census.enumerate_types(n, false).unwrap();
        let refl = census.enumerate_types(n, true).unwrap();
        let a = rot.iter().filter(|t| t.is_almost_virtual()).count();
        let b = refl.iter().filter(|t| t.is_almost_virtual()).count();
        check(a == n - 1, format!("n={n}: {a} up to rotation"))?;
        check(
            b == n / 2,
            format!("n={n}: {b} up to rotation and reflection"),
        )?;
        let dists: BTreeSet<usize> = rot
            .iter()
            .filter(|t| t.is_almost_virtual())
            .map(|t| t.almost_virtual_distance(false).unwrap())
            .collect();
        check(dists.len() == n - 1, format!("n={n}: distances {dists:?}"))?;
    }
    Ok("n-1 and floor(n/2) for 2 <= n <= 8".into())
}

fn estimate_ratio() -> Outcome {
    let start = Instant::now();
    let r = |n| v_estimate(n).unwrap().ratio_of(&vcount(n).unwrap());
    let (r10, r30) = (r(10), r(30));
    let took = start.elapsed();
    check((0.85..=1.15).contains(&r10), format!("ratio at 10 = {r10}"))?;
    check(
        (r30 - 1.0).abs() < (r10 - 1.0).abs(),
        format!("ratio at 30 = {r30}"),
    )?;
    check(took < Duration::from_secs(1), format!("took {took:?}"))?;
    Ok(format!("ratio {r10:.4} at n=10, {r30:.4} at n=30"))
}

fn petal_construction() -> Outcome {
    let vt = petal_from_gauss(&parse_gauss("O1+U2+U1+O2+").unwrap()).unwrap();
    check(
        vt.petals == 7,
        format!("virtual trefoil: {} petals", vt.petals),
    )?;
    let code = parse_gauss("O1+U2+U1+O3-O2+U3-").unwrap();
    let d = petal_from_gauss(&code).unwrap();
    check(d.petals == 9, format!("table code: {} petals", d.petals))?;
    let table = segment_table(&code);
    let want: Vec<Vec<usize>> = vec![
        vec![1],
        vec![2],
        vec![3, 4],
        vec![5],
        vec![6, 7],
        vec![8, 9],
    ];
    check(
        table.assignments == want,
        format!("segment table {:?}", table.assignments),
    )?;
    let mut rng = StdRng::seed_from_u64(9);
    for n in 0..=12 {
        check(
            petal_bound(n) == if n % 2 == 1 { 3 * n } else { 3 * n + 1 },
            format!("bound {n}"),
        )?;
        for _ in 0..20 {
            let p = petal_from_gauss(&random_code(&mut rng, n)).unwrap().petals;
            check(p == petal_bound(n), format!("n={n}: {p} petals"))?;
        }
    }
    Ok("7 and 9 petals, segment table exact, 3n / 3n+1 for n <= 12".into())
}

/// Random valid code with `n` crossings; labels are arbitrary integers.
fn random_code(rng: &mut StdRng, n: usize) -> SignedGaussCode {
    let mut labels: Vec<u32> = (1..=n as u32).flat_map(|l| [l, l]).collect();
    labels.shuffle(rng);
    let over_first: Vec<bool> = (0..n).map(|_| rng.random_range(0..2) == 0).collect();
    let minus: Vec<bool> = (0..n).map(|_| rng.random_range(0..2) == 0).collect();
    let mut seen = vec![false; n + 1];
    let tokens = labels
        .into_iter()
        .map(|l| {
            let i = l as usize;
            let first = !std::mem::replace(&mut seen[i], true);
            let passage = if over_first[i - 1] == first {
                Passage::Over
            } else {
                Passage::Under
            };
            let sign = if minus[i - 1] {
                Sign::Minus
            } else {
                Sign::Plus
            };
            Token::new(l * 5 + 2, passage, sign)
        })
        .collect();
    SignedGaussCode::new(tokens).unwrap()
}

/// Every canonical code with `n` crossings, built from label sequences in
/// first-appearance form and all passage and sign choices.
fn all_codes(n: u32) -> Vec<SignedGaussCode> {
    fn seqs(next: u32, open: &mut Vec<u32>, cur: &mut Vec<u32>, n: u32, out: &mut Vec<Vec<u32>>) {
        if cur.len() == 2 * n as usize {
            out.push(cur.clone());
            return;
        }
        if next <= n {
            cur.push(next);
            open.push(next);
            seqs(next + 1, open, cur, n, out);
            open.pop();
            cur.pop();
        }
        for i in 0..open.len() {
            let l = open.remove(i);
            cur.push(l);
            seqs(next, open, cur, n, out);
            cur.pop();
            open.insert(i, l);
        }
    }
    let mut all = Vec::new();
    seqs(1, &mut Vec::new(), &mut Vec::new(), n, &mut all);
    let mut out = Vec::new();
    for seq in all {
        for over in 0u32..1 << n {
            for minus in 0u32..1 << n {
                let mut seen = BTreeSet::new();
                let tokens = seq
                    .iter()
                    .map(|&l| {
                        let bit = |m: u32| m >> (l - 1) & 1 == 1;
                        let first = seen.insert(l);
                        let passage = if bit(over) == first {
                            Passage::Over
                        } else {
                            Passage::Under
                        };
                        Token::new(
                            l,
                            passage,
                            if bit(minus) { Sign::Minus } else { Sign::Plus },
                        )
                    })
                    .collect();
                out.push(SignedGaussCode::new(tokens).unwrap());
            }
        }
    }
    out
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let mut exhaustive = 0;
    for n in 0..=3 {
        for code in all_codes(n) {
            let back = gauss_from_petal(&petal_from_gauss(&code).unwrap()).unwrap();
            check(back == code, format!("{code} came back as {back}"))?;
            exhaustive += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(20);
    let random = 600;
    for i in 0..random {
        let code = random_code(&mut rng, 1 + i % 8);
        let back = gauss_from_petal(&petal_from_gauss(&code).unwrap()).unwrap();
        check(
            back == code.canonicalize(),
            format!("{code} came back as {back}"),
        )?;
    }
    Ok(format!(
        "{exhaustive} exhaustive (n <= 3) and {random} random (n <= 8) codes in {:?}",
        start.elapsed()
    ))
}

fn candidate_opposition() -> Outcome {
    let mut configs = 0u64;
    for m in (3..=101).step_by(2) {
        for a in 1..=m {
            for b in 1..m {
                if a == b || a == b + 1 {
                    continue;
                }
                // a as the over segment, then as the under segment
                let s = crossing_sign(a, b, m).unwrap();
                let t = crossing_sign(a, b + 1, m).unwrap();
                check(s != t, format!("m={m} a={a} b={b}"))?;
                let s = crossing_sign(b, a, m).unwrap();
                let t = crossing_sign(b + 1, a, m).unwrap();
                check(s != t, format!("m={m} a={a} b={b} (under)"))?;
                configs += 1;
            }
        }
    }
    Ok(format!("{configs} configurations over odd m <= 101"))
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_vknot"))
        .args(args)
        .output()
        .unwrap();
    assert!(out.status.code().is_some());
    out.stdout
}

fn determinism() -> Outcome {
    let four = "{1243; (1,2), (1,3), (2,4), (3,4)}";
    let table = "O1+U2+U1+O3-O2+U3-";
    let opts = RenderOptions::default();

    let spec = four.parse().unwrap();
    let svg = render_crossing_svg(&spec, &opts).unwrap();
    let want = std::fs::read_to_string(golden("four_crossing.svg")).map_err(|e| e.to_string())?;
    check(svg == want, "four-crossing SVG differs from golden file")?;

    let d = petal_from_gauss(&parse_gauss(table).unwrap()).unwrap();
    let json = serde_json::to_string(&d).unwrap() + "\n";
    let want = std::fs::read_to_string(golden("table_code.json")).map_err(|e| e.to_string())?;
    check(json == want, "table diagram JSON differs from golden file")?;
    let svg = render_petal_svg(&d, &opts).unwrap();
    let want = std::fs::read_to_string(golden("table_code.svg")).map_err(|e| e.to_string())?;
    check(svg == want, "table diagram SVG differs from golden file")?;
    let report = run_cli(&["--json", "petal", table]);
    let want = std::fs::read(golden("table_code.report.json")).map_err(|e| e.to_string())?;
    check(report == want, "petal report differs from golden file")?;

    let dir = std::env::temp_dir().join(format!("vknot-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let diagram = dir.join("d.json");
    std::fs::write(&diagram, &json).unwrap();
    let batch = dir.join("codes.txt");
    let mut rng = StdRng::seed_from_u64(31);
    let codes: Vec<String> = (0..100)
        .map(|i| random_code(&mut rng, 1 + i % 8).to_string())
        .collect();
    std::fs::write(&batch, codes.join("\n")).unwrap();
    let (dp, bp) = (diagram.to_str().unwrap(), batch.to_str().unwrap());

    let cases: Vec<Vec<&str>> = vec![
        vec!["validate", four],
        vec!["count", "20", "--all"],
        vec!["count", "7", "--oracle"],
        vec!["enumerate", "6"],
        vec!["enumerate", "6", "--reflect"],
        vec!["petal", table],
        vec!["recover", dp],
        vec!["roundtrip", table],
        vec!["roundtrip", "--batch", bp],
        vec!["render", "--crossing", four],
        vec!["render", "--petal", dp, "--both-ends"],
        vec!["render", "--code", table],
    ];
    let mut runs = 0;
    for case in &cases {
        for json in [false, true] {
            let mut args: Vec<&str> = if json { vec!["--json"] } else { vec![] };
            args.extend(case);
            let first = run_cli(&args);
            check(
                run_cli(&args) == first,
                format!("{args:?} differs between runs"),
            )?;
            let mut serial = vec!["--threads", "1"];
            serial.extend(&args);
            check(
                run_cli(&serial) == first,
                format!("{args:?} differs with one thread"),
            )?;
            runs += 3;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "{runs} CLI runs byte-identical, 4 golden files match"
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("exact type counts for n = 2..10", vcount_values),
        ("brute-force census agrees with closed forms", census_oracle),
        ("prime formula", prime_formula),
        (
            "valid pair patterns are counted by Bell numbers",
            bell_patterns,
        ),
        (
            "fragmented permutation counts and bounds",
            fragmented_values,
        ),
        ("three-crossing type census", three_crossing_census),
        ("almost virtual classes", almost_virtual_classes),
        ("asymptotic estimate", estimate_ratio),
        ("petal construction", petal_construction),
        ("Gauss code round trip", round_trip),
        (
            "second-occurrence candidates have opposite signs",
            candidate_opposition,
        ),
        ("determinism and golden files", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
