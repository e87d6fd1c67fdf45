use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use vknot_core::gauss::parse_gauss;
use vknot_core::petal::{crossing_sign, gauss_from_petal, petal_bound, petal_from_gauss};
use vknot_core::render::{render_crossing_svg, render_petal_svg};
use vknot_core::{
    CrossingType, MulticrossingSpec, Passage, PetalDiagram, RenderOptions, Sign, SignedGaussCode,
    Token,
};

fn crossing_type() -> impl Strategy<Value = CrossingType> {
    (2usize..=9).prop_flat_map(|n| {
        (
            prop::collection::vec(0..n, n),
            Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(move |(block, order)| {
                let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for p in order {
                    parts.entry(block[p - 1]).or_default().push(p);
                }
                CrossingType::new(n, parts.into_values().collect()).unwrap()
            })
    })
}

fn random_code(rng: &mut StdRng, n: usize) -> SignedGaussCode {
    let mut labels: Vec<u32> = (1..=n as u32).flat_map(|l| [l, l]).collect();
    labels.shuffle(rng);
    let over_first: Vec<bool> = (0..n).map(|_| rng.random_range(0..2) == 0).collect();
    let signs: Vec<Sign> = (0..n)
        .map(|_| {
            if rng.random_range(0..2) == 0 {
                Sign::Plus
            } else {
                Sign::Minus
            }
        })
        .collect();
    let mut seen = vec![false; n + 1];
    let tokens = labels
        .into_iter()
        .map(|l| {
            let first = !std::mem::replace(&mut seen[l as usize], true);
            let over = over_first[l as usize - 1] == first;
            let passage = if over { Passage::Over } else { Passage::Under };
            Token::new(l * 7 + 3, passage, signs[l as usize - 1])
        })
        .collect();
    SignedGaussCode::new(tokens).unwrap()
}

/// All canonical codes with `n` crossings.
fn all_codes(n: usize) -> Vec<SignedGaussCode> {
    fn labelings(
        open: &mut Vec<u32>,
        next: u32,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        n: u32,
    ) {
        if cur.len() == 2 * n as usize {
            out.push(cur.clone());
            return;
        }
        if next <= n {
            cur.push(next);
            open.push(next);
            labelings(open, next + 1, cur, out, n);
            open.pop();
            cur.pop();
        }
        for i in 0..open.len() {
            let l = open.remove(i);
            cur.push(l);
            labelings(open, next, cur, out, n);
            cur.pop();
            open.insert(i, l);
        }
    }
    let mut seqs = Vec::new();
    labelings(&mut Vec::new(), 1, &mut Vec::new(), &mut seqs, n as u32);
    let mut out = Vec::new();
    for seq in seqs {
        for over_bits in 0u32..1 << n {
            for sign_bits in 0u32..1 << n {
                let mut seen = vec![false; n + 1];
                let tokens = seq
                    .iter()
                    .map(|&l| {
                        let i = l as usize - 1;
                        let first = !std::mem::replace(&mut seen[l as usize], true);
                        let over = (over_bits >> i & 1 == 1) == first;
                        let sign = if sign_bits >> i & 1 == 1 {
                            Sign::Minus
                        } else {
                            Sign::Plus
                        };
                        Token::new(l, if over { Passage::Over } else { Passage::Under }, sign)
                    })
                    .collect();
                out.push(SignedGaussCode::new(tokens).unwrap());
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn rotations_compose(t in crossing_type(), r in 0usize..20, s in 0usize..20) {
        let n = t.n();
        prop_assert_eq!(t.rotate(r).rotate(s), t.rotate((r + s) % n));
        prop_assert_eq!(t.reflect().reflect(), t.clone());
    }

    #[test]
    fn canonical_is_constant_on_orbits(t in crossing_type(), r in 0usize..20) {
        for reflect in [false, true] {
            let c = t.canonical(reflect);
            prop_assert_eq!(t.rotate(r).canonical(reflect), c.clone());
            prop_assert!(c.encoding() <= t.encoding());
        }
        prop_assert_eq!(t.reflect().rotate(r).canonical(true), t.canonical(true));
    }

    #[test]
    fn resolution_counts(t in crossing_type()) {
        let n = t.n();
        let spec = t.to_spec();
        let back = spec.to_type().unwrap();
        prop_assert_eq!(&back, &t);
        let res = back.resolve();
        prop_assert_eq!(res.len(), n * (n - 1) / 2);
        let classical = res.iter().filter(|p| p.kind != vknot_core::PairKind::Virtual).count();
        let want: usize = t.parts().iter().map(|p| p.len() * (p.len() - 1) / 2).sum();
        prop_assert_eq!(classical, want);
    }

    #[test]
    fn notation_round_trips(t in crossing_type()) {
        let spec = t.to_spec();
        let text = spec.to_string();
        prop_assert_eq!(text.parse::<MulticrossingSpec>().unwrap(), spec);
    }

    #[test]
    fn almost_virtual_distance_symmetry(n in 2usize..12, o in 1usize..12, u in 1usize..12, r in 0usize..12) {
        prop_assume!(o <= n && u <= n && o != u);
        let rest = (1..=n).filter(|&p| p != o && p != u).map(|p| vec![p]);
        let t = CrossingType::new(n, std::iter::once(vec![o, u]).chain(rest).collect()).unwrap();
        let d = t.almost_virtual_distance(false).unwrap();
        prop_assert_eq!(t.rotate(r).almost_virtual_distance(false).unwrap(), d);
        prop_assert_eq!(t.reflect().almost_virtual_distance(false).unwrap(), n - d);
        prop_assert_eq!(t.almost_virtual_distance(true).unwrap(), d.min(n - d));
    }

    #[test]
    fn gauss_format_parse(seed in any::<u64>(), n in 0usize..10) {
        let code = random_code(&mut StdRng::seed_from_u64(seed), n);
        prop_assert_eq!(parse_gauss(&code.to_string()).unwrap(), code.clone());
        let canon = code.canonicalize();
        prop_assert_eq!(canon.canonicalize(), canon.clone());
        let shape = |c: &SignedGaussCode| c.tokens().iter().map(|t| (t.passage, t.sign)).collect::<Vec<_>>();
        prop_assert_eq!(shape(&canon), shape(&code));
        prop_assert_eq!(canon.occurrence_pairs(), code.occurrence_pairs());
    }

    #[test]
    fn petal_round_trip(seed in any::<u64>(), n in 0usize..=8) {
        let code = random_code(&mut StdRng::seed_from_u64(seed), n);
        let d = petal_from_gauss(&code).unwrap();
        prop_assert_eq!(d.petals, petal_bound(n));
        prop_assert!(d.petals % 2 == 1);
        prop_assert!(d.is_valid());
        for &[s, t] in &d.classical_pairs {
            prop_assert!(d.classical_pairs.iter().filter(|p| p.contains(&s) || p.contains(&t)).count() == 1);
        }
        prop_assert_eq!(gauss_from_petal(&d).unwrap(), code.canonicalize());
    }
}

#[test]
fn classify_triple_is_symmetric() {
    for parts in [
        vec![vec![2, 3, 1]],
        vec![vec![3, 1], vec![2]],
        vec![vec![1], vec![2], vec![3]],
    ] {
        let t = CrossingType::new(3, parts).unwrap();
        let c = t.classify_triple().unwrap();
        for r in 0..3 {
            assert_eq!(t.rotate(r).classify_triple().unwrap(), c);
            assert_eq!(t.reflect().rotate(r).classify_triple().unwrap(), c);
        }
    }
}

#[test]
fn exhaustive_round_trip_small() {
    let mut total = 0;
    for n in 0..=3 {
        for code in all_codes(n) {
            let d = petal_from_gauss(&code).unwrap();
            assert_eq!(gauss_from_petal(&d).unwrap(), code, "{code}");
            total += 1;
        }
    }
    // 1 + 4 + 48 + 960 canonical codes
    assert_eq!(total, 1013);
}

#[test]
fn over_segment_is_higher() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let code = random_code(&mut rng, n).canonicalize();
        let d = petal_from_gauss(&code).unwrap();
        let table = vknot_core::petal::segment_table(&code);
        for (first, second) in code.occurrence_pairs() {
            let a = table.assignments[first][0];
            let &[s, t] = d.classical_pairs.iter().find(|p| p.contains(&a)).unwrap();
            let x = if s == a { t } else { s };
            assert!(table.assignments[second].contains(&x));
            let over = if code.tokens()[first].passage == Passage::Over {
                a
            } else {
                x
            };
            let under = if over == a { x } else { a };
            assert!(d.height_of(over) < d.height_of(under));
        }
    }
}

#[test]
fn candidates_have_opposite_signs() {
    for m in (3..=101).step_by(2) {
        for a in 1..=m {
            for b in 1..m {
                if a == b || a == b + 1 {
                    continue;
                }
                let s1 = crossing_sign(a, b, m).unwrap();
                let s2 = crossing_sign(a, b + 1, m).unwrap();
                assert_ne!(s1, s2, "m={m} a={a} b={b}");
                assert_ne!(
                    crossing_sign(b, a, m).unwrap(),
                    crossing_sign(b + 1, a, m).unwrap()
                );
                assert_ne!(s1, crossing_sign(b, a, m).unwrap());
            }
        }
    }
}

#[test]
fn svg_is_well_formed_and_stable() {
    let o = RenderOptions::default();
    let mut rng = StdRng::seed_from_u64(5);
    for n in 0..6 {
        let d = petal_from_gauss(&random_code(&mut rng, n)).unwrap();
        let svg = render_petal_svg(&d, &o).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let class = |c: &str| {
            doc.descendants()
                .filter(|e| e.attribute("class") == Some(c))
                .count()
        };
        assert_eq!(class("petal"), d.petals);
        assert_eq!(class("segment"), d.petals);
        assert_eq!(class("height"), d.petals);
        assert_eq!(render_petal_svg(&d, &o).unwrap(), svg);
    }
    for text in [
        "{1243; (1,2),(1,3),(2,4),(3,4)}",
        "{35142; }",
        "{123; (1,2),(1,3),(2,3)}",
    ] {
        let spec: MulticrossingSpec = text.parse().unwrap();
        let svg = render_crossing_svg(&spec, &o).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let arcs = doc
            .descendants()
            .filter(|e| e.attribute("class") == Some("virtual-arc"))
            .count();
        assert_eq!(arcs, spec.virtual_pairs().count());
    }
}

#[test]
fn diagram_json_round_trip() {
    let d = PetalDiagram::new(5, vec![2, 1, 3, 5, 4], [(3, 1)]).unwrap();
    assert_eq!(d.classical_pairs, vec![[1, 3]]);
    let back: PetalDiagram = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
    assert_eq!(back, d);
}
