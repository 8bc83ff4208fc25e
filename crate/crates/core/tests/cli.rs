use computable_topology::cli::run;
use computable_topology::reals::{parse_rational, Rational};
use num_traits::{One, Signed};

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn ctop(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ctop").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

/// `(stage, kind, payload)` per tab-separated record.
fn records(text: &str) -> Vec<(String, String, String)> {
    text.lines()
        .map(|l| {
            let mut it = l.splitn(3, '\t');
            let s = it.next().unwrap_or_default().to_string();
            let k = it.next().unwrap_or_default().to_string();
            let p = it.next().unwrap_or_default().to_string();
            (s, k, p)
        })
        .collect()
}

#[test]
fn member_exit_codes() {
    let ok = ctop(&["member", "--space", "rationals", "--open", "basic:0;1", "--point", "1/2", "--fuel", "10000"]);
    assert_eq!(ok.code, 0, "{}", ok.err);
    assert!(ok.out.lines().next().unwrap().contains("fuel=10000"));
    let edge = ctop(&["member", "--open", "basic:0;1", "--point", "1", "--fuel", "10000"]);
    assert_eq!(edge.code, 2);
    let bad = ctop(&["member", "--open", "basic:0;1", "--point", "1//2"]);
    assert_eq!(bad.code, 1);
    assert!(bad.err.starts_with("error:"));
}

#[test]
fn inclusion_exit_codes() {
    assert_eq!(ctop(&["incl", "(0;1)", "(0;2)"]).code, 0);
    assert_eq!(ctop(&["incl", "--space", "unit-interval", "(1/2;2)", "(1/2;1)"]).code, 3);
    assert_eq!(ctop(&["incl", "--mode", "semidecide", "(0;1)", "(0;1)"]).code, 2);
}

#[test]
fn spreen_to_lacombe_records_lie_inside() {
    let r = ctop(&["convert", "--direction", "spreen-to-lacombe", "--input", "interval:0,1", "--dense", "--count", "20"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let balls: Vec<_> = records(&r.out).into_iter().filter(|(_, k, _)| k == "ball").collect();
    assert_eq!(balls.len(), 20);
    for (_, _, p) in balls {
        let (c, rad) = p.split_once(';').unwrap();
        let (c, rad) = (parse_rational(c).unwrap(), parse_rational(rad).unwrap());
        // B(c, r) ⊆ (0, 1) iff r ≤ c and c + r ≤ 1
        assert!(rad.is_positive() && rad <= c && &c + &rad <= Rational::one(), "{p}");
    }
}

#[test]
fn conversion_exit_codes() {
    let l = ctop(&["convert", "--direction", "lacombe-to-spreen", "--input", "[0;1]", "--point", "1/2"]);
    assert_eq!(l.code, 0, "{}{}", l.out, l.err);
    let n = ctop(&["convert", "--direction", "nogina-to-lacombe", "--input", "basic:0;1"]);
    assert_eq!(n.code, 1);
}

#[test]
fn modulus_exit_codes() {
    assert_eq!(ctop(&["modulus", "--function", "identity", "--phi", "eps"]).code, 0);
    assert_eq!(ctop(&["modulus", "--function", "square", "--phi", "square-local"]).code, 0);
    let wrong = ctop(&["modulus", "--function", "square", "--phi", "eps"]);
    assert_eq!(wrong.code, 3);
    assert!(records(&wrong.out).iter().any(|(_, k, _)| k == "violation"));
}

#[test]
fn demos_run() {
    for name in ["square-formal-vs-actual", "parity-oracle", "theta-epsilon", "cont-metric-not-lacombe"] {
        let r = ctop(&["demo", name]);
        assert!(r.code == 0 || r.code == 3, "{name}: {}", r.err);
        assert!(!r.out.is_empty());
    }
    let theta = ctop(&["demo", "theta-epsilon"]);
    for eps in ["1/2", "1/10", "1/1000"] {
        assert!(theta.out.contains(&format!("eps={eps} theta={eps}")), "{}", theta.out);
    }
    let square = ctop(&["demo", "square-formal-vs-actual"]);
    assert!(square.out.contains("NO"));
    assert_eq!(ctop(&["demo", "no-such-demo"]).code, 1);
}

#[test]
fn every_invocation_maps_to_a_known_status() {
    let cases: &[&[&str]] = &[
        &[],
        &["--help"],
        &["member"],
        &["member", "--open", "nonsense", "--point", "0"],
        &["member", "--space", "nowhere", "--open", "basic:0;1", "--point", "0"],
        &["enumerate", "--open", "basic:0;1", "--dense", "--count", "3"],
        &["incl", "(0;1)"],
        &["modulus", "--function", "cube", "--phi", "eps"],
    ];
    for args in cases {
        let r = ctop(args);
        assert!((0..=3).contains(&r.code), "{args:?} gave {}", r.code);
    }
    assert_eq!(ctop(&["--help"]).code, 0);
    assert_eq!(ctop(&["member"]).code, 1);
}

#[test]
fn records_replay_byte_identically() {
    let runs: &[&[&str]] = &[
        &["modulus", "--function", "square", "--phi", "eps", "--seed", "11", "--samples", "40"],
        &["convert", "--direction", "spreen-to-lacombe", "--input", "interval:0,1", "--dense", "--count", "15"],
        &["demo", "square-formal-vs-actual"],
    ];
    for args in runs {
        let (a, b) = (ctop(args), ctop(args));
        assert_eq!((a.code, &a.out), (b.code, &b.out), "{args:?}");
    }
    let seeded = ctop(&["modulus", "--function", "double", "--phi", "half-eps", "--seed", "5"]);
    assert!(seeded.out.contains("seed=5"));
}
