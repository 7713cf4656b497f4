//! The catalog entries against their hand-derived expectations, driven
//! entirely through the public API. The inline unit tests already cover
//! this; here the same ground truth is replayed the way an external
//! consumer would, one visible line per entry.

use merozeta::catalog::{entries, entry, evaluate_quantity};
use merozeta::{format_scenario, parse_scenario, parse_zeta, IntPoly, PolyFraction};

#[test]
fn every_entry_reproduces_its_expectations() {
    for e in entries() {
        let file = parse_scenario(e.source)
            .unwrap_or_else(|err| panic!("{}: fixture fails to parse: {err}", e.name));
        for (quantity, expected) in e.expected {
            let got = evaluate_quantity(&file, quantity)
                .unwrap_or_else(|err| panic!("{}: {quantity}: {err}", e.name));
            assert_eq!(&got, expected, "{}: {quantity}", e.name);
        }
        println!("catalog {}: {} quantities ok", e.name, e.expected.len());
    }
}

#[test]
fn formatting_a_catalog_entry_is_lossless() {
    for e in entries() {
        let file = parse_scenario(e.source).unwrap();
        let reparsed = parse_scenario(&format_scenario(&file)).unwrap();
        assert_eq!(file, reparsed, "{}", e.name);
    }
}

#[test]
fn the_cusp_zeta_expands_to_the_classical_fraction() {
    // (1-t^2)(1-t^3)/(1-t^6) = (1-t)/(1-t+t^2): trivial monodromy on H0
    // and eigenvalues exp(+-i pi/3) on H1.
    let e = entry("cusp-germ").expect("cusp entry exists");
    let expected_zeta = e
        .expected
        .iter()
        .find(|(q, _)| *q == "zeta_zero")
        .map(|(_, v)| *v)
        .expect("cusp expectation lists zeta_zero");
    let zeta = parse_zeta(expected_zeta).unwrap();
    let classical = PolyFraction {
        numerator: IntPoly::from_coeffs([1, -1]),
        denominator: IntPoly::from_coeffs([1, -1, 1]),
    };
    assert!(zeta.expand().equivalent(&classical));
}
