//! Deterministic JSON output for reports and germ models.
//!
//! The emitters are hand-rolled so that the byte layout is part of the
//! contract: keys appear in a fixed order, there is no whitespace, and
//! integers of any size print as bare decimal numbers. Two equal reports
//! always serialize to identical bytes, which makes golden-file tests and
//! diff-based tooling reliable.

use crate::acampo::NCModel;
use crate::global::Report;
use crate::zeta::CyclotomicProduct;

/// Escapes a string for a JSON string literal. Only the mandatory escapes
/// are applied; everything else passes through as UTF-8.
fn push_json_string(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Writes a zeta-function as a JSON array of `[order, exponent]` pairs in
/// increasing order; the unit function becomes `[]`.
fn push_zeta(out: &mut String, zeta: &CyclotomicProduct) {
    out.push('[');
    let mut first = true;
    for (order, exponent) in zeta.factors() {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&format!("[{order},{exponent}]"));
    }
    out.push(']');
}

/// Serializes a report as a single line of JSON.
///
/// Key order is fixed: `scenario`, `values` (each with `value`, `zeta`,
/// `degree`, `chi_fiber`, `mu`, `lambda`, `atypical`, and for polynomial
/// scenarios `atypical_at_infinity`, `mu_P`, `lambda_P`), then `totals`,
/// `chi_gen`, `theorem3_residual`, and `chi_gen_classic` when the scenario
/// is polynomial.
pub fn emit_json(report: &Report) -> String {
    let mut out = String::new();
    out.push_str("{\"scenario\":");
    push_json_string(&mut out, &report.scenario);
    out.push_str(",\"values\":[");
    for (i, record) in report.values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("{\"value\":");
        push_json_string(&mut out, &record.value.to_string());
        out.push_str(",\"zeta\":");
        push_zeta(&mut out, &record.zeta);
        out.push_str(&format!(",\"degree\":{}", record.degree));
        out.push_str(&format!(",\"chi_fiber\":{}", record.chi_fiber));
        out.push_str(&format!(",\"mu\":{}", record.mu));
        out.push_str(&format!(",\"lambda\":{}", record.lambda));
        out.push_str(&format!(",\"atypical\":{}", record.atypical));
        if let Some(extras) = &record.poly {
            out.push_str(&format!(
                ",\"atypical_at_infinity\":{}",
                extras.atypical_at_infinity
            ));
            out.push_str(&format!(",\"mu_P\":{}", extras.mu_p));
            out.push_str(&format!(",\"lambda_P\":{}", extras.lambda_p));
        }
        out.push('}');
    }
    out.push_str("],\"totals\":{");
    out.push_str(&format!("\"mu\":{}", report.mu_total));
    out.push_str(&format!(",\"lambda\":{}", report.lambda_total));
    out.push('}');
    out.push_str(&format!(",\"chi_gen\":{}", report.chi_gen));
    out.push_str(&format!(",\"theorem3_residual\":{}", report.residual));
    if let Some(classic) = &report.chi_gen_classic {
        out.push_str(&format!(",\"chi_gen_classic\":{classic}"));
    }
    out.push('}');
    out
}

/// Serializes a germ model as a single line of JSON with the zeta-functions
/// at the origin and at infinity together with their degrees.
pub fn emit_germ_json(name: &str, model: &NCModel) -> String {
    let zero = model.zeta_zero();
    let infinity = model.zeta_infinity();
    let mut out = String::new();
    out.push_str("{\"scenario\":");
    push_json_string(&mut out, name);
    out.push_str(",\"zeta_zero\":");
    push_zeta(&mut out, &zero);
    out.push_str(&format!(",\"degree_zero\":{}", zero.degree()));
    out.push_str(",\"zeta_infinity\":");
    push_zeta(&mut out, &infinity);
    out.push_str(&format!(",\"degree_infinity\":{}", infinity.degree()));
    out.push('}');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acampo::MultStratum;
    use crate::global::{ChiGen, MeromorphicScenario, ProjValue};
    use crate::io::{parse_scenario, ScenarioBody};
    use num_bigint::BigInt;
    use std::collections::BTreeMap;

    fn tiny_scenario() -> MeromorphicScenario {
        MeromorphicScenario {
            name: "tiny \"quoted\"".into(),
            n: 1,
            chi_m: 4,
            chi_ind: 0,
            chi_q0: None,
            chi_gen: ChiGen::Explicit(2),
            ind_strata: Vec::new(),
            values: BTreeMap::new(),
        }
    }

    #[test]
    fn strings_are_escaped() {
        let report = tiny_scenario().build_report().unwrap();
        let json = emit_json(&report);
        assert!(json.starts_with("{\"scenario\":\"tiny \\\"quoted\\\"\","));
    }

    #[test]
    fn report_json_layout_is_stable() {
        let mut scn = tiny_scenario();
        scn.name = "tiny".into();
        scn.values.insert(
            ProjValue::finite("0"),
            crate::global::FiberData {
                chi_fiber: 2,
                strata: vec![crate::global::FiberStratum::smooth("pts", 2)],
            },
        );
        let report = scn.build_report().unwrap();
        assert_eq!(
            emit_json(&report),
            "{\"scenario\":\"tiny\",\"values\":[{\"value\":\"0\",\"zeta\":[[1,2]],\
             \"degree\":2,\"chi_fiber\":2,\"mu\":0,\"lambda\":0,\"atypical\":false}],\
             \"totals\":{\"mu\":0,\"lambda\":0},\"chi_gen\":2,\"theorem3_residual\":0}"
        );
    }

    #[test]
    fn polynomial_reports_carry_the_extra_fields() {
        // the one-variable double point: one critical fiber, mu = 1
        let src = "scenario p kind polynomial dim 1 deg 2 chi_gen auto \
                   value 0 chi_fiber 1 crit label=origin mu=1 zeta=[2:1] end end";
        let ScenarioBody::Polynomial { scenario, .. } = parse_scenario(src).unwrap().body else {
            panic!("expected polynomial");
        };
        let json = emit_json(&scenario.build_report().unwrap());
        assert!(json.contains("\"atypical_at_infinity\":false"));
        assert!(json.contains("\"mu_P\":1"));
        assert!(json.contains("\"lambda_P\":0"));
        assert!(json.ends_with(",\"chi_gen_classic\":2}"));
    }

    #[test]
    fn germ_json_reports_both_ends() {
        let model = NCModel::new(vec![MultStratum::new("a", 3, 1, 2)]).unwrap();
        assert_eq!(
            emit_germ_json("germ", &model),
            "{\"scenario\":\"germ\",\"zeta_zero\":[[2,2]],\"degree_zero\":4,\
             \"zeta_infinity\":[],\"degree_infinity\":0}"
        );
    }

    #[test]
    fn big_exponents_print_in_full() {
        let mut zeta = CyclotomicProduct::unit();
        let huge = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        zeta = zeta.mul(&CyclotomicProduct::cyclo(7, huge.clone()).unwrap());
        let mut out = String::new();
        push_zeta(&mut out, &zeta);
        assert_eq!(out, format!("[[7,{huge}]]"));
    }
}
