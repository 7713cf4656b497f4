//! Built-in example scenarios with independently derived expectations.
//!
//! Every entry carries three things: the scenario source (shipped as a
//! fixture file), a prose derivation of the expected numbers, and the
//! expected values themselves, rendered as strings. The expectations were
//! worked out from the geometry of each example by hand, so comparing
//! them against the engine is a genuine cross-check, not a snapshot of
//! the engine's own output.
//!
//! [`evaluate_quantity`] turns a quantity name such as `zeta(0)` or
//! `restricted_chi_jump(0)` into the engine's answer for a parsed
//! scenario, which is what the oracle tests and the CLI's catalog
//! subcommand share.

use crate::global::ProjValue;
use crate::io::{parse_scenario, ScenarioBody, ScenarioFile};

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// Scenario source text, ready for the parser.
    pub source: &'static str,
    /// How the expected values were obtained.
    pub derivation: &'static str,
    /// Pairs of quantity name and exact expected rendering.
    pub expected: &'static [(&'static str, &'static str)],
}

impl CatalogEntry {
    pub fn parse(&self) -> ScenarioFile {
        parse_scenario(self.source).expect("catalog sources always parse")
    }
}

static ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "cusp-germ",
        source: include_str!("../fixtures/cusp-germ.mz"),
        derivation: "Three blow-ups resolve the cusp x^2 + y^3; the exceptional curves \
                     have multiplicities 2, 3, 6 and open Euler characteristics 1, 1, -1, \
                     giving (1-t^2)(1-t^3)/(1-t^6). That fraction expands to \
                     (1-t)/(1-t+t^2): trivial action on H0 and eigenvalues exp(+-i pi/3) \
                     on H1. The degree -1 equals 1 - mu with mu = 2.",
        expected: &[
            ("zeta_zero", "[2:1,3:1,6:-1]"),
            ("degree_zero", "-1"),
            ("zeta_infinity", "[]"),
            ("degree_infinity", "0"),
        ],
    },
    CatalogEntry {
        name: "a1-germ",
        source: include_str!("../fixtures/a1-germ.mz"),
        derivation: "The vanishing fiber of x^2 + y^2 is the conic {x^2 + y^2 = eps}, a \
                     copy of C* via u = x + iy; the geometric monodromy (x,y) -> (-x,-y) \
                     sends u to -u, which is isotopic to the identity, so it acts \
                     trivially on H0 and H1 and the zeta-function is (1-t)/(1-t) = 1. \
                     Consistently, the blown-up model has one exceptional curve of \
                     multiplicity 2 with chi 0. Degree 0 = 1 - mu with mu = 1.",
        expected: &[
            ("zeta_zero", "[]"),
            ("degree_zero", "0"),
            ("zeta_infinity", "[]"),
            ("degree_infinity", "0"),
        ],
    },
    CatalogEntry {
        name: "monomial-1var-5",
        source: include_str!("../fixtures/monomial-1var-5.mz"),
        derivation: "The fiber {y^5 = eps} is five points permuted cyclically; \
                     det(1 - t m | H0) = 1 - t^5 and the degree 5 is the number of \
                     points.",
        expected: &[
            ("zeta_zero", "[5:1]"),
            ("degree_zero", "5"),
            ("zeta_infinity", "[]"),
        ],
    },
    CatalogEntry {
        name: "normal-crossing-2var",
        source: include_str!("../fixtures/normal-crossing-2var.mz"),
        derivation: "The fiber {x^2 y^3 = eps} in a small polydisc is gcd(2,3) = 1 \
                     annulus; the monodromy is a twist of the annulus, acting trivially \
                     on homology, so the H0 and H1 factors cancel and the zeta-function \
                     is 1. In the blown-up model the exceptional curve has multiplicity \
                     2 + 3 = 5 and open Euler characteristic 0.",
        expected: &[
            ("zeta_zero", "[]"),
            ("degree_zero", "0"),
            ("zeta_infinity", "[]"),
            ("degree_infinity", "0"),
        ],
    },
    CatalogEntry {
        name: "xy-on-p2",
        source: include_str!("../fixtures/xy-on-p2.mz"),
        derivation: "Every fiber of f = x/y on the projective plane is the line \
                     {x = c y} minus the indeterminacy point [0:0:1], a copy of C, so \
                     every fiber has chi 1 and nothing is atypical: mu and lambda vanish \
                     everywhere. With chi of the plane 3, chi_ind 1 and the pole line of \
                     chi 2, the global identity closes with residual 0 and the defect \
                     formula recovers chi_gen = 3 - 2 + 0 = 1.",
        expected: &[
            ("chi_gen", "1"),
            ("typical_zeta", "[1:1]"),
            ("zeta(0)", "[1:1]"),
            ("degree(0)", "1"),
            ("chi_fiber(0)", "1"),
            ("chi_defect(0)", "0"),
            ("zeta(inf)", "[1:1]"),
            ("degree(inf)", "1"),
            ("mu(0)", "0"),
            ("lambda(0)", "0"),
            ("mu_total", "0"),
            ("lambda_total", "0"),
            ("residual", "0"),
            ("chi_gen_from_defects", "1"),
            ("atypical(0)", "false"),
            ("atypical(inf)", "false"),
        ],
    },
    CatalogEntry {
        name: "identity-on-p1",
        source: include_str!("../fixtures/identity-on-p1.mz"),
        derivation: "Each fiber of x0/x1 on the projective line is a single point, so \
                     the zeta-function of every value is 1 - t, nothing is atypical, \
                     and the defect formula recovers chi_gen = 2 - 1 + 0 = 1.",
        expected: &[
            ("chi_gen", "1"),
            ("zeta(0)", "[1:1]"),
            ("degree(0)", "1"),
            ("chi_fiber(0)", "1"),
            ("chi_defect(0)", "0"),
            ("mu_total", "0"),
            ("lambda_total", "0"),
            ("residual", "0"),
            ("chi_gen_from_defects", "1"),
            ("atypical(0)", "false"),
        ],
    },
    CatalogEntry {
        name: "broughton",
        source: include_str!("../fixtures/broughton.mz"),
        derivation: "For c != 0 the fiber of P = x + x^2 y is parametrized by x in C*, \
                     y = (c - x)/x^2, so chi_gen = 0; the zero fiber is the line {x=0} \
                     plus the hyperbola {xy=-1}, chi 1. The gradient system 1 + 2xy = 0, \
                     x^2 = 0 is inconsistent, so mu_P = 0 and the whole jump \
                     chi_gen - chi(F_0) = -1 comes from infinity: lambda_P(0) = 1, \
                     carried at [0:1:0] by a local factor of degree -1, and value 0 is \
                     atypical at infinity. The affine factor of value 0 is \
                     (1-t)^1 (1-t)^0 = 1-t; with the infinity factor (1-t)^-1 the \
                     global zeta of value 0 is the unit of degree 0 = chi_gen. The \
                     classical count gives chi_gen = 1 - (0 + 1) = 0.",
        expected: &[
            ("chi_gen", "0"),
            ("typical_zeta", "[]"),
            ("zeta(0)", "[]"),
            ("degree(0)", "0"),
            ("chi_fiber(0)", "1"),
            ("chi_defect(0)", "-1"),
            ("affine_factor(0)", "[1:1]"),
            ("infinity_factor(0)", "[1:-1]"),
            ("mu(0)", "0"),
            ("lambda(0)", "1"),
            ("mu_P(0)", "0"),
            ("lambda_P(0)", "1"),
            ("mu_P", "0"),
            ("lambda_P", "1"),
            ("chi_jump(0)", "-1"),
            ("atypical(0)", "true"),
            ("atypical_at_infinity(0)", "true"),
            ("residual", "0"),
            ("chi_gen_classic", "0"),
            ("chi_gen_from_defects", "0"),
        ],
    },
    CatalogEntry {
        name: "quadric",
        source: include_str!("../fixtures/quadric.mz"),
        derivation: "Fibers of P = x^2 + y^2 are smooth conics, C* of chi 0, except the \
                     zero fiber: two lines through a point, chi 1 + 1 - 1 = 1. The one \
                     singular point is an ordinary double point, mu = 1, with unit local \
                     zeta in two variables (see a1-germ). The pencil is equisingular at \
                     its two points at infinity, so lambda_P = 0 and the signed jump of \
                     value 0, computed from both fiber characteristics, is \
                     0 - 1 = -1. Classical count: chi_gen = 1 - (1 + 0) = 0.",
        expected: &[
            ("chi_gen", "0"),
            ("zeta(0)", "[]"),
            ("degree(0)", "0"),
            ("chi_fiber(0)", "1"),
            ("chi_defect(0)", "-1"),
            ("affine_factor(0)", "[]"),
            ("infinity_factor(0)", "[]"),
            ("mu(0)", "1"),
            ("lambda(0)", "0"),
            ("mu_P(0)", "1"),
            ("lambda_P(0)", "0"),
            ("mu_P", "1"),
            ("lambda_P", "0"),
            ("chi_jump(0)", "-1"),
            ("atypical(0)", "true"),
            ("atypical_at_infinity(0)", "false"),
            ("residual", "0"),
            ("chi_gen_classic", "0"),
            ("chi_gen_from_defects", "0"),
        ],
    },
    CatalogEntry {
        name: "linear",
        source: include_str!("../fixtures/linear.mz"),
        derivation: "P = x in one variable: every fiber is one point, chi_gen = 1, and \
                     there are no critical points anywhere, so both recovery formulas \
                     give 1. The single point at infinity is a simple pole; its local \
                     zeta-function at infinity is 1 - t, so the zeta at infinity is \
                     1 - t with degree 1 = chi_gen.",
        expected: &[
            ("chi_gen", "1"),
            ("typical_zeta", "[1:1]"),
            ("zeta(0)", "[1:1]"),
            ("chi_fiber(0)", "1"),
            ("chi_defect(0)", "0"),
            ("chi_jump(0)", "0"),
            ("mu_P", "0"),
            ("lambda_P", "0"),
            ("zeta_P_infinity", "[1:1]"),
            ("residual", "0"),
            ("chi_gen_classic", "1"),
            ("chi_gen_from_defects", "1"),
        ],
    },
    CatalogEntry {
        name: "x-complement-y-axis",
        source: include_str!("../fixtures/x-complement-y-axis.mz"),
        derivation: "P = x on the plane, removing the line {y=0}: every fiber {x=c} is \
                     an affine line meeting the removed line in exactly one point, so \
                     all restricted fibers are C*: restricted chi_gen = 1 - 1 = 0, the \
                     restricted zeta of any value is the unit, and the restricted jump \
                     vanishes.",
        expected: &[
            ("chi_gen", "1"),
            ("chi_gen_classic", "1"),
            ("residual", "0"),
            ("restricted_chi_gen", "0"),
            ("restricted_zeta(0)", "[]"),
            ("restricted_chi_jump(0)", "0"),
        ],
    },
];

pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

pub fn entry(name: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

fn parse_quantity(quantity: &str) -> (&str, Option<&str>) {
    match quantity.find('(') {
        Some(i) if quantity.ends_with(')') => {
            (&quantity[..i], Some(&quantity[i + 1..quantity.len() - 1]))
        }
        _ => (quantity, None),
    }
}

fn required_value(op: &str, arg: Option<&str>) -> Result<ProjValue, String> {
    let tag = arg.ok_or_else(|| format!("`{op}` needs a value argument, as in `{op}(0)`"))?;
    if tag.is_empty() {
        return Err(format!("`{op}` needs a nonempty value argument"));
    }
    Ok(ProjValue::finite(tag))
}

/// Evaluates a named quantity of a parsed scenario, rendering the result
/// the way the catalog expectations are written: zeta-functions in the
/// `[m:e,...]` form, integers in decimal, booleans as `true`/`false`.
pub fn evaluate_quantity(file: &ScenarioFile, quantity: &str) -> Result<String, String> {
    let (op, arg) = parse_quantity(quantity);
    match &file.body {
        ScenarioBody::Germ(model) => match op {
            "zeta_zero" => Ok(model.zeta_zero().to_string()),
            "degree_zero" => Ok(model.zeta_zero().degree().to_string()),
            "zeta_infinity" => Ok(model.zeta_infinity().to_string()),
            "degree_infinity" => Ok(model.zeta_infinity().degree().to_string()),
            other => Err(format!("unknown germ quantity `{other}`")),
        },
        ScenarioBody::Meromorphic(scn) => {
            let err = |e: crate::ScenarioError| e.to_string();
            match op {
                "chi_gen" => Ok(scn.resolve_chi_gen().map_err(err)?.to_string()),
                "typical_zeta" => Ok(scn.typical_zeta().map_err(err)?.to_string()),
                "zeta" => Ok(scn
                    .zeta_value(&required_value(op, arg)?)
                    .map_err(err)?
                    .to_string()),
                "degree" => Ok(scn
                    .zeta_value(&required_value(op, arg)?)
                    .map_err(err)?
                    .degree()
                    .to_string()),
                "chi_fiber" => Ok(scn
                    .chi_fiber_at(&required_value(op, arg)?)
                    .map_err(err)?
                    .to_string()),
                "chi_defect" => Ok(scn.chi_defect(&required_value(op, arg)?).to_string()),
                "mu" => Ok(scn.mu_at(&required_value(op, arg)?).to_string()),
                "lambda" => Ok(scn.lambda_at(&required_value(op, arg)?).to_string()),
                "mu_total" => Ok(scn.mu_total().to_string()),
                "lambda_total" => Ok(scn.lambda_total().to_string()),
                "residual" => Ok(scn.consistency_residual().map_err(err)?.to_string()),
                "chi_gen_from_defects" => {
                    Ok(scn.chi_gen_from_defects().map_err(err)?.to_string())
                }
                "atypical" => {
                    let value = required_value(op, arg)?;
                    let report = scn.build_report().map_err(err)?;
                    Ok(report
                        .record(&value)
                        .map(|r| r.atypical)
                        .unwrap_or(false)
                        .to_string())
                }
                other => Err(format!("unknown meromorphic quantity `{other}`")),
            }
        }
        ScenarioBody::Polynomial {
            scenario: ps,
            hypersurface,
        } => {
            let err = |e: crate::ScenarioError| e.to_string();
            let hyp = || {
                hypersurface
                    .as_ref()
                    .ok_or_else(|| format!("`{op}` needs a hypersurface block"))
            };
            match op {
                "chi_gen" => Ok(ps.resolve_chi_gen().map_err(err)?.to_string()),
                "typical_zeta" => Ok(ps.typical_zeta().map_err(err)?.to_string()),
                "zeta" => Ok(ps
                    .zeta_poly_at(&required_value(op, arg)?)
                    .map_err(err)?
                    .to_string()),
                "degree" => Ok(ps
                    .zeta_poly_at(&required_value(op, arg)?)
                    .map_err(err)?
                    .degree()
                    .to_string()),
                "chi_fiber" => Ok(ps
                    .chi_fiber_at(&required_value(op, arg)?)
                    .map_err(err)?
                    .to_string()),
                "chi_defect" => Ok(ps
                    .to_meromorphic()
                    .map_err(err)?
                    .chi_defect(&required_value(op, arg)?)
                    .to_string()),
                "affine_factor" => Ok(ps
                    .affine_factor(&required_value(op, arg)?)
                    .map_err(err)?
                    .to_string()),
                "infinity_factor" => {
                    Ok(ps.infinity_factor(&required_value(op, arg)?).to_string())
                }
                "zeta_P_infinity" => Ok(ps.zeta_poly_infinity().map_err(err)?.to_string()),
                "mu" => Ok(ps
                    .to_meromorphic()
                    .map_err(err)?
                    .mu_at(&required_value(op, arg)?)
                    .to_string()),
                "lambda" => Ok(ps
                    .to_meromorphic()
                    .map_err(err)?
                    .lambda_at(&required_value(op, arg)?)
                    .to_string()),
                "mu_P" => match arg {
                    Some(_) => Ok(ps.mu_p_at(&required_value(op, arg)?).to_string()),
                    None => Ok(ps.mu_p_total().to_string()),
                },
                "lambda_P" => match arg {
                    Some(_) => Ok(ps.lambda_p_at(&required_value(op, arg)?).to_string()),
                    None => Ok(ps.lambda_p_total().to_string()),
                },
                "chi_jump" => Ok(ps.chi_jump(&required_value(op, arg)?).to_string()),
                "atypical" => {
                    let value = required_value(op, arg)?;
                    let report = ps.build_report().map_err(err)?;
                    Ok(report
                        .record(&value)
                        .map(|r| r.atypical)
                        .unwrap_or(false)
                        .to_string())
                }
                "atypical_at_infinity" => Ok(ps
                    .atypical_at_infinity(&required_value(op, arg)?)
                    .to_string()),
                "residual" => Ok(ps.consistency_residual().map_err(err)?.to_string()),
                "chi_gen_classic" => Ok(ps.chi_gen_classic().to_string()),
                "chi_gen_from_defects" => Ok(ps
                    .to_meromorphic()
                    .map_err(err)?
                    .chi_gen_from_defects()
                    .map_err(err)?
                    .to_string()),
                "restricted_chi_gen" => {
                    Ok(ps.restricted_chi_gen(hyp()?).map_err(err)?.to_string())
                }
                "restricted_zeta" => Ok(ps
                    .restrict_to_complement(hyp()?, &required_value(op, arg)?)
                    .map_err(err)?
                    .zeta
                    .to_string()),
                "restricted_chi_jump" => Ok(ps
                    .restrict_to_complement(hyp()?, &required_value(op, arg)?)
                    .map_err(err)?
                    .chi_jump
                    .to_string()),
                other => Err(format!("unknown polynomial quantity `{other}`")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::format_scenario;

    #[test]
    fn names_are_unique_and_lookup_works() {
        let mut names: Vec<&str> = entries().iter().map(|e| e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), entries().len());
        assert!(entry("broughton").is_some());
        assert!(entry("no-such-entry").is_none());
    }

    #[test]
    fn every_source_parses_and_reformats_to_itself() {
        for e in entries() {
            let file = e.parse();
            assert_eq!(file.name, e.name, "fixture name must match entry name");
            let formatted = format_scenario(&file);
            let reparsed = crate::io::parse_scenario(&formatted)
                .unwrap_or_else(|err| panic!("{}: formatted source fails: {err}", e.name));
            assert_eq!(file, reparsed, "{}: format must be faithful", e.name);
        }
    }

    #[test]
    fn every_expectation_is_reproduced() {
        for e in entries() {
            let file = e.parse();
            assert!(!e.expected.is_empty(), "{}: entry without expectations", e.name);
            for (quantity, expected) in e.expected {
                let got = evaluate_quantity(&file, quantity)
                    .unwrap_or_else(|err| panic!("{}: {quantity}: {err}", e.name));
                assert_eq!(
                    &got, expected,
                    "{}: {quantity} disagrees with the derivation",
                    e.name
                );
            }
        }
    }

    #[test]
    fn unknown_quantities_are_reported() {
        let file = entry("cusp-germ").unwrap().parse();
        assert!(evaluate_quantity(&file, "residual").is_err());
        let file = entry("broughton").unwrap().parse();
        assert!(evaluate_quantity(&file, "zeta_zero").is_err());
        assert!(evaluate_quantity(&file, "zeta").is_err());
    }

    #[test]
    fn restricted_quantities_need_a_hypersurface() {
        let file = entry("broughton").unwrap().parse();
        let err = evaluate_quantity(&file, "restricted_chi_gen").unwrap_err();
        assert!(err.contains("hypersurface"));
    }

    #[test]
    fn derivations_exist_for_every_entry() {
        for e in entries() {
            assert!(
                e.derivation.len() > 40,
                "{}: derivation must actually explain the numbers",
                e.name
            );
        }
    }
}
