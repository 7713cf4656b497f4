//! Integration with respect to the Euler characteristic.
//!
//! A constructible function on a stratified space is integrated by summing
//! its value on each stratum weighted by the Euler characteristic of the
//! stratum. When the values live in a multiplicative group the integral is
//! the corresponding product of stratum values raised to the Euler
//! characteristics. Both forms appear constantly downstream: zeta-functions
//! integrate multiplicatively, their degrees integrate additively, and the
//! two are intertwined by the degree homomorphism.
//!
//! Strata are labelled so that diagnostics can point at the offending piece
//! of a scenario; the labels carry no other meaning and in particular the
//! integrals are invariant under refining a stratum into pieces with the
//! same local data.

use num_bigint::BigInt;
use thiserror::Error;

use crate::zeta::CyclotomicProduct;

/// A stratum of a constructible partition: a label for diagnostics and the
/// Euler characteristic of the stratum, any integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub label: String,
    pub chi: i64,
}

impl Stratum {
    pub fn new(label: impl Into<String>, chi: i64) -> Self {
        Self {
            label: label.into(),
            chi,
        }
    }
}

/// One stratum of a multiplicative integrand together with its value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaAssignment {
    pub stratum: Stratum,
    pub value: CyclotomicProduct,
}

impl ZetaAssignment {
    pub fn new(stratum: Stratum, value: CyclotomicProduct) -> Self {
        Self { stratum, value }
    }
}

/// Integration failures: the strata of one integral must carry distinct
/// labels, otherwise the same piece of space would be counted twice.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegrationError {
    #[error("duplicate stratum label `{0}` in one integral")]
    DuplicateLabel(String),
}

fn check_distinct<'a>(labels: impl Iterator<Item = &'a str>) -> Result<(), IntegrationError> {
    let mut seen = std::collections::BTreeSet::new();
    for label in labels {
        if !seen.insert(label) {
            return Err(IntegrationError::DuplicateLabel(label.to_string()));
        }
    }
    Ok(())
}

/// The multiplicative integral `∏ value_Ξ ^ χ(Ξ)` over the given strata.
/// The empty list integrates to the unit.
pub fn integrate_zeta(
    assignments: &[ZetaAssignment],
) -> Result<CyclotomicProduct, IntegrationError> {
    check_distinct(assignments.iter().map(|a| a.stratum.label.as_str()))?;
    let mut acc = CyclotomicProduct::unit();
    for a in assignments {
        acc = acc.mul(&a.value.pow(a.stratum.chi));
    }
    Ok(acc)
}

/// The additive integral `Σ χ(Ξ) · value_Ξ` over the given strata. The
/// empty list integrates to zero.
pub fn integrate_int(values: &[(Stratum, BigInt)]) -> Result<BigInt, IntegrationError> {
    check_distinct(values.iter().map(|(s, _)| s.label.as_str()))?;
    Ok(values
        .iter()
        .map(|(s, v)| BigInt::from(s.chi) * v)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::parse_zeta;
    use proptest::prelude::*;

    fn z(text: &str) -> CyclotomicProduct {
        parse_zeta(text).expect("literal parses")
    }

    #[test]
    fn additive_integral_weights_by_chi() {
        let values = vec![
            (Stratum::new("a", 2), BigInt::from(3)),
            (Stratum::new("b", -1), BigInt::from(4)),
        ];
        assert_eq!(integrate_int(&values).unwrap(), BigInt::from(2));
    }

    #[test]
    fn additive_integral_of_nothing_is_zero() {
        assert_eq!(integrate_int(&[]).unwrap(), BigInt::from(0));
    }

    #[test]
    fn multiplicative_integral_raises_to_chi() {
        let assignments = vec![
            ZetaAssignment::new(Stratum::new("a", 1), z("[1:1]")),
            ZetaAssignment::new(Stratum::new("b", -2), z("[2:1]")),
        ];
        assert_eq!(integrate_zeta(&assignments).unwrap(), z("[1:1,2:-2]"));
    }

    #[test]
    fn multiplicative_integral_of_nothing_is_unit() {
        assert!(integrate_zeta(&[]).unwrap().is_unit());
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let values = vec![
            (Stratum::new("a", 1), BigInt::from(1)),
            (Stratum::new("a", 2), BigInt::from(2)),
        ];
        assert_eq!(
            integrate_int(&values).unwrap_err(),
            IntegrationError::DuplicateLabel("a".into())
        );
        let assignments = vec![
            ZetaAssignment::new(Stratum::new("s", 1), z("[]")),
            ZetaAssignment::new(Stratum::new("s", 1), z("[]")),
        ];
        assert_eq!(
            integrate_zeta(&assignments).unwrap_err(),
            IntegrationError::DuplicateLabel("s".into())
        );
    }

    fn arb_product() -> impl Strategy<Value = CyclotomicProduct> {
        prop::collection::vec((1u64..7, -3i64..4), 0..4).prop_map(|pairs| {
            pairs
                .into_iter()
                .fold(CyclotomicProduct::unit(), |acc, (m, e)| {
                    acc.mul(&CyclotomicProduct::cyclo(m, e).expect("positive order"))
                })
        })
    }

    fn arb_assignments() -> impl Strategy<Value = Vec<ZetaAssignment>> {
        prop::collection::vec((-5i64..6, arb_product()), 0..5).prop_map(|rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, (chi, value))| {
                    ZetaAssignment::new(Stratum::new(format!("s{i}"), chi), value)
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn degree_commutes_with_integration(assignments in arb_assignments()) {
            let zeta = integrate_zeta(&assignments).unwrap();
            let degrees: Vec<(Stratum, BigInt)> = assignments
                .iter()
                .map(|a| (a.stratum.clone(), a.value.degree()))
                .collect();
            prop_assert_eq!(zeta.degree(), integrate_int(&degrees).unwrap());
        }

        #[test]
        fn refining_a_stratum_preserves_the_integral(
            assignments in arb_assignments(),
            split in -4i64..5,
        ) {
            prop_assume!(!assignments.is_empty());
            let mut refined = assignments.clone();
            let target = refined.pop().unwrap();
            let chi = target.stratum.chi;
            refined.push(ZetaAssignment::new(
                Stratum::new("piece-one", split),
                target.value.clone(),
            ));
            refined.push(ZetaAssignment::new(
                Stratum::new("piece-two", chi - split),
                target.value.clone(),
            ));
            prop_assert_eq!(
                integrate_zeta(&assignments).unwrap(),
                integrate_zeta(&refined).unwrap()
            );
        }
    }
}
