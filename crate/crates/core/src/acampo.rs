//! Zeta-functions from normal-crossing models of a pair of divisors.
//!
//! After an embedded resolution, a quotient of two holomorphic germs looks
//! locally like `u · y^k / v · y^l` along each open stratum of the
//! exceptional arrangement: one distinguished coordinate `y`, multiplicity
//! `k` upstairs and `l` downstairs, units `u, v`. A'Campo's recipe reads
//! the zeta-function of the monodromy straight off these multiplicities:
//! only strata where the numerator dominates (`k > l`) contribute to the
//! monodromy around zero, each one a factor `(1 - t^{k-l})^χ`. Points where
//! two divisor components cross carry a genuinely two-variable normal form
//! and belong to no stratum, so they are simply absent from a model.
//!
//! The same model describes the monodromy around infinity after the two
//! divisors trade places, which turns `(k, l)` into `(l, k)`.
//!
//! A model does not remember whether it resolves a single germ or a whole
//! compact space; the formula is the same, only the set of strata fed in
//! changes. Strata with `k = l` never contribute to either side.

use num_bigint::BigInt;
use thiserror::Error;

use crate::zeta::CyclotomicProduct;

/// An open stratum of a normal-crossing model: along it the pair has the
/// one-variable normal form with multiplicities `k` over `l`, and the
/// stratum has Euler characteristic `chi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultStratum {
    pub label: String,
    pub k: u64,
    pub l: u64,
    pub chi: i64,
}

impl MultStratum {
    pub fn new(label: impl Into<String>, k: u64, l: u64, chi: i64) -> Self {
        Self {
            label: label.into(),
            k,
            l,
            chi,
        }
    }
}

/// Which monodromy a model is asked about: around the value zero or around
/// infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Zero,
    Infinity,
}

/// Model construction failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate stratum label `{0}` in a normal-crossing model")]
    DuplicateLabel(String),
}

/// A normal-crossing model: a list of multiplicity strata with distinct
/// labels. The empty model is valid and evaluates to the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NCModel {
    strata: Vec<MultStratum>,
}

impl NCModel {
    pub fn new(strata: Vec<MultStratum>) -> Result<Self, ModelError> {
        let mut seen = std::collections::BTreeSet::new();
        for s in &strata {
            if !seen.insert(s.label.as_str()) {
                return Err(ModelError::DuplicateLabel(s.label.clone()));
            }
        }
        Ok(Self { strata })
    }

    pub fn strata(&self) -> &[MultStratum] {
        &self.strata
    }

    /// The zeta-function of the monodromy around zero:
    /// `∏_{k > l} (1 - t^{k-l})^χ`.
    pub fn zeta_zero(&self) -> CyclotomicProduct {
        let mut acc = CyclotomicProduct::unit();
        for s in &self.strata {
            if s.k > s.l {
                let factor = CyclotomicProduct::cyclo(s.k - s.l, s.chi)
                    .expect("k > l gives a positive order");
                acc = acc.mul(&factor);
            }
        }
        acc
    }

    /// The zeta-function of the monodromy around infinity:
    /// `∏_{l > k} (1 - t^{l-k})^χ`. By definition this is the
    /// around-zero zeta of the model with the divisors swapped.
    pub fn zeta_infinity(&self) -> CyclotomicProduct {
        self.swap_pq().zeta_zero()
    }

    /// The model with the roles of the two divisors exchanged: every
    /// stratum trades `k` and `l`.
    pub fn swap_pq(&self) -> NCModel {
        NCModel {
            strata: self
                .strata
                .iter()
                .map(|s| MultStratum::new(s.label.clone(), s.l, s.k, s.chi))
                .collect(),
        }
    }

    /// The Euler characteristic of the corresponding Milnor fibre, read off
    /// as the degree of the zeta-function.
    pub fn chi_local(&self, side: Side) -> BigInt {
        match side {
            Side::Zero => self.zeta_zero().degree(),
            Side::Infinity => self.zeta_infinity().degree(),
        }
    }
}
