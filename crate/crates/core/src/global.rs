//! Global monodromy bookkeeping for a meromorphic function on a compact
//! space.
//!
//! A scenario describes a function `P/Q` on a compact complex manifold `M`
//! purely through constructible data: the Euler characteristics of `M`, of
//! the indeterminacy set `{P = Q = 0}` and of the declared fibres, together
//! with local zeta-functions along strata. From these the module assembles,
//! value by value, the zeta-function of the monodromy, the defect of the
//! fibre Euler characteristic, and the two defect invariants `μ` and `λ`
//! (the fibre part and the indeterminacy part of the defect, up to the
//! dimension sign).
//!
//! Values of the function live on the projective line: `0`, `inf`, or an
//! opaque finite tag. A value not declared in the scenario is typical by
//! convention: its fibre is the generic one, its zeta-function is
//! `(1 - t)^{χ(F_gen)}`, and it contributes nothing to any defect total.
//!
//! The sum `μ + λ` over all values satisfies a closed consistency identity
//! against `χ(M)`, `χ(F_gen)` and the indeterminacy characteristic; the
//! residual of that identity is the scenario's primary health check. When
//! `χ(F_gen)` is not known it can be reconstructed from the defect totals
//! and `χ({Q = 0})`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::euler::{integrate_zeta, IntegrationError, Stratum, ZetaAssignment};
use crate::zeta::CyclotomicProduct;

/// A point of the projective line of values: zero, infinity, or a finite
/// value named by an opaque tag. The spellings `0` and `inf` are reserved
/// for the first two, so a tag never collides with them.
///
/// The derived order (zero, finite tags lexicographically, infinity) is
/// the canonical report order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProjValue {
    Zero,
    Finite(String),
    Infinity,
}

impl ProjValue {
    /// A finite value with the given tag; the reserved spellings map to
    /// the dedicated variants.
    pub fn finite(tag: impl Into<String>) -> Self {
        let tag = tag.into();
        match tag.as_str() {
            "0" => ProjValue::Zero,
            "inf" => ProjValue::Infinity,
            _ => ProjValue::Finite(tag),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjValue::Infinity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("a value tag must be a nonempty token")]
pub struct InvalidValueTag;

impl FromStr for ProjValue {
    type Err = InvalidValueTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || s.chars().any(|c| c.is_whitespace()) {
            return Err(InvalidValueTag);
        }
        Ok(ProjValue::finite(s))
    }
}

impl fmt::Display for ProjValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjValue::Zero => f.write_str("0"),
            ProjValue::Infinity => f.write_str("inf"),
            ProjValue::Finite(tag) => f.write_str(tag),
        }
    }
}

/// Local zeta-functions of a germ, one per value of the function. Values
/// without an entry default to the unit: a germ only has a nontrivial
/// monodromy around finitely many values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalZetaData {
    by_value: BTreeMap<ProjValue, CyclotomicProduct>,
}

impl LocalZetaData {
    /// Data that is the unit at every value.
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Sets the zeta-function at one value; a unit entry is dropped so the
    /// representation stays canonical.
    pub fn set(&mut self, value: ProjValue, zeta: CyclotomicProduct) {
        if zeta.is_unit() {
            self.by_value.remove(&value);
        } else {
            self.by_value.insert(value, zeta);
        }
    }

    /// Builder form of [`set`](Self::set).
    pub fn with(mut self, value: ProjValue, zeta: CyclotomicProduct) -> Self {
        self.set(value, zeta);
        self
    }

    /// The zeta-function at a value, the unit when none was declared.
    pub fn at(&self, value: &ProjValue) -> CyclotomicProduct {
        self.by_value.get(value).cloned().unwrap_or_default()
    }

    /// The values with a nontrivial entry.
    pub fn declared_values(&self) -> impl Iterator<Item = &ProjValue> {
        self.by_value.keys()
    }

    /// The nontrivial entries in canonical value order.
    pub fn entries(&self) -> impl Iterator<Item = (&ProjValue, &CyclotomicProduct)> {
        self.by_value.iter()
    }

    pub fn is_trivial(&self) -> bool {
        self.by_value.is_empty()
    }
}

/// How the Euler characteristic of the generic fibre is provided: declared
/// outright, or reconstructed from the defect totals and `χ({Q = 0})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiGen {
    Explicit(i64),
    Auto,
}

/// The local zeta-function of a fibre stratum at its own value. A smooth
/// stratum contributes `1 - t` there; at every other value a fibre point
/// contributes the unit because its germ does not attain that value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberZeta {
    Smooth,
    Explicit(CyclotomicProduct),
}

impl FiberZeta {
    pub fn zeta(&self) -> CyclotomicProduct {
        match self {
            FiberZeta::Smooth => CyclotomicProduct::one_minus_t(),
            FiberZeta::Explicit(z) => z.clone(),
        }
    }
}

/// One stratum of a declared fibre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberStratum {
    pub stratum: Stratum,
    pub zeta: FiberZeta,
}

impl FiberStratum {
    pub fn smooth(label: impl Into<String>, chi: i64) -> Self {
        Self {
            stratum: Stratum::new(label, chi),
            zeta: FiberZeta::Smooth,
        }
    }

    pub fn explicit(label: impl Into<String>, chi: i64, zeta: CyclotomicProduct) -> Self {
        Self {
            stratum: Stratum::new(label, chi),
            zeta: FiberZeta::Explicit(zeta),
        }
    }
}

/// The declared data of one value: the Euler characteristic of its fibre
/// and a stratification of the fibre with local zeta-functions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FiberData {
    pub chi_fiber: i64,
    pub strata: Vec<FiberStratum>,
}

/// A meromorphic function on a compact `n`-fold, described by constructible
/// data. See the module documentation for the conventions; `validate`
/// spells out the well-formedness rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeromorphicScenario {
    pub name: String,
    /// Complex dimension of the ambient space, at least 1.
    pub n: u32,
    /// Euler characteristic of the ambient space.
    pub chi_m: i64,
    /// Euler characteristic of the indeterminacy set `{P = Q = 0}`.
    pub chi_ind: i64,
    /// Euler characteristic of `{Q = 0}`, needed only to reconstruct
    /// `χ(F_gen)` from the defect totals.
    pub chi_q0: Option<i64>,
    pub chi_gen: ChiGen,
    /// Strata covering the indeterminacy set, with local zeta data per
    /// declared value.
    pub ind_strata: Vec<(Stratum, LocalZetaData)>,
    /// The declared (potentially atypical) values.
    pub values: BTreeMap<ProjValue, FiberData>,
}

/// Well-formedness and computation failures of scenarios.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("duplicate stratum label `{0}`")]
    DuplicateLabel(String),
    #[error("indeterminacy strata chi sums to {actual}, declared chi_ind is {declared}")]
    IndChiMismatch { declared: i64, actual: i64 },
    #[error("fibre strata of value {value} sum to chi {actual}, declared chi_fiber is {declared}")]
    FiberChiMismatch {
        value: ProjValue,
        declared: i64,
        actual: i64,
    },
    #[error("stratum `{label}` carries zeta data at undeclared value {value}")]
    UndeclaredValueData { label: String, value: ProjValue },
    #[error("chi_gen is auto but chi_Q0 is not declared")]
    ChiGenUnresolvable,
    #[error("chi_Q0 is not declared")]
    MissingChiQ0,
    #[error("polynomial scenarios declare finite values only, got {0}")]
    InfiniteValue(ProjValue),
    #[error("critical point `{label}` declares mu {declared}, its zeta implies {implied}")]
    MuZetaMismatch {
        label: String,
        declared: i64,
        implied: BigInt,
    },
    #[error("infinity cover chi sums to {actual}, the hyperplane at infinity has chi {expected}")]
    InfinityCoverIncomplete { expected: i64, actual: i64 },
    #[error("no cover of the hyperplane at infinity with at-infinity zeta data is declared")]
    InfinityCoverMissing,
    #[error("hypersurface section at undeclared value {0}")]
    CapUndeclaredValue(ProjValue),
    #[error("hypersurface section strata of value {value} sum to chi {actual}, declared {declared}")]
    CapChiMismatch {
        value: ProjValue,
        declared: i64,
        actual: i64,
    },
    #[error("chi_gen {0} does not fit a 64-bit integer")]
    ChiGenOverflow(BigInt),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
}

/// The sign `(-1)^{n-1}` that turns defect integrals into the invariants
/// `μ` and `λ` in ambient dimension `n`.
pub fn defect_sign(n: u32) -> i64 {
    if n % 2 == 1 {
        1
    } else {
        -1
    }
}

impl MeromorphicScenario {
    /// Checks the constructible bookkeeping: dimension positive, labels
    /// distinct (within the indeterminacy list, within each fibre, and
    /// between the indeterminacy list and each fibre), stratum chi sums
    /// matching the declared totals, and local zeta data only at declared
    /// values.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.n == 0 {
            return Err(ScenarioError::ZeroDimension);
        }
        let mut ind_labels = std::collections::BTreeSet::new();
        for (s, _) in &self.ind_strata {
            if !ind_labels.insert(s.label.as_str()) {
                return Err(ScenarioError::DuplicateLabel(s.label.clone()));
            }
        }
        let ind_sum: i64 = self.ind_strata.iter().map(|(s, _)| s.chi).sum();
        if ind_sum != self.chi_ind {
            return Err(ScenarioError::IndChiMismatch {
                declared: self.chi_ind,
                actual: ind_sum,
            });
        }
        for (_, data) in &self.ind_strata {
            for value in data.declared_values() {
                if !self.values.contains_key(value) {
                    return Err(ScenarioError::UndeclaredValueData {
                        label: self
                            .ind_strata
                            .iter()
                            .find(|(_, d)| d.declared_values().any(|v| v == value))
                            .map(|(s, _)| s.label.clone())
                            .unwrap_or_default(),
                        value: value.clone(),
                    });
                }
            }
        }
        for (value, fiber) in &self.values {
            let mut labels = ind_labels.clone();
            for fs in &fiber.strata {
                if !labels.insert(fs.stratum.label.as_str()) {
                    return Err(ScenarioError::DuplicateLabel(fs.stratum.label.clone()));
                }
            }
            let sum: i64 = fiber.strata.iter().map(|fs| fs.stratum.chi).sum();
            if sum != fiber.chi_fiber {
                return Err(ScenarioError::FiberChiMismatch {
                    value: value.clone(),
                    declared: fiber.chi_fiber,
                    actual: sum,
                });
            }
        }
        Ok(())
    }

    pub fn is_declared(&self, value: &ProjValue) -> bool {
        self.values.contains_key(value)
    }

    fn assignments_at(&self, value: &ProjValue) -> Vec<ZetaAssignment> {
        let mut out = Vec::new();
        if let Some(fiber) = self.values.get(value) {
            for fs in &fiber.strata {
                out.push(ZetaAssignment::new(fs.stratum.clone(), fs.zeta.zeta()));
            }
        }
        for (stratum, data) in &self.ind_strata {
            out.push(ZetaAssignment::new(stratum.clone(), data.at(value)));
        }
        out
    }

    /// `χ(F_gen)`, either as declared or reconstructed from the defect
    /// totals and `χ({Q = 0})`.
    pub fn resolve_chi_gen(&self) -> Result<BigInt, ScenarioError> {
        match self.chi_gen {
            ChiGen::Explicit(chi) => Ok(BigInt::from(chi)),
            ChiGen::Auto => self
                .chi_gen_from_defects()
                .map_err(|_| ScenarioError::ChiGenUnresolvable),
        }
    }

    /// The zeta-function of a typical value, `(1 - t)^{χ(F_gen)}`.
    pub fn typical_zeta(&self) -> Result<CyclotomicProduct, ScenarioError> {
        Ok(CyclotomicProduct::cyclo(1, self.resolve_chi_gen()?).expect("order 1 is positive"))
    }

    /// The zeta-function of the monodromy around `value`: the
    /// multiplicative integral of the local zeta-functions over the fibre
    /// and the indeterminacy set for a declared value, the typical
    /// zeta-function otherwise.
    pub fn zeta_value(&self, value: &ProjValue) -> Result<CyclotomicProduct, ScenarioError> {
        if self.is_declared(value) {
            Ok(integrate_zeta(&self.assignments_at(value))?)
        } else {
            self.typical_zeta()
        }
    }

    /// The Euler characteristic of the fibre over `value`: as declared, or
    /// `χ(F_gen)` for an undeclared value.
    pub fn chi_fiber_at(&self, value: &ProjValue) -> Result<BigInt, ScenarioError> {
        match self.values.get(value) {
            Some(fiber) => Ok(BigInt::from(fiber.chi_fiber)),
            None => self.resolve_chi_gen(),
        }
    }

    /// The defect `χ(F_gen) - χ(F_value)` predicted by the local data:
    /// the fibre integral of `(χ_x - 1)` plus the indeterminacy integral
    /// of `χ_x`, where `χ_x` is the degree of the local zeta-function.
    /// Undeclared values have no defect.
    pub fn chi_defect(&self, value: &ProjValue) -> BigInt {
        if !self.is_declared(value) {
            return BigInt::from(0);
        }
        self.fiber_defect_integral(value) + self.ind_defect_integral(value)
    }

    fn fiber_defect_integral(&self, value: &ProjValue) -> BigInt {
        let Some(fiber) = self.values.get(value) else {
            return BigInt::from(0);
        };
        fiber
            .strata
            .iter()
            .map(|fs| BigInt::from(fs.stratum.chi) * (fs.zeta.zeta().degree() - 1))
            .sum()
    }

    fn ind_defect_integral(&self, value: &ProjValue) -> BigInt {
        self.ind_strata
            .iter()
            .map(|(s, data)| BigInt::from(s.chi) * data.at(value).degree())
            .sum()
    }

    /// The fibre part of the defect at `value`, with the dimension sign:
    /// `(-1)^{n-1}` times the fibre integral of `(χ_x - 1)`. For isolated
    /// critical points this is the sum of their Milnor numbers.
    pub fn mu_at(&self, value: &ProjValue) -> BigInt {
        if !self.is_declared(value) {
            return BigInt::from(0);
        }
        self.fiber_defect_integral(value) * defect_sign(self.n)
    }

    /// The indeterminacy part of the defect at `value`, with the dimension
    /// sign: `(-1)^{n-1}` times the indeterminacy integral of `χ_x`.
    pub fn lambda_at(&self, value: &ProjValue) -> BigInt {
        if !self.is_declared(value) {
            return BigInt::from(0);
        }
        self.ind_defect_integral(value) * defect_sign(self.n)
    }

    pub fn mu_total(&self) -> BigInt {
        self.values.keys().map(|v| self.mu_at(v)).sum()
    }

    pub fn lambda_total(&self) -> BigInt {
        self.values.keys().map(|v| self.lambda_at(v)).sum()
    }

    /// The residual of the global consistency identity
    /// `μ + λ = (-1)^{n-1} (2 χ(F_gen) - χ(M) + χ(ind))`,
    /// oriented so that increasing `chi_m` by `δ` moves the residual by
    /// `(-1)^n δ`. Zero on consistent data.
    pub fn consistency_residual(&self) -> Result<BigInt, ScenarioError> {
        let chi_gen = self.resolve_chi_gen()?;
        let predicted = (chi_gen * 2 - self.chi_m + self.chi_ind) * defect_sign(self.n);
        Ok(predicted - self.mu_total() - self.lambda_total())
    }

    /// Reconstructs `χ(F_gen)` from the defect totals:
    /// `χ(M) - χ({Q=0}) + (-1)^{n-1} (λ - λ(inf) + μ - μ(inf))`.
    /// Needs `chi_q0`.
    pub fn chi_gen_from_defects(&self) -> Result<BigInt, ScenarioError> {
        let chi_q0 = self.chi_q0.ok_or(ScenarioError::MissingChiQ0)?;
        let finite_defects = self.mu_total() + self.lambda_total()
            - self.mu_at(&ProjValue::Infinity)
            - self.lambda_at(&ProjValue::Infinity);
        Ok(BigInt::from(self.chi_m) - chi_q0 + finite_defects * defect_sign(self.n))
    }

    /// Assembles the full per-value report. Validates first.
    pub fn build_report(&self) -> Result<Report, ScenarioError> {
        self.validate()?;
        let chi_gen = self.resolve_chi_gen()?;
        let typical = self.typical_zeta()?;
        let mut records = Vec::new();
        for (value, fiber) in &self.values {
            let zeta = self.zeta_value(value)?;
            let degree = zeta.degree();
            let atypical = zeta != typical || BigInt::from(fiber.chi_fiber) != chi_gen;
            records.push(ValueRecord {
                value: value.clone(),
                zeta,
                degree,
                chi_fiber: fiber.chi_fiber,
                mu: self.mu_at(value),
                lambda: self.lambda_at(value),
                atypical,
                poly: None,
            });
        }
        Ok(Report {
            scenario: self.name.clone(),
            n: self.n,
            chi_gen,
            values: records,
            mu_total: self.mu_total(),
            lambda_total: self.lambda_total(),
            residual: self.consistency_residual()?,
            chi_gen_from_defects: self.chi_gen_from_defects().ok(),
            chi_gen_classic: None,
        })
    }
}

/// Everything the engine can say about one declared value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueRecord {
    pub value: ProjValue,
    pub zeta: CyclotomicProduct,
    pub degree: BigInt,
    pub chi_fiber: i64,
    pub mu: BigInt,
    pub lambda: BigInt,
    /// Set when the zeta-function differs from the typical one or the
    /// fibre Euler characteristic differs from the generic one.
    pub atypical: bool,
    /// Present only for reports built from polynomial scenarios.
    pub poly: Option<PolyValueExtras>,
}

/// The polynomial-specific slice of a value record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyValueExtras {
    /// The at-infinity factor of the zeta-function is not the unit.
    pub atypical_at_infinity: bool,
    /// Sum of the declared Milnor numbers at this value.
    pub mu_p: BigInt,
    /// The at-infinity defect invariant at this value.
    pub lambda_p: BigInt,
}

/// The computed summary of a scenario: one record per declared value in
/// canonical order, defect totals, the consistency residual, and the
/// reconstructions of `χ(F_gen)` that the data permits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub scenario: String,
    pub n: u32,
    pub chi_gen: BigInt,
    pub values: Vec<ValueRecord>,
    pub mu_total: BigInt,
    pub lambda_total: BigInt,
    pub residual: BigInt,
    pub chi_gen_from_defects: Option<BigInt>,
    /// `1 + (-1)^{n-1} (λ_P + μ_P)`, filled in by the polynomial frontend.
    pub chi_gen_classic: Option<BigInt>,
}

impl Report {
    /// The record of one value, if declared.
    pub fn record(&self, value: &ProjValue) -> Option<&ValueRecord> {
        self.values.iter().find(|r| &r.value == value)
    }
}

/// Converts a resolved `χ(F_gen)` back to a plain integer for storage in a
/// scenario, failing loudly on overflow.
pub(crate) fn chi_gen_to_i64(chi: &BigInt) -> Result<i64, ScenarioError> {
    chi.to_i64()
        .ok_or_else(|| ScenarioError::ChiGenOverflow(chi.clone()))
}
