//! Polynomial scenarios: the affine specialisation of the global
//! bookkeeping.
//!
//! A polynomial map on affine `n`-space compactifies to a meromorphic
//! function on projective space, with `Q` a power of the hyperplane at
//! infinity. That pins down most of the global constructible data: the
//! ambient Euler characteristic is `n + 1`, the polar hypersurface is the
//! hyperplane at infinity with Euler characteristic `n`, and the
//! indeterminacy set sits inside it. A polynomial scenario therefore only
//! declares what is genuinely its own:
//!
//! * per finite value, a stratification of the affine fibre together with
//!   its isolated critical points and their Milnor numbers;
//! * strata of the indeterminacy set at infinity, with local zeta data per
//!   declared value;
//! * optionally, a cover of the whole hyperplane at infinity carrying the
//!   local zeta-functions at the value infinity, used only for the
//!   monodromy at infinity.
//!
//! Every global zeta-function splits as an affine factor times an
//! at-infinity factor; a value is atypical at infinity exactly when the
//! second factor is not the unit. The defect invariants specialise to the
//! affine Milnor sum `μ_P` and the at-infinity invariant `λ_P`, and the
//! consistency identity specialises to the classic formula
//! `χ(F_gen) = 1 + (-1)^{n-1} (μ_P + λ_P)`.
//!
//! Removing an affine hypersurface from the ambient space removes from
//! each fibre its section by the hypersurface; [`restrict_to_complement`]
//! recomputes the zeta-functions and jumps of the restricted function from
//! a declaration of those sections ([`HypersurfaceData`]).
//!
//! [`restrict_to_complement`]: PolynomialScenario::restrict_to_complement

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::euler::Stratum;
use crate::global::{
    chi_gen_to_i64, defect_sign, ChiGen, FiberData, FiberStratum, LocalZetaData,
    MeromorphicScenario, PolyValueExtras, ProjValue, Report, ScenarioError,
};
use crate::zeta::CyclotomicProduct;

/// An isolated critical point of the polynomial on a declared fibre. The
/// declared Milnor number must match the degree of the declared local
/// zeta-function through `μ = (-1)^{n-1} (deg ζ - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCrit {
    pub label: String,
    pub mu: i64,
    pub zeta: CyclotomicProduct,
}

impl PolyCrit {
    pub fn new(label: impl Into<String>, mu: i64, zeta: CyclotomicProduct) -> Self {
        Self {
            label: label.into(),
            mu,
            zeta,
        }
    }
}

/// The declared data of one finite value of a polynomial scenario: the
/// Euler characteristic of the affine fibre, a stratification of its
/// non-critical part, and its isolated critical points. The stratum chis
/// and the critical points (one point each) must add up to `chi_fiber`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyFiberData {
    pub chi_fiber: i64,
    pub strata: Vec<FiberStratum>,
    pub crits: Vec<PolyCrit>,
}

/// A polynomial map on affine `n`-space, described by constructible data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialScenario {
    pub name: String,
    /// Number of affine variables, at least 1.
    pub n: u32,
    /// Degree of the polynomial, at least 1. Recorded for the record; the
    /// invariants computed here depend on it only through the declared
    /// local data.
    pub degree: u64,
    pub chi_gen: ChiGen,
    /// Strata of the indeterminacy set inside the hyperplane at infinity,
    /// with local zeta data per declared (finite) value.
    pub inf_ind_strata: Vec<(Stratum, LocalZetaData)>,
    /// Optional cover of the whole hyperplane at infinity with the local
    /// zeta-functions at the value infinity. Required only by
    /// [`zeta_poly_infinity`](Self::zeta_poly_infinity); its chis must add
    /// up to `n`, the Euler characteristic of the hyperplane.
    pub inf_cover: Vec<(Stratum, CyclotomicProduct)>,
    /// The declared (potentially atypical) finite values.
    pub values: BTreeMap<ProjValue, PolyFiberData>,
}

/// The declared sections of the fibres by an affine hypersurface, for
/// restriction to its complement.
///
/// A value without an entry in `caps` has the generic section: Euler
/// characteristic `chi_cap_gen`, all points smooth in their fibre. A cap
/// with an empty stratum list is one smooth blob of its declared chi.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HypersurfaceData {
    /// Euler characteristic of the section of the generic fibre.
    pub chi_cap_gen: i64,
    pub caps: BTreeMap<ProjValue, CapData>,
    /// When removing the hypersurface changes the structure at infinity,
    /// the replacement stratification of the boundary at infinity of the
    /// restricted scenario, with local zeta data per declared value. When
    /// absent the at-infinity factors are kept as they are.
    pub inf_strata: Option<Vec<(Stratum, LocalZetaData)>>,
}

/// The section of one declared fibre by the hypersurface.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CapData {
    pub chi: i64,
    /// Stratification of the section with local zeta-functions in the
    /// ambient fibre; empty means one smooth blob.
    pub strata: Vec<FiberStratum>,
}

/// Everything the restriction computes at one value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedValue {
    pub value: ProjValue,
    /// The at-infinity factor of the restricted zeta-function.
    pub infinity_factor: CyclotomicProduct,
    /// The product of local zeta-functions over the removed section.
    pub cap_factor: CyclotomicProduct,
    /// The affine factor after removal of the section.
    pub affine_factor: CyclotomicProduct,
    /// `affine_factor * infinity_factor`.
    pub zeta: CyclotomicProduct,
    /// Euler characteristic of the restricted fibre.
    pub chi_fiber: BigInt,
    /// `deg zeta - chi_fiber`, the restricted jump.
    pub chi_jump: BigInt,
    /// Euler characteristic of the restricted generic fibre.
    pub chi_gen: BigInt,
}

impl PolynomialScenario {
    /// Checks the affine bookkeeping: dimension and degree positive,
    /// declared values finite, labels distinct (strata, critical points
    /// and indeterminacy strata share one namespace per value), stratum
    /// chis plus critical points adding up to each `chi_fiber`, declared
    /// Milnor numbers matching their zeta degrees, local zeta data only at
    /// declared values, and the infinity cover (when present) adding up to
    /// the Euler characteristic of the hyperplane at infinity.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.n == 0 {
            return Err(ScenarioError::ZeroDimension);
        }
        if self.degree == 0 {
            return Err(ScenarioError::ZeroDegree);
        }
        for value in self.values.keys() {
            if value.is_infinite() {
                return Err(ScenarioError::InfiniteValue(value.clone()));
            }
        }
        let mut ind_labels = BTreeSet::new();
        for (s, data) in &self.inf_ind_strata {
            if !ind_labels.insert(s.label.as_str()) {
                return Err(ScenarioError::DuplicateLabel(s.label.clone()));
            }
            for value in data.declared_values() {
                if !self.values.contains_key(value) {
                    return Err(ScenarioError::UndeclaredValueData {
                        label: s.label.clone(),
                        value: value.clone(),
                    });
                }
            }
        }
        let sign = defect_sign(self.n);
        for (value, fiber) in &self.values {
            let mut labels = ind_labels.clone();
            for fs in &fiber.strata {
                if !labels.insert(fs.stratum.label.as_str()) {
                    return Err(ScenarioError::DuplicateLabel(fs.stratum.label.clone()));
                }
            }
            for crit in &fiber.crits {
                if !labels.insert(crit.label.as_str()) {
                    return Err(ScenarioError::DuplicateLabel(crit.label.clone()));
                }
                let implied = (crit.zeta.degree() - 1) * sign;
                if BigInt::from(crit.mu) != implied {
                    return Err(ScenarioError::MuZetaMismatch {
                        label: crit.label.clone(),
                        declared: crit.mu,
                        implied,
                    });
                }
            }
            let sum: i64 = fiber.strata.iter().map(|fs| fs.stratum.chi).sum::<i64>()
                + fiber.crits.len() as i64;
            if sum != fiber.chi_fiber {
                return Err(ScenarioError::FiberChiMismatch {
                    value: value.clone(),
                    declared: fiber.chi_fiber,
                    actual: sum,
                });
            }
        }
        if !self.inf_cover.is_empty() {
            let mut labels = BTreeSet::new();
            for (s, _) in &self.inf_cover {
                if !labels.insert(s.label.as_str()) {
                    return Err(ScenarioError::DuplicateLabel(s.label.clone()));
                }
            }
            let total: i64 = self.inf_cover.iter().map(|(s, _)| s.chi).sum();
            if total != self.n as i64 {
                return Err(ScenarioError::InfinityCoverIncomplete {
                    expected: self.n as i64,
                    actual: total,
                });
            }
        }
        Ok(())
    }

    /// Euler characteristic of the indeterminacy set at infinity.
    pub fn chi_ind(&self) -> i64 {
        self.inf_ind_strata.iter().map(|(s, _)| s.chi).sum()
    }

    pub fn is_declared(&self, value: &ProjValue) -> bool {
        self.values.contains_key(value)
    }

    /// `χ(F_gen)`: as declared, or through the classic formula when auto.
    pub fn resolve_chi_gen(&self) -> Result<BigInt, ScenarioError> {
        match self.chi_gen {
            ChiGen::Explicit(chi) => Ok(BigInt::from(chi)),
            ChiGen::Auto => Ok(self.chi_gen_classic()),
        }
    }

    pub fn typical_zeta(&self) -> Result<CyclotomicProduct, ScenarioError> {
        Ok(CyclotomicProduct::cyclo(1, self.resolve_chi_gen()?).expect("order 1 is positive"))
    }

    /// The affine factor of the zeta-function at a finite value: the
    /// integral of the local zeta-functions over the affine fibre.
    pub fn affine_factor(&self, value: &ProjValue) -> Result<CyclotomicProduct, ScenarioError> {
        let Some(fiber) = self.values.get(value) else {
            return self.typical_zeta();
        };
        let mut out = CyclotomicProduct::unit();
        for fs in &fiber.strata {
            out = out.mul(&fs.zeta.zeta().pow(fs.stratum.chi));
        }
        for crit in &fiber.crits {
            out = out.mul(&crit.zeta);
        }
        Ok(out)
    }

    /// The at-infinity factor of the zeta-function at a finite value: the
    /// integral of the local zeta-functions over the indeterminacy set.
    /// The unit at every undeclared value.
    pub fn infinity_factor(&self, value: &ProjValue) -> CyclotomicProduct {
        self.inf_ind_strata
            .iter()
            .fold(CyclotomicProduct::unit(), |acc, (s, data)| {
                acc.mul(&data.at(value).pow(s.chi))
            })
    }

    /// The zeta-function of the monodromy around a finite value, the
    /// product of the affine and at-infinity factors.
    pub fn zeta_poly_at(&self, value: &ProjValue) -> Result<CyclotomicProduct, ScenarioError> {
        if value.is_infinite() {
            return Err(ScenarioError::InfiniteValue(value.clone()));
        }
        Ok(self.affine_factor(value)?.mul(&self.infinity_factor(value)))
    }

    /// The zeta-function of the monodromy at infinity, integrated over the
    /// declared cover of the hyperplane at infinity.
    pub fn zeta_poly_infinity(&self) -> Result<CyclotomicProduct, ScenarioError> {
        if self.inf_cover.is_empty() {
            return Err(ScenarioError::InfinityCoverMissing);
        }
        Ok(self
            .inf_cover
            .iter()
            .fold(CyclotomicProduct::unit(), |acc, (s, zeta)| {
                acc.mul(&zeta.pow(s.chi))
            }))
    }

    /// Euler characteristic of the affine fibre over a finite value.
    pub fn chi_fiber_at(&self, value: &ProjValue) -> Result<BigInt, ScenarioError> {
        match self.values.get(value) {
            Some(fiber) => Ok(BigInt::from(fiber.chi_fiber)),
            None => self.resolve_chi_gen(),
        }
    }

    /// The affine Milnor sum at a value: the declared Milnor numbers plus
    /// the signed defect integral of the non-critical strata.
    pub fn mu_p_at(&self, value: &ProjValue) -> BigInt {
        let Some(fiber) = self.values.get(value) else {
            return BigInt::from(0);
        };
        let strata_defect: BigInt = fiber
            .strata
            .iter()
            .map(|fs| BigInt::from(fs.stratum.chi) * (fs.zeta.zeta().degree() - 1))
            .sum();
        let crit_sum: BigInt = fiber.crits.iter().map(|c| BigInt::from(c.mu)).sum();
        strata_defect * defect_sign(self.n) + crit_sum
    }

    /// The at-infinity defect invariant at a value: the signed integral of
    /// the local zeta degrees over the indeterminacy set.
    pub fn lambda_p_at(&self, value: &ProjValue) -> BigInt {
        if !self.is_declared(value) {
            return BigInt::from(0);
        }
        let integral: BigInt = self
            .inf_ind_strata
            .iter()
            .map(|(s, data)| BigInt::from(s.chi) * data.at(value).degree())
            .sum();
        integral * defect_sign(self.n)
    }

    pub fn mu_p_total(&self) -> BigInt {
        self.values.keys().map(|v| self.mu_p_at(v)).sum()
    }

    pub fn lambda_p_total(&self) -> BigInt {
        self.values.keys().map(|v| self.lambda_p_at(v)).sum()
    }

    /// The jump `χ(F_gen) - χ(F_value)` predicted by the local data,
    /// equal to `deg ζ - χ(F_value)` identically. Zero at undeclared
    /// values.
    pub fn chi_jump(&self, value: &ProjValue) -> BigInt {
        (self.mu_p_at(value) + self.lambda_p_at(value)) * defect_sign(self.n)
    }

    /// A value is atypical at infinity when its at-infinity factor is not
    /// the unit.
    pub fn atypical_at_infinity(&self, value: &ProjValue) -> bool {
        !self.infinity_factor(value).is_unit()
    }

    /// The classic formula for the Euler characteristic of the generic
    /// fibre, `1 + (-1)^{n-1} (μ_P + λ_P)`.
    pub fn chi_gen_classic(&self) -> BigInt {
        BigInt::from(1) + (self.mu_p_total() + self.lambda_p_total()) * defect_sign(self.n)
    }

    /// The residual of the classic formula against the declared
    /// `χ(F_gen)`, oriented like the meromorphic residual: zero on
    /// consistent data.
    ///
    /// On the projective side this is the global consistency identity with
    /// the contribution of the value infinity eliminated; a polynomial
    /// scenario declares finite values only, and the fixed projective
    /// geometry of the compactification accounts for infinity exactly.
    pub fn consistency_residual(&self) -> Result<BigInt, ScenarioError> {
        let chi_gen = self.resolve_chi_gen()?;
        let predicted = (chi_gen - 1) * defect_sign(self.n);
        Ok(predicted - self.mu_p_total() - self.lambda_p_total())
    }

    /// The induced meromorphic scenario on projective space: ambient
    /// characteristic `n + 1`, polar hypersurface the hyperplane at
    /// infinity with characteristic `n`, critical points turned into point
    /// strata of their fibres. `χ(F_gen)` is resolved eagerly so the
    /// result never depends on further reconstruction.
    pub fn to_meromorphic(&self) -> Result<MeromorphicScenario, ScenarioError> {
        let chi_gen = chi_gen_to_i64(&self.resolve_chi_gen()?)?;
        let values = self
            .values
            .iter()
            .map(|(value, fiber)| {
                let mut strata = fiber.strata.clone();
                for crit in &fiber.crits {
                    strata.push(FiberStratum::explicit(
                        crit.label.clone(),
                        1,
                        crit.zeta.clone(),
                    ));
                }
                (
                    value.clone(),
                    FiberData {
                        chi_fiber: fiber.chi_fiber,
                        strata,
                    },
                )
            })
            .collect();
        Ok(MeromorphicScenario {
            name: self.name.clone(),
            n: self.n,
            chi_m: self.n as i64 + 1,
            chi_ind: self.chi_ind(),
            chi_q0: Some(self.n as i64),
            chi_gen: ChiGen::Explicit(chi_gen),
            ind_strata: self.inf_ind_strata.clone(),
            values,
        })
    }

    /// Euler characteristic of the generic fibre of the restriction to the
    /// complement of the hypersurface.
    pub fn restricted_chi_gen(&self, hyp: &HypersurfaceData) -> Result<BigInt, ScenarioError> {
        Ok(self.resolve_chi_gen()? - hyp.chi_cap_gen)
    }

    fn cap_chi(&self, hyp: &HypersurfaceData, value: &ProjValue) -> i64 {
        hyp.caps.get(value).map_or(hyp.chi_cap_gen, |cap| cap.chi)
    }

    fn cap_factor(&self, hyp: &HypersurfaceData, value: &ProjValue) -> CyclotomicProduct {
        match hyp.caps.get(value) {
            Some(cap) if !cap.strata.is_empty() => cap
                .strata
                .iter()
                .fold(CyclotomicProduct::unit(), |acc, fs| {
                    acc.mul(&fs.zeta.zeta().pow(fs.stratum.chi))
                }),
            Some(cap) => CyclotomicProduct::cyclo(1, cap.chi).expect("order 1 is positive"),
            None => CyclotomicProduct::cyclo(1, hyp.chi_cap_gen).expect("order 1 is positive"),
        }
    }

    /// Restricts the scenario to the complement of an affine hypersurface
    /// at one finite value: the section of the fibre is removed from the
    /// affine factor, and the at-infinity factor is replaced when the
    /// hypersurface data declares a replacement boundary.
    pub fn restrict_to_complement(
        &self,
        hyp: &HypersurfaceData,
        value: &ProjValue,
    ) -> Result<RestrictedValue, ScenarioError> {
        if value.is_infinite() {
            return Err(ScenarioError::InfiniteValue(value.clone()));
        }
        self.validate_hypersurface(hyp)?;
        let cap_factor = self.cap_factor(hyp, value);
        let affine_factor = self.affine_factor(value)?.mul(&cap_factor.inv());
        let infinity_factor = match &hyp.inf_strata {
            None => self.infinity_factor(value),
            Some(strata) => strata.iter().fold(CyclotomicProduct::unit(), |acc, (s, data)| {
                acc.mul(&data.at(value).pow(s.chi))
            }),
        };
        let zeta = affine_factor.mul(&infinity_factor);
        let chi_fiber = self.chi_fiber_at(value)? - self.cap_chi(hyp, value);
        let chi_jump = zeta.degree() - &chi_fiber;
        Ok(RestrictedValue {
            value: value.clone(),
            infinity_factor,
            cap_factor,
            affine_factor,
            zeta,
            chi_fiber,
            chi_jump,
            chi_gen: self.restricted_chi_gen(hyp)?,
        })
    }

    /// Checks the hypersurface data against this scenario: sections only
    /// at declared values, stratum chis adding up to each declared section
    /// chi, labels distinct, and replacement boundary data only at
    /// declared values.
    pub fn validate_hypersurface(&self, hyp: &HypersurfaceData) -> Result<(), ScenarioError> {
        for (value, cap) in &hyp.caps {
            if !self.values.contains_key(value) {
                return Err(ScenarioError::CapUndeclaredValue(value.clone()));
            }
            if !cap.strata.is_empty() {
                let mut labels = BTreeSet::new();
                for fs in &cap.strata {
                    if !labels.insert(fs.stratum.label.as_str()) {
                        return Err(ScenarioError::DuplicateLabel(fs.stratum.label.clone()));
                    }
                }
                let sum: i64 = cap.strata.iter().map(|fs| fs.stratum.chi).sum();
                if sum != cap.chi {
                    return Err(ScenarioError::CapChiMismatch {
                        value: value.clone(),
                        declared: cap.chi,
                        actual: sum,
                    });
                }
            }
        }
        if let Some(strata) = &hyp.inf_strata {
            let mut labels = BTreeSet::new();
            for (s, data) in strata {
                if !labels.insert(s.label.as_str()) {
                    return Err(ScenarioError::DuplicateLabel(s.label.clone()));
                }
                for value in data.declared_values() {
                    if !self.values.contains_key(value) {
                        return Err(ScenarioError::UndeclaredValueData {
                            label: s.label.clone(),
                            value: value.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Assembles the full report: the induced meromorphic records with the
    /// polynomial extras filled in, the classic reconstruction of
    /// `χ(F_gen)`, and the affine consistency residual.
    pub fn build_report(&self) -> Result<Report, ScenarioError> {
        self.validate()?;
        let mut report = self.to_meromorphic()?.build_report()?;
        for record in &mut report.values {
            record.poly = Some(PolyValueExtras {
                atypical_at_infinity: self.atypical_at_infinity(&record.value),
                mu_p: self.mu_p_at(&record.value),
                lambda_p: self.lambda_p_at(&record.value),
            });
        }
        report.residual = self.consistency_residual()?;
        report.chi_gen_classic = Some(self.chi_gen_classic());
        Ok(report)
    }
}
