//! Randomized cross-layer checks with a fixed seed: germ models under
//! the zero/infinity swap, the defect bookkeeping of random global
//! scenarios, stratum splitting, and the file format round-trip. These
//! complement the per-module property tests by exercising the layers
//! together through the public API.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use merozeta::{
    defect_sign, emit_json, format_scenario, parse_scenario, ChiGen, CyclotomicProduct,
    FiberData, FiberStratum, LocalZetaData, MeromorphicScenario, MultStratum, NCModel,
    ProjValue, ScenarioBody, ScenarioFile, Stratum,
};

fn rand_zeta(rng: &mut StdRng) -> CyclotomicProduct {
    let mut zeta = CyclotomicProduct::unit();
    for _ in 0..rng.gen_range(0..3) {
        let m = rng.gen_range(1..=6u64);
        let e = *[-3i64, -2, -1, 1, 2, 3]
            .iter()
            .nth(rng.gen_range(0..6))
            .unwrap();
        zeta = zeta.mul(&CyclotomicProduct::cyclo(m, e).unwrap());
    }
    zeta
}

fn random_model(rng: &mut StdRng) -> NCModel {
    let count = rng.gen_range(0..=6);
    let strata = (0..count)
        .map(|i| {
            MultStratum::new(
                format!("g{i}"),
                rng.gen_range(0..=6),
                rng.gen_range(0..=6),
                rng.gen_range(-3..=3),
            )
        })
        .collect();
    NCModel::new(strata).expect("labels are distinct by construction")
}

struct Labels(u32);

impl Labels {
    fn fresh(&mut self, prefix: &str) -> String {
        self.0 += 1;
        format!("{prefix}{}", self.0)
    }
}

fn random_scenario(rng: &mut StdRng) -> MeromorphicScenario {
    let mut labels = Labels(0);
    let declared: Vec<ProjValue> = ["0", "c", "d", "inf"]
        .iter()
        .filter(|_| rng.gen_bool(0.6))
        .map(|t| ProjValue::finite(*t))
        .collect();
    let mut values = BTreeMap::new();
    for value in &declared {
        let mut strata = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let chi = rng.gen_range(-3..=3);
            let label = labels.fresh("s");
            strata.push(if rng.gen_bool(0.5) {
                FiberStratum::smooth(label, chi)
            } else {
                FiberStratum::explicit(label, chi, rand_zeta(rng))
            });
        }
        let chi_fiber = strata.iter().map(|fs| fs.stratum.chi).sum();
        values.insert(value.clone(), FiberData { chi_fiber, strata });
    }
    let mut ind_strata = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let mut data = LocalZetaData::trivial();
        for value in &declared {
            if rng.gen_bool(0.4) {
                data.set(value.clone(), rand_zeta(rng));
            }
        }
        ind_strata.push((Stratum::new(labels.fresh("q"), rng.gen_range(-2..=2)), data));
    }
    let chi_ind = ind_strata.iter().map(|(s, _): &(Stratum, _)| s.chi).sum();
    let scenario = MeromorphicScenario {
        name: "random".into(),
        n: rng.gen_range(1..=4),
        chi_m: rng.gen_range(-5..=5),
        chi_ind,
        chi_q0: Some(rng.gen_range(-3..=3)),
        chi_gen: ChiGen::Explicit(rng.gen_range(-4..=4)),
        ind_strata,
        values,
    };
    scenario.validate().expect("generated scenarios are valid");
    scenario
}

#[test]
fn swap_exchanges_the_two_germ_zetas() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..500 {
        let model = random_model(&mut rng);
        let swapped = model.swap_pq();
        assert_eq!(model.zeta_infinity(), swapped.zeta_zero());
        assert_eq!(model.zeta_zero(), swapped.zeta_infinity());
        assert_eq!(swapped.swap_pq().strata(), model.strata());
    }
}

#[test]
fn germ_degree_is_the_weighted_chi_sum() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..500 {
        let model = random_model(&mut rng);
        let expected: i64 = model
            .strata()
            .iter()
            .filter(|s| s.k > s.l)
            .map(|s| (s.k - s.l) as i64 * s.chi)
            .sum();
        assert_eq!(model.zeta_zero().degree(), BigInt::from(expected));
    }
}

#[test]
fn mu_and_lambda_recombine_into_the_defect() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..300 {
        let scenario = random_scenario(&mut rng);
        let sign = defect_sign(scenario.n);
        for value in scenario.values.keys() {
            assert_eq!(
                scenario.mu_at(value) + scenario.lambda_at(value),
                scenario.chi_defect(value) * sign,
            );
        }
    }
}

#[test]
fn perturbing_the_total_space_moves_the_residual_predictably() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..300 {
        let scenario = random_scenario(&mut rng);
        let baseline = scenario.consistency_residual().unwrap();
        let delta = rng.gen_range(-5..=5i64);
        let mut perturbed = scenario.clone();
        perturbed.chi_m += delta;
        let moved = perturbed.consistency_residual().unwrap();
        // (-1)^n = -defect_sign(n)
        let expected = BigInt::from(-defect_sign(scenario.n) * delta);
        assert_eq!(moved - baseline, expected);
    }
}

/// Splits one randomly chosen stratum into two with the same local data
/// and χ summing to the original.
fn split_a_stratum(rng: &mut StdRng, scenario: &MeromorphicScenario) -> MeromorphicScenario {
    let mut out = scenario.clone();
    let mut labels = Labels(1000);
    let fiber_candidates: Vec<ProjValue> = out
        .values
        .iter()
        .filter(|(_, f)| !f.strata.is_empty())
        .map(|(v, _)| v.clone())
        .collect();
    let split_ind = !out.ind_strata.is_empty() && (fiber_candidates.is_empty() || rng.gen_bool(0.3));
    if split_ind {
        let i = rng.gen_range(0..out.ind_strata.len());
        let (stratum, data) = out.ind_strata[i].clone();
        let part = rng.gen_range(-2..=2);
        out.ind_strata[i] = (Stratum::new(labels.fresh("q"), part), data.clone());
        out.ind_strata
            .push((Stratum::new(labels.fresh("q"), stratum.chi - part), data));
    } else if let Some(value) = fiber_candidates.first() {
        let fiber = out.values.get_mut(value).expect("candidate exists");
        let i = rng.gen_range(0..fiber.strata.len());
        let original = fiber.strata[i].clone();
        let part = rng.gen_range(-2..=2);
        fiber.strata[i] = FiberStratum {
            stratum: Stratum::new(labels.fresh("s"), part),
            zeta: original.zeta.clone(),
        };
        fiber.strata.push(FiberStratum {
            stratum: Stratum::new(labels.fresh("s"), original.stratum.chi - part),
            zeta: original.zeta,
        });
    } else {
        return out;
    }
    out.validate().expect("split scenarios stay valid");
    out
}

#[test]
fn splitting_strata_changes_no_reported_quantity() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..200 {
        let scenario = random_scenario(&mut rng);
        let split = split_a_stratum(&mut rng, &scenario);
        assert_eq!(
            emit_json(&scenario.build_report().unwrap()),
            emit_json(&split.build_report().unwrap()),
        );
        assert_eq!(
            scenario.chi_gen_from_defects().unwrap(),
            split.chi_gen_from_defects().unwrap(),
        );
    }
}

#[test]
fn generated_scenarios_survive_the_file_format() {
    let mut rng = StdRng::seed_from_u64(16);
    for _ in 0..200 {
        let scenario = random_scenario(&mut rng);
        let file = ScenarioFile {
            name: scenario.name.clone(),
            body: ScenarioBody::Meromorphic(scenario),
        };
        let text = format_scenario(&file);
        let reparsed = parse_scenario(&text)
            .unwrap_or_else(|err| panic!("formatted scenario fails to parse: {err}\n{text}"));
        assert_eq!(file, reparsed);
    }
}

#[test]
fn zeta_degree_minus_fiber_chi_is_the_defect() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..300 {
        let scenario = random_scenario(&mut rng);
        for value in scenario.values.keys() {
            let zeta = scenario.zeta_value(value).unwrap();
            assert_eq!(
                zeta.degree() - scenario.chi_fiber_at(value).unwrap(),
                scenario.chi_defect(value),
            );
        }
    }
}
