//! Input builders shared by the benchmarks: large but structured
//! normal-crossing models, deep cyclotomic products, and big scenario
//! files, all seeded so runs are comparable.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use merozeta::{CyclotomicProduct, MultStratum, NCModel};

/// A model with `size` strata and multiplicities up to `size`, the shape a
/// long resolution chain produces.
pub fn large_model(size: u64, seed: u64) -> NCModel {
    let mut rng = StdRng::seed_from_u64(seed);
    let strata = (0..size)
        .map(|i| {
            MultStratum::new(
                format!("e{i}"),
                rng.gen_range(0..=size),
                rng.gen_range(0..=size),
                rng.gen_range(-5..=5),
            )
        })
        .collect();
    NCModel::new(strata).expect("generated labels are distinct")
}

/// A cyclotomic product with `orders` distinct orders and large exponents.
pub fn deep_product(orders: u64, seed: u64) -> CyclotomicProduct {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut z = CyclotomicProduct::unit();
    for m in 1..=orders {
        let e = rng.gen_range(-1000..=1000i64);
        if e != 0 {
            z = z.mul(&CyclotomicProduct::cyclo(m, e).expect("positive order"));
        }
    }
    z
}

/// A syntactically heavy meromorphic scenario: `values` declared values
/// with `strata` fibre strata each, every one carrying a zeta literal.
pub fn large_scenario_text(values: u32, strata: u32) -> String {
    let mut text = String::new();
    text.push_str("scenario big\n  kind meromorphic\n  dim 3\n");
    let chi_fiber = strata as i64;
    // Every fibre is typical, so the identity pins chi_M at twice the
    // generic characteristic.
    let chi_m = 2 * chi_fiber;
    text.push_str(&format!("  chi_M {chi_m}\n  chi_ind 0\n  chi_Q0 1\n"));
    text.push_str(&format!("  chi_gen {chi_fiber}\n"));
    for v in 0..values {
        text.push_str(&format!("  value c{v}\n"));
        text.push_str(&format!("    chi_fiber {chi_fiber}\n"));
        for s in 0..strata {
            text.push_str(&format!(
                "    fiber_stratum label=v{v}s{s} chi=1 zeta=[1:1]\n"
            ));
        }
        text.push_str("  end\n");
    }
    text.push_str("end\n");
    text
}
