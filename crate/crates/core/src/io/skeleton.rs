//! Scenario templates derived from a polynomial expression.
//!
//! Working out a stratification is manual work; getting the file
//! boilerplate right should not be. Given a polynomial, [`skeleton`]
//! emits a scenario file with the dimension and degree filled in, one
//! placeholder value block, and commented hints for the statements that
//! usually come next. The output always parses and validates, so it can
//! be handed straight to the checker and refined from there.

use super::polyexpr::PolyExpr;

fn sanitize_name(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| {
            if c.is_whitespace() || c == '#' || c == '=' {
                '-'
            } else {
                c
            }
        })
        .collect();
    if cleaned.is_empty() || cleaned == "end" {
        "scenario-1".to_string()
    } else {
        cleaned
    }
}

/// Builds a polynomial scenario template for `poly`, named `name`.
pub fn skeleton(name: &str, poly: &PolyExpr) -> String {
    let name = sanitize_name(name);
    let dim = poly.vars().len().max(1);
    let deg = poly.degree().max(1);
    // The hinted node must satisfy mu = (deg zeta - 1) * (-1)^{dim-1},
    // so the example zeta depends on the parity of the dimension.
    let node_zeta = if dim % 2 == 0 { "[]" } else { "[2:1]" };
    format!(
        "# template for P = {poly}\n\
         # chi_gen auto infers the generic fiber from the declared data,\n\
         # so the consistency residual of a template is zero by construction.\n\
         scenario {name}\n\
         \x20 kind polynomial\n\
         \x20 dim {dim}\n\
         \x20 deg {deg}\n\
         \x20 chi_gen auto\n\
         \x20 # strata of the indeterminacy locus at infinity, if any:\n\
         \x20 # inf_ind_stratum label=q chi=1 zeta@0=[1:-1]\n\
         \x20 # a full multiplicity cover of the hyperplane at infinity\n\
         \x20 # unlocks the zeta-function at infinity:\n\
         \x20 # inf_cover_stratum label=pole chi={dim} zeta_inf=[1:1]\n\
         \x20 value 0\n\
         \x20   chi_fiber 1\n\
         \x20   fiber_stratum label=smooth-part chi=1 smooth\n\
         \x20   # isolated critical points go here:\n\
         \x20   # crit label=node mu=1 zeta={node_zeta}\n\
         \x20 end\n\
         end\n"
    )
}
