//! Exact zeta-functions of local monodromies from stratified scenario
//! data.
//!
//! The library works with three layers of input, each a plain description
//! of constructible data rather than of equations:
//!
//! * germ models: normal-crossing divisors with multiplicities, from which
//!   the zeta-function of a local monodromy is read off stratum by
//!   stratum ([`acampo`]);
//! * meromorphic scenarios: a function on a compact manifold described by
//!   Euler characteristics and local zeta data, from which global
//!   zeta-functions, defects and consistency residuals are assembled
//!   ([`global`]);
//! * polynomial scenarios: the affine specialisation, with critical points,
//!   a cover of the hyperplane at infinity, and the classic formula for
//!   the Euler characteristic of the generic fibre ([`polynomial`]).
//!
//! All arithmetic is exact: zeta-functions are finite products
//! `∏ (1 - t^m)^{e_m}` with integer exponents ([`zeta`]), and every
//! integral against an Euler characteristic is a finite sum ([`euler`]).

pub mod acampo;
pub mod catalog;
pub mod euler;
pub mod global;
pub mod io;
pub mod polynomial;
pub mod zeta;

pub use acampo::{ModelError, MultStratum, NCModel, Side};
pub use euler::{integrate_int, integrate_zeta, IntegrationError, Stratum, ZetaAssignment};
pub use global::{
    defect_sign, ChiGen, FiberData, FiberStratum, FiberZeta, LocalZetaData, MeromorphicScenario,
    PolyValueExtras, ProjValue, Report, ScenarioError, ValueRecord,
};
pub use io::{
    emit_germ_json, emit_json, format_scenario, parse_poly, parse_scenario, skeleton,
    DiagnosticCode, ParseError, PolyExpr, ScenarioBody, ScenarioFile,
};
pub use polynomial::{
    CapData, HypersurfaceData, PolyCrit, PolyFiberData, PolynomialScenario, RestrictedValue,
};
pub use zeta::{
    format_zeta, parse_zeta, CyclotomicProduct, IntPoly, ParseZetaError, PolyFraction, ZetaError,
    ZetaParseKind,
};
