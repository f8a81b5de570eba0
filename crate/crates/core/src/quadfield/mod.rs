//! Imaginary quadratic fields: reduced forms, ideal counts and their
//! ramified-prime sieve, the residue of the Dedekind zeta function, genus
//! characters and their unramified L-functions.
//!
//! Throughout, `D = |disc|`: genus characters are unramified, so the
//! character conductor contributes nothing.

mod field;
mod genus;

pub use field::{
    chapter3_integrals, chapter3_integrals_raw, crossover_beta, dedekind_zeta_product,
    dedekind_zeta_series, ideal_count, ideal_counts, kappa_class_number_formula, q_and_r,
    residue_kappa, sieved_a0, zeta_summation_b0, Chapter3Integrals, IdealCountStream,
    IdealCountTable, ImaginaryQuadraticField, QrProducts, ReducedForm, DEFAULT_X_CAP,
};
pub use genus::{
    beta_search, genus_beta_scan, genus_characters, genus_coefficients, genus_l_coefficients,
    genus_value, partial_sum_comparison, ramified_factor, unramified_l, unramified_l_series,
    unramified_l_series_many, BetaResult, GenusBetaRow, GenusCharacter, GenusStream, GenusValue,
    PartialSumComparison, SeriesValue, DEFAULT_BETA_CAP,
};
