//! Built-in families: the pure cubic fields `Q(∛(p³ - 1))` and the
//! biquadratic fields `Q(√(p² - 1), √-1)`.

mod ggc;
mod pure_cubic;

pub use ggc::{
    class_number_from_discriminant, evaluate_ggc_candidate, field_discriminant, ggc_scan,
    imag_quadratic_class_number, kuroda_check, lemma_a_predicate, lemma_a_scan, lemma_b_bound,
    roots_of_unity, GgcCandidate, GgcVerdict, KurodaResult, LemmaAPrime, EULER_GAMMA, MAX_SCAN,
};
pub use pure_cubic::{
    evaluate_pure_cubic, load_h_data, parse_h_data, pure_cubic_scan, PureCubicInstance,
    PureCubicRow,
};
