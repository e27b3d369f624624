//! Shipped fixtures, embedded at compile time.

use pisot_wfa::semiring::{Boolean, Natural};
use pisot_wfa::wfa::LinearRepresentation;
use pisot_wfa::NumerationSystem;

use crate::formats::{parse_json, LinrepFile, SystemFile};

pub const PHI2_JSON: &str = include_str!("../fixtures/phi2.json");
pub const ZECKENDORF_JSON: &str = include_str!("../fixtures/zeckendorf.json");
pub const SERIES_PHI2_JSON: &str = include_str!("../fixtures/series_phi2.json");
/// Expected value-indexed representation of the running example.
pub const VALUE_PHI2_JSON: &str = include_str!("../fixtures/value_phi2.json");
/// The same matrices exactly as printed in the source article, which lack
/// the edge `(1,Z) -1-> (3,Y)` of weight 2.
pub const VALUE_PHI2_PRINTED_JSON: &str = include_str!("../fixtures/value_phi2_printed.json");
/// Boolean series of words with an even number of ones.
pub const PARITY_BOOL_JSON: &str = include_str!("../fixtures/parity_bool.json");

fn system(text: &str, origin: &str) -> NumerationSystem {
    parse_json::<SystemFile>(text, origin)
        .and_then(|f| f.to_system())
        .expect("shipped system fixture is valid")
}

fn linrep<S: pisot_wfa::semiring::Semiring>(text: &str, origin: &str) -> LinearRepresentation<S> {
    parse_json::<LinrepFile>(text, origin)
        .and_then(|f| f.to_linrep())
        .expect("shipped series fixture is valid")
}

pub fn phi2() -> NumerationSystem {
    system(PHI2_JSON, "phi2.json")
}

pub fn zeckendorf() -> NumerationSystem {
    system(ZECKENDORF_JSON, "zeckendorf.json")
}

pub fn series_phi2() -> LinearRepresentation<Natural> {
    linrep(SERIES_PHI2_JSON, "series_phi2.json")
}

pub fn value_phi2() -> LinearRepresentation<Natural> {
    linrep(VALUE_PHI2_JSON, "value_phi2.json")
}

pub fn value_phi2_printed() -> LinearRepresentation<Natural> {
    linrep(VALUE_PHI2_PRINTED_JSON, "value_phi2_printed.json")
}

pub fn parity_bool() -> LinearRepresentation<Boolean> {
    linrep(PARITY_BOOL_JSON, "parity_bool.json")
}
