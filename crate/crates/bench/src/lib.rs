//! Inputs shared by the benchmarks in `benches/`.

use minimod::classify::{canonical_model, ClassLabel};
use minimod::oracle::scramble;
use minimod::{FieldMode, MinimalAlgebra};

/// Scrambled copies of a few six-dimensional models, one per signature shape.
pub fn scrambled_models(mode: FieldMode) -> Vec<(String, MinimalAlgebra)> {
    ["L6_3", "L6_7", "L6_2[a=2]", "L6_12[a=3]", "L6_15", "L6_17[a=-1]", "L6_22"]
        .iter()
        .filter_map(|s| ClassLabel::parse(s, mode).ok())
        .map(|l| {
            let (alg, _) = scramble(&canonical_model(&l, mode).unwrap(), 17).unwrap();
            (l.to_string(), alg)
        })
        .collect()
}
