#![allow(dead_code)]

use pcm_core::search::SAATY_SCALE;
use pcm_core::{Pcm, Permutation};
use proptest::prelude::*;

pub fn scale_value(k: usize) -> f64 {
    let (p, q) = SAATY_SCALE[k];
    f64::from(p) / f64::from(q)
}

pub fn saaty_value() -> impl Strategy<Value = f64> {
    (0..SAATY_SCALE.len()).prop_map(scale_value)
}

pub fn saaty_pcm(n: usize) -> impl Strategy<Value = Pcm> {
    proptest::collection::vec(saaty_value(), n * (n - 1) / 2)
        .prop_map(move |upper| Pcm::from_upper(n, &upper).unwrap())
}

pub fn saaty_pcm_sized(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Pcm> {
    sizes.prop_flat_map(saaty_pcm)
}

/// Continuous entries in [1/9, 9], log-uniform.
pub fn continuous_pcm(n: usize) -> impl Strategy<Value = Pcm> {
    proptest::collection::vec(-9f64.ln()..9f64.ln(), n * (n - 1) / 2).prop_map(move |logs| {
        let upper: Vec<f64> = logs.into_iter().map(f64::exp).collect();
        Pcm::from_upper(n, &upper).unwrap()
    })
}

pub fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|m| Permutation::new(m).unwrap())
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
