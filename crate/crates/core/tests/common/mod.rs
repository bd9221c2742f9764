#![allow(dead_code)]

use olslab::compute_ck;
use olslab::random::{gaussian_unit_columns, stream_id, stream_rng};
use olslab::rip::exact_rip_constant;
use olslab::SensingMatrixF64;

pub fn gaussian(seed: u64, stream: u64, m: usize, n: usize) -> SensingMatrixF64 {
    gaussian_unit_columns(&mut stream_rng(seed, stream), m, n).unwrap()
}

/// Shape used when rejection sampling for `delta_{K+1} < C_K`.
pub fn certified_shape(k: usize) -> (usize, usize) {
    match k {
        1 => (8, 12),
        2 => (32, 12),
        _ => (64, 12),
    }
}

/// The first `count` draws whose `delta_{K+1}` is below `C_K`.
pub fn certified_matrices(k: usize, count: usize, seed: u64) -> Vec<SensingMatrixF64> {
    let (m, n) = certified_shape(k);
    let ck: f64 = compute_ck(k).unwrap();
    let mut out = Vec::with_capacity(count);
    let mut draw = 0u64;
    while out.len() < count {
        let a = gaussian(seed, stream_id(k as u64, draw), m, n);
        draw += 1;
        assert!(draw < 100 * count as u64, "rejection sampling stalled for K = {k}");
        if exact_rip_constant(&a, k + 1).unwrap().delta < ck {
            out.push(a);
        }
    }
    out
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
