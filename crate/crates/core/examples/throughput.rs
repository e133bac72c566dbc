//! Rough timing of standard performance on a few rule types.
use std::time::Instant;

use majority_landscape::rule::known;
use majority_landscape::{standard_performance, Rule};

fn main() {
    let random = Rule::from_bits(0x0123_4567_89AB_CDEF_FEDC_BA98_7654_3210);
    for (name, rule, n) in [
        ("GKL", Rule::from_hex(known::GKL).unwrap(), 10_000),
        ("Coe2", Rule::from_hex(known::COE2).unwrap(), 10_000),
        ("zero", Rule::ZERO, 10_000),
        ("random", random, 1_000),
    ] {
        let t = Instant::now();
        let f = standard_performance(rule, n, 1);
        println!("{name:8} n={n:6} f={:.4} {:?}", f.value, t.elapsed());
    }
}
