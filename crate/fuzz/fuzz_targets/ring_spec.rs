#![no_main]

use libfuzzer_sys::fuzz_target;
use sectional_core::rings::{parse_ring_spec, Ring};

fuzz_target!(|data: &[u8]| {
    if let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) {
        if let Ok(spec) = parse_ring_spec(&v) {
            let _ = Ring::from_spec(&spec);
        }
    }
});
