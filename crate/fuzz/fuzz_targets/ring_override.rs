#![no_main]

use libfuzzer_sys::fuzz_target;
use sectional_core::rings::{parse_ring_override, Ring};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(spec) = parse_ring_override(s) {
            let _ = Ring::from_spec(&spec);
        }
    }
});
