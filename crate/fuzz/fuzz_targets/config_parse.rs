//! The config parser must never panic: arbitrary input either yields a
//! validated SimConfig or a Config error.

#![no_main]

use libfuzzer_sys::fuzz_target;
use mott1d::config::SimConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = SimConfig::from_str(text) {
            // anything the parser accepts must satisfy the validated
            // invariants: strictly ordered spins, positive k0
            if let Some(det) = &cfg.detector {
                for i in 1..det.n_spins() {
                    assert!(det.position(i) < det.position(i + 1));
                }
            }
            if let Some(k0) = cfg.k0 {
                assert!(k0 > 0.0 && k0.is_finite());
            }
        }
    }
});
