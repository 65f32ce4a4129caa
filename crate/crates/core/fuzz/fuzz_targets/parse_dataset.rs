#![no_main]

use libfuzzer_sys::fuzz_target;
use matchclust::evaluation::parse_dataset;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ds) = parse_dataset(text, "fuzz") {
        assert_eq!(ds.vectors.len(), ds.labels.len());
        assert!(ds.vectors.iter().all(|v| v.len() == ds.dim() && v.iter().all(|x| x.is_finite())));
    }
});
