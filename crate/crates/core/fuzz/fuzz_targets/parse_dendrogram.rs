#![no_main]

use libfuzzer_sys::fuzz_target;
use matchclust::hierarchy::Dendrogram;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = Dendrogram::parse_text(text) {
        assert!(d.validate().is_empty(), "{:?}", d.validate());
        assert_eq!(Dendrogram::parse_text(&d.to_text()).expect("written dendrogram parses"), d);
        for k in 1..=d.leaves().min(64) {
            assert_eq!(d.extract_k_clustering(k).expect("k within range").len(), k);
        }
    }
});
