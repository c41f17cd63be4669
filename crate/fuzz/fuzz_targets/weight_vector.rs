#![no_main]

use std::sync::{Arc, OnceLock};

use libfuzzer_sys::fuzz_target;
use vdecomp::patterns::{build_catalog, LabelKind, PatternCatalog, WeightVector};

fn catalogs() -> &'static [Arc<PatternCatalog>] {
    static CATALOGS: OnceLock<Vec<Arc<PatternCatalog>>> = OnceLock::new();
    CATALOGS.get_or_init(|| {
        [LabelKind::Antisymmetric, LabelKind::Binary, LabelKind::bicolored()]
            .iter()
            .map(|kind| Arc::new(build_catalog(3, kind).unwrap()))
            .collect()
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for cat in catalogs() {
        if let Ok(v) = WeightVector::parse(cat.clone(), text) {
            let back = WeightVector::parse(cat.clone(), &v.to_spec_string()).expect("canonical text parses");
            assert_eq!(back, v);
        }
    }
});
