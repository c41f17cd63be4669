//! Replays the checked-in fuzz seeds through the round-trip properties the
//! fuzz targets assert, so the seeds stay valid on stable toolchains.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use vdecomp::io::checkpoint;
use vdecomp::io::{decode_digraph6, decode_graph6, encode_graph6, encode_record};
use vdecomp::lp::{dump_problem, parse_problem};
use vdecomp::patterns::{build_catalog, LabelKind, WeightVector};
use vdecomp::ratio::{fmt_rational, parse_rational};

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let bytes = fs::read(&p).unwrap();
            (p, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn digraph6_seeds() {
    for (path, bytes) in seeds("digraph6") {
        let record = decode_digraph6(&bytes).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let line = encode_record(&record).unwrap();
        assert_eq!(decode_digraph6(line.as_bytes()).unwrap(), record);
        assert!(record.to_tournament("seed").unwrap().is_tournament());
    }
}

#[test]
fn graph6_seeds() {
    for (path, bytes) in seeds("graph6") {
        let mut graph = decode_graph6(&bytes).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let mut again = decode_graph6(encode_graph6(&graph).unwrap().as_bytes()).unwrap();
        graph.edges.sort_unstable();
        again.edges.sort_unstable();
        assert_eq!(again, graph);
    }
}

#[test]
fn weight_vector_seeds() {
    let catalogs: Vec<_> = [LabelKind::Antisymmetric, LabelKind::Binary, LabelKind::bicolored()]
        .iter()
        .map(|k| Arc::new(build_catalog(3, k).unwrap()))
        .collect();
    for (path, bytes) in seeds("weight_vector") {
        let text = String::from_utf8(bytes).unwrap();
        let parsed: Vec<_> = catalogs.iter().filter_map(|c| WeightVector::parse(c.clone(), &text).ok()).collect();
        assert!(!parsed.is_empty(), "{} parses under no catalog", path.display());
        for v in parsed {
            assert_eq!(WeightVector::parse(v.catalog().clone(), &v.to_spec_string()).unwrap(), v);
        }
    }
}

#[test]
fn lp_text_seeds() {
    for (path, bytes) in seeds("lp_text") {
        let p =
            parse_problem(std::str::from_utf8(&bytes).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_problem(&dump_problem(&p)).unwrap(), p);
    }
}

#[test]
fn checkpoint_seeds() {
    for (path, bytes) in seeds("checkpoint") {
        let state = checkpoint::decode(&bytes).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(checkpoint::encode(&state).unwrap(), bytes);
    }
}

#[test]
fn rational_seeds() {
    for (path, bytes) in seeds("rational") {
        let q =
            parse_rational(std::str::from_utf8(&bytes).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_rational(&fmt_rational(&q)).unwrap(), q);
    }
}
