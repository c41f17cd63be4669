use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::Arc;

use vdecomp::hosts::{
    blowup_cyclic, complete_bipartite_bicolored, random_host, transitive_tournament, BlowupSpec, Host, InnerOrientation,
};
use vdecomp::io::{decode_digraph6, decode_graph6, read_vector_file};
use vdecomp::patterns::{build_catalog, LabelKind, WeightVector};
use vdecomp::ratio::parse_rational;

use crate::args::{HostArgs, HostKind};
use crate::error::{config, CliError};

/// Parses one digraph6 (leading `&`) or graph6 record.
pub fn decode_record(text: &str, provenance: &str) -> Result<Host, CliError> {
    let text = text.trim();
    if text.starts_with('&') || text.starts_with(">>digraph6<<") {
        let record = decode_digraph6(text.as_bytes()).map_err(config)?;
        record.to_tournament(provenance).map_err(config)
    } else {
        let graph = decode_graph6(text.as_bytes()).map_err(config)?;
        graph.to_bicolored(provenance).map_err(config)
    }
}

fn read_record(path: &Path, line: usize) -> Result<Host, CliError> {
    let file = std::fs::File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let text = BufReader::new(file)
        .lines()
        .nth(line.saturating_sub(1))
        .ok_or_else(|| config(format!("{} has no line {line}", path.display())))??;
    decode_record(&text, &format!("{}:{line}", path.display()))
}

pub fn build_host(args: &HostArgs, seed: u64) -> Result<Host, CliError> {
    let mut chosen = Vec::new();
    if let Some(parts) = &args.blowup {
        let inner = if args.random_inner { InnerOrientation::SeededRandom(seed) } else { InnerOrientation::Transitive };
        chosen.push(blowup_cyclic(&BlowupSpec { parts: parts.clone(), inner }).map_err(config)?);
    }
    if let Some(n) = args.transitive {
        chosen.push(transitive_tournament(n));
    }
    if let Some(text) = &args.digraph6 {
        chosen.push(decode_record(text, "--digraph6")?);
    }
    if let Some(text) = &args.graph6 {
        let graph = decode_graph6(text.trim().as_bytes()).map_err(config)?;
        chosen.push(graph.to_bicolored("--graph6").map_err(config)?);
    }
    if let Some(ab) = &args.bipartite {
        let [a, b] = ab[..] else { return Err(config("--bipartite takes two sizes A,B")) };
        chosen.push(complete_bipartite_bicolored(a, b));
    }
    if let Some(n) = args.random {
        let kind = match args.kind {
            HostKind::Tournament => LabelKind::Antisymmetric,
            HostKind::Graph => LabelKind::Binary,
            HostKind::Bicolored => LabelKind::bicolored(),
        };
        let p = parse_rational(&args.p).map_err(config)?;
        chosen.push(random_host(&kind, n, &p, seed).map_err(config)?);
    }
    if let Some(path) = &args.host_file {
        chosen.push(read_record(path, args.line)?);
    }
    match chosen.len() {
        1 => Ok(chosen.pop().expect("one host")),
        0 => Err(config(
            "no host given (use --blowup, --transitive, --digraph6, --graph6, --bipartite, --random or --host-file)",
        )),
        _ => Err(config("more than one host given")),
    }
}

/// Reads `--vector` against the catalog of order `k` and the given kind.
pub fn load_vector(spec: Option<&str>, k: usize, kind: &LabelKind) -> Result<WeightVector, CliError> {
    let spec = spec.ok_or_else(|| config("--vector is required"))?;
    let catalog = Arc::new(build_catalog(k, kind).map_err(config)?);
    let as_file = spec.strip_prefix('@').map(Path::new).or_else(|| {
        let p = Path::new(spec);
        (!spec.contains('=') || p.exists()).then_some(p)
    });
    match as_file {
        Some(path) => Ok(read_vector_file(path, catalog)?),
        None => WeightVector::parse(catalog, spec).map_err(config),
    }
}
