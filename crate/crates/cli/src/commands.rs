use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::json;
use vdecomp::decomp::{
    build_decomposition_lp, dstar_with, integer_optimum, nustar_with, random_graph_lp, CoverMode, DecompError,
    InfeasiblePolicy,
};
use vdecomp::hosts::enumerate_nonisomorphic_tournaments;
use vdecomp::io::checkpoint::{self, CheckpointError};
use vdecomp::io::report::{write_jsonl, write_report_jsonl, write_table_csv, EvalRecord};
use vdecomp::io::{encode_digraph6, encode_graph6, known_tournament_count, read_base_catalog, write_digraph6, Graph6};
use vdecomp::lp::dump_problem;
use vdecomp::patterns::LabelKind;
use vdecomp::ratio::{fmt_rational, parse_rational};
use vdecomp::search::{
    checkpoint_resume, resume_pipeline, run_pipeline, threshold_schedule, BaseFrontier, ScheduleMode, SearchConfig,
    Verdict,
};
use vdecomp::Rational;

use crate::args::{Command, ConvertTarget, Format, Global, HostArgs, Mode, SearchArgs};
use crate::error::{config, CliError};
use crate::hostspec::{build_host, decode_record, load_vector};

fn output(global: &Global) -> Result<Box<dyn Write>, CliError> {
    Ok(match &global.out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| config(format!("{name}: {e}")))
}

pub fn run(global: &Global, command: &Command) -> Result<(), CliError> {
    match command {
        Command::Dstar { host, packing } => cmd_dstar(global, host, *packing),
        Command::Nustar { host, infeasible_zero } => cmd_nustar(global, host, *infeasible_zero),
        Command::Search(args) => cmd_search(global, args),
        Command::LpVp { p } => cmd_lp_vp(global, p),
        Command::Bound { r, value } => cmd_bound(global, *r, value),
        Command::Enum { n } => cmd_enum(global, *n),
        Command::Intopt { host } => cmd_intopt(global, host),
        Command::Convert { input, to, canonical } => cmd_convert(global, input.as_deref(), *to, *canonical),
        Command::CheckpointInfo { path } => cmd_checkpoint_info(global, path),
    }
}

fn cmd_dstar(global: &Global, host_args: &HostArgs, packing: bool) -> Result<(), CliError> {
    let host = build_host(host_args, global.seed)?;
    let v = load_vector(global.vector.as_deref(), global.k, host.kind())?;
    let mode = if packing { CoverMode::Packing } else { CoverMode::Decomposition };
    let start = Instant::now();
    let result = dstar_with(&host, global.k, &v, mode);
    let wall = start.elapsed();
    let mut out = output(global)?;
    match result {
        Ok(d) => {
            let value = fmt_rational(&d.value);
            if global.format == Format::Jsonl {
                write_jsonl(&mut out, &EvalRecord::new(&host, global.k, &v, Some(&d), Some(value), wall))?;
            } else {
                writeln!(out, "{value}")?;
                writeln!(out, "certificate: verified {}", vdecomp::io::report::certificate_hash(&d))?;
            }
            out.flush()?;
            Ok(())
        }
        Err(e @ DecompError::Infeasible(_)) => {
            if global.format == Format::Jsonl {
                write_jsonl(&mut out, &EvalRecord::new(&host, global.k, &v, None, None, wall))?;
            } else {
                writeln!(out, "infeasible")?;
            }
            out.flush()?;
            Err(e.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_nustar(global: &Global, host_args: &HostArgs, infeasible_zero: bool) -> Result<(), CliError> {
    let host = build_host(host_args, global.seed)?;
    let v = load_vector(global.vector.as_deref(), global.k, host.kind())?;
    let policy = if infeasible_zero { InfeasiblePolicy::Zero } else { InfeasiblePolicy::Error };
    let value = nustar_with(&host, global.k, &v, policy)?;
    let mut out = output(global)?;
    if global.format == Format::Jsonl {
        write_jsonl(&mut out, &json!({"record": "nustar", "host": host.provenance(), "value": fmt_rational(&value)}))?;
    } else {
        writeln!(out, "{}", fmt_rational(&value))?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_lp_vp(global: &Global, p: &str) -> Result<(), CliError> {
    let p = rational_arg("--p", p)?;
    let v = load_vector(global.vector.as_deref(), global.k, &LabelKind::Binary)?;
    let program = random_graph_lp(global.k, &v, &p).map_err(config)?;
    let mut out = output(global)?;
    let names = program.problem.names();
    if global.format == Format::Jsonl {
        let x: serde_json::Map<String, serde_json::Value> =
            names.iter().zip(&program.x).map(|(n, x)| (n.clone(), json!(fmt_rational(x)))).collect();
        write_jsonl(
            &mut out,
            &json!({"record": "lp-vp", "p": fmt_rational(&p), "value": fmt_rational(&program.value), "x": x}),
        )?;
    } else {
        writeln!(out, "{}", fmt_rational(&program.value))?;
        for (name, x) in names.iter().zip(&program.x) {
            writeln!(out, "{name} = {}", fmt_rational(x))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_bound(global: &Global, r: usize, value: &str) -> Result<(), CliError> {
    let value = rational_arg("--value", value)?;
    let bound = vdecomp::decomp::asymptotic_bound(r, &value).map_err(config)?;
    let mut out = output(global)?;
    if global.format == Format::Jsonl {
        write_jsonl(
            &mut out,
            &json!({"record": "bound", "r": r, "value": fmt_rational(&value), "bound": fmt_rational(&bound)}),
        )?;
    } else {
        writeln!(out, "{}", fmt_rational(&bound))?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_enum(global: &Global, n: usize) -> Result<(), CliError> {
    let hosts = enumerate_nonisomorphic_tournaments(n).map_err(config)?;
    let mut out = output(global)?;
    write_digraph6(&mut out, &hosts)?;
    out.flush()?;
    Ok(())
}

fn cmd_intopt(global: &Global, host_args: &HostArgs) -> Result<(), CliError> {
    let host = build_host(host_args, global.seed)?;
    let v = load_vector(global.vector.as_deref(), global.k, host.kind())?;
    let opt = integer_optimum(&host, global.k, &v).map_err(config)?;
    let mut out = output(global)?;
    let catalog = v.catalog();
    if global.format == Format::Jsonl {
        let blocks: Vec<_> =
            opt.blocks.iter().map(|(s, p)| json!({"vertices": s, "pattern": catalog.get(*p).name()})).collect();
        write_jsonl(
            &mut out,
            &json!({"record": "intopt", "host": host.provenance(), "value": fmt_rational(&opt.value), "blocks": blocks}),
        )?;
    } else {
        writeln!(out, "{}", fmt_rational(&opt.value))?;
        for (s, p) in &opt.blocks {
            let verts: Vec<String> = s.iter().map(usize::to_string).collect();
            writeln!(out, "{} {}", verts.join(" "), catalog.get(*p).name())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_convert(
    global: &Global,
    input: Option<&std::path::Path>,
    to: ConvertTarget,
    canonical: bool,
) -> Result<(), CliError> {
    let (reader, name): (Box<dyn BufRead>, String) = match input {
        Some(p) => (
            Box::new(BufReader::new(File::open(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?)),
            p.display().to_string(),
        ),
        None => (Box::new(BufReader::new(io::stdin().lock())), "stdin".to_string()),
    };
    let mut out = output(global)?;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed == ">>digraph6<<" || trimmed == ">>graph6<<" {
            continue;
        }
        let provenance = format!("{name}:{}", idx + 1);
        let mut host = decode_record(trimmed, &provenance).map_err(|e| config(format!("{provenance}: {e}")))?;
        if canonical {
            host = host.canonical_host().map_err(config)?.with_provenance(provenance.clone());
        }
        let oriented = host.kind() == &LabelKind::Antisymmetric;
        let target = match to {
            ConvertTarget::Same if oriented => ConvertTarget::Digraph6,
            ConvertTarget::Same => ConvertTarget::Graph6,
            t => t,
        };
        match target {
            ConvertTarget::Digraph6 => writeln!(out, "{}", encode_digraph6(&host).map_err(config)?)?,
            ConvertTarget::Graph6 => {
                let graph = Graph6::from_host(&host).map_err(config)?;
                writeln!(out, "{}", encode_graph6(&graph).map_err(config)?)?
            }
            ConvertTarget::Lp => {
                let v = load_vector(global.vector.as_deref(), global.k, host.kind())?;
                let lp = build_decomposition_lp(&host, global.k, &v)?;
                writeln!(out, "# {provenance}")?;
                write!(out, "{}", dump_problem(&lp.problem))?;
            }
            ConvertTarget::Same => unreachable!("resolved above"),
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_checkpoint_info(global: &Global, path: &std::path::Path) -> Result<(), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let (info, _) = checkpoint::inspect(&bytes).map_err(config)?;
    let state = checkpoint::decode(&bytes).map_err(config)?;
    let mut out = output(global)?;
    let summary = json!({
        "record": "checkpoint",
        "version": info.version,
        "payload_bytes": info.payload_len,
        "digest": info.digest,
        "run_digest": state.run_digest,
        "completed_levels": state.completed.len(),
        "order": state.order,
        "next_chunk": state.progress.next_chunk,
        "below_so_far": state.progress.below.len(),
        "finished": state.finished.as_ref().map(|f| f.report.verdict.name()),
    });
    if global.format == Format::Jsonl {
        write_jsonl(&mut out, &summary)?;
    } else {
        for (k, v) in summary.as_object().expect("object") {
            writeln!(out, "{k}: {v}")?;
        }
        if !state.completed.is_empty() {
            write_table_csv(&mut out, &state.completed)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn load_base(args: &SearchArgs) -> Result<BaseFrontier, CliError> {
    if let Some(n) = args.base_enum {
        let hosts = enumerate_nonisomorphic_tournaments(n).map_err(config)?;
        return Ok(BaseFrontier { hosts, complete: true });
    }
    let path = args.base.as_ref().ok_or_else(|| config("search needs --base or --base-enum"))?;
    let order = match args.r_lo {
        Some(r) => r,
        None => {
            let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let first = BufReader::new(file)
                .lines()
                .map_while(Result::ok)
                .find(|l| !l.trim().is_empty() && l.trim() != ">>digraph6<<")
                .ok_or_else(|| config(format!("{} is empty", path.display())))?;
            decode_record(&first, "probe")?.order()
        }
    };
    let asserted = match args.complete_count.as_deref() {
        None => None,
        Some("auto") => known_tournament_count(order),
        Some(n) => Some(n.parse::<u64>().map_err(|_| config("--complete-count takes a number or `auto`"))?),
    };
    Ok(read_base_catalog(path, order, asserted)?)
}

fn cmd_search(global: &Global, args: &SearchArgs) -> Result<(), CliError> {
    let base = load_base(args)?;
    let base_order = base.hosts.first().map(|h| h.order()).or(args.base_enum).or(args.r_lo).unwrap_or(3);
    let r_lo = args.r_lo.unwrap_or(base_order);
    let target = rational_arg("--target", &args.target)?;
    let mode = match &args.decimal {
        Some(list) => {
            ScheduleMode::Decimal(list.iter().map(|d| rational_arg("--decimal", d)).collect::<Result<Vec<_>, _>>()?)
        }
        None => ScheduleMode::Exact,
    };
    let mut schedule = threshold_schedule(&target, args.r_hi, r_lo, &mode)?;
    for o in &args.overrides {
        let (order, value) = o.split_once('=').ok_or_else(|| config("--override takes ORDER=VALUE"))?;
        let order: usize = order.trim().parse().map_err(|_| config("--override order must be an integer"))?;
        schedule = schedule.with_override(order, rational_arg("--override", value)?)?;
    }
    let v = load_vector(global.vector.as_deref(), global.k, &LabelKind::Antisymmetric)?;
    let mut cfg = SearchConfig::new(global.k, v, schedule);
    cfg.stop_order = args.stop_order;
    cfg.level.chunk_size = args.chunk_size;
    cfg.level.guard = match global.mode {
        Mode::Exact => None,
        Mode::Presolve => Some(rational_arg("--guard", &args.guard)?),
    };
    cfg.level.verify_presolve = args.verify_presolve;
    cfg.level.dedup = !args.no_dedup;
    cfg.workers = global.workers;
    cfg.checkpoint = args.checkpoint.clone();
    cfg.checkpoint_interval = Duration::from_secs(args.checkpoint_interval);
    cfg.stop_after_chunks = args.stop_after_chunks;
    let cancel = Arc::new(AtomicBool::new(false));
    {
        let flag = cancel.clone();
        // a second handler registration fails harmlessly
        let _ = ctrlc::set_handler(move || flag.store(true, std::sync::atomic::Ordering::SeqCst));
    }
    cfg.cancel = Some(cancel);

    let outcome = if global.resume {
        let path = args.checkpoint.as_ref().ok_or_else(|| config("--resume needs --checkpoint"))?;
        let state = match checkpoint_resume(path) {
            Err(vdecomp::search::SearchError::Checkpoint(CheckpointError::Io { source, .. }))
                if source.kind() == io::ErrorKind::NotFound =>
            {
                None
            }
            other => Some(other?),
        };
        match state {
            Some(state) => resume_pipeline(&base, &cfg, state)?,
            None => run_pipeline(&base, &cfg)?,
        }
    } else {
        run_pipeline(&base, &cfg)?
    };

    let report = &outcome.report;
    let mut out = output(global)?;
    match global.format {
        Format::Jsonl => write_report_jsonl(&mut out, report)?,
        Format::Csv => write_table_csv(&mut out, &report.levels)?,
        Format::Text => {
            write_table_csv(&mut out, &report.levels)?;
            writeln!(out, "verdict: {}", report.verdict.name())?;
        }
    }
    out.flush()?;
    if let Some(path) = &args.survivors {
        let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        write_digraph6(&mut w, &outcome.survivors)?;
        w.flush()?;
    }
    let detail = match &report.verdict {
        Verdict::Certified => String::new(),
        Verdict::Refuted { witness, value } => {
            format!(" witness {} with D* = {}", witness.provenance(), fmt_rational(value))
        }
        Verdict::Incomplete { reason } => format!(" ({reason})"),
    };
    eprintln!("verdict: {}{detail}", report.verdict.name());
    Ok(())
}
