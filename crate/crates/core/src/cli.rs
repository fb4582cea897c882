//! The `gse` command line: graph file formats, certificates and commands.
//!
//! Exit codes: 0 decided or constructed, 1 negative verdict, 2 usage or
//! format error, 3 search exhausted or unsupported graph class.

use crate::equivalence::{
    check_certificate, is_lc_equivalent, is_lcr_equivalent, is_lu_equivalent,
    lulc_holds_smallgraph, EquivalenceCertificate, LuLcVerdict,
};
use crate::error::{GseError, Result};
use crate::families::{generate, random_graph, seeded_rng, FamilySpec};
use crate::glc::{incident_generators, sweep_bipartite_class, RlcMove, VertexMultiset};
use crate::graph::Graph;
use crate::localsets::{mls_cover, vertex_types};
use crate::oracle::{verify_certificate_numeric, verify_rlc_numeric};
use crate::vmu::{is_k_vmu, vmu_bound_terms, VMU_TABLE_ROWS};
use clap::{Parser, Subcommand, ValueEnum};
use rand_core::RngCore;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

const CERT_HEADER: &str = "gse-certificate v1";

// ---------------------------------------------------------------- graph6

fn g6_size_prefix(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

/// Encodes a graph in graph6 (no header, no newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    g6_size_prefix(n, &mut out);
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

/// Decodes one graph6 line; an optional `>>graph6<<` header is accepted.
pub fn from_graph6(line: &str) -> Result<Graph> {
    let err = |m: &str| GseError::Parse {
        line: 1,
        message: m.to_string(),
    };
    let s = line.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s).as_bytes();
    if s.iter().any(|&c| !(63..=126).contains(&c)) {
        return Err(err("graph6 bytes must lie in 63..=126"));
    }
    let (n, body) = match s {
        [] => return Err(err("empty graph6 string")),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(err("truncated graph6 size"));
            }
            let n = rest[..6]
                .iter()
                .fold(0usize, |a, &c| a << 6 | (c - 63) as usize);
            (n, &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(err("truncated graph6 size"));
            }
            let n = rest[..3]
                .iter()
                .fold(0usize, |a, &c| a << 6 | (c - 63) as usize);
            (n, &rest[3..])
        }
        [c, rest @ ..] => ((c - 63) as usize, rest),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    if body.len() != nbits.div_ceil(6) {
        return Err(err(&format!(
            "graph6 body has {} bytes, expected {}",
            body.len(),
            nbits.div_ceil(6)
        )));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.set_edge(i, j, true);
            }
            k += 1;
        }
    }
    Ok(g)
}

// ---------------------------------------------------------------- edge list

/// Edge-list text: `n` on the first line, then `u v` pairs, 0-indexed.
pub fn to_edge_list(g: &Graph) -> String {
    g.to_string()
}

/// Parses edge-list text; blank lines and `#` comments are ignored.
pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |m: String| GseError::Parse {
            line: line_no,
            message: m,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let nums: Vec<usize> = fields
            .iter()
            .map(|f| {
                f.parse::<usize>()
                    .map_err(|_| perr(format!("not a vertex index: {f:?}")))
            })
            .collect::<Result<_>>()?;
        match (n, nums.as_slice()) {
            (None, [count]) => n = Some(*count),
            (None, _) => return Err(perr("first line must hold the order".into())),
            (Some(order), [u, v]) => {
                if *u >= order || *v >= order {
                    return Err(perr(format!("vertex out of range 0..{order}")));
                }
                if u == v {
                    return Err(perr(format!("self-loop on {u}")));
                }
                edges.push((*u, *v));
            }
            (Some(_), _) => return Err(perr("expected two vertex indices".into())),
        }
    }
    let n = n.ok_or(GseError::Parse {
        line: 1,
        message: "missing order line".into(),
    })?;
    Graph::from_edges(n, &edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    /// graph6 for `.g6` files, edge list otherwise.
    Auto,
    Graph6,
    Edges,
}

fn resolve_format(fmt: GraphFormat, path: &str) -> GraphFormat {
    match fmt {
        GraphFormat::Auto if path.ends_with(".g6") => GraphFormat::Graph6,
        GraphFormat::Auto => GraphFormat::Edges,
        f => f,
    }
}

/// Reads a graph from a file, or builds one from `family:<spec>`.
pub fn load_graph(source: &str, fmt: GraphFormat) -> Result<Graph> {
    if let Some(spec) = source.strip_prefix("family:") {
        return generate(spec.parse::<FamilySpec>()?);
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| GseError::Precondition(format!("cannot read {source}: {e}")))?;
    match resolve_format(fmt, source) {
        GraphFormat::Graph6 => {
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .ok_or(GseError::Parse {
                    line: 1,
                    message: "empty graph6 file".into(),
                })?;
            from_graph6(line.trim())
        }
        _ => from_edge_list(&text),
    }
}

/// Serializes a graph in the requested format (edge list for `Auto`).
pub fn format_graph(g: &Graph, fmt: GraphFormat) -> String {
    match fmt {
        GraphFormat::Graph6 => to_graph6(g) + "\n",
        _ => to_edge_list(g),
    }
}

// ---------------------------------------------------------------- certificates

fn join(seq: &[usize]) -> String {
    seq.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Line-oriented certificate text with a version header.
pub fn certificate_to_text(n: usize, cert: &EquivalenceCertificate) -> String {
    let mv = match &cert.mv {
        None => "none".to_string(),
        Some(m) => {
            let pairs: Vec<String> =
                m.s.pairs()
                    .iter()
                    .map(|(v, k)| format!("{v}:{k}"))
                    .collect();
            format!("{} {}", m.r, pairs.join(" "))
                .trim_end()
                .to_string()
        }
    };
    format!(
        "{CERT_HEADER}\nn {n}\nlevel {}\nseq1 {}\nmove {mv}\nbot {}\nseq2 {}\n",
        cert.level,
        join(&cert.seq1),
        join(&cert.bot_seq),
        join(&cert.seq2)
    )
    .lines()
    .map(|l| l.trim_end())
    .collect::<Vec<_>>()
    .join("\n")
        + "\n"
}

/// Parses certificate text, returning the declared order and the certificate.
pub fn certificate_from_text(text: &str) -> Result<(usize, EquivalenceCertificate)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let perr = |line: usize, m: &str| GseError::Parse {
        line: line + 1,
        message: m.to_string(),
    };
    match lines.next() {
        Some((_, l)) if l.trim() == CERT_HEADER => {}
        Some((i, _)) => return Err(perr(i, "missing certificate header")),
        None => return Err(perr(0, "empty certificate")),
    }
    let mut n = None;
    let mut level = None;
    let mut fields: [Option<Vec<usize>>; 3] = [None, None, None];
    let mut mv: Option<Option<RlcMove>> = None;
    for (i, line) in lines {
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap_or("");
        let rest: Vec<&str> = parts.collect();
        let nums = |rest: &[&str]| -> Result<Vec<usize>> {
            rest.iter()
                .map(|x| {
                    x.parse::<usize>()
                        .map_err(|_| perr(i, &format!("bad number {x:?}")))
                })
                .collect()
        };
        match key {
            "n" => n = Some(*nums(&rest)?.first().ok_or(perr(i, "missing order"))?),
            "level" => level = Some(*nums(&rest)?.first().ok_or(perr(i, "missing level"))? as u32),
            "seq1" => fields[0] = Some(nums(&rest)?),
            "bot" => fields[1] = Some(nums(&rest)?),
            "seq2" => fields[2] = Some(nums(&rest)?),
            "move" => {
                if rest == ["none"] {
                    mv = Some(None);
                    continue;
                }
                let order = n.ok_or(perr(i, "order line must precede the move"))?;
                let r: u32 = rest
                    .first()
                    .and_then(|x| x.parse().ok())
                    .ok_or(perr(i, "missing move level"))?;
                let mut pairs = Vec::new();
                for item in &rest[1..] {
                    let (v, m) = item
                        .split_once(':')
                        .ok_or(perr(i, "expected vertex:mult"))?;
                    let v: usize = v.parse().map_err(|_| perr(i, "bad vertex"))?;
                    let m: u64 = m.parse().map_err(|_| perr(i, "bad multiplicity"))?;
                    pairs.push((v, m));
                }
                let s = VertexMultiset::from_pairs(order, &pairs)
                    .map_err(|e| perr(i, &e.to_string()))?;
                mv = Some(Some(RlcMove { s, r }));
            }
            other => return Err(perr(i, &format!("unknown key {other:?}"))),
        }
    }
    let missing = |what: &str| GseError::Parse {
        line: text.lines().count(),
        message: format!("missing {what} line"),
    };
    let [seq1, bot, seq2] = fields;
    Ok((
        n.ok_or_else(|| missing("n"))?,
        EquivalenceCertificate {
            seq1: seq1.ok_or_else(|| missing("seq1"))?,
            mv: mv.ok_or_else(|| missing("move"))?,
            bot_seq: bot.ok_or_else(|| missing("bot"))?,
            seq2: seq2.ok_or_else(|| missing("seq2"))?,
            level: level.ok_or_else(|| missing("level"))?,
        },
    ))
}

// ---------------------------------------------------------------- commands

#[derive(Parser, Debug)]
#[command(name = "gse", about = "Graph-state equivalence toolkit", version)]
pub struct Cli {
    /// Input/output graph format.
    #[arg(long, value_enum, default_value_t = GraphFormat::Auto, global = true)]
    pub format: GraphFormat,
    /// Seed for randomized commands; GSE_SEED overrides it.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the main output here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// More detail in reports.
    #[arg(long, short, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a named family, e.g. `ctk:7,5` or `repeater-complete:5`.
    Gen { family: String },
    /// Decide LC-equivalence.
    LcEquiv {
        a: String,
        b: String,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Decide LC_r-equivalence at a fixed level.
    LcrEquiv {
        a: String,
        b: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Decide LU-equivalence.
    LuEquiv {
        a: String,
        b: String,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Replay a certificate.
    Verify {
        a: String,
        b: String,
        certificate: PathBuf,
        /// Also check with the statevector simulator (order ≤ 12).
        #[arg(long)]
        numeric: bool,
    },
    /// List an MLS cover.
    MlsCover { graph: String },
    /// Cut-rank of a comma-separated vertex set.
    CutRank { graph: String, set: String },
    /// Vertex types with respect to an MLS cover.
    Types { graph: String },
    /// Sufficient criteria for LU = LC on a small graph.
    Lulc { graph: String },
    /// k-vertex-minor universality.
    VmuCheck {
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2_000_000)]
        budget: usize,
    },
    /// Success probability bounds for the published 99% parameter table.
    VmuTable,
    /// Sweep the bipartite class G_k for 2-local complementations.
    Sweep {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 16)]
        max_support: usize,
    },
    /// Cross-check graphical rules against the statevector simulator.
    OracleVerify {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

fn exit_for(e: &GseError) -> i32 {
    match e {
        GseError::Exhausted { .. } | GseError::ClassAlphaUnsupported => EXIT_EXHAUSTED,
        _ => EXIT_USAGE,
    }
}

fn effective_seed(cli_seed: u64) -> u64 {
    std::env::var("GSE_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(cli_seed)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| GseError::Precondition(format!("cannot write {}: {e}", path.display())))
}

fn parse_set(g: &Graph, s: &str) -> Result<crate::graph::VertexSet> {
    let mut set = g.empty_set();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let v: usize = item.parse().map_err(|_| GseError::Parse {
            line: 1,
            message: format!("bad vertex {item:?}"),
        })?;
        g.check_vertex(v)?;
        set.set(v, true);
    }
    Ok(set)
}

fn decide(
    out: &mut String,
    g1: &Graph,
    res: Option<EquivalenceCertificate>,
    label: &str,
    cert_path: &Option<PathBuf>,
) -> Result<i32> {
    match res {
        Some(cert) => {
            out.push_str(&format!("{label} yes\nlevel {}\n", cert.level));
            let text = certificate_to_text(g1.order(), &cert);
            match cert_path {
                Some(p) => write_file(p, &text)?,
                None => out.push_str(&text),
            }
            Ok(EXIT_OK)
        }
        None => {
            out.push_str(&format!("{label} no\n"));
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn execute(cli: &Cli, out: &mut String) -> Result<i32> {
    let fmt = cli.format;
    let load = |s: &str| load_graph(s, fmt);
    match &cli.command {
        Command::Gen { family } => {
            let g = generate(family.parse()?)?;
            out.push_str(&format_graph(&g, fmt));
            Ok(EXIT_OK)
        }
        Command::LcEquiv { a, b, certificate } => {
            let (g1, g2) = (load(a)?, load(b)?);
            let res = is_lc_equivalent(&g1, &g2)?;
            decide(out, &g1, res, "lc-equivalent", certificate)
        }
        Command::LcrEquiv {
            a,
            b,
            level,
            certificate,
        } => {
            let (g1, g2) = (load(a)?, load(b)?);
            let res = is_lcr_equivalent(&g1, &g2, *level)?;
            decide(out, &g1, res, &format!("lc{level}-equivalent"), certificate)
        }
        Command::LuEquiv { a, b, certificate } => {
            let (g1, g2) = (load(a)?, load(b)?);
            let res = is_lu_equivalent(&g1, &g2)?;
            decide(out, &g1, res, "lu-equivalent", certificate)
        }
        Command::Verify {
            a,
            b,
            certificate,
            numeric,
        } => {
            let (g1, g2) = (load(a)?, load(b)?);
            let text = std::fs::read_to_string(certificate).map_err(|e| {
                GseError::Precondition(format!("cannot read {}: {e}", certificate.display()))
            })?;
            let (n, cert) = certificate_from_text(&text)?;
            if n != g1.order() {
                out.push_str(&format!(
                    "rejected: certificate order {n} differs from graph\n"
                ));
                return Ok(EXIT_NEGATIVE);
            }
            if let Err(reason) = check_certificate(&g1, &g2, &cert) {
                out.push_str(&format!("rejected: {reason}\n"));
                return Ok(EXIT_NEGATIVE);
            }
            if *numeric && !verify_certificate_numeric(&g1, &g2, &cert)? {
                out.push_str("rejected: statevector replay differs\n");
                return Ok(EXIT_NEGATIVE);
            }
            out.push_str("accepted\n");
            Ok(EXIT_OK)
        }
        Command::MlsCover { graph } => {
            let g = load(graph)?;
            let cover = mls_cover(&g);
            out.push_str(&format!("cover {}\n", cover.sets.len()));
            for rec in &cover.sets {
                out.push_str(&format!(
                    "mls {} dim {}\n",
                    join(&rec.vertices.to_indices()),
                    rec.dimension
                ));
            }
            let covered = cover.covers(g.order());
            out.push_str(&format!("covers_all {covered}\n"));
            Ok(if covered { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::CutRank { graph, set } => {
            let g = load(graph)?;
            let a = parse_set(&g, set)?;
            out.push_str(&format!("{}\n", g.cut_rank_of(&a)));
            Ok(EXIT_OK)
        }
        Command::Types { graph } => {
            let g = load(graph)?;
            let cover = mls_cover(&g);
            for (u, t) in vertex_types(&g, &cover).iter().enumerate() {
                out.push_str(&format!("{u} {t}\n"));
            }
            Ok(EXIT_OK)
        }
        Command::Lulc { graph } => {
            let g = load(graph)?;
            match lulc_holds_smallgraph(&g)? {
                LuLcVerdict::Yes(c) => {
                    out.push_str(&format!("lu=lc yes {c:?}\n"));
                    Ok(EXIT_OK)
                }
                LuLcVerdict::Unknown => {
                    out.push_str("lu=lc unknown\n");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::VmuCheck { graph, k, budget } => {
            let g = load(graph)?;
            let report = is_k_vmu(&g, *k, *budget)?;
            out.push_str(&report.to_string());
            Ok(if report.universal {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::VmuTable => {
            out.push_str("k n L R migration full_rank subsets bound\n");
            for (k, n, l, r) in VMU_TABLE_ROWS {
                let t = vmu_bound_terms(l, r, k)?;
                out.push_str(&format!(
                    "{k} {n} {l} {r} {:.3e} {:.3e} {:.3e} {:.6}\n",
                    t.migration, t.full_rank, t.subsets, t.bound
                ));
            }
            Ok(EXIT_OK)
        }
        Command::Sweep { k, max_support } => {
            let report = sweep_bipartite_class(*k, *max_support)?;
            out.push_str(&report.to_string());
            Ok(EXIT_OK)
        }
        Command::OracleVerify { max_n, count } => {
            oracle_self_check(out, effective_seed(cli.seed), *max_n, *count)
        }
    }
}

/// Random LC sequences and random incident multisets checked against the
/// simulator.
fn oracle_self_check(out: &mut String, seed: u64, max_n: usize, count: usize) -> Result<i32> {
    let max_n = max_n.clamp(2, 10);
    let mut rng = seeded_rng(seed);
    let (mut lc_ok, mut rlc_ok, mut rlc_total) = (0, 0, 0);
    for _ in 0..count {
        let n = 2 + (rng.next_u64() % (max_n as u64 - 1)) as usize;
        let g = random_graph(n, rng.next_u64());
        let seq: Vec<usize> = (0..n)
            .map(|_| (rng.next_u64() % n as u64) as usize)
            .collect();
        let cert = EquivalenceCertificate::lc(seq.clone());
        if verify_certificate_numeric(&g, &g.apply_sequence(&seq), &cert)? {
            lc_ok += 1;
        }
        let r = 1 + (rng.next_u64() % 3) as u32;
        let mut indep = g.empty_set();
        for u in 0..n {
            if rng.next_u64() >> 63 == 1 && !g.neighbors(u).intersects(&indep) {
                indep.set(u, true);
            }
        }
        let gens = incident_generators(&g, &indep, r)?;
        if let Some(s) = gens.get((rng.next_u64() as usize) % gens.len().max(1)) {
            rlc_total += 1;
            if verify_rlc_numeric(&g, s, r)? {
                rlc_ok += 1;
            }
        }
    }
    out.push_str(&format!(
        "seed {seed}\nlc {lc_ok}/{count}\nrlc {rlc_ok}/{rlc_total}\n"
    ));
    Ok(if lc_ok == count && rlc_ok == rlc_total {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

/// Runs the command line `argv` (program name first), writing the report to
/// `sink` (or the `--output` file) and diagnostics to standard error.
pub fn run<I, T>(argv: I, sink: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global();
    }
    let mut out = String::new();
    let code = match execute(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let written = match &cli.output {
        Some(p) => write_file(p, &out),
        None => sink
            .write_all(out.as_bytes())
            .map_err(|e| GseError::Precondition(e.to_string())),
    };
    match written {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Entry point of the `gse` binary.
pub fn main_entry() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout())
}
