use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use binrel::brwt::Brwt;
use binrel::format::{AnyRelation, EdgeList, Kind, MAGIC};
use binrel::rel_gwt::DEFAULT_ARITY;
use binrel::verify::{check, random_query, Tally};
use binrel::{NaiveRelation, Op, Relation, SpaceReportF64, Trace};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "binrel", version, about = "Build, query and check compact binary relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a representation from an edge list and store it.
    Build {
        input: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        repr: Kind,
        #[arg(short, long)]
        output: PathBuf,
        /// Arity of the generalized wavelet tree.
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Answer one query on a stored relation.
    Query {
        structure: PathBuf,
        #[arg(value_parser = parse_op)]
        op: Op,
        args: Vec<usize>,
    },
    /// Compare representations with the naive oracle on random queries.
    Verify {
        input: PathBuf,
        /// Comma-separated representations.
        #[arg(long, value_delimiter = ',', value_parser = parse_kind, default_values = ["str", "wt", "gwt", "brwt"])]
        repr: Vec<Kind>,
        /// Arities tried for the generalized wavelet tree.
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8, 16])]
        arity: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        rounds: usize,
        /// Check this stored structure instead of building from the input.
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Print entropy and space figures for an edge list or stored relation.
    Stats {
        path: PathBuf,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Time random queries of one operation and count node visits.
    Bench {
        structure: PathBuf,
        #[arg(value_parser = parse_op)]
        op: Op,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse().map_err(|e: binrel::Error| e.to_string())
}

fn parse_op(s: &str) -> Result<Op, String> {
    s.parse().map_err(|e: binrel::Error| e.to_string())
}

fn read_edges(path: &Path) -> Result<EdgeList> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse().with_context(|| format!("parsing {}", path.display()))
}

fn load(path: &Path) -> Result<AnyRelation> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    AnyRelation::load(&mut bytes.as_slice()).with_context(|| format!("loading {}", path.display()))
}

fn build(args: (&Path, Kind, &Path, Option<usize>), out: &mut impl Write) -> Result<()> {
    let (input, kind, output, arity) = args;
    if arity.is_some() && kind != Kind::Gwt {
        bail!("--arity only applies to gwt");
    }
    let e = read_edges(input)?;
    let rel = AnyRelation::build(kind, &e.pairs, e.n, e.sigma, arity.unwrap_or(DEFAULT_ARITY))?;
    let mut buf = Vec::new();
    rel.store(&mut buf)?;
    fs::write(output, buf).with_context(|| format!("writing {}", output.display()))?;
    let d = binrel::NativeOps::dims(&rel);
    writeln!(out, "repr={kind} n={} sigma={} t={} payload_bits={}", d.n, d.sigma, d.t, rel.payload_bits())?;
    Ok(())
}

fn query(structure: &Path, op: Op, args: &[usize], out: &mut impl Write) -> Result<()> {
    let rel = Relation::new(load(structure)?)?;
    let q = binrel::Query::new(op, args)?;
    write!(out, "{}", rel.query(&q)?)?;
    Ok(())
}

fn verify(
    input: &Path,
    kinds: &[Kind],
    arities: &[usize],
    seed: u64,
    rounds: usize,
    structure: Option<&Path>,
    out: &mut impl Write,
) -> Result<bool> {
    let e = read_edges(input)?;
    let oracle = NaiveRelation::new(&e.pairs, e.n, e.sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = Vec::new();
    if let Some(path) = structure {
        candidates.push((path.display().to_string(), load(path)?));
    } else {
        for &kind in kinds {
            let arities: &[usize] = if kind == Kind::Gwt { arities } else { &[DEFAULT_ARITY] };
            for &mu in arities {
                let name = if kind == Kind::Gwt { format!("gwt{mu}") } else { kind.to_string() };
                candidates.push((name, AnyRelation::build(kind, &e.pairs, e.n, e.sigma, mu)?));
            }
        }
    }
    let mut total = Tally::new();
    for (name, rel) in candidates {
        let rel = Relation::new(rel)?;
        let mut tally = Tally::new();
        let result = check(&name, &rel, &oracle, &e, &mut rng, rounds, &mut tally);
        total.merge(&tally);
        if let Err(m) = result {
            writeln!(out, "mismatch in {name}")?;
            writeln!(out, "{m}")?;
            return Ok(false);
        }
        writeln!(out, "{name}: {} queries passed", tally.total())?;
    }
    for op in Op::ALL {
        writeln!(out, "{:<20}{:>8}", op.name(), total.passed(op))?;
    }
    Ok(true)
}

fn stats(path: &Path, arity: Option<usize>, out: &mut impl Write) -> Result<()> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let (n, sigma, pairs) = if bytes.starts_with(MAGIC) {
        let rel = AnyRelation::load(&mut bytes.as_slice())?;
        let d = binrel::NativeOps::dims(&rel);
        writeln!(out, "{:<16}{}", "stored as", rel.kind())?;
        (d.n, d.sigma, rel.pairs())
    } else {
        let e: EdgeList = String::from_utf8(bytes)
            .context("input is neither a stored relation nor text")?
            .parse()?;
        (e.n, e.sigma, e.pairs)
    };
    let mu = arity.unwrap_or(DEFAULT_ARITY);
    let mut report = SpaceReportF64::new(binrel::RelationDims::new(n, sigma, pairs.len())?, &pairs)?;
    for kind in [Kind::Str, Kind::Wt, Kind::Gwt] {
        let rel = AnyRelation::build(kind, &pairs, n, sigma, mu)?;
        let name = if kind == Kind::Gwt { format!("gwt{mu}") } else { kind.to_string() };
        report.add(&name, rel.payload_bits(), rel.directory_bits());
    }
    report.add_brwt(&Brwt::new(&pairs, n, sigma)?)?;
    write!(out, "{report}\n{}", report.to_key_values())?;
    Ok(())
}

fn bench(structure: &Path, op: Op, count: usize, seed: u64, out: &mut impl Write) -> Result<()> {
    let rel = Relation::new(load(structure)?)?;
    let dims = rel.dims();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let queries: Vec<_> = (0..count).filter_map(|_| random_query(&mut rng, op, dims)).collect();
    if queries.is_empty() {
        writeln!(out, "op={op} queries=0")?;
        return Ok(());
    }
    let (mut sum, mut max) = (0u64, 0u64);
    let start = Instant::now();
    for q in &queries {
        let mut tr = Trace::new();
        rel.query_traced(q, &mut tr)?;
        sum += tr.nodes;
        max = max.max(tr.nodes);
    }
    let elapsed = start.elapsed();
    writeln!(
        out,
        "op={op} queries={} mean_visits={:.2} max_visits={max} mean_ns={:.0}",
        queries.len(),
        sum as f64 / queries.len() as f64,
        elapsed.as_nanos() as f64 / queries.len() as f64
    )?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let ok = match cli.command {
        Command::Build { input, repr, output, arity } => build((&input, repr, &output, arity), &mut out).map(|_| true),
        Command::Query { structure, op, args } => query(&structure, op, &args, &mut out).map(|_| true),
        Command::Verify {
            input,
            repr,
            arity,
            seed,
            rounds,
            structure,
        } => verify(&input, &repr, &arity, seed, rounds, structure.as_deref(), &mut out),
        Command::Stats { path, arity } => stats(&path, arity, &mut out).map(|_| true),
        Command::Bench { structure, op, count, seed } => bench(&structure, op, count, seed, &mut out).map(|_| true),
    }?;
    out.flush()?;
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
