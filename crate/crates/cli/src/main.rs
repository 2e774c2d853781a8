//! Command-line front end: classification runs, catalog verification
//! against the built-in reference data, single-cap analysis, and catalog
//! re-export.
//!
//! Machine-readable output (catalogs, cap files, reports) goes to
//! standard output or `--out`; progress and summary tables go to
//! standard error. Exit codes: 0 success, 1 verification mismatch,
//! 2 bad input or I/O failure.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pgcaps::catalog::{self, AnalyzeOptions, Catalog};
use pgcaps::classify::{self, classify_observed, ClassRecord, Classification, Options};
use pgcaps::code::{group_descriptor, weight_distribution};
use pgcaps::equiv::{find_equivalence, stabilizer};
use pgcaps::fixtures::FIXTURES;
use pgcaps::format::parse_cap;
use pgcaps::geometry::Space;
use pgcaps::group::ProjectiveGroup;
use pgcaps::PointSet;

#[derive(Parser)]
#[command(
    name = "pgcaps",
    version,
    about = "Caps in PG(r,q) up to projective equivalence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify all caps of a geometry and emit the class catalog.
    Classify(ClassifyArgs),
    /// Re-check a catalog: representatives, reference counts, published caps.
    Verify(VerifyArgs),
    /// Analyze a single cap file: completeness, stabilizer, weights.
    Analyze(AnalyzeArgs),
    /// Re-emit an existing catalog in another format.
    Export(ExportArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Line-delimited catalog records.
    Records,
    /// Cap text blocks (one `r q n` header plus coordinate rows per
    /// class, blank-line separated).
    PaperText,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Projective dimension.
    #[arg(long)]
    r: usize,
    /// Field order (prime).
    #[arg(long)]
    q: u32,
    /// Stop extending caps at this size.
    #[arg(long)]
    max_size: Option<u16>,
    /// Worker threads; 0 means all available.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write the catalog here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Records)]
    format: Format,
    /// Record stabilizer order and structure for every class.
    #[arg(long)]
    with_stabilizers: bool,
    /// Record the weight distribution for every class.
    #[arg(long)]
    with_weights: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Catalog produced by `classify`.
    catalog: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Cap file: header `r q n`, then r+1 coordinate rows.
    file: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    /// Catalog produced by `classify`.
    catalog: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::PaperText)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Export(args) => cmd_export(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Writes `emit` either to the given path or to standard output.
fn write_output(out: Option<&Path>, emit: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            let mut w = BufWriter::new(file);
            emit(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            emit(&mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn write_paper_text(w: &mut dyn Write, cat: &Catalog) -> Result<()> {
    for (i, rec) in cat.records.iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
        }
        writeln!(w, "{} {} {}", cat.r, cat.q, rec.size)?;
        for row in &rec.matrix {
            writeln!(w, "{row}")?;
        }
    }
    Ok(())
}

fn cmd_classify(args: ClassifyArgs) -> Result<ExitCode> {
    let space = Space::new(args.r, args.q)?;
    let group = ProjectiveGroup::new(&space);
    eprintln!("classifying caps of PG({},{})", args.r, args.q);
    let start = Instant::now();
    let result = classify_observed(
        &space,
        &group,
        &Options {
            max_size: args.max_size,
            jobs: args.jobs,
        },
        &mut |size, new| eprintln!("  size {size}: {new} new classes"),
    );
    eprintln!(
        "{} classes in {:.1?} ({} expansions, {} duplicate arrivals)",
        result.classes.len(),
        start.elapsed(),
        result.diagnostics.expanded,
        result.diagnostics.duplicate_arrivals,
    );
    eprintln!("size  complete  incomplete");
    for (size, complete, incomplete) in result.table() {
        eprintln!("{size:>4}  {complete:>8}  {incomplete:>10}");
    }

    if args.with_stabilizers || args.with_weights {
        eprintln!("computing per-class analyses");
    }
    let cat = catalog::build(
        &space,
        &result,
        AnalyzeOptions {
            stabilizers: args.with_stabilizers,
            weights: args.with_weights,
        },
    );
    write_output(args.out.as_deref(), |w| match args.format {
        Format::Records => Ok(catalog::write_to(w, &cat)?),
        Format::PaperText => write_paper_text(w, &cat),
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    // Self-test of the embedded reference caps before trusting them.
    let reference = Space::new(4, 3)?;
    for fx in FIXTURES {
        let set = fx.points(&reference)?;
        if !reference.is_cap(&set) || set.len() != fx.size() {
            return Err(anyhow!("built-in cap data corrupt at {}", fx.label));
        }
    }

    let file = File::open(&args.catalog)
        .with_context(|| format!("cannot read {}", args.catalog.display()))?;
    let cat = catalog::read_from(BufReader::new(file))?;
    let space = Space::new(cat.r, cat.q)?;
    let group = ProjectiveGroup::new(&space);

    let mut failed = false;
    let mut classes = Vec::with_capacity(cat.records.len());
    for (i, rec) in cat.records.iter().enumerate() {
        let canonical = PointSet::from_iter(rec.canonical.iter().copied());
        // The record also carries explicit points; when they differ from
        // the canonical form they must still name an equivalent cap.
        if rec.points != rec.canonical {
            let points = PointSet::from_iter(rec.points.iter().copied());
            if find_equivalence(&space, &points, &canonical).is_none() {
                println!("record {i}: points are not equivalent to the canonical form");
                failed = true;
            }
        }
        classes.push(ClassRecord {
            canonical,
            size: rec.size,
            complete: rec.complete,
        });
    }
    let result = Classification {
        r: cat.r,
        q: cat.q,
        max_size: cat.max_size,
        classes,
        diagnostics: Default::default(),
    };

    let report = classify::verify(&space, &group, &result);
    print!("{}", report.render());
    failed |= !report.passed();

    // For a full PG(4,3) catalog the matched representatives must also
    // reproduce the published stabilizer orders and weight distributions.
    for m in &report.fixtures {
        let Some(idx) = m.class_index else { continue };
        let fx = FIXTURES
            .iter()
            .find(|f| f.label == m.label)
            .expect("known label");
        let rep = &result.classes[idx].canonical;
        let weights = weight_distribution(&space, rep).to_string();
        let stab_line = match stabilizer(&space, rep) {
            Ok(stab) => {
                let desc = group_descriptor(&space, &stab.elements);
                if !fx.stabilizer.matches(&desc) {
                    failed = true;
                    format!(
                        "stabilizer {desc} MISMATCH (expected order {})",
                        fx.stabilizer.order()
                    )
                } else {
                    format!("stabilizer order {} ok", stab.order)
                }
            }
            Err(e) => {
                failed = true;
                format!("stabilizer not computed: {e}")
            }
        };
        let weights_ok = weights == fx.weights;
        failed |= !weights_ok;
        println!(
            "cap {}: {stab_line}, weights {}",
            m.label,
            if weights_ok { "ok" } else { "MISMATCH" }
        );
        // Stored analysis fields, when present, must agree with what was
        // just recomputed.
        let rec = &cat.records[idx];
        if let Some(stored) = rec.stabilizer_order {
            if stored != fx.stabilizer.order() {
                println!("cap {}: catalog stores stabilizer order {stored}", m.label);
                failed = true;
            }
        }
        if let Some(stored) = &rec.weights {
            if *stored != weights {
                println!("cap {}: catalog stores different weights", m.label);
                failed = true;
            }
        }
    }

    if failed {
        println!("verify: FAILED");
        Ok(ExitCode::from(1))
    } else {
        println!("verify: ok");
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.file)
        .with_context(|| format!("cannot read {}", args.file.display()))?;
    let cap_file = parse_cap(&text)?;
    let space = cap_file.space()?;

    // Resolve columns one by one so diagnostics can name file columns.
    let mut indices: Vec<u16> = Vec::with_capacity(cap_file.size());
    for j in 0..cap_file.size() {
        indices.push(space.index_of(&cap_file.matrix.col(j))?);
    }
    let set = cap_file.points(&space)?;
    if let Some((x, y, z)) = space.cap_violation(&set) {
        let col = |p: u16| indices.iter().position(|&i| i == p).unwrap() + 1;
        return Err(anyhow!(
            "three collinear points: columns {}, {} and {} (point indices {x}, {y}, {z})",
            col(x),
            col(y),
            col(z)
        ));
    }

    println!("PG({},{}) cap, {} points", space.r(), space.q(), set.len());
    let completeness = if space.is_complete(&set) {
        "complete"
    } else {
        "incomplete"
    };
    let stab_text = match stabilizer(&space, &set) {
        Ok(stab) => format!("stabilizer {}", group_descriptor(&space, &stab.elements)),
        Err(e) => format!("stabilizer not computed ({e})"),
    };
    let weights = weight_distribution(&space, &set);
    println!("{completeness}; {stab_text}; {weights}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(args: ExportArgs) -> Result<ExitCode> {
    let file = File::open(&args.catalog)
        .with_context(|| format!("cannot read {}", args.catalog.display()))?;
    let cat = catalog::read_from(BufReader::new(file))?;
    eprintln!("{} classes of PG({},{})", cat.records.len(), cat.r, cat.q);
    write_output(args.out.as_deref(), |w| match args.format {
        Format::Records => Ok(catalog::write_to(w, &cat)?),
        Format::PaperText => write_paper_text(w, &cat),
    })?;
    Ok(ExitCode::SUCCESS)
}
