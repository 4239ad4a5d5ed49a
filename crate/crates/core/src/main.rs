use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use katka::model::{parse_fasta, parse_newick, DEFAULT_SENTINEL};
use katka::{parse_reads, KatkaIndex, KmerResult, ReadRecord};

/// k-mer classification against a phylogenetic tree, with k chosen per query.
#[derive(Parser)]
#[command(name = "katka", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a Newick tree and a FASTA file of leaf genomes.
    Build(BuildArgs),
    /// Classify the k-mers of a pattern or of every read in a FASTQ file.
    Query(QueryArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Newick tree; leaf labels name the genomes.
    #[arg(long)]
    tree: PathBuf,
    /// FASTA with one record per leaf.
    #[arg(long)]
    genomes: PathBuf,
    /// Index file to write.
    #[arg(long)]
    out: PathBuf,
    /// Separator placed between genomes; must not occur in any genome.
    #[arg(long, default_value_t = DEFAULT_SENTINEL as char)]
    sentinel: char,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["pattern", "reads"]))]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    /// A single pattern.
    #[arg(long)]
    pattern: Option<String>,
    /// FASTQ (or FASTA) file of reads.
    #[arg(long)]
    reads: Option<PathBuf>,
    /// k-mer length.
    #[arg(short = 'k')]
    k: usize,
    /// Write TSV here instead of standard output.
    #[arg(long)]
    tsv: Option<PathBuf>,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Build(args) => build(args),
        Command::Query(args) => query(args),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn build(args: BuildArgs) -> Result<()> {
    if !args.sentinel.is_ascii() {
        bail!("sentinel must be a single ASCII character");
    }
    let sentinel = args.sentinel as u8;
    let tree = File::open(&args.tree)
        .map_err(anyhow::Error::from)
        .and_then(|f| Ok(parse_newick(BufReader::new(f))?))
        .with_context(|| format!("reading tree {}", args.tree.display()))?;
    let genomes = File::open(&args.genomes)
        .map_err(anyhow::Error::from)
        .and_then(|f| Ok(parse_fasta(BufReader::new(f), sentinel)?))
        .with_context(|| format!("reading genomes {}", args.genomes.display()))?;

    let index = KatkaIndex::build_with_sentinel(tree, &genomes, sentinel)
        .context("building index")?;
    index
        .save_to_path(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;

    let (fwd, rev) = (index.forward(), index.reverse());
    println!("genomes\t{}", index.genome_count());
    println!("text_length\t{}", index.text_len());
    println!("forward_phrases\t{}", fwd.parse().z());
    println!("reverse_phrases\t{}", rev.parse().z());
    println!("forward_grid_points\t{}", fwd.grid().len());
    println!("reverse_grid_points\t{}", rev.grid().len());
    Ok(())
}

fn query(args: QueryArgs) -> Result<()> {
    if args.k == 0 {
        bail!("k must be at least 1");
    }
    let index = KatkaIndex::load_from_path(&args.index)
        .with_context(|| format!("loading index {}", args.index.display()))?;

    let reads = match (&args.pattern, &args.reads) {
        (Some(p), _) => vec![ReadRecord {
            id: "pattern".into(),
            sequence: p.trim().as_bytes().to_ascii_uppercase(),
        }],
        (None, Some(path)) => File::open(path)
            .map_err(anyhow::Error::from)
            .and_then(|f| Ok(parse_reads(BufReader::new(f))?))
            .with_context(|| format!("reading {}", path.display()))?,
        (None, None) => unreachable!("clap requires one input"),
    };

    let classified: Vec<Vec<KmerResult>> = reads
        .par_iter()
        .map(|r| {
            index
                .classify(&r.sequence, args.k)
                .with_context(|| format!("read {}", r.id))
        })
        .collect::<Result<_>>()?;

    let sink: Box<dyn Write> = match &args.tsv {
        Some(path) => Box::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    writeln!(out, "read_id\tposition\tkmer\tvertex\tlabel")?;
    for (read, rows) in reads.iter().zip(&classified) {
        if rows.is_empty() {
            log::warn!(
                "read {} is shorter than k = {} ({} bytes); no k-mers",
                read.id,
                args.k,
                read.sequence.len()
            );
        }
        for row in rows {
            let (vertex, label) = match row.answer {
                Some(v) => (v.to_string(), index.tree().label(v).unwrap_or("")),
                None => ("NULL".to_owned(), ""),
            };
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                read.id,
                row.position,
                String::from_utf8_lossy(&row.kmer),
                vertex,
                label
            )?;
        }
    }
    out.flush()?;
    Ok(())
}
