use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use axiomlab::constructions::{
    embed_partition, exhaustive_best_partition, fixture_tables, krich_line, parity_quality,
    rotated_segments_pair, table3_datasets, table4_points, threshold_clustering,
};
use axiomlab::data::{Dataset, DistanceMatrix, Partition};
use axiomlab::harness::{reproduce_table3, run_suite, ExperimentConfig, Format, Report, Suite};
use axiomlab::kmeans::{kmeans, kmeans_ideal, ClusteringResult, KMeansConfig, Seeding};
use axiomlab::separation::certify;
use axiomlab::transforms::{centric_transform, motion_transform, scale, TransformRecord};
use axiomlab::{rng, Error, Result};

#[derive(Parser)]
#[command(name = "axiomlab", version, about = "k-means against the clustering axioms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Master random seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a dataset CSV and print the result as JSON.
    Cluster {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, value_enum, default_value_t = Method::Lloyd)]
        method: Method,
        #[arg(long, value_enum, default_value_t = SeedingArg::PlusPlus)]
        seeding: SeedingArg,
        #[command(flatten)]
        common: Common,
    },
    /// Apply a transform to a clustered dataset and write the new dataset CSV.
    Transform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        cluster: Option<usize>,
        #[arg(long)]
        lambda: Option<f64>,
        /// Comma-separated translation vector for motion.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        vector: Option<Vec<f64>>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Where to write the transform record JSON.
        #[arg(long)]
        record: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the separation certificate of a clustered dataset.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Generate a dataset; writes `<out>.csv` and `<out>.partition.json`.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Run one property suite (or `all`); exits nonzero when a check fails.
    Suite {
        name: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value = "json")]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Run suites and/or the variance-explained table and render a report.
    Report {
        /// Comma-separated suite names, or `all`.
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        #[arg(long)]
        table3: bool,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value = "markdown")]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Points on a line that k-means splits into the given cluster sizes.
    Krich {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Samples on four segments, optionally with two of them rotated.
    Segments {
        #[arg(long)]
        rotated: bool,
        #[arg(long, default_value_t = 1000)]
        per_segment: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// The five-component mixture, optionally transformed.
    Mixture {
        #[arg(long, value_enum, default_value_t = MixtureVariant::Original)]
        variant: MixtureVariant,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Place a partition of a distance table in R^m as a Γ-transform.
    Embed {
        #[arg(long)]
        distances: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// The six-point distance table (CSV) and its signed embedding (JSON).
    Fixtures {
        #[arg(long)]
        out: PathBuf,
    },
    /// Best partitions of each prefix of the ten-point set under the parity quality.
    Prefixes {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Lloyd,
    Exact,
    Threshold,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedingArg {
    PlusPlus,
    UniformRandom,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Centric,
    Motion,
    Scale,
}

#[derive(Clone, Copy, ValueEnum)]
enum MixtureVariant {
    Original,
    Kleinberg,
    Centric,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    output(path)?.write_all(text.as_bytes())?;
    Ok(())
}

fn read_dataset(path: &Path) -> Result<Dataset> {
    Dataset::read_csv(File::open(path)?)
}

fn read_partition(path: &Path) -> Result<Partition> {
    Partition::from_json(&std::fs::read_to_string(path)?)
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_pair(base: &Path, ds: &Dataset, p: &Partition) -> Result<()> {
    ds.write_csv(File::create(with_suffix(base, ".csv"))?)?;
    std::fs::write(with_suffix(base, ".partition.json"), p.to_json() + "\n")?;
    Ok(())
}

fn require<T>(v: Option<T>, name: &'static str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter {
        name,
        reason: "required for this transform".to_string(),
    })
}

fn suites_from(names: &[String]) -> Result<Vec<Suite>> {
    if names.iter().any(|n| n == "all") {
        return Ok(Suite::ALL.to_vec());
    }
    names.iter().map(|n| n.parse()).collect()
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Cluster {
            input,
            k,
            restarts,
            method,
            seeding,
            common,
        } => {
            let ds = read_dataset(&input)?;
            let result = match method {
                Method::Threshold => ClusteringResult::from_partition(&ds, threshold_clustering(&ds)?)?,
                Method::Exact => kmeans_ideal(&ds, require(k, "k")?)?,
                Method::Lloyd => {
                    let seeding = match seeding {
                        SeedingArg::PlusPlus => Seeding::PlusPlus,
                        SeedingArg::UniformRandom => Seeding::UniformRandom,
                    };
                    let cfg = KMeansConfig::new(require(k, "k")?)
                        .seeding(seeding)
                        .restarts(restarts)
                        .seed(common.seed);
                    kmeans(&ds, &cfg)?
                }
            };
            emit(common.out.as_deref(), &(serde_json::to_string_pretty(&result)? + "\n"))?;
        }
        Command::Transform {
            input,
            partition,
            kind,
            cluster,
            lambda,
            vector,
            alpha,
            record,
            common,
        } => {
            let ds = read_dataset(&input)?;
            let p = read_partition(&partition)?;
            let (out, rec) = match kind {
                Kind::Centric => {
                    let (c, l) = (require(cluster, "cluster")?, require(lambda, "lambda")?);
                    (centric_transform(&ds, &p, c, l)?, TransformRecord::centric(c, l))
                }
                Kind::Motion => {
                    let (c, v) = (require(cluster, "cluster")?, require(vector, "vector")?);
                    let outcome = motion_transform(&ds, &p, c, &v)?;
                    if !outcome.legal {
                        eprintln!(
                            "warning: motion is not legal (center distances non-decreasing: {}, balls disjoint: {})",
                            outcome.center_distances_non_decreasing, outcome.balls_disjoint
                        );
                    }
                    (outcome.dataset, TransformRecord::motion(c, v))
                }
                Kind::Scale => {
                    let a = require(alpha, "alpha")?;
                    (scale(&ds, a)?, TransformRecord::scale(a))
                }
            };
            out.write_csv(output(common.out.as_deref())?)?;
            if let Some(path) = record {
                std::fs::write(path, serde_json::to_string_pretty(&rec)? + "\n")?;
            }
        }
        Command::Certify {
            input,
            partition,
            common,
        } => {
            let cert = certify(&read_dataset(&input)?, &read_partition(&partition)?)?;
            emit(common.out.as_deref(), &(serde_json::to_string_pretty(&cert)? + "\n"))?;
        }
        Command::Construct { what } => construct(what)?,
        Command::Suite {
            name,
            trials,
            restarts,
            format,
            common,
        } => {
            let config = ExperimentConfig {
                seed: common.seed,
                trials,
                restarts,
                ..ExperimentConfig::default()
            };
            let mut report = Report::new(&config);
            for suite in suites_from(&[name])? {
                let r = run_suite(suite, &config)?;
                eprintln!("{:<28} {}", suite.name(), if r.passed { "pass" } else { "FAIL" });
                report.suites.push(r);
            }
            emit(common.out.as_deref(), &report.render(format)?)?;
            return Ok(report.passed());
        }
        Command::Report {
            suites,
            table3,
            trials,
            restarts,
            format,
            common,
        } => {
            let config = ExperimentConfig {
                seed: common.seed,
                trials,
                restarts,
                ..ExperimentConfig::default()
            };
            let mut report = Report::new(&config);
            for suite in suites_from(&suites)? {
                report.suites.push(run_suite(suite, &config)?);
            }
            if table3 {
                report.table3 = Some(reproduce_table3(&config)?);
            }
            emit(common.out.as_deref(), &report.render(format)?)?;
        }
    }
    Ok(true)
}

fn construct(what: Construct) -> Result<()> {
    match what {
        Construct::Krich { sizes, out } => {
            let line = krich_line(&sizes)?;
            write_pair(&out, &line.dataset, &line.target)
        }
        Construct::Segments {
            rotated,
            per_segment,
            seed,
            out,
        } => {
            let pair = rotated_segments_pair(per_segment, &mut rng::from_seed(seed))?;
            let ds = if rotated { &pair.rotated } else { &pair.original };
            write_pair(&out, ds, &pair.partition)
        }
        Construct::Mixture { variant, seed, out } => {
            let t = table3_datasets(seed)?;
            let ds = match variant {
                MixtureVariant::Original => &t.original,
                MixtureVariant::Kleinberg => &t.kleinberg,
                MixtureVariant::Centric => &t.centric,
            };
            write_pair(&out, ds, &t.components)
        }
        Construct::Embed {
            distances,
            partition,
            dim,
            out,
        } => {
            let d = DistanceMatrix::read_csv(File::open(distances)?)?;
            let p = read_partition(&partition)?;
            write_pair(&out, &embed_partition(&d, &p, dim)?, &p)
        }
        Construct::Fixtures { out } => {
            let f = fixture_tables();
            f.distances.write_csv(File::create(with_suffix(&out, ".csv"))?)?;
            std::fs::write(
                with_suffix(&out, ".embedding.json"),
                serde_json::to_string_pretty(&f.coordinates)? + "\n",
            )?;
            Ok(())
        }
        Construct::Prefixes { out } => {
            let ds = table4_points();
            let optima = exhaustive_best_partition(&ds, None, parity_quality)?;
            ds.write_csv(File::create(with_suffix(&out, ".csv"))?)?;
            std::fs::write(
                with_suffix(&out, ".prefixes.json"),
                serde_json::to_string_pretty(&optima)? + "\n",
            )?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
