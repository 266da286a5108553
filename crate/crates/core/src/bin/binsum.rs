use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use binsum::report::{self, fmt_f64, Stat, Truth, DEFAULT_SEED};
use binsum::{datasets, BinomialMixture, BinomialSum, QuantileQuery};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

/// Sums of independent binomial random variables with different success
/// probabilities.
#[derive(Parser)]
#[command(name = "binsum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Mixture {
    /// Trial counts, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    sizes: Vec<i64>,
    /// Success probabilities, comma separated; a single value is broadcast.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    probs: Vec<f64>,
}

impl Mixture {
    fn build(&self) -> Result<BinomialMixture> {
        Ok(BinomialMixture::new(&self.sizes, &self.probs)?)
    }
}

/// Mixture flags that fall back to the healthcare monitoring data.
#[derive(Args)]
struct OptionalMixture {
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "probs")]
    sizes: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "sizes")]
    probs: Option<Vec<f64>>,
}

impl OptionalMixture {
    fn build(&self) -> Result<BinomialMixture> {
        match (&self.sizes, &self.probs) {
            (Some(s), Some(p)) => Ok(BinomialMixture::new(s, p)?),
            _ => Ok(datasets::healthcare_monitoring()),
        }
    }
}

#[derive(Args)]
struct Output {
    /// Write the table here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn open(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Probability mass at each point of --x (default: the whole support).
    Pdf {
        #[command(flatten)]
        mixture: Mixture,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Option<Vec<i64>>,
        /// Natural-log probabilities.
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Cumulative probability at each point of --q (default: the whole support).
    Cdf {
        #[command(flatten)]
        mixture: Mixture,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        q: Option<Vec<i64>>,
        /// `true` for P(S <= q), `false` for P(S > q).
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        lower_tail: bool,
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Smallest s with P(S <= s) >= p.
    Quantile {
        #[command(flatten)]
        mixture: Mixture,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        lower_tail: bool,
        /// Read --p as natural logs.
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Exact random draws.
    Sample {
        #[command(flatten)]
        mixture: Mixture,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Approximation against exact or simulated truth over the whole support.
    Compare {
        #[arg(long, value_enum, default_value_t = Mode::Mixture)]
        mode: Mode,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        mixture: OptionalMixture,
        #[arg(long, value_enum, default_value_t = TruthArg::Exact)]
        truth: TruthArg,
        /// Simulation size; required with --truth simulation.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum, default_value_t = StatArg::Pdf)]
        stat: StatArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Wall time and accuracy of the saddlepoint table and of simulations.
    Bench {
        #[command(flatten)]
        mixture: OptionalMixture,
        #[arg(long, value_delimiter = ',', required = true)]
        trials: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    TwoBinomial,
    Mixture,
}

#[derive(Clone, Copy, ValueEnum)]
enum TruthArg {
    Exact,
    Simulation,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatArg {
    Pdf,
    Cdf,
}

impl From<StatArg> for Stat {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::Pdf => Stat::Pdf,
            StatArg::Cdf => Stat::Cdf,
        }
    }
}

fn write_pairs<K: ToString>(
    out: Box<dyn Write>,
    header: [&str; 2],
    rows: impl Iterator<Item = (K, f64)>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for (k, v) in rows {
        w.write_record([k.to_string(), fmt_f64(v)])?;
    }
    w.flush()?;
    Ok(())
}

fn full_support(mix: &BinomialMixture) -> Vec<i64> {
    (0..=mix.total() as i64).collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Pdf {
            mixture,
            x,
            log,
            output,
        } => {
            let mix = mixture.build()?;
            let x = x.unwrap_or_else(|| full_support(&mix));
            let values = BinomialSum::new(mix).pmf_at(&x, log)?;
            write_pairs(output.open()?, ["s", "value"], x.into_iter().zip(values))
        }
        Command::Cdf {
            mixture,
            q,
            lower_tail,
            log,
            output,
        } => {
            let mix = mixture.build()?;
            let q = q.unwrap_or_else(|| full_support(&mix));
            let values = BinomialSum::new(mix).cdf_at(&q, lower_tail, log);
            write_pairs(output.open()?, ["s", "value"], q.into_iter().zip(values))
        }
        Command::Quantile {
            mixture,
            p,
            lower_tail,
            log,
            output,
        } => {
            let queries: Vec<QuantileQuery> = p
                .iter()
                .map(|&p| QuantileQuery {
                    p,
                    lower_tail,
                    log_scale: log,
                })
                .collect();
            let s = BinomialSum::new(mixture.build()?).quantile(&queries)?;
            let mut w = csv::Writer::from_writer(output.open()?);
            w.write_record(["p", "s"])?;
            for (p, s) in p.iter().zip(s) {
                w.write_record([fmt_f64(*p), s.to_string()])?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Sample {
            mixture,
            count,
            seed,
            output,
        } => {
            let draws = BinomialSum::new(mixture.build()?).random(count, seed)?;
            let mut w = csv::Writer::from_writer(output.open()?);
            w.write_record(["draw"])?;
            for d in draws {
                w.write_record([d.to_string()])?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Compare {
            mode,
            m,
            n,
            p,
            mixture,
            truth,
            trials,
            stat,
            seed,
            output,
        } => {
            let truth = match (truth, trials) {
                (TruthArg::Exact, None) => Truth::Exact,
                (TruthArg::Simulation, Some(trials)) => Truth::Simulation { trials },
                (TruthArg::Exact, Some(_)) => bail!("--trials only applies to --truth simulation"),
                (TruthArg::Simulation, None) => bail!("--truth simulation requires --trials"),
            };
            let report = match mode {
                Mode::TwoBinomial => {
                    if mixture.sizes.is_some() {
                        bail!("--sizes/--probs do not apply to --mode two-binomial");
                    }
                    let (Some(m), Some(n), Some(p)) = (m, n, p) else {
                        bail!("--mode two-binomial requires --m, --n and --p");
                    };
                    match truth {
                        Truth::Exact => report::compare_two_binomial(m, n, p, stat.into())?,
                        Truth::Simulation { .. } => {
                            let mix = datasets::two_binomial(m, n, p)?;
                            report::compare_mixture(&mix, truth, seed, stat.into())?
                        }
                    }
                }
                Mode::Mixture => {
                    if m.is_some() || n.is_some() || p.is_some() {
                        bail!("--m/--n/--p only apply to --mode two-binomial");
                    }
                    report::compare_mixture(&mixture.build()?, truth, seed, stat.into())?
                }
            };
            eprintln!("# {}", report.metadata());
            report.write_csv(output.open()?)?;
            Ok(())
        }
        Command::Bench {
            mixture,
            trials,
            seed,
            output,
        } => {
            let report = report::bench(&mixture.build()?, &trials, seed)?;
            eprintln!("# {}", report.metadata());
            report.write_csv(output.open()?)?;
            Ok(())
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<binsum::Error>() {
        return match e {
            binsum::Error::GuardExceeded { .. } => 3,
            binsum::Error::Csv(_) => 1,
            _ => 2,
        };
    }
    if err.chain().any(|c| c.is::<io::Error>() || c.is::<csv::Error>()) {
        return 1;
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("binsum: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
