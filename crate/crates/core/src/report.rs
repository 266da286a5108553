//! Accuracy and timing reports: the approximation against exact or simulated
//! truth over the full support, serialized as CSV.

use std::io::{Read, Write};
use std::time::Instant;

use crate::datasets;
use crate::density::pmf_table;
use crate::error::{Error, Result};
use crate::model::BinomialMixture;
use crate::oracle::{self, binomial_pmf, cumulative, empirical_pmf, exact_pmf};
use crate::tail::TailApprox;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 42;

pub const COMPARE_HEADER: [&str; 4] = ["s", "truth", "approx", "diff"];
pub const BENCH_HEADER: [&str; 3] = ["method", "wall_time_s", "max_abs_error"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stat {
    Pdf,
    Cdf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    Exact,
    Simulation { trials: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub s: u64,
    pub truth: f64,
    pub approx: f64,
    /// `truth - approx`
    pub diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub method: String,
    pub mixture: BinomialMixture,
    pub truth: Truth,
    pub stat: Stat,
    pub seed: Option<u64>,
    pub rows: Vec<CompareRow>,
}

impl CompareReport {
    pub fn max_abs_diff(&self) -> f64 {
        self.rows.iter().map(|r| r.diff.abs()).fold(0.0, f64::max)
    }

    /// One-line description of everything not in the table.
    pub fn metadata(&self) -> String {
        let truth = match self.truth {
            Truth::Exact => "exact".to_string(),
            Truth::Simulation { trials } => format!("simulation({trials})"),
        };
        let seed = self.seed.map_or("none".to_string(), |s| s.to_string());
        format!(
            "method={} stat={:?} truth={truth} seed={seed} {}",
            self.method,
            self.stat,
            describe(&self.mixture)
        )
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(COMPARE_HEADER).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([r.s.to_string(), fmt_f64(r.truth), fmt_f64(r.approx), fmt_f64(r.diff)])
                .map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))
    }

    /// Parses the table written by [`CompareReport::write_csv`].
    pub fn read_rows<R: Read>(input: R) -> Result<Vec<CompareRow>> {
        read_table(input, &COMPARE_HEADER, |rec| {
            Ok(CompareRow {
                s: parse(&rec[0])?,
                truth: parse(&rec[1])?,
                approx: parse(&rec[2])?,
                diff: parse(&rec[3])?,
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub method: String,
    pub wall_time_s: f64,
    pub max_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub mixture: BinomialMixture,
    pub trials: Vec<usize>,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, method: &str) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.method == method)
    }

    pub fn metadata(&self) -> String {
        format!(
            "trials={:?} seed={} {}",
            self.trials,
            self.seed,
            describe(&self.mixture)
        )
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(BENCH_HEADER).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([r.method.clone(), fmt_f64(r.wall_time_s), fmt_f64(r.max_abs_error)])
                .map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))
    }

    pub fn read_rows<R: Read>(input: R) -> Result<Vec<BenchRow>> {
        read_table(input, &BENCH_HEADER, |rec| {
            Ok(BenchRow {
                method: rec[0].to_string(),
                wall_time_s: parse(&rec[1])?,
                max_abs_error: parse(&rec[2])?,
            })
        })
    }
}

/// Method label of a simulation with `trials` draws.
pub fn simulation_label(trials: usize) -> String {
    format!("simulation_{trials}")
}

pub const SADDLEPOINT_LABEL: &str = "saddlepoint";

/// Shortest round-trip decimal, switching to exponent form for very large or
/// small magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn describe(mix: &BinomialMixture) -> String {
    let join = |v: Vec<String>| v.join(",");
    format!(
        "sizes={} probs={}",
        join(mix.sizes().iter().map(|s| s.to_string()).collect()),
        join(mix.probs().iter().map(|p| fmt_f64(*p)).collect())
    )
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv(e.to_string())
}

fn parse<T: std::str::FromStr>(field: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::Csv(format!("unparsable field {field:?}")))
}

fn read_table<R: Read, T>(input: R, header: &[&str], row: impl Fn(&csv::StringRecord) -> Result<T>) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(input);
    let got = r.headers().map_err(csv_err)?;
    if got.iter().ne(header.iter().copied()) {
        return Err(Error::Csv(format!("unexpected header {got:?}")));
    }
    r.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            row(&rec)
        })
        .collect()
}

fn rows(truth: &[f64], approx: &[f64]) -> Vec<CompareRow> {
    truth
        .iter()
        .zip(approx)
        .enumerate()
        .map(|(s, (&t, &a))| CompareRow {
            s: s as u64,
            truth: t,
            approx: a,
            diff: t - a,
        })
        .collect()
}

/// The approximation over `0..=N`: the pmf table or the lower-tail cdf.
pub fn approximate(mix: &BinomialMixture, stat: Stat) -> Result<Vec<f64>> {
    match stat {
        Stat::Pdf => Ok(pmf_table(mix)?.mass),
        Stat::Cdf => {
            let q: Vec<i64> = (0..=mix.total() as i64).collect();
            Ok(TailApprox::new(mix).cdf_at(&q, true, false))
        }
    }
}

fn accumulate(mass: Vec<f64>, stat: Stat) -> Vec<f64> {
    match stat {
        Stat::Pdf => mass,
        Stat::Cdf => cumulative(&mass),
    }
}

/// `Bin(m, p) + Bin(n, p)` against the closed-form `Bin(m + n, p)`.
pub fn compare_two_binomial(m: u64, n: u64, p: f64, stat: Stat) -> Result<CompareReport> {
    let mixture = datasets::two_binomial(m, n, p)?;
    let truth = accumulate(binomial_pmf(mixture.total(), p), stat);
    let approx = approximate(&mixture, stat)?;
    Ok(CompareReport {
        method: SADDLEPOINT_LABEL.to_string(),
        rows: rows(&truth, &approx),
        mixture,
        truth: Truth::Exact,
        stat,
        seed: None,
    })
}

/// Any mixture against the exact convolution or a simulation of `trials`
/// draws.
pub fn compare_mixture(mix: &BinomialMixture, truth: Truth, seed: u64, stat: Stat) -> Result<CompareReport> {
    let (mass, seed) = match truth {
        Truth::Exact => (exact_pmf(mix)?.mass, None),
        Truth::Simulation { trials } => {
            let draws = oracle::sample(mix, trials, seed)?;
            (empirical_pmf(&draws, mix.total())?, Some(seed))
        }
    };
    let truth_col = accumulate(mass, stat);
    let approx = approximate(mix, stat)?;
    Ok(CompareReport {
        method: SADDLEPOINT_LABEL.to_string(),
        rows: rows(&truth_col, &approx),
        mixture: mix.clone(),
        truth,
        stat,
        seed,
    })
}

fn max_abs_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn seconds_since(start: Instant) -> f64 {
    // Clamp to a nanosecond so a coarse clock never reports zero.
    start.elapsed().as_secs_f64().max(1e-9)
}

/// Times the saddlepoint pmf table and each simulation size (draws plus
/// empirical pmf); errors are against the exact pmf.
pub fn bench(mix: &BinomialMixture, trials: &[usize], seed: u64) -> Result<BenchReport> {
    if trials.is_empty() {
        return Err(Error::EmptyTrials);
    }
    let exact = exact_pmf(mix)?.mass;
    let mut out = Vec::with_capacity(trials.len() + 1);

    let start = Instant::now();
    let table = pmf_table(mix)?;
    out.push(BenchRow {
        method: SADDLEPOINT_LABEL.to_string(),
        wall_time_s: seconds_since(start),
        max_abs_error: max_abs_error(&table.mass, &exact),
    });

    for &count in trials {
        let start = Instant::now();
        let draws = oracle::sample(mix, count, seed)?;
        let pmf = empirical_pmf(&draws, mix.total())?;
        out.push(BenchRow {
            method: simulation_label(count),
            wall_time_s: seconds_since(start),
            max_abs_error: max_abs_error(&pmf, &exact),
        });
    }
    Ok(BenchReport {
        mixture: mix.clone(),
        trials: trials.to_vec(),
        seed,
        rows: out,
    })
}
