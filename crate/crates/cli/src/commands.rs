use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use lowdisc::alpha::GROWTH_PREFIX;
use lowdisc::decimal::rational_to_decimal;
use lowdisc::discrepancy::{PartitionReport, SegmentReport};
use lowdisc::fib::{log_phi_length_bound, to_positive_rep_traced};
use lowdisc::{
    construct_alpha, dn_series, partition_discrepancy, zeckendorf, AlphaApprox, SeriesRow, Targets,
};
use num_rational::BigRational;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// Digits of the rational proxy used for `{φ k}`.
pub const TARGET_DIGITS: usize = 40;
/// Decimal places in CSV columns.
pub const CSV_DIGITS: usize = 12;
/// Smallest `N` included in the reported maximum of `D_N / ln N`.
pub const RATIO_FROM: u64 = 10;

pub fn fib_rep(n: u64) -> Result<String, CliError> {
    let zeck = zeckendorf(n)?;
    let (rep, trace) = to_positive_rep_traced(n)?;
    let mut out = String::new();
    writeln!(out, "zeck: {}, positive: {}", zeck.to_binary_string(), rep).unwrap();
    let steps: Vec<String> = trace.iter().map(ToString::to_string).collect();
    if steps.is_empty() {
        writeln!(out, "trace: none").unwrap();
    } else {
        writeln!(out, "trace: {}", steps.join(" ")).unwrap();
    }
    writeln!(
        out,
        "length: {} (bound {})",
        rep.len(),
        log_phi_length_bound(n)
    )
    .unwrap();
    Ok(out)
}

pub fn build_alpha(cfg: &RunConfig) -> Result<AlphaApprox, CliError> {
    cfg.validate()?;
    let seq = cfg.sequence.build(cfg.stages.max(GROWTH_PREFIX) + 1)?;
    Ok(construct_alpha(
        seq,
        Targets::golden(TARGET_DIGITS),
        cfg.stages,
        cfg.c.clone(),
    )?)
}

#[derive(Debug, Serialize)]
pub struct AlphaRecord {
    pub sequence: String,
    pub stage: u64,
    pub start: u64,
    pub c: String,
    pub precision: usize,
    pub lo: String,
    pub hi: String,
    pub certified_digits: usize,
    pub alpha: String,
    pub z: Vec<String>,
}

impl AlphaRecord {
    pub fn new(alpha: &AlphaApprox, precision: usize) -> Self {
        AlphaRecord {
            sequence: alpha.sequence().name().to_string(),
            stage: alpha.stage(),
            start: alpha.start(),
            c: alpha.c().to_string(),
            precision,
            lo: rational_to_decimal(alpha.lo(), precision),
            hi: rational_to_decimal(alpha.hi(), precision),
            certified_digits: alpha.certified_digits(),
            alpha: alpha.certified_decimal(),
            z: alpha.zs().map(ToString::to_string).collect(),
        }
    }
}

fn create_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    Ok(())
}

/// Writes `alpha.json` and `alpha.txt`; returns the written paths.
pub fn construct(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let alpha = build_alpha(cfg)?;
    alpha.verify_nested()?;
    alpha.verify_inequality()?;
    create_out_dir(&cfg.out)?;

    let record = AlphaRecord::new(&alpha, cfg.precision);
    let json_path = cfg.out.join("alpha.json");
    let mut json = serde_json::to_string_pretty(&record)?;
    json.push('\n');
    fs::write(&json_path, json)?;

    let txt_path = cfg.out.join("alpha.txt");
    fs::write(&txt_path, format!("{}\n", record.alpha))?;
    Ok(vec![json_path, txt_path])
}

#[derive(Debug, Serialize)]
pub struct SeriesRecord {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "D_N")]
    pub d: String,
    #[serde(rename = "D_N_decimal")]
    pub d_decimal: String,
    #[serde(rename = "ln_N")]
    pub ln_n: String,
    pub ratio: String,
    #[serde(rename = "D_N_over_N", skip_serializing_if = "Option::is_none")]
    pub d_over_n: Option<String>,
}

impl SeriesRecord {
    fn new(row: &SeriesRow, normalized: bool) -> Self {
        let ratio = match row.ratio {
            Some(r) => format!("{r:.CSV_DIGITS$}"),
            None => "inf".to_string(),
        };
        let d_over_n = normalized.then(|| {
            let n = BigRational::from_integer(row.n.into());
            rational_to_decimal(&(&row.discrepancy / n), CSV_DIGITS)
        });
        SeriesRecord {
            n: row.n,
            d: format!("{}/{}", row.discrepancy.numer(), row.discrepancy.denom()),
            d_decimal: rational_to_decimal(&row.discrepancy, CSV_DIGITS),
            ln_n: format!("{:.CSV_DIGITS$}", row.log_n),
            ratio,
            d_over_n,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BlockRecord {
    pub fib_index: usize,
    pub copy: u8,
    pub start: u64,
    pub len: u64,
    #[serde(rename = "D")]
    pub d: String,
    #[serde(rename = "D_decimal")]
    pub d_decimal: String,
    pub wrap_risk: usize,
}

impl BlockRecord {
    fn new(seg: &SegmentReport) -> Self {
        let v = &seg.report.value;
        BlockRecord {
            fib_index: seg.block.fib_index,
            copy: seg.block.copy,
            start: seg.block.start,
            len: seg.block.len,
            d: format!("{}/{}", v.numer(), v.denom()),
            d_decimal: rational_to_decimal(v, CSV_DIGITS),
            wrap_risk: seg.wrap_risk.len(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub sequence: String,
    pub n_max: u64,
    pub stages: u64,
    pub ratio_from: u64,
    pub max_ratio: Option<String>,
    pub max_ratio_at: Option<u64>,
    pub max_block: Option<String>,
    pub prefix: String,
    pub piece_sum: String,
    pub total: String,
    pub subadditive: bool,
    pub wrap_risk: usize,
}

impl Summary {
    pub fn line(&self) -> String {
        format!(
            "summary: sequence={} nmax={} max_ratio={} at N={} (N >= {}) max_block_D={} \
             total_D={} piece_sum={} subadditive={} wrap_risk={}",
            self.sequence,
            self.n_max,
            self.max_ratio.as_deref().unwrap_or("none"),
            self.max_ratio_at
                .map_or("none".to_string(), |n| n.to_string()),
            self.ratio_from,
            self.max_block.as_deref().unwrap_or("none"),
            self.total,
            self.piece_sum,
            self.subadditive,
            self.wrap_risk,
        )
    }
}

/// Results of one experiment run, before serialization.
pub struct Experiment {
    pub rows: Vec<SeriesRow>,
    pub partition: PartitionReport,
    pub summary: Summary,
}

/// Largest `D_N / ln N` over `N ≥ from`, falling back to `N ≥ 2` for short runs.
pub fn max_ratio(rows: &[SeriesRow], from: u64) -> Option<(u64, f64)> {
    let from = if rows.len() as u64 >= from { from } else { 2 };
    rows.iter()
        .filter(|r| r.n >= from)
        .filter_map(|r| r.ratio.map(|x| (r.n, x)))
        .fold(None, |best: Option<(u64, f64)>, cur| match best {
            Some(b) if b.1 >= cur.1 => Some(b),
            _ => Some(cur),
        })
}

pub fn run_experiment(cfg: &RunConfig) -> Result<Experiment, CliError> {
    let alpha = build_alpha(cfg)?;
    let rows = dn_series(&alpha, cfg.n_max)?;
    let partition = partition_discrepancy(&alpha, cfg.n_max)?;
    let best = max_ratio(&rows, RATIO_FROM);
    let summary = Summary {
        sequence: alpha.sequence().name().to_string(),
        n_max: cfg.n_max,
        stages: cfg.stages,
        ratio_from: if cfg.n_max >= RATIO_FROM {
            RATIO_FROM
        } else {
            2
        },
        max_ratio: best.map(|b| format!("{:.CSV_DIGITS$}", b.1)),
        max_ratio_at: best.map(|b| b.0),
        max_block: partition
            .max_block()
            .map(|b| rational_to_decimal(&b.report.value, CSV_DIGITS)),
        prefix: rational_to_decimal(&partition.prefix.value, CSV_DIGITS),
        piece_sum: rational_to_decimal(&partition.piece_sum(), CSV_DIGITS),
        total: rational_to_decimal(&partition.total.value, CSV_DIGITS),
        subadditive: partition.is_subadditive(),
        wrap_risk: partition.blocks.iter().map(|b| b.wrap_risk.len()).sum(),
    };
    Ok(Experiment {
        rows,
        partition,
        summary,
    })
}

#[derive(Serialize)]
struct ExperimentJson<'a> {
    summary: &'a Summary,
    series: Vec<SeriesRecord>,
    blocks: Vec<BlockRecord>,
}

/// Runs the experiment and writes its tables; returns the written paths and
/// the summary line.
pub fn experiment(cfg: &RunConfig) -> Result<(Vec<PathBuf>, String), CliError> {
    let exp = run_experiment(cfg)?;
    create_out_dir(&cfg.out)?;
    let series: Vec<SeriesRecord> = exp
        .rows
        .iter()
        .map(|r| SeriesRecord::new(r, cfg.normalized))
        .collect();
    let blocks: Vec<BlockRecord> = exp.partition.blocks.iter().map(BlockRecord::new).collect();
    let line = exp.summary.line();

    let paths = match cfg.format {
        Format::Csv => {
            let series_path = cfg.out.join("series.csv");
            write_csv(&series_path, &series)?;
            let blocks_path = cfg.out.join("blocks.csv");
            write_csv(&blocks_path, &blocks)?;
            let summary_path = cfg.out.join("summary.txt");
            fs::write(&summary_path, format!("{line}\n"))?;
            vec![series_path, blocks_path, summary_path]
        }
        Format::Json => {
            let path = cfg.out.join("experiment.json");
            let doc = ExperimentJson {
                summary: &exp.summary,
                series,
                blocks,
            };
            let mut text = serde_json::to_string_pretty(&doc)?;
            text.push('\n');
            fs::write(&path, text)?;
            vec![path]
        }
    };
    Ok((paths, line))
}

fn write_csv<T: Serialize>(path: &Path, records: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `text` to stdout, ignoring a closed pipe.
pub fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
}
