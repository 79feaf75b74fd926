//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use lowdisc::alpha::GROWTH_PREFIX;
use lowdisc::decimal::rational_to_decimal;
use lowdisc::discrepancy::{dn_series_points, ScaledPoints};
use lowdisc::fib::{fib_u64, log_phi_length_bound};
use lowdisc::golden::linear_rank_violations;
use lowdisc::{
    check_growth, construct_alpha, dn_series, frac_phi_k, min_c, partition, partition_discrepancy,
    sigma_permutation, to_positive_rep, AlphaError, GrowthSequence, Targets,
};
use lowdisc_cli::commands::{max_ratio, TARGET_DIGITS};
use lowdisc_cli::verify;
use num_rational::BigRational;

const POSITIVE_REP_LIMIT: u64 = 100_000;
const PARTITION_LIMIT: u64 = 10_000;
const GOLDEN_LIMIT: usize = 30;
const SUBSTITUTION_INDEX_LIMIT: usize = 12;
const SUBSTITUTION_WINDOW: u64 = 50;
const CONSTRUCTION_STAGES: u64 = 200;
const ORACLE_SEED: u64 = 20_240_601;
const ORACLE_SETS: usize = 10_000;
const ORACLE_MAX_POINTS: usize = 50;
const GROWTH_N: u64 = 300;
const RATIO_FROM: u64 = 10;
/// Pinned after the first certified run, which measured max D_N/ln N = 0.766
/// (N = 152) and max block D = 1.336 over partition(300).
const B_NUM: i64 = 3;
const B_DEN: i64 = 2;

struct Outcome {
    label: &'static str,
    failure: Option<String>,
    detail: String,
}

fn check(label: &'static str, run: impl FnOnce() -> Result<String, String>) -> Outcome {
    let t = Instant::now();
    let (failure, detail) = match run() {
        Ok(d) => (None, d),
        Err(e) => (Some(e), String::new()),
    };
    let secs = t.elapsed().as_secs_f64();
    let o = Outcome {
        label,
        failure,
        detail: format!("{} ({secs:.1}s)", detail),
    };
    match &o.failure {
        None => println!("[PASS] {}: {}", o.label, o.detail),
        Some(e) => println!("[FAIL] {}: {} ({secs:.1}s)", o.label, e),
    }
    o
}

fn positive_representations() -> Result<String, String> {
    let mut longest = 0;
    for n in 1..=POSITIVE_REP_LIMIT {
        let rep = to_positive_rep(n).map_err(|e| format!("N={n}: {e}"))?;
        let d = rep.digits();
        if rep.value() != u128::from(n) {
            return Err(format!("N={n}: {rep} has value {}", rep.value()));
        }
        if d[0] > 3 || d.contains(&0) || d[1..].iter().any(|&x| x > 2) {
            return Err(format!("N={n}: digit bounds fail for {rep}"));
        }
        // r ≤ 1 + log_φ N
        if d.len() > log_phi_length_bound(n) {
            return Err(format!("N={n}: length {} exceeds bound", d.len()));
        }
        longest = longest.max(d.len());
    }
    Ok(format!("N <= {POSITIVE_REP_LIMIT}, longest r = {longest}"))
}

fn partitions() -> Result<String, String> {
    let mut blocks = 0usize;
    for n in 1..=PARTITION_LIMIT {
        let p = partition(n).map_err(|e| format!("N={n}: {e}"))?;
        let mut seen = vec![false; n as usize + 1];
        let mut count = 0u64;
        let pieces = std::iter::once(1..=p.prefix_len).chain(p.blocks.iter().map(|b| b.range()));
        for k in pieces.flatten() {
            if k == 0 || k > n || std::mem::replace(&mut seen[k as usize], true) {
                return Err(format!("N={n}: index {k} repeated or out of range"));
            }
            count += 1;
        }
        for b in &p.blocks {
            let f = fib_u64(b.fib_index).ok_or("index overflow")?;
            if b.len != f || b.start < f {
                return Err(format!(
                    "N={n}: block {b:?} has start below F_i or wrong length"
                ));
            }
        }
        if count != n {
            return Err(format!("N={n}: pieces do not cover 1..N disjointly"));
        }
        blocks += p.blocks.len();
    }
    Ok(format!("N <= {PARTITION_LIMIT}, {blocks} blocks"))
}

fn golden_inequality() -> Result<String, String> {
    let r = verify::golden_inequality(GOLDEN_LIMIT);
    if r.passed {
        Ok(r.detail)
    } else {
        Err(r.detail)
    }
}

fn substitution_windows() -> impl Iterator<Item = (usize, u64)> {
    (1..=SUBSTITUTION_INDEX_LIMIT).flat_map(|i| {
        let f = fib_u64(i).expect("small index");
        (f..=f + SUBSTITUTION_WINDOW).map(move |r| (i, r))
    })
}

/// Plain rank order (smallest point gets 1) under the ordinary absolute value.
fn substitution_literal() -> Result<String, String> {
    let mut failed = Vec::new();
    let mut total = 0;
    for (i, r) in substitution_windows() {
        total += 1;
        let bad = linear_rank_violations(r, i).map_err(|e| e.to_string())?;
        if !bad.is_empty() {
            failed.push((i, r, bad[0]));
        }
    }
    if failed.is_empty() {
        Ok(format!("{total} windows"))
    } else {
        let (i, r, k) = failed[0];
        Err(format!(
            "{} of {total} windows violate |{{phi(R+k)}} - sigma/F_i| <= 1/F_i; first i={i} R={r} k={k}",
            failed.len()
        ))
    }
}

/// Cyclic rank order under the distance to the nearest integer.
fn substitution_cyclic() -> Result<String, String> {
    let mut total = 0;
    for (i, r) in substitution_windows() {
        total += 1;
        let s = sigma_permutation(r, i).map_err(|e| e.to_string())?;
        if !s.is_permutation() {
            return Err(format!("i={i} R={r}: not a permutation"));
        }
    }
    Ok(format!("{total} windows certified"))
}

fn construction() -> Result<String, String> {
    let choice = min_c(&BigRational::from_integer(1.into())).map_err(|e| e.to_string())?;
    let a = construct_alpha(
        GrowthSequence::factorial(),
        Targets::golden(TARGET_DIGITS),
        CONSTRUCTION_STAGES,
        None,
    )
    .map_err(|e| e.to_string())?;
    if a.c() != &choice.c {
        return Err(format!(
            "c = {} differs from min_c choice {}",
            a.c(),
            choice.c
        ));
    }
    a.verify_nested().map_err(|e| e.to_string())?;
    if !a.verify_widths() {
        return Err("interval widths differ from 2c/(k n_k)".into());
    }
    a.verify_inequality().map_err(|e| e.to_string())?;
    a.verify_against(frac_phi_k)
        .map_err(|e| format!("against exact {{phi k}}: {e}"))?;
    Ok(format!(
        "K = {}, c = {} (c_min = {}), {} certified digits",
        a.stage(),
        a.c(),
        choice.c_min,
        a.certified_digits()
    ))
}

fn oracle() -> Result<String, String> {
    let r = verify::oracle_equivalence(ORACLE_SEED, ORACLE_SETS, ORACLE_MAX_POINTS);
    if r.passed {
        Ok(r.detail)
    } else {
        Err(r.detail)
    }
}

fn growth_law() -> Result<String, String> {
    let b = BigRational::new(B_NUM.into(), B_DEN.into());
    let b_f64 = B_NUM as f64 / B_DEN as f64;
    let a = construct_alpha(
        GrowthSequence::factorial(),
        Targets::golden(TARGET_DIGITS),
        GROWTH_N,
        None,
    )
    .map_err(|e| e.to_string())?;

    let rows = dn_series(&a, GROWTH_N).map_err(|e| e.to_string())?;
    let (at, ratio) = max_ratio(&rows, RATIO_FROM).ok_or("no rows")?;
    if ratio > b_f64 {
        return Err(format!(
            "max D_N/ln N = {ratio:.4} at N={at} exceeds B = {b}"
        ));
    }

    let parts = partition_discrepancy(&a, GROWTH_N).map_err(|e| e.to_string())?;
    if let Some(s) = parts.blocks.iter().find(|s| !s.wrap_risk.is_empty()) {
        return Err(format!(
            "block {:?} has points too close to 0 or 1 to certify",
            s.block
        ));
    }
    let worst = parts.max_block().ok_or("no blocks")?;
    if worst.report.value > b {
        return Err(format!(
            "block {:?} has D = {} > B",
            worst.block,
            rational_to_decimal(&worst.report.value, 6)
        ));
    }
    if !parts.is_subadditive() {
        return Err("sum of piece discrepancies is below D_total".into());
    }

    let zeros = dn_series_points(&ScaledPoints::zeros(GROWTH_N as usize));
    if let Some(r) = zeros
        .iter()
        .find(|r| r.discrepancy != BigRational::from_integer(r.n.into()))
    {
        return Err(format!("alpha = 0 control: D_{} != {}", r.n, r.n));
    }
    let (_, zero_ratio) = max_ratio(&zeros, RATIO_FROM).ok_or("no rows")?;
    if zero_ratio <= b_f64 {
        return Err("alpha = 0 control stays below B".into());
    }

    Ok(format!(
        "max D_N/ln N = {ratio:.4} at N={at}, max block D = {}, pieces {} >= total {}, \
         alpha = 0 ratio {zero_ratio:.1}; B = {b}",
        rational_to_decimal(&worst.report.value, 4),
        rational_to_decimal(&parts.piece_sum(), 4),
        rational_to_decimal(&parts.total.value, 4),
    ))
}

fn inadmissible() -> Result<String, String> {
    match check_growth(&GrowthSequence::geometric(2), GROWTH_PREFIX) {
        Err(AlphaError::Inadmissible { .. }) => {}
        other => return Err(format!("check_growth(2^k) returned {other:?}")),
    }
    let out = Command::new(env!("CARGO_BIN_EXE_lowdisc"))
        .args(["construct", "--sequence", "2^k", "--stages", "20"])
        .env(
            "LOWDISC_OUT_DIR",
            std::env::temp_dir().join("lowdisc-acceptance"),
        )
        .output()
        .map_err(|e| e.to_string())?;
    match out.status.code() {
        Some(3) => Ok("check_growth rejects, CLI exit code 3".into()),
        code => Err(format!("CLI exit code {code:?}")),
    }
}

fn main() -> ExitCode {
    let outcomes = [
        check("1 positive representations", positive_representations),
        check("2 partition cover", partitions),
        check("3 golden inequality", golden_inequality),
        check("4 substitution, literal rank order", substitution_literal),
        check("4b substitution, cyclic rank order", substitution_cyclic),
        check("5 nested construction", construction),
        check("6 discrepancy oracle", oracle),
        check("7 growth law", growth_law),
        check("8 inadmissible sequence", inadmissible),
    ];
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| o.failure.is_some())
        .map(|o| o.label)
        .collect();
    println!(
        "acceptance: {} passed, {} failed{}",
        outcomes.len() - failed.len(),
        failed.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(" ({})", failed.join("; "))
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
