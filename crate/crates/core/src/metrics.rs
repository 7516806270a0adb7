//! Aggregation of per-trial decoding records into summary rows.

use crate::{Error, Result};

/// Decoder variants driven by the simulation harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    Orbgrand,
    CdfOrbgrand,
    Sgrand,
    FinetunedCdf,
    FinetunedOrb,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Orbgrand => "orb",
            Variant::CdfOrbgrand => "cdf",
            Variant::Sgrand => "sgrand",
            Variant::FinetunedCdf => "ft-cdf",
            Variant::FinetunedOrb => "ft-orb",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "orb" | "orbgrand" => Ok(Variant::Orbgrand),
            "cdf" | "cdf-orbgrand" => Ok(Variant::CdfOrbgrand),
            "sgrand" => Ok(Variant::Sgrand),
            "ft-cdf" => Ok(Variant::FinetunedCdf),
            "ft-orb" => Ok(Variant::FinetunedOrb),
            other => Err(Error::invalid(format!(
                "unknown variant {other:?} (expected orb, cdf, sgrand, ft-cdf or ft-orb)"
            ))),
        }
    }

    pub fn all() -> [Variant; 5] {
        [
            Variant::Orbgrand,
            Variant::CdfOrbgrand,
            Variant::Sgrand,
            Variant::FinetunedCdf,
            Variant::FinetunedOrb,
        ]
    }
}

/// Outcome of one simulated frame.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub variant: Variant,
    pub ebn0_db: f64,
    pub decoded: bool,
    /// true when the frame was not decoded to the transmitted codeword
    /// (abandonments and false decodes both count)
    pub block_error: bool,
    pub tests_used: u64,
    /// inversion fraction of the full test order; sampled on a sub-stream
    pub eta_sample: Option<f64>,
    pub adjust_iterations: u64,
    pub elapsed_us: f64,
    pub selected_positions: Option<Vec<u32>>,
}

/// Aggregate of one (variant, Eb/N0) cell.
#[derive(Debug, Clone)]
pub struct CellSummary {
    pub variant: Variant,
    pub ebn0_db: f64,
    pub frames: u64,
    pub block_errors: u64,
    pub bler: f64,
    /// 95% half-width (normal approximation)
    pub bler_ci: f64,
    pub mean_tests: f64,
    pub mean_eta: f64,
    pub eta_samples: u64,
    /// adjustment-loop iterations per membership test
    pub mean_adjust_iters: f64,
    pub mean_elapsed_us: f64,
}

/// Whole-sweep summary, one cell per (variant, Eb/N0).
#[derive(Debug, Clone, Default)]
pub struct SweepSummary {
    pub cells: Vec<CellSummary>,
}

/// Reduces the records of one cell. Sum-based, so the result is invariant
/// to record order up to floating-point association; the harness feeds
/// records in frame order to keep output bit-stable.
pub fn aggregate(variant: Variant, ebn0_db: f64, records: &[TrialRecord]) -> Result<CellSummary> {
    if records.is_empty() {
        return Err(Error::invalid(format!(
            "no records for variant {} at {ebn0_db} dB",
            variant.name()
        )));
    }
    let frames = records.len() as u64;
    let mut block_errors = 0u64;
    let mut tests = 0.0;
    let mut eta_sum = 0.0;
    let mut eta_n = 0u64;
    let mut adjust = 0u64;
    let mut total_tests = 0u64;
    let mut elapsed = 0.0;
    for r in records {
        debug_assert_eq!((r.variant, r.ebn0_db), (variant, ebn0_db));
        block_errors += u64::from(r.block_error);
        tests += r.tests_used as f64;
        total_tests += r.tests_used;
        adjust += r.adjust_iterations;
        elapsed += r.elapsed_us;
        if let Some(e) = r.eta_sample {
            eta_sum += e;
            eta_n += 1;
        }
    }
    let bler = block_errors as f64 / frames as f64;
    Ok(CellSummary {
        variant,
        ebn0_db,
        frames,
        block_errors,
        bler,
        bler_ci: normal_ci_half_width(block_errors, frames),
        mean_tests: tests / frames as f64,
        mean_eta: if eta_n > 0 { eta_sum / eta_n as f64 } else { f64::NAN },
        eta_samples: eta_n,
        mean_adjust_iters: adjust as f64 / total_tests as f64,
        mean_elapsed_us: elapsed / frames as f64,
    })
}

/// 95% confidence half-width of a binomial proportion, normal approximation.
pub fn normal_ci_half_width(successes: u64, trials: u64) -> f64 {
    let n = trials as f64;
    let p = successes as f64 / n;
    1.96 * (p * (1.0 - p) / n).sqrt()
}

/// Exact Clopper-Pearson 95% interval, by bisection on the binomial tails.
/// For low-error cells where the normal approximation is poor.
pub fn binomial_ci_exact(successes: u64, trials: u64) -> (f64, f64) {
    let alpha = 0.05;
    let lower = if successes == 0 {
        0.0
    } else {
        bisect_p(|p| binom_tail_geq(trials, successes, p) - alpha / 2.0)
    };
    let upper = if successes == trials {
        1.0
    } else {
        // P(X >= k+1; u) = 1 - alpha/2, i.e. P(X <= k; u) = alpha/2
        bisect_p(|p| binom_tail_geq(trials, successes + 1, p) - (1.0 - alpha / 2.0))
    };
    (lower, upper)
}

/// P(X >= k) for X ~ Binomial(n, p), summed in log space.
fn binom_tail_geq(n: u64, k: u64, p: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    // log C(n, k) via lgamma
    let lchoose = |n: f64, k: f64| lgamma(n + 1.0) - lgamma(k + 1.0) - lgamma(n - k + 1.0);
    let mut total = 0.0;
    for x in k..=n {
        let lg = lchoose(n as f64, x as f64) + x as f64 * lp + (n - x) as f64 * lq;
        total += lg.exp();
        // terms only shrink past the mode; stop once they underflow there
        if lg < -745.0 && x as f64 > n as f64 * p {
            break;
        }
    }
    total.min(1.0)
}

fn lgamma(x: f64) -> f64 {
    libm::lgamma(x)
}

fn bisect_p(f: impl Fn(f64) -> f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// CSV header matching [`csv_row`].
pub fn csv_header() -> &'static str {
    "variant,ebn0_db,frames,block_errors,bler,bler_ci,mean_tests,mean_eta,eta_samples,mean_adjust_iters,mean_elapsed_us"
}

/// One CSV row per cell; numbers formatted with fixed rules so identical
/// values always serialize identically.
pub fn csv_row(c: &CellSummary) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        c.variant.name(),
        fmt_f64(c.ebn0_db),
        c.frames,
        c.block_errors,
        fmt_f64(c.bler),
        fmt_f64(c.bler_ci),
        fmt_f64(c.mean_tests),
        fmt_f64(c.mean_eta),
        c.eta_samples,
        fmt_f64(c.mean_adjust_iters),
        fmt_f64(c.mean_elapsed_us),
    )
}

/// One JSON object per cell, for the jsonl output format.
pub fn jsonl_row(c: &CellSummary) -> String {
    format!(
        "{{\"variant\":\"{}\",\"ebn0_db\":{},\"frames\":{},\"block_errors\":{},\"bler\":{},\"bler_ci\":{},\"mean_tests\":{},\"mean_eta\":{},\"eta_samples\":{},\"mean_adjust_iters\":{},\"mean_elapsed_us\":{}}}",
        c.variant.name(),
        fmt_f64(c.ebn0_db),
        c.frames,
        c.block_errors,
        fmt_f64(c.bler),
        fmt_f64(c.bler_ci),
        fmt_f64(c.mean_tests),
        fmt_f64(c.mean_eta),
        c.eta_samples,
        fmt_f64(c.mean_adjust_iters),
        fmt_f64(c.mean_elapsed_us),
    )
}

pub(crate) fn fmt_f64(v: f64) -> String {
    let v = v + 0.0; // normalize -0.0
    if v.is_nan() {
        "nan".to_string()
    } else if v == v.trunc() && v.abs() < 1e15 {
        format!("{v:.1}")
    } else {
        format!("{v:.9e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(variant: Variant, block_error: bool, tests: u64) -> TrialRecord {
        TrialRecord {
            variant,
            ebn0_db: 5.0,
            decoded: !block_error,
            block_error,
            tests_used: tests,
            eta_sample: None,
            adjust_iterations: 0,
            elapsed_us: 0.0,
            selected_positions: None,
        }
    }

    #[test]
    fn aggregate_basics() {
        let mut records: Vec<TrialRecord> =
            (0..8).map(|_| record(Variant::Orbgrand, false, 1)).collect();
        records.push(record(Variant::Orbgrand, true, 3));
        records.push(record(Variant::Orbgrand, true, 1));
        let cell = aggregate(Variant::Orbgrand, 5.0, &records).unwrap();
        assert_eq!(cell.frames, 10);
        assert_eq!(cell.block_errors, 2);
        assert!((cell.bler - 0.2).abs() < 1e-15);
        assert!((cell.mean_tests - 1.2).abs() < 1e-15);
    }

    #[test]
    fn aggregate_mean_tests_pair() {
        let records = vec![
            record(Variant::Sgrand, false, 1),
            record(Variant::Sgrand, false, 3),
        ];
        let cell = aggregate(Variant::Sgrand, 5.0, &records).unwrap();
        assert_eq!(cell.mean_tests, 2.0);
    }

    #[test]
    fn aggregate_permutation_invariant() {
        let mut records: Vec<TrialRecord> = (0..50)
            .map(|i| record(Variant::CdfOrbgrand, i % 7 == 0, (i % 13) + 1))
            .collect();
        let a = aggregate(Variant::CdfOrbgrand, 5.0, &records).unwrap();
        records.reverse();
        let b = aggregate(Variant::CdfOrbgrand, 5.0, &records).unwrap();
        assert_eq!(a.block_errors, b.block_errors);
        assert_eq!(a.mean_tests, b.mean_tests);
    }

    #[test]
    fn empty_cell_errors() {
        assert!(aggregate(Variant::Orbgrand, 5.0, &[]).is_err());
    }

    #[test]
    fn exact_binomial_interval_contains_normal_point() {
        let (lo, hi) = binomial_ci_exact(3, 1000);
        assert!(lo < 0.003 && 0.003 < hi);
        // known Clopper-Pearson bounds for 0 successes: upper ~ 1 - (a/2)^(1/n)
        let (lo0, hi0) = binomial_ci_exact(0, 100);
        assert_eq!(lo0, 0.0);
        assert!((hi0 - (1.0 - 0.025f64.powf(0.01))).abs() < 1e-6);
        // low-rate cell at larger n: interval brackets the point estimate
        // and stays tight
        let (lo, hi) = binomial_ci_exact(10, 100_000);
        assert!(lo < 1e-4 && 1e-4 < hi);
        assert!(lo > 4e-5 && hi < 2e-4, "({lo}, {hi})");
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::all() {
            assert_eq!(Variant::parse(v.name()).unwrap(), v);
        }
        assert!(Variant::parse("nope").is_err());
    }
}
