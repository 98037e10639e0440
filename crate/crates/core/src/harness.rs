//! Experiment runner: seeded input generation, method dispatch, error and
//! transform-count measurement, CSV emission.

use std::fmt::Write as _;
use std::time::Instant;

use crate::baselines::{fft_baseline, BaselineKind};
use crate::bluestein::BluesteinPlan;
use crate::complex::Complex;
use crate::crt::CrtPair;
use crate::fp_mod::Modulus;
use crate::oracle::{error_metrics, reference_dft};
use crate::rng::{BoxMuller, Xoshiro256};
use crate::split::alpha_variants;
use crate::Error;

/// Desk-scale length bounds for experiments (the oracle is O(n^2)).
pub const MIN_LOG2_N: u32 = 1;
pub const MAX_LOG2_N: u32 = 16;

/// Method under measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Proposed,
    F64Stockham,
    F64Bluestein,
    TsStockham,
    TsBluestein,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Proposed,
        Method::F64Stockham,
        Method::F64Bluestein,
        Method::TsStockham,
        Method::TsBluestein,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::F64Stockham => "f64_stockham",
            Method::F64Bluestein => "f64_bluestein",
            Method::TsStockham => "ts_stockham",
            Method::TsBluestein => "ts_bluestein",
        }
    }

    pub fn parse(s: &str) -> Result<Method, Error> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method '{s}'")))
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Method, Error> {
        Method::parse(s)
    }
}

/// One experiment cell.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub n: usize,
    pub phi: f64,
    pub seed: u64,
    /// Split cap; `None` is unbounded (K = inf, written as 0 in CSV).
    pub k_cap: Option<u32>,
    pub l_bound: u32,
    pub method: Method,
    /// Timing repeats; the reported time is the minimum over repeats.
    pub repeats: u32,
}

impl ExperimentSpec {
    fn validate(&self) -> Result<(), Error> {
        // lengths beyond 2^MAX_LOG2_N surface as the oracle's desk-scale
        // guard after the method runs; malformed lengths are argument errors
        if !self.n.is_power_of_two() || self.n < (1 << MIN_LOG2_N) {
            return Err(Error::InvalidArgument(format!(
                "n must be a power of two in [2^{MIN_LOG2_N}, 2^{MAX_LOG2_N}], got {}",
                self.n
            )));
        }
        if !self.phi.is_finite() || self.phi < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "phi must be finite and >= 0, got {}",
                self.phi
            )));
        }
        if self.l_bound < 1 {
            return Err(Error::InvalidArgument("L must be >= 1".into()));
        }
        if self.k_cap == Some(0) {
            return Err(Error::InvalidArgument("K must be >= 1 or inf".into()));
        }
        if self.repeats < 1 {
            return Err(Error::InvalidArgument("repeats must be >= 1".into()));
        }
        Ok(())
    }
}

/// Transform tallies and split counts for one run.
#[derive(Clone, Copy, Debug, Default)]
pub struct Counters {
    pub fwd_ntt: u64,
    pub inv_ntt: u64,
    pub plan_cached_ntt: u64,
    pub kx_re: usize,
    pub kx_im: usize,
    pub kw_re: usize,
    pub kw_im: usize,
}

/// One CSV row.
#[derive(Clone, Debug)]
pub struct RunRow {
    pub method: Method,
    pub n: usize,
    pub phi: f64,
    pub seed: u64,
    pub k_cap: Option<u32>,
    pub l_bound: u32,
    pub alpha: u32,
    pub counters: Counters,
    pub max_rel_err: f64,
    pub rel_l2_err: f64,
    pub excluded_parts: usize,
    pub time_ns: u128,
}

pub const CSV_HEADER: &str = "method,n,phi,seed,K,L,alpha,kx_re,kx_im,kw_re,kw_im,\
fwd_ntt,inv_ntt,plan_cached_ntt,max_rel_err,rel_l2_err,excluded_parts,time_ns";

impl RunRow {
    pub fn csv_line(&self) -> String {
        let c = &self.counters;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:e},{:e},{},{}",
            self.method.as_str(),
            self.n,
            self.phi,
            self.seed,
            self.k_cap.unwrap_or(0), // 0 encodes K = inf
            self.l_bound,
            self.alpha,
            c.kx_re,
            c.kx_im,
            c.kw_re,
            c.kw_im,
            c.fwd_ntt,
            c.inv_ntt,
            c.plan_cached_ntt,
            self.max_rel_err,
            self.rel_l2_err,
            self.excluded_parts,
            self.time_ns
        )
    }
}

/// Input generator: each of the 2n real/imaginary parts is an independent
/// draw of `(rand - 0.5) * exp(phi * randn)` with `rand` uniform on (0, 1]
/// and `randn` standard normal (Box-Muller). Fully determined by the seed.
pub fn gen_input(n: usize, phi: f64, seed: u64) -> Vec<Complex> {
    assert!(phi >= 0.0);
    let mut bm = BoxMuller::new(Xoshiro256::seed_from_u64(seed));
    let mut part = || {
        let u = bm.rng.next_f64_open01() - 0.5;
        u * (phi * bm.next_normal()).exp()
    };
    (0..n)
        .map(|_| {
            let re = part();
            let im = part();
            Complex::new(re, im)
        })
        .collect()
}

/// Runs one cell: generate the input, run the method, measure errors
/// against the reference DFT, and capture transform counts and wall time.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunRow, Error> {
    spec.validate()?;
    let x = gen_input(spec.n, spec.phi, spec.seed);

    let mut counters = Counters::default();
    let mut alpha = 0u32;
    let mut y = Vec::new();
    let mut best_ns = u128::MAX;

    match spec.method {
        Method::Proposed => {
            let plan =
                BluesteinPlan::new(spec.n, spec.k_cap, spec.l_bound, CrtPair::default_pair())?;
            alpha = plan.split_config().alpha();
            let (kw_re, kw_im) = plan.chirp_split_counts();
            counters.plan_cached_ntt = plan.plan_cached_ntt();
            counters.kw_re = kw_re;
            counters.kw_im = kw_im;
            for _ in 0..spec.repeats {
                plan.reset_counters();
                let start = Instant::now();
                let (out, stats) = plan.fft_with_stats(&x);
                best_ns = best_ns.min(start.elapsed().as_nanos());
                let (fwd, inv) = plan.runtime_counts();
                counters.fwd_ntt = fwd;
                counters.inv_ntt = inv;
                counters.kx_re = stats.kx_re;
                counters.kx_im = stats.kx_im;
                y = out;
            }
        }
        method => {
            let kind = match method {
                Method::F64Stockham => BaselineKind::F64Stockham,
                Method::F64Bluestein => BaselineKind::F64Bluestein,
                Method::TsStockham => BaselineKind::TsStockham,
                Method::TsBluestein => BaselineKind::TsBluestein,
                Method::Proposed => unreachable!(),
            };
            for _ in 0..spec.repeats {
                let start = Instant::now();
                y = fft_baseline(kind, &x);
                best_ns = best_ns.min(start.elapsed().as_nanos());
            }
        }
    }

    let reference = reference_dft(&x)?;
    let report = error_metrics(&y, &reference);
    Ok(RunRow {
        method: spec.method,
        n: spec.n,
        phi: spec.phi,
        seed: spec.seed,
        k_cap: spec.k_cap,
        l_bound: spec.l_bound,
        alpha,
        counters,
        max_rel_err: report.max_rel,
        rel_l2_err: report.rel_l2,
        excluded_parts: report.excluded_parts,
        time_ns: best_ns,
    })
}

/// Sweep of the full grid; one CSV row per cell in grid order
/// (n, then phi, then method, then (K, L)). Deterministic given the seed,
/// except for the time column.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    log2_n_min: u32,
    log2_n_max: u32,
    phis: &[f64],
    methods: &[Method],
    k_caps: &[Option<u32>],
    l_bounds: &[u32],
    seed: u64,
) -> Result<String, Error> {
    if methods.is_empty() {
        return Err(Error::InvalidArgument("empty method set".into()));
    }
    if phis.is_empty() || k_caps.is_empty() || l_bounds.is_empty() {
        return Err(Error::InvalidArgument("empty sweep dimension".into()));
    }
    if log2_n_min > log2_n_max || log2_n_min < MIN_LOG2_N || log2_n_max > MAX_LOG2_N {
        return Err(Error::InvalidArgument(format!(
            "log2 n range must sit within [{MIN_LOG2_N}, {MAX_LOG2_N}]"
        )));
    }
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for log2_n in log2_n_min..=log2_n_max {
        for &phi in phis {
            for &method in methods {
                for &k_cap in k_caps {
                    for &l_bound in l_bounds {
                        let row = run_experiment(&ExperimentSpec {
                            n: 1 << log2_n,
                            phi,
                            seed,
                            k_cap,
                            l_bound,
                            method,
                            repeats: 1,
                        })?;
                        out.push_str(&row.csv_line());
                        out.push('\n');
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Split-width table (the four variants, single-precision setting with the
/// default moduli) for n = 2^min .. 2^max.
pub fn alpha_table(log2_n_min: u32, log2_n_max: u32) -> Result<String, Error> {
    if log2_n_min > log2_n_max || log2_n_max > 40 {
        return Err(Error::InvalidArgument("bad log2 n range".into()));
    }
    let p0 = Modulus::default_p0();
    let pair = CrtPair::default_pair();
    let u = 2f64.powi(-24);
    let mut out = String::from("log2_n,alpha_original,alpha_fft,alpha_ntt_single,alpha_ntt_crt\n");
    for log2_n in log2_n_min..=log2_n_max {
        let v = alpha_variants(1usize << log2_n, u, &p0, &pair);
        writeln!(
            out,
            "{},{},{},{},{}",
            log2_n, v.original, v.fft, v.ntt_single, v.ntt_crt
        )
        .expect("string write");
    }
    Ok(out)
}
