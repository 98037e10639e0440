//! The proposed double-precision FFT: Bluestein's reduction with the
//! split-component NTT convolution.
//!
//! For power-of-two `n` the Bluestein convolution is cyclic of length `n`
//! (no zero padding): the wrap-around chirp-conjugate sequence equals the
//! full-length conjugate chirp because `ω_{2n}^{n²} = (-1)^n = 1`. The plan
//! caches the chirp tables and the conjugate chirp's split sets, so their
//! forward NTTs happen once per plan.

use crate::complex::Complex;
use crate::crt::CrtPair;
use crate::ntt::NttPlan;
use crate::oracle::sincospi_frac_f64;
use crate::ozaki_conv::{ts_complex_conv, ConvContext, ConvRoute};
use crate::split::{split_ts_and_ntt, SplitConfig, SplitSet};
use crate::ts::{ts_complex_mul, TsComplexVector, TsScalar};
use crate::Error;

/// Chirp vector `ω(j) = exp(-πi j²/n)`, with `j²` reduced mod `2n` in exact
/// integer arithmetic before the trigonometric evaluation.
pub fn chirp_table(n: usize) -> Vec<Complex> {
    assert!(n >= 1 && n.is_power_of_two());
    (0..n as u64)
        .map(|j| {
            let e = (j * j) % (2 * n as u64);
            let (c, s) = sincospi_frac_f64(e, n as u64);
            Complex::new(c, -s)
        })
        .collect()
}

/// Per-call split statistics for the transform input.
#[derive(Clone, Copy, Debug, Default)]
pub struct FftStats {
    pub kx_re: usize,
    pub kx_im: usize,
}

/// Immutable transform plan: chirp tables (double and TS), cached split
/// sets of the conjugate chirp, NTT plans for both moduli, and the split
/// configuration.
pub struct BluesteinPlan {
    n: usize,
    pair: CrtPair,
    plan0: NttPlan,
    plan1: NttPlan,
    cfg: SplitConfig,
    chirp: Vec<Complex>,
    chirp_ts: TsComplexVector,
    chirp_conj_re_split: SplitSet,
    chirp_conj_im_split: SplitSet,
    plan_cached_ntt: u64,
}

impl BluesteinPlan {
    pub fn new(
        n: usize,
        k_cap: Option<u32>,
        l_bound: u32,
        pair: CrtPair,
    ) -> Result<BluesteinPlan, Error> {
        let plan0 = NttPlan::new(n, pair.p0())?;
        let plan1 = NttPlan::new(n, pair.p1())?;
        let cfg = SplitConfig::new(&pair, n, k_cap, l_bound)?;

        let chirp = chirp_table(n);
        let chirp_ts = TsComplexVector::from_complex_slice(&chirp);
        let conj_re: Vec<TsScalar> = chirp_ts.re.clone();
        let conj_im: Vec<TsScalar> = chirp_ts.im.iter().map(|t| t.neg()).collect();

        let chirp_conj_re_split = split_ts_and_ntt(&conj_re, &plan0, &plan1, &cfg);
        let chirp_conj_im_split = split_ts_and_ntt(&conj_im, &plan0, &plan1, &cfg);
        let plan_cached_ntt = plan0.counters().total() + plan1.counters().total();
        plan0.counters().reset();
        plan1.counters().reset();

        Ok(BluesteinPlan {
            n,
            pair,
            plan0,
            plan1,
            cfg,
            chirp,
            chirp_ts,
            chirp_conj_re_split,
            chirp_conj_im_split,
            plan_cached_ntt,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn split_config(&self) -> &SplitConfig {
        &self.cfg
    }

    pub fn chirp(&self) -> &[Complex] {
        &self.chirp
    }

    /// Forward NTTs spent building the cached chirp splits (at most 4K).
    pub fn plan_cached_ntt(&self) -> u64 {
        self.plan_cached_ntt
    }

    /// Split counts of the cached conjugate-chirp real/imaginary parts.
    pub fn chirp_split_counts(&self) -> (usize, usize) {
        (self.chirp_conj_re_split.k(), self.chirp_conj_im_split.k())
    }

    /// Runtime transform tallies since the last reset (excludes the
    /// plan-cached chirp NTTs).
    pub fn runtime_counts(&self) -> (u64, u64) {
        (
            self.plan0.counters().forward() + self.plan1.counters().forward(),
            self.plan0.counters().inverse() + self.plan1.counters().inverse(),
        )
    }

    pub fn reset_counters(&self) {
        self.plan0.counters().reset();
        self.plan1.counters().reset();
    }

    /// `y ≈ DFT(x)`: chirp pre-multiply in TS, split, convolve against the
    /// cached conjugate-chirp splits, chirp post-multiply, round to double.
    pub fn fft(&self, x: &[Complex]) -> Vec<Complex> {
        self.fft_with_stats(x).0
    }

    pub fn fft_with_stats(&self, x: &[Complex]) -> (Vec<Complex>, FftStats) {
        assert_eq!(x.len(), self.n, "transform length mismatch");
        let n = self.n;
        let x_ts = TsComplexVector::from_complex_slice(x);

        // x' = x ⊙ ω
        let mut xp_re = Vec::with_capacity(n);
        let mut xp_im = Vec::with_capacity(n);
        for j in 0..n {
            let (re, im) = ts_complex_mul(
                x_ts.re[j],
                x_ts.im[j],
                self.chirp_ts.re[j],
                self.chirp_ts.im[j],
            );
            xp_re.push(re);
            xp_im.push(im);
        }

        // y' = x' ⊛ ω* with exact split-component convolutions
        let xp_re_split = split_ts_and_ntt(&xp_re, &self.plan0, &self.plan1, &self.cfg);
        let xp_im_split = split_ts_and_ntt(&xp_im, &self.plan0, &self.plan1, &self.cfg);
        let stats = FftStats {
            kx_re: xp_re_split.k(),
            kx_im: xp_im_split.k(),
        };
        let ctx = ConvContext::new(&self.plan0, &self.plan1, &self.pair, &self.cfg);
        let (yp_re, yp_im) = ts_complex_conv(
            &xp_re_split,
            &xp_im_split,
            &self.chirp_conj_re_split,
            &self.chirp_conj_im_split,
            &ctx,
            ConvRoute::Accumulated,
        );

        // y = y' ⊙ ω, rounded back to double
        let mut y = Vec::with_capacity(n);
        for j in 0..n {
            let (re, im) =
                ts_complex_mul(yp_re[j], yp_im[j], self.chirp_ts.re[j], self.chirp_ts.im[j]);
            y.push(Complex::new(re.to_f64(), im.to_f64()));
        }
        (y, stats)
    }

    /// `DFT^{-1}` by conjugation: `conj(fft(conj(y))) / n`.
    pub fn ifft(&self, y: &[Complex]) -> Vec<Complex> {
        assert_eq!(y.len(), self.n, "transform length mismatch");
        let conj: Vec<Complex> = y.iter().map(|c| c.conj()).collect();
        let scale = 1.0 / self.n as f64; // exact: n is a power of two
        self.fft(&conj)
            .into_iter()
            .map(|c| c.conj().scale(scale))
            .collect()
    }
}
