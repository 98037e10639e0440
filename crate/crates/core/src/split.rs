//! Ozaki-scheme splitting: split-width selection (all four variants), the
//! split-count bound, and the splitter that turns a TS vector into NTT
//! images of bounded integer components under both moduli.

use crate::crt::CrtPair;
use crate::fp_mod::Modulus;
use crate::ntt::NttPlan;
use crate::ts::{fast_two_sum, pow2_f32, pow2_f64, TsScalar};
use crate::Error;

/// Split width for the dual-modulus NTT route:
/// `floor((log2(p0*p1/2) - log2(L*n)) / 2)`, evaluated exactly over the
/// integers (largest `a` with `2*L*n*4^a <= p0*p1`) so the result is never
/// overestimated.
pub fn compute_alpha(pair: &CrtPair, n: usize, l_bound: u32) -> i32 {
    assert!(n.is_power_of_two() && l_bound >= 1);
    max_alpha_for(pair.product() as u128, 2 * l_bound as u128 * n as u128)
}

/// Split width for a single-modulus NTT: `floor((log2(p/2) - log2(n)) / 2)`.
pub fn compute_alpha_single(modulus: &Modulus, n: usize) -> i32 {
    assert!(n.is_power_of_two());
    max_alpha_for(modulus.p() as u128, 2 * n as u128)
}

/// Largest `a` (possibly negative) with `denom * 4^a <= numer`.
fn max_alpha_for(numer: u128, denom: u128) -> i32 {
    let mut a = -64i32;
    while a < 64 {
        let next = a + 1;
        let fits = if next >= 0 {
            denom
                .checked_shl(2 * next as u32)
                .is_some_and(|v| v <= numer)
        } else {
            numer
                .checked_shl(2 * (-next) as u32)
                .is_some_and(|v| denom <= v)
        };
        if fits {
            a = next;
        } else {
            break;
        }
    }
    a
}

/// The four split-width variants compared by the alpha table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaVariants {
    /// Original scheme: `floor((log2(1/u) - log2 n) / 2)`.
    pub original: i32,
    /// Floating-point FFT convolution with the Percival error bound; may be
    /// negative.
    pub fft: i32,
    /// Single-modulus NTT.
    pub ntt_single: i32,
    /// Dual-modulus NTT + CRT.
    pub ntt_crt: i32,
}

/// Evaluates all four variants for unit roundoff `u` (2^-24 or 2^-53).
pub fn alpha_variants(n: usize, u: f64, modulus: &Modulus, pair: &CrtPair) -> AlphaVariants {
    assert!(n.is_power_of_two());
    let u_bits = -u.log2();
    assert!(
        u_bits.fract() == 0.0 && u_bits > 0.0,
        "unit roundoff must be a power of two"
    );
    let log2_n = n.trailing_zeros() as i32;
    let original = (u_bits as i32 - log2_n).div_euclid(2);

    // product in the Percival bound: (1+u)^(3n) (1+u*sqrt5)^(3n+1) (1+u/sqrt2)^(3n)
    // evaluated in log space; the -1 goes through expm1 so small sums never
    // collapse to zero
    let n_f = n as f64;
    let s_ln = 3.0 * n_f * u.ln_1p()
        + (3.0 * n_f + 1.0) * (u * 5f64.sqrt()).ln_1p()
        + 3.0 * n_f * (u / 2f64.sqrt()).ln_1p();
    let log2_term = s_ln.exp_m1().ln() / std::f64::consts::LN_2;
    let fft = (-0.5 * (1.0 + log2_n as f64 + log2_term)).floor() as i32;

    AlphaVariants {
        original,
        fft,
        ntt_single: compute_alpha_single(modulus, n),
        ntt_crt: compute_alpha(pair, n, 1),
    }
}

/// Upper bound on the number of splits:
/// `ceil((log2 max - log2 min + log2(1/u) - 1) / (alpha - 1))`.
///
/// `u` is the unit roundoff of the data being split (2^-24 for plain f32
/// vectors, 2^-53 for values converted from double, 2^-72 for full-width TS
/// products).
pub fn split_count_bound(max_abs: f64, min_abs: f64, u: f64, alpha: u32) -> u32 {
    assert!(max_abs >= min_abs && min_abs > 0.0);
    assert!(alpha >= 2);
    let numer = max_abs.log2() - min_abs.log2() - u.log2() - 1.0;
    (numer / (alpha - 1) as f64).ceil().max(0.0) as u32
}

/// Split configuration: the budget width `alpha` from the three-way
/// `(pair, n, L)` relation, the extraction width actually used by the
/// splitter, the split cap `K`, and the accumulation bound `L`.
#[derive(Clone, Debug)]
pub struct SplitConfig {
    alpha: u32,
    split_alpha: u32,
    k_cap: Option<u32>,
    l_bound: u32,
}

impl SplitConfig {
    pub fn new(
        pair: &CrtPair,
        n: usize,
        k_cap: Option<u32>,
        l_bound: u32,
    ) -> Result<SplitConfig, Error> {
        if l_bound < 1 {
            return Err(Error::InvalidArgument("L must be >= 1".into()));
        }
        if let Some(k) = k_cap {
            if k < 1 {
                return Err(Error::InvalidArgument("K must be >= 1".into()));
            }
        }
        let alpha = compute_alpha(pair, n, l_bound);
        if alpha <= 0 {
            return Err(Error::AlphaUnusable { alpha, n, l_bound });
        }
        Ok(SplitConfig {
            alpha: alpha as u32,
            // one f32 extraction carries at most 24 significant bits, and
            // rho = 24 - width must stay >= 0 for the add-subtract trick;
            // a formula width beyond 24 only loosens the overflow budget
            split_alpha: (alpha as u32).min(24),
            k_cap,
            l_bound,
        })
    }

    /// Budget width from the alpha formula (bounds `n * 2^(2a) * L < p0p1/2`).
    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// Extraction width used by the splitter (`min(alpha, 24)`).
    pub fn split_alpha(&self) -> u32 {
        self.split_alpha
    }

    /// `rho = log2(1/u32) - split_alpha`.
    pub fn rho(&self) -> i32 {
        24 - self.split_alpha as i32
    }

    pub fn k_cap(&self) -> Option<u32> {
        self.k_cap
    }

    pub fn l_bound(&self) -> u32 {
        self.l_bound
    }
}

/// NTT-domain images (both moduli) of the integer split components of a TS
/// vector, with their power-of-two scale exponents.
#[derive(Clone, Debug)]
pub struct SplitSet {
    n: usize,
    ntt0: Vec<Vec<u32>>,
    ntt1: Vec<Vec<u32>>,
    /// `c[j] = 2^{c_exp[j]}`; the pre-NTT integer component is
    /// `c[j] * x^{(j)}`.
    c_exp: Vec<i32>,
    exhausted: bool,
    /// Residual infinity norm discarded when the K cap stopped the split.
    discarded_mu: f32,
}

impl SplitSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.c_exp.len()
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn discarded_mu(&self) -> f32 {
        self.discarded_mu
    }

    pub fn c_exp(&self, j: usize) -> i32 {
        self.c_exp[j]
    }

    pub fn ntt0(&self, j: usize) -> &[u32] {
        &self.ntt0[j]
    }

    pub fn ntt1(&self, j: usize) -> &[u32] {
        &self.ntt1[j]
    }

    /// Test support: NTT images of raw integer component vectors with given
    /// scale exponents.
    #[cfg(test)]
    pub(crate) fn from_integer_components(
        components: &[Vec<i64>],
        c_exps: &[i32],
        plan0: &NttPlan,
        plan1: &NttPlan,
    ) -> SplitSet {
        assert_eq!(components.len(), c_exps.len());
        let n = plan0.n();
        let mut set = SplitSet {
            n,
            ntt0: Vec::new(),
            ntt1: Vec::new(),
            c_exp: c_exps.to_vec(),
            exhausted: true,
            discarded_mu: 0.0,
        };
        for c in components {
            assert_eq!(c.len(), n);
            let r0: Vec<u32> = c.iter().map(|&v| plan0.modulus().reduce_i64(v)).collect();
            let r1: Vec<u32> = c.iter().map(|&v| plan1.modulus().reduce_i64(v)).collect();
            set.ntt0.push(plan0.forward(&r0));
            set.ntt1.push(plan1.forward(&r1));
        }
        set
    }
}

/// Exact ceil(log2 |x|) of a positive finite f32, by exponent extraction.
fn ceil_log2_f32(x: f32) -> i32 {
    debug_assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let exp_field = (bits >> 23) & 0xff;
    let mantissa = bits & 0x007f_ffff;
    if exp_field == 0 {
        // subnormal: value = mantissa * 2^-149
        let top = 31 - mantissa.leading_zeros() as i32;
        if mantissa == 1 << top {
            top - 149
        } else {
            top - 148
        }
    } else {
        let e = exp_field as i32 - 127;
        if mantissa == 0 {
            e
        } else {
            e + 1
        }
    }
}

/// Splits a TS real vector into integer components and takes their NTTs
/// under both moduli (2k forward transforms for k components).
///
/// Per iteration: `mu = ||r_0||_inf`, `sigma = 2^(ceil(log2 mu) + rho)`,
/// component extraction by the add-subtract trick in f32, residual update
/// through FastTwoSum chains (all error-free), scale `c = 1/(u32 sigma)`.
/// Stops when the residual is exactly zero (`exhausted`) or at the K cap.
pub fn split_ts_and_ntt(
    x: &[TsScalar],
    plan0: &NttPlan,
    plan1: &NttPlan,
    cfg: &SplitConfig,
) -> SplitSet {
    let n = plan0.n();
    assert_eq!(plan1.n(), n, "NTT plans disagree on length");
    assert_eq!(x.len(), n, "split input length mismatch");

    let rho = cfg.rho();
    let alpha = cfg.split_alpha();
    let mut r0: Vec<f32> = x.iter().map(|t| t.t0).collect();
    let mut r1: Vec<f32> = x.iter().map(|t| t.t1).collect();
    let mut r2: Vec<f32> = x.iter().map(|t| t.t2).collect();

    let mut set = SplitSet {
        n,
        ntt0: Vec::new(),
        ntt1: Vec::new(),
        c_exp: Vec::new(),
        exhausted: false,
        discarded_mu: 0.0,
    };

    let mut mu = infinity_norm(&r0);
    let mut scaled = vec![0i64; n];
    while mu > 0.0 {
        if set.k() as u32 >= cfg.k_cap().unwrap_or(u32::MAX) {
            set.discarded_mu = mu;
            return set;
        }
        let sigma_exp = ceil_log2_f32(mu) + rho;
        assert!(
            sigma_exp <= 127,
            "split input magnitude {mu:e} out of range"
        );
        let sigma = pow2_f32(sigma_exp);
        let c_exp = 24 - sigma_exp;
        let c_f64 = pow2_f64(c_exp);
        for i in 0..n {
            let xk = (r0[i] + sigma) - sigma;
            let d = r0[i] - xk; // exact: xk carries the top bits of r0
            let (nr0, t) = fast_two_sum(d, r1[i]);
            let (nr1, nr2) = fast_two_sum(t, r2[i]);
            r0[i] = nr0;
            r1[i] = nr1;
            r2[i] = nr2;
            let v = xk as f64 * c_f64;
            debug_assert_eq!(v.fract(), 0.0, "scaled component must be integral");
            scaled[i] = v as i64;
        }
        assert!(
            scaled.iter().all(|&v| v.unsigned_abs() <= 1 << alpha),
            "component exceeds 2^alpha"
        );
        let res0: Vec<u32> = scaled
            .iter()
            .map(|&v| plan0.modulus().reduce_i64(v))
            .collect();
        let res1: Vec<u32> = scaled
            .iter()
            .map(|&v| plan1.modulus().reduce_i64(v))
            .collect();
        set.ntt0.push(plan0.forward(&res0));
        set.ntt1.push(plan1.forward(&res1));
        set.c_exp.push(c_exp);
        mu = infinity_norm(&r0);
    }
    set.exhausted = true;
    set
}

fn infinity_norm(v: &[f32]) -> f32 {
    v.iter().fold(0.0f32, |m, &x| m.max(x.abs()))
}
