//! Extended-precision reference DFT and the two error metrics.
//!
//! The reference arithmetic is an unevaluated pair of doubles (Dekker/Knuth
//! error-free transformations with FMA), giving a ~106-bit effective
//! significand. The reference DFT is the direct O(n^2) sum, guarded to desk
//! scale, with twiddles evaluated to pair precision from exactly reduced
//! integer arguments.

use crate::complex::Complex;
use crate::Error;

/// Desk-scale cap for the O(n^2) reference DFT.
pub const REFERENCE_DFT_MAX_N: usize = 1 << 16;

/// An unevaluated pair `hi + lo` with `|lo| <= 1/2 ulp(hi)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[allow(clippy::should_implement_trait)]
impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// π to ~106 bits.
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles as a pair.
    #[inline]
    pub fn from_exact_sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let (s0, e1) = two_sum(self.hi, rhs.hi);
        let (s1, e2) = two_sum(self.lo, rhs.lo);
        let (s0, e1) = quick_two_sum(s0, e1 + s1);
        let (hi, lo) = quick_two_sum(s0, e1 + e2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = self.hi.mul_add(rhs.lo, e);
        let e = self.lo.mul_add(rhs.hi, e);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p, e) = two_prod(self.hi, rhs);
        let e = self.lo.mul_add(rhs, e);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, rhs: Dd) -> Dd {
        let q0 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q0));
        let q1 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul_f64(q1));
        let q2 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q0, q1);
        Dd { hi, lo }.add(Dd::from_f64(q2))
    }

    pub fn div_f64(self, rhs: f64) -> Dd {
        self.div(Dd::from_f64(rhs))
    }
}

/// Complex value in pair precision.
#[derive(Clone, Copy, Debug, Default)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

#[allow(clippy::should_implement_trait)]
impl DdComplex {
    pub fn from_complex(c: Complex) -> DdComplex {
        DdComplex {
            re: Dd::from_f64(c.re),
            im: Dd::from_f64(c.im),
        }
    }

    pub fn to_complex(self) -> Complex {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, rhs: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.add(rhs.re),
            im: self.im.add(rhs.im),
        }
    }

    pub fn mul(self, rhs: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            im: self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        }
    }

    /// `self + w * (xr + i xi)` with `xr`, `xi` plain doubles.
    fn accumulate_scaled(self, w: DdComplex, xr: f64, xi: f64) -> DdComplex {
        let re = w.re.mul_f64(xr).sub(w.im.mul_f64(xi));
        let im = w.re.mul_f64(xi).add(w.im.mul_f64(xr));
        DdComplex {
            re: self.re.add(re),
            im: self.im.add(im),
        }
    }
}

/// `(cos, sin)` of `π * num / den` in pair precision, `den` a power of two.
/// The argument is reduced as an exact integer before any rounding happens.
pub fn sincospi_frac(num: u64, den: u64) -> (Dd, Dd) {
    assert!(den >= 1 && den.is_power_of_two());
    let m = num % (2 * den);
    // quarter turns: t = m/den = q/2 + s with s in [0, 1/2)
    let q = (2 * m) / den; // in [0, 4)
    let rm = (2 * m) % den;
    // fold s into [0, 1/4]: s > 1/4 <=> 2 rm > den
    let (rm, swapped) = if 2 * rm > den {
        (den - rm, true)
    } else {
        (rm, false)
    };
    // x = rm / (2 den) in [0, 1/4]; exact because den is a power of two
    let x = rm as f64 / (2 * den) as f64;
    let (c, s) = sincospi_taylor(x);
    let (c, s) = if swapped { (s, c) } else { (c, s) };
    match q {
        0 => (c, s),
        1 => (s.neg(), c),
        2 => (c.neg(), s.neg()),
        _ => (s, c.neg()),
    }
}

/// Same, rounded to double; used for production twiddle/chirp tables so the
/// tables are correctly rounded rather than carrying libm argument error.
pub fn sincospi_frac_f64(num: u64, den: u64) -> (f64, f64) {
    let (c, s) = sincospi_frac(num, den);
    (c.to_f64(), s.to_f64())
}

/// Taylor evaluation of `(cos(πx), sin(πx))` for `x in [0, 1/4]`.
fn sincospi_taylor(x: f64) -> (Dd, Dd) {
    debug_assert!((0.0..=0.25).contains(&x));
    if x == 0.0 {
        return (Dd::ONE, Dd::ZERO);
    }
    let theta = Dd::PI.mul_f64(x);
    let theta_sq = theta.mul(theta);

    let mut sin = theta;
    let mut term = theta;
    let mut k = 1.0f64;
    loop {
        term = term.mul(theta_sq).div_f64(2.0 * k * (2.0 * k + 1.0)).neg();
        sin = sin.add(term);
        k += 1.0;
        if term.hi.abs() < sin.hi.abs() * 1e-35 {
            break;
        }
    }

    let mut cos = Dd::ONE;
    let mut term = Dd::ONE;
    let mut k = 1.0f64;
    loop {
        term = term.mul(theta_sq).div_f64((2.0 * k - 1.0) * 2.0 * k).neg();
        cos = cos.add(term);
        k += 1.0;
        if term.hi.abs() < 1e-35 {
            break;
        }
    }
    (cos, sin)
}

/// Pair-precision twiddle table `w[m] = exp(-2πi m / n)`.
pub fn dd_twiddle_table(n: usize) -> Vec<DdComplex> {
    (0..n)
        .map(|m| {
            let (c, s) = sincospi_frac(2 * m as u64, n as u64);
            DdComplex { re: c, im: s.neg() }
        })
        .collect()
}

/// Direct O(n^2) DFT in pair precision. Rows are independent and evaluated
/// in parallel; per-row sums are sequential, so results do not depend on the
/// thread count.
pub fn reference_dft(x: &[Complex]) -> Result<Vec<DdComplex>, Error> {
    let n = x.len();
    if n > REFERENCE_DFT_MAX_N {
        return Err(Error::OracleGuard {
            n,
            max: REFERENCE_DFT_MAX_N,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let tw = dd_twiddle_table(n);
    let mut out = vec![DdComplex::default(); n];

    let row = |k: usize| -> DdComplex {
        let mut acc = DdComplex::default();
        let mut idx = 0usize;
        for xj in x {
            acc = acc.accumulate_scaled(tw[idx], xj.re, xj.im);
            idx += k;
            if idx >= n {
                idx -= n;
            }
        }
        acc
    };

    let workers = std::thread::available_parallelism()
        .map(|w| w.get())
        .unwrap_or(1);
    if workers <= 1 || n < 512 {
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = row(k);
        }
    } else {
        let chunk = n.div_ceil(workers);
        std::thread::scope(|scope| {
            for (c, slots) in out.chunks_mut(chunk).enumerate() {
                let row = &row;
                scope.spawn(move || {
                    for (i, slot) in slots.iter_mut().enumerate() {
                        *slot = row(c * chunk + i);
                    }
                });
            }
        });
    }
    Ok(out)
}

/// Squared l2 norm accumulated in pair precision (for Parseval-style
/// checks, where plain f64 summation noise would mask the quantity under
/// test).
pub fn energy(v: &[Complex]) -> f64 {
    let mut acc = Dd::ZERO;
    for c in v {
        let (p, e) = two_prod(c.re, c.re);
        acc = acc.add(Dd { hi: p, lo: e });
        let (p, e) = two_prod(c.im, c.im);
        acc = acc.add(Dd { hi: p, lo: e });
    }
    acc.to_f64()
}

/// The two error measures: max over per-part relative errors, and the
/// relative l2 norm of the difference.
#[derive(Clone, Copy, Debug, Default)]
pub struct ErrorReport {
    pub max_rel: f64,
    pub rel_l2: f64,
    /// Real/imaginary parts whose reference value is exactly zero; these are
    /// excluded from `max_rel`.
    pub excluded_parts: usize,
}

pub fn error_metrics(y_test: &[Complex], y_ref: &[DdComplex]) -> ErrorReport {
    assert_eq!(y_test.len(), y_ref.len(), "error metric length mismatch");
    let mut max_rel = 0.0f64;
    let mut excluded = 0usize;
    let mut diff_sq = 0.0f64;
    let mut ref_sq = 0.0f64;
    for (t, r) in y_test.iter().zip(y_ref) {
        for (tp, rp) in [(t.re, r.re), (t.im, r.im)] {
            let diff = Dd::from_f64(tp).sub(rp);
            if rp.is_zero() {
                excluded += 1;
            } else {
                max_rel = max_rel.max(diff.div(rp).abs().to_f64());
            }
            let d = diff.to_f64();
            diff_sq += d * d;
            let rv = rp.to_f64();
            ref_sq += rv * rv;
        }
    }
    ErrorReport {
        max_rel,
        rel_l2: if ref_sq == 0.0 {
            0.0
        } else {
            (diff_sq / ref_sq).sqrt()
        },
        excluded_parts: excluded,
    }
}
