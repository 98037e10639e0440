//! Comparison methods: Stockham complex FFT in double and TS arithmetic,
//! and Bluestein FFT in double and TS arithmetic with floating-point
//! convolution (no split-component path).

use crate::bluestein::chirp_table;
use crate::complex::Complex;
use crate::oracle::sincospi_frac_f64;
use crate::ts::{ts_add, ts_complex_mul, ts_sub, TsComplexVector, TsScalar};

/// The four baseline kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaselineKind {
    F64Stockham,
    F64Bluestein,
    TsStockham,
    TsBluestein,
}

/// `y ≈ DFT(x)` by the selected baseline. TS kinds convert the input to TS
/// precision, compute with TS arithmetic throughout, and round back.
pub fn fft_baseline(kind: BaselineKind, x: &[Complex]) -> Vec<Complex> {
    assert!(
        x.len().is_power_of_two(),
        "baseline length must be a power of two"
    );
    match kind {
        BaselineKind::F64Stockham => stockham_f64(x, false),
        BaselineKind::F64Bluestein => bluestein_f64(x),
        BaselineKind::TsStockham => {
            let v = TsComplexVector::from_complex_slice(x);
            let (re, im) = stockham_ts(&v.re, &v.im, false);
            TsComplexVector { re, im }.to_complex_vec()
        }
        BaselineKind::TsBluestein => bluestein_ts(x),
    }
}

/// Twiddle table `w[j] = exp(-2πi j/n)` for `j < n/2`, correctly rounded
/// from pair precision; shared by the double and TS Stockham variants.
fn twiddles(n: usize) -> Vec<Complex> {
    (0..n / 2)
        .map(|j| {
            let (c, s) = sincospi_frac_f64(2 * j as u64, n as u64);
            Complex::new(c, -s)
        })
        .collect()
}

/// Stockham autosort radix-2 FFT in double precision.
pub fn stockham_f64(x: &[Complex], inverse: bool) -> Vec<Complex> {
    let n = x.len();
    let mut a = x.to_vec();
    if n == 1 {
        return a;
    }
    let tw = twiddles(n);
    let pick = |w: Complex| if inverse { w.conj() } else { w };
    let mut b = vec![Complex::ZERO; n];
    let mut l = n / 2;
    let mut m = 1;
    while m < n {
        for j in 0..l {
            let w = pick(tw[j * m]);
            let base = j * m;
            for k in 0..m {
                let c0 = a[base + k];
                let c1 = a[base + k + l * m];
                b[2 * base + k] = c0 + c1;
                b[2 * base + k + m] = w * (c0 - c1);
            }
        }
        std::mem::swap(&mut a, &mut b);
        l /= 2;
        m *= 2;
    }
    if inverse {
        let scale = 1.0 / n as f64;
        for v in &mut a {
            *v = v.scale(scale);
        }
    }
    a
}

/// Stockham autosort radix-2 FFT in TS arithmetic; twiddles are the double
/// tables converted exactly to TS.
fn stockham_ts(re: &[TsScalar], im: &[TsScalar], inverse: bool) -> (Vec<TsScalar>, Vec<TsScalar>) {
    let n = re.len();
    assert_eq!(im.len(), n);
    let mut a_re = re.to_vec();
    let mut a_im = im.to_vec();
    if n == 1 {
        return (a_re, a_im);
    }
    let tw: Vec<(TsScalar, TsScalar)> = twiddles(n)
        .iter()
        .map(|w| {
            (
                TsScalar::from_f64(w.re),
                TsScalar::from_f64(if inverse { -w.im } else { w.im }),
            )
        })
        .collect();
    let mut b_re = vec![TsScalar::ZERO; n];
    let mut b_im = vec![TsScalar::ZERO; n];
    let mut l = n / 2;
    let mut m = 1;
    while m < n {
        for j in 0..l {
            let (w_re, w_im) = tw[j * m];
            let base = j * m;
            for k in 0..m {
                let (c0_re, c0_im) = (a_re[base + k], a_im[base + k]);
                let (c1_re, c1_im) = (a_re[base + k + l * m], a_im[base + k + l * m]);
                b_re[2 * base + k] = ts_add(c0_re, c1_re);
                b_im[2 * base + k] = ts_add(c0_im, c1_im);
                let (d_re, d_im) = (ts_sub(c0_re, c1_re), ts_sub(c0_im, c1_im));
                let (o_re, o_im) = ts_complex_mul(d_re, d_im, w_re, w_im);
                b_re[2 * base + k + m] = o_re;
                b_im[2 * base + k + m] = o_im;
            }
        }
        std::mem::swap(&mut a_re, &mut b_re);
        std::mem::swap(&mut a_im, &mut b_im);
        l /= 2;
        m *= 2;
    }
    if inverse {
        // exact power-of-two scaling
        let e = -(n.trailing_zeros() as i32);
        for v in a_re.iter_mut().chain(a_im.iter_mut()) {
            *v = v.scale_pow2(e);
        }
    }
    (a_re, a_im)
}

/// Bluestein FFT in double precision, cyclic case: the convolution runs
/// through the double Stockham FFT.
fn bluestein_f64(x: &[Complex]) -> Vec<Complex> {
    let n = x.len();
    let chirp = chirp_table(n);
    let xp: Vec<Complex> = x.iter().zip(&chirp).map(|(&xi, &w)| xi * w).collect();
    let conj: Vec<Complex> = chirp.iter().map(|w| w.conj()).collect();
    let fx = stockham_f64(&xp, false);
    let fw = stockham_f64(&conj, false);
    let prod: Vec<Complex> = fx.iter().zip(&fw).map(|(&a, &b)| a * b).collect();
    let yp = stockham_f64(&prod, true);
    yp.iter().zip(&chirp).map(|(&yi, &w)| yi * w).collect()
}

/// Bluestein FFT in TS arithmetic: elementwise products and the FFT-based
/// cyclic convolution all run in TS precision.
fn bluestein_ts(x: &[Complex]) -> Vec<Complex> {
    let n = x.len();
    let chirp = chirp_table(n);
    let chirp_ts = TsComplexVector::from_complex_slice(&chirp);
    let x_ts = TsComplexVector::from_complex_slice(x);

    let mut xp_re = Vec::with_capacity(n);
    let mut xp_im = Vec::with_capacity(n);
    for j in 0..n {
        let (re, im) = ts_complex_mul(x_ts.re[j], x_ts.im[j], chirp_ts.re[j], chirp_ts.im[j]);
        xp_re.push(re);
        xp_im.push(im);
    }
    let conj_re: Vec<TsScalar> = chirp_ts.re.clone();
    let conj_im: Vec<TsScalar> = chirp_ts.im.iter().map(|t| t.neg()).collect();

    let (fx_re, fx_im) = stockham_ts(&xp_re, &xp_im, false);
    let (fw_re, fw_im) = stockham_ts(&conj_re, &conj_im, false);
    let mut prod_re = Vec::with_capacity(n);
    let mut prod_im = Vec::with_capacity(n);
    for j in 0..n {
        let (re, im) = ts_complex_mul(fx_re[j], fx_im[j], fw_re[j], fw_im[j]);
        prod_re.push(re);
        prod_im.push(im);
    }
    let (yp_re, yp_im) = stockham_ts(&prod_re, &prod_im, true);

    let mut y = Vec::with_capacity(n);
    for j in 0..n {
        let (re, im) = ts_complex_mul(yp_re[j], yp_im[j], chirp_ts.re[j], chirp_ts.im[j]);
        y.push(Complex::new(re.to_f64(), im.to_f64()));
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{error_metrics, reference_dft};
    use crate::rng::Xoshiro256;

    const ALL_KINDS: [BaselineKind; 4] = [
        BaselineKind::F64Stockham,
        BaselineKind::F64Bluestein,
        BaselineKind::TsStockham,
        BaselineKind::TsBluestein,
    ];

    fn random_input(n: usize, seed: u64) -> Vec<Complex> {
        let mut rng = Xoshiro256::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex::new(rng.next_f64_open01() - 0.5, rng.next_f64_open01() - 0.5))
            .collect()
    }

    fn naive_dft_f64(x: &[Complex]) -> Vec<Complex> {
        let n = x.len();
        (0..n)
            .map(|k| {
                let mut acc = Complex::ZERO;
                for (j, &xj) in x.iter().enumerate() {
                    let theta = -2.0 * std::f64::consts::PI * (j * k % n) as f64 / n as f64;
                    acc = acc + xj * Complex::new(theta.cos(), theta.sin());
                }
                acc
            })
            .collect()
    }

    #[test]
    fn impulse_for_every_kind() {
        let n = 32;
        let mut impulse = vec![Complex::ZERO; n];
        impulse[0] = Complex::ONE;
        for kind in ALL_KINDS {
            let y = fft_baseline(kind, &impulse);
            for v in &y {
                assert!(
                    (v.re - 1.0).abs() <= 1e-13 && v.im.abs() <= 1e-13,
                    "{kind:?}: {v:?}"
                );
            }
        }
    }

    #[test]
    fn constant_for_every_kind() {
        let n = 64;
        let c = Complex::new(-0.125, 0.5);
        for kind in ALL_KINDS {
            let y = fft_baseline(kind, &vec![c; n]);
            assert!((y[0].re - n as f64 * c.re).abs() <= 1e-12);
            assert!((y[0].im - n as f64 * c.im).abs() <= 1e-12);
            for v in &y[1..] {
                assert!(v.norm_sqr().sqrt() <= 1e-12, "{kind:?}");
            }
        }
    }

    #[test]
    fn stockham_matches_naive_dft() {
        let n = 64;
        let x = random_input(n, 7);
        let naive = naive_dft_f64(&x);
        let y = fft_baseline(BaselineKind::F64Stockham, &x);
        let mut diff = 0.0;
        let mut norm = 0.0;
        for (a, b) in y.iter().zip(&naive) {
            diff += (*a - *b).norm_sqr();
            norm += b.norm_sqr();
        }
        assert!((diff / norm).sqrt() <= 1e-13);
    }

    #[test]
    fn stockham_f64_round_trip() {
        let n = 1 << 10;
        let x = random_input(n, 8);
        let back = stockham_f64(&stockham_f64(&x, false), true);
        let mut diff = 0.0;
        let mut norm = 0.0;
        for (a, b) in back.iter().zip(&x) {
            diff += (*a - *b).norm_sqr();
            norm += b.norm_sqr();
        }
        assert!((diff / norm).sqrt() <= 1e-14);
    }

    #[test]
    fn parseval_per_kind() {
        // method-appropriate tolerances: 1e-13 for the double kinds,
        // 1e-15 for the TS kinds; energies in compensated arithmetic so the
        // measurement does not mask the transform
        for n in [1usize << 10, 1 << 14] {
            let x = random_input(n, 9);
            let energy_in = crate::oracle::energy(&x);
            for kind in ALL_KINDS {
                let tol = match kind {
                    BaselineKind::F64Stockham | BaselineKind::F64Bluestein => 1e-13,
                    _ => 1e-15,
                };
                let y = fft_baseline(kind, &x);
                let ratio = crate::oracle::energy(&y) / (n as f64 * energy_in);
                assert!((ratio - 1.0).abs() <= tol, "{kind:?} at n = {n}: {ratio}");
            }
        }
    }

    #[test]
    fn ts_variants_beat_their_double_counterparts() {
        let n = 1 << 10;
        let x = random_input(n, 10);
        let y_ref = reference_dft(&x).unwrap();
        let err = |kind| error_metrics(&fft_baseline(kind, &x), &y_ref).rel_l2;
        assert!(err(BaselineKind::TsStockham) < err(BaselineKind::F64Stockham));
        assert!(err(BaselineKind::TsBluestein) < err(BaselineKind::F64Bluestein));
    }
}
