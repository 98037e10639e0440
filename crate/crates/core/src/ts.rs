//! Triple-single arithmetic: three non-overlapping binary32 components per
//! value (~72-bit significand, single-precision exponent range).
//!
//! Add/sub merge componentwise with error-free transformations and
//! renormalize; multiply uses FMA two-products of the leading components
//! plus cross terms. The accuracy contract (relative error <= 2^-63 against
//! the extended-precision oracle, absent exponent underflow) is validated by
//! the test suite.

use crate::complex::Complex;
use crate::oracle::Dd;
use crate::Error;

/// FastTwoSum: `a = fl(x + y)` and `a + b = x + y` exactly, requiring
/// `|x| >= |y|`.
#[inline]
pub fn fast_two_sum(x: f32, y: f32) -> (f32, f32) {
    let a = x + y;
    let b = y - (a - x);
    (a, b)
}

/// Branch-swapped FastTwoSum wrapper; error-free for any operand order.
#[inline]
pub fn two_sum(x: f32, y: f32) -> (f32, f32) {
    if x.abs() >= y.abs() {
        fast_two_sum(x, y)
    } else {
        fast_two_sum(y, x)
    }
}

/// `p = fl(x * y)` and `p + e = x * y` exactly (FMA-based, exact unless the
/// product underflows).
#[inline]
pub fn two_prod(x: f32, y: f32) -> (f32, f32) {
    let p = x * y;
    (p, x.mul_add(y, -p))
}

/// Exact power of two as f64 (`0` below the subnormal range, `inf` above).
#[inline]
pub(crate) fn pow2_f64(e: i32) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e >= -1074 {
        f64::from_bits(1u64 << (e + 1074))
    } else {
        0.0
    }
}

/// Exact power of two as f32.
#[inline]
pub(crate) fn pow2_f32(e: i32) -> f32 {
    if e > 127 {
        f32::INFINITY
    } else if e >= -126 {
        f32::from_bits(((e + 127) as u32) << 23)
    } else if e >= -149 {
        f32::from_bits(1u32 << (e + 149))
    } else {
        0.0
    }
}

/// Spacing between `|x|` and the next representable value.
#[inline]
fn ulp_f32(x: f32) -> f32 {
    let a = x.abs();
    a.next_up() - a
}

/// A triple-single value `t0 + t1 + t2` with
/// `t_{s-1} != 0  =>  |t_s| <= 1/2 ulp(t_{s-1})`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TsScalar {
    pub t0: f32,
    pub t1: f32,
    pub t2: f32,
}

#[allow(clippy::should_implement_trait)]
impl TsScalar {
    pub const ZERO: TsScalar = TsScalar {
        t0: 0.0,
        t1: 0.0,
        t2: 0.0,
    };
    pub const ONE: TsScalar = TsScalar {
        t0: 1.0,
        t1: 0.0,
        t2: 0.0,
    };

    /// Exact conversion from double; a 53-bit significand always fits in
    /// three 24-bit components. Overflow of the single-precision exponent
    /// range is a caller error (see [`TsScalar::try_from_f64`]).
    pub fn from_f64(d: f64) -> TsScalar {
        let t0 = d as f32;
        let r1 = d - t0 as f64;
        let t1 = r1 as f32;
        let r2 = r1 - t1 as f64;
        let t2 = r2 as f32;
        TsScalar { t0, t1, t2 }
    }

    pub fn try_from_f64(d: f64) -> Result<TsScalar, Error> {
        if !d.is_finite() || !(d as f32).is_finite() {
            return Err(Error::TsOverflow { value: d });
        }
        Ok(TsScalar::from_f64(d))
    }

    /// Conversion plus an exactness flag (false when `d` lost bits to the
    /// single-precision subnormal range).
    pub fn from_f64_checked(d: f64) -> (TsScalar, bool) {
        let t = TsScalar::from_f64(d);
        (t, t.to_f64() == d)
    }

    /// `fl64(t0 + t1 + t2)`; exact for values that round-tripped from f64.
    pub fn to_f64(self) -> f64 {
        (self.t0 as f64 + self.t1 as f64) + self.t2 as f64
    }

    /// The represented value in pair precision (exact for canonical
    /// triples, which carry at most ~72 significant bits).
    pub fn to_dd(self) -> Dd {
        Dd::from_exact_sum(self.t0 as f64, self.t1 as f64).add(Dd::from_f64(self.t2 as f64))
    }

    /// Exact conversion of a 64-bit integer (62 significant bits fit the
    /// 3 x 24 available).
    pub fn from_i64(v: i64) -> TsScalar {
        let t0 = v as f32;
        let r1 = v as i128 - t0 as i128;
        let t1 = r1 as f32;
        let r2 = r1 - t1 as i128;
        let t2 = r2 as f32;
        debug_assert_eq!(r2 - t2 as i128, 0);
        TsScalar { t0, t1, t2 }
    }

    /// Componentwise negation (exact).
    pub fn neg(self) -> TsScalar {
        TsScalar {
            t0: -self.t0,
            t1: -self.t1,
            t2: -self.t2,
        }
    }

    /// Multiplication by `2^e`: exact exponent adjustment (components that
    /// leave the binary32 range saturate per floating-point semantics).
    pub fn scale_pow2(self, e: i32) -> TsScalar {
        let s = pow2_f64(e);
        TsScalar {
            t0: (self.t0 as f64 * s) as f32,
            t1: (self.t1 as f64 * s) as f32,
            t2: (self.t2 as f64 * s) as f32,
        }
    }

    pub fn is_zero(self) -> bool {
        self.t0 == 0.0 && self.t1 == 0.0 && self.t2 == 0.0
    }

    /// Checks the non-overlap invariant by exponent inspection.
    pub fn is_non_overlapping(self) -> bool {
        let pair_ok = |hi: f32, lo: f32| hi == 0.0 || lo.abs() <= 0.5 * ulp_f32(hi);
        pair_ok(self.t0, self.t1) && pair_ok(self.t1, self.t2)
    }

    /// One value-preserving compaction sweep.
    fn compact(self) -> TsScalar {
        let (s1, s2) = two_sum(self.t1, self.t2);
        let (r0, t1) = two_sum(self.t0, s1);
        let (r1, r2) = two_sum(t1, s2);
        TsScalar {
            t0: r0,
            t1: r1,
            t2: r2,
        }
    }
}

/// Renormalizes a short expansion (roughly ordered by decreasing magnitude)
/// into a canonical triple. The first two passes are error-free; only mass
/// below the third component is subject to rounding.
fn renormalize(terms: &mut [f32]) -> TsScalar {
    // VecSum sweep: right-to-left error-free transformations
    for i in (0..terms.len() - 1).rev() {
        let (s, e) = two_sum(terms[i], terms[i + 1]);
        terms[i] = s;
        terms[i + 1] = e;
    }
    // branch extraction of up to three non-overlapping components
    let mut c = [0.0f32; 3];
    let mut filled = 0usize;
    let mut acc = terms[0];
    for &t in &terms[1..] {
        if filled == 2 {
            acc += t; // tail rounds into the last component
            continue;
        }
        let (s, e) = two_sum(acc, t);
        if e != 0.0 {
            c[filled] = s;
            filled += 1;
            acc = e;
        } else {
            acc = s;
        }
    }
    c[filled] = acc;
    let mut ts = TsScalar {
        t0: c[0],
        t1: c[1],
        t2: c[2],
    };
    // marginal carries can leave a component a hair above 1/2 ulp; compact
    // until the invariant holds (one pass suffices in practice)
    for _ in 0..3 {
        if ts.is_non_overlapping() {
            return ts;
        }
        ts = ts.compact();
    }
    debug_assert!(ts.is_non_overlapping(), "renormalization failed: {ts:?}");
    ts
}

pub fn ts_add(a: TsScalar, b: TsScalar) -> TsScalar {
    let (s0, e0) = two_sum(a.t0, b.t0);
    let (s1, e1) = two_sum(a.t1, b.t1);
    let (s2, e2) = two_sum(a.t2, b.t2);
    let mut terms = [s0, e0, s1, e1, s2, e2];
    renormalize(&mut terms)
}

pub fn ts_sub(a: TsScalar, b: TsScalar) -> TsScalar {
    ts_add(a, b.neg())
}

pub fn ts_mul(a: TsScalar, b: TsScalar) -> TsScalar {
    let (p0, q0) = two_prod(a.t0, b.t0);
    let (p1, q1) = two_prod(a.t0, b.t1);
    let (p2, q2) = two_prod(a.t1, b.t0);
    let p3 = a.t0 * b.t2;
    let p4 = a.t1 * b.t1;
    let p5 = a.t2 * b.t0;
    // order-4 cross terms sit near 2^-72 relative; their rounding is far
    // below the accuracy contract
    let p6 = a.t1 * b.t2 + a.t2 * b.t1;
    let mut terms = [p0, q0, p1, p2, q1, q2, p3, p4, p5, p6];
    renormalize(&mut terms)
}

/// Complex product over TS pairs: `(ar + i ai) * (br + i bi)`.
pub fn ts_complex_mul(
    ar: TsScalar,
    ai: TsScalar,
    br: TsScalar,
    bi: TsScalar,
) -> (TsScalar, TsScalar) {
    (
        ts_sub(ts_mul(ar, br), ts_mul(ai, bi)),
        ts_add(ts_mul(ar, bi), ts_mul(ai, br)),
    )
}

/// A complex vector in TS precision, stored as parallel real/imaginary
/// component vectors of equal length.
#[derive(Clone, Debug, Default)]
pub struct TsComplexVector {
    pub re: Vec<TsScalar>,
    pub im: Vec<TsScalar>,
}

impl TsComplexVector {
    pub fn from_complex_slice(x: &[Complex]) -> TsComplexVector {
        TsComplexVector {
            re: x.iter().map(|c| TsScalar::from_f64(c.re)).collect(),
            im: x.iter().map(|c| TsScalar::from_f64(c.im)).collect(),
        }
    }

    pub fn zeros(n: usize) -> TsComplexVector {
        TsComplexVector {
            re: vec![TsScalar::ZERO; n],
            im: vec![TsScalar::ZERO; n],
        }
    }

    pub fn len(&self) -> usize {
        debug_assert_eq!(self.re.len(), self.im.len());
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn to_complex_vec(&self) -> Vec<Complex> {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| Complex::new(r.to_f64(), i.to_f64()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Xoshiro256;
    use proptest::prelude::*;

    fn random_f64_with_exp(rng: &mut Xoshiro256, min_exp: i32, max_exp: i32) -> f64 {
        let mantissa = rng.next_f64_open01() + 1.0; // [1, 2)
        let span = (max_exp - min_exp + 1) as u64;
        let e = min_exp + (rng.next_u64() % span) as i32;
        let sign = if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
        sign * mantissa * pow2_f64(e)
    }

    #[test]
    fn fast_two_sum_examples() {
        assert_eq!(fast_two_sum(3.5, 0.0), (3.5, 0.0));
        let tiny = 2f32.powi(-30);
        assert_eq!(fast_two_sum(1.0, tiny), (1.0, tiny));
    }

    #[test]
    fn fast_two_sum_is_error_free() {
        let mut rng = Xoshiro256::seed_from_u64(4);
        for _ in 0..200_000 {
            let x = random_f64_with_exp(&mut rng, -40, 40) as f32;
            let y = random_f64_with_exp(&mut rng, -40, 40) as f32;
            let (a, b) = two_sum(x, y);
            // re-evaluated in the wider format, a + b reproduces x + y
            assert_eq!(a as f64 + b as f64, x as f64 + y as f64);
        }
    }

    #[test]
    fn from_f64_examples() {
        let t = TsScalar::from_f64(1.0 + 2f64.powi(-30));
        assert_eq!((t.t0, t.t1, t.t2), (1.0, 2f32.powi(-30), 0.0));
        assert_eq!(TsScalar::from_f64(0.0), TsScalar::ZERO);
        let pi = std::f64::consts::PI;
        let t = TsScalar::from_f64(pi);
        assert_eq!(t.to_f64(), pi);
        assert_eq!(t.to_dd().to_f64(), pi);
        assert!(t.is_non_overlapping());
    }

    #[test]
    fn f64_round_trip_over_wide_exponent_range() {
        // exactness holds while the lowest mantissa bit stays at or above
        // the binary32 subnormal floor: exponent - 52 >= -149
        let mut rng = Xoshiro256::seed_from_u64(8);
        for _ in 0..1_000_000 {
            let d = random_f64_with_exp(&mut rng, -97, 100);
            let t = TsScalar::from_f64(d);
            assert_eq!(t.to_f64(), d);
            assert!(t.is_non_overlapping(), "{d:e} -> {t:?}");
        }
        // below that floor a full-width mantissa cannot round trip, and
        // the checked conversion reports it
        let mut hit_inexact = false;
        for _ in 0..1000 {
            let d = random_f64_with_exp(&mut rng, -105, -101);
            let (t, exact) = TsScalar::from_f64_checked(d);
            assert_eq!(exact, t.to_f64() == d);
            hit_inexact |= !exact;
        }
        assert!(hit_inexact);
    }

    #[test]
    fn try_from_f64_overflow() {
        assert!(TsScalar::try_from_f64(1e300).is_err());
        assert!(TsScalar::try_from_f64(f64::NAN).is_err());
        assert!(TsScalar::try_from_f64(1e30).is_ok());
    }

    #[test]
    fn subnormal_conversion_is_flagged() {
        let (_, exact) = TsScalar::from_f64_checked(1.0);
        assert!(exact);
        // 53 significant bits at 2^-140 cannot fit subnormal singles
        let d = (1.0 + 2f64.powi(-50)) * 2f64.powi(-140);
        let (_, exact) = TsScalar::from_f64_checked(d);
        assert!(!exact);
    }

    #[test]
    fn from_i64_examples() {
        assert_eq!(TsScalar::from_i64(0), TsScalar::ZERO);
        let t = TsScalar::from_i64((1 << 40) + 1);
        assert_eq!((t.t0, t.t1, t.t2), (2f32.powi(40), 1.0, 0.0));
        let mut rng = Xoshiro256::seed_from_u64(15);
        for _ in 0..100_000 {
            let v = rng.next_i64_in(1 << 61);
            let t = TsScalar::from_i64(v);
            let back = t.t0 as i128 + t.t1 as i128 + t.t2 as i128;
            assert_eq!(back, v as i128);
            assert!(t.is_non_overlapping(), "{v} -> {t:?}");
        }
    }

    #[test]
    fn scale_pow2_is_exact() {
        let mut rng = Xoshiro256::seed_from_u64(21);
        for _ in 0..100_000 {
            let t = TsScalar::from_f64(random_f64_with_exp(&mut rng, -30, 30));
            let e = (rng.next_u64() % 81) as i32 - 40;
            let scaled = t.scale_pow2(e);
            assert_eq!(scaled.to_dd().to_f64(), t.to_dd().to_f64() * pow2_f64(e));
            assert!(scaled.is_non_overlapping());
        }
    }

    #[test]
    fn add_identities() {
        let mut rng = Xoshiro256::seed_from_u64(33);
        for _ in 0..10_000 {
            let t = TsScalar::from_f64(random_f64_with_exp(&mut rng, -60, 60));
            let same = ts_add(t, TsScalar::ZERO);
            assert!(same.to_dd().sub(t.to_dd()).is_zero());
            assert!(ts_add(t, t.neg()).is_zero());
            let one = ts_mul(t, TsScalar::ONE);
            assert!(one.to_dd().sub(t.to_dd()).is_zero());
        }
    }

    fn random_full_width_ts(rng: &mut Xoshiro256, min_exp: i32, max_exp: i32) -> TsScalar {
        // products of doubles carry ~72 significant bits into the triple
        let a = TsScalar::from_f64(random_f64_with_exp(rng, min_exp, max_exp));
        let b = TsScalar::from_f64(random_f64_with_exp(rng, 0, 0));
        ts_mul(a, b)
    }

    #[test]
    fn add_matches_extended_precision_oracle() {
        let mut rng = Xoshiro256::seed_from_u64(55);
        let tol = 2f64.powi(-63);
        for _ in 0..200_000 {
            let a = random_full_width_ts(&mut rng, -20, 20);
            let b = random_full_width_ts(&mut rng, -20, 20);
            let got = ts_add(a, b);
            assert!(got.is_non_overlapping(), "{a:?} + {b:?} -> {got:?}");
            let exact = a.to_dd().add(b.to_dd());
            if exact.is_zero() {
                assert!(got.is_zero());
            } else {
                let err = got.to_dd().sub(exact).abs().div(exact.abs()).to_f64();
                assert!(err <= tol, "err {err:e} for {a:?} + {b:?}");
            }
        }
    }

    #[test]
    fn mul_matches_extended_precision_oracle() {
        let mut rng = Xoshiro256::seed_from_u64(66);
        let tol = 2f64.powi(-63);
        for _ in 0..200_000 {
            let a = random_full_width_ts(&mut rng, -20, 20);
            let b = random_full_width_ts(&mut rng, -20, 20);
            let got = ts_mul(a, b);
            assert!(got.is_non_overlapping(), "{a:?} * {b:?} -> {got:?}");
            // dd product of exact dd inputs is itself ~2^-104 accurate,
            // far below the 2^-63 contract being checked
            let exact = a.to_dd().mul(b.to_dd());
            if exact.is_zero() {
                assert!(got.is_zero());
            } else {
                let err = got.to_dd().sub(exact).abs().div(exact.abs()).to_f64();
                assert!(err <= tol, "err {err:e} for {a:?} * {b:?}");
            }
        }
    }

    #[test]
    fn add_is_commutative_bitwise() {
        let mut rng = Xoshiro256::seed_from_u64(77);
        for _ in 0..50_000 {
            let a = random_full_width_ts(&mut rng, -10, 10);
            let b = random_full_width_ts(&mut rng, -10, 10);
            assert_eq!(ts_add(a, b), ts_add(b, a));
        }
    }

    #[test]
    fn cancellation_keeps_relative_accuracy() {
        // heavy cancellation in the leading components must not contaminate
        // the relative error of the small result
        let mut rng = Xoshiro256::seed_from_u64(88);
        let tol = 2f64.powi(-63);
        for _ in 0..50_000 {
            let a = random_full_width_ts(&mut rng, 0, 0);
            if a.t2 == 0.0 {
                continue;
            }
            // cancel all but half of the tail component; still canonical
            let b = TsScalar {
                t0: -a.t0,
                t1: -a.t1,
                t2: -a.t2 * 0.5,
            };
            let got = ts_add(a, b);
            let exact = a.to_dd().add(b.to_dd());
            let err = got.to_dd().sub(exact).abs().div(exact.abs()).to_f64();
            assert!(err <= tol, "err {err:e} for {a:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn non_overlap_holds_for_arbitrary_bit_patterns(
            bits in prop::array::uniform3(any::<u32>()),
            ebits in prop::array::uniform3(any::<u32>()),
        ) {
            // assemble finite f32 triples of wildly mixed exponents, then
            // renormalize through the public ops
            let comp = |b: u32, e: u32| {
                let m = f32::from_bits((b & 0x007f_ffff) | 0x3f80_0000); // [1, 2)
                let exp = (e % 80) as i32 - 40;
                let s = if b & 0x8000_0000 != 0 { -1.0 } else { 1.0 };
                s * m * pow2_f32(exp)
            };
            let a = TsScalar {
                t0: comp(bits[0], ebits[0]),
                t1: comp(bits[1], ebits[1]),
                t2: comp(bits[2], ebits[2]),
            };
            let one = ts_add(a, TsScalar::ZERO); // canonicalize
            prop_assert!(one.is_non_overlapping());
            let sq = ts_mul(one, one);
            prop_assert!(sq.is_non_overlapping());
            let diff = ts_sub(sq, one);
            prop_assert!(diff.is_non_overlapping());
            // canonicalization kept the value within the triple's capacity:
            // the raw components may span more than 72 bits, so the check is
            // the accuracy contract, not bitwise identity
            let want = Dd::from_exact_sum(a.t0 as f64, a.t1 as f64)
                .add(Dd::from_f64(a.t2 as f64));
            let err = one.to_dd().sub(want).abs().to_f64();
            prop_assert!(err <= want.abs().to_f64() * 2f64.powi(-63));
        }
    }
}
