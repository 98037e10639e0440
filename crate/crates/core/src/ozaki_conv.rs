//! TS-precision real cyclic convolution over split components: the
//! all-pairs form and the NTT-domain accumulation form, plus the
//! complex-to-four-real-convolutions wrapper.

use crate::crt::CrtPair;
use crate::ntt::{pointwise_add_mod_into, pointwise_mul_mod, NttPlan};
use crate::split::{compute_alpha, SplitConfig, SplitSet};
use crate::ts::{ts_add, ts_sub, TsScalar};

/// Which real-convolution routine the complex wrapper calls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvRoute {
    AllPairs,
    Accumulated,
}

/// Plans, modulus pair, and split configuration for one convolution length.
#[derive(Clone, Copy)]
pub struct ConvContext<'a> {
    pub plan0: &'a NttPlan,
    pub plan1: &'a NttPlan,
    pub pair: &'a CrtPair,
    pub cfg: &'a SplitConfig,
}

impl<'a> ConvContext<'a> {
    pub fn new(
        plan0: &'a NttPlan,
        plan1: &'a NttPlan,
        pair: &'a CrtPair,
        cfg: &'a SplitConfig,
    ) -> ConvContext<'a> {
        assert_eq!(plan0.n(), plan1.n(), "NTT plans disagree on length");
        // alpha no larger than the (pair, n, L) relation allows, or the
        // accumulated reconstruction would overflow
        let budget = compute_alpha(pair, plan0.n(), cfg.l_bound());
        assert!(
            (cfg.alpha() as i32) <= budget,
            "alpha {} exceeds the L = {} budget {budget}",
            cfg.alpha(),
            cfg.l_bound()
        );
        ConvContext {
            plan0,
            plan1,
            pair,
            cfg,
        }
    }

    fn n(&self) -> usize {
        self.plan0.n()
    }
}

/// Garner-reconstruct a flushed accumulator pair, undo the power-of-two
/// scale, and fold into the TS result.
fn flush_into(
    z: &mut [TsScalar],
    acc0: &mut [u32],
    acc1: &mut [u32],
    scale_exp: i32,
    ctx: &ConvContext,
) {
    let z0 = ctx.plan0.inverse(acc0);
    let z1 = ctx.plan1.inverse(acc1);
    for i in 0..z.len() {
        let v = ctx.pair.garner2(z0[i], z1[i]);
        // division by c_x c_y is an exact exponent adjustment
        let contrib = TsScalar::from_i64(v).scale_pow2(-scale_exp);
        z[i] = ts_add(z[i], contrib);
    }
    acc0.iter_mut().for_each(|v| *v = 0);
    acc1.iter_mut().for_each(|v| *v = 0);
}

/// All-pairs form: one pair of inverse NTTs per component pair
/// (`2 k_x k_y` inverse transforms), contributions folded in a fixed order
/// of descending magnitude (ascending `s + t`, then ascending `s`).
pub fn ts_conv_allpairs(xs: &SplitSet, ys: &SplitSet, ctx: &ConvContext) -> Vec<TsScalar> {
    let n = ctx.n();
    assert_eq!(xs.n(), n, "split set length mismatch");
    assert_eq!(ys.n(), n, "split set length mismatch");
    let mut z = vec![TsScalar::ZERO; n];
    let (kx, ky) = (xs.k(), ys.k());
    if kx == 0 || ky == 0 {
        return z;
    }
    for k in 0..=(kx + ky - 2) {
        let s_lo = k.saturating_sub(ky - 1);
        let s_hi = k.min(kx - 1);
        for s in s_lo..=s_hi {
            let t = k - s;
            let mut p0 = pointwise_mul_mod(xs.ntt0(s), ys.ntt0(t), ctx.plan0.modulus());
            let mut p1 = pointwise_mul_mod(xs.ntt1(s), ys.ntt1(t), ctx.plan1.modulus());
            let scale = xs.c_exp(s) + ys.c_exp(t);
            flush_into(&mut z, &mut p0, &mut p1, scale, ctx);
        }
    }
    z
}

/// NTT-domain accumulation form: pointwise products that share a scale
/// product are summed in the NTT domain (at most `L` of them) before a
/// single pair of inverse NTTs. With `L >= min(k_x, k_y)` and gap-free
/// scales this needs `2 (k_x + k_y - 1)` inverse transforms.
pub fn ts_conv_accumulated(xs: &SplitSet, ys: &SplitSet, ctx: &ConvContext) -> Vec<TsScalar> {
    let n = ctx.n();
    assert_eq!(xs.n(), n, "split set length mismatch");
    assert_eq!(ys.n(), n, "split set length mismatch");
    let l_bound = ctx.cfg.l_bound();
    let mut z = vec![TsScalar::ZERO; n];
    let (kx, ky) = (xs.k(), ys.k());
    if kx == 0 || ky == 0 {
        return z;
    }

    let mut acc0 = vec![0u32; n];
    let mut acc1 = vec![0u32; n];
    let mut cur_scale = xs.c_exp(kx - 1) + ys.c_exp(ky - 1);
    let mut l = 0u32;
    // anti-diagonals from the smallest contributions (largest scale
    // product) upward, ascending s within each
    for k in (0..=(kx + ky - 2)).rev() {
        let s_lo = k.saturating_sub(ky - 1);
        let s_hi = k.min(kx - 1);
        for s in s_lo..=s_hi {
            let t = k - s;
            let scale = xs.c_exp(s) + ys.c_exp(t);
            if l >= l_bound || scale != cur_scale {
                flush_into(&mut z, &mut acc0, &mut acc1, cur_scale, ctx);
                cur_scale = scale;
                l = 0;
            }
            pointwise_add_mod_into(
                &mut acc0,
                &pointwise_mul_mod(xs.ntt0(s), ys.ntt0(t), ctx.plan0.modulus()),
                ctx.plan0.modulus(),
            );
            pointwise_add_mod_into(
                &mut acc1,
                &pointwise_mul_mod(xs.ntt1(s), ys.ntt1(t), ctx.plan1.modulus()),
                ctx.plan1.modulus(),
            );
            l += 1;
            assert!(l <= l_bound, "accumulation bound violated");
        }
    }
    flush_into(&mut z, &mut acc0, &mut acc1, cur_scale, ctx);
    z
}

fn conv_route(xs: &SplitSet, ys: &SplitSet, ctx: &ConvContext, route: ConvRoute) -> Vec<TsScalar> {
    match route {
        ConvRoute::AllPairs => ts_conv_allpairs(xs, ys, ctx),
        ConvRoute::Accumulated => ts_conv_accumulated(xs, ys, ctx),
    }
}

/// Complex cyclic convolution as four real convolutions:
/// `Re = xr ⊛ yr - xi ⊛ yi`, `Im = xi ⊛ yr + xr ⊛ yi`. Each operand is
/// split exactly once by the caller; the split sets are reused across the
/// four calls.
pub fn ts_complex_conv(
    x_re: &SplitSet,
    x_im: &SplitSet,
    y_re: &SplitSet,
    y_im: &SplitSet,
    ctx: &ConvContext,
    route: ConvRoute,
) -> (Vec<TsScalar>, Vec<TsScalar>) {
    let rr = conv_route(x_re, y_re, ctx, route);
    let ii = conv_route(x_im, y_im, ctx, route);
    let ir = conv_route(x_im, y_re, ctx, route);
    let ri = conv_route(x_re, y_im, ctx, route);
    let re = rr.iter().zip(&ii).map(|(&a, &b)| ts_sub(a, b)).collect();
    let im = ir.iter().zip(&ri).map(|(&a, &b)| ts_add(a, b)).collect();
    (re, im)
}
