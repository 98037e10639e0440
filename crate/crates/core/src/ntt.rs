//! Stockham-style forward/inverse NTT of power-of-two length.
//!
//! The self-sorting variant needs no bit-reversal pass; each stage ping-pongs
//! between two buffers. Twiddles carry precomputed Shoup constants, and the
//! inverse transform folds `n^{-1}` into its final stage. Every transform
//! call bumps a per-plan atomic counter so the harness can account for
//! invocations exactly.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::fp_mod::{Modulus, Residue};
use crate::Error;

/// Per-plan transform tallies. Atomic so concurrent transforms on a shared
/// plan stay consistent; resettable by the harness.
#[derive(Debug, Default)]
pub struct NttCounters {
    forward: AtomicU64,
    inverse: AtomicU64,
}

impl NttCounters {
    pub fn forward(&self) -> u64 {
        self.forward.load(Ordering::Relaxed)
    }

    pub fn inverse(&self) -> u64 {
        self.inverse.load(Ordering::Relaxed)
    }

    pub fn total(&self) -> u64 {
        self.forward() + self.inverse()
    }

    pub fn reset(&self) {
        self.forward.store(0, Ordering::Relaxed);
        self.inverse.store(0, Ordering::Relaxed);
    }
}

/// Immutable transform plan: length, modulus, twiddle tables, `n^{-1}`.
#[derive(Debug)]
pub struct NttPlan {
    n: usize,
    modulus: Modulus,
    fwd_tw: Vec<Residue>,
    fwd_tw_shoup: Vec<u32>,
    inv_tw: Vec<Residue>,
    inv_tw_shoup: Vec<u32>,
    n_inv: Residue,
    n_inv_shoup: u32,
    counters: NttCounters,
}

impl NttPlan {
    pub fn new(n: usize, modulus: &Modulus) -> Result<NttPlan, Error> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { n });
        }
        if n.trailing_zeros() > modulus.two_adicity() {
            return Err(Error::UnsupportedLength {
                n,
                p: modulus.p(),
                max_log2: modulus.two_adicity(),
            });
        }
        let half = n / 2;
        let mut fwd_tw = Vec::with_capacity(half);
        let mut inv_tw = Vec::with_capacity(half);
        if n >= 2 {
            let w = modulus.root_of_unity(n as u64)?;
            let w_inv = modulus.inv(w);
            let (mut f, mut g) = (1u32, 1u32);
            for _ in 0..half {
                fwd_tw.push(f);
                inv_tw.push(g);
                f = modulus.mul(f, w);
                g = modulus.mul(g, w_inv);
            }
        }
        let fwd_tw_shoup = fwd_tw
            .iter()
            .map(|&w| modulus.shoup_precompute(w))
            .collect();
        let inv_tw_shoup = inv_tw
            .iter()
            .map(|&w| modulus.shoup_precompute(w))
            .collect();
        let n_inv = modulus.inv((n as u64 % modulus.p() as u64) as u32);
        let n_inv_shoup = modulus.shoup_precompute(n_inv);
        Ok(NttPlan {
            n,
            modulus: modulus.clone(),
            fwd_tw,
            fwd_tw_shoup,
            inv_tw,
            inv_tw_shoup,
            n_inv,
            n_inv_shoup,
            counters: NttCounters::default(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn counters(&self) -> &NttCounters {
        &self.counters
    }

    /// `fwd_twiddles[j] = w_n^j` for `j < n/2`.
    pub fn fwd_twiddle(&self, j: usize) -> Residue {
        self.fwd_tw[j]
    }

    pub fn inv_twiddle(&self, j: usize) -> Residue {
        self.inv_tw[j]
    }

    pub fn n_inv(&self) -> Residue {
        self.n_inv
    }

    /// Exact modular DFT, natural order in and out.
    pub fn forward(&self, x: &[Residue]) -> Vec<Residue> {
        assert_eq!(x.len(), self.n, "forward NTT length mismatch");
        self.counters.forward.fetch_add(1, Ordering::Relaxed);
        self.stockham(x, false)
    }

    /// Exact modular inverse DFT.
    pub fn inverse(&self, y: &[Residue]) -> Vec<Residue> {
        assert_eq!(y.len(), self.n, "inverse NTT length mismatch");
        self.counters.inverse.fetch_add(1, Ordering::Relaxed);
        self.stockham(y, true)
    }

    fn stockham(&self, x: &[Residue], inverse: bool) -> Vec<Residue> {
        let n = self.n;
        let md = &self.modulus;
        let mut a = x.to_vec();
        if n == 1 {
            if inverse {
                // n_inv = 1; nothing to scale
            }
            return a;
        }
        let (tw, tw_shoup) = if inverse {
            (&self.inv_tw, &self.inv_tw_shoup)
        } else {
            (&self.fwd_tw, &self.fwd_tw_shoup)
        };
        let mut b = vec![0u32; n];
        let mut l = n / 2;
        let mut m = 1;
        while m < n {
            let last = m == n / 2;
            for j in 0..l {
                let w = tw[j * m];
                let ws = tw_shoup[j * m];
                let base = j * m;
                for k in 0..m {
                    let c0 = a[base + k];
                    let c1 = a[base + k + l * m];
                    let sum = md.add(c0, c1);
                    let diff = md.shoup_mul(md.sub(c0, c1), w, ws);
                    if inverse && last {
                        // fold n^{-1} into the final pass
                        b[2 * base + k] = md.shoup_mul(sum, self.n_inv, self.n_inv_shoup);
                        b[2 * base + k + m] = md.shoup_mul(diff, self.n_inv, self.n_inv_shoup);
                    } else {
                        b[2 * base + k] = sum;
                        b[2 * base + k + m] = diff;
                    }
                }
            }
            std::mem::swap(&mut a, &mut b);
            l /= 2;
            m *= 2;
        }
        a
    }
}

/// Elementwise modular product.
pub fn pointwise_mul_mod(a: &[Residue], b: &[Residue], m: &Modulus) -> Vec<Residue> {
    assert_eq!(a.len(), b.len(), "pointwise product length mismatch");
    a.iter().zip(b).map(|(&x, &y)| m.mul(x, y)).collect()
}

/// Elementwise modular sum (NTT-domain accumulation).
pub fn pointwise_add_mod_into(acc: &mut [Residue], add: &[Residue], m: &Modulus) {
    assert_eq!(acc.len(), add.len(), "pointwise sum length mismatch");
    for (a, &b) in acc.iter_mut().zip(add) {
        *a = m.add(*a, b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Xoshiro256;

    fn random_vec(n: usize, p: u64, rng: &mut Xoshiro256) -> Vec<u32> {
        (0..n).map(|_| (rng.next_u64() % p) as u32).collect()
    }

    /// O(n^2) direct evaluation of the modular DFT.
    fn naive_dft(x: &[u32], m: &Modulus, inverse: bool) -> Vec<u32> {
        let n = x.len();
        let w = if n == 1 {
            1
        } else {
            let w = m.root_of_unity(n as u64).unwrap();
            if inverse {
                m.inv(w)
            } else {
                w
            }
        };
        let scale = if inverse {
            m.inv((n as u64 % m.p() as u64) as u32)
        } else {
            1
        };
        (0..n)
            .map(|k| {
                let mut acc = 0u32;
                for (j, &xj) in x.iter().enumerate() {
                    let e = (j as u64 * k as u64) % n as u64;
                    acc = m.add(acc, m.mul(xj, m.pow(w, e)));
                }
                m.mul(acc, scale)
            })
            .collect()
    }

    #[test]
    fn impulse_and_constant() {
        let m = Modulus::default_p0();
        let plan = NttPlan::new(64, &m).unwrap();
        let mut impulse = vec![0u32; 64];
        impulse[0] = 1;
        assert_eq!(plan.forward(&impulse), vec![1u32; 64]);
        let c = 12345u32;
        let y = plan.forward(&vec![c; 64]);
        assert_eq!(y[0], ((64u64 * c as u64) % m.p() as u64) as u32);
        assert!(y[1..].iter().all(|&v| v == 0));
        // inverse of the impulse case
        assert_eq!(plan.inverse(&vec![1u32; 64]), impulse);
    }

    #[test]
    fn matches_naive_dft() {
        let mut rng = Xoshiro256::seed_from_u64(5);
        for m in [Modulus::default_p0(), Modulus::default_p1()] {
            for log_n in 0..=6 {
                let n = 1usize << log_n;
                let plan = NttPlan::new(n, &m).unwrap();
                let x = random_vec(n, m.p() as u64, &mut rng);
                assert_eq!(plan.forward(&x), naive_dft(&x, &m, false), "n = {n}");
                assert_eq!(plan.inverse(&x), naive_dft(&x, &m, true), "n = {n}");
            }
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let mut rng = Xoshiro256::seed_from_u64(17);
        for m in [Modulus::default_p0(), Modulus::default_p1()] {
            for log_n in 0..=16 {
                let n = 1usize << log_n;
                let plan = NttPlan::new(n, &m).unwrap();
                let x = random_vec(n, m.p() as u64, &mut rng);
                assert_eq!(plan.inverse(&plan.forward(&x)), x, "n = {n}");
            }
        }
    }

    #[test]
    fn convolution_theorem_matches_brute_force() {
        let mut rng = Xoshiro256::seed_from_u64(23);
        let m = Modulus::default_p0();
        for n in [4usize, 16, 64, 256] {
            let plan = NttPlan::new(n, &m).unwrap();
            let x = random_vec(n, m.p() as u64, &mut rng);
            let y = random_vec(n, m.p() as u64, &mut rng);
            let z = plan.inverse(&pointwise_mul_mod(&plan.forward(&x), &plan.forward(&y), &m));
            for k in 0..n {
                let mut acc = 0u32;
                for j in 0..n {
                    acc = m.add(acc, m.mul(x[j], y[(k + n - j) % n]));
                }
                assert_eq!(z[k], acc, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn pointwise_product_examples() {
        let m = Modulus::default_p0();
        let mut rng = Xoshiro256::seed_from_u64(37);
        let a = random_vec(64, m.p() as u64, &mut rng);
        let b = random_vec(64, m.p() as u64, &mut rng);
        assert_eq!(pointwise_mul_mod(&a, &vec![1u32; 64], &m), a);
        assert_eq!(pointwise_mul_mod(&a, &vec![0u32; 64], &m), vec![0u32; 64]);
        let got = pointwise_mul_mod(&a, &b, &m);
        for i in 0..64 {
            assert_eq!(got[i] as u128, a[i] as u128 * b[i] as u128 % m.p() as u128);
        }
    }

    #[test]
    fn linearity() {
        let mut rng = Xoshiro256::seed_from_u64(29);
        let m = Modulus::default_p1();
        let n = 128;
        let plan = NttPlan::new(n, &m).unwrap();
        let x = random_vec(n, m.p() as u64, &mut rng);
        let y = random_vec(n, m.p() as u64, &mut rng);
        let (a, b) = (
            (rng.next_u64() % m.p() as u64) as u32,
            (rng.next_u64() % m.p() as u64) as u32,
        );
        let combo: Vec<u32> = (0..n)
            .map(|i| m.add(m.mul(a, x[i]), m.mul(b, y[i])))
            .collect();
        let fx = plan.forward(&x);
        let fy = plan.forward(&y);
        let expect: Vec<u32> = (0..n)
            .map(|i| m.add(m.mul(a, fx[i]), m.mul(b, fy[i])))
            .collect();
        assert_eq!(plan.forward(&combo), expect);
    }

    #[test]
    fn plan_length_gates() {
        let m0 = Modulus::default_p0();
        let plan = NttPlan::new(1 << 10, &m0).unwrap();
        assert_eq!(plan.n_inv(), m0.inv(1024));
        assert!(matches!(
            NttPlan::new(1 << 25, &m0),
            Err(Error::UnsupportedLength { .. })
        ));
        assert!(matches!(
            NttPlan::new(1000, &m0),
            Err(Error::NotPowerOfTwo { .. })
        ));
        // p1 admits 2^25 (two-adicity 25); check the root rather than
        // materializing the 2^25 tables
        let m1 = Modulus::default_p1();
        let w = m1.root_of_unity(1 << 25).unwrap();
        assert_eq!(m1.pow(w, 1 << 24), m1.p() - 1);
    }

    #[test]
    fn twiddle_tables_are_inverse_pairs() {
        let m = Modulus::default_p0();
        let plan = NttPlan::new(256, &m).unwrap();
        let w = m.root_of_unity(256).unwrap();
        for j in 0..128 {
            assert_eq!(plan.fwd_twiddle(j), m.pow(w, j as u64));
            assert_eq!(m.mul(plan.fwd_twiddle(j), plan.inv_twiddle(j)), 1);
        }
    }

    #[test]
    fn counters_increment_by_one() {
        let m = Modulus::default_p0();
        let plan = NttPlan::new(8, &m).unwrap();
        let x = vec![1u32; 8];
        assert_eq!(plan.counters().total(), 0);
        plan.forward(&x);
        assert_eq!(
            (plan.counters().forward(), plan.counters().inverse()),
            (1, 0)
        );
        plan.inverse(&x);
        plan.inverse(&x);
        assert_eq!(
            (plan.counters().forward(), plan.counters().inverse()),
            (1, 2)
        );
        plan.counters().reset();
        assert_eq!(plan.counters().total(), 0);
    }
}
