//! Exact 32-bit prime-field arithmetic.
//!
//! Residues are plain `u32` values kept canonical (in `[0, p)`) at every API
//! boundary; Montgomery and Shoup forms are internal to the multiplication
//! kernels. Multiplication is bit-exact against the 64-bit widening
//! reference regardless of strategy.

use crate::Error;

/// Canonical residue in `[0, p)`.
pub type Residue = u32;

/// A 31-bit NTT-friendly prime with its multiplication constants.
#[derive(Clone, Debug)]
pub struct Modulus {
    p: u32,
    two_adicity: u32,
    generator: u32,
    /// `-p^{-1} mod 2^32` (Montgomery, radix 2^32).
    neg_p_inv: u32,
    /// `2^64 mod p`, lifts a canonical value into the Montgomery domain.
    r2: u32,
}

/// Symmetric remainder: `a - m * floor(a/m + 1/2)`, in `[-m/2, m/2)`.
pub fn sym_mod(a: i64, m: i64) -> i64 {
    debug_assert!(m >= 1);
    let r = a.rem_euclid(m);
    if r > (m - 1) / 2 {
        r - m
    } else {
        r
    }
}

impl Modulus {
    /// Builds a modulus from an odd prime `p < 2^31` and the set of distinct
    /// primes dividing `p - 1`. The generator is found by trial over small
    /// candidates.
    pub fn new(p: u32, p_minus_1_primes: &[u32]) -> Result<Modulus, Error> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidModulus(format!(
                "{p} is not an odd prime > 2"
            )));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidModulus(format!(
                "{p} >= 2^31: no headroom for the reduction kernels"
            )));
        }
        // The factor list must cover p - 1 completely, otherwise the
        // generator test below is unsound.
        let mut rest = (p - 1) as u64;
        for &q in p_minus_1_primes {
            if q < 2 || !rest.is_multiple_of(q as u64) {
                return Err(Error::InvalidModulus(format!(
                    "{q} is not a prime factor of p - 1 = {}",
                    p - 1
                )));
            }
            while rest.is_multiple_of(q as u64) {
                rest /= q as u64;
            }
        }
        if rest != 1 {
            return Err(Error::InvalidModulus(format!(
                "factor list does not cover p - 1 = {}",
                p - 1
            )));
        }

        let mut m = Modulus {
            p,
            two_adicity: (p - 1).trailing_zeros(),
            generator: 0,
            neg_p_inv: neg_inv_mod_u32(p),
            r2: ((1u128 << 64) % p as u128) as u32,
        };
        m.generator = find_generator(&m, p_minus_1_primes)?;
        Ok(m)
    }

    /// `p0 = 2,130,706,433 = 127 * 2^24 + 1`.
    pub fn default_p0() -> Modulus {
        Modulus::new(2_130_706_433, &[2, 127]).expect("p0 is a valid modulus")
    }

    /// `p1 = 2,113,929,217 = 63 * 2^25 + 1`.
    pub fn default_p1() -> Modulus {
        Modulus::new(2_113_929_217, &[2, 3, 7]).expect("p1 is a valid modulus")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn two_adicity(&self) -> u32 {
        self.two_adicity
    }

    pub fn generator(&self) -> Residue {
        self.generator
    }

    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b; // p < 2^31, no overflow
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        debug_assert!(a < self.p && b < self.p);
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: Residue) -> Residue {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Montgomery reduction: returns `t * 2^{-32} mod p` for `t < p * 2^32`.
    #[inline]
    fn mont_reduce(&self, t: u64) -> u32 {
        let m = (t as u32).wrapping_mul(self.neg_p_inv);
        let r = ((t + m as u64 * self.p as u64) >> 32) as u32;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    /// Canonical product `a * b mod p` (Montgomery-backed; bit-exact against
    /// the widening reference).
    #[inline]
    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        debug_assert!(a < self.p && b < self.p);
        let ab = self.mont_reduce(a as u64 * b as u64); // a*b*2^-32
        self.mont_reduce(ab as u64 * self.r2 as u64) // restore the 2^32 factor
    }

    /// Shoup precomputation for a fixed multiplier `w < p`.
    #[inline]
    pub fn shoup_precompute(&self, w: Residue) -> u32 {
        debug_assert!(w < self.p);
        (((w as u64) << 32) / self.p as u64) as u32
    }

    /// `a * w mod p` with `w_shoup = floor(w * 2^32 / p)` precomputed.
    #[inline]
    pub fn shoup_mul(&self, a: Residue, w: Residue, w_shoup: u32) -> Residue {
        debug_assert!(a < self.p && w < self.p);
        let q = ((w_shoup as u64 * a as u64) >> 32) as u32;
        // True remainder is < 2p < 2^32, so wrapping u32 arithmetic is exact.
        let r = w.wrapping_mul(a).wrapping_sub(q.wrapping_mul(self.p));
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    pub fn pow(&self, a: Residue, mut e: u64) -> Residue {
        debug_assert!(a < self.p);
        let mut base = a;
        let mut acc: u32 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(&self, a: Residue) -> Residue {
        assert!(a != 0, "inverse of zero mod {}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// A primitive `n`-th root of unity, `generator^((p-1)/n)`.
    pub fn root_of_unity(&self, n: u64) -> Result<Residue, Error> {
        let p_minus_1 = self.p as u64 - 1;
        if n == 0 || !p_minus_1.is_multiple_of(n) {
            return Err(Error::NoRootOfUnity { n, p_minus_1 });
        }
        Ok(self.pow(self.generator, p_minus_1 / n))
    }

    /// Canonical residue of a signed value: symmetric reduction then lift.
    #[inline]
    pub fn reduce_i64(&self, v: i64) -> Residue {
        let r = sym_mod(v, self.p as i64);
        if r < 0 {
            (r + self.p as i64) as u32
        } else {
            r as u32
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `-p^{-1} mod 2^32` by Newton iteration (p odd).
fn neg_inv_mod_u32(p: u32) -> u32 {
    let mut inv = p; // p * p ≡ 1 (mod 8) seeds the iteration
    for _ in 0..4 {
        inv = inv.wrapping_mul(2u32.wrapping_sub(p.wrapping_mul(inv)));
    }
    debug_assert_eq!(p.wrapping_mul(inv), 1);
    inv.wrapping_neg()
}

fn find_generator(m: &Modulus, primes: &[u32]) -> Result<u32, Error> {
    let p_minus_1 = m.p as u64 - 1;
    'cand: for g in 2..m.p {
        for &q in primes {
            if m.pow(g, p_minus_1 / q as u64) == 1 {
                continue 'cand;
            }
        }
        return Ok(g);
    }
    Err(Error::InvalidModulus(format!(
        "no generator found for {}",
        m.p
    )))
}
