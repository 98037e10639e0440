//! Two-modulus Garner reconstruction and the exact integer cyclic
//! convolution built from dual-modulus NTTs.

use crate::fp_mod::{Modulus, Residue};
use crate::ntt::{pointwise_mul_mod, NttPlan};
use crate::Error;

/// A coprime modulus pair with the constants Garner reconstruction needs.
#[derive(Clone, Debug)]
pub struct CrtPair {
    p0: Modulus,
    p1: Modulus,
    /// `p0^{-1} mod p1`.
    inv_p0_mod_p1: Residue,
    /// `p0 * p1`; fits u64 because both primes are below 2^31.
    product: u64,
    product_log2: f64,
}

impl CrtPair {
    pub fn new(p0: Modulus, p1: Modulus) -> Result<CrtPair, Error> {
        if p0.p() == p1.p() {
            return Err(Error::InvalidModulus(
                "CRT moduli must be distinct primes".into(),
            ));
        }
        let inv_p0_mod_p1 = p1.inv((p0.p() as u64 % p1.p() as u64) as u32);
        let product = p0.p() as u64 * p1.p() as u64;
        Ok(CrtPair {
            product_log2: (product as f64).log2(),
            p0,
            p1,
            inv_p0_mod_p1,
            product,
        })
    }

    /// The default 31-bit pair `(2,130,706,433, 2,113,929,217)`, `log2(p0*p1) ~ 61.97`.
    pub fn default_pair() -> CrtPair {
        CrtPair::new(Modulus::default_p0(), Modulus::default_p1())
            .expect("default primes are coprime")
    }

    pub fn p0(&self) -> &Modulus {
        &self.p0
    }

    pub fn p1(&self) -> &Modulus {
        &self.p1
    }

    pub fn product(&self) -> u64 {
        self.product
    }

    pub fn product_log2(&self) -> f64 {
        self.product_log2
    }

    /// Reconstructs the unique `v` in `[-p0*p1/2, p0*p1/2)` with
    /// `v ≡ z0 (mod p0)` and `v ≡ z1 (mod p1)` (Garner form, so every
    /// intermediate stays within 64 bits).
    pub fn garner2(&self, z0: Residue, z1: Residue) -> i64 {
        debug_assert!(z0 < self.p0.p() && z1 < self.p1.p());
        let z0_mod_p1 = z0 % self.p1.p();
        let diff = self.p1.sub(z1, z0_mod_p1);
        let t = self.p1.mul(diff, self.inv_p0_mod_p1);
        let v = z0 as u64 + t as u64 * self.p0.p() as u64; // < p0*p1
        sym_mod_u64(v, self.product)
    }
}

/// Symmetric representative of `v` (given canonically in `[0, m)`).
fn sym_mod_u64(v: u64, m: u64) -> i64 {
    debug_assert!(v < m);
    if v > (m - 1) / 2 {
        v as i64 - m as i64
    } else {
        v as i64
    }
}

/// Exact integer cyclic convolution `x ⊛ y` via NTTs under both moduli and
/// Garner reconstruction. Performs 4 forward and 2 inverse NTTs.
///
/// The caller guarantees `n * max|x| * max|y| < p0*p1/2` (normally via the
/// split width alpha); the bound is re-checked here in log2 space.
pub fn exact_cyclic_conv(
    x: &[i64],
    y: &[i64],
    plan0: &NttPlan,
    plan1: &NttPlan,
    pair: &CrtPair,
) -> Vec<i64> {
    let n = plan0.n();
    assert_eq!(plan1.n(), n, "NTT plans disagree on length");
    assert_eq!(x.len(), n, "convolution operand length mismatch");
    assert_eq!(y.len(), n, "convolution operand length mismatch");

    let max_x = x.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let max_y = y.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    if max_x > 0 && max_y > 0 {
        let bound_log2 = (n as f64).log2() + (max_x as f64).log2() + (max_y as f64).log2();
        assert!(
            bound_log2 < pair.product_log2() - 1.0,
            "convolution overflow bound violated: n*|x|*|y| needs {bound_log2:.2} bits, \
             reconstruction holds {:.2}",
            pair.product_log2() - 1.0
        );
    }

    let reduce =
        |v: &[i64], m: &Modulus| -> Vec<Residue> { v.iter().map(|&a| m.reduce_i64(a)).collect() };
    let z0 = plan0.inverse(&pointwise_mul_mod(
        &plan0.forward(&reduce(x, pair.p0())),
        &plan0.forward(&reduce(y, pair.p0())),
        pair.p0(),
    ));
    let z1 = plan1.inverse(&pointwise_mul_mod(
        &plan1.forward(&reduce(x, pair.p1())),
        &plan1.forward(&reduce(y, pair.p1())),
        pair.p1(),
    ));
    z0.iter()
        .zip(&z1)
        .map(|(&a, &b)| pair.garner2(a, b))
        .collect()
}
