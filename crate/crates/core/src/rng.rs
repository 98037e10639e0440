//! Deterministic pseudorandom generation: xoshiro256** seeded through
//! splitmix64, plus the Box-Muller normal sampler used by the input
//! generator. Self-contained so that streams are identical across
//! platforms.

/// xoshiro256** (Blackman/Vigna), state expanded from a 64-bit seed with
/// splitmix64.
#[derive(Clone, Debug)]
pub struct Xoshiro256 {
    s: [u64; 4],
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Xoshiro256 {
    pub fn seed_from_u64(seed: u64) -> Xoshiro256 {
        let mut sm = seed;
        let s = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        Xoshiro256 { s }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform on `(0, 1]` with 53-bit resolution.
    pub fn next_f64_open01(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform signed value in `[-bound, bound]`.
    pub fn next_i64_in(&mut self, bound: i64) -> i64 {
        debug_assert!(bound >= 0);
        let span = 2 * bound as u64 + 1;
        (self.next_u64() % span) as i64 - bound
    }
}

/// Standard normal draws via the pair form of Box-Muller; the second value
/// of each pair is cached.
#[derive(Clone, Debug)]
pub struct BoxMuller {
    pub rng: Xoshiro256,
    cached: Option<f64>,
}

impl BoxMuller {
    pub fn new(rng: Xoshiro256) -> BoxMuller {
        BoxMuller { rng, cached: None }
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.cached.take() {
            return z;
        }
        let u1 = self.rng.next_f64_open01();
        let u2 = self.rng.next_f64_open01();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.cached = Some(r * theta.sin());
        r * theta.cos()
    }
}
