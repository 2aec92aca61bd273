//! Tiny deterministic generator for the verification suites.  SplitMix64 is
//! enough for sampling test directions and keeps runs reproducible across
//! platforms without pulling in a dependency.

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [-1, 1).
    pub fn next_signed(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }
}

/// Random symmetric matrix with entries in [-1, 1).
pub fn random_symmetric(rng: &mut SplitMix64, n: usize) -> nalgebra::DMatrix<f64> {
    let mut a = nalgebra::DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.next_signed();
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Random square matrix with entries in [-1, 1).
pub fn random_matrix(rng: &mut SplitMix64, n: usize) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(n, n, |_, _| rng.next_signed())
}
