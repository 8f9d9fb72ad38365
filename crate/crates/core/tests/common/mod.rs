#![allow(dead_code)]

use meridian_map::QuadraticProfile;
use rand::Rng;

/// `c, k ∈ (0.1, 4)` and `d² < 0.9 · 4ck`, so the discriminant stays clear of zero.
pub fn random_profile<R: Rng>(rng: &mut R) -> QuadraticProfile {
    let c: f64 = rng.gen_range(0.1..4.0);
    let k: f64 = rng.gen_range(0.1..4.0);
    let bound = (0.9 * 4.0 * c * k).sqrt();
    let d = rng.gen_range(-bound..bound);
    QuadraticProfile::new(c, d, k).expect("generated coefficients are admissible")
}

pub fn figure_profile() -> QuadraticProfile {
    QuadraticProfile::new(1.0, 0.0, 1.0).unwrap()
}
