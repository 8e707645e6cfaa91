use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded generator for one logical stream.
///
/// Distinct `stream` ids under the same seed are independent ChaCha streams,
/// so a check that needs two samples never reuses draws from another
/// repetition seeded at `seed + 1`.
pub(crate) fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Exponential(1) variate `-ln U` with `U` uniform on the open interval (0, 1).
pub(crate) fn neg_log_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    -u.ln()
}
