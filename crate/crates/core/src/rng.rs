use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Independent ChaCha20 stream `stream` under `seed`. Streams are counter
/// based, so any replicate can be regenerated without touching the others.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw on the open interval (0, 1).
pub(crate) fn open01<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(rand_distr::Open01)
}
