//! Deterministic random streams for parallel walkers.
//!
//! Every walker draws from its own counter-based stream of a single seeded
//! generator, so an estimate is a pure function of `(seed, walker_count)`
//! and does not depend on thread count or scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for one walker.
///
/// The base generator is seeded once from `seed`; the walker index selects
/// an independent stream. Two calls with the same arguments produce
/// identical sequences on every platform.
pub fn walker_rng(seed: u64, walker: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(walker);
    rng
}
