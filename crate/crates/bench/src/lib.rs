//! Deterministic input builders shared by the benchmark targets.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tg_core::grassmann::{GWord, GeneratorSym};
use tg_core::oscillator::OpAtom;

/// Seeded batch of raw generator words over `n_pairs` pairs.
pub fn random_words(count: usize, len: usize, n_pairs: usize, seed: u64) -> Vec<GWord> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..len)
                .map(|_| {
                    let index = rng.random_range(0..n_pairs);
                    if rng.random_bool(0.5) {
                        GeneratorSym::xi(index)
                    } else {
                        GeneratorSym::xb(index)
                    }
                })
                .collect()
        })
        .collect()
}

/// Ladder word alternating creation and annihilation, `len` atoms long.
pub fn ladder_word(len: usize) -> Vec<OpAtom> {
    (0..len)
        .map(|k| if k % 2 == 0 { OpAtom::Create } else { OpAtom::Annihilate })
        .collect()
}
