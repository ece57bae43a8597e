//! Seed derivation and counter-indexed random streams.
//!
//! Every random quantity is drawn from a ChaCha8 stream selected by
//! `(seed, stream index)`. Grid-based samplers use the cell index as the stream
//! index, so replica `r` of a batch consumes the `r`-th draw of each cell stream.

use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Mixes a root seed with a label into a new, decorrelated seed.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    let mut z = seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a seed from a textual label (FNV-1a hash of the bytes).
pub fn derive_seed_str(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    derive_seed(seed, h)
}

/// The random stream with the given index under `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Stream index for a cell of a two-dimensional grid.
pub fn cell_index(i: usize, j: usize) -> u64 {
    ((i as u64) << 32) | (j as u64 & 0xFFFF_FFFF)
}

/// One open stream per grid cell.
pub struct CellStreams {
    rngs: Vec<StreamRng>,
}

impl CellStreams {
    pub fn new(seed: u64, cells: usize) -> Self {
        Self {
            rngs: (0..cells).map(|i| stream(seed, i as u64)).collect(),
        }
    }

    pub fn from_indices(seed: u64, indices: impl IntoIterator<Item = u64>) -> Self {
        Self {
            rngs: indices.into_iter().map(|i| stream(seed, i)).collect(),
        }
    }

    pub fn cell(&mut self, i: usize) -> &mut StreamRng {
        &mut self.rngs[i]
    }

    pub fn len(&self) -> usize {
        self.rngs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rngs.is_empty()
    }
}
