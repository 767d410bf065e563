//! Labeled feature bundles, their file formats, synthetic generators,
//! splits, co-binning and batch iteration.

mod batches;
mod bundle;
mod cobinning;
mod csv;
mod gfv1;
mod split;
mod synthetic;

pub use batches::{paired_batches, shuffled_batches, GuideSampler, PairedBatch, PairedBatches};
pub use bundle::DatasetBundle;
pub use cobinning::{BinningKind, CoBinning};
pub use csv::load_csv;
pub use gfv1::{load_gfv1, read_gfv1, save_gfv1, save_prototypes_gfv1, write_gfv1, GFV1_MAGIC};
pub use split::{stratified_split, SplitView};
pub use synthetic::{gen_gaussian_mixture, MixtureParams};

/// FNV-1a over a sequence of indices; used to fingerprint splits.
pub(crate) fn fingerprint_indices<'a>(parts: impl IntoIterator<Item = &'a [usize]>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for &i in part.iter().chain(std::iter::once(&usize::MAX)) {
            for b in (i as u64).to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
    }
    h
}
