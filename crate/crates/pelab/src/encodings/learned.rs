//! Learned absolute encodings with clipped lookup.
//!
//! The table holds one trainable vector per position up to `n_max`; any
//! position past the end reuses the last row, so lookups are defined for
//! every length (and collapse beyond the training range).

use crate::encodings::PEMatrix;
use crate::numkit::{Matrix, SplitMix64};

#[derive(Clone, Debug, PartialEq)]
pub struct LearnedTable {
    pub values: Matrix, // n_max x d_model
}

impl LearnedTable {
    /// Zero-mean init with standard deviation `std` (0.02 in this project).
    pub fn init(n_max: usize, d_model: usize, std: f64, rng: &mut SplitMix64) -> Self {
        LearnedTable { values: Matrix::from_fn(n_max, d_model, |_, _| std * rng.next_normal()) }
    }

    pub fn n_max(&self) -> usize {
        self.values.rows()
    }

    /// Table row a position reads (and the row its gradient flows to).
    pub fn clipped_index(&self, pos: usize) -> usize {
        pos.min(self.n_max() - 1)
    }

    /// Encoding matrix for a sequence of length `n`.
    pub fn pe_for_len(&self, n: usize) -> PEMatrix {
        let d = self.values.cols();
        let values = Matrix::from_fn(n, d, |pos, c| self.values.get(self.clipped_index(pos), c));
        PEMatrix { values }
    }
}

/// Encoding vector for one position: row `min(pos, n_max - 1)`.
pub fn learned_pe_lookup(table: &LearnedTable, pos: usize) -> &[f64] {
    table.values.row(table.clipped_index(pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> LearnedTable {
        let mut rng = SplitMix64::new(11);
        LearnedTable::init(50, 8, 0.02, &mut rng)
    }

    #[test]
    fn in_range_lookup_returns_that_row() {
        let t = table();
        assert_eq!(learned_pe_lookup(&t, 3), t.values.row(3));
    }

    #[test]
    fn out_of_range_lookup_clips_to_last_row() {
        let t = table();
        assert_eq!(learned_pe_lookup(&t, 120), t.values.row(49));
    }

    #[test]
    fn positions_past_n_max_share_one_vector() {
        let t = table();
        assert_eq!(learned_pe_lookup(&t, 50), learned_pe_lookup(&t, 180));
    }

    #[test]
    fn pe_for_len_matches_lookup() {
        let t = table();
        let pe = t.pe_for_len(60);
        assert_eq!(pe.positions(), 60);
        for pos in [0, 10, 49, 50, 59] {
            assert_eq!(pe.row(pos), learned_pe_lookup(&t, pos));
        }
    }
}
