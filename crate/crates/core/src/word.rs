//! Signed words over `[-r,-1] ⊔ [1,r]`: navigation maps, the frozen/unfrozen
//! partition, the exchange matrices attached to a signed word, and the word
//! operations (left reflection, flips) with their induced seed moves.

use crate::cartan::CartanData;
use crate::seed::ExchangeMatrix;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("index {0} out of range")]
    IndexOutOfRange(i32),
    #[error("signed word is empty")]
    EmptyWord,
    #[error("letters at positions {0}, {1} have the same sign")]
    SameSign(usize, usize),
    #[error("target word is not a shuffle of the source word's signed subwords")]
    NotAShuffle,
    #[error("invalid signed word: {0}")]
    Invalid(String),
}

/// A signed word together with the fixed permutation of `[1,r]` labelling
/// the virtual positions `-r..-1` of the extended index set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedWord {
    rank: usize,
    letters: Vec<i32>,
    neg_extension: Vec<usize>, // neg_extension[t-1] = letter at position -t, 1-based
}

impl SignedWord {
    pub fn new(rank: usize, letters: Vec<i32>) -> Result<Self, WordError> {
        let neg_extension = (1..=rank).collect();
        Self::with_extension(rank, letters, neg_extension)
    }

    pub fn with_extension(
        rank: usize,
        letters: Vec<i32>,
        neg_extension: Vec<usize>,
    ) -> Result<Self, WordError> {
        if rank == 0 {
            return Err(WordError::Invalid("rank must be positive".into()));
        }
        for l in &letters {
            if *l == 0 || l.unsigned_abs() as usize > rank {
                return Err(WordError::Invalid(format!("letter {l} out of range")));
            }
        }
        let mut seen = vec![false; rank];
        if neg_extension.len() != rank {
            return Err(WordError::Invalid("negative extension length".into()));
        }
        for l in &neg_extension {
            if *l == 0 || *l > rank || seen[l - 1] {
                return Err(WordError::Invalid(
                    "negative extension must be a permutation of [1,r]".into(),
                ));
            }
            seen[l - 1] = true;
        }
        Ok(SignedWord {
            rank,
            letters,
            neg_extension,
        })
    }

    /// Parse `"1,2,-1,-2"` syntax.
    pub fn parse(rank: usize, s: &str) -> Result<Self, WordError> {
        let letters: Vec<i32> = s
            .split(',')
            .map(|t| t.trim().parse::<i32>())
            .collect::<Result<_, _>>()
            .map_err(|e| WordError::Invalid(format!("cannot parse letter: {e}")))?;
        Self::new(rank, letters)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn neg_extension(&self) -> &[usize] {
        &self.neg_extension
    }

    /// The extended index set `[-r,-1] ⊔ [1,l]` in increasing order.
    pub fn extended_indices(&self) -> Vec<i32> {
        let mut v: Vec<i32> = (-(self.rank as i32)..=-1).collect();
        v.extend(1..=self.len() as i32);
        v
    }

    fn in_extended_range(&self, k: i32) -> bool {
        (k < 0 && k >= -(self.rank as i32)) || (k > 0 && k as usize <= self.len())
    }

    /// The letter at an extended position, always reported positive for
    /// virtual positions.
    pub fn letter_at(&self, k: i32) -> Result<i32, WordError> {
        if !self.in_extended_range(k) {
            return Err(WordError::IndexOutOfRange(k));
        }
        if k < 0 {
            Ok(self.neg_extension[(-k - 1) as usize] as i32)
        } else {
            Ok(self.letters[(k - 1) as usize])
        }
    }

    pub fn letter_abs(&self, k: i32) -> Result<usize, WordError> {
        Ok(self.letter_at(k)?.unsigned_abs() as usize)
    }

    /// `ε_k`, the sign of the letter at position `k`.
    pub fn sign(&self, k: i32) -> Result<i64, WordError> {
        Ok(if self.letter_at(k)? > 0 { 1 } else { -1 })
    }

    /// `k[1]`: the next position in `[1,l]` carrying the same absolute
    /// letter, or `None` for `+∞`.
    pub fn next_occurrence(&self, k: i32) -> Result<Option<i32>, WordError> {
        let a = self.letter_abs(k)?;
        let start = if k < 0 { 1 } else { k + 1 };
        for j in start..=self.len() as i32 {
            if self.letter_abs(j)? == a {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    /// `k[d]` for `d ≥ 0`, within `[1,l]`.
    pub fn occurrence_shift(&self, k: i32, d: u32) -> Result<Option<i32>, WordError> {
        let mut cur = k;
        for _ in 0..d {
            match self.next_occurrence(cur)? {
                Some(j) => cur = j,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// The previous occurrence of the same letter within `[1,l]`.
    pub fn prev_in_word(&self, k: i32) -> Result<Option<i32>, WordError> {
        if k <= 0 || k as usize > self.len() {
            return Err(WordError::IndexOutOfRange(k));
        }
        let a = self.letter_abs(k)?;
        for j in (1..k).rev() {
            if self.letter_abs(j)? == a {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    /// The previous occurrence in the extended index set: falls back to the
    /// virtual position carrying the same letter.
    pub fn prev_extended(&self, k: i32) -> Result<Option<i32>, WordError> {
        if let Some(j) = self.prev_in_word(k)? {
            return Ok(Some(j));
        }
        let a = self.letter_abs(k)?;
        for t in 1..=self.rank {
            if self.neg_extension[t - 1] == a {
                return Ok(Some(-(t as i32)));
            }
        }
        Ok(None)
    }

    /// `k^min`: the first occurrence in `[1,l]` of the letter at `k`.
    pub fn k_min(&self, k: i32) -> Result<i32, WordError> {
        let mut cur = k;
        while let Some(j) = self.prev_in_word(cur)? {
            cur = j;
        }
        Ok(cur)
    }

    /// `k^max`: the last occurrence in `[1,l]` of the letter at `k`.
    pub fn k_max(&self, k: i32) -> Result<i32, WordError> {
        let mut cur = if k < 0 {
            match self.next_occurrence(k)? {
                Some(j) => j,
                None => return Err(WordError::IndexOutOfRange(k)),
            }
        } else {
            k
        };
        while let Some(j) = self.next_occurrence(cur)? {
            cur = j;
        }
        Ok(cur)
    }

    /// Unfrozen vertices of `[1,l]`: positions whose letter occurs again.
    pub fn unfrozen_vertices(&self) -> Vec<i32> {
        (1..=self.len() as i32)
            .filter(|k| self.next_occurrence(*k).unwrap().is_some())
            .collect()
    }

    /// Frozen vertices of the extended index set: the virtual positions and
    /// the last occurrence of every letter.
    pub fn frozen_extended(&self) -> Vec<i32> {
        let mut v: Vec<i32> = (-(self.rank as i32)..=-1).collect();
        for k in 1..=self.len() as i32 {
            if self.next_occurrence(k).unwrap().is_none() {
                v.push(k);
            }
        }
        v
    }

    /// The exchange matrix attached to the signed word. With `dotted` the
    /// rows run over `[1,l]` only; otherwise over `[-r,-1] ⊔ [1,l]`.
    /// Columns are indexed by the unfrozen vertices.
    pub fn build_b_matrix(&self, cartan: &CartanData, dotted: bool) -> ExchangeMatrix {
        assert!(
            cartan.rank() >= self.rank,
            "Cartan rank too small for the word's letters"
        );
        let row_labels: Vec<i32> = if dotted {
            (1..=self.len() as i32).collect()
        } else {
            self.extended_indices()
        };
        let col_labels = self.unfrozen_vertices();
        let entries: Vec<Vec<i64>> = row_labels
            .iter()
            .map(|&j| {
                col_labels
                    .iter()
                    .map(|&k| self.b_entry(cartan, j, k))
                    .collect()
            })
            .collect();
        ExchangeMatrix::new(row_labels, col_labels, entries)
    }

    fn b_entry(&self, cartan: &CartanData, j: i32, k: i32) -> i64 {
        if j == k {
            return 0;
        }
        let ek = self.sign(k).unwrap();
        let ej = self.sign(j).unwrap();
        let j1 = self.next_occurrence(j).unwrap();
        let k1 = self.next_occurrence(k).unwrap();
        let c = cartan.entry(self.letter_abs(j).unwrap() - 1, self.letter_abs(k).unwrap() - 1);
        let before = |a: Option<i32>, b: Option<i32>| match (a, b) {
            (Some(x), Some(y)) => x < y,
            (Some(_), None) => true, // finite < +∞
            _ => false,
        };
        if j1 == Some(k) {
            ek
        } else if k1 == Some(j) {
            -ej
        } else if j < k {
            if before(j1, k1) && j1.map(|x| k < x).unwrap_or(false) {
                // j < k < j[1] < k[1]
                let e_j1 = self.sign(j1.unwrap()).unwrap();
                if e_j1 == ek {
                    ek * c
                } else {
                    0
                }
            } else if before(k1, j1) && k1.map(|x| k < x).unwrap_or(false) {
                // j < k < k[1] < j[1]
                let e_k1 = self.sign(k1.unwrap()).unwrap();
                if ek == -e_k1 {
                    ek * c
                } else {
                    0
                }
            } else {
                0
            }
        } else {
            // k < j
            if before(k1, j1) && k1.map(|x| j < x).unwrap_or(false) {
                // k < j < k[1] < j[1]
                let e_k1 = self.sign(k1.unwrap()).unwrap();
                if e_k1 == ej {
                    -ej * c
                } else {
                    0
                }
            } else if before(j1, k1) && j1.map(|x| j < x).unwrap_or(false) {
                // k < j < j[1] < k[1]
                let e_j1 = self.sign(j1.unwrap()).unwrap();
                if ej == -e_j1 {
                    -ej * c
                } else {
                    0
                }
            } else {
                0
            }
        }
    }

    /// Negate the first letter. The dotted seed is unchanged by this move.
    pub fn left_reflection(&self) -> Result<SignedWord, WordError> {
        if self.letters.is_empty() {
            return Err(WordError::EmptyWord);
        }
        let mut letters = self.letters.clone();
        letters[0] = -letters[0];
        Ok(SignedWord {
            rank: self.rank,
            letters,
            neg_extension: self.neg_extension.clone(),
        })
    }

    /// Swap the opposite-sign letters at positions `k, k+1`. Returns the new
    /// word and, when the absolute letters agree, the mutation index `k`
    /// relating the attached seeds.
    pub fn flip(&self, k: usize) -> Result<(SignedWord, Option<i32>), WordError> {
        if k == 0 || k + 1 > self.len() {
            return Err(WordError::IndexOutOfRange(k as i32));
        }
        let a = self.letters[k - 1];
        let b = self.letters[k];
        if (a > 0) == (b > 0) {
            return Err(WordError::SameSign(k, k + 1));
        }
        let mut letters = self.letters.clone();
        letters.swap(k - 1, k);
        let word = SignedWord {
            rank: self.rank,
            letters,
            neg_extension: self.neg_extension.clone(),
        };
        let mutation = if a.abs() == b.abs() { Some(k as i32) } else { None };
        Ok((word, mutation))
    }

    /// A sequence of flip positions transforming `self` into `other`, which
    /// must be a shuffle of the same positive and negative subwords.
    pub fn flip_path(&self, other: &SignedWord) -> Result<Vec<usize>, WordError> {
        let sub = |w: &SignedWord, positive: bool| -> Vec<i32> {
            w.letters
                .iter()
                .copied()
                .filter(|l| (*l > 0) == positive)
                .collect()
        };
        if self.rank != other.rank
            || self.len() != other.len()
            || sub(self, true) != sub(other, true)
            || sub(self, false) != sub(other, false)
        {
            return Err(WordError::NotAShuffle);
        }
        let mut cur = self.clone();
        let mut path = Vec::new();
        for t in 0..self.len() {
            let target = other.letters[t];
            if cur.letters[t] == target {
                continue;
            }
            // first position >= t holding a letter of the target's sign;
            // relative orders within each sign class match, so it carries
            // exactly the target letter
            let s = (t..cur.len())
                .find(|&s| (cur.letters[s] > 0) == (target > 0))
                .ok_or(WordError::NotAShuffle)?;
            debug_assert_eq!(cur.letters[s], target);
            for pos in (t..s).rev() {
                let (next, _) = cur.flip(pos + 1)?;
                path.push(pos + 1);
                cur = next;
            }
        }
        debug_assert_eq!(cur.letters, other.letters);
        Ok(path)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.letters
                .iter()
                .map(|l| Value::Number((*l as i64).into()))
                .collect(),
        )
    }
}

impl std::fmt::Display for SignedWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iota() -> SignedWord {
        SignedWord::new(2, vec![1, 2, 1, 1, 2, 1]).unwrap()
    }

    #[test]
    fn navigation_maps() {
        let w = iota();
        assert_eq!(w.next_occurrence(1).unwrap(), Some(3));
        assert_eq!(w.next_occurrence(3).unwrap(), Some(4));
        assert_eq!(w.next_occurrence(4).unwrap(), Some(6));
        assert_eq!(w.next_occurrence(2).unwrap(), Some(5));
        assert_eq!(w.next_occurrence(5).unwrap(), None);
        assert_eq!(w.k_min(1).unwrap(), 1);
        assert_eq!(w.k_min(6).unwrap(), 1);
        assert_eq!(w.k_max(2).unwrap(), 5);
        assert_eq!(w.occurrence_shift(1, 0).unwrap(), Some(1));
        assert!(w.next_occurrence(0).is_err());
        assert!(w.next_occurrence(7).is_err());
    }

    #[test]
    fn unfrozen_sets() {
        assert_eq!(iota().unfrozen_vertices(), vec![1, 2, 3, 4]);
        let w = SignedWord::new(2, vec![1, 2]).unwrap();
        assert!(w.unfrozen_vertices().is_empty());
        let w = SignedWord::new(1, vec![1, 1]).unwrap();
        assert_eq!(w.unfrozen_vertices(), vec![1]);
    }

    #[test]
    fn b_matrix_a1_repeated() {
        let c = CartanData::preset("A1").unwrap();
        let w = SignedWord::new(1, vec![1, 1]).unwrap();
        let b = w.build_b_matrix(&c, true);
        assert_eq!(b.entry(1, 1), 0);
        assert_eq!(b.entry(2, 1), -1);
    }

    #[test]
    fn b_matrix_golden_quiver_rows() {
        let c = CartanData::preset("A2").unwrap();
        let b = iota().build_b_matrix(&c, true);
        let expect = [
            (1, vec![0, -1, 1, 0]),
            (2, vec![1, 0, 0, -1]),
            (3, vec![-1, 0, 0, 1]),
            (4, vec![0, 1, -1, 0]),
            (5, vec![0, -1, 0, 1]),
            (6, vec![0, 0, 0, -1]),
        ];
        for (row, vals) in expect {
            for (ci, k) in [1, 2, 3, 4].iter().enumerate() {
                assert_eq!(b.entry(row, *k), vals[ci], "entry ({row},{k})");
            }
        }
        let full = iota().build_b_matrix(&c, false);
        assert_eq!(full.row_labels(), &[-2, -1, 1, 2, 3, 4, 5, 6]);
        assert_eq!(full.entry(-1, 1), 1);
        assert_eq!(full.entry(-2, 2), 1);
        assert_eq!(full.entry(-2, 1), -1);
    }

    #[test]
    fn left_reflection_moves() {
        let w = SignedWord::new(2, vec![1, -2]).unwrap();
        let r = w.left_reflection().unwrap();
        assert_eq!(r.letters(), &[-1, -2]);
        assert_eq!(r.left_reflection().unwrap(), w);

        let c = CartanData::preset("A2").unwrap();
        let a = SignedWord::new(2, vec![1, 2, 1]).unwrap();
        let b = SignedWord::new(2, vec![-1, 2, 1]).unwrap();
        assert_eq!(
            a.build_b_matrix(&c, true).rows(),
            b.build_b_matrix(&c, true).rows()
        );
    }

    #[test]
    fn flips() {
        let w = SignedWord::new(2, vec![1, -2, 1]).unwrap();
        let (f, m) = w.flip(1).unwrap();
        assert_eq!(f.letters(), &[-2, 1, 1]);
        assert_eq!(m, None);

        let w = SignedWord::new(1, vec![1, -1]).unwrap();
        let (f, m) = w.flip(1).unwrap();
        assert_eq!(f.letters(), &[-1, 1]);
        assert_eq!(m, Some(1));

        let w = SignedWord::new(1, vec![1, 1]).unwrap();
        assert_eq!(w.flip(1).unwrap_err(), WordError::SameSign(1, 2));
    }

    #[test]
    fn flip_paths() {
        let w = SignedWord::new(1, vec![1, -1]).unwrap();
        let t = SignedWord::new(1, vec![-1, 1]).unwrap();
        assert_eq!(w.flip_path(&t).unwrap(), vec![1]);
        assert!(w.flip_path(&w).unwrap().is_empty());

        let w = SignedWord::new(2, vec![1, 2, -1, -2]).unwrap();
        let t = SignedWord::new(2, vec![-1, 1, -2, 2]).unwrap();
        let path = w.flip_path(&t).unwrap();
        assert_eq!(path.len(), 3);
        let mut cur = w.clone();
        for p in path {
            cur = cur.flip(p).unwrap().0;
        }
        assert_eq!(cur, t);

        let bad = SignedWord::new(2, vec![2, 1, -1, -2]).unwrap();
        assert_eq!(w.flip_path(&bad).unwrap_err(), WordError::NotAShuffle);
    }

    #[test]
    fn sign_reversal_negates_dotted_matrix() {
        // replacing every letter by its negative negates the dotted matrix
        let c = CartanData::preset("A2").unwrap();
        let words = [
            vec![1, 2, 1, 1, 2, 1],
            vec![1, -2, 1, -1, 2, 1],
            vec![-1, -2, -1],
            vec![2, 1, -1, 2, -2, 1],
        ];
        for letters in words {
            let w = SignedWord::new(2, letters.clone()).unwrap();
            let neg =
                SignedWord::new(2, letters.iter().map(|l| -l).collect::<Vec<_>>()).unwrap();
            let bw = w.build_b_matrix(&c, true);
            let bn = neg.build_b_matrix(&c, true);
            assert_eq!(w.unfrozen_vertices(), neg.unfrozen_vertices());
            for &k in bw.col_labels() {
                for &j in bw.row_labels() {
                    assert_eq!(bw.entry(j, k), -bn.entry(j, k), "at ({j},{k})");
                }
            }
        }
    }
}
