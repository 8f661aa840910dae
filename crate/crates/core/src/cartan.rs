//! Finite-type Cartan matrices, weight-lattice arithmetic in fundamental
//! weight coordinates, Weyl words, reduced-word tests and root sequences.

use crate::linalg::{rat, Rat, RatMat};
use num_traits::Signed;
use serde_json::{json, Value};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CartanError {
    #[error("Cartan matrix is singular")]
    SingularCartan,
    #[error("invalid Cartan data: {0}")]
    Invalid(String),
    #[error("unknown Cartan preset {0:?}")]
    UnknownPreset(String),
    #[error("letter {0} out of range for rank {1}")]
    LetterOutOfRange(usize, usize),
}

/// A generalized Cartan matrix `C = (c_ij)` with positive symmetrizers
/// `d_i c_ij = d_j c_ji`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    c: Vec<Vec<i64>>,
    d: Vec<i64>,
}

impl CartanData {
    pub fn new(c: Vec<Vec<i64>>, d: Vec<i64>) -> Result<Self, CartanError> {
        let r = c.len();
        if d.len() != r {
            return Err(CartanError::Invalid("symmetrizer length mismatch".into()));
        }
        for (i, row) in c.iter().enumerate() {
            if row.len() != r {
                return Err(CartanError::Invalid("Cartan matrix must be square".into()));
            }
            if row[i] != 2 {
                return Err(CartanError::Invalid(format!("c[{i}][{i}] must be 2")));
            }
            for (j, v) in row.iter().enumerate() {
                if i != j && *v > 0 {
                    return Err(CartanError::Invalid(format!(
                        "off-diagonal entry c[{i}][{j}] must be nonpositive"
                    )));
                }
                if d[i] <= 0 {
                    return Err(CartanError::Invalid("symmetrizers must be positive".into()));
                }
                if d[i] * c[i][j] != d[j] * c[j][i] {
                    return Err(CartanError::Invalid(format!(
                        "d_i c_ij = d_j c_ji fails at ({i},{j})"
                    )));
                }
            }
        }
        Ok(CartanData { c, d })
    }

    /// Built-in finite-type presets covering all braid-relation arities.
    pub fn preset(name: &str) -> Result<Self, CartanError> {
        let (c, d): (Vec<Vec<i64>>, Vec<i64>) = match name {
            "A1" => (vec![vec![2]], vec![1]),
            "A2" => (vec![vec![2, -1], vec![-1, 2]], vec![1, 1]),
            "A3" => (
                vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
                vec![1, 1, 1],
            ),
            "B2" | "C2" => (vec![vec![2, -1], vec![-2, 2]], vec![2, 1]),
            "G2" => (vec![vec![2, -1], vec![-3, 2]], vec![3, 1]),
            _ => return Err(CartanError::UnknownPreset(name.to_string())),
        };
        CartanData::new(c, d)
    }

    pub fn rank(&self) -> usize {
        self.c.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.c[i][j]
    }

    pub fn symmetrizer(&self, i: usize) -> i64 {
        self.d[i]
    }

    /// `α_j` in fundamental-weight coordinates: the j-th column of `C`.
    pub fn simple_root(&self, j: usize) -> Weight {
        Weight::new((0..self.rank()).map(|i| self.c[i][j]).collect())
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        Weight::new(v)
    }

    /// Gram matrix `G` of the invariant form in fundamental-weight
    /// coordinates, determined by `⟨ϖ_i, α_j⟩ = δ_ij d_j`, i.e. `G·C = D`.
    pub fn gram(&self) -> Result<RatMat, CartanError> {
        let c = RatMat::from_int_rows(&self.c);
        let cinv = c.inverse().ok_or(CartanError::SingularCartan)?;
        let mut g = RatMat::zero(self.rank(), self.rank());
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                *g.at_mut(i, j) = rat(self.d[i]) * cinv.at(i, j);
            }
        }
        Ok(g)
    }

    /// The normalized invariant pairing `⟨a, b⟩`, exact over the rationals.
    pub fn pairing(&self, a: &Weight, b: &Weight) -> Result<Rat, CartanError> {
        let g = self.gram()?;
        let mut acc = Rat::from_integer(0.into());
        for i in 0..self.rank() {
            if a.coords[i] == 0 {
                continue;
            }
            for j in 0..self.rank() {
                acc += rat(a.coords[i]) * g.at(i, j) * rat(b.coords[j]);
            }
        }
        Ok(acc)
    }

    /// Simple reflection `s_i λ = λ - λ_i α_i`.
    pub fn reflect(&self, i: usize, lam: &Weight) -> Weight {
        let li = lam.coords[i];
        let mut out = lam.coords.clone();
        for k in 0..self.rank() {
            out[k] -= li * self.c[k][i];
        }
        Weight::new(out)
    }

    /// Apply a word left to right: `s_{k_1}(s_{k_2}(...(λ)))`.
    pub fn act_by_word(&self, w: &WeylWord, lam: &Weight) -> Weight {
        let mut out = lam.clone();
        for &i in w.letters.iter().rev() {
            out = self.reflect(i, &out);
        }
        out
    }

    /// The roots `β_k = s_{i_1} ... s_{i_{k-1}} (α_{i_k})` of a word.
    pub fn roots_of_word(&self, w: &WeylWord) -> Vec<Weight> {
        let mut out = Vec::with_capacity(w.len());
        for k in 0..w.len() {
            let prefix = WeylWord::new(w.letters[..k].to_vec());
            out.push(self.act_by_word(&prefix, &self.simple_root(w.letters[k])));
        }
        out
    }

    /// Expand a weight in simple-root coordinates, when possible.
    pub fn root_coordinates(&self, w: &Weight) -> Result<Vec<Rat>, CartanError> {
        let c = RatMat::from_int_rows(&self.c);
        let b: Vec<Rat> = w.coords.iter().map(|v| rat(*v)).collect();
        crate::linalg::solve(&c, &b).ok_or(CartanError::SingularCartan)
    }

    /// A word is reduced iff every `β_k` is a positive root.
    pub fn is_reduced(&self, w: &WeylWord) -> bool {
        for beta in self.roots_of_word(w) {
            match self.root_coordinates(&beta) {
                Ok(coords) => {
                    if coords.iter().any(|v| v.is_negative()) {
                        return false;
                    }
                }
                Err(_) => return false,
            }
        }
        true
    }

    pub fn to_json(&self) -> Value {
        json!({"C": self.c, "d": self.d})
    }

    pub fn from_json(v: &Value) -> Result<Self, CartanError> {
        let parse_rows = |val: &Value| -> Option<Vec<Vec<i64>>> {
            val.as_array()?
                .iter()
                .map(|r| r.as_array()?.iter().map(Value::as_i64).collect())
                .collect()
        };
        let c = v
            .get("C")
            .and_then(parse_rows)
            .ok_or_else(|| CartanError::Invalid("missing \"C\"".into()))?;
        let d: Vec<i64> = v
            .get("d")
            .and_then(Value::as_array)
            .and_then(|a| a.iter().map(Value::as_i64).collect())
            .ok_or_else(|| CartanError::Invalid("missing \"d\"".into()))?;
        CartanData::new(c, d)
    }
}

/// An integer weight in fundamental-weight coordinates `λ = Σ λ_i ϖ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub coords: Vec<i64>,
}

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Weight {
            coords: vec![0; rank],
        }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

/// A word in the simple reflections, letters stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylWord {
    letters: Vec<usize>,
}

impl WeylWord {
    pub fn new(letters: Vec<usize>) -> Self {
        WeylWord { letters }
    }

    /// Parse from 1-based letters.
    pub fn from_one_based(letters: &[usize]) -> Result<Self, CartanError> {
        if letters.iter().any(|l| *l == 0) {
            return Err(CartanError::Invalid("letters are 1-based".into()));
        }
        Ok(WeylWord {
            letters: letters.iter().map(|l| l - 1).collect(),
        })
    }

    pub fn empty() -> Self {
        WeylWord { letters: vec![] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn push(&mut self, i: usize) {
        self.letters.push(i);
    }

    pub fn reversed(&self) -> Self {
        WeylWord {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }
}
