//! Diagonalization against a list of models: a ground truth on which model
//! `k` is wrong on every input from the `k`-th one onward.
//!
//! Inputs are numbered from 1 in shortlex order, so `s_1 = ""`. For input
//! `s_i`, the answer is `s_{ψ(i)}` with `ψ(i)` the smallest index whose string
//! differs from the outputs of models `1..=min(i, K)` on `s_i`.

use std::collections::BTreeSet;
use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flrm::{LookupModel, Predictor};
use crate::strings::{Alphabet, Str};

#[derive(Clone, Debug)]
pub struct DiagonalConstruction<P> {
    pub alphabet: Alphabet,
    pub models: Vec<P>,
    pub horizon: u64,
    /// `psi[i - 1] = ψ(i)`, 1-based.
    pub psi: Vec<u64>,
}

/// One CSV row; `f0_of_s_i` is the 0-based shortlex rank of `f₀(s_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalRow {
    pub i: u64,
    pub psi_i: u64,
    pub f0_of_s_i: u64,
}

impl<P: Predictor> DiagonalConstruction<P> {
    /// `s_i` for 1-based `i`.
    pub fn input(&self, i: u64) -> Str {
        self.alphabet.shortlex_string(i as u128 - 1)
    }

    /// `f₀(s_i)` for `1 ≤ i ≤ horizon`.
    pub fn f0(&self, i: u64) -> Str {
        self.alphabet
            .shortlex_string(self.psi[i as usize - 1] as u128 - 1)
    }

    pub fn rows(&self) -> Vec<DiagonalRow> {
        self.psi
            .iter()
            .enumerate()
            .map(|(idx, &psi_i)| DiagonalRow {
                i: idx as u64 + 1,
                psi_i,
                f0_of_s_i: psi_i - 1,
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.rows() {
            w.serialize(row)
                .map_err(|e| Error::Unsupported(format!("csv output failed: {e}")))?;
        }
        w.flush()
            .map_err(|e| Error::Unsupported(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

/// 1-based indices of the outputs of models `1..=min(i, K)` on `s_i`.
/// Outputs too long to index exceed every candidate and are skipped.
fn excluded<P: Predictor>(alphabet: &Alphabet, models: &[P], i: u64, s: &Str) -> BTreeSet<u128> {
    models
        .iter()
        .take(i.min(models.len() as u64) as usize)
        .filter_map(|h| alphabet.shortlex_index(&h.predict(s)).ok())
        .map(|r| r + 1)
        .collect()
}

pub fn diagonalize<P: Predictor>(
    models: Vec<P>,
    alphabet: &Alphabet,
    horizon: u64,
) -> Result<DiagonalConstruction<P>> {
    if horizon == 0 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    let psi = (1..=horizon)
        .map(|i| {
            let s = alphabet.shortlex_string(i as u128 - 1);
            let taken = excluded(alphabet, &models, i, &s);
            // At most min(i, K) candidates are excluded, so this stops
            // within min(i, K) + 1 steps.
            (1u64..)
                .find(|k| !taken.contains(&(*k as u128)))
                .expect("unbounded candidates")
        })
        .collect();
    Ok(DiagonalConstruction {
        alphabet: alphabet.clone(),
        models,
        horizon,
        psi,
    })
}

/// Checks that model `k` errs on `s_i` for every `k ≤ i ≤ horizon`, and that
/// each `ψ(i)` is the least admissible index.
pub fn verify_diagonal<P: Predictor>(c: &DiagonalConstruction<P>) -> bool {
    if c.psi.len() as u64 != c.horizon || c.psi.contains(&0) {
        return false;
    }
    (1..=c.horizon).all(|i| {
        let s = c.input(i);
        let f0 = c.f0(i);
        let k_max = i.min(c.models.len() as u64) as usize;
        let disagree = c.models[..k_max].iter().all(|h| h.predict(&s) != f0);
        let taken = excluded(&c.alphabet, &c.models, i, &s);
        let least = (1..c.psi[i as usize - 1]).all(|k| taken.contains(&(k as u128)));
        disagree && least
    })
}

/// `count` lookup models over the first `horizon` inputs, each answering a
/// random string of length at most 2 and `""` elsewhere. Short outputs make
/// collisions among models common, which exercises the exclusion logic.
pub fn random_table_models<R: Rng + ?Sized>(
    alphabet: &Alphabet,
    count: usize,
    horizon: u64,
    rng: &mut R,
) -> Vec<LookupModel> {
    let pool = alphabet.count_upto(2).expect("small count");
    (0..count)
        .map(|_| LookupModel {
            table: (0..horizon as u128)
                .map(|i| {
                    (
                        alphabet.shortlex_string(i),
                        alphabet.shortlex_string(rng.gen_range(0..pool)),
                    )
                })
                .collect(),
            fallback: Str::empty(),
        })
        .collect()
}
