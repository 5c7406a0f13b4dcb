//! Square matrices over GF(2) with one `u64` word per row.

use std::fmt;

use crate::error::{param, Error, Result};

/// Largest supported side length (one machine word per row).
pub const MAX_DIM: usize = 64;

/// An `n x n` matrix over GF(2). Bit `c` of `rows[r]` is the entry in row `r`, column `c`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return param(format!("matrix size {n} outside 1..={MAX_DIM}"));
        }
        Ok(Self { n, rows: vec![0; n] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// The anti-diagonal reversal matrix (ones at `(i, n-1-i)`).
    pub fn reversal(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.set(i, n - 1 - i, true);
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let mut m = Self::zeros(rows.len())?;
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m.n {
                return param(format!("row {r} has length {}, expected {}", row.len(), m.n));
            }
            for (c, &b) in row.iter().enumerate() {
                m.set(r, c, b);
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.rows[r] >> c) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        if v {
            self.rows[r] |= 1 << c;
        } else {
            self.rows[r] &= !(1 << c);
        }
    }

    pub fn row_word(&self, r: usize) -> u64 {
        self.rows[r]
    }

    /// Matrix-vector product; bit `i` of `v` is vector entry `i`.
    pub fn mul_vec(&self, v: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (r, &row)| acc | ((((row & v).count_ones() & 1) as u64) << r))
    }

    /// Rank of an arbitrary list of row words over GF(2).
    pub fn rank_of_rows(rows: impl IntoIterator<Item = u64>) -> usize {
        // xor basis indexed by leading bit
        let mut basis = [0u64; 64];
        let mut rank = 0;
        for mut row in rows {
            while row != 0 {
                let lead = 63 - row.leading_zeros() as usize;
                if basis[lead] == 0 {
                    basis[lead] = row;
                    rank += 1;
                    break;
                }
                row ^= basis[lead];
            }
        }
        rank
    }

    pub fn rank(&self) -> usize {
        Self::rank_of_rows(self.rows.iter().copied())
    }

    /// Row-major rendering as `'0'/'1'` strings.
    pub fn to_row_strings(&self) -> Vec<String> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| if self.get(r, c) { '1' } else { '0' }).collect())
            .collect()
    }

    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|s| {
                s.as_ref()
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::Parse(format!("bad matrix character {other:?}"))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&parsed)
    }

    /// Parses the compact form `row/row/...`, e.g. `100/010/001`.
    pub fn parse_compact(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.split(['/', ',', ';']).map(str::trim).collect();
        Self::parse_rows(&rows)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix[{}]", self.to_row_strings().join("/"))
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_row_strings().join("\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_identity_and_duplicates() {
        assert_eq!(BitMatrix::identity(5).unwrap().rank(), 5);
        assert_eq!(BitMatrix::rank_of_rows([0b01, 0b01]), 1);
        assert_eq!(BitMatrix::rank_of_rows([0b011, 0b110, 0b101]), 2);
        assert_eq!(BitMatrix::rank_of_rows([]), 0);
    }

    #[test]
    fn mul_vec_matches_reversal() {
        let rev = BitMatrix::reversal(4).unwrap();
        // entry i moves to position n-1-i
        assert_eq!(rev.mul_vec(0b0001), 0b1000);
        assert_eq!(rev.mul_vec(0b0110), 0b0110);
        assert_eq!(rev.mul_vec(0b0011), 0b1100);
    }

    #[test]
    fn row_string_round_trip() {
        let m = BitMatrix::parse_compact("101/010/001").unwrap();
        assert_eq!(m.to_row_strings(), vec!["101", "010", "001"]);
        assert!(m.get(0, 2) && !m.get(1, 0));
        assert!(BitMatrix::parse_compact("10/2").is_err());
        assert!(BitMatrix::parse_compact("10/101").is_err());
    }

    #[test]
    fn size_limits() {
        assert!(BitMatrix::zeros(0).is_err());
        assert!(BitMatrix::zeros(65).is_err());
        assert_eq!(BitMatrix::identity(64).unwrap().rank(), 64);
    }
}
