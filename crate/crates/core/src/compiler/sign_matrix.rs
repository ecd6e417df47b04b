use std::fmt;

use crate::error::{Error, Result};

/// Coherence-order signs of each spin (rows) during each equal free-evolution
/// interval (columns). Every row starts at `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn from_rows<R: AsRef<[i8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.is_empty() || cols == 0 {
            return Err(Error::InvalidInput(
                "sign matrix needs at least one row and one column".to_string(),
            ));
        }
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::InvalidInput(format!(
                    "row {r} has {} columns, expected {cols}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|&&v| v != 1 && v != -1) {
                return Err(Error::InvalidInput(format!(
                    "entry {v} in row {r} is not +1 or -1"
                )));
            }
            if row[0] != 1 {
                return Err(Error::InvalidInput(format!("row {r} does not start at +1")));
            }
            entries.extend_from_slice(row);
        }
        Ok(SignMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a matrix from per-row sign-change boundaries. A boundary `k`
    /// (in `1..cols`) flips the sign from column `k` onwards.
    pub fn from_boundaries<B: AsRef<[usize]>>(cols: usize, boundaries: &[B]) -> Result<Self> {
        if boundaries.is_empty() || cols == 0 {
            return Err(Error::InvalidInput(
                "sign matrix needs at least one row and one column".to_string(),
            ));
        }
        let mut entries = Vec::with_capacity(boundaries.len() * cols);
        for (r, flips) in boundaries.iter().enumerate() {
            let mut flips = flips.as_ref().to_vec();
            flips.sort_unstable();
            if let Some(&k) = flips.iter().find(|&&k| k == 0 || k >= cols) {
                return Err(Error::InvalidInput(format!(
                    "row {r}: boundary {k} is not strictly inside 1..{cols}"
                )));
            }
            if flips.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!("row {r}: repeated boundary")));
            }
            let mut sign = 1i8;
            let mut next = flips.iter().peekable();
            for c in 0..cols {
                if next.peek() == Some(&&c) {
                    sign = -sign;
                    next.next();
                }
                entries.push(sign);
            }
        }
        Ok(SignMatrix {
            rows: boundaries.len(),
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        self.entries.chunks(self.cols).map(<[i8]>::to_vec).collect()
    }

    pub fn row_sum(&self, row: usize) -> i64 {
        self.row(row).iter().map(|&v| i64::from(v)).sum()
    }

    pub fn row_dot(&self, a: usize, b: usize) -> i64 {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(&x, &y)| i64::from(x * y))
            .sum()
    }

    /// Boundaries `k` in `1..cols` where the row's sign differs between
    /// columns `k - 1` and `k`.
    pub fn flip_boundaries(&self, row: usize) -> Vec<usize> {
        let r = self.row(row);
        (1..self.cols).filter(|&k| r[k - 1] != r[k]).collect()
    }

    /// Internal sign changes in one row; final parity pulses excluded.
    pub fn sign_changes(&self, row: usize) -> usize {
        self.row(row).windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Internal sign changes summed over all rows.
    pub fn internal_pulse_count(&self) -> usize {
        (0..self.rows).map(|r| self.sign_changes(r)).sum()
    }
}

impl fmt::Display for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.cols) {
            let line: Vec<&str> = row
                .iter()
                .map(|&v| if v > 0 { "+1" } else { "-1" })
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
