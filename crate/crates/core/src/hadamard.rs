//! Hadamard matrices of every admissible order up to 48.
//!
//! Orders are reached through a fixed routing table:
//!
//! | order            | construction                         |
//! |------------------|--------------------------------------|
//! | 1, 2, 4, 8, 16, 32 | Sylvester doubling                 |
//! | 12, 20, 24, 44, 48 | Paley I, q = 11, 19, 23, 43, 47    |
//! | 28, 36           | Paley II, q = 13, 17                 |
//! | 40               | Kronecker(H₂, H₂₀)                   |
//!
//! Every constructor returns the matrix in normalized form (first row and
//! first column all `+1`), and every check runs in exact integer arithmetic.

use std::fmt;

use crate::error::{Error, Result};

/// Largest order any constructor will produce.
pub const MAX_CONSTRUCTED_ORDER: usize = 64;

/// Largest order reachable through [`hadamard_of_order`].
pub const MAX_ADMISSIBLE_ORDER: usize = 48;

/// A normalized square `±1` matrix with `H·Hᵀ = n·I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    /// Builds a Hadamard matrix from raw rows, normalizing it.
    ///
    /// Fails when the rows are not square, contain anything but `±1`, or are
    /// not mutually orthogonal.
    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        if !is_hadamard(rows)? {
            return Err(Error::InvalidInput(
                "rows are not mutually orthogonal".to_string(),
            ));
        }
        let order = rows.len();
        let entries = rows.iter().flatten().copied().collect();
        let mut h = HadamardMatrix { order, entries };
        h.normalize();
        Ok(h)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.order + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row * self.order..(row + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks(self.order)
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        self.rows().map(<[i8]>::to_vec).collect()
    }

    /// Number of sign changes along a row.
    pub fn sign_changes(&self, row: usize) -> usize {
        self.row(row).windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Negates rows until the first column is `+1`, then columns until the
    /// first row is `+1`.
    fn normalize(&mut self) {
        let n = self.order;
        for r in 0..n {
            if self.entries[r * n] < 0 {
                for c in 0..n {
                    self.entries[r * n + c] = -self.entries[r * n + c];
                }
            }
        }
        for c in 0..n {
            if self.entries[c] < 0 {
                for r in 0..n {
                    self.entries[r * n + c] = -self.entries[r * n + c];
                }
            }
        }
    }

    fn from_fn(order: usize, f: impl Fn(usize, usize) -> i8) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for r in 0..order {
            for c in 0..order {
                entries.push(f(r, c));
            }
        }
        let mut h = HadamardMatrix { order, entries };
        h.normalize();
        debug_assert!(h.is_valid());
        h
    }

    fn is_valid(&self) -> bool {
        is_hadamard(&self.to_rows()).unwrap_or(false)
    }
}

impl fmt::Display for HadamardMatrix {
    /// One line per row, `+` for `+1` and `-` for `-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: String = row.iter().map(|&v| if v > 0 { '+' } else { '-' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Sylvester matrix of order `2^k`, for `k <= 6`.
pub fn sylvester(k: u32) -> Result<HadamardMatrix> {
    if k > 6 {
        return Err(Error::SizeLimit {
            what: "Sylvester exponent",
            value: k as usize,
            max: 6,
        });
    }
    let h1 = HadamardMatrix {
        order: 1,
        entries: vec![1],
    };
    let h2 = HadamardMatrix {
        order: 2,
        entries: vec![1, 1, 1, -1],
    };
    let mut h = h1;
    for _ in 0..k {
        h = kronecker(&h2, &h)?;
    }
    Ok(h)
}

/// Paley type I construction of order `q + 1` for a prime `q ≡ 3 (mod 4)`.
pub fn paley_i(q: usize) -> Result<HadamardMatrix> {
    if !is_prime(q) || q % 4 != 3 {
        return Err(Error::InvalidParameter(format!(
            "Paley I needs a prime q with q = 3 (mod 4), got {q}"
        )));
    }
    let order = q + 1;
    check_order(order)?;
    let chi = legendre_table(q);
    // H = I + S with S = [[0, 1ᵀ], [-1, Q]], Q[i][j] = χ(j - i).
    Ok(HadamardMatrix::from_fn(order, |r, c| {
        let s = match (r, c) {
            (0, 0) => 0,
            (0, _) => 1,
            (_, 0) => -1,
            (r, c) => chi[(c + q - r) % q],
        };
        if r == c {
            s + 1
        } else {
            s
        }
    }))
}

/// Paley type II construction of order `2(q + 1)` for a prime `q ≡ 1 (mod 4)`.
pub fn paley_ii(q: usize) -> Result<HadamardMatrix> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(Error::InvalidParameter(format!(
            "Paley II needs a prime q with q = 1 (mod 4), got {q}"
        )));
    }
    let half = q + 1;
    check_order(2 * half)?;
    let chi = legendre_table(q);
    // Symmetric conference matrix C = [[0, 1ᵀ], [1, Q]].
    let conf = |r: usize, c: usize| -> i8 {
        match (r, c) {
            (0, 0) => 0,
            (0, _) | (_, 0) => 1,
            (r, c) => chi[(c + q - r) % q],
        }
    };
    // H = [[C + I, C - I], [C - I, -C - I]]
    Ok(HadamardMatrix::from_fn(2 * half, |r, c| {
        let (br, bc) = (r / half, c / half);
        let (i, j) = (r % half, c % half);
        let e = conf(i, j);
        let d = i8::from(i == j);
        match (br, bc) {
            (0, 0) => e + d,
            (1, 1) => -e - d,
            _ => e - d,
        }
    }))
}

/// Kronecker product `a ⊗ b`, re-normalized.
pub fn kronecker(a: &HadamardMatrix, b: &HadamardMatrix) -> Result<HadamardMatrix> {
    let order = a.order * b.order;
    check_order(order)?;
    let nb = b.order;
    Ok(HadamardMatrix::from_fn(order, |r, c| {
        a.get(r / nb, c / nb) * b.get(r % nb, c % nb)
    }))
}

/// Whether a Hadamard matrix of order `n` is reachable via the routing table.
pub fn is_admissible_order(n: usize) -> bool {
    n == 1 || n == 2 || (n.is_multiple_of(4) && (4..=MAX_ADMISSIBLE_ORDER).contains(&n))
}

/// Smallest admissible order that is at least `n`.
pub fn smallest_admissible_order(n: usize) -> Option<usize> {
    (n.max(1)..=MAX_ADMISSIBLE_ORDER).find(|&m| is_admissible_order(m))
}

/// The construction [`hadamard_of_order`] uses for a given order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Sylvester {
        exponent: u32,
    },
    PaleyI {
        q: usize,
    },
    PaleyII {
        q: usize,
    },
    /// `kronecker(H₂, hadamard_of_order(half))`
    Doubling {
        half: usize,
    },
}

/// Routing decision for order `n`.
pub fn route(n: usize) -> Result<Construction> {
    if !is_admissible_order(n) {
        return Err(Error::NoHadamardOrder {
            requested: n,
            smallest_admissible: smallest_admissible_order(n),
        });
    }
    if n.is_power_of_two() {
        return Ok(Construction::Sylvester {
            exponent: n.trailing_zeros(),
        });
    }
    let q = n - 1;
    if is_prime(q) && q % 4 == 3 {
        return Ok(Construction::PaleyI { q });
    }
    let q = n / 2 - 1;
    if is_prime(q) && q % 4 == 1 {
        return Ok(Construction::PaleyII { q });
    }
    Ok(Construction::Doubling { half: n / 2 })
}

/// Normalized Hadamard matrix of order `n ∈ {1, 2, 4, 8, …, 48}`.
pub fn hadamard_of_order(n: usize) -> Result<HadamardMatrix> {
    match route(n)? {
        Construction::Sylvester { exponent } => sylvester(exponent),
        Construction::PaleyI { q } => paley_i(q),
        Construction::PaleyII { q } => paley_ii(q),
        Construction::Doubling { half } => kronecker(&sylvester(1)?, &hadamard_of_order(half)?),
    }
}

/// True iff `m·mᵀ = n·I`.
///
/// The input must be square with `±1` entries; anything else is an
/// invalid-input error rather than `false`.
pub fn is_hadamard<R: AsRef<[i8]>>(m: &[R]) -> Result<bool> {
    let n = m.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".to_string()));
    }
    for (r, row) in m.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != n {
            return Err(Error::InvalidInput(format!(
                "matrix is not square: row {r} has {} entries, expected {n}",
                row.len()
            )));
        }
        if let Some(v) = row.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidInput(format!(
                "entry {v} in row {r} is not +1 or -1"
            )));
        }
    }
    for i in 0..n {
        for j in i..n {
            let dot: i64 = m[i]
                .as_ref()
                .iter()
                .zip(m[j].as_ref())
                .map(|(&a, &b)| i64::from(a) * i64::from(b))
                .sum();
            let expected = if i == j { n as i64 } else { 0 };
            if dot != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_CONSTRUCTED_ORDER {
        return Err(Error::SizeLimit {
            what: "Hadamard order",
            value: order,
            max: MAX_CONSTRUCTED_ORDER,
        });
    }
    Ok(())
}

fn is_prime(q: usize) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// Legendre symbol χ(x) for x in 0..q.
fn legendre_table(q: usize) -> Vec<i8> {
    let mut chi = vec![-1i8; q];
    chi[0] = 0;
    for x in 1..q {
        chi[(x * x) % q] = 1;
    }
    chi
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct `H·Hᵀ` product, written out independently of `is_hadamard`.
    fn gram(h: &HadamardMatrix) -> Vec<Vec<i64>> {
        let n = h.order();
        let mut g = vec![vec![0i64; n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for k in 0..n {
                    *cell += i64::from(h.get(i, k)) * i64::from(h.get(j, k));
                }
            }
        }
        g
    }

    fn assert_gram_is_scaled_identity(h: &HadamardMatrix) {
        let n = h.order();
        for (i, row) in gram(h).iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(
                    v,
                    if i == j { n as i64 } else { 0 },
                    "order {n} at ({i},{j})"
                );
            }
        }
    }

    fn assert_normalized(h: &HadamardMatrix) {
        for k in 0..h.order() {
            assert_eq!(h.get(0, k), 1);
            assert_eq!(h.get(k, 0), 1);
        }
    }

    const H4: [[i8; 4]; 4] = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]];

    #[test]
    fn sylvester_small_orders() {
        assert_eq!(sylvester(0).unwrap().to_rows(), vec![vec![1]]);
        assert_eq!(
            sylvester(1).unwrap().to_rows(),
            vec![vec![1, 1], vec![1, -1]]
        );
        let h4: Vec<Vec<i8>> = H4.iter().map(|r| r.to_vec()).collect();
        assert_eq!(sylvester(2).unwrap().to_rows(), h4);
        assert_eq!(sylvester(6).unwrap().order(), 64);
        assert!(matches!(sylvester(7), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn sylvester_is_recursive_kronecker() {
        let h2 = sylvester(1).unwrap();
        for k in 1..=6 {
            assert_eq!(
                sylvester(k).unwrap(),
                kronecker(&h2, &sylvester(k - 1).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn paley_i_orders() {
        for q in [3, 11, 19, 23, 43, 47] {
            let h = paley_i(q).unwrap();
            assert_eq!(h.order(), q + 1);
            assert_gram_is_scaled_identity(&h);
            assert_normalized(&h);
        }
        assert!(matches!(paley_i(5), Err(Error::InvalidParameter(_))));
        assert!(matches!(paley_i(15), Err(Error::InvalidParameter(_))));
        assert!(matches!(paley_i(67), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn paley_ii_orders() {
        for q in [5, 13, 17, 29] {
            let h = paley_ii(q).unwrap();
            assert_eq!(h.order(), 2 * (q + 1));
            assert_gram_is_scaled_identity(&h);
            assert_normalized(&h);
        }
        assert!(matches!(paley_ii(7), Err(Error::InvalidParameter(_))));
        assert!(matches!(paley_ii(9), Err(Error::InvalidParameter(_))));
        assert!(matches!(paley_ii(37), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn kronecker_identity_and_mixed() {
        let one = sylvester(0).unwrap();
        let h12 = paley_i(11).unwrap();
        assert_eq!(kronecker(&one, &h12).unwrap(), h12);
        let h40 = kronecker(&sylvester(1).unwrap(), &paley_i(19).unwrap()).unwrap();
        assert_eq!(h40.order(), 40);
        assert_gram_is_scaled_identity(&h40);
        assert!(matches!(
            kronecker(&sylvester(3).unwrap(), &paley_i(11).unwrap()),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn routing_table() {
        use Construction::*;
        let expected = [
            (1, Sylvester { exponent: 0 }),
            (2, Sylvester { exponent: 1 }),
            (4, Sylvester { exponent: 2 }),
            (8, Sylvester { exponent: 3 }),
            (12, PaleyI { q: 11 }),
            (16, Sylvester { exponent: 4 }),
            (20, PaleyI { q: 19 }),
            (24, PaleyI { q: 23 }),
            (28, PaleyII { q: 13 }),
            (32, Sylvester { exponent: 5 }),
            (36, PaleyII { q: 17 }),
            (40, Doubling { half: 20 }),
            (44, PaleyI { q: 43 }),
            (48, PaleyI { q: 47 }),
        ];
        for (n, c) in expected {
            assert_eq!(route(n).unwrap(), c, "order {n}");
        }
    }

    #[test]
    fn every_admissible_order_is_valid() {
        for n in (1..=MAX_ADMISSIBLE_ORDER).filter(|&n| is_admissible_order(n)) {
            let h = hadamard_of_order(n).unwrap();
            assert_eq!(h.order(), n);
            assert_gram_is_scaled_identity(&h);
            assert_normalized(&h);
            assert!(is_hadamard(&h.to_rows()).unwrap());
            for r in 1..n {
                assert_eq!(h.row(r).iter().map(|&v| i32::from(v)).sum::<i32>(), 0);
            }
        }
    }

    #[test]
    fn non_admissible_orders_name_the_next_one() {
        assert_eq!(
            hadamard_of_order(3),
            Err(Error::NoHadamardOrder {
                requested: 3,
                smallest_admissible: Some(4)
            })
        );
        assert_eq!(
            hadamard_of_order(0).unwrap_err(),
            Error::NoHadamardOrder {
                requested: 0,
                smallest_admissible: Some(1)
            }
        );
        assert_eq!(
            hadamard_of_order(45).unwrap_err(),
            Error::NoHadamardOrder {
                requested: 45,
                smallest_admissible: Some(48)
            }
        );
        assert_eq!(
            hadamard_of_order(49).unwrap_err(),
            Error::NoHadamardOrder {
                requested: 49,
                smallest_admissible: None
            }
        );
        let msg = hadamard_of_order(3).unwrap_err().to_string();
        assert!(msg.contains('4'), "{msg}");
    }

    #[test]
    fn is_hadamard_inputs() {
        assert!(is_hadamard(&H4).unwrap());
        assert!(!is_hadamard(&[[1, 1], [1, 1]]).unwrap());
        let m4 = [
            [1, 1, 1, 1, 1, 1, 1, 1],
            [1, 1, 1, 1, -1, -1, -1, -1],
            [1, 1, -1, -1, -1, -1, 1, 1],
            [1, -1, -1, 1, 1, -1, -1, 1],
        ];
        assert!(matches!(is_hadamard(&m4), Err(Error::InvalidInput(_))));
        assert!(matches!(
            is_hadamard(&[[1, 0], [1, -1]]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn from_rows_normalizes() {
        let h = HadamardMatrix::from_rows(&[vec![-1, 1], vec![1, 1]]).unwrap();
        assert_eq!(h.to_rows(), vec![vec![1, 1], vec![1, -1]]);
    }

    #[test]
    fn display_uses_plus_minus() {
        assert_eq!(sylvester(1).unwrap().to_string(), "++\n+-\n");
    }

    #[test]
    fn sylvester_8_sign_changes_sum_to_28() {
        let h = sylvester(3).unwrap();
        let counts: Vec<usize> = (0..8).map(|r| h.sign_changes(r)).collect();
        assert_eq!(counts, vec![0, 7, 3, 4, 1, 6, 2, 5]);
        assert_eq!(counts.iter().sum::<usize>(), 28);
    }
}
