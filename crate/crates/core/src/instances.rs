//! Constructors, validators, enumerators and text codecs for the two
//! shipped algebras.
//!
//! The text form of an endomorphism is a whitespace-separated image list
//! for finite sets (`"1 1 2 2"`), and semicolon-separated rows of reduced
//! residues for matrices (`"0 1; 0 0"`). `parse` and `format` round-trip.

use crate::algebra::AlgebraDescriptor;
use crate::endo::Endomorphism;
use crate::error::{Error, Result};

/// Enumeration refuses when the total endomorphism count is not below this.
pub const ENUMERATION_CAP: u64 = 1 << 24;

/// Parses the textual form of an endomorphism of `alg`.
///
/// Error positions are 0-based token indices, counted row by row for the
/// matrix form.
pub fn parse_endo(alg: AlgebraDescriptor, text: &str) -> Result<Endomorphism> {
    match alg {
        AlgebraDescriptor::FiniteSet { n } => {
            let mut table = Vec::new();
            for (position, tok) in text.split_whitespace().enumerate() {
                if position >= n as usize {
                    return Err(Error::Malformed {
                        position,
                        reason: format!("expected exactly {n} image points"),
                    });
                }
                let v: u64 = tok.parse().map_err(|_| Error::Malformed {
                    position,
                    reason: format!("`{tok}` is not a nonnegative integer"),
                })?;
                if v >= n {
                    return Err(Error::Malformed {
                        position,
                        reason: format!("point {v} out of range for n={n}"),
                    });
                }
                table.push(v);
            }
            if table.len() != n as usize {
                return Err(Error::Malformed {
                    position: table.len(),
                    reason: format!("expected {n} image points, found {}", table.len()),
                });
            }
            Endomorphism::from_table(alg, table)
        }
        AlgebraDescriptor::VectorSpace { p, d } => {
            let rows: Vec<&str> = text.split(';').collect();
            if rows.len() != d {
                // the token index at which the shape stops making sense
                let position = if rows.len() > d { d * d } else { rows.len() * d };
                return Err(Error::Malformed {
                    position,
                    reason: format!("expected {d} rows, found {}", rows.len()),
                });
            }
            let mut entries = Vec::with_capacity(d * d);
            for (r, row) in rows.iter().enumerate() {
                let toks: Vec<&str> = row.split_whitespace().collect();
                if toks.len() != d {
                    return Err(Error::Malformed {
                        position: r * d + toks.len().min(d),
                        reason: format!("row {r} has {} entries, expected {d}", toks.len()),
                    });
                }
                for (c, tok) in toks.iter().enumerate() {
                    let position = r * d + c;
                    let v: u64 = tok.parse().map_err(|_| Error::Malformed {
                        position,
                        reason: format!("`{tok}` is not a nonnegative integer"),
                    })?;
                    if v >= p {
                        return Err(Error::Malformed {
                            position,
                            reason: format!("{v} is not a reduced residue mod {p}"),
                        });
                    }
                    entries.push(v);
                }
            }
            Endomorphism::from_matrix(alg, entries)
        }
    }
}

/// Canonical text form; `parse_endo(alg, &format_endo(a)) == a`.
pub fn format_endo(a: &Endomorphism) -> String {
    if let Some(table) = a.table() {
        return table.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    }
    let entries = a.matrix().expect("endomorphism is a table or a matrix");
    let AlgebraDescriptor::VectorSpace { d, .. } = a.algebra() else { unreachable!() };
    entries
        .chunks(d)
        .map(|row| row.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

/// True when the rank of `a` is strictly below the rank of its algebra;
/// on these finite algebras that is exactly "not an automorphism".
pub fn is_singular(a: &Endomorphism) -> bool {
    a.rank() < a.algebra().rank()
}

/// Total number of endomorphisms (`n^n`, or `p^(d*d)`), saturating.
pub fn endomorphism_count(alg: AlgebraDescriptor) -> u128 {
    let (base, exp) = match alg {
        AlgebraDescriptor::FiniteSet { n } => (n as u128, n as u32),
        AlgebraDescriptor::VectorSpace { p, d } => (p as u128, (d * d) as u32),
    };
    let mut count: u128 = 1;
    for _ in 0..exp {
        count = count.saturating_mul(base);
    }
    count
}

/// Streams every endomorphism of `alg` exactly once, in ascending order of
/// its action tuple, optionally filtered to the singular ones.
pub fn enumerate_endomorphisms(
    alg: AlgebraDescriptor,
    singular_only: bool,
) -> Result<EndomorphismIter> {
    let count = endomorphism_count(alg);
    if count >= ENUMERATION_CAP as u128 {
        return Err(Error::EnumerationCap { count, cap: ENUMERATION_CAP });
    }
    let (radix, positions) = match alg {
        AlgebraDescriptor::FiniteSet { n } => (n, n as usize),
        AlgebraDescriptor::VectorSpace { p, d } => (p, d * d),
    };
    Ok(EndomorphismIter {
        alg,
        radix,
        digits: vec![0; positions],
        singular_only,
        exhausted: false,
    })
}

#[derive(Debug)]
pub struct EndomorphismIter {
    alg: AlgebraDescriptor,
    radix: u64,
    digits: Vec<u64>,
    singular_only: bool,
    exhausted: bool,
}

impl EndomorphismIter {
    fn advance(&mut self) {
        for slot in self.digits.iter_mut().rev() {
            *slot += 1;
            if *slot < self.radix {
                return;
            }
            *slot = 0;
        }
        self.exhausted = true;
    }
}

impl Iterator for EndomorphismIter {
    type Item = Endomorphism;

    fn next(&mut self) -> Option<Endomorphism> {
        while !self.exhausted {
            let endo = match self.alg {
                AlgebraDescriptor::FiniteSet { .. } => {
                    Endomorphism::from_table(self.alg, self.digits.clone())
                }
                AlgebraDescriptor::VectorSpace { .. } => {
                    Endomorphism::from_matrix(self.alg, self.digits.clone())
                }
            }
            .expect("odometer digits are in range");
            self.advance();
            if !self.singular_only || is_singular(&endo) {
                return Some(endo);
            }
        }
        None
    }
}
