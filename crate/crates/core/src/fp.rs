//! Exact arithmetic and Gaussian elimination over the prime field Z/pZ.
//!
//! All values are reduced residues in `0..p` with `p <= 251`, so every
//! intermediate product fits comfortably in a `u64`.

pub(crate) fn add(p: u64, a: u64, b: u64) -> u64 {
    (a + b) % p
}

pub(crate) fn sub(p: u64, a: u64, b: u64) -> u64 {
    (p + a - b) % p
}

pub(crate) fn mul(p: u64, a: u64, b: u64) -> u64 {
    (a * b) % p
}

fn pow(p: u64, mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(p, acc, base);
        }
        base = mul(p, base, base);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse of a nonzero residue, via Fermat's little theorem.
pub(crate) fn inv(p: u64, a: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "zero has no inverse");
    pow(p, a, p - 2)
}

/// Incremental row-echelon span of coordinate vectors.
///
/// Rows are kept with normalized leading coefficient 1 and strictly
/// increasing pivot columns, which makes membership a single reduction pass.
#[derive(Debug, Clone)]
pub(crate) struct Span {
    p: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Span {
    pub(crate) fn new(p: u64) -> Self {
        Span { p, rows: Vec::new(), pivots: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored echelon rows and returns the residual.
    pub(crate) fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                for j in piv..v.len() {
                    v[j] = sub(self.p, v[j], mul(self.p, c, row[j]));
                }
            }
        }
        v
    }

    pub(crate) fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    /// Adds `v` to the span. Returns false when `v` was already a member.
    pub(crate) fn insert(&mut self, v: &[u64]) -> bool {
        let mut r = self.reduce(v);
        let Some(piv) = r.iter().position(|&c| c != 0) else {
            return false;
        };
        let lead = inv(self.p, r[piv]);
        for c in r.iter_mut() {
            *c = mul(self.p, *c, lead);
        }
        let at = self.pivots.iter().position(|&q| q > piv).unwrap_or(self.rows.len());
        self.rows.insert(at, r);
        self.pivots.insert(at, piv);
        true
    }
}

/// Solves `sum_i c_i * rows[i] = target` by elimination on the transposed
/// augmented system. Returns `None` when `target` is outside the span.
/// Free coefficients (dependent `rows`) are set to zero.
pub(crate) fn solve_coords(p: u64, rows: &[Vec<u64>], target: &[u64]) -> Option<Vec<u64>> {
    let k = rows.len();
    let width = target.len();
    if k == 0 {
        return target.iter().all(|&c| c == 0).then(Vec::new);
    }
    // Equation j: sum_i rows[i][j] * c_i = target[j].
    let mut aug: Vec<Vec<u64>> = (0..width)
        .map(|j| {
            let mut eq: Vec<u64> = rows.iter().map(|r| r[j]).collect();
            eq.push(target[j]);
            eq
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; k];
    let mut used_rows = 0;
    for col in 0..k {
        let Some(r) = (used_rows..width).find(|&r| aug[r][col] != 0) else {
            continue;
        };
        aug.swap(used_rows, r);
        let lead = inv(p, aug[used_rows][col]);
        for c in aug[used_rows].iter_mut() {
            *c = mul(p, *c, lead);
        }
        let pivot_row = aug[used_rows].clone();
        for (r2, eq) in aug.iter_mut().enumerate() {
            let f = eq[col];
            if r2 != used_rows && f != 0 {
                for (slot, &pv) in eq[col..].iter_mut().zip(&pivot_row[col..]) {
                    *slot = sub(p, *slot, mul(p, f, pv));
                }
            }
        }
        pivot_of_col[col] = Some(used_rows);
        used_rows += 1;
    }

    // Inconsistent when a zero row carries a nonzero right-hand side.
    for eq in aug.iter().skip(used_rows) {
        if eq[k] != 0 {
            return None;
        }
    }

    let mut coords = vec![0u64; k];
    for (col, piv) in pivot_of_col.iter().enumerate() {
        if let Some(r) = piv {
            coords[col] = aug[*r][k];
        }
    }
    Some(coords)
}

/// Row-major product of two square matrices over Z/pZ.
pub(crate) fn mat_mul(p: u64, a: &[u64], b: &[u64], d: usize) -> Vec<u64> {
    let mut out = vec![0u64; d * d];
    for i in 0..d {
        for k in 0..d {
            let f = a[i * d + k];
            if f == 0 {
                continue;
            }
            for j in 0..d {
                out[i * d + j] = add(p, out[i * d + j], mul(p, f, b[k * d + j]));
            }
        }
    }
    out
}

/// Image of a row vector under a row-acting matrix: `v * m`.
pub(crate) fn row_apply(p: u64, v: &[u64], m: &[u64], d: usize) -> Vec<u64> {
    let mut out = vec![0u64; d];
    for (i, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for j in 0..d {
            out[j] = add(p, out[j], mul(p, c, m[i * d + j]));
        }
    }
    out
}
