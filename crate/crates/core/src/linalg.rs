//! Exact dense linear algebra over GF(p): incremental echelon forms,
//! reduced row-echelon canonical bases and kernels.

use crate::gfp::PrimeField;

/// `v += c·row` from column `start` on.
#[inline]
fn axpy_from(f: PrimeField, v: &mut [u32], c: u32, row: &[u32], start: usize) {
    let p = f.p();
    for (x, &r) in v[start..].iter_mut().zip(&row[start..]) {
        if r != 0 {
            *x = (*x + c * r) % p;
        }
    }
}

fn scale_row(f: PrimeField, v: &mut [u32], c: u32) {
    for x in v.iter_mut() {
        *x = f.mul(*x, c);
    }
}

/// Rows with pairwise distinct pivots, kept in insertion order; each row is
/// zero at the pivots of the rows inserted before it and has pivot entry 1.
#[derive(Debug, Clone)]
pub struct Echelon {
    f: PrimeField,
    width: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(f: PrimeField, width: usize) -> Self {
        Self {
            f,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; width],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.width
    }

    /// Subtracts the span from `v` in place; the residue is zero iff `v` was
    /// in the span.
    pub fn reduce(&self, v: &mut [u32]) {
        debug_assert_eq!(v.len(), self.width);
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                axpy_from(self.f, v, self.f.neg(c), row, piv);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        if self.is_full() {
            return false;
        }
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.f.inv(v[piv]).expect("nonzero pivot");
        scale_row(self.f, &mut v, inv);
        self.pivot_row[piv] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(piv);
        true
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut p = self.pivots.clone();
        p.sort_unstable();
        p
    }

    /// The unique reduced row-echelon basis of the span, sorted by pivot.
    pub fn rref(&self) -> Vec<Vec<u32>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Vec<u32>> = order.iter().map(|&i| self.rows[i].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        // rows are in pivot order; clear each pivot column in every other row
        for r in (0..rows.len()).rev() {
            let piv = pivots[r];
            // only rows with a smaller pivot can be nonzero in this column
            let (head, tail) = rows.split_at_mut(r);
            let pivot = &tail[0];
            for other in head.iter_mut() {
                let c = other[piv];
                if c != 0 {
                    axpy_from(self.f, other, self.f.neg(c), pivot, piv);
                }
            }
        }
        rows
    }
}

/// Canonical reduced row-echelon basis of the span of `vectors`.
pub fn rref_basis(f: PrimeField, width: usize, vectors: impl IntoIterator<Item = Vec<u32>>) -> Vec<Vec<u32>> {
    let mut e = Echelon::new(f, width);
    for v in vectors {
        e.insert(v);
    }
    e.rref()
}

/// Basis of `{x : M x = 0}` for the matrix whose rows are given, in the
/// canonical order of free columns.
pub fn kernel(f: PrimeField, ncols: usize, rows: impl IntoIterator<Item = Vec<u32>>) -> Vec<Vec<u32>> {
    let mut e = Echelon::new(f, ncols);
    for r in rows {
        if e.is_full() {
            break;
        }
        e.insert(r);
    }
    kernel_from_echelon(f, &e)
}

pub fn kernel_from_echelon(f: PrimeField, e: &Echelon) -> Vec<Vec<u32>> {
    let ncols = e.width();
    let rref = e.rref();
    let mut pivot_of = vec![None; ncols];
    for (r, row) in rref.iter().enumerate() {
        let piv = row.iter().position(|&x| x != 0).expect("nonzero row");
        pivot_of[piv] = Some(r);
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| pivot_of[c].is_none()) {
        let mut x = vec![0u32; ncols];
        x[free] = 1;
        for (c, r) in pivot_of.iter().enumerate() {
            if let Some(r) = r {
                x[c] = f.neg(rref[*r][free]);
            }
        }
        out.push(x);
    }
    out
}

/// Solves `M x = b` for a matrix given by columns; `None` if inconsistent.
/// Returns one solution and whether it is unique.
pub fn solve_columns(f: PrimeField, columns: &[Vec<u32>], b: &[u32]) -> Option<(Vec<u32>, bool)> {
    let n = columns.len();
    let m = b.len();
    // augmented rows [M | b]
    let rows = (0..m).map(|i| {
        let mut r: Vec<u32> = columns.iter().map(|c| c[i]).collect();
        r.push(b[i]);
        r
    });
    let mut e = Echelon::new(f, n + 1);
    for r in rows {
        e.insert(r);
    }
    let rref = e.rref();
    let mut x = vec![0u32; n];
    let mut rank = 0;
    for row in &rref {
        let piv = row.iter().position(|&v| v != 0).expect("nonzero row");
        if piv == n {
            return None;
        }
        x[piv] = row[n];
        rank += 1;
    }
    Some((x, rank == n))
}

/// Coordinates with respect to a fixed, linearly independent list of
/// vectors.
#[derive(Debug, Clone)]
pub struct Expresser {
    width: usize,
    count: usize,
    echelon: Echelon,
}

impl Expresser {
    /// `None` if the vectors are linearly dependent.
    pub fn new(f: PrimeField, width: usize, vectors: &[Vec<u32>]) -> Option<Self> {
        let count = vectors.len();
        let mut e = Echelon::new(f, width + count);
        for (a, v) in vectors.iter().enumerate() {
            let mut row = v.clone();
            row.resize(width + count, 0);
            row[width + a] = 1;
            e.insert(row);
        }
        // a pivot beyond `width` means a dependency
        if e.pivots.iter().any(|&p| p >= width) {
            return None;
        }
        Some(Self { width, count, echelon: e })
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// `c` with `v = Σ c_a vectors[a]`, or `None` outside the span.
    pub fn express(&self, v: &[u32]) -> Option<Vec<u32>> {
        let f = self.echelon.f;
        let mut row = v.to_vec();
        row.resize(self.width + self.count, 0);
        self.echelon.reduce(&mut row);
        if row[..self.width].iter().any(|&x| x != 0) {
            return None;
        }
        Some(row[self.width..].iter().map(|&x| f.neg(x)).collect())
    }
}

/// Multiplies a square matrix given as rows by a column vector.
pub fn mat_vec(f: PrimeField, rows: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
    rows.iter()
        .map(|r| r.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn rref_is_canonical() {
        let f = f3();
        let a = rref_basis(f, 3, vec![vec![1, 2, 0], vec![0, 1, 1]]);
        let b = rref_basis(f, 3, vec![vec![0, 2, 2], vec![1, 0, 1], vec![2, 1, 0]]);
        assert_eq!(a, b);
        assert_eq!(a, vec![vec![1, 0, 1], vec![0, 1, 1]]);
    }

    #[test]
    fn kernel_dimension_and_membership() {
        let f = f3();
        let rows = vec![vec![1, 1, 1, 0], vec![0, 1, 2, 1]];
        let k = kernel(f, 4, rows.clone());
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(mat_vec(f, &rows, x).iter().all(|&v| v == 0));
        }
        let e = {
            let mut e = Echelon::new(f, 4);
            for r in rows {
                e.insert(r);
            }
            e
        };
        assert!(e.contains(&[1, 2, 0, 1]));
        assert!(!e.contains(&[0, 0, 0, 1]));
    }

    #[test]
    fn expresser_round_trip() {
        let f = PrimeField::new(5).unwrap();
        let vs = vec![vec![1, 2, 0], vec![0, 1, 3]];
        let e = Expresser::new(f, 3, &vs).unwrap();
        // 2·v0 + 3·v1
        assert_eq!(e.express(&[2, 2, 4]), Some(vec![2, 3]));
        assert_eq!(e.express(&[0, 0, 1]), None);
        assert!(Expresser::new(f, 3, &[vec![1, 1, 1], vec![2, 2, 2]]).is_none());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let f = f3();
        let cols = vec![vec![1, 1], vec![1, 1]];
        assert!(solve_columns(f, &cols, &[1, 2]).is_none());
        let (x, unique) = solve_columns(f, &cols, &[2, 2]).unwrap();
        assert!(!unique);
        assert_eq!(f.add(x[0], x[1]), 2);
    }
}
