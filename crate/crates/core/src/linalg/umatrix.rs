//! Dense matrices over F2[U] and their Smith normal form.

use std::fmt;

use super::f2::F2Matrix;
use super::upoly::UPoly;

#[derive(Clone, PartialEq, Eq)]
pub struct UMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<UPoly>>,
}

impl UMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        UMatrix {
            rows,
            cols,
            data: vec![vec![UPoly::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = UPoly::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<UPoly>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        UMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Lifts an F2 matrix to degree-zero entries.
    pub fn from_f2(m: &F2Matrix) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in m.row(i).ones() {
                out.data[i][j] = UPoly::one();
            }
        }
        out
    }

    /// Sets U = 0.
    pub fn at_u_zero(&self) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.data[i][j].coeff(0) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &UPoly {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: UPoly) {
        self.data[i][j] = p;
    }

    pub fn add_to(&mut self, i: usize, j: usize, p: &UPoly) {
        self.data[i][j] += p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(UPoly::is_zero)
    }

    /// Nonzero entries as (row, col, value).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &UPoly)> {
        self.data.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(move |(j, p)| (i, j, p))
        })
    }

    pub fn mul(&self, other: &UMatrix) -> UMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = UMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[UPoly]) -> Vec<UPoly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = UPoly::zero();
                for (a, b) in self.data[i].iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &UMatrix) -> UMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (ra, rb) in out.data.iter_mut().zip(&other.data) {
            for (a, b) in ra.iter_mut().zip(rb) {
                *a += b;
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<UPoly> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn sub_matrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> UMatrix {
        let data = self.data[rows]
            .iter()
            .map(|r| r[cols.clone()].to_vec())
            .collect::<Vec<_>>();
        let ncols = cols.len();
        UMatrix {
            rows: data.len(),
            cols: ncols,
            data,
        }
    }

    // row t += c * row i
    fn row_axpy(&mut self, t: usize, c: &UPoly, i: usize) {
        for j in 0..self.cols {
            if !self.data[i][j].is_zero() {
                let p = c * &self.data[i][j];
                self.data[t][j] += &p;
            }
        }
    }

    // col t += c * col j
    fn col_axpy(&mut self, t: usize, c: &UPoly, j: usize) {
        for r in self.data.iter_mut() {
            if !r[j].is_zero() {
                let p = c * &r[j];
                r[t] += &p;
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in self.data.iter_mut() {
            r.swap(a, b);
        }
    }
}

impl fmt::Debug for UMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "UMatrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(|p| p.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `s = p · m · q`, with `p_inv`, `q_inv` the inverses of `p`, `q`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: UMatrix,
    pub p: UMatrix,
    pub p_inv: UMatrix,
    pub q: UMatrix,
    pub q_inv: UMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries d₁ | d₂ | ….
    pub fn invariant_factors(&self) -> Vec<UPoly> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

struct Tracker {
    a: UMatrix,
    p: UMatrix,
    p_inv: UMatrix,
    q: UMatrix,
    q_inv: UMatrix,
}

impl Tracker {
    fn row_axpy(&mut self, t: usize, c: &UPoly, i: usize) {
        self.a.row_axpy(t, c, i);
        self.p.row_axpy(t, c, i);
        // P⁻¹ ← P⁻¹·E⁻¹, and E⁻¹ = E in characteristic two
        self.p_inv.col_axpy(i, c, t);
    }

    fn col_axpy(&mut self, t: usize, c: &UPoly, j: usize) {
        self.a.col_axpy(t, c, j);
        self.q.col_axpy(t, c, j);
        self.q_inv.row_axpy(j, c, t);
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        if x != y {
            self.a.swap_rows(x, y);
            self.p.swap_rows(x, y);
            self.p_inv.swap_cols(x, y);
        }
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        if x != y {
            self.a.swap_cols(x, y);
            self.q.swap_cols(x, y);
            self.q_inv.swap_rows(x, y);
        }
    }

    /// Minimal-degree nonzero entry of the lower-right block starting at t,
    /// first in (row, col) order among ties.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                if let Some(d) = self.a.data[i][j].degree() {
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

pub fn smith_normal_form(m: &UMatrix) -> Smith {
    let mut tr = Tracker {
        a: m.clone(),
        p: UMatrix::identity(m.rows),
        p_inv: UMatrix::identity(m.rows),
        q: UMatrix::identity(m.cols),
        q_inv: UMatrix::identity(m.cols),
    };
    let mut t = 0;
    while t < m.rows.min(m.cols) {
        let Some((pi, pj)) = tr.pivot(t) else { break };
        tr.swap_rows(t, pi);
        tr.swap_cols(t, pj);
        loop {
            let piv = tr.a.data[t][t].clone();
            let mut clean = true;
            for i in t + 1..tr.a.rows {
                if tr.a.data[i][t].is_zero() {
                    continue;
                }
                let (q, r) = tr.a.data[i][t].divrem(&piv);
                tr.row_axpy(i, &q, t);
                if !r.is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..tr.a.cols {
                if tr.a.data[t][j].is_zero() {
                    continue;
                }
                let (q, r) = tr.a.data[t][j].divrem(&piv);
                tr.col_axpy(j, &q, t);
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a remainder of smaller degree now sits in row or column t
                let (pi, pj) = tr.pivot(t).expect("nonzero remainder present");
                tr.swap_rows(t, pi);
                tr.swap_cols(t, pj);
                continue;
            }
            // row and column t are clear; enforce divisibility of the rest
            let offender = (t + 1..tr.a.rows).find(|&i| {
                (t + 1..tr.a.cols).any(|j| !piv.divides(&tr.a.data[i][j]))
            });
            match offender {
                Some(i) => tr.row_axpy(t, &UPoly::one(), i),
                None => break,
            }
        }
        t += 1;
    }
    Smith {
        rank: t,
        s: tr.a,
        p: tr.p,
        p_inv: tr.p_inv,
        q: tr.q,
        q_inv: tr.q_inv,
    }
}
