//! Homology of finite chain complexes over F2 and over F2[U].

use serde::Serialize;

use super::f2::{BitVec, Echelon, F2Matrix};
use super::umatrix::{smith_normal_form, Smith, UMatrix};
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// Homology of a finite complex. Over F2 only `free_rank` and the
/// representatives are meaningful.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub free_rank: usize,
    /// k for each summand F2[U]/U^k.
    pub torsion_orders: Vec<u32>,
    /// Invariant factors that are not powers of U.
    pub other_torsion: Vec<UPoly>,
    /// Cycles spanning a complement of the (saturated) boundaries.
    #[serde(skip)]
    pub representatives: Vec<Vec<UPoly>>,
}

/// Homology at the middle of `d_prev` then `d`. Matrices act on column
/// vectors, so `d_prev` has as many rows as `d` has columns.
pub fn f2_homology(d: &F2Matrix, d_prev: Option<&F2Matrix>) -> Result<(usize, Vec<BitVec>)> {
    let n = d.cols();
    let mut image = Echelon::new();
    if let Some(dp) = d_prev {
        if dp.rows() != n {
            return Err(Error::Invalid(format!(
                "shape mismatch: {}x{} after {}x{}",
                d.rows(),
                d.cols(),
                dp.rows(),
                dp.cols()
            )));
        }
        if !d.mul(dp).is_zero() {
            return Err(Error::Invalid("not a complex: composite differential is nonzero".into()));
        }
        for c in dp.columns() {
            image.insert(&c);
        }
    }
    let mut reps = Echelon::new();
    for k in d.kernel_basis() {
        let r = image.reduce(&k);
        if !r.is_zero() {
            reps.insert(&r);
        }
    }
    let vecs = reps.vectors();
    Ok((vecs.len(), vecs))
}

/// Homology of an ungraded complex (C, d) over F2 with d² = 0.
pub fn f2_self_homology(d: &F2Matrix) -> Result<(usize, Vec<BitVec>)> {
    f2_homology(d, Some(d))
}

fn check_square_complex(d: &UMatrix) -> Result<()> {
    if d.rows() != d.cols() {
        return Err(Error::Invalid("differential must be square".into()));
    }
    if !d.mul(d).is_zero() {
        return Err(Error::Invalid("not a complex: d∘d is nonzero".into()));
    }
    Ok(())
}

/// Homology over F2[U] of an ungraded free complex with square differential.
pub fn u_homology(d: &UMatrix) -> Result<HomologySummary> {
    check_square_complex(d)?;
    let n = d.cols();
    let snf = smith_normal_form(d);
    let r = snf.rank;
    let mut torsion_orders = Vec::new();
    let mut other_torsion = Vec::new();
    for f in snf.invariant_factors() {
        if f.is_one() {
            continue;
        }
        match f.as_monomial() {
            Some(k) => torsion_orders.push(k),
            None => other_torsion.push(f),
        }
    }
    // Coordinates of the saturated image, in the kernel basis {Q e_j : j ≥ r}.
    let coords = snf.q_inv.mul(&snf.p_inv);
    for i in 0..r {
        for j in 0..r {
            if !coords.get(j, i).is_zero() {
                return Err(Error::Internal("saturated image leaves the kernel".into()));
            }
        }
    }
    let m = coords.sub_matrix(r..n, 0..r);
    let inner = smith_normal_form(&m);
    if inner.invariant_factors().iter().any(|f| !f.is_one()) {
        return Err(Error::Internal("saturated image is not a direct summand".into()));
    }
    let kernel = snf.q.sub_matrix(0..n, r..n);
    let basis = kernel.mul(&inner.p_inv);
    let representatives = (r..n - r).map(|j| basis.column(j)).collect();
    Ok(HomologySummary {
        free_rank: n - 2 * r,
        torsion_orders,
        other_torsion,
        representatives,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TorsionOrder {
    Finite(u32),
    Infinite,
}

fn smith_coords(d: &UMatrix, z: &[UPoly]) -> Result<(Smith, Vec<UPoly>)> {
    check_square_complex(d)?;
    if z.len() != d.cols() {
        return Err(Error::Invalid("vector length does not match the complex".into()));
    }
    if d.mul_vec(z).iter().any(|p| !p.is_zero()) {
        return Err(Error::Invalid("element is not a cycle".into()));
    }
    let snf = smith_normal_form(d);
    let zp = snf.p.mul_vec(z);
    Ok((snf, zp))
}

/// Least k with U^k·[z] = 0 in homology.
pub fn u_torsion_order(z: &[UPoly], d: &UMatrix) -> Result<TorsionOrder> {
    let (snf, zp) = smith_coords(d, z)?;
    if zp[snf.rank..].iter().any(|p| !p.is_zero()) {
        return Ok(TorsionOrder::Infinite);
    }
    let mut k = 0;
    for (i, zi) in zp[..snf.rank].iter().enumerate() {
        if zi.is_zero() {
            continue;
        }
        let s = snf.s.get(i, i);
        let g = s.divrem(&UPoly::gcd(s, zi)).0;
        match g.as_monomial() {
            Some(m) => k = k.max(m),
            None => return Ok(TorsionOrder::Infinite),
        }
    }
    Ok(TorsionOrder::Finite(k))
}

/// Some w with d·w = z, if z is a boundary.
pub fn solve_in_image(z: &[UPoly], d: &UMatrix) -> Result<Option<Vec<UPoly>>> {
    let (snf, zp) = smith_coords(d, z)?;
    if zp[snf.rank..].iter().any(|p| !p.is_zero()) {
        return Ok(None);
    }
    let mut y = vec![UPoly::zero(); d.cols()];
    for i in 0..snf.rank {
        let (q, r) = zp[i].divrem(snf.s.get(i, i));
        if !r.is_zero() {
            return Ok(None);
        }
        y[i] = q;
    }
    Ok(Some(snf.q.mul_vec(&y)))
}

pub fn in_image(z: &[UPoly], d: &UMatrix) -> Result<bool> {
    Ok(solve_in_image(z, d)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2(rows: usize, cols: usize, ones: &[(usize, usize)]) -> F2Matrix {
        let mut m = F2Matrix::zeros(rows, cols);
        for &(i, j) in ones {
            m.set(i, j, true);
        }
        m
    }

    #[test]
    fn f2_examples() {
        let (r, _) = f2_self_homology(&F2Matrix::zeros(3, 3)).unwrap();
        assert_eq!(r, 3);
        // basis x, y with dx = y
        let (r, _) = f2_self_homology(&f2(2, 2, &[(1, 0)])).unwrap();
        assert_eq!(r, 0);
    }

    #[test]
    fn whitehead_style_complex() {
        // basis c, c', b, b', d ; ∂c' = c, ∂b' = b + d
        let d = f2(5, 5, &[(0, 1), (2, 3), (4, 3)]);
        let (r, reps) = f2_self_homology(&d).unwrap();
        assert_eq!(r, 1);
        assert_eq!(reps[0], BitVec::from_indices(5, [2]));
    }

    #[test]
    fn rejects_non_complex() {
        let d = f2(3, 3, &[(1, 0), (2, 1)]);
        assert!(f2_self_homology(&d).is_err());
    }

    #[test]
    fn torsion_examples() {
        // basis z, w with ∂w = U²z
        let mut d = UMatrix::zeros(2, 2);
        d.set(0, 1, UPoly::monomial(2));
        let z = vec![UPoly::one(), UPoly::zero()];
        assert_eq!(u_torsion_order(&z, &d).unwrap(), TorsionOrder::Finite(2));
        let h = u_homology(&d).unwrap();
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.torsion_orders, vec![2]);

        let zero = UMatrix::zeros(1, 1);
        assert_eq!(u_torsion_order(&[UPoly::one()], &zero).unwrap(), TorsionOrder::Infinite);
        assert_eq!(u_torsion_order(&[UPoly::zero()], &zero).unwrap(), TorsionOrder::Finite(0));
        assert!(u_torsion_order(&[UPoly::zero(), UPoly::one()], &d).is_err());
    }

    #[test]
    fn solve_and_free_reps() {
        // basis a, b, c: ∂b = U a ; c free
        let mut d = UMatrix::zeros(3, 3);
        d.set(0, 1, UPoly::monomial(1));
        let z = vec![UPoly::monomial(3), UPoly::zero(), UPoly::zero()];
        let w = solve_in_image(&z, &d).unwrap().unwrap();
        assert_eq!(d.mul_vec(&w), z);
        assert!(!in_image(&[UPoly::one(), UPoly::zero(), UPoly::zero()], &d).unwrap());
        let h = u_homology(&d).unwrap();
        assert_eq!(h.free_rank, 1);
        assert_eq!(h.representatives.len(), 1);
        let rep = &h.representatives[0];
        assert!(d.mul_vec(rep).iter().all(UPoly::is_zero));
        assert!(rep[2].coeff(0));
    }
}
