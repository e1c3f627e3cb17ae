//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in residual");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// The real form `[[Re, -Im], [Im, Re]]`. nalgebra's complex SVD loses
/// accuracy on some structured inputs, so all SVD work goes through it.
fn realify(m: &CMat) -> DMatrix<f64> {
    let (r, c) = m.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = realify(m).svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // Each singular value appears twice in the real form.
    s.into_iter().step_by(2).collect()
}

/// Numerical rank with a relative cutoff.
pub fn rank(m: &CMat, tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&top) = s.first() else { return 0 };
    if top <= tol {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * top.max(1.0)).count()
}

/// Ratio of extreme singular values; infinite when singular.
pub fn condition_number(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    if m.nrows() != m.ncols() {
        return None;
    }
    if m.nrows() == 0 {
        return Some(CMat::zeros(0, 0));
    }
    let smin = singular_values(m).last().copied().unwrap_or(0.0);
    if smin < 1e-13 * singular_values(m)[0].max(1.0) {
        return None;
    }
    m.clone().try_inverse()
}

/// Moore-Penrose pseudo-inverse, dropping singular values below
/// `tol * max(1, σ_max)`.
pub fn pinv(m: &CMat, tol: f64) -> CMat {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return CMat::zeros(c, r);
    }
    let top = singular_values(m)[0];
    let p = realify(m).pseudo_inverse(tol * top.max(1.0)).expect("svd pseudo-inverse");
    CMat::from_fn(c, r, |i, j| C64::new(p[(i, j)], p[(c + i, j)]))
}

/// Orthonormal basis of the span of the columns of `m`, of dimension `r`,
/// by Gram-Schmidt with largest-residual pivoting.
fn span_basis(m: &CMat, r: usize) -> CMat {
    let mut cols: Vec<CVec> = m.column_iter().map(|c| c.into_owned()).collect();
    let mut out = CMat::zeros(m.nrows(), r);
    for k in 0..r {
        let (best, _) = cols.iter().enumerate().fold((0, -1.0), |acc, (i, c)| if c.norm() > acc.1 { (i, c.norm()) } else { acc });
        let q = &cols[best] / C64::new(cols[best].norm(), 0.0);
        for c in cols.iter_mut() {
            let proj = q.dotc(c);
            *c -= &q * proj;
        }
        out.set_column(k, &q);
    }
    out
}

/// Orthonormal basis (as columns) of the column space.
pub fn column_space(m: &CMat, tol: f64) -> CMat {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let r = rank(m, tol);
    span_basis(&(m * pinv(m, tol)), r)
}

/// Orthonormal basis (as columns) of the null space.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(n, n);
    }
    let r = rank(m, tol);
    let k = CMat::identity(n, n) - pinv(m, tol) * m;
    span_basis(&k, n - r)
}

/// Least-squares solution of `a x = b` via the pseudo-inverse.
pub fn solve_least_squares(a: &CMat, b: &CVec) -> CVec {
    if a.ncols() == 0 {
        return CVec::zeros(0);
    }
    pinv(a, 1e-12) * b
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}
