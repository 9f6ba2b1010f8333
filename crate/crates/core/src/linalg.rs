//! Dense helpers shared by the rest of the crate: complex/real conversions,
//! the symplectic matrix, numerical kernels and a branch-safe Gaussian
//! determinant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type RMat = DMatrix<f64>;
pub type CVec = DVector<C64>;
pub type RVec = DVector<f64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Default relative rank tolerance.
pub const RANK_RTOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// J = [[0, I], [-I, 0]] in coordinates (x, xi).
pub fn j_real(n: usize) -> RMat {
    let mut j = RMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = 1.0;
        j[(n + k, k)] = -1.0;
    }
    j
}

pub fn j_complex(n: usize) -> CMat {
    complexify(&j_real(n))
}

pub fn complexify(m: &RMat) -> CMat {
    m.map(|x| c(x, 0.0))
}

pub fn from_parts(re: &RMat, im: &RMat) -> CMat {
    re.zip_map(im, c)
}

pub fn re(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

pub fn im(m: &CMat) -> RMat {
    m.map(|z| z.im)
}

pub fn sym(m: &CMat) -> CMat {
    (m + m.transpose()) * c(0.5, 0.0)
}

pub fn sym_real(m: &RMat) -> RMat {
    (m + m.transpose()) * 0.5
}

pub fn all_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// (Re v, Im v) stacked.
pub fn realify_vec(v: &CVec) -> RVec {
    let n = v.len();
    RVec::from_fn(2 * n, |i, _| if i < n { v[i].re } else { v[i - n].im })
}

/// Inverse of [`realify_vec`].
pub fn complexify_vec(v: &RVec) -> CVec {
    let n = v.len() / 2;
    CVec::from_fn(n, |i, _| c(v[i], v[n + i]))
}

/// Real matrix of a complex-linear map in stacked (Re, Im) coordinates.
pub fn realify_linear(a: &CMat) -> RMat {
    let (m, k) = a.shape();
    let (ar, ai) = (re(a), im(a));
    let mut out = RMat::zeros(2 * m, 2 * k);
    out.view_mut((0, 0), (m, k)).copy_from(&ar);
    out.view_mut((0, k), (m, k)).copy_from(&(-&ai));
    out.view_mut((m, 0), (m, k)).copy_from(&ai);
    out.view_mut((m, k), (m, k)).copy_from(&ar);
    out
}

pub fn inverse(m: &CMat, what: &str) -> Result<CMat> {
    let inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular(what.to_string()))?;
    if all_finite(&inv) {
        Ok(inv)
    } else {
        Err(Error::Singular(what.to_string()))
    }
}

pub fn inverse_real(m: &RMat, what: &str) -> Result<RMat> {
    let inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular(what.to_string()))?;
    if inv.iter().all(|x| x.is_finite()) {
        Ok(inv)
    } else {
        Err(Error::Singular(what.to_string()))
    }
}

/// Smallest eigenvalue of the symmetric part of `m`.
pub fn min_eigenvalue(m: &RMat) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    sym_real(m)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

pub fn max_eigenvalue(m: &RMat) -> f64 {
    if m.nrows() == 0 {
        return f64::NEG_INFINITY;
    }
    sym_real(m)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Orthonormal basis of ker `a`. Singular values at or below
/// `rtol * max(rows, cols) * max(sigma_max, reference)` count as zero; a
/// positive `reference` guards against declaring round-off noise full rank.
pub fn null_space(a: &RMat, rtol: f64, reference: f64) -> RMat {
    let (m, k) = a.shape();
    if k == 0 {
        return RMat::zeros(0, 0);
    }
    let padded = if m < k {
        let mut p = RMat::zeros(k, k);
        p.view_mut((0, 0), (m, k)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let tau = rtol * (m.max(k) as f64) * smax.max(reference);
    let mut cols = Vec::new();
    for (i, s) in sigma.iter().enumerate() {
        if *s <= tau {
            cols.push(v_t.row(i).transpose());
        }
    }
    // v_t has min(rows, k) = k rows here, so the singular values missing
    // from a tall SVD are covered already.
    if cols.is_empty() {
        RMat::zeros(k, 0)
    } else {
        RMat::from_columns(&cols)
    }
}

/// Orthonormal basis of the column space of `a`.
pub fn range_basis(a: &RMat, rtol: f64) -> RMat {
    let (m, k) = a.shape();
    if k == 0 || m == 0 {
        return RMat::zeros(m, 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tau = rtol * (m.max(k) as f64) * smax;
    let cols: Vec<RVec> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > tau && smax > 0.0)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        RMat::zeros(m, 0)
    } else {
        RMat::from_columns(&cols)
    }
}

/// det(A)^{-1/2} for complex symmetric A with positive definite real part,
/// on the branch continuous from real positive definite matrices.
///
/// With Re A = L Lᵀ and K = L⁻¹ (Im A) L⁻ᵀ, det A = det(Re A) prod(1 + i k_j)
/// and every factor 1 + i k_j stays in the right half plane, so each
/// principal square root is the continuous one.
pub fn inv_sqrt_det(a: &CMat) -> Result<C64> {
    let n = a.nrows();
    if n == 0 {
        return Ok(c(1.0, 0.0));
    }
    let ar = sym_real(&re(a));
    let ai = sym_real(&im(a));
    let chol = match ar.clone().cholesky() {
        Some(ch) => ch,
        None => return Err(Error::Divergent { min_eig: min_eigenvalue(&ar) }),
    };
    let l = chol.l();
    let det_r: f64 = l.diagonal().iter().map(|d| d * d).product();
    let linv = l
        .solve_lower_triangular(&RMat::identity(n, n))
        .ok_or_else(|| Error::Singular("Cholesky factor".into()))?;
    let k = sym_real(&(&linv * ai * linv.transpose()));
    let mut out = c(det_r.powf(-0.5), 0.0);
    for kj in k.symmetric_eigen().eigenvalues.iter() {
        out *= c(1.0, *kj).sqrt().inv();
    }
    Ok(out)
}

fn one_norm(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [f64; 5] = [
    1.495585217958292e-2,
    2.53939833006323e-1,
    9.504178996162932e-1,
    2.097847961257068e0,
    5.371920351148152e0,
];

fn pade_low(a: &CMat, b: &[f64]) -> (CMat, CMat) {
    let n = a.nrows();
    let a2 = a * a;
    let mut pow = CMat::identity(n, n);
    let mut u = CMat::zeros(n, n);
    let mut v = CMat::zeros(n, n);
    for k in 0..b.len() / 2 {
        v += &pow * c(b[2 * k], 0.0);
        u += &pow * c(b[2 * k + 1], 0.0);
        pow = &pow * &a2;
    }
    (a * u, v)
}

/// Matrix exponential by scaling and squaring with diagonal Padé
/// approximants (degrees 3..13 chosen from the 1-norm).
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let ident = CMat::identity(n, n);
    if n == 0 {
        return ident;
    }
    let norm = one_norm(a);
    let low: [&[f64]; 4] = [&PADE3, &PADE5, &PADE7, &PADE9];
    for (b, theta) in low.iter().zip(THETA.iter()) {
        if norm <= *theta {
            let (u, v) = pade_low(a, b);
            return solve_pade(&u, &v);
        }
    }
    let s = if norm > THETA[4] { (norm / THETA[4]).log2().ceil() as i32 } else { 0 };
    let a1 = a * c(2f64.powi(-s), 0.0);
    let b = PADE13;
    let r = |x: f64| c(x, 0.0);
    let a2 = &a1 * &a1;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * r(b[13]) + &a4 * r(b[11]) + &a2 * r(b[9]));
    let u = &a1 * (inner_u + &a6 * r(b[7]) + &a4 * r(b[5]) + &a2 * r(b[3]) + &ident * r(b[1]));
    let inner_v = &a6 * (&a6 * r(b[12]) + &a4 * r(b[10]) + &a2 * r(b[8]));
    let v = inner_v + &a6 * r(b[6]) + &a4 * r(b[4]) + &a2 * r(b[2]) + &ident * r(b[0]);
    let mut out = solve_pade(&u, &v);
    for _ in 0..s {
        out = &out * &out;
    }
    out
}

fn solve_pade(u: &CMat, v: &CMat) -> CMat {
    let p = v + u;
    let q = v - u;
    q.lu().solve(&p).expect("Padé denominator is well conditioned inside the theta bounds")
}

/// Exponential of a real matrix.
pub fn expm_real(a: &RMat) -> RMat {
    re(&expm(&complexify(a)))
}
