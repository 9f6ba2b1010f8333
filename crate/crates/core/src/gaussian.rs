//! Gaussian integrals over real variables with complex quadratic exponents.
//!
//! Every integral in the crate (FBI transforms, norms, kernel application
//! and composition) reduces to [`GaussianForm::integrate`]. Complex
//! variables are realified as (Re z, Im z) blocks; the determinant factor
//! uses [`linalg::inv_sqrt_det`], so no square-root branch is ever chosen
//! by hand.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec, RMat, RVec, C64, I};

/// amp · exp(½ XᵀMX + vᵀX), X ∈ R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianForm {
    pub m: CMat,
    pub v: CVec,
    pub amp: C64,
}

impl GaussianForm {
    pub fn new(dim: usize) -> Self {
        GaussianForm { m: CMat::zeros(dim, dim), v: CVec::zeros(dim), amp: c(1.0, 0.0) }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Adds coeff · (La X)ᵀ C (Lb X).
    pub fn add_bilinear(&mut self, la: &CMat, cm: &CMat, lb: &CMat, coeff: C64) {
        let t = la.transpose() * cm * lb;
        self.m += (&t + t.transpose()) * coeff;
    }

    /// Adds coeff · wᵀ (La X).
    pub fn add_linear(&mut self, la: &CMat, w: &CVec, coeff: C64) {
        self.v += la.transpose() * w * coeff;
    }

    /// Adds coeff · (S X)ᵀ F (S X) for a real selection S and real form F.
    pub fn add_real_form(&mut self, s: &RMat, f: &RMat, coeff: f64) {
        let t = s.transpose() * linalg::sym_real(f) * s * (2.0 * coeff);
        self.m += linalg::complexify(&t);
    }

    pub fn scale(&mut self, factor: C64) {
        self.amp *= factor;
    }

    pub fn eval(&self, x: &RVec) -> C64 {
        let xc = linalg::complexify(&RMat::from_column_slice(x.len(), 1, x.as_slice()));
        let quad = (xc.transpose() * &self.m * &xc)[(0, 0)] * 0.5;
        let lin = (self.v.transpose() * &xc)[(0, 0)];
        self.amp * (quad + lin).exp()
    }

    /// Integrates out the variables listed in `vars` (Lebesgue measure);
    /// the remaining variables keep their order.
    pub fn integrate(&self, vars: &[usize]) -> Result<GaussianForm> {
        let d = self.dim();
        if vars.iter().any(|&i| i >= d) {
            return Err(Error::Dimension("integration variable out of range".into()));
        }
        let keep: Vec<usize> = (0..d).filter(|i| !vars.contains(i)).collect();
        let k = vars.len();
        let a = -self.m.select_rows(vars).select_columns(vars);
        let factor = linalg::inv_sqrt_det(&a)?;
        let a_inv = linalg::inverse(&a, "Gaussian pivot block")?;
        let mxy = self.m.select_rows(&keep).select_columns(vars);
        let myx = self.m.select_rows(vars).select_columns(&keep);
        let mxx = self.m.select_rows(&keep).select_columns(&keep);
        let vy = self.v.select_rows(vars);
        let vx = self.v.select_rows(&keep);
        let m_new = linalg::sym(&(mxx + &mxy * &a_inv * myx));
        let v_new = vx + &mxy * &a_inv * &vy;
        let cst = (vy.transpose() * &a_inv * &vy)[(0, 0)] * 0.5;
        let amp = self.amp * c((2.0 * PI).powf(k as f64 / 2.0), 0.0) * factor * cst.exp();
        Ok(GaussianForm { m: m_new, v: v_new, amp })
    }

    /// Integral over all variables.
    pub fn total(&self) -> Result<C64> {
        let all: Vec<usize> = (0..self.dim()).collect();
        Ok(self.integrate(&all)?.amp)
    }
}

/// n×d matrix L with L X = z where z = X[off..off+n] + i X[off+n..off+2n].
pub fn holo(n: usize, off: usize, dim: usize) -> CMat {
    let mut l = CMat::zeros(n, dim);
    for j in 0..n {
        l[(j, off + j)] = c(1.0, 0.0);
        l[(j, off + n + j)] = I;
    }
    l
}

/// As [`holo`] for z̄.
pub fn antiholo(n: usize, off: usize, dim: usize) -> CMat {
    holo(n, off, dim).conjugate()
}

/// Real k×d selection of X[off..off+k].
pub fn select(k: usize, off: usize, dim: usize) -> RMat {
    let mut s = RMat::zeros(k, dim);
    for j in 0..k {
        s[(j, off + j)] = 1.0;
    }
    s
}

/// A form in realified z ∈ C^n written as α exp(½ zᵀgz + lᵀz), together
/// with the size of the z̄-dependent coefficients that had to vanish.
#[derive(Debug, Clone)]
pub struct HolomorphicPart {
    pub alpha: C64,
    pub g: CMat,
    pub l: CVec,
    pub antiholomorphic_residual: f64,
}

/// Reads a form over realified C^n as a holomorphic Gaussian.
///
/// With X = S (z, z̄), S = [[I/2, I/2], [−iI/2, iI/2]], the z̄ blocks of SᵀMS
/// and Sᵀv must vanish (Cauchy–Riemann); the residual is relative to
/// max(1, ‖M‖ + ‖v‖).
pub fn holomorphic_part(form: &GaussianForm, n: usize) -> Result<HolomorphicPart> {
    if form.dim() != 2 * n {
        return Err(Error::Dimension(format!("form has {} variables, expected {}", form.dim(), 2 * n)));
    }
    let mut s = CMat::zeros(2 * n, 2 * n);
    for j in 0..n {
        s[(j, j)] = c(0.5, 0.0);
        s[(j, n + j)] = c(0.5, 0.0);
        s[(n + j, j)] = c(0.0, -0.5);
        s[(n + j, n + j)] = c(0.0, 0.5);
    }
    let g_all = s.transpose() * &form.m * &s;
    let l_all = s.transpose() * &form.v;
    let g = linalg::sym(&g_all.view((0, 0), (n, n)).into_owned());
    let l = l_all.rows(0, n).into_owned();
    let bad = g_all.view((0, n), (n, n)).norm()
        + g_all.view((n, n), (n, n)).norm()
        + l_all.rows(n, n).norm();
    let scale = (form.m.norm() + form.v.norm()).max(1.0);
    Ok(HolomorphicPart { alpha: form.amp, g, l, antiholomorphic_residual: bad / scale })
}
