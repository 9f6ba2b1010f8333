//! The closed function class the propagator acts on: holomorphic Gaussians
//! α exp(½zᵀgz + lᵀz) and their products with polynomials of degree ≤ 2.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicGaussian {
    pub alpha: C64,
    pub g: CMat,
    pub l: CVec,
}

impl HolomorphicGaussian {
    pub fn new(alpha: C64, g: CMat, l: CVec) -> Result<Self> {
        if g.nrows() != g.ncols() || l.len() != g.nrows() {
            return Err(Error::Dimension(format!("g is {}x{}, l has length {}", g.nrows(), g.ncols(), l.len())));
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite()) || !linalg::all_finite(&g) || !l.iter().all(|z| z.is_finite()) {
            return Err(Error::NonFinite("holomorphic Gaussian parameters".into()));
        }
        Ok(HolomorphicGaussian { alpha, g: linalg::sym(&g), l })
    }

    /// α exp(½ zᵀgz).
    pub fn centered(alpha: C64, g: CMat) -> Self {
        let n = g.nrows();
        HolomorphicGaussian { alpha, g: linalg::sym(&g), l: CVec::zeros(n) }
    }

    pub fn n(&self) -> usize {
        self.l.len()
    }

    pub fn exponent(&self, z: &CVec) -> C64 {
        (z.transpose() * &self.g * z)[(0, 0)] * 0.5 + (self.l.transpose() * z)[(0, 0)]
    }

    pub fn eval(&self, z: &CVec) -> C64 {
        self.alpha * self.exponent(z).exp()
    }

    /// Largest blockwise difference of the parameters (α, g, l).
    pub fn param_distance(&self, other: &HolomorphicGaussian) -> f64 {
        (self.alpha - other.alpha)
            .norm()
            .max((&self.g - &other.g).norm())
            .max((&self.l - &other.l).norm())
    }

    pub fn scaled(&self, factor: C64) -> HolomorphicGaussian {
        HolomorphicGaussian { alpha: self.alpha * factor, ..self.clone() }
    }
}

/// (c0 + c1ᵀz + ½ zᵀc2z) · base(z).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussian {
    pub base: HolomorphicGaussian,
    pub c0: C64,
    pub c1: CVec,
    pub c2: CMat,
}

impl PolyGaussian {
    pub fn zero(base: HolomorphicGaussian) -> Self {
        let n = base.n();
        PolyGaussian { base, c0: c(0.0, 0.0), c1: CVec::zeros(n), c2: CMat::zeros(n, n) }
    }

    pub fn polynomial(&self, z: &CVec) -> C64 {
        self.c0 + (self.c1.transpose() * z)[(0, 0)] + (z.transpose() * &self.c2 * z)[(0, 0)] * 0.5
    }

    pub fn eval(&self, z: &CVec) -> C64 {
        self.polynomial(z) * self.base.eval(z)
    }

    /// |α| (|c0| + ‖c1‖ + ‖c2‖): size of the function in coefficient norm.
    pub fn coefficient_norm(&self) -> f64 {
        self.base.alpha.norm() * (self.c0.norm() + self.c1.norm() + self.c2.norm())
    }

    /// Coefficientwise difference; both must share the same base.
    pub fn minus(&self, other: &PolyGaussian) -> PolyGaussian {
        PolyGaussian {
            base: self.base.clone(),
            c0: self.c0 - other.c0,
            c1: &self.c1 - &other.c1,
            c2: &self.c2 - &other.c2,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.c0.is_finite() && self.c1.iter().all(|z| z.is_finite()) && linalg::all_finite(&self.c2)
    }
}
