//! Real subspaces with orthonormal bases and totally real subspaces of
//! C^{2n}.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, RMat, RVec};

/// Default tolerance for intersections and equality tests.
pub const SUBSPACE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct RealSubspace {
    basis: RMat,
    pub tol: f64,
}

impl RealSubspace {
    /// Subspace spanned by the columns of `vectors` (rank decided relative to
    /// the largest singular value).
    pub fn span(vectors: &RMat) -> Self {
        RealSubspace { basis: linalg::range_basis(vectors, linalg::RANK_RTOL), tol: SUBSPACE_TOL }
    }

    /// Wraps a basis that is already orthonormal.
    pub fn from_orthonormal(basis: RMat) -> Self {
        RealSubspace { basis, tol: SUBSPACE_TOL }
    }

    pub fn zero(ambient: usize) -> Self {
        RealSubspace { basis: RMat::zeros(ambient, 0), tol: SUBSPACE_TOL }
    }

    pub fn full(ambient: usize) -> Self {
        RealSubspace { basis: RMat::identity(ambient, ambient), tol: SUBSPACE_TOL }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn basis(&self) -> &RMat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn projector(&self) -> RMat {
        &self.basis * self.basis.transpose()
    }

    /// Distance from `v` to the subspace.
    pub fn residual(&self, v: &RVec) -> f64 {
        (v - self.projector() * v).norm()
    }

    /// Sine of the angle between the line through `v` and the subspace.
    pub fn angle_sine(&self, v: &RVec) -> f64 {
        let n = v.norm();
        if n == 0.0 {
            0.0
        } else {
            self.residual(v) / n
        }
    }

    pub fn contains(&self, v: &RVec, tol: f64) -> bool {
        self.angle_sine(v) <= tol
    }

    /// Orthogonality defect of the stored basis.
    pub fn orthonormality_residual(&self) -> f64 {
        (self.basis.transpose() * &self.basis - RMat::identity(self.dim(), self.dim())).norm()
    }
}

fn same_ambient(a: &RealSubspace, b: &RealSubspace) -> Result<()> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::Dimension(format!(
            "subspaces live in R^{} and R^{}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    Ok(())
}

/// A ∩ B as the common null space of I - P_A and I - P_B.
pub fn intersect_subspaces(a: &RealSubspace, b: &RealSubspace) -> Result<RealSubspace> {
    same_ambient(a, b)?;
    let d = a.ambient_dim();
    let tol = a.tol.max(b.tol);
    let id = RMat::identity(d, d);
    let mut stacked = RMat::zeros(2 * d, d);
    stacked.view_mut((0, 0), (d, d)).copy_from(&(&id - a.projector()));
    stacked.view_mut((d, 0), (d, d)).copy_from(&(&id - b.projector()));
    // The stacked operator has singular values in [0, sqrt 2]; an absolute
    // threshold keeps near-coincident directions.
    let svd = stacked.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let cols: Vec<RVec> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tol)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    let basis = if cols.is_empty() { RMat::zeros(d, 0) } else { RMat::from_columns(&cols) };
    Ok(RealSubspace { basis, tol })
}

/// Image M(A).
pub fn map_subspace(m: &RMat, a: &RealSubspace) -> Result<RealSubspace> {
    if m.ncols() != a.ambient_dim() {
        return Err(Error::Dimension(format!(
            "map has {} columns, subspace lives in R^{}",
            m.ncols(),
            a.ambient_dim()
        )));
    }
    if a.dim() == 0 {
        return Ok(RealSubspace::zero(m.nrows()).with_tol(a.tol));
    }
    Ok(RealSubspace::span(&(m * a.basis())).with_tol(a.tol))
}

/// max(|(I - P_A) B|, |(I - P_B) A|), or infinity when the dimensions differ.
pub fn subspace_residual(a: &RealSubspace, b: &RealSubspace) -> Result<f64> {
    same_ambient(a, b)?;
    if a.dim() != b.dim() {
        return Ok(f64::INFINITY);
    }
    if a.dim() == 0 {
        return Ok(0.0);
    }
    let ra = (b.basis() - a.projector() * b.basis()).norm();
    let rb = (a.basis() - b.projector() * a.basis()).norm();
    Ok(ra.max(rb))
}

pub fn subspace_equal(a: &RealSubspace, b: &RealSubspace, tol: f64) -> Result<bool> {
    Ok(subspace_residual(a, b)? < tol)
}

/// Real 2n-dimensional subspace Σ of C^{2n} with Σ ∩ iΣ = {0}, stored by a
/// complex-invertible matrix whose columns span Σ over R.
#[derive(Debug, Clone, PartialEq)]
pub struct TotallyRealSubspace {
    v: CMat,
    v_inv: CMat,
}

impl TotallyRealSubspace {
    pub fn new(v: CMat) -> Result<Self> {
        if v.nrows() != v.ncols() || !v.nrows().is_multiple_of(2) {
            return Err(Error::Dimension(format!("spanning matrix is {}x{}", v.nrows(), v.ncols())));
        }
        let scale = v.norm().max(f64::MIN_POSITIVE);
        let det = v.clone().determinant().norm() / scale.powi(v.nrows() as i32);
        if !(det > 1e-12) {
            return Err(Error::InvalidInput("spanning set is not totally real (det V vanishes)".into()));
        }
        let v_inv = linalg::inverse(&v, "totally real basis")?;
        Ok(TotallyRealSubspace { v, v_inv })
    }

    /// Standard R^{2n} ⊂ C^{2n}.
    pub fn real(dim: usize) -> Self {
        let v = CMat::identity(dim, dim);
        TotallyRealSubspace { v_inv: v.clone(), v }
    }

    pub fn spanning(&self) -> &CMat {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.v.nrows()
    }

    /// ι_Σ(X) = V conj(V⁻¹ X).
    pub fn involution(&self, x: &CVec) -> CVec {
        &self.v * (&self.v_inv * x).conjugate()
    }

    /// Matrix N with ι_Σ(X) = N conj(X).
    pub fn involution_matrix(&self) -> CMat {
        &self.v * self.v_inv.conjugate()
    }

    /// Σ as a real subspace of R^{4n} (coordinates (Re X, Im X)).
    pub fn realified(&self) -> RealSubspace {
        let d = self.dim();
        let mut m = RMat::zeros(2 * d, d);
        m.view_mut((0, 0), (d, d)).copy_from(&linalg::re(&self.v));
        m.view_mut((d, 0), (d, d)).copy_from(&linalg::im(&self.v));
        RealSubspace::span(&m)
    }

    /// Does `x` lie in Σ (its real coordinates in the spanning basis are real)?
    pub fn residual(&self, x: &CVec) -> f64 {
        let coeff = &self.v_inv * x;
        coeff.iter().map(|z| z.im * z.im).sum::<f64>().sqrt() / x.norm().max(f64::MIN_POSITIVE)
    }

    pub fn image(&self, k: &CMat) -> Result<TotallyRealSubspace> {
        TotallyRealSubspace::new(k * &self.v)
    }
}
