//! FBI phases, the weights they induce, the canonical map κ_φ,
//! polarizations, conjugated symbols and closed-form FBI transforms of
//! Gaussian-class data.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gaussian::{self, GaussianForm};
use crate::holomorphic::HolomorphicGaussian;
use crate::linalg::{self, c, CMat, CVec, RMat, RVec, C64, I};
use crate::subspace::{subspace_residual, RealSubspace, TotallyRealSubspace};
use crate::symplectic::{ComplexSymplecticMap, QuadraticSymbol};

const SYM_TOL: f64 = 1e-10;

fn check_square(m: &CMat, n: usize, what: &str) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Dimension(format!("{what} must be {n}x{n}, got {}x{}", m.nrows(), m.ncols())));
    }
    if !linalg::all_finite(m) {
        return Err(Error::NonFinite(what.into()));
    }
    Ok(())
}

fn check_symmetric(m: &CMat, what: &str) -> Result<CMat> {
    let r = (m - m.transpose()).norm() / m.norm().max(1.0);
    if r > SYM_TOL {
        return Err(Error::InvalidInput(format!("{what} is not symmetric (residual {r:.2e})")));
    }
    Ok(linalg::sym(m))
}

/// Real symmetric 2n×2n matrix of a Hermitian n×n matrix acting on (Re, Im).
fn hermitian_real(h: &CMat) -> RMat {
    linalg::sym_real(&linalg::realify_linear(h))
}

/// φ(z, y) = ½ zᵀAz + yᵀBz + ½ yᵀDy.
#[derive(Debug, Clone, PartialEq)]
pub struct FbiPhase {
    a: CMat,
    b: CMat,
    d: CMat,
    c_phi: f64,
}

impl FbiPhase {
    pub fn new(a: CMat, b: CMat, d: CMat) -> Result<Self> {
        let n = a.nrows();
        if n == 0 {
            return Err(Error::InvalidInput("empty phase".into()));
        }
        check_square(&a, n, "A")?;
        check_square(&b, n, "B")?;
        check_square(&d, n, "D")?;
        let a = check_symmetric(&a, "A")?;
        let d = check_symmetric(&d, "D")?;
        let det_b = b.clone().determinant().norm();
        if !(det_b > 1e-12) {
            return Err(Error::InvalidInput(format!("det B = {det_b:.2e} vanishes")));
        }
        let im_d = linalg::im(&d);
        let min_eig = linalg::min_eigenvalue(&im_d);
        if !(min_eig > 1e-12) {
            return Err(Error::InvalidInput(format!("Im D is not positive definite (eigenvalue {min_eig:.2e})")));
        }
        let det_im_d = im_d.determinant();
        let nf = n as f64;
        let c_phi = 2f64.powf(-nf / 2.0) * PI.powf(-0.75 * nf) * det_im_d.powf(-0.25) * det_b;
        Ok(FbiPhase { a, b, d, c_phi })
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn d(&self) -> &CMat {
        &self.d
    }

    pub fn c_phi(&self) -> f64 {
        self.c_phi
    }

    pub fn eval(&self, z: &CVec, y: &RVec) -> C64 {
        let yc = y.map(|v| c(v, 0.0));
        (z.transpose() * &self.a * z)[(0, 0)] * 0.5
            + (yc.transpose() * &self.b * z)[(0, 0)]
            + (yc.transpose() * &self.d * &yc)[(0, 0)] * 0.5
    }
}

/// φ(z, y) = (i/2)(z − y)².
pub fn standard_phase(n: usize) -> FbiPhase {
    let id = CMat::identity(n, n);
    FbiPhase::new(&id * I, &id * (-I), &id * I).expect("standard phase is valid")
}

/// Φ(z) = ½ Re(zᵀPz) + ½ z̄ᵀHz.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    p: CMat,
    h: CMat,
}

impl Weight {
    pub fn new(p: CMat, h: CMat) -> Result<Self> {
        let n = p.nrows();
        check_square(&p, n, "P")?;
        check_square(&h, n, "H")?;
        let p = check_symmetric(&p, "P")?;
        let herm = (&h - h.adjoint()).norm() / h.norm().max(1.0);
        if herm > SYM_TOL {
            return Err(Error::InvalidInput(format!("H is not Hermitian (residual {herm:.2e})")));
        }
        let h = (&h + h.adjoint()) * c(0.5, 0.0);
        let min_eig = linalg::min_eigenvalue(&hermitian_real(&h));
        if !(min_eig > 0.0) {
            return Err(Error::InvalidInput(format!(
                "weight is not strictly plurisubharmonic (Levi eigenvalue {:.2e})",
                min_eig / 2.0
            )));
        }
        Ok(Weight { p, h })
    }

    /// Weight with Φ(X) = XᵀMX in coordinates X = (Re z, Im z).
    pub fn from_real_form(m: &RMat) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) {
            return Err(Error::Dimension("real form must be 2n x 2n".into()));
        }
        let n = m.nrows() / 2;
        let m = linalg::sym_real(m);
        let m11 = m.view((0, 0), (n, n)).into_owned();
        let m22 = m.view((n, n), (n, n)).into_owned();
        let m12 = m.view((0, n), (n, n)).into_owned();
        let pr = &m11 - &m22;
        let hr = &m11 + &m22;
        let pi = -(&m12 + m12.transpose());
        let hi = -(&m12 - m12.transpose());
        Weight::new(linalg::from_parts(&pr, &pi), linalg::from_parts(&hr, &hi))
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn p(&self) -> &CMat {
        &self.p
    }

    pub fn h(&self) -> &CMat {
        &self.h
    }

    /// M with Φ(X) = XᵀMX, X = (Re z, Im z).
    pub fn real_form(&self) -> RMat {
        let n = self.n();
        let (pr, pi) = (linalg::re(&self.p), linalg::im(&self.p));
        let (hr, hi) = (linalg::re(&self.h), linalg::im(&self.h));
        let mut m = RMat::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&((&pr + &hr) * 0.5));
        m.view_mut((n, n), (n, n)).copy_from(&((&hr - &pr) * 0.5));
        let m12 = -(&pi + &hi) * 0.5;
        m.view_mut((0, n), (n, n)).copy_from(&m12);
        m.view_mut((n, 0), (n, n)).copy_from(&m12.transpose());
        m
    }

    pub fn eval(&self, z: &CVec) -> f64 {
        let pz = (z.transpose() * &self.p * z)[(0, 0)].re;
        let hz = (z.adjoint() * &self.h * z)[(0, 0)].re;
        0.5 * (pz + hz)
    }

    /// ∂_zΦ = ½(Pz + Hᵀz̄).
    pub fn dz(&self, z: &CVec) -> CVec {
        (&self.p * z + self.h.transpose() * z.conjugate()) * c(0.5, 0.0)
    }

    /// ∂²Φ/∂z_j∂z̄_k.
    pub fn levi_matrix(&self) -> CMat {
        self.h.transpose() * c(0.5, 0.0)
    }

    /// C_Φ = (2/π)^n det ∂²_{z z̄}Φ.
    pub fn bergman_constant(&self) -> f64 {
        let n = self.n() as f64;
        (2.0 / PI).powf(n) * self.levi_matrix().determinant().re
    }

    /// Largest blockwise difference.
    pub fn distance(&self, other: &Weight) -> f64 {
        (&self.p - &other.p).norm().max((&self.h - &other.h).norm())
    }

    pub fn polarization(&self) -> Polarization {
        Polarization { p: self.p.clone(), h: self.h.clone() }
    }
}

/// Φ = sup_y (−Im φ(z, y)).
///
/// The maximizer solves Im D·y = −Im(Bz) over real y; substituting gives
/// Φ(X) = −½ Im(zᵀAz) + ½ Im(Bz)ᵀ (Im D)⁻¹ Im(Bz) as a real form in
/// X = (Re z, Im z).
pub fn weight_of_phase(phi: &FbiPhase) -> Result<Weight> {
    let n = phi.n();
    let w = linalg::inverse_real(&linalg::im(phi.d()), "Im D")?;
    // −½ Im(zᵀAz) = ½ Re(zᵀ(iA)z)
    let ia = phi.a() * I;
    let (car, cai) = (linalg::re(&ia), linalg::im(&ia));
    let mut m = RMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&(&car * 0.5));
    m.view_mut((n, n), (n, n)).copy_from(&(&car * -0.5));
    m.view_mut((0, n), (n, n)).copy_from(&(&cai * -0.5));
    m.view_mut((n, 0), (n, n)).copy_from(&(cai.transpose() * -0.5));
    // Im(Bz) = [Im B, Re B] X
    let mut cb = RMat::zeros(n, 2 * n);
    cb.view_mut((0, 0), (n, n)).copy_from(&linalg::im(phi.b()));
    cb.view_mut((0, n), (n, n)).copy_from(&linalg::re(phi.b()));
    m += cb.transpose() * w * cb * 0.5;
    Weight::from_real_form(&m)
}

/// κ_φ : (y, −∂_yφ) ↦ (z, ∂_zφ).
///
/// η = −(Bz + Dy) gives z = −B⁻¹(Dy + η), then ζ = Az + Bᵀy.
pub fn kappa_phi(phi: &FbiPhase) -> Result<ComplexSymplecticMap> {
    let n = phi.n();
    let b_inv = linalg::inverse(phi.b(), "B")?;
    let mut k = CMat::zeros(2 * n, 2 * n);
    k.view_mut((0, 0), (n, n)).copy_from(&(-&b_inv * phi.d()));
    k.view_mut((0, n), (n, n)).copy_from(&(-&b_inv));
    k.view_mut((n, 0), (n, n)).copy_from(&(phi.b().transpose() - phi.a() * &b_inv * phi.d()));
    k.view_mut((n, n), (n, n)).copy_from(&(-phi.a() * &b_inv));
    let map = ComplexSymplecticMap::new(k)?;
    let weight = weight_of_phase(phi)?;
    let image = TotallyRealSubspace::new(map.matrix().clone())?.realified();
    let lambda = lambda_of_weight(&weight)?.realified();
    Error::check("κ_φ(R^2n) = Λ_Φ", subspace_residual(&image, &lambda)?, 1e-10)?;
    Ok(map)
}

/// Ψ(z, θ) = ¼ zᵀPz + ¼ θᵀP̄θ + ½ zᵀHᵀθ, the holomorphic quadratic form with
/// Ψ(z, z̄) = Φ(z).
#[derive(Debug, Clone, PartialEq)]
pub struct Polarization {
    p: CMat,
    h: CMat,
}

impl Polarization {
    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn eval(&self, z: &CVec, theta: &CVec) -> C64 {
        (z.transpose() * &self.p * z)[(0, 0)] * 0.25
            + (theta.transpose() * self.p.conjugate() * theta)[(0, 0)] * 0.25
            + (z.transpose() * self.h.transpose() * theta)[(0, 0)] * 0.5
    }

    /// (P₀, Q₀, R₀) with Ψ = ½zᵀP₀z + zᵀQ₀θ + ½θᵀR₀θ.
    pub fn blocks(&self) -> (CMat, CMat, CMat) {
        (
            &self.p * c(0.5, 0.0),
            self.h.transpose() * c(0.5, 0.0),
            self.p.conjugate() * c(0.5, 0.0),
        )
    }
}

/// Real 4n×4n matrix D of (z, w) ↦ 2 Re Ψ(z, w̄) − Φ(z) − Φ(w), value XᵀDX in
/// X = (Re z, Im z, Re w, Im w).
pub fn fundamental_defect(phi: &Weight) -> RMat {
    let n = phi.n();
    let dim = 4 * n;
    let psi = phi.polarization();
    let (p0, q0, r0) = psi.blocks();
    let lz = gaussian::holo(n, 0, dim);
    let lwb = gaussian::antiholo(n, 2 * n, dim);
    let mut f = GaussianForm::new(dim);
    // 2Ψ(z, w̄) = zᵀP₀z + 2 zᵀQ₀w̄ + w̄ᵀR₀w̄
    f.add_bilinear(&lz, &p0, &lz, c(1.0, 0.0));
    f.add_bilinear(&lz, &q0, &lwb, c(2.0, 0.0));
    f.add_bilinear(&lwb, &r0, &lwb, c(1.0, 0.0));
    let mut d = linalg::re(&f.m) * 0.5;
    let mphi = phi.real_form();
    let mut sub = d.view_mut((0, 0), (2 * n, 2 * n));
    sub -= &mphi;
    let mut sub = d.view_mut((2 * n, 2 * n), (2 * n, 2 * n));
    sub -= &mphi;
    linalg::sym_real(&d)
}

/// Largest eigenvalue of the fundamental-estimate form restricted to the
/// complement {w = −z} of the diagonal, and the size of the form on the
/// diagonal {w = z} (which must vanish).
pub fn fundamental_defect_spectrum(d: &RMat) -> (f64, f64) {
    let dim = d.nrows() / 2;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut diag = RMat::zeros(2 * dim, dim);
    let mut anti = RMat::zeros(2 * dim, dim);
    for k in 0..dim {
        diag[(k, k)] = r;
        diag[(dim + k, k)] = r;
        anti[(k, k)] = r;
        anti[(dim + k, k)] = -r;
    }
    let transverse = linalg::max_eigenvalue(&(anti.transpose() * d * &anti));
    let on_diagonal = (d * diag).norm();
    (transverse, on_diagonal)
}

/// Ψ together with the fundamental-estimate form. The form must vanish on
/// the diagonal z = w and be negative definite transversally to it.
pub fn polarize(phi: &Weight) -> Result<(Polarization, RMat)> {
    let d = fundamental_defect(phi);
    let scale = d.norm().max(1.0);
    let (transverse, on_diagonal) = fundamental_defect_spectrum(&d);
    Error::check("fundamental estimate form vanishes on the diagonal", on_diagonal / scale, 1e-12)?;
    if !(transverse < -1e-12 * scale) {
        return Err(Error::Diagnostic {
            what: "fundamental estimate form is not negative definite off the diagonal".into(),
            value: transverse,
            tol: 0.0,
        });
    }
    Ok((phi.polarization(), d))
}

/// q̃(z, ζ) = Qtilde·(z, ζ)·(z, ζ), written ½A₁z·z + A₂z·ζ + ½A₃ζ·ζ.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugatedSymbol {
    n: usize,
    qt: CMat,
    origin: Option<(QuadraticSymbol, ComplexSymplecticMap)>,
}

impl ConjugatedSymbol {
    /// A symbol given directly on the FBI side.
    pub fn from_matrix(n: usize, qt: CMat) -> Result<Self> {
        check_square(&qt, 2 * n, "Qtilde")?;
        Ok(ConjugatedSymbol { n, qt: linalg::sym(&qt), origin: None })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.qt
    }

    /// The real-side symbol and κ_φ this was conjugated with, if any.
    pub fn origin(&self) -> Option<&(QuadraticSymbol, ComplexSymplecticMap)> {
        self.origin.as_ref()
    }

    pub fn a1(&self) -> CMat {
        self.qt.view((0, 0), (self.n, self.n)) * c(2.0, 0.0)
    }

    /// Coefficient of the z·ζ cross term: q̃ ∋ ζᵀA₂z.
    pub fn a2(&self) -> CMat {
        self.qt.view((self.n, 0), (self.n, self.n)) * c(2.0, 0.0)
    }

    pub fn a3(&self) -> CMat {
        self.qt.view((self.n, self.n), (self.n, self.n)) * c(2.0, 0.0)
    }

    pub fn eval(&self, z: &CVec, zeta: &CVec) -> C64 {
        let mut x = CVec::zeros(2 * self.n);
        x.rows_mut(0, self.n).copy_from(z);
        x.rows_mut(self.n, self.n).copy_from(zeta);
        (x.transpose() * &self.qt * &x)[(0, 0)]
    }

    pub fn is_re_nonneg(&self) -> bool {
        self.origin.as_ref().map(|(q, _)| q.re_nonneg()).unwrap_or(true)
    }
}

/// q̃ = q ∘ κ_φ⁻¹.
pub fn egorov_symbol(q: &QuadraticSymbol, phi: &FbiPhase) -> Result<ConjugatedSymbol> {
    if q.n() != phi.n() {
        return Err(Error::Dimension("symbol and phase differ in dimension".into()));
    }
    let kappa = kappa_phi(phi)?;
    let k_inv = kappa.inverse();
    let qt = linalg::sym(&(k_inv.matrix().transpose() * q.matrix() * k_inv.matrix()));
    Ok(ConjugatedSymbol { n: q.n(), qt, origin: Some((q.clone(), kappa)) })
}

/// Λ_Φ = {(z, (2/i)∂_zΦ(z))}, spanned over R by z = e_k and z = i e_k.
pub fn lambda_of_weight(phi: &Weight) -> Result<TotallyRealSubspace> {
    let n = phi.n();
    let id = CMat::identity(n, n);
    let ht = phi.h().transpose();
    let mut v = CMat::zeros(2 * n, 2 * n);
    v.view_mut((0, 0), (n, n)).copy_from(&id);
    v.view_mut((0, n), (n, n)).copy_from(&(&id * I));
    v.view_mut((n, 0), (n, n)).copy_from(&((phi.p() + &ht) * (-I)));
    v.view_mut((n, n), (n, n)).copy_from(&(phi.p() - &ht));
    TotallyRealSubspace::new(v)
}

/// Inverse of [`lambda_of_weight`].
///
/// Writing the graph map as ζ = N (Re z, Im z) = N₁x + N₂y, one has
/// ζ = ½(N₁ − iN₂) z + ½(N₁ + iN₂) z̄ = −iPz − iHᵀz̄.
pub fn weight_of_lambda(sigma: &TotallyRealSubspace) -> Result<Weight> {
    let d = sigma.dim();
    let n = d / 2;
    let v = sigma.spanning();
    let v1 = v.view((0, 0), (n, d)).into_owned();
    let v2 = v.view((n, 0), (n, d)).into_owned();
    let mut r1 = RMat::zeros(d, d);
    r1.view_mut((0, 0), (n, d)).copy_from(&linalg::re(&v1));
    r1.view_mut((n, 0), (n, d)).copy_from(&linalg::im(&v1));
    let det = r1.determinant().abs() / r1.norm().max(1e-300).powi(d as i32);
    if !(det > 1e-14) {
        return Err(Error::NotWeightGraph("projection to the base is singular".into()));
    }
    let r1_inv = linalg::inverse_real(&r1, "base projection")
        .map_err(|_| Error::NotWeightGraph("projection to the base is singular".into()))?;
    let nmat = v2 * linalg::complexify(&r1_inv);
    let n1 = nmat.view((0, 0), (n, n)).into_owned();
    let n2 = nmat.view((0, n), (n, n)).into_owned();
    let cz = (&n1 - &n2 * I) * c(0.5, 0.0);
    let ez = (&n1 + &n2 * I) * c(0.5, 0.0);
    let p = &cz * I;
    let h = (&ez * I).transpose();
    let scale = p.norm().max(h.norm()).max(1.0);
    let asym = (&p - p.transpose()).norm() / scale;
    if asym > 1e-8 {
        return Err(Error::NotWeightGraph(format!("holomorphic block not symmetric ({asym:.2e})")));
    }
    let herm = (&h - h.adjoint()).norm() / scale;
    if herm > 1e-8 {
        return Err(Error::NotWeightGraph(format!("mixed block not Hermitian ({herm:.2e})")));
    }
    let p = linalg::sym(&p);
    let h = (&h + h.adjoint()) * c(0.5, 0.0);
    Weight::new(p, h).map_err(|e| Error::NotWeightGraph(e.to_string()))
}

/// Real-side data in the supported class.
#[derive(Debug, Clone, PartialEq)]
pub enum RealData {
    /// exp(−½ yᵀGy + lᵀy)
    Gaussian { g: CMat, l: CVec },
    Delta,
    /// u ≡ 1
    Constant,
}

impl RealData {
    pub fn gaussian(g: CMat, l: CVec) -> Result<Self> {
        let n = g.nrows();
        check_square(&g, n, "G")?;
        if l.len() != n {
            return Err(Error::Dimension("l does not match G".into()));
        }
        if !linalg::all_finite(&g) || !l.iter().all(|z| z.is_finite()) {
            return Err(Error::NonFinite("Gaussian data parameters".into()));
        }
        // tempered only if Re G ⪰ 0
        if linalg::min_eigenvalue(&linalg::re(&g)) < -1e-12 {
            return Err(Error::InvalidInput("Gaussian data must have Re G positive semidefinite".into()));
        }
        Ok(RealData::Gaussian { g: linalg::sym(&g), l })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RealData::Gaussian { .. } => "gaussian",
            RealData::Delta => "delta",
            RealData::Constant => "constant",
        }
    }

    /// ‖u‖²_{L²}; requires Re G ≻ 0.
    pub fn l2_norm_sq(&self) -> Result<f64> {
        match self {
            RealData::Gaussian { g, l } => {
                let n = g.nrows();
                let mut f = GaussianForm::new(n);
                f.m = linalg::complexify(&(linalg::re(g) * -2.0));
                f.v = l.map(|z| c(2.0 * z.re, 0.0));
                Ok(f.total()?.re)
            }
            _ => Err(Error::InvalidInput(format!("{} data is not square integrable", self.kind()))),
        }
    }
}

/// T_φu(z) = c_φ ∫ e^{iφ(z,y)} u(y) dy in closed form.
pub fn fbi_transform(phi: &FbiPhase, data: &RealData) -> Result<HolomorphicGaussian> {
    let n = phi.n();
    let (g, l) = match data {
        RealData::Delta => {
            return Ok(HolomorphicGaussian::centered(c(phi.c_phi(), 0.0), phi.a() * I));
        }
        RealData::Constant => (CMat::zeros(n, n), CVec::zeros(n)),
        RealData::Gaussian { g, l } => {
            if g.nrows() != n {
                return Err(Error::Dimension("data and phase differ in dimension".into()));
            }
            (g.clone(), l.clone())
        }
    };
    let dim = 3 * n;
    let lz = gaussian::holo(n, 0, dim);
    let ly = linalg::complexify(&gaussian::select(n, 2 * n, dim));
    let mut f = GaussianForm::new(dim);
    f.add_bilinear(&lz, phi.a(), &lz, c(0.0, 0.5));
    f.add_bilinear(&ly, phi.b(), &lz, I);
    f.add_bilinear(&ly, phi.d(), &ly, c(0.0, 0.5));
    f.add_bilinear(&ly, &g, &ly, c(-0.5, 0.0));
    f.add_linear(&ly, &l, c(1.0, 0.0));
    f.scale(c(phi.c_phi(), 0.0));
    let ys: Vec<usize> = (2 * n..3 * n).collect();
    let out = f.integrate(&ys)?;
    let hp = gaussian::holomorphic_part(&out, n)?;
    Error::check("FBI transform is holomorphic", hp.antiholomorphic_residual, 1e-10)?;
    HolomorphicGaussian::new(hp.alpha, hp.g, hp.l)
}

/// ∫ |u(z)|² e^{−2Φ(z)} L(dz).
pub fn weighted_norm_sq(u: &HolomorphicGaussian, phi: &Weight) -> Result<f64> {
    let n = phi.n();
    let dim = 2 * n;
    let lz = gaussian::holo(n, 0, dim);
    let lzb = gaussian::antiholo(n, 0, dim);
    let mut f = GaussianForm::new(dim);
    f.add_bilinear(&lz, &u.g, &lz, c(0.5, 0.0));
    f.add_bilinear(&lzb, &u.g.conjugate(), &lzb, c(0.5, 0.0));
    f.add_linear(&lz, &u.l, c(1.0, 0.0));
    f.add_linear(&lzb, &u.l.conjugate(), c(1.0, 0.0));
    f.add_real_form(&RMat::identity(dim, dim), &phi.real_form(), -2.0);
    f.scale(c(u.alpha.norm_sqr(), 0.0));
    Ok(f.total()?.re)
}

/// Subspace R^{2n} in C^{2n} realified, i.e. the real phase space.
pub fn real_phase_space(n: usize) -> RealSubspace {
    TotallyRealSubspace::real(2 * n).realified()
}
