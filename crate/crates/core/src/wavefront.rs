//! Gaussian-class wavefront sets relative to a weight, the maps κ♭,
//! radicals of Φ − Φ_t, and the propagation law for singularities.
//!
//! For u = α e^{½zᵀgz + lᵀz}, log|u(λω)| − Φ(λω) = −c(ω)λ² + O(λ) with
//! c(ω) = Φ(ω) − Re(½ωᵀgω), so a direction is singular exactly when the
//! real quadratic form c vanishes on it.

use std::f64::consts::PI;

use crate::bergman::{self, PropagatorOptions, PSD_TOL};
use crate::error::{Error, Result};
use crate::fbi::{self, egorov_symbol, lambda_of_weight, weight_of_phase, FbiPhase, RealData, Weight};
use crate::holomorphic::HolomorphicGaussian;
use crate::linalg::{self, CVec, RMat, RVec};
use crate::subspace::{intersect_subspaces, map_subspace, subspace_residual, RealSubspace, SUBSPACE_TOL};
use crate::symplectic::{self, ComplexSymplecticMap, QuadraticSymbol};

pub const DEFAULT_THRESHOLD: f64 = 1e-8;
/// Exponents at or below this size count as exactly zero (not marginal).
pub const NOISE_FLOOR: f64 = 1e-12;
pub const DEFAULT_ANGLE_TOL: f64 = 1e-3;

/// Real-linear map of C^n in coordinates (Re z, Im z), or from R^{2n} to
/// C^n for κ♭_φ.
#[derive(Debug, Clone, PartialEq)]
pub struct RealLinearMapOnCn {
    m: RMat,
}

impl RealLinearMapOnCn {
    pub fn new(m: RMat) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) {
            return Err(Error::Dimension(format!("map is {}x{}", m.nrows(), m.ncols())));
        }
        let det = m.determinant().abs();
        if !(det > 1e-12) {
            return Err(Error::Singular(format!("κ♭ has determinant {det:.2e}")));
        }
        Ok(RealLinearMapOnCn { m })
    }

    pub fn matrix(&self) -> &RMat {
        &self.m
    }

    pub fn apply(&self, z: &CVec) -> CVec {
        linalg::complexify_vec(&(&self.m * linalg::realify_vec(z)))
    }

    pub fn compose(&self, other: &RealLinearMapOnCn) -> RealLinearMapOnCn {
        RealLinearMapOnCn { m: &self.m * &other.m }
    }

    pub fn inverse(&self) -> Result<RealLinearMapOnCn> {
        Ok(RealLinearMapOnCn { m: linalg::inverse_real(&self.m, "κ♭")? })
    }
}

/// κ♭ = π₁ ∘ K ∘ (π₁|Λ_src)⁻¹ : C^n → C^n.
pub fn kappa_flat(k: &ComplexSymplecticMap, src: &Weight, dst: &Weight) -> Result<RealLinearMapOnCn> {
    let n = src.n();
    let lam_src = lambda_of_weight(src)?;
    let lam_dst = lambda_of_weight(dst)?;
    let image = k.matrix() * lam_src.spanning();
    let mut worst: f64 = 0.0;
    for j in 0..2 * n {
        worst = worst.max(lam_dst.residual(&image.column(j).into_owned()));
    }
    Error::check("K(Λ_src) = Λ_dst", worst, 1e-8)?;
    let top = image.view((0, 0), (n, 2 * n)).into_owned();
    let mut m = RMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, 2 * n)).copy_from(&linalg::re(&top));
    m.view_mut((n, 0), (n, 2 * n)).copy_from(&linalg::im(&top));
    RealLinearMapOnCn::new(m)
}

/// κ♭_φ = π₁ ∘ κ_φ restricted to R^{2n}.
pub fn kappa_flat_phase(phi: &FbiPhase) -> Result<RealLinearMapOnCn> {
    let n = phi.n();
    let k = fbi::kappa_phi(phi)?;
    let top = k.matrix().view((0, 0), (n, 2 * n)).into_owned();
    let mut m = RMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, 2 * n)).copy_from(&linalg::re(&top));
    m.view_mut((n, 0), (n, 2 * n)).copy_from(&linalg::im(&top));
    RealLinearMapOnCn::new(m)
}

/// Real matrix N with c(X) = XᵀNX = Φ(ω) − Re(½ωᵀgω), X = (Re ω, Im ω).
pub fn exponent_form(u: &HolomorphicGaussian, phi: &Weight) -> RMat {
    let n = phi.n();
    let (gr, gi) = (linalg::re(&u.g), linalg::im(&u.g));
    let mut m = RMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&(&gr * 0.5));
    m.view_mut((n, n), (n, n)).copy_from(&(&gr * -0.5));
    m.view_mut((0, n), (n, n)).copy_from(&(&gi * -0.5));
    m.view_mut((n, 0), (n, n)).copy_from(&(gi.transpose() * -0.5));
    linalg::sym_real(&(phi.real_form() - m))
}

/// c(ω) for a unit direction ω.
pub fn decay_exponent(u: &HolomorphicGaussian, phi: &Weight, omega: &CVec) -> f64 {
    phi.eval(omega) - ((omega.transpose() * &u.g * omega)[(0, 0)] * 0.5).re
}

#[derive(Debug, Clone)]
pub struct WavefrontReport {
    /// Grid directions, sorted by exponent.
    pub directions: Vec<CVec>,
    pub exponents: Vec<f64>,
    pub in_wavefront: Vec<bool>,
    /// Exponent in (NOISE_FLOOR, threshold]: singular by the threshold rule
    /// but not numerically zero.
    pub marginal: Vec<bool>,
    pub threshold: f64,
    /// Span of the eigenvectors of the exponent form with eigenvalue ≤
    /// threshold: the exact singular set, including off-grid directions.
    pub singular: RealSubspace,
    pub min_exponent: f64,
}

impl WavefrontReport {
    pub fn singular_directions(&self) -> Vec<&CVec> {
        self.directions.iter().zip(&self.in_wavefront).filter(|(_, f)| **f).map(|(d, _)| d).collect()
    }
}

/// Unit directions: the circle for n = 1, else the great circles through
/// pairs of realified coordinate axes.
pub fn direction_grid(n: usize, density: usize) -> Vec<CVec> {
    let dim = 2 * n;
    let mut out: Vec<RVec> = Vec::new();
    for a in 0..dim {
        for b in a + 1..dim {
            for k in 0..density {
                let th = 2.0 * PI * k as f64 / density as f64;
                let mut v = RVec::zeros(dim);
                v[a] = th.cos();
                v[b] = th.sin();
                if !out.iter().any(|w| (w - &v).norm() < 1e-12) {
                    out.push(v);
                }
            }
        }
    }
    out.iter().map(linalg::complexify_vec).collect()
}

pub fn wavefront_report(u: &HolomorphicGaussian, phi: &Weight, grid_density: usize, threshold: f64) -> Result<WavefrontReport> {
    if grid_density < 8 {
        return Err(Error::InvalidInput(format!("grid density must be at least 8, got {grid_density}")));
    }
    if u.n() != phi.n() {
        return Err(Error::Dimension("function and weight differ in dimension".into()));
    }
    let form = exponent_form(u, phi);
    let eig = form.clone().symmetric_eigen();
    let cols: Vec<RVec> = (0..form.nrows())
        .filter(|&i| eig.eigenvalues[i] <= threshold)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    let singular = if cols.is_empty() {
        RealSubspace::zero(form.nrows())
    } else {
        RealSubspace::span(&RMat::from_columns(&cols))
    };
    let min_exponent = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut rows: Vec<(CVec, f64)> = direction_grid(phi.n(), grid_density)
        .into_iter()
        .map(|w| {
            let e = decay_exponent(u, phi, &w);
            (w, e)
        })
        .collect();
    rows.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let exponents: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let in_wavefront = exponents.iter().map(|e| *e <= threshold).collect();
    let marginal = exponents.iter().map(|e| *e > NOISE_FLOOR && *e <= threshold).collect();
    Ok(WavefrontReport {
        directions: rows.into_iter().map(|r| r.0).collect(),
        exponents,
        in_wavefront,
        marginal,
        threshold,
        singular,
        min_exponent,
    })
}

#[derive(Debug, Clone)]
pub struct RadicalReport {
    /// Rad(Φ − Φ_t) ⊂ C^n in (Re z, Im z).
    pub radical: RealSubspace,
    /// Λ_Φ ∩ Λ_{Φ_t} ⊂ C^{2n} in (Re X, Im X).
    pub lambda_intersection: RealSubspace,
    /// Distance between π₁(Λ_Φ ∩ Λ_{Φ_t}) and the radical.
    pub consistency: f64,
}

fn pi1_realified(n: usize) -> RMat {
    let mut m = RMat::zeros(2 * n, 4 * n);
    for k in 0..n {
        m[(k, k)] = 1.0;
        m[(n + k, 2 * n + k)] = 1.0;
    }
    m
}

pub fn radical(phi: &Weight, phi_t: &Weight) -> Result<RadicalReport> {
    let n = phi.n();
    let mphi = phi.real_form();
    let gap = &mphi - phi_t.real_form();
    let min = linalg::min_eigenvalue(&gap);
    if min < -PSD_TOL * mphi.norm().max(1.0) {
        return Err(Error::Diagnostic { what: "Φ − Φ_t is not positive semidefinite".into(), value: min, tol: -PSD_TOL });
    }
    let rad = RealSubspace::from_orthonormal(linalg::null_space(&linalg::sym_real(&gap), linalg::RANK_RTOL, mphi.norm()));
    let inter = intersect_subspaces(&lambda_of_weight(phi)?.realified(), &lambda_of_weight(phi_t)?.realified())?;
    let projected = map_subspace(&pi1_realified(n), &inter)?;
    let consistency = subspace_residual(&projected, &rad)?;
    Error::check("π₁(Λ_Φ ∩ Λ_Φt) = Rad(Φ − Φ_t)", consistency, 1e-8)?;
    Ok(RadicalReport { radical: rad, lambda_intersection: inter, consistency })
}

/// Residual between S and κ_φ⁻¹(Λ_Φ ∩ Λ_{Φ_t}), both in realified C^{2n}.
pub fn singular_space_identity_residual(q: &QuadraticSymbol, phi: &FbiPhase, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput("time must be positive".into()));
    }
    let n = q.n();
    let s = symplectic::singular_space(q)?;
    let weight = weight_of_phase(phi)?;
    let qt = egorov_symbol(q, phi)?;
    let phi_t = bergman::evolve_weight(&weight, &qt, t)?;
    let rad = radical(&weight, &phi_t)?;
    let k_inv = fbi::kappa_phi(phi)?.inverse();
    let pulled = map_subspace(&linalg::realify_linear(k_inv.matrix()), &rad.lambda_intersection)?;
    let mut embed = RMat::zeros(4 * n, 2 * n);
    for k in 0..2 * n {
        embed[(k, k)] = 1.0;
    }
    let s_embedded = map_subspace(&embed, &s)?;
    subspace_residual(&pulled, &s_embedded)
}

pub fn verify_singular_space_identity(q: &QuadraticSymbol, phi: &FbiPhase, t: f64) -> Result<bool> {
    Ok(singular_space_identity_residual(q, phi, t)? <= SUBSPACE_TOL)
}

/// Directions of WF_in within `angle_tol` of S, carried by exp(tH_{Im q})
/// and renormalized.
pub fn predict_wavefront(directions: &[RVec], q: &QuadraticSymbol, t: f64, angle_tol: f64) -> Result<Vec<RVec>> {
    let s = symplectic::singular_space(q)?;
    let flow = symplectic::im_flow(q, t)?;
    Ok(directions
        .iter()
        .filter(|d| s.angle_sine(d) <= angle_tol)
        .map(|d| {
            let v = &flow * d;
            let nv = v.norm();
            v / nv
        })
        .collect())
}

/// exp(tH_{Im q})(WF_in ∩ S) for a linear wavefront set.
pub fn predict_wavefront_subspace(wf_in: &RealSubspace, q: &QuadraticSymbol, t: f64) -> Result<RealSubspace> {
    let s = symplectic::singular_space(q)?;
    let flow = symplectic::im_flow(q, t)?;
    map_subspace(&flow, &intersect_subspaces(wf_in, &s)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub grid_density: usize,
    pub threshold: f64,
    pub angle_tol: f64,
    pub propagator: PropagatorOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            grid_density: 64,
            threshold: DEFAULT_THRESHOLD,
            angle_tol: DEFAULT_ANGLE_TOL,
            propagator: PropagatorOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub t: f64,
    pub input: WavefrontReport,
    pub output: WavefrontReport,
    /// WF of the data on the real side, (κ♭_φ)⁻¹ of the measured input set.
    pub wf_in_real: RealSubspace,
    /// exp(tH_{Im q})(WF_in ∩ S) on the real side.
    pub predicted_real: RealSubspace,
    /// κ♭_φ of the real-side prediction.
    pub predicted: RealSubspace,
    /// κ̃♭_t(WF_Φ(u)) ∩ Rad(Φ − Φ_t), the FBI-side form of the law.
    pub predicted_fbi_side: RealSubspace,
    pub measured: RealSubspace,
    /// Largest angle (sine) between a measured singular direction and the
    /// prediction, or between a predicted direction and the measurement.
    pub max_angle: f64,
    pub subspace_residual: f64,
    pub fbi_side_residual: f64,
    pub pass: bool,
}

fn max_angle_between(dirs: &[RVec], target: &RealSubspace) -> f64 {
    dirs.iter().map(|d| target.angle_sine(d)).fold(0.0, f64::max)
}

fn basis_dirs(s: &RealSubspace) -> Vec<RVec> {
    (0..s.dim()).map(|k| s.basis().column(k).into_owned()).collect()
}

pub fn verify_theorem(q: &QuadraticSymbol, phi: &FbiPhase, data: &RealData, t: f64, opts: &VerifyOptions) -> Result<TheoremReport> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput("time must be positive".into()));
    }
    let weight = weight_of_phase(phi)?;
    let qt = egorov_symbol(q, phi)?;
    let u_in = fbi::fbi_transform(phi, data)?;
    let input = wavefront_report(&u_in, &weight, opts.grid_density, opts.threshold)?;
    let flat_phi = kappa_flat_phase(phi)?;
    let wf_in_real = map_subspace(flat_phi.inverse()?.matrix(), &input.singular)?;
    let predicted_real = predict_wavefront_subspace(&wf_in_real, q, t)?;
    let predicted = map_subspace(flat_phi.matrix(), &predicted_real)?;

    let kernel = bergman::bergman_kernel(&weight, &qt, t, &opts.propagator)?;
    let u_t = bergman::apply_kernel(&kernel, &u_in)?;
    let output = wavefront_report(&u_t, &weight, opts.grid_density, opts.threshold)?;
    let measured = output.singular.clone();

    let k = bergman::conjugated_flow(&qt, t)?;
    let flat_t = kappa_flat(&k, &weight, &kernel.dst_weight)?;
    let rad = radical(&weight, &kernel.dst_weight)?;
    let predicted_fbi_side = intersect_subspaces(&map_subspace(flat_t.matrix(), &input.singular)?, &rad.radical)?;

    let grid_singular: Vec<RVec> = output.singular_directions().iter().map(|d| linalg::realify_vec(d)).collect();
    let mut measured_dirs = grid_singular;
    measured_dirs.extend(basis_dirs(&measured));
    let max_angle = max_angle_between(&measured_dirs, &predicted).max(max_angle_between(&basis_dirs(&predicted), &measured));
    let subspace_res = subspace_residual(&measured, &predicted)?;
    let fbi_side_residual = subspace_residual(&measured, &predicted_fbi_side)?;
    let pass = measured.dim() == predicted.dim() && max_angle <= opts.angle_tol;
    Ok(TheoremReport {
        t,
        input,
        output,
        wf_in_real,
        predicted_real,
        predicted,
        predicted_fbi_side,
        measured,
        max_angle,
        subspace_residual: subspace_res,
        fbi_side_residual,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bergman::{conjugated_flow, evolve_weight};
    use crate::catalog;
    use crate::fbi::standard_phase;
    use crate::linalg::{c, CMat, C64};
    use proptest::prelude::*;

    fn s(z: C64) -> CMat {
        CMat::from_element(1, 1, z)
    }

    fn v1(z: C64) -> CVec {
        CVec::from_element(1, z)
    }

    fn r2(a: f64, b: f64) -> RVec {
        RVec::from_vec(vec![a, b])
    }

    fn standard_weight() -> Weight {
        weight_of_phase(&standard_phase(1)).unwrap()
    }

    fn delta_image() -> HolomorphicGaussian {
        fbi::fbi_transform(&standard_phase(1), &RealData::Delta).unwrap()
    }

    /// Directions of a sign-symmetric finite set, one representative each.
    fn up_to_sign(dirs: Vec<&CVec>) -> Vec<CVec> {
        let mut out: Vec<CVec> = Vec::new();
        for d in dirs {
            if !out.iter().any(|o| (o - d).norm() < 1e-9 || (o + d).norm() < 1e-9) {
                out.push(d.clone());
            }
        }
        out
    }

    #[test]
    fn exponents_of_delta_image() {
        let (u, phi) = (delta_image(), standard_weight());
        assert!((decay_exponent(&u, &phi, &v1(c(1.0, 0.0))) - 0.5).abs() < 1e-15);
        assert!(decay_exponent(&u, &phi, &v1(c(0.0, 1.0))).abs() < 1e-15);
    }

    #[test]
    fn ground_state_exponents_are_quarter() {
        let u = HolomorphicGaussian::centered(c(1.0, 0.0), s(c(-0.5, 0.0)));
        let phi = standard_weight();
        for k in 0..16 {
            let th = k as f64 * 0.4;
            assert!((decay_exponent(&u, &phi, &v1(c(th.cos(), th.sin()))) - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn exponent_form_matches_pointwise() {
        let u = HolomorphicGaussian::new(c(1.0, 0.0), CMat::from_row_slice(2, 2, &[c(-0.3, 0.2), c(0.1, 0.0), c(0.1, 0.0), c(0.05, -0.4)]), CVec::zeros(2)).unwrap();
        let phi = Weight::new(
            CMat::from_row_slice(2, 2, &[c(-0.2, 0.1), c(0.0, 0.1), c(0.0, 0.1), c(0.1, 0.0)]),
            CMat::identity(2, 2) * c(0.8, 0.0),
        )
        .unwrap();
        let m = exponent_form(&u, &phi);
        let w = CVec::from_vec(vec![c(0.3, -0.2), c(0.5, 0.6)]);
        let x = linalg::realify_vec(&w);
        assert!(((x.transpose() * &m * &x)[(0, 0)] - decay_exponent(&u, &phi, &w)).abs() < 1e-14);
    }

    #[test]
    fn report_for_delta() {
        let r = wavefront_report(&delta_image(), &standard_weight(), 64, DEFAULT_THRESHOLD).unwrap();
        let sing = r.singular_directions();
        assert_eq!(sing.len(), 2);
        for d in sing {
            assert!((d[0].re).abs() < 1e-15 && (d[0].im.abs() - 1.0).abs() < 1e-15);
        }
        assert_eq!(r.singular.dim(), 1);
        assert!(r.exponents.windows(2).all(|w| w[0] <= w[1]));
        assert!(r.directions.iter().all(|d| (d.norm() - 1.0).abs() < 1e-12));
        assert!(!r.marginal.iter().any(|m| *m));
    }

    #[test]
    fn report_for_constant() {
        let u = fbi::fbi_transform(&standard_phase(1), &RealData::Constant).unwrap();
        let want = standard_phase(1).c_phi() * (2.0 * PI).sqrt();
        assert!((u.alpha - c(want, 0.0)).norm() < 1e-12);
        let r = wavefront_report(&u, &standard_weight(), 64, DEFAULT_THRESHOLD).unwrap();
        let sing = r.singular_directions();
        assert_eq!(sing.len(), 2);
        for d in sing {
            assert!(d[0].im.abs() < 1e-15);
        }
    }

    #[test]
    fn report_for_ground_state() {
        let u = HolomorphicGaussian::centered(c(1.0, 0.0), s(c(-0.5, 0.0)));
        let r = wavefront_report(&u, &standard_weight(), 64, DEFAULT_THRESHOLD).unwrap();
        assert!(r.singular_directions().is_empty());
        assert_eq!(r.singular.dim(), 0);
        assert!(r.min_exponent >= 0.25 - 1e-12);
    }

    #[test]
    fn marginal_flag() {
        // exponent 5e-9 along i: singular by threshold but above the noise floor
        let u = HolomorphicGaussian::centered(c(1.0, 0.0), s(c(-1.0 + 1e-8, 0.0)));
        let r = wavefront_report(&u, &standard_weight(), 8, DEFAULT_THRESHOLD).unwrap();
        assert_eq!(r.marginal.iter().filter(|m| **m).count(), 2);
        assert_eq!(r.singular_directions().len(), 2);
    }

    #[test]
    fn report_rejects_coarse_grid() {
        assert!(wavefront_report(&delta_image(), &standard_weight(), 7, DEFAULT_THRESHOLD).is_err());
    }

    #[test]
    fn grid_in_two_dimensions() {
        let g = direction_grid(2, 8);
        // 6 great circles of 8 points, axis points shared by 3 circles each
        assert_eq!(g.len(), 6 * 8 - 8 * 2);
        assert!(g.iter().all(|d| (d.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn heat_kappa_flat() {
        let phi = standard_weight();
        let qt = fbi::egorov_symbol(&catalog::heat(), &standard_phase(1)).unwrap();
        for t in [0.5, 2.0] {
            let k = conjugated_flow(&qt, t).unwrap();
            let dst = evolve_weight(&phi, &qt, t).unwrap();
            let m = kappa_flat(&k, &phi, &dst).unwrap();
            let want = RMat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0 + 2.0 * t]);
            assert!((m.matrix() - want).norm() < 1e-12);
        }
        let id = kappa_flat(&ComplexSymplecticMap::identity(2), &phi, &phi).unwrap();
        assert!((id.matrix() - RMat::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn kappa_flat_rejects_wrong_target() {
        let phi = standard_weight();
        let qt = fbi::egorov_symbol(&catalog::heat(), &standard_phase(1)).unwrap();
        let k = conjugated_flow(&qt, 1.0).unwrap();
        assert!(matches!(kappa_flat(&k, &phi, &phi), Err(Error::CrossCheck { .. })));
    }

    #[test]
    fn standard_kappa_flat_phase() {
        let m = kappa_flat_phase(&standard_phase(1)).unwrap();
        assert!((m.matrix() - RMat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])).norm() < 1e-15);
        // (x, ξ) packed as x + iξ
        let z = m.apply(&v1(c(0.3, 0.5)));
        assert!((z[0] - c(0.3, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn kappa_flat_composes() {
        for name in catalog::NAMES {
            let q = catalog::entry(name, 1.0).unwrap().symbol;
            let frame = standard_phase(q.n());
            let phi = weight_of_phase(&frame).unwrap();
            let qt = fbi::egorov_symbol(&q, &frame).unwrap();
            let (a, b) = (0.3, 0.5);
            let (ka, kb, kab) = (conjugated_flow(&qt, a).unwrap(), conjugated_flow(&qt, b).unwrap(), conjugated_flow(&qt, a + b).unwrap());
            let (wa, wab) = (evolve_weight(&phi, &qt, a).unwrap(), evolve_weight(&phi, &qt, a + b).unwrap());
            let first = kappa_flat(&ka, &phi, &wa).unwrap();
            let second = kappa_flat(&kb, &wa, &wab).unwrap();
            let whole = kappa_flat(&kab, &phi, &wab).unwrap();
            assert!((second.compose(&first).matrix() - whole.matrix()).norm() < 1e-10, "{name}");
            let back = whole.inverse().unwrap().compose(&whole);
            assert!((back.matrix() - RMat::identity(2 * q.n(), 2 * q.n())).norm() < 1e-10);
        }
    }

    #[test]
    fn radicals_of_catalog() {
        let frame = standard_phase(1);
        let phi = standard_weight();
        let heat = fbi::egorov_symbol(&catalog::heat(), &frame).unwrap();
        let r = radical(&phi, &evolve_weight(&phi, &heat, 1.0).unwrap()).unwrap();
        assert_eq!(r.radical.dim(), 1);
        assert!(r.radical.contains(&r2(1.0, 0.0), 1e-12));
        let ho = fbi::egorov_symbol(&catalog::harmonic_oscillator(), &frame).unwrap();
        assert_eq!(radical(&phi, &evolve_weight(&phi, &ho, 1.0).unwrap()).unwrap().radical.dim(), 2);

        let frame2 = standard_phase(2);
        let phi2 = weight_of_phase(&frame2).unwrap();
        let kfp = fbi::egorov_symbol(&catalog::kfp(1.0), &frame2).unwrap();
        for t in [0.25, 1.0] {
            let r = radical(&phi2, &evolve_weight(&phi2, &kfp, t).unwrap()).unwrap();
            assert_eq!(r.radical.dim(), 0);
            assert!(r.consistency <= 1e-8);
        }
    }

    #[test]
    fn radical_independent_of_time() {
        for name in catalog::NAMES {
            let q = catalog::entry(name, 1.0).unwrap().symbol;
            let frame = standard_phase(q.n());
            let phi = weight_of_phase(&frame).unwrap();
            let qt = fbi::egorov_symbol(&q, &frame).unwrap();
            let rads: Vec<RealSubspace> =
                [0.25, 1.0, 4.0].iter().map(|t| radical(&phi, &evolve_weight(&phi, &qt, *t).unwrap()).unwrap().radical).collect();
            assert!(subspace_residual(&rads[0], &rads[1]).unwrap() <= 1e-8, "{name}");
            assert!(subspace_residual(&rads[0], &rads[2]).unwrap() <= 1e-8, "{name}");
        }
    }

    #[test]
    fn singular_space_identity_on_catalog() {
        for name in catalog::NAMES {
            let q = catalog::entry(name, 1.0).unwrap().symbol;
            let frame = standard_phase(q.n());
            for t in [0.25, 1.0, 4.0] {
                let r = singular_space_identity_residual(&q, &frame, t).unwrap();
                assert!(r <= 1e-8, "{name} t = {t}: {r:e}");
            }
        }
        assert!(verify_singular_space_identity(&catalog::kfp(1.0), &standard_phase(2), 0.5).unwrap());
        assert!(singular_space_identity_residual(&catalog::heat(), &standard_phase(1), 0.0).is_err());
    }

    #[test]
    fn singular_space_identity_other_frame() {
        let frame = FbiPhase::new(s(c(0.2, 0.5)), s(c(0.4, -1.3)), s(c(0.3, 2.0))).unwrap();
        for q in [catalog::heat(), catalog::free_schrodinger(), catalog::harmonic_oscillator()] {
            assert!(verify_singular_space_identity(&q, &frame, 1.0).unwrap());
        }
    }

    #[test]
    fn predictions() {
        let heat = catalog::heat();
        assert!(predict_wavefront(&[r2(0.0, 1.0), r2(0.0, -1.0)], &heat, 1.0, 1e-6).unwrap().is_empty());
        let p = predict_wavefront(&[r2(1.0, 0.0), r2(-1.0, 0.0)], &heat, 1.0, 1e-6).unwrap();
        assert_eq!(p.len(), 2);
        assert!((&p[0] - r2(1.0, 0.0)).norm() < 1e-12 && (&p[1] - r2(-1.0, 0.0)).norm() < 1e-12);
        let t = 0.7;
        let p = predict_wavefront(&[r2(0.0, 1.0)], &catalog::free_schrodinger(), t, 1e-6).unwrap();
        let want = r2(2.0 * t, 1.0) / (1.0 + 4.0 * t * t).sqrt();
        assert!((&p[0] - want).norm() < 1e-12);
    }

    #[test]
    fn prediction_small_time_limit() {
        let dirs = [r2(1.0, 0.0), r2(0.6, 0.8), r2(0.0, 1.0)];
        for q in [catalog::heat(), catalog::free_schrodinger(), catalog::harmonic_oscillator()] {
            let s = symplectic::singular_space(&q).unwrap();
            let kept: Vec<&RVec> = dirs.iter().filter(|d| s.angle_sine(d) <= 1e-6).collect();
            let p = predict_wavefront(&dirs, &q, 1e-6, 1e-6).unwrap();
            assert_eq!(p.len(), kept.len());
            for (a, b) in p.iter().zip(kept) {
                assert!((a - b).norm() <= 1e-4);
            }
        }
    }

    fn run(q: &QuadraticSymbol, data: RealData, t: f64) -> TheoremReport {
        let frame = standard_phase(q.n());
        verify_theorem(q, &frame, &data, t, &VerifyOptions::default()).unwrap()
    }

    #[test]
    fn theorem_heat_delta() {
        let r = run(&catalog::heat(), RealData::Delta, 0.5);
        assert!(r.pass);
        assert_eq!(r.measured.dim(), 0);
        assert_eq!(r.predicted.dim(), 0);
        assert!(r.output.singular_directions().is_empty());
    }

    #[test]
    fn theorem_heat_constant() {
        let r = run(&catalog::heat(), RealData::Constant, 1.0);
        assert!(r.pass);
        let sing = up_to_sign(r.output.singular_directions());
        assert_eq!(sing.len(), 1);
        assert!(sing[0][0].im.abs() < 1e-12);
    }

    #[test]
    fn theorem_free_schrodinger_delta() {
        let t = 0.5;
        let r = run(&catalog::free_schrodinger(), RealData::Delta, t);
        assert!(r.pass, "angle {}", r.max_angle);
        let want = linalg::realify_vec(&v1(c(2.0 * t, -1.0)));
        assert_eq!(r.measured.dim(), 1);
        assert!(r.measured.angle_sine(&want) <= 1e-3);
        assert!(r.fbi_side_residual <= 1e-8);
    }

    #[test]
    fn theorem_oscillator_delta_rotates() {
        for t in [0.3, 1.2] {
            let r = run(&catalog::harmonic_oscillator(), RealData::Delta, t);
            assert!(r.pass);
            let rotated = r2((2.0 * t).sin(), (2.0 * t).cos());
            assert!(r.predicted_real.angle_sine(&rotated) <= 1e-12);
            assert!(r.wf_in_real.angle_sine(&r2(0.0, 1.0)) <= 1e-12);
            assert_eq!(r.measured.dim(), r.input.singular.dim());
        }
    }

    #[test]
    fn theorem_kfp_delta() {
        let r = run(&catalog::kfp(1.0), RealData::Delta, 0.25);
        assert!(r.pass);
        assert_eq!(r.measured.dim(), 0);
        assert!(r.output.singular_directions().is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        #[test]
        fn exponent_is_the_quadratic_coefficient(
            gr in -0.4f64..0.4, gi in -0.4f64..0.4, lr in -1.0f64..1.0, li in -1.0f64..1.0, th in 0.0f64..6.3,
        ) {
            let u = HolomorphicGaussian::new(c(0.7, 0.2), s(c(gr - 0.6, gi)), v1(c(lr, li))).unwrap();
            let phi = standard_weight();
            let w = v1(c(th.cos(), th.sin()));
            let lams: Vec<f64> = (0..40).map(|k| 5.0 + 45.0 * k as f64 / 39.0).collect();
            let a = RMat::from_fn(lams.len(), 3, |i, j| lams[i].powi(j as i32));
            let y = RVec::from_iterator(lams.len(), lams.iter().map(|l| {
                let z = &w * c(*l, 0.0);
                u.alpha.norm().ln() + u.exponent(&z).re - phi.eval(&z)
            }));
            let coef = a.svd(true, true).solve(&y, 1e-14).unwrap();
            let want = decay_exponent(&u, &phi, &w);
            prop_assert!((coef[2] + want).abs() <= 1e-8 * want.abs().max(1.0));
        }

        #[test]
        fn flat_map_inverse_roundtrip(a in -2.0f64..2.0, b in -2.0f64..2.0) {
            let m = RealLinearMapOnCn::new(RMat::from_row_slice(2, 2, &[1.0, a, b, 1.0 + a * b + 0.5])).unwrap();
            let z = v1(c(0.3, -0.9));
            let back = m.inverse().unwrap().apply(&m.apply(&z));
            prop_assert!((back - z).norm() < 1e-10);
        }
    }
}
