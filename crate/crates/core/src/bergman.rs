//! The semigroup on the FBI side in Bergman form:
//!
//! G̃(t)u(z) = â(t) ∫ e^{2Ψ_t(z, w̄)} u(w) e^{−2Φ(w)} L(dw).
//!
//! The phase Ψ_t solves a matrix Riccati system and is cross-checked
//! against the generating function of κ̃_t; the amplitude solves the
//! transport equation; Φ_t is read off from κ̃_t(Λ_Φ).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fbi::{self, lambda_of_weight, weight_of_lambda, ConjugatedSymbol, Polarization, Weight};
use crate::gaussian::{self, GaussianForm};
use crate::holomorphic::{HolomorphicGaussian, PolyGaussian};
use crate::linalg::{self, c, CMat, CVec, RMat, C64, I};
use crate::ode::{self, OdeOptions, OdeSolution};
use crate::subspace::{subspace_residual, RealSubspace};
use crate::symplectic::{ComplexSymplecticMap, HamiltonMatrix};
use crate::wavefront;

/// Minimum-eigenvalue tolerance for forms that must be semidefinite.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorOptions {
    pub ode: OdeOptions,
    pub simpson_tol: f64,
    pub phase_check_tol: f64,
}

impl Default for PropagatorOptions {
    fn default() -> Self {
        PropagatorOptions { ode: OdeOptions::default(), simpson_tol: 1e-10, phase_check_tol: 1e-8 }
    }
}

/// Ψ(z, θ) = ½ zᵀPz + zᵀQθ + ½ θᵀRθ.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPhase {
    pub p: CMat,
    pub q: CMat,
    pub r: CMat,
}

impl QuadraticPhase {
    pub fn from_polarization(psi: &Polarization) -> Self {
        let (p, q, r) = psi.blocks();
        QuadraticPhase { p, q, r }
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn eval(&self, z: &CVec, theta: &CVec) -> C64 {
        (z.transpose() * &self.p * z)[(0, 0)] * 0.5
            + (z.transpose() * &self.q * theta)[(0, 0)]
            + (theta.transpose() * &self.r * theta)[(0, 0)] * 0.5
    }

    /// Largest blockwise Frobenius difference.
    pub fn distance(&self, other: &QuadraticPhase) -> f64 {
        (&self.p - &other.p)
            .norm()
            .max((&self.q - &other.q).norm())
            .max((&self.r - &other.r).norm())
    }

    fn pack(&self) -> CVec {
        let n = self.n();
        let mut v = CVec::zeros(3 * n * n);
        for (k, m) in [&self.p, &self.q, &self.r].iter().enumerate() {
            for (i, z) in m.iter().enumerate() {
                v[k * n * n + i] = *z;
            }
        }
        v
    }

    fn unpack(v: &CVec, n: usize) -> Self {
        let block = |k: usize| CMat::from_iterator(n, n, v.rows(k * n * n, n * n).iter().cloned());
        QuadraticPhase { p: block(0), q: block(1), r: block(2) }
    }
}

/// κ̃_t = exp(−2itF̃), F̃ = J·Qtilde; when q̃ came from a real-side symbol it
/// is checked against κ_φ κ_t κ_φ⁻¹.
pub fn conjugated_flow(qt: &ConjugatedSymbol, t: f64) -> Result<ComplexSymplecticMap> {
    let f = HamiltonMatrix::from_matrix(linalg::j_complex(qt.n()) * qt.matrix());
    let k = f.flow(t)?;
    if let Some((q, kappa)) = qt.origin() {
        let kt = q.hamilton_matrix().flow(t)?;
        let other = kappa.compose(&kt).compose(&kappa.inverse());
        let r = (k.matrix() - other.matrix()).norm() / k.matrix().norm().max(1.0);
        Error::check("κ̃_t against κ_φ κ_t κ_φ⁻¹", r, 1e-9)?;
    }
    Ok(k)
}

fn require_generator(qt: &ConjugatedSymbol, t: f64) -> Result<()> {
    if !qt.is_re_nonneg() {
        return Err(Error::InvalidInput("symbol has Re q not nonnegative; it does not generate a semigroup".into()));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time must be nonnegative, got {t}")));
    }
    Ok(())
}

fn evolve_weight_unchecked(phi: &Weight, qt: &ConjugatedSymbol, t: f64) -> Result<Weight> {
    let k = conjugated_flow(qt, t)?;
    weight_of_lambda(&lambda_of_weight(phi)?.image(k.matrix())?)
}

/// Minimum eigenvalue of the real form Φ − Φ_t.
pub fn weight_gap_min(phi: &Weight, phi_t: &Weight) -> f64 {
    linalg::min_eigenvalue(&(phi.real_form() - phi_t.real_form()))
}

/// max over sample points of |∂_tΦ_t(z) + Re q̃(z, (2/i)∂_zΦ_t(z))|, with
/// the time derivative by central differences of step h around max(t, h).
pub fn eikonal_residual(phi: &Weight, qt: &ConjugatedSymbol, t: f64, h: f64, samples: usize) -> Result<f64> {
    let tc = t.max(h);
    let plus = evolve_weight_unchecked(phi, qt, tc + h)?;
    let minus = evolve_weight_unchecked(phi, qt, tc - h)?;
    let mid = evolve_weight_unchecked(phi, qt, tc)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let n = phi.n();
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let z = CVec::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let dt = (plus.eval(&z) - minus.eval(&z)) / (2.0 * h);
        let zeta = mid.dz(&z) * c(0.0, -2.0);
        let r = dt + qt.eval(&z, &zeta).re;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Φ_t with κ̃_t(Λ_Φ) = Λ_{Φ_t}.
pub fn evolve_weight(phi: &Weight, qt: &ConjugatedSymbol, t: f64) -> Result<Weight> {
    require_generator(qt, t)?;
    let phi_t = evolve_weight_unchecked(phi, qt, t)?;
    if t == 0.0 {
        Error::check("Φ_0 = Φ", phi_t.distance(phi), 1e-10)?;
    }
    let scale = phi.real_form().norm().max(1.0);
    let gap = weight_gap_min(phi, &phi_t);
    if gap < -PSD_TOL * scale {
        return Err(Error::Diagnostic { what: "Φ − Φ_t is not positive semidefinite".into(), value: gap, tol: -PSD_TOL });
    }
    let h = 1e-4;
    let bound = 100.0 * (1.0 + qt.matrix().norm()).powi(3) * h * h;
    let r = eikonal_residual(phi, qt, t, h, 10)?;
    Error::check("eikonal equation for Φ_t", r, bound)?;
    Ok(phi_t)
}

/// Right-hand side of the Riccati system for (P, Q, R).
fn riccati_rhs(a1: &CMat, a2: &CMat, a3: &CMat, ph: &QuadraticPhase) -> QuadraticPhase {
    let (p, q) = (&ph.p, &ph.q);
    let a2t = a2.transpose();
    let pa3 = p * a3;
    QuadraticPhase {
        p: a1 * c(-0.5, 0.0) + (p * a2 + &a2t * p) * I + &pa3 * p * c(2.0, 0.0),
        q: &a2t * q * I + &pa3 * q * c(2.0, 0.0),
        r: q.transpose() * a3 * q * c(2.0, 0.0),
    }
}

/// The Riccati solution on [0, t].
#[derive(Debug, Clone)]
pub struct PhasePath {
    n: usize,
    sol: OdeSolution,
}

impl PhasePath {
    pub fn at(&self, s: f64) -> QuadraticPhase {
        QuadraticPhase::unpack(&self.sol.at(s), self.n)
    }

    pub fn final_phase(&self) -> QuadraticPhase {
        QuadraticPhase::unpack(self.sol.last(), self.n)
    }

    pub fn t_end(&self) -> f64 {
        self.sol.t_end()
    }

    /// Accepted step times.
    pub fn nodes(&self) -> &[f64] {
        &self.sol.ts
    }
}

/// Integrates the Riccati system from the polarization of Φ.
pub fn riccati_phase_path(psi0: &QuadraticPhase, qt: &ConjugatedSymbol, t: f64, opts: &OdeOptions) -> Result<PhasePath> {
    let n = qt.n();
    let (a1, a2, a3) = (qt.a1(), qt.a2(), qt.a3());
    let rhs = move |_s: f64, y: &CVec| riccati_rhs(&a1, &a2, &a3, &QuadraticPhase::unpack(y, n)).pack();
    let sol = ode::dormand_prince(rhs, 0.0, psi0.pack(), t, opts)?;
    Ok(PhasePath { n, sol })
}

fn generating_blocks(psi0: &QuadraticPhase, k: &ComplexSymplecticMap) -> (CMat, CMat, CMat, CMat) {
    let n = psi0.n();
    let km = k.matrix();
    let k11 = km.view((0, 0), (n, n)).into_owned();
    let k12 = km.view((0, n), (n, n)).into_owned();
    let k21 = km.view((n, 0), (n, n)).into_owned();
    let k22 = km.view((n, n), (n, n)).into_owned();
    let m2i = c(0.0, -2.0);
    let a = k11 + &k12 * &psi0.p * m2i;
    let b = &k12 * &psi0.q * m2i;
    let cc = k21 + &k22 * &psi0.p * m2i;
    let d = &k22 * &psi0.q * m2i;
    (a, b, cc, d)
}

/// Ψ_t from the generating-function relations of graph κ̃_t: points
/// (w, −2i∂_wΨ₀(w,θ)) map to (z, −2i∂_zΨ_t(z,θ)) with ∂_θΨ_t(z,θ) = ∂_θΨ₀(w,θ).
pub fn algebraic_phase(psi0: &QuadraticPhase, k: &ComplexSymplecticMap) -> Result<QuadraticPhase> {
    let (a, b, cc, d) = generating_blocks(psi0, k);
    let a_inv = linalg::inverse(&a, "generating function block")?;
    let half_i = c(0.0, 0.5);
    let p = linalg::sym(&(&cc * &a_inv * half_i));
    let q = &d * half_i - &p * &b;
    let r = linalg::sym(&(&psi0.r - q.transpose() * &b));
    Ok(QuadraticPhase { p, q, r })
}

/// Residual of the generating-function relations for a candidate Ψ_t.
pub fn implicit_relation_residual(psi0: &QuadraticPhase, psi_t: &QuadraticPhase, k: &ComplexSymplecticMap) -> f64 {
    let (a, b, cc, d) = generating_blocks(psi0, k);
    let m2i = c(0.0, -2.0);
    // ζ relation: [c, d] = −2i (P[a, b] + Q[0, I])
    let r1 = (&cc - (&psi_t.p * &a) * m2i).norm() + (&d - (&psi_t.p * &b + &psi_t.q) * m2i).norm();
    // θ relation: Qᵀ[a, b] + R[0, I] = [Q₀ᵀ, R₀]
    let r2 = (psi_t.q.transpose() * &a - psi0.q.transpose()).norm()
        + (psi_t.q.transpose() * &b + &psi_t.r - &psi0.r).norm();
    (r1 + r2) / k.matrix().norm().max(1.0)
}

/// Ψ_t by Riccati integration, with the ODE result required to satisfy the
/// generating-function relations and to agree with [`algebraic_phase`].
#[derive(Debug, Clone)]
pub struct EikonalSolution {
    pub path: PhasePath,
    pub phase: QuadraticPhase,
    pub ode_vs_algebraic: f64,
    pub implicit_residual: f64,
}

pub fn eikonal_phase(psi0: &Polarization, qt: &ConjugatedSymbol, t: f64, opts: &PropagatorOptions) -> Result<EikonalSolution> {
    require_generator(qt, t)?;
    let start = QuadraticPhase::from_polarization(psi0);
    let path = riccati_phase_path(&start, qt, t, &opts.ode)?;
    let phase = path.final_phase();
    let k = conjugated_flow(qt, t)?;
    let alg = algebraic_phase(&start, &k)?;
    let ode_vs_algebraic = phase.distance(&alg);
    let implicit_residual = implicit_relation_residual(&start, &phase, &k);
    Error::check("Riccati phase against generating function", ode_vs_algebraic, opts.phase_check_tol)?;
    Error::check("generating-function relations for Riccati phase", implicit_residual, opts.phase_check_tol)?;
    Ok(EikonalSolution { path, phase, ode_vs_algebraic, implicit_residual })
}

/// β(s) = tr(A₂ + A₃ (2/i) P_s).
pub fn transport_rate(qt: &ConjugatedSymbol, p: &CMat) -> C64 {
    (qt.a2() + qt.a3() * p * c(0.0, -2.0)).trace()
}

/// â(t) = C_Φ exp((i/2) ∫₀ᵗ β), the integral by adaptive Simpson on each
/// accepted step of the phase path.
pub fn transport_amplitude(qt: &ConjugatedSymbol, path: &PhasePath, t: f64, c_phi: C64, simpson_tol: f64) -> Result<C64> {
    if !(t >= 0.0) || t > path.t_end() + 1e-12 {
        return Err(Error::InvalidInput(format!("amplitude time {t} outside the phase path")));
    }
    let beta = |s: f64| transport_rate(qt, &path.at(s).p);
    let nodes = path.nodes();
    let pieces = nodes.len().saturating_sub(1).max(1);
    let mut integral = c(0.0, 0.0);
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1].min(t));
        if a >= t {
            break;
        }
        integral += ode::adaptive_simpson(&beta, a, b, simpson_tol / pieces as f64)?;
    }
    let amp = c_phi * (integral * c(0.0, 0.5)).exp();
    if !(amp.norm() > 0.0) || !amp.is_finite() {
        return Err(Error::Diagnostic { what: "amplitude vanished or overflowed".into(), value: amp.norm(), tol: 0.0 });
    }
    Ok(amp)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelDiagnostics {
    /// Minimum eigenvalue of the R_t form (must be ≥ −1e−9).
    pub psd_min: f64,
    /// Distance between the radical of R_t and the graph of θ ↦ κ̃♭_t(θ̄).
    pub radical_residual: f64,
    pub ode_vs_algebraic: f64,
    pub implicit_residual: f64,
    /// Minimum eigenvalue of Φ − Φ_t.
    pub weight_gap_min: f64,
}

#[derive(Debug, Clone)]
pub struct BergmanKernel {
    pub t: f64,
    pub amp: C64,
    pub phase: QuadraticPhase,
    pub src_weight: Weight,
    pub dst_weight: Weight,
    pub diagnostics: KernelDiagnostics,
}

impl BergmanKernel {
    pub fn n(&self) -> usize {
        self.src_weight.n()
    }
}

/// Real 4n×4n matrix of (z, θ) ↦ Φ_t(z) + Φ(θ̄) − 2 Re Ψ_t(z, θ), value XᵀRX
/// in X = (Re z, Im z, Re θ, Im θ).
pub fn remainder_form(phi: &Weight, phi_t: &Weight, phase: &QuadraticPhase) -> RMat {
    let n = phi.n();
    let dim = 4 * n;
    let lz = gaussian::holo(n, 0, dim);
    let lth = gaussian::holo(n, 2 * n, dim);
    let mut f = GaussianForm::new(dim);
    f.add_bilinear(&lz, &phase.p, &lz, c(1.0, 0.0));
    f.add_bilinear(&lz, &phase.q, &lth, c(2.0, 0.0));
    f.add_bilinear(&lth, &phase.r, &lth, c(1.0, 0.0));
    let mut r = linalg::re(&f.m) * -0.5;
    let mut flip = RMat::identity(2 * n, 2 * n);
    for k in n..2 * n {
        flip[(k, k)] = -1.0;
    }
    let mut top = r.view_mut((0, 0), (2 * n, 2 * n));
    top += phi_t.real_form();
    let mut bottom = r.view_mut((2 * n, 2 * n), (2 * n, 2 * n));
    bottom += &flip * phi.real_form() * &flip;
    linalg::sym_real(&r)
}

/// Graph {(κ♭(θ̄), θ)} in realified (z, θ).
fn conjugate_graph(flat: &RMat, n: usize) -> RealSubspace {
    let mut flip = RMat::identity(2 * n, 2 * n);
    for k in n..2 * n {
        flip[(k, k)] = -1.0;
    }
    let mut basis = RMat::zeros(4 * n, 2 * n);
    basis.view_mut((0, 0), (2 * n, 2 * n)).copy_from(&(flat * &flip));
    basis.view_mut((2 * n, 0), (2 * n, 2 * n)).copy_from(&RMat::identity(2 * n, 2 * n));
    RealSubspace::span(&basis)
}

pub fn bergman_kernel(phi: &Weight, qt: &ConjugatedSymbol, t: f64, opts: &PropagatorOptions) -> Result<BergmanKernel> {
    require_generator(qt, t)?;
    let n = phi.n();
    let (psi, _) = fbi::polarize(phi)?;
    let eik = eikonal_phase(&psi, qt, t, opts)?;
    let amp = transport_amplitude(qt, &eik.path, t, c(phi.bergman_constant(), 0.0), opts.simpson_tol)?;
    let phi_t = evolve_weight(phi, qt, t)?;
    if t == 0.0 {
        let r0 = eik.phase.distance(&QuadraticPhase::from_polarization(&psi));
        Error::check("t = 0 phase equals the polarization", r0, 1e-10)?;
        Error::check("t = 0 amplitude equals C_Φ", (amp - c(phi.bergman_constant(), 0.0)).norm(), 1e-10)?;
    }
    let rform = remainder_form(phi, &phi_t, &eik.phase);
    let scale = rform.norm().max(1.0);
    let psd_min = linalg::min_eigenvalue(&rform);
    if psd_min < -PSD_TOL * scale {
        return Err(Error::Diagnostic { what: "R_t form is not positive semidefinite".into(), value: psd_min, tol: -PSD_TOL });
    }
    let k = conjugated_flow(qt, t)?;
    let flat = wavefront::kappa_flat(&k, phi, &phi_t)?;
    let graph = conjugate_graph(flat.matrix(), n);
    let radical = RealSubspace::from_orthonormal(linalg::null_space(&rform, 1e-9, 0.0));
    let on_graph = (&rform * graph.basis()).norm() / scale;
    let radical_residual = subspace_residual(&radical, &graph)?.max(on_graph);
    Error::check("radical of R_t is the graph of κ̃♭_t", radical_residual, 1e-8)?;
    let diagnostics = KernelDiagnostics {
        psd_min,
        radical_residual,
        ode_vs_algebraic: eik.ode_vs_algebraic,
        implicit_residual: eik.implicit_residual,
        weight_gap_min: weight_gap_min(phi, &phi_t),
    };
    Ok(BergmanKernel { t, amp, phase: eik.phase, src_weight: phi.clone(), dst_weight: phi_t, diagnostics })
}

/// â ∫ e^{2Ψ_t(z, w̄)} u(w) e^{−2Φ(w)} L(dw) in closed form.
pub fn apply_kernel(k: &BergmanKernel, u: &HolomorphicGaussian) -> Result<HolomorphicGaussian> {
    let n = k.n();
    if u.n() != n {
        return Err(Error::Dimension("function and kernel differ in dimension".into()));
    }
    let dim = 4 * n;
    let lz = gaussian::holo(n, 0, dim);
    let lw = gaussian::holo(n, 2 * n, dim);
    let lwb = gaussian::antiholo(n, 2 * n, dim);
    let mut f = GaussianForm::new(dim);
    f.add_bilinear(&lz, &k.phase.p, &lz, c(1.0, 0.0));
    f.add_bilinear(&lz, &k.phase.q, &lwb, c(2.0, 0.0));
    f.add_bilinear(&lwb, &k.phase.r, &lwb, c(1.0, 0.0));
    f.add_bilinear(&lw, &u.g, &lw, c(0.5, 0.0));
    f.add_linear(&lw, &u.l, c(1.0, 0.0));
    f.add_real_form(&gaussian::select(2 * n, 2 * n, dim), &k.src_weight.real_form(), -2.0);
    f.scale(k.amp * u.alpha);
    let ws: Vec<usize> = (2 * n..4 * n).collect();
    let out = f.integrate(&ws)?;
    let hp = gaussian::holomorphic_part(&out, n)?;
    Error::check("kernel output is holomorphic", hp.antiholomorphic_residual, 1e-10)?;
    HolomorphicGaussian::new(hp.alpha, hp.g, hp.l)
}

/// Composition G̃(s)G̃(t) as (amplitude, phase) by integrating out the middle
/// variable of the two kernels.
pub fn compose_kernels(ks: &BergmanKernel, kt: &BergmanKernel) -> Result<(C64, QuadraticPhase)> {
    let n = ks.n();
    if kt.n() != n || ks.src_weight.distance(&kt.src_weight) > 1e-12 {
        return Err(Error::InvalidInput("kernels act on different weighted spaces".into()));
    }
    let dim = 6 * n;
    let lz = gaussian::holo(n, 0, dim);
    let lth = gaussian::holo(n, 2 * n, dim);
    let lw = gaussian::holo(n, 4 * n, dim);
    let lwb = gaussian::antiholo(n, 4 * n, dim);
    let mut f = GaussianForm::new(dim);
    f.add_bilinear(&lz, &ks.phase.p, &lz, c(1.0, 0.0));
    f.add_bilinear(&lz, &ks.phase.q, &lwb, c(2.0, 0.0));
    f.add_bilinear(&lwb, &ks.phase.r, &lwb, c(1.0, 0.0));
    f.add_bilinear(&lw, &kt.phase.p, &lw, c(1.0, 0.0));
    f.add_bilinear(&lw, &kt.phase.q, &lth, c(2.0, 0.0));
    f.add_bilinear(&lth, &kt.phase.r, &lth, c(1.0, 0.0));
    f.add_real_form(&gaussian::select(2 * n, 4 * n, dim), &ks.src_weight.real_form(), -2.0);
    f.scale(ks.amp * kt.amp);
    let ws: Vec<usize> = (4 * n..6 * n).collect();
    let out = f.integrate(&ws)?;
    // reorder (Re z, Im z, Re θ, Im θ) → (Re z, Re θ, Im z, Im θ)
    let order: Vec<usize> = (0..n).chain(2 * n..3 * n).chain(n..2 * n).chain(3 * n..4 * n).collect();
    let perm = GaussianForm {
        m: out.m.select_rows(&order).select_columns(&order),
        v: out.v.select_rows(&order),
        amp: out.amp,
    };
    let hp = gaussian::holomorphic_part(&perm, 2 * n)?;
    Error::check("composed kernel is holomorphic in (z, θ)", hp.antiholomorphic_residual, 1e-10)?;
    Error::check("composed kernel has no linear term", hp.l.norm(), 1e-10)?;
    let g = hp.g;
    let half = c(0.5, 0.0);
    let phase = QuadraticPhase {
        p: g.view((0, 0), (n, n)) * half,
        q: g.view((0, n), (n, n)) * half,
        r: g.view((n, n), (n, n)) * half,
    };
    Ok((hp.alpha, phase))
}

/// max(|â − â'|, blockwise phase distance) between G̃(s)G̃(t) and G̃(s+t).
pub fn semigroup_residual(ks: &BergmanKernel, kt: &BergmanKernel, kst: &BergmanKernel) -> Result<f64> {
    let (amp, phase) = compose_kernels(ks, kt)?;
    Ok((amp - kst.amp).norm().max(phase.distance(&kst.phase)))
}

/// q̃^w(z, D_z)u for u = α e^{½zᵀgz + lᵀz}, with
/// q̃^w = ½A₁z·z + A₂z·D_z + (1/2i) tr A₂ + ½A₃D_z·D_z.
pub fn weyl_apply(qt: &ConjugatedSymbol, u: &HolomorphicGaussian) -> Result<PolyGaussian> {
    if qt.n() != u.n() {
        return Err(Error::Dimension("symbol and function differ in dimension".into()));
    }
    let (a1, a2, a3) = (qt.a1(), qt.a2(), qt.a3());
    let (g, l) = (&u.g, &u.l);
    let a2t = a2.transpose();
    let c2 = linalg::sym(&(&a1 - (&a2t * g + g * &a2) * I - g * &a3 * g));
    let c1 = -(&a2t * l) * I - g * &a3 * l;
    let c0 = a2.trace() * c(0.0, -0.5) - (&a3 * g).trace() * 0.5 - (l.transpose() * &a3 * l)[(0, 0)] * 0.5;
    Ok(PolyGaussian { base: u.clone(), c0, c1, c2 })
}

/// Coefficient norm of ∂_t(G̃(t)u) + q̃^w G̃(t)u with the time derivative
/// by central differences of step h; O(h²).
pub fn generator_defect(
    phi: &Weight,
    qt: &ConjugatedSymbol,
    u: &HolomorphicGaussian,
    t: f64,
    h: f64,
    opts: &PropagatorOptions,
) -> Result<f64> {
    if !(h > 0.0) || t - h < 0.0 {
        return Err(Error::InvalidInput(format!("need 0 < h ≤ t, got t = {t}, h = {h}")));
    }
    let um = apply_kernel(&bergman_kernel(phi, qt, t - h, opts)?, u)?;
    let u0 = apply_kernel(&bergman_kernel(phi, qt, t, opts)?, u)?;
    let up = apply_kernel(&bergman_kernel(phi, qt, t + h, opts)?, u)?;
    let inv = c(1.0 / (2.0 * h), 0.0);
    let time = PolyGaussian {
        base: u0.clone(),
        c0: (up.alpha - um.alpha) * inv / u0.alpha,
        c1: (&up.l - &um.l) * inv,
        c2: (&up.g - &um.g) * inv,
    };
    let weyl = weyl_apply(qt, &u0)?;
    let sum = PolyGaussian { base: u0, c0: time.c0 + weyl.c0, c1: time.c1 + weyl.c1, c2: time.c2 + weyl.c2 };
    Ok(sum.coefficient_norm())
}
