//! Quadratic symbols on phase space, their Hamilton matrices and flows,
//! singular spaces and positivity of complex canonical maps.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec, RMat, I};
use crate::subspace::{intersect_subspaces, subspace_residual, RealSubspace, TotallyRealSubspace};

/// Largest admissible |t|·‖F‖ for a flow.
pub const FLOW_BOUND: f64 = 50.0;

/// Sample times for the dynamical description of the singular space.
pub const DYNAMICAL_SAMPLES: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

const RE_NONNEG_TOL: f64 = 1e-10;

/// q(X) = QX·X on R^{2n}, coordinates (x, ξ).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSymbol {
    n: usize,
    q: CMat,
    re_nonneg: bool,
}

impl QuadraticSymbol {
    pub fn new(n: usize, q: CMat) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension n must be positive".into()));
        }
        if q.nrows() != 2 * n || q.ncols() != 2 * n {
            return Err(Error::Dimension(format!(
                "Q must be {}x{}, got {}x{}",
                2 * n,
                2 * n,
                q.nrows(),
                q.ncols()
            )));
        }
        if !linalg::all_finite(&q) {
            return Err(Error::NonFinite("Q".into()));
        }
        let q = linalg::sym(&q);
        let re_nonneg = linalg::min_eigenvalue(&linalg::re(&q)) >= -RE_NONNEG_TOL;
        Ok(QuadraticSymbol { n, q, re_nonneg })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.q
    }

    /// Whether Re q ≥ 0, i.e. the symbol generates a contraction semigroup.
    pub fn re_nonneg(&self) -> bool {
        self.re_nonneg
    }

    pub fn eval(&self, x: &CVec) -> crate::linalg::C64 {
        (x.transpose() * &self.q * x)[(0, 0)]
    }

    pub fn hamilton_matrix(&self) -> HamiltonMatrix {
        HamiltonMatrix { f: linalg::j_complex(self.n) * &self.q }
    }
}

pub fn build_symbol(n: usize, q_re: &RMat, q_im: &RMat) -> Result<QuadraticSymbol> {
    if q_re.shape() != q_im.shape() {
        return Err(Error::Dimension("Q_re and Q_im differ in shape".into()));
    }
    if q_re.iter().chain(q_im.iter()).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("Q".into()));
    }
    QuadraticSymbol::new(n, linalg::from_parts(q_re, q_im))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonMatrix {
    f: CMat,
}

impl HamiltonMatrix {
    pub fn from_matrix(f: CMat) -> Self {
        HamiltonMatrix { f }
    }

    pub fn matrix(&self) -> &CMat {
        &self.f
    }

    pub fn re(&self) -> RMat {
        linalg::re(&self.f)
    }

    pub fn im(&self) -> RMat {
        linalg::im(&self.f)
    }

    pub fn n(&self) -> usize {
        self.f.nrows() / 2
    }

    /// ‖FᵀJ + JF‖.
    pub fn identity_residual(&self) -> f64 {
        let j = linalg::j_complex(self.n());
        (self.f.transpose() * &j + &j * &self.f).norm()
    }

    /// exp(-2itF).
    pub fn flow(&self, t: f64) -> Result<ComplexSymplecticMap> {
        let size = t.abs() * self.f.norm();
        if !(size <= FLOW_BOUND) {
            return Err(Error::FlowBound { value: size, limit: FLOW_BOUND });
        }
        Ok(ComplexSymplecticMap { k: linalg::expm(&(&self.f * c(0.0, -2.0 * t))) })
    }
}

pub fn hamilton_matrix(q: &QuadraticSymbol) -> HamiltonMatrix {
    q.hamilton_matrix()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSymplecticMap {
    k: CMat,
}

impl ComplexSymplecticMap {
    pub const TOL: f64 = 1e-10;

    pub fn new(k: CMat) -> Result<Self> {
        if k.nrows() != k.ncols() || !k.nrows().is_multiple_of(2) {
            return Err(Error::Dimension(format!("map is {}x{}", k.nrows(), k.ncols())));
        }
        let m = ComplexSymplecticMap { k };
        let r = m.symplectic_residual();
        Error::check("symplectic identity KᵀJK = J", r, Self::TOL)?;
        Ok(m)
    }

    pub fn identity(dim: usize) -> Self {
        ComplexSymplecticMap { k: CMat::identity(dim, dim) }
    }

    pub fn matrix(&self) -> &CMat {
        &self.k
    }

    pub fn n(&self) -> usize {
        self.k.nrows() / 2
    }

    /// ‖KᵀJK − J‖ / max(1, ‖K‖²).
    pub fn symplectic_residual(&self) -> f64 {
        let j = linalg::j_complex(self.n());
        let scale = self.k.norm().powi(2).max(1.0);
        (self.k.transpose() * &j * &self.k - j).norm() / scale
    }

    /// self ∘ other.
    pub fn compose(&self, other: &ComplexSymplecticMap) -> ComplexSymplecticMap {
        ComplexSymplecticMap { k: &self.k * &other.k }
    }

    /// K⁻¹ = J⁻¹ Kᵀ J.
    pub fn inverse(&self) -> ComplexSymplecticMap {
        let j = linalg::j_complex(self.n());
        ComplexSymplecticMap { k: -(&j * self.k.transpose() * &j) }
    }

    pub fn apply(&self, x: &CVec) -> CVec {
        &self.k * x
    }
}

pub fn hamilton_flow(q: &QuadraticSymbol, t: f64) -> Result<ComplexSymplecticMap> {
    q.hamilton_matrix().flow(t)
}

/// exp(2t Im F), the flow of the Hamilton field of Im q.
pub fn im_flow(q: &QuadraticSymbol, t: f64) -> Result<RMat> {
    let f = q.hamilton_matrix();
    let size = t.abs() * f.matrix().norm();
    if !(size <= FLOW_BOUND) {
        return Err(Error::FlowBound { value: size, limit: FLOW_BOUND });
    }
    Ok(linalg::expm_real(&(f.im() * (2.0 * t))))
}

/// ∩_{j<2n} ker[(Re F)(Im F)^j] ∩ R^{2n}.
pub fn singular_space_algebraic(q: &QuadraticSymbol) -> Result<RealSubspace> {
    let f = q.hamilton_matrix();
    let dim = 2 * q.n();
    let (ref_, imf) = (f.re(), f.im());
    let fnorm = f.matrix().norm();
    let mut s = RealSubspace::full(dim);
    let mut power = RMat::identity(dim, dim);
    for j in 0..dim {
        let m = &ref_ * &power;
        let ker = RealSubspace::from_orthonormal(linalg::null_space(
            &m,
            linalg::RANK_RTOL,
            fnorm.powi(j as i32 + 1),
        ));
        s = intersect_subspaces(&s, &ker)?;
        power = &power * &imf;
    }
    Ok(s)
}

/// ∩_s ker(Im e^{2isF}) ∩ R^{2n} over the sample times.
pub fn singular_space_dynamical(q: &QuadraticSymbol) -> Result<RealSubspace> {
    let f = q.hamilton_matrix();
    let dim = 2 * q.n();
    let mut s = RealSubspace::full(dim);
    for &t in DYNAMICAL_SAMPLES.iter() {
        let e = linalg::expm(&(f.matrix() * c(0.0, 2.0 * t)));
        let ker = RealSubspace::from_orthonormal(linalg::null_space(
            &linalg::im(&e),
            linalg::RANK_RTOL,
            e.norm(),
        ));
        s = intersect_subspaces(&s, &ker)?;
    }
    Ok(s)
}

/// Singular space, cross-checked against its dynamical description.
pub fn singular_space(q: &QuadraticSymbol) -> Result<RealSubspace> {
    let alg = singular_space_algebraic(q)?;
    let dynm = singular_space_dynamical(q)?;
    let r = subspace_residual(&alg, &dynm)?;
    Error::check("singular space: kernel intersection vs dynamical description", r, 1e-8)?;
    Ok(alg)
}

/// Real 4n×4n matrix of X ↦ (1/i)(σ(KX, ι KX) − σ(X, ι X)) in coordinates
/// (Re X, Im X).
pub fn positivity_form(k: &ComplexSymplecticMap, sigma: &TotallyRealSubspace) -> Result<RMat> {
    let d = k.matrix().nrows();
    if sigma.dim() != d {
        return Err(Error::Dimension("map and totally real subspace differ in dimension".into()));
    }
    let j = linalg::j_complex(d / 2);
    let nmat = sigma.involution_matrix();
    let kk = k.matrix();
    let n_k = kk.transpose() * j.transpose() * &nmat * kk.conjugate();
    let n_0 = j.transpose() * &nmat;
    let delta = n_k - n_0;
    let mut l = CMat::zeros(d, 2 * d);
    for i in 0..d {
        l[(i, i)] = c(1.0, 0.0);
        l[(i, d + i)] = I;
    }
    let form = linalg::sym(&(l.transpose() * delta * l.conjugate() * (-I)));
    let scale = form.norm().max(1.0);
    Error::check("positivity form is real", linalg::im(&form).norm() / scale, 1e-9)?;
    Ok(linalg::re(&form))
}

/// Minimum eigenvalue of [`positivity_form`]; K is positive relative to Σ
/// iff this is ≥ −tol.
pub fn positivity_defect(k: &ComplexSymplecticMap, sigma: &TotallyRealSubspace) -> Result<f64> {
    Ok(linalg::min_eigenvalue(&positivity_form(k, sigma)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::{CVec, C64};
    use proptest::prelude::*;

    fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn cm(rows: usize, data: &[C64]) -> CMat {
        CMat::from_row_slice(rows, data.len() / rows, data)
    }

    #[test]
    fn heat_symbol_is_valid_and_nonnegative() {
        let q = catalog::heat();
        assert!(q.re_nonneg());
        let f = q.hamilton_matrix();
        assert!(close(f.matrix(), &cm(2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]), 0.0));
    }

    #[test]
    fn zero_symbol_has_zero_hamilton_matrix() {
        let q = QuadraticSymbol::new(1, CMat::zeros(2, 2)).unwrap();
        assert_eq!(q.hamilton_matrix().matrix().norm(), 0.0);
        assert!(q.re_nonneg());
    }

    #[test]
    fn hamilton_matrices_of_catalog_examples() {
        let ho = catalog::harmonic_oscillator().hamilton_matrix();
        assert!(close(ho.matrix(), &(linalg::j_complex(1) * I), 1e-15));
        let fs = catalog::free_schrodinger().hamilton_matrix();
        assert!(close(fs.matrix(), &cm(2, &[c(0., 0.), I, c(0., 0.), c(0., 0.)]), 1e-15));
    }

    #[test]
    fn symbol_construction_errors() {
        let r = RMat::zeros(3, 3);
        assert!(matches!(build_symbol(1, &r, &r), Err(Error::Dimension(_))));
        let mut nan = RMat::zeros(2, 2);
        nan[(0, 0)] = f64::NAN;
        assert!(matches!(build_symbol(1, &nan, &RMat::zeros(2, 2)), Err(Error::NonFinite(_))));
    }

    #[test]
    fn symbol_is_symmetrized() {
        let re = RMat::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let q = build_symbol(1, &re, &RMat::zeros(2, 2)).unwrap();
        assert_eq!(q.matrix()[(0, 1)], c(1.0, 0.0));
        assert_eq!(q.matrix()[(1, 0)], c(1.0, 0.0));
    }

    #[test]
    fn flows_of_catalog_examples() {
        let t = 0.37;
        let fs = hamilton_flow(&catalog::free_schrodinger(), t).unwrap();
        assert!(close(fs.matrix(), &cm(2, &[c(1., 0.), c(2. * t, 0.), c(0., 0.), c(1., 0.)]), 1e-14));
        let ho = hamilton_flow(&catalog::harmonic_oscillator(), t).unwrap();
        let (co, si) = ((2. * t).cos(), (2. * t).sin());
        assert!(close(ho.matrix(), &cm(2, &[c(co, 0.), c(si, 0.), c(-si, 0.), c(co, 0.)]), 1e-14));
        let id = hamilton_flow(&catalog::kfp(1.0), 0.0).unwrap();
        assert!(close(id.matrix(), &CMat::identity(4, 4), 0.0));
    }

    #[test]
    fn flow_bound_enforced() {
        assert!(matches!(hamilton_flow(&catalog::heat(), 1e3), Err(Error::FlowBound { .. })));
    }

    #[test]
    fn im_flows_of_catalog_examples() {
        let t = 0.8;
        let heat = im_flow(&catalog::heat(), t).unwrap();
        assert!((heat - RMat::identity(2, 2)).norm() < 1e-15);
        let fs = im_flow(&catalog::free_schrodinger(), t).unwrap();
        assert!((fs - RMat::from_row_slice(2, 2, &[1.0, 2.0 * t, 0.0, 1.0])).norm() < 1e-14);
        let ho = im_flow(&catalog::harmonic_oscillator(), t).unwrap();
        let (co, si) = ((2. * t).cos(), (2. * t).sin());
        assert!((ho - RMat::from_row_slice(2, 2, &[co, si, -si, co])).norm() < 1e-14);
    }

    #[test]
    fn singular_spaces_of_catalog_examples() {
        let heat = singular_space(&catalog::heat()).unwrap();
        assert_eq!(heat.dim(), 1);
        assert!(heat.basis()[(1, 0)].abs() < 1e-14);
        assert_eq!(singular_space(&catalog::harmonic_oscillator()).unwrap().dim(), 2);
        assert_eq!(singular_space(&catalog::free_schrodinger()).unwrap().dim(), 2);
        assert_eq!(singular_space(&catalog::kfp(1.0)).unwrap().dim(), 0);
    }

    #[test]
    fn positivity_defect_examples() {
        let real = TotallyRealSubspace::real(2);
        let id = ComplexSymplecticMap::identity(2);
        assert_eq!(positivity_defect(&id, &real).unwrap(), 0.0);
        for t in [0.1, 1.0, 5.0] {
            let heat = hamilton_flow(&catalog::heat(), t).unwrap();
            assert!(positivity_defect(&heat, &real).unwrap() >= -1e-10);
            let ho = hamilton_flow(&catalog::harmonic_oscillator(), t).unwrap();
            let form = positivity_form(&ho, &real).unwrap();
            assert!(form.norm() < 1e-13, "t={t}: {}", form.norm());
        }
    }

    #[test]
    fn positivity_form_matches_direct_evaluation() {
        // oracle: evaluate (1/i)(σ(KX, conj KX) − σ(X, conj X)) directly
        let k = hamilton_flow(&catalog::kfp(1.0), 0.6).unwrap();
        let form = positivity_form(&k, &TotallyRealSubspace::real(4)).unwrap();
        let j = linalg::j_complex(2);
        let sigma = |a: &CVec, b: &CVec| ((&j * a).transpose() * b)[(0, 0)];
        let y = crate::linalg::RVec::from_fn(8, |i, _| (1.3 * i as f64).sin());
        let x = CVec::from_fn(4, |i, _| c(y[i], y[4 + i]));
        let kx = k.apply(&x);
        let direct = (sigma(&kx, &kx.conjugate()) - sigma(&x, &x.conjugate())) * (-I);
        let via_form = (y.transpose() * &form * &y)[(0, 0)];
        assert!(direct.im.abs() < 1e-12);
        assert!((direct.re - via_form).abs() < 1e-12 * (1.0 + via_form.abs()));
    }

    proptest! {
        #[test]
        fn hamilton_identity_for_random_symbols(v in proptest::collection::vec(-2.0f64..2.0, 32)) {
            let re = RMat::from_row_slice(4, 4, &v[0..16]);
            let im = RMat::from_row_slice(4, 4, &v[16..32]);
            let q = build_symbol(2, &re, &im).unwrap();
            let f = q.hamilton_matrix();
            prop_assert!(f.identity_residual() <= 1e-12 * f.matrix().norm().max(1.0));
        }

        #[test]
        fn flows_are_symplectic_and_conserve_q(
            v in proptest::collection::vec(-1.0f64..1.0, 20),
            t in 0.0f64..2.0,
        ) {
            let re = RMat::from_row_slice(2, 2, &[v[0], v[1], v[1], v[2]]);
            let im = RMat::from_row_slice(2, 2, &[v[3], v[4], v[4], v[5]]);
            let q = build_symbol(1, &re, &im).unwrap();
            let k = hamilton_flow(&q, t).unwrap();
            prop_assert!(k.symplectic_residual() <= 1e-10);
            let x = CVec::from_fn(2, |i, _| c(v[6 + i], v[8 + i]));
            let before = q.eval(&x);
            let after = q.eval(&k.apply(&x));
            prop_assert!((before - after).norm() <= 1e-9 * (1.0 + before.norm() + k.matrix().norm().powi(2)));
        }

        #[test]
        fn flow_group_law(s in 0.0f64..1.0, t in 0.0f64..1.0) {
            for q in catalog::all() {
                let ks = hamilton_flow(&q.symbol, s).unwrap();
                let kt = hamilton_flow(&q.symbol, t).unwrap();
                let kst = hamilton_flow(&q.symbol, s + t).unwrap();
                prop_assert!((ks.compose(&kt).matrix() - kst.matrix()).norm() <= 1e-9 * kst.matrix().norm());
            }
        }
    }
}
