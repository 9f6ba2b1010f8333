//! End-to-end runs through frames other than the standard one and through
//! two-dimensional data.

use qsemi_core::bergman::{self, PropagatorOptions};
use qsemi_core::catalog;
use qsemi_core::fbi::{self, standard_phase, FbiPhase, RealData};
use qsemi_core::linalg::{c, CMat, CVec, RVec};
use qsemi_core::subspace::subspace_residual;
use qsemi_core::symplectic;
use qsemi_core::wavefront::{self, VerifyOptions};

fn tilted_frame() -> FbiPhase {
    let s = |z| CMat::from_element(1, 1, z);
    FbiPhase::new(s(c(0.2, 0.5)), s(c(0.4, -1.3)), s(c(0.3, 2.0))).unwrap()
}

#[test]
fn theorem_holds_in_a_tilted_frame() {
    let frame = tilted_frame();
    for (q, data, t, dim) in [
        (catalog::heat(), RealData::Delta, 0.5, 0),
        (catalog::heat(), RealData::Constant, 1.0, 1),
        (catalog::free_schrodinger(), RealData::Delta, 0.5, 1),
        (catalog::harmonic_oscillator(), RealData::Delta, 1.2, 1),
    ] {
        let r = wavefront::verify_theorem(&q, &frame, &data, t, &VerifyOptions::default()).unwrap();
        assert!(r.pass, "{} t = {t}: angle {}", data.kind(), r.max_angle);
        assert_eq!(r.measured.dim(), dim);
        assert!(r.fbi_side_residual <= 1e-8);
    }
}

#[test]
fn real_side_wavefront_is_frame_independent() {
    for q in [catalog::free_schrodinger(), catalog::harmonic_oscillator()] {
        let a = wavefront::verify_theorem(&q, &standard_phase(1), &RealData::Delta, 0.8, &VerifyOptions::default()).unwrap();
        let b = wavefront::verify_theorem(&q, &tilted_frame(), &RealData::Delta, 0.8, &VerifyOptions::default()).unwrap();
        assert!(subspace_residual(&a.wf_in_real, &b.wf_in_real).unwrap() <= 1e-8);
        assert!(subspace_residual(&a.predicted_real, &b.predicted_real).unwrap() <= 1e-8);
        // measured sets pulled back to the real side agree as well
        let back = |r: &wavefront::TheoremReport, frame: &FbiPhase| {
            let inv = wavefront::kappa_flat_phase(frame).unwrap().inverse().unwrap();
            qsemi_core::subspace::map_subspace(inv.matrix(), &r.measured).unwrap()
        };
        assert!(subspace_residual(&back(&a, &standard_phase(1)), &back(&b, &tilted_frame())).unwrap() <= 1e-8);
    }
}

#[test]
fn chirp_data_under_heat() {
    // e^{−iy²/2}: tempered, singular only along ξ = −x on the real side
    let data = RealData::gaussian(CMat::from_element(1, 1, c(0.0, 1.0)), CVec::zeros(1)).unwrap();
    let r = wavefront::verify_theorem(&catalog::heat(), &standard_phase(1), &data, 0.5, &VerifyOptions::default()).unwrap();
    assert_eq!(r.wf_in_real.dim(), 1);
    assert!(r.wf_in_real.contains(&RVec::from_vec(vec![1.0, -1.0]), 1e-8));
    assert!(r.pass);
    assert_eq!(r.measured.dim(), 0);
}

#[test]
fn kfp_with_two_dimensional_data() {
    let q = catalog::kfp(1.0);
    let frame = standard_phase(2);
    let data = RealData::gaussian(CMat::identity(2, 2) * c(0.0, 0.5), CVec::zeros(2)).unwrap();
    let opts = VerifyOptions { grid_density: 16, ..VerifyOptions::default() };
    for t in [0.25, 1.0] {
        let r = wavefront::verify_theorem(&q, &frame, &data, t, &opts).unwrap();
        assert!(r.pass);
        assert_eq!(r.measured.dim(), 0);
    }
    // without regularization the constant is singular along all of real x-space
    let r = wavefront::verify_theorem(&catalog::kfp(1.0), &frame, &RealData::Constant, 0.5, &opts).unwrap();
    assert_eq!(r.input.singular.dim(), 2);
    assert_eq!(r.measured.dim(), 0);
    assert!(r.pass);
}

#[test]
fn kernel_maps_into_evolved_space() {
    // G̃(t)u lies in H_{Φ_t}: its exponent form relative to Φ_t is ⪰ 0
    let frame = standard_phase(2);
    let phi = fbi::weight_of_phase(&frame).unwrap();
    let qt = fbi::egorov_symbol(&catalog::kfp(1.0), &frame).unwrap();
    let u = fbi::fbi_transform(&frame, &RealData::Delta).unwrap();
    let k = bergman::bergman_kernel(&phi, &qt, 0.5, &PropagatorOptions::default()).unwrap();
    let out = bergman::apply_kernel(&k, &u).unwrap();
    let form = wavefront::exponent_form(&out, &k.dst_weight);
    assert!(qsemi_core::linalg::min_eigenvalue(&form) >= -1e-9);
    assert!(fbi::weighted_norm_sq(&out, &phi).unwrap().is_finite());
}

#[test]
fn kfp_flow_is_large_but_symplectic() {
    let q = catalog::kfp(1.0);
    for t in [0.1, 0.7, 4.0] {
        let k = symplectic::hamilton_flow(&q, t).unwrap();
        assert!(k.symplectic_residual() <= 1e-10);
    }
    assert!(symplectic::hamilton_flow(&q, 1e3).is_err());
}
