//! Adaptive Dormand–Prince 5(4) integration for complex state vectors with
//! cubic Hermite dense output, and adaptive Simpson quadrature.

use crate::error::{Error, Result};
use crate::linalg::{c, CVec, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub atol: f64,
    pub rtol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { atol: 1e-11, rtol: 1e-11, max_step: 0.05, max_steps: 2_000_000 }
    }
}

/// Accepted steps (t_i, y_i, y'_i), increasing in t.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub ts: Vec<f64>,
    pub ys: Vec<CVec>,
    pub fs: Vec<CVec>,
}

impl OdeSolution {
    pub fn t_end(&self) -> f64 {
        *self.ts.last().expect("nonempty")
    }

    pub fn last(&self) -> &CVec {
        self.ys.last().expect("nonempty")
    }

    fn locate(&self, t: f64) -> usize {
        match self.ts.binary_search_by(|s| s.partial_cmp(&t).expect("finite")) {
            Ok(i) => i.min(self.ts.len().saturating_sub(2)),
            Err(i) => i.saturating_sub(1).min(self.ts.len().saturating_sub(2)),
        }
    }

    /// Cubic Hermite interpolant on the step containing t (clamped to the
    /// integration interval).
    pub fn at(&self, t: f64) -> CVec {
        if self.ts.len() == 1 {
            return self.ys[0].clone();
        }
        let t = t.clamp(self.ts[0], self.t_end());
        let i = self.locate(t);
        let (t0, t1) = (self.ts[i], self.ts[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let h00 = 2.0 * s.powi(3) - 3.0 * s * s + 1.0;
        let h10 = s.powi(3) - 2.0 * s * s + s;
        let h01 = -2.0 * s.powi(3) + 3.0 * s * s;
        let h11 = s.powi(3) - s * s;
        &self.ys[i] * c(h00, 0.0) + &self.fs[i] * c(h10 * h, 0.0) + &self.ys[i + 1] * c(h01, 0.0)
            + &self.fs[i + 1] * c(h11 * h, 0.0)
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 - -92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &CVec, terms: &[(f64, &CVec)], h: f64) -> CVec {
    let mut out = y.clone();
    for (a, k) in terms {
        if *a != 0.0 {
            out += *k * c(a * h, 0.0);
        }
    }
    out
}

/// Integrates y' = f(t, y) from t0 to t1 ≥ t0.
pub fn dormand_prince<F>(f: F, t0: f64, y0: CVec, t1: f64, opts: &OdeOptions) -> Result<OdeSolution>
where
    F: Fn(f64, &CVec) -> CVec,
{
    if !(t1 >= t0) {
        return Err(Error::InvalidInput(format!("integration interval [{t0}, {t1}] is reversed")));
    }
    let f0 = f(t0, &y0);
    let mut sol = OdeSolution { ts: vec![t0], ys: vec![y0.clone()], fs: vec![f0.clone()] };
    if t1 == t0 {
        return Ok(sol);
    }
    let (mut t, mut y, mut k1) = (t0, y0, f0);
    let mut h = opts.max_step.min(t1 - t0).min(1e-3);
    let mut steps = 0usize;
    while t < t1 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Ode { t, reason: "too many steps".into() });
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        let k2 = f(t + C2 * h, &axpy(&y, &[(A21, &k1)], h));
        let k3 = f(t + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(t + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = f(t + C5 * h, &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h));
        let k6 = f(t + h, &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h));
        let y_new = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
        let k7 = f(t + h, &y_new);
        let err_vec = axpy(
            &CVec::zeros(y.len()),
            &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
            h,
        );
        let mut acc = 0.0;
        for i in 0..y.len() {
            let scale = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
            acc += (err_vec[i].norm() / scale).powi(2);
        }
        let err = (acc / y.len().max(1) as f64).sqrt();
        if !err.is_finite() || !y_new.iter().all(|z| z.is_finite()) {
            return Err(Error::Ode { t, reason: "non-finite state".into() });
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y_new;
            k1 = k7;
            sol.ts.push(t);
            sol.ys.push(y.clone());
            sol.fs.push(k1.clone());
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(opts.max_step);
        if h < 1e-14 * (1.0 + t.abs()) {
            return Err(Error::Ode { t, reason: "step size underflow".into() });
        }
    }
    Ok(sol)
}

/// ∫_a^b f by adaptive Simpson with absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<C64>
where
    F: Fn(f64) -> C64,
{
    if a == b {
        return Ok(c(0.0, 0.0));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F>(f: &F, a: f64, b: f64, fa: C64, fm: C64, fb: C64, whole: C64, tol: f64, depth: u32) -> Result<C64>
where
    F: Fn(f64) -> C64,
{
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let diff = left + right - whole;
    if diff.norm() <= 15.0 * tol {
        return Ok(left + right + diff / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!("no convergence on [{a}, {b}]")));
    }
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}
