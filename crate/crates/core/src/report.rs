//! Machine-readable reports and input parsing for the command-line tool.
//!
//! JSON output has sorted keys and every float written with 17 significant
//! digits, so the same inputs give byte-identical files.

use std::io;

use serde::Deserialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

use crate::bergman::{self, BergmanKernel, PropagatorOptions, QuadraticPhase};
use crate::error::{Error, Result};
use crate::fbi::{self, ConjugatedSymbol, FbiPhase, RealData, Weight};
use crate::holomorphic::HolomorphicGaussian;
use crate::linalg::{self, c, CMat, CVec, RMat, RVec};
use crate::subspace::{subspace_residual, RealSubspace, TotallyRealSubspace};
use crate::symplectic::{self, build_symbol, QuadraticSymbol};
use crate::wavefront::{self, TheoremReport, WavefrontReport};

/// `{:.16e}`, i.e. 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

struct Sig17<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with sorted keys and 17-digit floats, newline-terminated.
pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17(PrettyFormatter::new()));
    serde::Serialize::serialize(v, &mut ser).expect("writing to a Vec cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn real_matrix(m: &RMat) -> Value {
    Value::Array((0..m.nrows()).map(|i| json!(m.row(i).iter().cloned().collect::<Vec<f64>>())).collect())
}

pub fn complex_matrix(m: &CMat) -> Value {
    json!({ "re": real_matrix(&linalg::re(m)), "im": real_matrix(&linalg::im(m)) })
}

pub fn real_vector(v: &RVec) -> Value {
    json!(v.iter().cloned().collect::<Vec<f64>>())
}

pub fn complex_vector(v: &CVec) -> Value {
    json!({
        "re": v.iter().map(|z| z.re).collect::<Vec<f64>>(),
        "im": v.iter().map(|z| z.im).collect::<Vec<f64>>(),
    })
}

/// Dimension and orthonormal basis (as a list of column vectors).
pub fn subspace(s: &RealSubspace) -> Value {
    let basis: Vec<Value> = (0..s.dim()).map(|k| real_vector(&s.basis().column(k).into_owned())).collect();
    json!({ "dim": s.dim(), "basis": basis })
}

pub fn weight(w: &Weight) -> Value {
    json!({ "P": complex_matrix(w.p()), "H": complex_matrix(w.h()), "real_form": real_matrix(&w.real_form()) })
}

pub fn phase(p: &QuadraticPhase) -> Value {
    json!({ "P": complex_matrix(&p.p), "Q": complex_matrix(&p.q), "R": complex_matrix(&p.r) })
}

pub fn holomorphic_gaussian(u: &HolomorphicGaussian) -> Value {
    json!({ "alpha_re": u.alpha.re, "alpha_im": u.alpha.im, "g": complex_matrix(&u.g), "l": complex_vector(&u.l) })
}

fn matrix_from_rows(rows: &[Vec<f64>], size: usize, what: &str) -> Result<RMat> {
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(Error::Dimension(format!("{what} must be {size}x{size}")));
    }
    Ok(RMat::from_fn(size, size, |i, j| rows[i][j]))
}

fn vector_from(v: &[f64], size: usize, what: &str) -> Result<RVec> {
    if v.len() != size {
        return Err(Error::Dimension(format!("{what} must have length {size}")));
    }
    Ok(RVec::from_column_slice(v))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolSpec {
    n: usize,
    #[serde(rename = "Q_re")]
    q_re: Vec<Vec<f64>>,
    #[serde(rename = "Q_im", default)]
    q_im: Option<Vec<Vec<f64>>>,
}

/// `{"n": 1, "Q_re": [[..]], "Q_im": [[..]]}`; `Q_im` may be omitted.
pub fn parse_symbol(text: &str) -> Result<QuadraticSymbol> {
    let spec: SymbolSpec = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("symbol JSON: {e}")))?;
    if spec.n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let size = 2 * spec.n;
    let q_re = matrix_from_rows(&spec.q_re, size, "Q_re")?;
    let q_im = match spec.q_im {
        Some(rows) => matrix_from_rows(&rows, size, "Q_im")?,
        None => RMat::zeros(size, size),
    };
    build_symbol(spec.n, &q_re, &q_im)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DataSpec {
    kind: String,
    #[serde(rename = "G_re", default)]
    g_re: Option<Vec<Vec<f64>>>,
    #[serde(rename = "G_im", default)]
    g_im: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    l_re: Option<Vec<f64>>,
    #[serde(default)]
    l_im: Option<Vec<f64>>,
}

/// `{"kind": "gaussian", "G_re": .., "G_im": .., "l_re": .., "l_im": ..}`
/// for e^{−½yᵀGy + lᵀy}, or `{"kind": "delta"}` / `{"kind": "constant"}`.
pub fn parse_data(text: &str, n: usize) -> Result<RealData> {
    let spec: DataSpec = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("data JSON: {e}")))?;
    match spec.kind.as_str() {
        "delta" => Ok(RealData::Delta),
        "constant" => Ok(RealData::Constant),
        "gaussian" => {
            let g_re = spec.g_re.ok_or_else(|| Error::InvalidInput("gaussian data needs G_re".into()))?;
            let g_re = matrix_from_rows(&g_re, n, "G_re")?;
            let g_im = match spec.g_im {
                Some(rows) => matrix_from_rows(&rows, n, "G_im")?,
                None => RMat::zeros(n, n),
            };
            let l_re = spec.l_re.map(|v| vector_from(&v, n, "l_re")).transpose()?.unwrap_or_else(|| RVec::zeros(n));
            let l_im = spec.l_im.map(|v| vector_from(&v, n, "l_im")).transpose()?.unwrap_or_else(|| RVec::zeros(n));
            let l = CVec::from_fn(n, |i, _| c(l_re[i], l_im[i]));
            RealData::gaussian(linalg::from_parts(&g_re, &g_im), l)
        }
        other => Err(Error::InvalidInput(format!("unknown data kind {other:?}"))),
    }
}

/// Symbol, Hamilton matrix, singular space with its cross-check, and the
/// positivity of κ_t relative to real phase space.
pub fn analyze(name: &str, q: &QuadraticSymbol, ts: &[f64]) -> Result<Value> {
    let f = q.hamilton_matrix();
    let alg = symplectic::singular_space_algebraic(q)?;
    let dynm = symplectic::singular_space_dynamical(q)?;
    let residual = subspace_residual(&alg, &dynm)?;
    let s = symplectic::singular_space(q)?;
    let sigma = TotallyRealSubspace::real(2 * q.n());
    let mut positivity = Vec::new();
    for &t in ts {
        let defect = symplectic::positivity_defect(&symplectic::hamilton_flow(q, t)?, &sigma)?;
        positivity.push(json!({ "t": t, "min_eigenvalue": defect }));
    }
    Ok(json!({
        "symbol": name,
        "n": q.n(),
        "Q": complex_matrix(q.matrix()),
        "F": complex_matrix(f.matrix()),
        "ReF": real_matrix(&f.re()),
        "ImF": real_matrix(&f.im()),
        "re_nonneg": q.re_nonneg(),
        "singular_space": subspace(&s),
        "cross_check": { "algebraic_vs_dynamical": residual, "tol": 1e-8, "pass": true },
        "positivity": positivity,
    }))
}

/// κ_t and exp(tH_{Im q}) at each time.
pub fn flow(name: &str, q: &QuadraticSymbol, ts: &[f64]) -> Result<Value> {
    let mut rows = Vec::new();
    for &t in ts {
        let k = symplectic::hamilton_flow(q, t)?;
        rows.push(json!({
            "t": t,
            "kappa": complex_matrix(k.matrix()),
            "symplectic_residual": k.symplectic_residual(),
            "im_flow": real_matrix(&symplectic::im_flow(q, t)?),
        }));
    }
    Ok(json!({ "symbol": name, "n": q.n(), "flows": rows }))
}

/// Φ_t, its gap to Φ and the radical of Φ − Φ_t at each time.
pub fn weights(name: &str, q: &QuadraticSymbol, frame: &FbiPhase, ts: &[f64]) -> Result<Value> {
    let phi = fbi::weight_of_phase(frame)?;
    let qt = fbi::egorov_symbol(q, frame)?;
    let mut rows = Vec::new();
    for &t in ts {
        let phi_t = bergman::evolve_weight(&phi, &qt, t)?;
        let rad = wavefront::radical(&phi, &phi_t)?;
        rows.push(json!({
            "t": t,
            "weight": weight(&phi_t),
            "gap_min_eigenvalue": bergman::weight_gap_min(&phi, &phi_t),
            "radical": subspace(&rad.radical),
            "radical_consistency": rad.consistency,
        }));
    }
    Ok(json!({ "symbol": name, "n": q.n(), "weight": weight(&phi), "evolved": rows }))
}

/// Distance of the t = 0 kernel from (polarization of Φ, C_Φ).
pub fn t0_residual(phi: &Weight, qt: &ConjugatedSymbol, opts: &PropagatorOptions) -> Result<f64> {
    let k0 = bergman::bergman_kernel(phi, qt, 0.0, opts)?;
    let psi = QuadraticPhase::from_polarization(&phi.polarization());
    Ok(k0.phase.distance(&psi).max((k0.amp - c(phi.bergman_constant(), 0.0)).norm()))
}

/// G̃(t/2)G̃(t/2) against G̃(t); zero at t = 0.
pub fn halving_residual(phi: &Weight, qt: &ConjugatedSymbol, k: &BergmanKernel, opts: &PropagatorOptions) -> Result<f64> {
    if k.t == 0.0 {
        return Ok(0.0);
    }
    let half = bergman::bergman_kernel(phi, qt, k.t / 2.0, opts)?;
    bergman::semigroup_residual(&half, &half, k)
}

pub fn kernel(k: &BergmanKernel, t0_residual: f64, semigroup_residual: f64) -> Value {
    let d = &k.diagnostics;
    json!({
        "t": k.t,
        "amp_re": k.amp.re,
        "amp_im": k.amp.im,
        "P": complex_matrix(&k.phase.p),
        "Q": complex_matrix(&k.phase.q),
        "R": complex_matrix(&k.phase.r),
        "dst_weight": weight(&k.dst_weight),
        "diagnostics": {
            "psd_min": d.psd_min,
            "t0_residual": t0_residual,
            "semigroup_residual": semigroup_residual,
            "radical_residual": d.radical_residual,
            "ode_vs_algebraic": d.ode_vs_algebraic,
            "implicit_residual": d.implicit_residual,
            "weight_gap_min": d.weight_gap_min,
        },
    })
}

pub fn kernel_report(phi: &Weight, qt: &ConjugatedSymbol, t: f64, opts: &PropagatorOptions) -> Result<Value> {
    let k = bergman::bergman_kernel(phi, qt, t, opts)?;
    Ok(kernel(&k, t0_residual(phi, qt, opts)?, halving_residual(phi, qt, &k, opts)?))
}

/// G̃(t)T_φ(data) at each time, with its H_Φ norm.
pub fn propagate(name: &str, q: &QuadraticSymbol, frame: &FbiPhase, data: &RealData, ts: &[f64], opts: &PropagatorOptions) -> Result<Value> {
    let phi = fbi::weight_of_phase(frame)?;
    let qt = fbi::egorov_symbol(q, frame)?;
    let u = fbi::fbi_transform(frame, data)?;
    let mut rows = Vec::new();
    for &t in ts {
        let out = bergman::apply_kernel(&bergman::bergman_kernel(&phi, &qt, t, opts)?, &u)?;
        let norm = match fbi::weighted_norm_sq(&out, &phi) {
            Ok(v) => json!(v.sqrt()),
            Err(Error::Divergent { .. }) => Value::Null,
            Err(e) => return Err(e),
        };
        rows.push(json!({ "t": t, "u": holomorphic_gaussian(&out), "weighted_norm": norm }));
    }
    Ok(json!({ "symbol": name, "data": data.kind(), "input": holomorphic_gaussian(&u), "propagated": rows }))
}

fn direction_header(n: usize) -> Vec<String> {
    (0..n).flat_map(|k| [format!("re_{k}"), format!("im_{k}")]).collect()
}

fn direction_cells(d: &CVec) -> Vec<String> {
    d.iter().flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)]).collect()
}

pub fn wavefront_json(r: &WavefrontReport) -> Value {
    let rows: Vec<Value> = (0..r.directions.len())
        .map(|i| {
            json!({
                "direction": complex_vector(&r.directions[i]),
                "exponent": r.exponents[i],
                "in_wavefront": r.in_wavefront[i],
                "marginal": r.marginal[i],
            })
        })
        .collect();
    json!({
        "threshold": r.threshold,
        "min_exponent": r.min_exponent,
        "singular_subspace": subspace(&r.singular),
        "singular_count": r.in_wavefront.iter().filter(|f| **f).count(),
        "directions": rows,
    })
}

/// Header plus one row per grid direction.
pub fn wavefront_csv(r: &WavefrontReport) -> Vec<Vec<String>> {
    let n = r.directions.first().map(|d| d.len()).unwrap_or(0);
    let mut header = direction_header(n);
    header.extend(["exponent", "in_wavefront", "marginal"].map(String::from));
    let mut out = vec![header];
    for i in 0..r.directions.len() {
        let mut row = direction_cells(&r.directions[i]);
        row.push(fmt_f64(r.exponents[i]));
        row.push(r.in_wavefront[i].to_string());
        row.push(r.marginal[i].to_string());
        out.push(row);
    }
    out
}

/// WF of T_φ(data) relative to Φ.
pub fn wavefront(frame: &FbiPhase, data: &RealData, grid: usize, threshold: f64) -> Result<WavefrontReport> {
    let phi = fbi::weight_of_phase(frame)?;
    let u = fbi::fbi_transform(frame, data)?;
    wavefront::wavefront_report(&u, &phi, grid, threshold)
}

pub fn verify_json(name: &str, data: &RealData, r: &TheoremReport) -> Value {
    let mut m = Map::new();
    m.insert("symbol".into(), json!(name));
    m.insert("data".into(), json!(data.kind()));
    m.insert("t".into(), json!(r.t));
    m.insert("pass".into(), json!(r.pass));
    m.insert("max_angle_sine".into(), json!(r.max_angle));
    m.insert("subspace_residual".into(), json!(r.subspace_residual));
    m.insert("fbi_side_residual".into(), json!(r.fbi_side_residual));
    m.insert("wf_in_real".into(), subspace(&r.wf_in_real));
    m.insert("predicted_real".into(), subspace(&r.predicted_real));
    m.insert("predicted".into(), subspace(&r.predicted));
    m.insert("predicted_fbi_side".into(), subspace(&r.predicted_fbi_side));
    m.insert("measured".into(), subspace(&r.measured));
    m.insert("input".into(), wavefront_json(&r.input));
    m.insert("output".into(), wavefront_json(&r.output));
    Value::Object(m)
}

/// Rows tagged input/output for the grid directions and predicted/measured
/// for the subspace bases (written as complex directions, exponent blank).
pub fn verify_csv(r: &TheoremReport) -> Vec<Vec<String>> {
    let n = r.measured.ambient_dim() / 2;
    let mut header = vec!["set".to_string()];
    header.extend(direction_header(n));
    header.extend(["exponent", "in_wavefront", "marginal"].map(String::from));
    let mut out = vec![header];
    for (tag, rep) in [("input", &r.input), ("output", &r.output)] {
        for row in wavefront_csv(rep).into_iter().skip(1) {
            let mut full = vec![tag.to_string()];
            full.extend(row);
            out.push(full);
        }
    }
    for (tag, s) in [("predicted", &r.predicted), ("measured", &r.measured)] {
        for k in 0..s.dim() {
            let mut full = vec![tag.to_string()];
            full.extend(direction_cells(&linalg::complexify_vec(&s.basis().column(k).into_owned())));
            full.extend([String::new(), "true".into(), String::new()]);
            out.push(full);
        }
    }
    out
}
