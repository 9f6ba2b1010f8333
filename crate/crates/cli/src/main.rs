//! `qsemi`: batch front end over qsemi-core.
//!
//! Exit codes: 0 ok, 1 verification failed, 2 invalid input, 3 cross-check
//! failure, 4 diagnostic failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use qsemi_core::bergman::PropagatorOptions;
use qsemi_core::fbi::{self, standard_phase, FbiPhase, RealData};
use qsemi_core::report;
use qsemi_core::symplectic::QuadraticSymbol;
use qsemi_core::wavefront::{self, VerifyOptions};
use qsemi_core::{catalog, Error};

#[derive(Parser)]
#[command(name = "qsemi", version, about = "Quadratic semigroups in Bergman form and wavefront propagation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hamilton matrix, singular space and positivity of a symbol
    Analyze(Common),
    /// κ_t and the flow of Im q
    Flow(Common),
    /// Evolved weights Φ_t and radicals of Φ − Φ_t
    Weights(Common),
    /// Bergman-form kernel of the semigroup
    Kernel(Common),
    /// Apply the semigroup to the FBI image of real-side data
    Propagate(Common),
    /// Wavefront set of the FBI image of real-side data
    Wavefront(Common),
    /// Compare the measured output wavefront with the propagation law
    Verify(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Catalog symbol: heat, free_schrodinger, harmonic_oscillator, kfp
    #[arg(long, conflicts_with = "symbol")]
    example: Option<String>,
    /// JSON file {"n", "Q_re", "Q_im"}
    #[arg(long)]
    symbol: Option<PathBuf>,
    #[arg(long, conflicts_with = "t_list")]
    t: Option<f64>,
    /// Comma-separated times
    #[arg(long, value_delimiter = ',')]
    t_list: Option<Vec<f64>>,
    /// Directions per great circle
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Wavefront threshold on the decay exponent
    #[arg(long, default_value_t = wavefront::DEFAULT_THRESHOLD)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    kfp_a: f64,
    /// delta, constant, or a JSON file {"kind", "G_re", "G_im", "l_re", "l_im"}
    #[arg(long, default_value = "delta")]
    data: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Dimension(_) | Error::NonFinite(_) | Error::InvalidInput(_) | Error::FlowBound { .. } => 2,
            Error::CrossCheck { .. } => 3,
            _ => 4,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl Common {
    fn symbol(&self) -> Result<(String, QuadraticSymbol), Failure> {
        if !self.kfp_a.is_finite() {
            return Err(invalid("--kfp-a must be finite"));
        }
        match (&self.example, &self.symbol) {
            (Some(name), None) => {
                let entry = catalog::entry(name, self.kfp_a)
                    .ok_or_else(|| invalid(format!("unknown example {name:?}; expected one of {}", catalog::NAMES.join(", "))))?;
                Ok((entry.name.to_string(), entry.symbol))
            }
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
                Ok((path.display().to_string(), report::parse_symbol(&text)?))
            }
            _ => Err(invalid("give exactly one of --example or --symbol")),
        }
    }

    fn times(&self, default: f64, strictly_positive: bool) -> Result<Vec<f64>, Failure> {
        let ts = match (&self.t, &self.t_list) {
            (Some(t), None) => vec![*t],
            (None, Some(ts)) if !ts.is_empty() => ts.clone(),
            _ => vec![default],
        };
        for &t in &ts {
            if !t.is_finite() || t < 0.0 || (strictly_positive && t == 0.0) {
                let need = if strictly_positive { "positive" } else { "nonnegative" };
                return Err(invalid(format!("times must be finite and {need}, got {t}")));
            }
        }
        Ok(ts)
    }

    fn data(&self, n: usize) -> Result<RealData, Failure> {
        match self.data.as_str() {
            "delta" => Ok(RealData::Delta),
            "constant" => Ok(RealData::Constant),
            path => {
                let text = fs::read_to_string(path).map_err(|e| invalid(format!("--data {path}: {e}")))?;
                Ok(report::parse_data(&text, n)?)
            }
        }
    }

    fn grid(&self) -> Result<usize, Failure> {
        if self.grid < 8 {
            return Err(invalid(format!("--grid must be at least 8, got {}", self.grid)));
        }
        Ok(self.grid)
    }

    fn threshold(&self) -> Result<f64, Failure> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(invalid("--tol must be positive"));
        }
        Ok(self.tol)
    }

    fn frame(&self, n: usize) -> FbiPhase {
        standard_phase(n)
    }

    fn emit(&self, json: &Value, csv_rows: Option<Vec<Vec<String>>>) -> Result<(), Failure> {
        let text = match (self.format, csv_rows) {
            (Format::Json, _) => report::to_json_string(json),
            (Format::Csv, Some(rows)) => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in rows {
                    w.write_record(&row).map_err(|e| invalid(e.to_string()))?;
                }
                String::from_utf8(w.into_inner().map_err(|e| invalid(e.to_string()))?).expect("CSV is UTF-8")
            }
            (Format::Csv, None) => return Err(invalid("--format csv is only available for wavefront and verify")),
        };
        match &self.out {
            Some(path) => fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display()))),
            None => {
                std::io::stdout().write_all(text.as_bytes()).map_err(|e| invalid(e.to_string()))?;
                Ok(())
            }
        }
    }
}

/// Runs a command; Ok(false) means verification failed.
fn run(command: &Command) -> Result<bool, Failure> {
    let opts = PropagatorOptions::default();
    match command {
        Command::Analyze(a) => {
            let (name, q) = a.symbol()?;
            let ts = a.times(1.0, false)?;
            a.emit(&report::analyze(&name, &q, &ts)?, None)?;
        }
        Command::Flow(a) => {
            let (name, q) = a.symbol()?;
            let ts = a.times(1.0, false)?;
            a.emit(&report::flow(&name, &q, &ts)?, None)?;
        }
        Command::Weights(a) => {
            let (name, q) = a.symbol()?;
            let ts = a.times(1.0, false)?;
            a.emit(&report::weights(&name, &q, &a.frame(q.n()), &ts)?, None)?;
        }
        Command::Kernel(a) => {
            let (name, q) = a.symbol()?;
            let ts = a.times(1.0, false)?;
            let frame = a.frame(q.n());
            let phi = fbi::weight_of_phase(&frame)?;
            let qt = fbi::egorov_symbol(&q, &frame)?;
            let kernels = ts.iter().map(|t| report::kernel_report(&phi, &qt, *t, &opts)).collect::<Result<Vec<_>, _>>()?;
            let out = if kernels.len() == 1 {
                let mut k = kernels.into_iter().next().expect("one kernel");
                k["symbol"] = Value::String(name);
                k
            } else {
                serde_json::json!({ "symbol": name, "kernels": kernels })
            };
            a.emit(&out, None)?;
        }
        Command::Propagate(a) => {
            let (name, q) = a.symbol()?;
            let ts = a.times(1.0, false)?;
            let data = a.data(q.n())?;
            a.emit(&report::propagate(&name, &q, &a.frame(q.n()), &data, &ts, &opts)?, None)?;
        }
        Command::Wavefront(a) => {
            let (name, q) = a.symbol()?;
            let data = a.data(q.n())?;
            let r = report::wavefront(&a.frame(q.n()), &data, a.grid()?, a.threshold()?)?;
            let mut json = report::wavefront_json(&r);
            json["symbol"] = Value::String(name);
            json["data"] = Value::String(data.kind().into());
            a.emit(&json, Some(report::wavefront_csv(&r)))?;
        }
        Command::Verify(a) => {
            let (name, q) = a.symbol()?;
            let ts = a.times(1.0, true)?;
            let data = a.data(q.n())?;
            let vopts = VerifyOptions { grid_density: a.grid()?, threshold: a.threshold()?, ..VerifyOptions::default() };
            let frame = a.frame(q.n());
            let mut pass = true;
            let mut jsons = Vec::new();
            let mut rows: Vec<Vec<String>> = Vec::new();
            for &t in &ts {
                let r = wavefront::verify_theorem(&q, &frame, &data, t, &vopts)?;
                pass &= r.pass;
                jsons.push(report::verify_json(&name, &data, &r));
                let csv = report::verify_csv(&r);
                if rows.is_empty() {
                    let mut header = vec!["t".to_string()];
                    header.extend(csv[0].clone());
                    rows.push(header);
                }
                for row in csv.into_iter().skip(1) {
                    let mut full = vec![report::fmt_f64(t)];
                    full.extend(row);
                    rows.push(full);
                }
            }
            let json = if jsons.len() == 1 {
                jsons.pop().expect("one report")
            } else {
                serde_json::json!({ "pass": pass, "reports": jsons })
            };
            a.emit(&json, Some(rows))?;
            return Ok(pass);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("qsemi: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_kind() {
        let code = |e: Error| Failure::from(e).code;
        assert_eq!(code(Error::InvalidInput("x".into())), 2);
        assert_eq!(code(Error::FlowBound { value: 60.0, limit: 50.0 }), 2);
        assert_eq!(code(Error::CrossCheck { what: "x".into(), residual: 1.0, tol: 0.0 }), 3);
        assert_eq!(code(Error::Diagnostic { what: "x".into(), value: -1.0, tol: 0.0 }), 4);
        assert_eq!(code(Error::Divergent { min_eig: 0.5 }), 4);
    }
}
