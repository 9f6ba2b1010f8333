//! Built-in example symbols.

use crate::linalg::{c, CMat};
use crate::symplectic::QuadraticSymbol;

#[derive(Debug, Clone)]
pub struct ExampleCatalogEntry {
    pub name: &'static str,
    pub symbol: QuadraticSymbol,
    pub notes: &'static str,
}

pub const NAMES: [&str; 4] = ["heat", "free_schrodinger", "harmonic_oscillator", "kfp"];

/// q(x, ξ) = ξ².
pub fn heat() -> QuadraticSymbol {
    let mut q = CMat::zeros(2, 2);
    q[(1, 1)] = c(1.0, 0.0);
    QuadraticSymbol::new(1, q).expect("valid")
}

/// q(x, ξ) = iξ².
pub fn free_schrodinger() -> QuadraticSymbol {
    let mut q = CMat::zeros(2, 2);
    q[(1, 1)] = c(0.0, 1.0);
    QuadraticSymbol::new(1, q).expect("valid")
}

/// q(x, ξ) = i(x² + ξ²).
pub fn harmonic_oscillator() -> QuadraticSymbol {
    QuadraticSymbol::new(1, CMat::identity(2, 2) * c(0.0, 1.0)).expect("valid")
}

/// Kramers–Fokker–Planck: q(x, v, ξ, η) = η² + v²/4 + i(vξ − a xη), with
/// coordinates ordered (x, v, ξ, η).
pub fn kfp(a: f64) -> QuadraticSymbol {
    let (x, v, xi, eta) = (0, 1, 2, 3);
    let mut q = CMat::zeros(4, 4);
    q[(eta, eta)] = c(1.0, 0.0);
    q[(v, v)] = c(0.25, 0.0);
    q[(v, xi)] = c(0.0, 0.5);
    q[(xi, v)] = c(0.0, 0.5);
    q[(x, eta)] = c(0.0, -0.5 * a);
    q[(eta, x)] = c(0.0, -0.5 * a);
    QuadraticSymbol::new(2, q).expect("valid")
}

pub fn entry(name: &str, kfp_a: f64) -> Option<ExampleCatalogEntry> {
    let (name, symbol, notes) = match name {
        "heat" => ("heat", heat(), "q = ξ²; singular space is the x-axis"),
        "free_schrodinger" => ("free_schrodinger", free_schrodinger(), "q = iξ²; unitary, singular space is everything"),
        "harmonic_oscillator" => (
            "harmonic_oscillator",
            harmonic_oscillator(),
            "q = i(x² + ξ²); unitary, Im-flow is rotation by 2t",
        ),
        "kfp" => ("kfp", kfp(kfp_a), "Kramers–Fokker–Planck; singular space is trivial"),
        _ => return None,
    };
    Some(ExampleCatalogEntry { name, symbol, notes })
}

/// The four catalog entries with a = 1 for KFP.
pub fn all() -> Vec<ExampleCatalogEntry> {
    NAMES.iter().map(|n| entry(n, 1.0).expect("known name")).collect()
}
