//! Laplacian-spectrum robustness measures: algebraic connectivity (λ₂) and
//! the Kirchhoff index `Kf = N · Σ_{i≥2} 1/λ_i`.

pub mod eigen;
pub mod sweep;

use thiserror::Error;

use crate::graph::Graph;
pub use eigen::{symmetric_eigenvalues, EigenError, DEFAULT_MAX_SWEEPS, DEFAULT_TOL};
pub use sweep::{default_g3_diameter, format_sig, sweep, write_csv, SweepEntry, SweepRow};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RobustnessError {
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("Kirchhoff index is infinite for a disconnected graph")]
    Disconnected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub n: usize,
    /// Laplacian eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Second-smallest eigenvalue; 0 for a single node.
    pub lambda2: f64,
    /// `None` when the graph is disconnected (the index is infinite).
    pub kirchhoff: Option<f64>,
    pub tol: f64,
}

impl SpectrumReport {
    pub fn is_connected(&self) -> bool {
        self.kirchhoff.is_some()
    }
}

/// Full Laplacian spectrum of `g`. `tol` is relative to `‖L‖_F`.
pub fn spectrum(g: &Graph, tol: f64) -> Result<SpectrumReport, RobustnessError> {
    let laplacian = g.laplacian();
    let eigenvalues = symmetric_eigenvalues(&laplacian, tol, DEFAULT_MAX_SWEEPS)?;
    let n = eigenvalues.len();
    let lambda2 = eigenvalues.get(1).copied().unwrap_or(0.0);
    let threshold = tol * laplacian.frobenius_norm().max(1.0);
    let connected = n == 1 || lambda2 > threshold;
    let kirchhoff =
        connected.then(|| n as f64 * eigenvalues[1..].iter().map(|l| 1.0 / l).sum::<f64>());
    Ok(SpectrumReport {
        n,
        eigenvalues,
        lambda2,
        kirchhoff,
        tol,
    })
}

pub fn algebraic_connectivity(g: &Graph) -> Result<f64, RobustnessError> {
    Ok(spectrum(g, DEFAULT_TOL)?.lambda2)
}

pub fn kirchhoff_index(g: &Graph) -> Result<f64, RobustnessError> {
    spectrum(g, DEFAULT_TOL)?
        .kirchhoff
        .ok_or(RobustnessError::Disconnected)
}
