//! Robustness sweep over leader counts for fixed `N`.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::{spectrum, DEFAULT_TOL};
use crate::constructions::{build, ConstructionSpec, Family};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub family: Family,
    pub n: usize,
    pub n_leaders: usize,
    /// BFS diameter of the built graph.
    pub diameter: usize,
    pub edges: usize,
    pub lambda2: f64,
    pub kirchhoff: Option<f64>,
}

/// One grid point: a measured row or the reason it was skipped.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepEntry {
    Row(SweepRow),
    Skipped {
        family: Family,
        n: usize,
        n_leaders: usize,
        reason: String,
    },
}

impl SweepEntry {
    pub fn row(&self) -> Option<&SweepRow> {
        match self {
            SweepEntry::Row(r) => Some(r),
            SweepEntry::Skipped { .. } => None,
        }
    }
}

/// `⌈(2 + N/N_L) / 2⌉`, clamped to the feasible range `[2, ⌊N/N_L⌋]`.
pub fn default_g3_diameter(n: usize, n_leaders: usize) -> usize {
    let k = n_leaders.max(1);
    let mid = (2 * k + n).div_ceil(2 * k);
    mid.min(n / k).max(2)
}

fn measure(family: Family, n: usize, n_leaders: usize, g3_diameter: Option<usize>) -> SweepEntry {
    let diameter = match family {
        Family::G3Bar => Some(g3_diameter.unwrap_or_else(|| default_g3_diameter(n, n_leaders))),
        _ => None,
    };
    let spec = ConstructionSpec {
        family,
        n,
        n_leaders,
        diameter,
    };
    let skipped = |reason: String| SweepEntry::Skipped {
        family,
        n,
        n_leaders,
        reason,
    };
    let net = match build(&spec) {
        Ok(net) => net,
        Err(e) => return skipped(e.to_string()),
    };
    let report = match spectrum(&net.graph, DEFAULT_TOL) {
        Ok(r) => r,
        Err(e) => return skipped(e.to_string()),
    };
    SweepEntry::Row(SweepRow {
        family,
        n,
        n_leaders,
        diameter: net.graph.diameter().unwrap_or(usize::MAX),
        edges: net.graph.edge_count(),
        lambda2: report.lambda2,
        kirchhoff: report.kirchhoff,
    })
}

/// Builds every `(family, N_L)` point and measures it. Points whose spec is
/// infeasible (e.g. `N_L ∤ N` for the layered design) are reported as
/// [`SweepEntry::Skipped`]. Output order follows the input order, family-major.
pub fn sweep(
    n: usize,
    families: &[Family],
    leader_values: &[usize],
    g3_diameter: Option<usize>,
) -> Vec<SweepEntry> {
    let grid: Vec<(Family, usize)> = families
        .iter()
        .flat_map(|&f| leader_values.iter().map(move |&k| (f, k)))
        .collect();
    grid.into_par_iter()
        .map(|(f, k)| measure(f, n, k, g3_diameter))
        .collect()
}

/// `%.{digits}g`-style formatting.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x.is_infinite() {
            if x > 0.0 {
                "inf".into()
            } else {
                "-inf".into()
            }
        } else {
            "0".into()
        };
    }
    let exp = x.abs().log10().floor() as i32;
    let digits = digits.max(1) as i32;
    if exp < -5 || exp >= digits {
        let s = format!("{:.*e}", (digits - 1) as usize, x);
        let (mantissa, e) = s.split_once('e').expect("scientific format");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        return format!("{mantissa}e{e}");
    }
    let decimals = (digits - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// CSV with header `family,N,NL,D,edges,lambda2,kirchhoff`. Skipped points
/// are appended as `#` comment lines.
pub fn write_csv(entries: &[SweepEntry]) -> String {
    let mut out = String::from("family,N,NL,D,edges,lambda2,kirchhoff\n");
    for row in entries.iter().filter_map(SweepEntry::row) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.family,
            row.n,
            row.n_leaders,
            row.diameter,
            row.edges,
            format_sig(row.lambda2, 9),
            row.kirchhoff.map_or("inf".into(), |k| format_sig(k, 9)),
        );
    }
    for entry in entries {
        if let SweepEntry::Skipped {
            family,
            n,
            n_leaders,
            reason,
        } = entry
        {
            let _ = writeln!(out, "# skipped {family} N={n} NL={n_leaders}: {reason}");
        }
    }
    out
}
