//! Sampled controllability cross-check.
//!
//! Draws system matrices `M` from the pattern family of a graph (symmetric,
//! off-diagonal entry nonzero exactly on edges, free diagonal) and tests
//! whether `(M, B)` is a controllable pair, `B` selecting the leaders.
//!
//! The rank of `[B, MB, …, M^{n-1}B]` is measured blockwise: each new block is
//! `M` applied to the orthonormal directions found in the previous block, and
//! its columns are orthogonalized against everything accepted so far with
//! largest-residual-first pivoting. The span is the same as the raw
//! controllability matrix, but the raw powers of `M` lose rank numerically
//! within a dozen steps on path-like graphs.

use std::fmt;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::{Graph, LeaderSet};
use crate::linalg::{dot, norm, Matrix};

/// Residual ratios within this factor of `tol` are too close to call.
const INDETERMINATE_BAND: f64 = 10.0;
const MAX_RESAMPLES: u64 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SystemRealization {
    pub m_matrix: Matrix,
    pub b_matrix: Matrix,
    pub seed: u64,
}

/// Off-diagonal weights are `±U[0.5, 2]` on edges, diagonal is `U[-1, 1]`.
pub fn sample_realization(g: &Graph, leaders: &LeaderSet, seed: u64) -> SystemRealization {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(n, n);
    for (u, v) in g.edges() {
        let magnitude = rng.gen_range(0.5..=2.0);
        let w = if rng.gen_bool(0.5) {
            magnitude
        } else {
            -magnitude
        };
        m[(u, v)] = w;
        m[(v, u)] = w;
    }
    for i in 0..n {
        m[(i, i)] = rng.gen_range(-1.0..=1.0);
    }
    let mut b = Matrix::zeros(n, leaders.len());
    for (j, l) in leaders.iter().enumerate() {
        b[(l, j)] = 1.0;
    }
    SystemRealization {
        m_matrix: m,
        b_matrix: b,
        seed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Controllable,
    Uncontrollable,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Controllable => "controllable",
            Verdict::Uncontrollable => "uncontrollable",
            Verdict::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankReport {
    pub rank: usize,
    pub n: usize,
    /// Smallest accepted residual, relative to its reference scale.
    pub min_accepted: f64,
    /// Largest rejected residual, relative to its reference scale.
    pub max_rejected: f64,
    pub verdict: Verdict,
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    // two passes of modified Gram-Schmidt
    for _ in 0..2 {
        for q in basis {
            let c = dot(v, q);
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// Numerical rank of the controllability matrix of `r` at relative
/// tolerance `tol`.
pub fn controllability_rank(r: &SystemRealization, tol: f64) -> RankReport {
    let m = &r.m_matrix;
    let n = m.rows();
    let m_scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut block: Vec<Vec<f64>> = (0..r.b_matrix.cols())
        .map(|j| r.b_matrix.column(j))
        .collect();
    let mut reference = 1.0;
    let mut min_accepted = f64::INFINITY;
    let mut max_rejected = 0.0f64;

    while !block.is_empty() && basis.len() < n {
        for v in &mut block {
            orthogonalize(v, &basis);
        }
        let mut fresh = Vec::new();
        loop {
            let pivot = block
                .iter()
                .enumerate()
                .map(|(i, v)| (i, norm(v) / reference))
                .max_by(|a, b| a.1.total_cmp(&b.1));
            let Some((idx, ratio)) = pivot else { break };
            // directions left over once the basis is full are not rejections
            if basis.len() == n {
                break;
            }
            if ratio <= tol {
                max_rejected = max_rejected.max(ratio);
                break;
            }
            min_accepted = min_accepted.min(ratio);
            let mut q = block.swap_remove(idx);
            let len = norm(&q);
            q.iter_mut().for_each(|x| *x /= len);
            for v in &mut block {
                orthogonalize(v, std::slice::from_ref(&q));
            }
            basis.push(q.clone());
            fresh.push(q);
        }
        block = fresh.iter().map(|q| m.mul_vec(q)).collect();
        reference = m_scale;
    }
    let rank = basis.len();
    let verdict = if rank == n && min_accepted > tol * INDETERMINATE_BAND {
        Verdict::Controllable
    } else if rank < n && max_rejected < tol / INDETERMINATE_BAND {
        Verdict::Uncontrollable
    } else {
        Verdict::Indeterminate
    };
    RankReport {
        rank,
        n,
        min_accepted,
        max_rejected,
        verdict,
    }
}

/// `Some(true/false)` for a clear verdict, `None` when indeterminate.
pub fn is_controllable_pair(r: &SystemRealization, tol: f64) -> Option<bool> {
    match controllability_rank(r, tol).verdict {
        Verdict::Controllable => Some(true),
        Verdict::Uncontrollable => Some(false),
        Verdict::Indeterminate => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub rank: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub trials: usize,
    pub pass_count: usize,
    pub fail_count: usize,
    pub indeterminate_count: usize,
    pub records: Vec<TrialRecord>,
}

impl OracleReport {
    pub fn all_passed(&self) -> bool {
        self.pass_count == self.trials
    }

    pub fn summary(&self) -> String {
        format!(
            "{}/{} controllable ({} uncontrollable, {} indeterminate)",
            self.pass_count, self.trials, self.fail_count, self.indeterminate_count
        )
    }

    /// `trial,seed,rank,verdict` per line.
    pub fn trials_csv(&self) -> String {
        let mut out = String::from("trial,seed,rank,verdict\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{}", r.trial, r.seed, r.rank, r.verdict);
        }
        out
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn trial_seed(master: u64, trial: usize, attempt: u64) -> u64 {
    splitmix64(splitmix64(master ^ (trial as u64).rotate_left(32)) ^ attempt)
}

/// Runs `trials` independent realizations. An indeterminate realization is
/// redrawn a few times before it is counted as indeterminate.
pub fn randomized_ssc_check(
    g: &Graph,
    leaders: &LeaderSet,
    trials: usize,
    seed: u64,
    tol: f64,
) -> OracleReport {
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut attempt = 0;
            loop {
                let s = trial_seed(seed, trial, attempt);
                let report = controllability_rank(&sample_realization(g, leaders, s), tol);
                if report.verdict != Verdict::Indeterminate || attempt == MAX_RESAMPLES {
                    return TrialRecord {
                        trial,
                        seed: s,
                        rank: report.rank,
                        verdict: report.verdict,
                    };
                }
                attempt += 1;
            }
        })
        .collect();
    let count = |v| records.iter().filter(|r| r.verdict == v).count();
    OracleReport {
        trials,
        pass_count: count(Verdict::Controllable),
        fail_count: count(Verdict::Uncontrollable),
        indeterminate_count: count(Verdict::Indeterminate),
        records,
    }
}
