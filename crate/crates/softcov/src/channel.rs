//! Finite discrete memoryless channel model with exact information-density
//! computations.
//!
//! A channel couples an input distribution `P_X` with a row-stochastic
//! transition matrix `P_{Y|X}`; the output marginal `P_Y` is derived and
//! cached at construction. Construction prunes zero-mass inputs and
//! zero-marginal outputs, so every retained input and output carries strictly
//! positive probability and `P_{Y|X}(y|x) > 0` implies `P_Y(y) > 0`.
//!
//! The information density `i(x;y) = log P_{Y|X}(y|x) - log P_Y(y)` is always
//! formed from logs of raw entries (never the log of a ratio), which avoids
//! cancellation near singular configurations. Zero-probability pairs get a
//! `-inf` sentinel and are excluded from every expectation. All quantities
//! are in nats.

use std::path::Path;

use serde::Deserialize;

use crate::{Error, Result};

/// Row/vector sums may deviate from 1 by at most this much before rejection.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-9;
/// Stored distributions sum to 1 within this bound after normalization.
pub const NORMALIZED_TOLERANCE: f64 = 1e-12;
/// Per-output conditional variances below this count as zero.
pub const SINGULARITY_TOLERANCE: f64 = 1e-12;

/// Validated channel triple `(P_X, P_{Y|X}, P_Y)` over finite alphabets.
///
/// Immutable after construction and safe to share across threads; every
/// operation is a pure function.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteChannel {
    input_dist: Vec<f64>,
    transition: Vec<Vec<f64>>,
    output_marginal: Vec<f64>,
    log_input: Vec<f64>,
    log_transition: Vec<Vec<f64>>,
    log_output: Vec<f64>,
}

/// Exact moments of the information density under `P_{XY}`.
///
/// The MGF itself is evaluated on demand via
/// [`DiscreteChannel::density_mgf`].
#[derive(Debug, Clone, Copy)]
pub struct DensityMoments {
    /// `E[i(X;Y)]`, the mutual information (nats).
    pub mean: f64,
    /// `Var[i(X;Y)]` (nats^2).
    pub variance: f64,
    /// `E[|i(X;Y) - E i|^3]` (nats^3).
    pub abs_third_central: f64,
}

enum SpecViolation {
    Dimension(String),
    InputNegative { index: usize, value: f64 },
    InputSum { sum: f64 },
    RowNegative { row: usize, col: usize, value: f64 },
    RowSum { row: usize, sum: f64 },
    Empty,
}

impl SpecViolation {
    fn message(&self) -> String {
        match self {
            SpecViolation::Dimension(msg) => msg.clone(),
            SpecViolation::InputNegative { index, value } => {
                format!("input_dist[{index}] = {value} is negative")
            }
            SpecViolation::InputSum { sum } => {
                format!("input_dist sums to {sum:.12} (must be within 1e-9 of 1)")
            }
            SpecViolation::RowNegative { row, col, value } => {
                format!("transition[{row}][{col}] = {value} is negative")
            }
            SpecViolation::RowSum { row, sum } => {
                format!("transition row {row} sums to {sum:.12} (must be within 1e-9 of 1)")
            }
            SpecViolation::Empty => "all inputs pruned: empty alphabet".to_string(),
        }
    }

    fn into_error(self) -> Error {
        match self {
            SpecViolation::Dimension(msg) => Error::DimensionMismatch(msg),
            SpecViolation::Empty => Error::EmptyAlphabet,
            SpecViolation::InputNegative { .. } | SpecViolation::InputSum { .. } => {
                Error::NonStochastic {
                    what: "input distribution".into(),
                    detail: self.message(),
                }
            }
            SpecViolation::RowNegative { row, .. } | SpecViolation::RowSum { row, .. } => {
                Error::NonStochastic {
                    what: format!("transition row {row}"),
                    detail: self.message(),
                }
            }
        }
    }
}

fn validate(input_dist: &[f64], transition: &[Vec<f64>]) -> std::result::Result<(), SpecViolation> {
    if input_dist.is_empty() || transition.is_empty() {
        return Err(SpecViolation::Dimension(
            "input distribution and transition matrix must be non-empty".into(),
        ));
    }
    if input_dist.len() != transition.len() {
        return Err(SpecViolation::Dimension(format!(
            "input_dist has {} entries but transition has {} rows",
            input_dist.len(),
            transition.len()
        )));
    }
    let cols = transition[0].len();
    if cols == 0 {
        return Err(SpecViolation::Dimension(
            "transition rows must be non-empty".into(),
        ));
    }
    for (x, row) in transition.iter().enumerate() {
        if row.len() != cols {
            return Err(SpecViolation::Dimension(format!(
                "transition row {x} has {} entries, expected {cols}",
                row.len()
            )));
        }
    }
    for (i, &p) in input_dist.iter().enumerate() {
        if p.is_nan() || p < 0.0 {
            return Err(SpecViolation::InputNegative { index: i, value: p });
        }
    }
    let in_sum: f64 = input_dist.iter().sum();
    if (in_sum - 1.0).abs() > STOCHASTIC_TOLERANCE {
        return Err(SpecViolation::InputSum { sum: in_sum });
    }
    if input_dist.iter().all(|&p| p == 0.0) {
        return Err(SpecViolation::Empty);
    }
    for (x, row) in transition.iter().enumerate() {
        if input_dist[x] == 0.0 {
            continue; // row will be pruned
        }
        for (y, &p) in row.iter().enumerate() {
            if p.is_nan() || p < 0.0 {
                return Err(SpecViolation::RowNegative {
                    row: x,
                    col: y,
                    value: p,
                });
            }
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > STOCHASTIC_TOLERANCE {
            return Err(SpecViolation::RowSum { row: x, sum: s });
        }
    }
    Ok(())
}

/// Renormalize in place unless the sum is already within 1e-12 of 1.
///
/// Leaving already-normalized vectors untouched makes construction
/// idempotent bit for bit.
fn normalize(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > NORMALIZED_TOLERANCE {
        for p in v.iter_mut() {
            *p /= s;
        }
    }
}

/// Validate, prune, and cache a channel.
///
/// Zero-mass inputs and zero-marginal outputs are dropped; remaining vectors
/// are renormalized only when their sums drift beyond 1e-12, so feeding a
/// built channel back through `build_channel` reproduces it exactly.
pub fn build_channel(input_dist: &[f64], transition: &[Vec<f64>]) -> Result<DiscreteChannel> {
    validate(input_dist, transition).map_err(SpecViolation::into_error)?;

    // Prune zero-mass inputs.
    let keep_x: Vec<usize> = (0..input_dist.len())
        .filter(|&x| input_dist[x] > 0.0)
        .collect();
    let mut input: Vec<f64> = keep_x.iter().map(|&x| input_dist[x]).collect();
    let mut rows: Vec<Vec<f64>> = keep_x.iter().map(|&x| transition[x].clone()).collect();
    normalize(&mut input);
    for row in rows.iter_mut() {
        normalize(row);
    }

    // Output marginal over the retained inputs, then prune dead outputs.
    let cols = rows[0].len();
    let mut marginal = vec![0.0; cols];
    for (px, row) in input.iter().zip(&rows) {
        for (q, &t) in marginal.iter_mut().zip(row) {
            *q += px * t;
        }
    }
    let keep_y: Vec<usize> = (0..cols).filter(|&y| marginal[y] > 0.0).collect();
    if keep_y.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    if keep_y.len() != cols {
        for row in rows.iter_mut() {
            *row = keep_y.iter().map(|&y| row[y]).collect();
        }
        marginal = keep_y.iter().map(|&y| marginal[y]).collect();
    }
    normalize(&mut marginal);

    let log_input: Vec<f64> = input.iter().map(|&p| p.ln()).collect();
    let log_transition: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY })
                .collect()
        })
        .collect();
    let log_output: Vec<f64> = marginal.iter().map(|&q| q.ln()).collect();

    // Absolute continuity is automatic after pruning: every retained output
    // has positive marginal.
    debug_assert!(rows.iter().enumerate().all(|(x, row)| {
        row.iter()
            .enumerate()
            .all(|(y, &t)| t == 0.0 || marginal[y] > 0.0 || input[x] == 0.0)
    }));

    Ok(DiscreteChannel {
        input_dist: input,
        transition: rows,
        output_marginal: marginal,
        log_input,
        log_transition,
        log_output,
    })
}

impl DiscreteChannel {
    pub fn input_card(&self) -> usize {
        self.input_dist.len()
    }

    pub fn output_card(&self) -> usize {
        self.output_marginal.len()
    }

    pub fn input_dist(&self) -> &[f64] {
        &self.input_dist
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn transition_prob(&self, x: usize, y: usize) -> f64 {
        self.transition[x][y]
    }

    pub fn output_marginal(&self) -> &[f64] {
        &self.output_marginal
    }

    pub fn log_transition_prob(&self, x: usize, y: usize) -> f64 {
        self.log_transition[x][y]
    }

    pub fn log_output_prob(&self, y: usize) -> f64 {
        self.log_output[y]
    }

    /// `i(x;y) = log P_{Y|X}(y|x) - log P_Y(y)`; `-inf` on zero transitions.
    ///
    /// The sentinel marks a zero-mass pair: callers iterate over the positive
    /// support and must never multiply the sentinel by zero.
    pub fn information_density(&self, x: usize, y: usize) -> f64 {
        let lt = self.log_transition[x][y];
        if lt == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            lt - self.log_output[y]
        }
    }

    /// `log P_{X|Y}(x|y)`; `-inf` off the posterior support.
    pub fn log_posterior(&self, x: usize, y: usize) -> f64 {
        let lt = self.log_transition[x][y];
        if lt == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.log_input[x] + lt - self.log_output[y]
        }
    }

    /// Iterate the positive-mass pairs as `(x, y, p_xy, density)`.
    pub fn support_iter(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        (0..self.input_card()).flat_map(move |x| {
            (0..self.output_card()).filter_map(move |y| {
                let t = self.transition[x][y];
                if t > 0.0 {
                    let p = self.input_dist[x] * t;
                    Some((x, y, p, self.information_density(x, y)))
                } else {
                    None
                }
            })
        })
    }

    /// Law of `i(X;Y)` under `P_{XY}` as `(value, probability)` atoms, in
    /// deterministic (x-major) order. Zero-mass pairs are excluded.
    pub fn density_atoms(&self) -> Vec<(f64, f64)> {
        self.support_iter().map(|(_, _, p, d)| (d, p)).collect()
    }

    /// `I(X;Y) = E[i(X;Y)]` in nats (clamped at zero against rounding).
    pub fn mutual_information(&self) -> f64 {
        let mi: f64 = self.support_iter().map(|(_, _, p, d)| p * d).sum();
        mi.max(0.0)
    }

    /// `E[exp(tau * i(X;Y))]`, each term exponentiated from its log form.
    pub fn density_mgf(&self, tau: f64) -> f64 {
        assert!(tau.is_finite());
        let mut sum = 0.0;
        for x in 0..self.input_card() {
            for y in 0..self.output_card() {
                let lt = self.log_transition[x][y];
                if lt == f64::NEG_INFINITY {
                    continue;
                }
                let log_term = self.log_input[x] + lt + tau * (lt - self.log_output[y]);
                sum += log_term.exp();
            }
        }
        sum
    }

    /// Mean, variance, and absolute third central moment of `i(X;Y)`.
    pub fn density_moments(&self) -> DensityMoments {
        let mean = self.support_iter().map(|(_, _, p, d)| p * d).sum::<f64>();
        let mut variance = 0.0;
        let mut abs_third = 0.0;
        for (_, _, p, d) in self.support_iter() {
            let c = d - mean;
            variance += p * c * c;
            abs_third += p * c.abs().powi(3);
        }
        DensityMoments {
            mean,
            variance,
            abs_third_central: abs_third,
        }
    }

    /// Variance of `i(X;y)` under the posterior `P_{X|Y=y}`.
    pub fn conditional_density_variance(&self, y: usize) -> f64 {
        assert!(self.output_marginal[y] > 0.0);
        let mut mean = 0.0;
        let mut mass = 0.0;
        for x in 0..self.input_card() {
            let lp = self.log_posterior(x, y);
            if lp == f64::NEG_INFINITY {
                continue;
            }
            let w = lp.exp();
            mean += w * self.information_density(x, y);
            mass += w;
        }
        mean /= mass;
        let mut var = 0.0;
        for x in 0..self.input_card() {
            let lp = self.log_posterior(x, y);
            if lp == f64::NEG_INFINITY {
                continue;
            }
            let c = self.information_density(x, y) - mean;
            var += (lp.exp() / mass) * c * c;
        }
        var
    }

    /// True when the information density is a function of the output alone,
    /// i.e. `Var[i(X;Y) | Y = y] = 0` for every retained output. Erasure-type
    /// channels are singular; crossover-type channels are not.
    pub fn is_singular(&self) -> bool {
        (0..self.output_card())
            .all(|y| self.conditional_density_variance(y) < SINGULARITY_TOLERANCE)
    }

    /// Cumulative input distribution for inverse-CDF sampling.
    pub fn input_cdf(&self) -> Vec<f64> {
        crate::rng::cumulative(&self.input_dist)
    }

    /// Cumulative output marginal for inverse-CDF sampling.
    pub fn output_cdf(&self) -> Vec<f64> {
        crate::rng::cumulative(&self.output_marginal)
    }
}

#[derive(Deserialize)]
struct ChannelSpecFile {
    input_dist: Vec<f64>,
    transition: Vec<Vec<f64>>,
}

/// Parse a channel from JSON text.
///
/// Format: `{"input_dist": [..], "transition": [[..], ..]}`. Violations are
/// rejected with a message anchored to the offending line of `origin`.
pub fn channel_from_json_str(text: &str, origin: &str) -> Result<DiscreteChannel> {
    let spec: ChannelSpecFile = serde_json::from_str(text).map_err(|e| Error::ChannelFile {
        path: origin.to_string(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    if let Err(v) = validate(&spec.input_dist, &spec.transition) {
        let line = match &v {
            SpecViolation::InputNegative { .. } | SpecViolation::InputSum { .. } => {
                key_line(text, "input_dist")
            }
            SpecViolation::RowNegative { row, .. } | SpecViolation::RowSum { row, .. } => {
                transition_row_line(text, *row).unwrap_or_else(|| key_line(text, "transition"))
            }
            _ => 1,
        };
        return Err(Error::ChannelFile {
            path: origin.to_string(),
            line,
            msg: v.message(),
        });
    }
    build_channel(&spec.input_dist, &spec.transition)
}

/// Load a channel spec file from disk, with line-anchored rejection messages.
pub fn load_channel(path: &Path) -> Result<DiscreteChannel> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    channel_from_json_str(&text, &path.display().to_string())
}

/// 1-based line on which `key` first appears.
fn key_line(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    match text.find(&needle) {
        Some(pos) => text[..pos].bytes().filter(|&b| b == b'\n').count() + 1,
        None => 1,
    }
}

/// 1-based line on which the `row`-th nested array of `"transition"` starts.
fn transition_row_line(text: &str, row: usize) -> Option<usize> {
    let start = text.find("\"transition\"")?;
    let mut depth = 0usize;
    let mut seen_rows = 0usize;
    let mut line = text[..start].bytes().filter(|&b| b == b'\n').count() + 1;
    for b in text[start..].bytes() {
        match b {
            b'\n' => line += 1,
            b'[' => {
                depth += 1;
                if depth == 2 {
                    if seen_rows == row {
                        return Some(line);
                    }
                    seen_rows += 1;
                }
            }
            b']' => {
                if depth == 0 {
                    return None;
                }
                depth -= 1;
                if depth == 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}
