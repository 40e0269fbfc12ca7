//! Scalar statistics helpers: sample moments, Pearson correlation,
//! quantile binning, and chi-square tail probabilities.

/// Sample mean and standard error (Bessel-corrected std / sqrt(n)).
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    assert!(n >= 2, "need at least two samples");
    let mean = xs.iter().sum::<f64>() / n as f64;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    let var = ss / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Pearson correlation; returns 0 when either margin is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

/// Natural log of the gamma function (Lanczos, g = 7).
pub fn ln_gamma(z: f64) -> f64 {
    #[allow(clippy::excessive_precision)] // published table values
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if z < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * z).sin()).ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
pub fn reg_gamma_upper(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - reg_gamma_lower_series(a, x)
    } else {
        reg_gamma_upper_cf(a, x)
    }
}

fn reg_gamma_lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    for n in 1..500 {
        term *= x / (a + n as f64);
        sum += term;
        if term.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn reg_gamma_upper_cf(a: f64, x: f64) -> f64 {
    // Lentz's algorithm for the continued fraction.
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Survival function of the chi-square distribution with `dof` degrees.
pub fn chi_square_sf(stat: f64, dof: usize) -> f64 {
    reg_gamma_upper(dof as f64 / 2.0, stat / 2.0)
}

/// Result of a chi-square independence test on quantile-binned pairs.
#[derive(Debug, Clone, Copy)]
pub struct IndependenceTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// True when quantile bins collapsed (tied data) and the table had to be
    /// reduced; with fewer than two bins on a margin the test cannot reject,
    /// and `p_value` is reported as 1.
    pub degenerate: bool,
}

/// Quartile edges of a sample (type-1 sample quantiles).
fn quartile_edges(values: &[f64]) -> [f64; 3] {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    [sorted[n / 4], sorted[n / 2], sorted[3 * n / 4]]
}

fn bin_of(edges: &[f64], v: f64) -> usize {
    edges.partition_point(|&e| e < v)
}

/// Chi-square independence test on a 4x4 quantile binning of `(xs, ys)`.
///
/// Tied data can collapse quantile edges; duplicated edges are merged and the
/// table reduced. A margin with a single bin carries no information, so the
/// test degenerates to "cannot reject" with p = 1.
pub fn chi_square_independence(xs: &[f64], ys: &[f64]) -> IndependenceTest {
    assert_eq!(xs.len(), ys.len());
    let mut ex: Vec<f64> = quartile_edges(xs).to_vec();
    let mut ey: Vec<f64> = quartile_edges(ys).to_vec();
    ex.dedup();
    ey.dedup();
    let rows = ex.len() + 1;
    let cols = ey.len() + 1;
    let mut degenerate = rows < 4 || cols < 4;

    let mut counts = vec![vec![0u64; cols]; rows];
    for (x, y) in xs.iter().zip(ys) {
        counts[bin_of(&ex, *x)][bin_of(&ey, *y)] += 1;
    }
    let row_sums: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<u64> = (0..cols)
        .map(|j| counts.iter().map(|r| r[j]).sum())
        .collect();

    let live_rows: Vec<usize> = (0..rows).filter(|&i| row_sums[i] > 0).collect();
    let live_cols: Vec<usize> = (0..cols).filter(|&j| col_sums[j] > 0).collect();
    if live_rows.len() < rows || live_cols.len() < cols {
        degenerate = true;
    }
    if live_rows.len() < 2 || live_cols.len() < 2 {
        return IndependenceTest {
            statistic: 0.0,
            dof: 0,
            p_value: 1.0,
            degenerate: true,
        };
    }

    let total = xs.len() as f64;
    let mut stat = 0.0;
    for &i in &live_rows {
        for &j in &live_cols {
            let expected = row_sums[i] as f64 * col_sums[j] as f64 / total;
            let diff = counts[i][j] as f64 - expected;
            stat += diff * diff / expected;
        }
    }
    let dof = (live_rows.len() - 1) * (live_cols.len() - 1);
    IndependenceTest {
        statistic: stat,
        dof,
        p_value: chi_square_sf(stat, dof),
        degenerate,
    }
}
