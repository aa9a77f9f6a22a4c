//! Block-model parameters and the Markov-chain quantities derived from them.
//!
//! A model is the quadruple `(d, k, M, pi)` plus a vertex count and a variant
//! flag. `M` is symmetric and nonnegative with `M pi = e`, so
//! `T = M Diag(pi)` is the transition matrix of a reversible chain with
//! stationary distribution `pi`. The second eigenvalue of `T` controls the
//! detectability thresholds.

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigen, Mat};
use serde::{Deserialize, Serialize};

const INVARIANT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Degree-regular block model: d-regular graphs with exact group sizes
    /// and exact inter/intra-group edge counts.
    Drbm,
    /// Sparse stochastic block model: labels i.i.d. from pi, edges
    /// independent with probability `M[i][j] * d / n`.
    Sbm,
}

/// Parameters `(n, d, k, M, pi)` of a block model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub d: f64,
    pub k: usize,
    /// Row-major k x k symmetric edge-intensity matrix with `M pi = e`.
    #[serde(rename = "M")]
    pub m: Vec<f64>,
    pub pi: Vec<f64>,
    pub variant: Variant,
}

impl ModelParams {
    pub fn new(
        n: usize,
        d: f64,
        k: usize,
        m: Vec<f64>,
        pi: Vec<f64>,
        variant: Variant,
    ) -> Result<Self> {
        let p = ModelParams { n, d, k, m, pi, variant };
        p.validate()?;
        Ok(p)
    }

    /// The symmetric model at signal strength `lambda`:
    /// diagonal `1 + (k-1) lambda`, off-diagonal `1 - lambda`, uniform `pi`.
    pub fn symmetric(n: usize, d: f64, k: usize, lambda: f64, variant: Variant) -> Result<Self> {
        let mut m = vec![1.0 - lambda; k * k];
        for i in 0..k {
            m[i * k + i] = 1.0 + (k as f64 - 1.0) * lambda;
        }
        let pi = vec![1.0 / k as f64; k];
        ModelParams::new(n, d, k, m, pi, variant)
    }

    /// The k-coloring model: zero diagonal, `k/(k-1)` off-diagonal, uniform
    /// `pi` (the unique zero-diagonal symmetric model with `M pi = e`).
    pub fn coloring(n: usize, d: f64, k: usize, variant: Variant) -> Result<Self> {
        let off = k as f64 / (k as f64 - 1.0);
        let mut m = vec![off; k * k];
        for i in 0..k {
            m[i * k + i] = 0.0;
        }
        let pi = vec![1.0 / k as f64; k];
        ModelParams::new(n, d, k, m, pi, variant)
    }

    #[inline]
    pub fn m_at(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.k + j]
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k;
        if k == 0 || self.pi.len() != k || self.m.len() != k * k {
            return Err(Error::InvalidParams("dimension mismatch in (k, M, pi)".into()));
        }
        if self.d <= 0.0 {
            return Err(Error::InvalidParams("d must be positive".into()));
        }
        if self.pi.iter().any(|&p| p <= 0.0) {
            return Err(Error::InvalidParams("pi must be entrywise positive".into()));
        }
        let s: f64 = self.pi.iter().sum();
        if (s - 1.0).abs() > INVARIANT_TOL {
            return Err(Error::InvalidParams(format!("pi sums to {s}, expected 1")));
        }
        for i in 0..k {
            for j in 0..k {
                if self.m_at(i, j) < 0.0 {
                    return Err(Error::InvalidParams("M must be entrywise nonnegative".into()));
                }
                if (self.m_at(i, j) - self.m_at(j, i)).abs() > INVARIANT_TOL {
                    return Err(Error::InvalidParams("M must be symmetric".into()));
                }
            }
        }
        for i in 0..k {
            let row: f64 = (0..k).map(|j| self.m_at(i, j) * self.pi[j]).sum();
            if (row - 1.0).abs() > 1e-8 {
                return Err(Error::InvalidParams(format!(
                    "normalization M pi = e violated in row {i}: got {row}"
                )));
            }
        }
        if self.variant == Variant::Drbm {
            if self.d.fract() != 0.0 {
                return Err(Error::InvalidParams("DRBM requires integer d".into()));
            }
            self.drbm_counts()?;
        }
        Ok(())
    }

    /// Exact DRBM group sizes and per-pair edge counts; errors if the
    /// parameters do not produce integers.
    pub fn drbm_counts(&self) -> Result<DrbmCounts> {
        let n = self.n as f64;
        let d = self.d;
        let k = self.k;
        let mut group_sizes = Vec::with_capacity(k);
        for i in 0..k {
            let g = self.pi[i] * n;
            let r = g.round();
            if (g - r).abs() > 1e-6 || r <= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "group size pi[{i}]*n = {g} is not a positive integer"
                )));
            }
            group_sizes.push(r as usize);
        }
        let mut edges = vec![0usize; k * k];
        for i in 0..k {
            for j in i..k {
                let count = if i == j {
                    self.pi[i] * self.pi[i] * self.m_at(i, i) * d * n / 2.0
                } else {
                    self.pi[i] * self.pi[j] * self.m_at(i, j) * d * n
                };
                let r = count.round();
                if (count - r).abs() > 1e-6 {
                    return Err(Error::InvalidParams(format!(
                        "edge count for groups ({i},{j}) = {count} is not an integer"
                    )));
                }
                edges[i * k + j] = r as usize;
                edges[j * k + i] = r as usize;
            }
        }
        Ok(DrbmCounts { group_sizes, edges, k })
    }

    /// Round group sizes and edge counts to the nearest feasible integers and
    /// return adjusted parameters. The rounding renormalizes `pi` to the
    /// rounded group sizes and rescales `M` so `M pi = e` still holds.
    pub fn round_to_feasible(&self) -> Result<ModelParams> {
        if self.variant != Variant::Drbm {
            return Ok(self.clone());
        }
        let k = self.k;
        let n = self.n as f64;
        let mut sizes: Vec<usize> = self.pi.iter().map(|&p| (p * n).round().max(1.0) as usize).collect();
        // Fix the total to n by adjusting the largest group.
        let total: usize = sizes.iter().sum();
        let diff = self.n as i64 - total as i64;
        if diff != 0 {
            let argmax = (0..k).max_by_key(|&i| sizes[i]).unwrap();
            let adjusted = sizes[argmax] as i64 + diff;
            if adjusted <= 0 {
                return Err(Error::InvalidParams("cannot round group sizes to n".into()));
            }
            sizes[argmax] = adjusted as usize;
        }
        let pi: Vec<f64> = sizes.iter().map(|&s| s as f64 / n).collect();
        // Round stub counts between pairs to even totals, then rebuild M.
        let d = self.d;
        let mut m = vec![0.0; k * k];
        for i in 0..k {
            for j in i..k {
                let target = if i == j {
                    (pi[i] * pi[i] * self.m_at(i, i) * d * n / 2.0).round()
                } else {
                    (pi[i] * pi[j] * self.m_at(i, j) * d * n).round()
                };
                let v = if i == j {
                    2.0 * target / (pi[i] * pi[i] * d * n)
                } else {
                    target / (pi[i] * pi[j] * d * n)
                };
                m[i * k + j] = v;
                m[j * k + i] = v;
            }
        }
        // Stub totals must exactly exhaust pi(i)*d*n per group. Cross counts
        // absorb parity mismatches (+-1 edge flips the parity of both ends),
        // then diagonals absorb the even remainder.
        let mut counts = vec![0i64; k * k];
        for i in 0..k {
            for j in i..k {
                let c = if i == j {
                    (m[i * k + i] * pi[i] * pi[i] * d * n / 2.0).round() as i64
                } else {
                    (m[i * k + j] * pi[i] * pi[j] * d * n).round() as i64
                };
                counts[i * k + j] = c;
                counts[j * k + i] = c;
            }
        }
        let slack_of = |counts: &[i64], i: usize| -> i64 {
            let stubs: i64 = (0..k)
                .map(|j| if i == j { 2 * counts[i * k + i] } else { counts[i * k + j] })
                .sum();
            (pi[i] * d * n).round() as i64 - stubs
        };
        let odd: Vec<usize> = (0..k).filter(|&i| slack_of(&counts, i) % 2 != 0).collect();
        if odd.len() % 2 != 0 {
            return Err(Error::InvalidParams(
                "rounding cannot fix stub parity; adjust parameters".into(),
            ));
        }
        for pair in odd.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            let delta = if slack_of(&counts, a) > 0 { 1 } else { -1 };
            counts[a * k + b] += delta;
            counts[b * k + a] += delta;
            if counts[a * k + b] < 0 {
                return Err(Error::InvalidParams(
                    "rounding drove a cross count negative".into(),
                ));
            }
        }
        for i in 0..k {
            let slack = slack_of(&counts, i);
            debug_assert_eq!(slack % 2, 0);
            counts[i * k + i] += slack / 2;
            if counts[i * k + i] < 0 {
                return Err(Error::InvalidParams(
                    "rounding drove a within-group count negative".into(),
                ));
            }
        }
        for i in 0..k {
            for j in i..k {
                let c = counts[i * k + j] as f64;
                let v = if i == j {
                    2.0 * c / (pi[i] * pi[i] * d * n)
                } else {
                    c / (pi[i] * pi[j] * d * n)
                };
                m[i * k + j] = v;
                m[j * k + i] = v;
            }
        }
        ModelParams::new(self.n, self.d, k, m, pi, Variant::Drbm)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: ModelParams = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }
}

/// Exact counts implied by DRBM parameters.
#[derive(Debug, Clone)]
pub struct DrbmCounts {
    pub group_sizes: Vec<usize>,
    /// Row-major k x k; entry (i,j) is the number of edges between groups i
    /// and j (i != j), or internal to group i (i == j).
    pub edges: Vec<usize>,
    pub k: usize,
}

impl DrbmCounts {
    pub fn edge_count(&self, i: usize, j: usize) -> usize {
        self.edges[i * self.k + j]
    }
}

/// Spectrum of the transition matrix `T = M Diag(pi)`.
///
/// `F` holds right eigenvectors of `T` normalized so `F^T Diag(pi) F = 1`,
/// which makes the first column exactly the all-ones vector. This is the
/// normalization under which the block change of basis diagonalizes the
/// affine constraints.
#[derive(Debug, Clone)]
pub struct TransitionSpectrum {
    pub t: Mat,
    /// Eigenvalues sorted by descending modulus; `eigenvalues[0] == 1`.
    pub eigenvalues: Vec<f64>,
    pub f: Mat,
    pub lambda: Mat,
    /// Centered transition matrix `T - e pi^T`.
    pub tbar: Mat,
}

impl TransitionSpectrum {
    pub fn second_eigenvalue(&self) -> f64 {
        if self.eigenvalues.len() > 1 {
            self.eigenvalues[1]
        } else {
            0.0
        }
    }
}

/// Eigen-decompose `T = M Diag(pi)` through the symmetric conjugate
/// `Diag(pi)^{1/2} M Diag(pi)^{1/2}`, which shares its (real) spectrum.
pub fn derive_spectrum(params: &ModelParams) -> Result<TransitionSpectrum> {
    params.validate()?;
    let k = params.k;
    let mut t = Mat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            t[(i, j)] = params.m_at(i, j) * params.pi[j];
        }
    }
    let mut sym = Mat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            sym[(i, j)] = params.pi[i].sqrt() * params.m_at(i, j) * params.pi[j].sqrt();
        }
    }
    let (eigs, vecs) = jacobi_eigen(&sym)?;
    // Sort by descending modulus, putting the stationary eigenvalue first.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eigs[b].abs().partial_cmp(&eigs[a].abs()).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigs[i]).collect();
    if (eigenvalues[0] - 1.0).abs() > 1e-8 {
        return Err(Error::Numerical(format!(
            "top transition eigenvalue is {} (expected 1); eigensolve failed",
            eigenvalues[0]
        )));
    }
    // Back-transform: F = Diag(pi)^{-1/2} O, so F^T Diag(pi) F = 1.
    let mut f = Mat::zeros(k, k);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..k {
            f[(r, col)] = vecs[(r, src)] / params.pi[r].sqrt();
        }
        // Fix signs so the first column is +e and later columns have a
        // positive leading entry (deterministic output).
        let lead = f[(0, col)];
        if lead < 0.0 {
            for r in 0..k {
                f[(r, col)] = -f[(r, col)];
            }
        }
    }
    let mut lambda = Mat::zeros(k, k);
    for i in 0..k {
        lambda[(i, i)] = eigenvalues[i];
    }
    let mut tbar = t.clone();
    for i in 0..k {
        for j in 0..k {
            tbar[(i, j)] -= params.pi[j];
        }
    }
    Ok(TransitionSpectrum { t, eigenvalues, f, lambda, tbar })
}

/// Kesten-Stigum threshold: `lambda_2^{-2}` for the SBM and
/// `lambda_2^{-2} + 1` for the DRBM. Returns `None` when `lambda_2 = 0`
/// (threshold at infinity).
pub fn ks_threshold(params: &ModelParams) -> Result<Option<f64>> {
    let spec = derive_spectrum(params)?;
    let l2 = spec.second_eigenvalue().abs();
    if l2 < 1e-14 {
        return Ok(None);
    }
    Ok(Some(match params.variant {
        Variant::Sbm => l2.powi(-2),
        Variant::Drbm => l2.powi(-2) + 1.0,
    }))
}

/// The Kesten-Stigum statistic: `(d-1) lambda_2^2` for the DRBM,
/// `d lambda_2^2` for the SBM. Detection is conjectured efficient iff > 1.
pub fn ks_statistic(params: &ModelParams) -> Result<f64> {
    let spec = derive_spectrum(params)?;
    let l2 = spec.second_eigenvalue();
    Ok(match params.variant {
        Variant::Drbm => (params.d - 1.0) * l2 * l2,
        Variant::Sbm => params.d * l2 * l2,
    })
}

/// Strict test for being above the Kesten-Stigum threshold. Equality (within
/// a 1e-10 band, to absorb eigensolver round-off) counts as "at threshold"
/// and reports false.
pub fn above_ks(params: &ModelParams) -> Result<bool> {
    Ok(ks_statistic(params)? > 1.0 + 1e-10)
}

fn entropy(dist: &[f64]) -> f64 {
    dist.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// First-moment degree bound `2 H(pi) / (H(pi) - H(pi, M))`, where
/// `H(pi, M)` is the average entropy of the stochastic rows of
/// `T = M Diag(pi)` under the stationary distribution. Above this degree,
/// partitions with the prescribed edge-count profile vanish w.h.p. in the
/// null model. Returns `None` when the bound is vacuous.
pub fn first_moment_bound(params: &ModelParams) -> Result<Option<f64>> {
    params.validate()?;
    let k = params.k;
    let h_pi = entropy(&params.pi);
    let mut h_rows = 0.0;
    for i in 0..k {
        let row: Vec<f64> = (0..k).map(|j| params.m_at(i, j) * params.pi[j]).collect();
        h_rows += params.pi[i] * entropy(&row);
    }
    if h_pi - h_rows <= 1e-12 {
        return Ok(None);
    }
    Ok(Some(2.0 * h_pi / (h_pi - h_rows)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_model_spectrum_is_one_then_lambda() {
        let p = ModelParams::symmetric(80, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        let s = derive_spectrum(&p).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn rank_one_chain_has_zero_tail() {
        // M = J with uniform pi: T = J/k, eigenvalues (1, 0, ..., 0).
        let k = 4;
        let p = ModelParams::new(
            80,
            4.0,
            k,
            vec![1.0; k * k],
            vec![0.25; k],
            Variant::Sbm,
        )
        .unwrap();
        let s = derive_spectrum(&p).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
        for &e in &s.eigenvalues[1..] {
            assert!(e.abs() < 1e-12);
        }
    }

    #[test]
    fn k3_symmetric_spectrum_matches_direct_eigensolve() {
        // Oracle: direct 3x3 eigensolve of T itself via its symmetrization.
        let p = ModelParams::symmetric(300, 5.0, 3, 0.3, Variant::Sbm).unwrap();
        let s = derive_spectrum(&p).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 0.3).abs() < 1e-10);
        assert!((s.eigenvalues[2] - 0.3).abs() < 1e-10);
    }

    #[test]
    fn spectrum_invariants_hold() {
        let p = ModelParams::new(
            120,
            6.0,
            2,
            vec![1.75, 0.5, 0.5, 4.0 / 3.0],
            vec![0.4, 0.6],
            Variant::Sbm,
        );
        // pi = (0.4, 0.6): rows of M pi: 1.75*0.4 + 0.5*0.6 = 1, 0.5*0.4 + (4/3)*0.6 = 1.
        let p = p.unwrap();
        let s = derive_spectrum(&p).unwrap();
        let k = p.k;
        // T F = F Lambda
        let tf = s.t.matmul(&s.f);
        let fl = s.f.matmul(&s.lambda);
        for i in 0..k * k {
            assert!((tf.data[i] - fl.data[i]).abs() < 1e-9);
        }
        // F^T Diag(pi) F = 1
        let mut dpi = Mat::zeros(k, k);
        for i in 0..k {
            dpi[(i, i)] = p.pi[i];
        }
        let g = s.f.transpose().matmul(&dpi).matmul(&s.f);
        for i in 0..k {
            for j in 0..k {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - want).abs() < 1e-9);
            }
        }
        // First column of F is the all-ones vector.
        for i in 0..k {
            assert!((s.f[(i, 0)] - 1.0).abs() < 1e-9);
        }
        // Stationarity pi^T T = pi^T.
        for j in 0..k {
            let col: f64 = (0..k).map(|i| p.pi[i] * s.t[(i, j)]).sum();
            assert!((col - p.pi[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn ks_threshold_formulas() {
        let drbm = ModelParams::symmetric(80, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        assert!((ks_threshold(&drbm).unwrap().unwrap() - 5.0).abs() < 1e-9);
        let sbm = ModelParams::symmetric(100, 10.0, 2, 0.5, Variant::Sbm).unwrap();
        assert!((ks_threshold(&sbm).unwrap().unwrap() - 4.0).abs() < 1e-9);
        let drbm3 = ModelParams::symmetric(72, 12.0, 3, 1.0 / 3.0, Variant::Drbm).unwrap();
        assert!((ks_threshold(&drbm3).unwrap().unwrap() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn ks_threshold_monotone_in_lambda() {
        let mut last = f64::INFINITY;
        for &l in &[0.2, 0.3, 0.5, 0.7, 0.9] {
            let p = ModelParams::symmetric(100, 10.0, 2, l, Variant::Sbm).unwrap();
            let t = ks_threshold(&p).unwrap().unwrap();
            assert!(t < last);
            last = t;
        }
    }

    #[test]
    fn ks_threshold_infinite_when_lambda2_zero() {
        let k = 3;
        let p = ModelParams::new(
            90,
            5.0,
            k,
            vec![1.0; k * k],
            vec![1.0 / 3.0; 3],
            Variant::Sbm,
        )
        .unwrap();
        assert!(ks_threshold(&p).unwrap().is_none());
    }

    #[test]
    fn above_ks_cases() {
        let p = ModelParams::symmetric(80, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        assert!(above_ks(&p).unwrap()); // 9 * 0.25 = 2.25 > 1
        let p = ModelParams::symmetric(64, 3.0, 2, 0.5, Variant::Drbm).unwrap();
        assert!(!above_ks(&p).unwrap()); // 2 * 0.25 = 0.5 < 1
        let p = ModelParams::symmetric(100, 4.0, 2, 0.5, Variant::Sbm).unwrap();
        assert!(!above_ks(&p).unwrap()); // boundary 1.0 is strict
    }

    #[test]
    fn first_moment_matches_coloring_closed_form() {
        // 2 log k / (log k - log(k-1)) for the k-coloring model.
        for k in 2..=10usize {
            let p = ModelParams::coloring(10 * k, 3.0, k, Variant::Sbm).unwrap();
            let got = first_moment_bound(&p).unwrap().unwrap();
            let kf = k as f64;
            let want = 2.0 * kf.ln() / (kf.ln() - (kf - 1.0).ln());
            assert!(
                (got - want).abs() < 1e-10,
                "k={k}: got {got}, want {want}"
            );
        }
        let p3 = ModelParams::coloring(30, 3.0, 3, Variant::Sbm).unwrap();
        let b3 = first_moment_bound(&p3).unwrap().unwrap();
        assert!((b3 - 2.0 * 3f64.ln() / (3f64.ln() - 2f64.ln())).abs() < 1e-12);
        assert!((b3 - 5.41902).abs() < 1e-4);
        let p2 = ModelParams::coloring(20, 3.0, 2, Variant::Sbm).unwrap();
        assert!((first_moment_bound(&p2).unwrap().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn first_moment_vacuous_for_flat_model() {
        let p = ModelParams::new(
            100,
            5.0,
            2,
            vec![1.0; 4],
            vec![0.5, 0.5],
            Variant::Sbm,
        )
        .unwrap();
        assert!(first_moment_bound(&p).unwrap().is_none());
    }

    #[test]
    fn drbm_integrality_enforced() {
        // pi * n = 50 each, cross edges 0.25*0.5*4*100 = 50: fine.
        assert!(ModelParams::symmetric(100, 4.0, 2, 0.5, Variant::Drbm).is_ok());
        // n = 10, pi*n = 5, within-group edges 0.25*1.5*4*10/2 = 7.5: bad.
        assert!(ModelParams::symmetric(10, 4.0, 2, 0.5, Variant::Drbm).is_err());
    }

    #[test]
    fn round_to_feasible_produces_valid_params() {
        let raw = ModelParams {
            n: 103,
            d: 4.0,
            k: 2,
            m: vec![1.5, 0.5, 0.5, 1.5],
            pi: vec![0.5, 0.5],
            variant: Variant::Drbm,
        };
        assert!(raw.validate().is_err());
        let fixed = raw.round_to_feasible().unwrap();
        fixed.validate().unwrap();
        let counts = fixed.drbm_counts().unwrap();
        assert_eq!(counts.group_sizes.iter().sum::<usize>(), 103);
    }

    #[test]
    fn json_roundtrip() {
        let p = ModelParams::symmetric(100, 4.0, 2, 0.5, Variant::Drbm).unwrap();
        let s = p.to_json().unwrap();
        let q = ModelParams::from_json(&s).unwrap();
        assert_eq!(p.n, q.n);
        assert_eq!(p.m, q.m);
        assert_eq!(p.variant, q.variant);
    }

    #[test]
    fn invalid_normalization_rejected() {
        let r = ModelParams::new(
            100,
            4.0,
            2,
            vec![1.0, 0.5, 0.5, 1.0],
            vec![0.5, 0.5],
            Variant::Sbm,
        );
        assert!(r.is_err());
    }
}
