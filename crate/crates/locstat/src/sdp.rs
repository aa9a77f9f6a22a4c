//! SDP feasibility instances for path-statistics detection, constructive
//! witnesses for the feasible side, analytic refutation certificates for the
//! infeasible side, and a generic alternating-projection solver.
//!
//! The solver is deliberately refutation-incapable: a failure to converge is
//! reported as inconclusive, never as infeasibility. Refutation evidence
//! comes only from certificate polynomials whose nonnegativity on the bulk
//! spectral interval is checked independently.

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelledGraph};
use crate::linalg::{inverse, jacobi_eigen, lanczos_extremes, lu_solve, Mat, SymOp};
use crate::model::{ModelParams, TransitionSpectrum};
use crate::nbpoly::{km_norm_sq, lb_poly, refutation_poly, NbBasis, DEFAULT_REFUTATION_EPS};
use crate::walks::{centered_nb, nb_matrices};
use serde::Serialize;

/// One affine band constraint `|<Y, matrix> - target| <= halfwidth`.
#[derive(Debug, Clone)]
pub struct AffineBand {
    pub label: String,
    pub matrix: Mat,
    pub target: f64,
    pub halfwidth: f64,
}

/// Hard (exactly enforced) constraint families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HardConstraint {
    /// `Y_uu = 1` for all `u`.
    UnitDiagonal,
    /// `<Y, J> = 0`.
    TraceJZero,
    /// Block structure `nk x nk`: every diagonal entry at most 1.
    BoxDiagAtMostOne { k: usize },
    /// Block structure `nk x nk`: `Tr X_uu = 1` for every vertex `u`.
    BlockTraceOne { k: usize },
}

/// A feasibility problem over the PSD cone.
#[derive(Debug, Clone)]
pub struct SdpInstance {
    pub dim: usize,
    pub hard: Vec<HardConstraint>,
    pub bands: Vec<AffineBand>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SdpVerdict {
    FeasibleWitness,
    RefutedByCertificate,
    SolverInconclusive,
}

/// Data backing a certificate refutation.
#[derive(Debug, Clone)]
pub struct CertificateData {
    /// q-basis coefficients of the certificate polynomial.
    pub nb_coeffs: Vec<f64>,
    pub m_prime: usize,
    pub eps: f64,
    /// Pairing `<f, sum lambda^s q_s>_km`.
    pub value: f64,
    /// `|value| / (sqrt(m) ||f||) - delta`; refutation needs this positive.
    pub margin: f64,
    /// Measured minimum eigenvalue of the deflated certificate operator.
    pub op_min_eig: f64,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Diagnostics {
    pub max_violation: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone)]
pub struct SdpResolution {
    pub verdict: SdpVerdict,
    pub witness: Option<Mat>,
    pub certificate: Option<CertificateData>,
    pub diagnostics: Diagnostics,
}

/// JSON-facing summary (witness reduced to a checksum).
#[derive(Debug, Clone, Serialize)]
pub struct ResolutionSummary {
    pub verdict: SdpVerdict,
    pub margin: Option<f64>,
    pub certificate_value: Option<f64>,
    pub max_violation: f64,
    pub min_eigenvalue: f64,
    pub witness_checksum: Option<String>,
}

impl SdpResolution {
    /// Full witness dump, row-major CSV with an `n` header line.
    pub fn witness_csv(&self) -> Option<String> {
        self.witness.as_ref().map(|w| {
            let mut s = format!("{}\n", w.rows);
            for i in 0..w.rows {
                let row: Vec<String> = w.row(i).iter().map(|x| format!("{x}")).collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        })
    }

    pub fn summary(&self) -> ResolutionSummary {
        ResolutionSummary {
            verdict: self.verdict,
            margin: self.certificate.as_ref().map(|c| c.margin),
            certificate_value: self.certificate.as_ref().map(|c| c.value),
            max_violation: self.diagnostics.max_violation,
            min_eigenvalue: self.diagnostics.min_eigenvalue,
            witness_checksum: self.witness.as_ref().map(checksum),
        }
    }
}

/// FNV-1a over the matrix bytes; enough to pin a witness in a report.
fn checksum(m: &Mat) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for &x in &m.data {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    format!("{h:016x}")
}

/// Level-m symmetric path statistics instance: unit diagonal, zero pairing
/// with J, and bands `|<Y, NB^s> - lambda^s ||q_s||^2 n| <= delta n`.
pub fn build_sps(g: &Graph, d: usize, lambda: f64, m: usize, delta: f64) -> Result<SdpInstance> {
    if m < 1 {
        return Err(Error::Precondition("build_sps needs m >= 1".into()));
    }
    let n = g.n();
    let mats = nb_matrices(g, d, m)?;
    let mut bands = Vec::with_capacity(m);
    for s in 1..=m {
        bands.push(AffineBand {
            label: format!("nb{s}"),
            matrix: mats[s].mat.clone(),
            target: lambda.powi(s as i32) * km_norm_sq(s, d as f64) * n as f64,
            halfwidth: delta * n as f64,
        });
    }
    Ok(SdpInstance {
        dim: n,
        hard: vec![HardConstraint::UnitDiagonal, HardConstraint::TraceJZero],
        bands,
    })
}

/// The planted solution `Y = k/(k-1) (x x^T - J/k)`: 1 on same-group pairs,
/// `-1/(k-1)` across groups.
#[derive(Debug, Clone)]
pub struct PlantedWitness {
    pub matrix: Mat,
    /// False when group sizes are uneven; `<Y, J>` is then nonzero.
    pub balanced: bool,
}

pub fn planted_witness(lg: &LabelledGraph, k: usize) -> PlantedWitness {
    let n = lg.graph.n();
    let same = 1.0;
    let diff = -1.0 / (k as f64 - 1.0);
    let mut y = Mat::zeros(n, n);
    for u in 0..n {
        for v in 0..n {
            y[(u, v)] = if lg.sigma[u] == lg.sigma[v] { same } else { diff };
        }
    }
    let sizes = lg.group_sizes();
    let balanced = sizes.iter().all(|&s| s == n / k) && n % k == 0;
    PlantedWitness { matrix: y, balanced }
}

/// Band values `<Y, NB^s>` for the planted witness, computed through thin
/// quadratic forms (no dense walk matrices), for s = 0..=m.
pub fn planted_band_values(lg: &LabelledGraph, d: usize, m: usize) -> Result<Vec<f64>> {
    let n = lg.graph.n();
    let k = lg.k;
    let mut cols: Vec<Vec<f64>> = vec![vec![0.0; n]; k];
    for (u, &l) in lg.sigma.iter().enumerate() {
        cols[l][u] = 1.0;
    }
    let grams = crate::walks::nb_quadratic_forms(&lg.graph, d, m, &cols)?;
    let scale = k as f64 / (k as f64 - 1.0);
    Ok(grams
        .iter()
        .map(|q| {
            let mut same = 0.0;
            let mut all = 0.0;
            for i in 0..k {
                for j in 0..k {
                    all += q[(i, j)];
                    if i == j {
                        same += q[(i, j)];
                    }
                }
            }
            scale * (same - all / k as f64)
        })
        .collect())
}

/// A feasible matrix for the symmetric path statistics SDP on a null graph
/// below threshold.
#[derive(Debug, Clone)]
pub struct NullWitness {
    pub matrix: Mat,
    /// q-basis coefficients of the spectral polynomial actually used.
    pub coeffs: Vec<f64>,
    /// Minimum of that polynomial over the fattened support interval.
    pub poly_grid_min: f64,
    /// Per-order band gaps `|<Y, NB^s> - target_s| / n` for s = 1..=m.
    pub band_gaps: Vec<f64>,
    /// `<Y, J> / n^2` after construction.
    pub j_residual: f64,
}

/// Construct a null witness `Y >= 0` with unit diagonal, near-zero pairing
/// with J, and the planted band values for s = 1..=m.
///
/// The ansatz is a nonnegative polynomial of the centered adjacency matrix,
/// seeded by the geometric series `sum_s lambda^s q_s` of [`lb_poly`]. At
/// finite n the series coefficients alone miss the band targets (the walk
/// Gram matrix carries cross terms that vanish only asymptotically, and the
/// uniform rescaling 1/(1 - g(d)/n) is meaningless once g(d) is comparable
/// to n), so the leading m+1 coefficients are re-fit against the graph's own
/// Gram data and the diagonal is repaired multiplicatively, which preserves
/// positive semidefiniteness exactly. The resulting polynomial must stay
/// strictly positive on the fattened spectral interval or construction
/// fails.
pub fn null_witness(g: &Graph, d: usize, lambda: f64, m: usize, p: usize) -> Result<NullWitness> {
    if p < m {
        return Err(Error::Precondition(format!("need p >= m, got p={p}, m={m}")));
    }
    // Validates p even and lambda^2 (d-1) < 1, and pins positivity of the
    // seed series.
    let seed = lb_poly(p, lambda, d as f64)?;
    let n = g.n();
    let df = d as f64;
    let nb = nb_matrices(g, d, p)?;
    let norms: Vec<f64> = (0..=p).map(|s| km_norm_sq(s, df)).collect();
    let targets: Vec<f64> = (0..=m)
        .map(|t| lambda.powi(t as i32) * norms[t] * n as f64)
        .collect();
    let mut coeffs = seed.nb_coeffs.clone();

    let basis = NbBasis::new(df, p + 1);
    // Positive semidefiniteness only requires the polynomial to be
    // nonnegative on the graph's actual non-trivial spectrum; measure its
    // edge instead of guessing a fattening.
    let bulk = {
        let op = CertificateOp { g, d: df, m_prime: 1, c0: 0.0, comps: g.components() };
        // c0 - q_1 on the deflated space is -A restricted to it, so the
        // extremes are minus the bulk edges.
        let (lo, hi) = lanczos_extremes(&op, 160, 29)?;
        lo.abs().max(hi.abs())
    };
    let grid_lo = -bulk - 0.1;
    let grid_hi = bulk + 0.1;
    let grid_min = |c: &[f64]| -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..=2000 {
            let z = grid_lo + (grid_hi - grid_lo) * i as f64 / 2000.0;
            min = min.min(basis.eval_expansion(c, z));
        }
        min
    };
    let floor = 1e-3;
    let mut y = Mat::zeros(n, n);
    let mut band_gaps = vec![f64::INFINITY; m];
    let mut j_residual = f64::INFINITY;

    for _outer in 0..12 {
        // Raw polynomial of the centered adjacency:
        // sum_s c_s (NB^s - q_s(d) J/n).
        y = Mat::zeros(n, n);
        let mut gd = 0.0;
        for s in 0..=p {
            y.add_assign_scaled(&nb[s].mat, coeffs[s]);
            gd += coeffs[s] * norms[s];
        }
        let shift = gd / n as f64;
        for x in y.data.iter_mut() {
            *x -= shift;
        }
        // Diagonal repair: alternate exact-diagonal congruence scaling with
        // projection off the all-ones direction; both preserve PSD.
        for _ in 0..6 {
            let mut ok = true;
            let diags: Vec<f64> = (0..n)
                .map(|i| {
                    let v = y[(i, i)];
                    if v <= 0.0 {
                        ok = false;
                    }
                    v.max(1e-12).sqrt()
                })
                .collect();
            if !ok {
                return Err(Error::Construction(
                    "null witness diagonal not positive; graph too small for these orders".into(),
                ));
            }
            for u in 0..n {
                for v in 0..n {
                    y[(u, v)] /= diags[u] * diags[v];
                }
            }
            let rows: Vec<f64> = (0..n).map(|u| y.row(u).iter().sum::<f64>() / n as f64).collect();
            let tot: f64 = rows.iter().sum::<f64>() / n as f64;
            for u in 0..n {
                for v in 0..n {
                    y[(u, v)] += tot - rows[u] - rows[v];
                }
            }
        }
        let diags: Vec<f64> = (0..n).map(|i| y[(i, i)].max(1e-12).sqrt()).collect();
        for u in 0..n {
            for v in 0..n {
                y[(u, v)] /= diags[u] * diags[v];
            }
        }
        let vals: Vec<f64> = (0..=m).map(|t| y.dot(&nb[t].mat)).collect();
        for t in 1..=m {
            band_gaps[t - 1] = (vals[t] - targets[t]).abs() / n as f64;
        }
        j_residual = y.sum() / (n * n) as f64;
        if band_gaps.iter().cloned().fold(0.0f64, f64::max) < 0.02 {
            break;
        }
        // Re-fit coefficients: m band equations plus a trace anchor, linear
        // in c through <B_s, NB^t> with B_s = NB^s - q_s(d) J/n. All p+1
        // coefficients are free and the system is underdetermined, so take
        // the least-norm solution weighted by each order's worst-case size
        // on the interval ((s+1) ||q_s||): corrections then prefer the
        // directions that disturb pointwise positivity least.
        let rows = m + 1;
        let cols = p + 1;
        let mut a = Mat::zeros(rows, cols);
        let mut rhs = Mat::zeros(rows, 1);
        for t in 1..=m {
            for s in 0..=p {
                a[(t - 1, s)] = nb[s].mat.dot(&nb[t].mat) - norms[s] * norms[t];
            }
            rhs[(t - 1, 0)] = targets[t] - vals[t];
        }
        for s in 0..=p {
            a[(rows - 1, s)] = nb[s].mat.trace() - norms[s];
        }
        rhs[(rows - 1, 0)] = 0.0;
        let winv: Vec<f64> = (0..=p)
            .map(|s| 1.0 / ((s as f64 + 1.0) * (s as f64 + 1.0) * norms[s]))
            .collect();
        // delta = W^{-1} A^T (A W^{-1} A^T)^{-1} rhs
        let mut awat = Mat::zeros(rows, rows);
        for r1 in 0..rows {
            for r2 in 0..rows {
                let mut acc = 0.0;
                for s in 0..cols {
                    acc += a[(r1, s)] * winv[s] * a[(r2, s)];
                }
                awat[(r1, r2)] = acc;
            }
        }
        let mu = lu_solve(&awat, &rhs)?;
        let delta: Vec<f64> = (0..cols)
            .map(|s| {
                let mut acc = 0.0;
                for r in 0..rows {
                    acc += a[(r, s)] * mu[(r, 0)];
                }
                winv[s] * acc
            })
            .collect();
        // Damped step: take the largest fraction of the correction that
        // keeps the polynomial safely positive on the measured spectrum.
        let mut step = 1.0f64;
        let mut applied = false;
        while step >= 1.0 / 64.0 {
            let trial: Vec<f64> = coeffs
                .iter()
                .enumerate()
                .map(|(s, &c)| c + step * delta[s])
                .collect();
            if grid_min(&trial) >= floor {
                coeffs = trial;
                applied = true;
                break;
            }
            step *= 0.5;
        }
        if !applied {
            break;
        }
    }

    let poly_grid_min = grid_min(&coeffs);
    if poly_grid_min <= 0.0 {
        return Err(Error::Construction(format!(
            "witness polynomial dips to {poly_grid_min} on the measured spectral interval"
        )));
    }
    Ok(NullWitness { matrix: y, coeffs, poly_grid_min, band_gaps, j_residual })
}

/// Matrix-free operator `v -> P f(A) P v` where `f = c0 - q_{m'}` and `P`
/// projects away every connected component's constant vector (each carries a
/// trivial eigenvalue d of the adjacency matrix).
struct CertificateOp<'a> {
    g: &'a Graph,
    d: f64,
    m_prime: usize,
    c0: f64,
    comps: Vec<Vec<usize>>,
}

impl CertificateOp<'_> {
    fn project(&self, x: &mut [f64]) {
        for comp in &self.comps {
            let mean: f64 = comp.iter().map(|&u| x[u]).sum::<f64>() / comp.len() as f64;
            for &u in comp {
                x[u] -= mean;
            }
        }
    }
}

impl SymOp for CertificateOp<'_> {
    fn dim(&self) -> usize {
        self.g.n()
    }
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        let n = self.g.n();
        let mut x = v.to_vec();
        self.project(&mut x);
        let amul = |x: &[f64]| -> Vec<f64> {
            let mut y = vec![0.0; n];
            for u in 0..n {
                let mut acc = 0.0;
                for &w in self.g.neighbors(u) {
                    acc += x[w];
                }
                y[u] = acc;
            }
            y
        };
        // q_{m'}(A) x by the scalar recurrence on vectors.
        let mut qx = if self.m_prime == 0 { x.clone() } else { amul(&x) };
        let mut prev = x.clone();
        for s in 2..=self.m_prime {
            let mut next = amul(&qx);
            let coeff = if s == 2 { self.d } else { self.d - 1.0 };
            for i in 0..n {
                next[i] -= coeff * prev[i];
            }
            prev = qx;
            qx = next;
        }
        let mut res: Vec<f64> = (0..n).map(|i| self.c0 * x[i] - qx[i]).collect();
        self.project(&mut res);
        out.copy_from_slice(&res);
    }
}

/// Attempt to refute the level-m symmetric path statistics SDP on `g` with
/// the analytic certificate polynomial.
///
/// Refutation requires (i) the certificate pairing plus the tolerance slack
/// `delta sqrt(m) ||f||` to be negative, and (ii) the certificate operator
/// `f(A)` to be PSD on the complement of the trivial (per-component
/// Perron) eigenspace. On a planted graph the outlier eigenvalue breaks
/// (ii), so the verdict falls back to inconclusive.
pub fn refute(g: &Graph, d: usize, lambda: f64, m: usize, delta: f64) -> Result<SdpResolution> {
    refute_with_eps(g, d, lambda, m, delta, DEFAULT_REFUTATION_EPS)
}

pub fn refute_with_eps(
    g: &Graph,
    d: usize,
    lambda: f64,
    m: usize,
    delta: f64,
    eps: f64,
) -> Result<SdpResolution> {
    if !g.is_regular(d) {
        return Err(Error::Precondition("refute needs a d-regular graph".into()));
    }
    let cert = refutation_poly(m, lambda, d as f64, eps)?;
    let bound = cert.certificate_value.abs() / ((m as f64).sqrt() * cert.norm_km);
    let margin = if cert.certificate_value < 0.0 { bound - delta } else { -f64::INFINITY };
    let c0 = 2.0 * cert.m_prime as f64 * km_norm_sq(cert.m_prime, d as f64).sqrt() + cert.eps;
    let op = CertificateOp {
        g,
        d: d as f64,
        m_prime: cert.m_prime,
        c0,
        comps: g.components(),
    };
    let iters = 200.max(4 * cert.m_prime);
    let (min_eig, _max_eig) = lanczos_extremes(&op, iters, 7)?;
    let psd_ok = min_eig >= -1e-6 * c0;
    let fires = cert.certificate_value + delta * (m as f64).sqrt() * cert.norm_km < 0.0 && psd_ok;
    let verdict = if fires {
        SdpVerdict::RefutedByCertificate
    } else {
        SdpVerdict::SolverInconclusive
    };
    Ok(SdpResolution {
        verdict,
        witness: None,
        certificate: Some(CertificateData {
            nb_coeffs: cert.nb_coeffs.clone(),
            m_prime: cert.m_prime,
            eps: cert.eps,
            value: cert.certificate_value,
            margin,
            op_min_eig: min_eig,
        }),
        diagnostics: Diagnostics { max_violation: 0.0, min_eigenvalue: min_eig },
    })
}

/// Blockwise change of basis `X_check = (F^T (x) 1) X (F (x) 1)` for an
/// `nk x nk` matrix in k-major block layout.
pub fn change_of_basis(x: &Mat, f: &Mat) -> Result<Mat> {
    conjugate_blocks(x, &f.transpose(), f)
}

/// Inverse transform `X = (F^{-T} (x) 1) X_check (F^{-1} (x) 1)`.
pub fn change_of_basis_inverse(x_check: &Mat, f: &Mat) -> Result<Mat> {
    let finv = inverse(f).map_err(|_| Error::Numerical("singular change-of-basis matrix".into()))?;
    conjugate_blocks(x_check, &finv.transpose(), &finv)
}

fn conjugate_blocks(x: &Mat, left: &Mat, right: &Mat) -> Result<Mat> {
    let k = left.rows;
    if x.rows != x.cols || left.rows != left.cols || right.rows != right.cols || k != right.rows {
        return Err(Error::Precondition("dimension mismatch in change of basis".into()));
    }
    if x.rows % k != 0 {
        return Err(Error::Precondition(format!(
            "matrix of side {} is not divisible into {k} blocks",
            x.rows
        )));
    }
    let n = x.rows / k;
    let mut out = Mat::zeros(x.rows, x.cols);
    for i in 0..k {
        for j in 0..k {
            for a in 0..k {
                for b in 0..k {
                    let c = left[(i, a)] * right[(b, j)];
                    if c == 0.0 {
                        continue;
                    }
                    for u in 0..n {
                        let src_base = (a * n + u) * x.cols + b * n;
                        let dst_base = (i * n + u) * x.cols + j * n;
                        for v in 0..n {
                            out.data[dst_base + v] += c * x.data[src_base + v];
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Degree-two pseudoexpectation data `(l, X)` in k-major block layout.
#[derive(Debug, Clone)]
pub struct Pseudoexpectation2 {
    pub n: usize,
    pub k: usize,
    /// Length nk; block i holds the first moments of group-i indicators.
    pub l: Vec<f64>,
    /// nk x nk second-moment matrix.
    pub x: Mat,
}

impl Pseudoexpectation2 {
    pub fn x_block(&self, i: usize, j: usize) -> Mat {
        let n = self.n;
        let mut b = Mat::zeros(n, n);
        for u in 0..n {
            for v in 0..n {
                b[(u, v)] = self.x[(i * n + u, j * n + v)];
            }
        }
        b
    }
}

/// Validation gaps for the pseudoexpectation constraint set.
#[derive(Debug, Clone, Serialize)]
pub struct PseudoValidation {
    /// Minimum eigenvalue of the bordered matrix [[1, l^T], [l, X]].
    pub bordered_min_eig: f64,
    /// max |diag(X) - l|.
    pub diag_gap: f64,
    /// max over u of |Tr X_uu - 1| and |e^T l_u - 1|.
    pub block_trace_gap: f64,
    /// max over u, v, i of |(X_uv e)_i - l_{u,i}|.
    pub row_sum_gap: f64,
    /// max over i of |<e, l_i> - pi(i) n| / n.
    pub first_moment_gap: f64,
    /// max over i, j, s of |<X_ij, NB^s> - pi(i) T^s_ij ||q_s||^2 n| / n.
    pub band_gap: f64,
    /// max over i, j of |<X_ij, J> - pi(i) pi(j) n^2| / n^2.
    pub j_gap: f64,
}

struct BorderedOp<'a> {
    l: &'a [f64],
    x: &'a Mat,
}

impl SymOp for BorderedOp<'_> {
    fn dim(&self) -> usize {
        self.x.rows + 1
    }
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        let d = self.x.rows;
        let mut top = v[0];
        for i in 0..d {
            top += self.l[i] * v[i + 1];
        }
        out[0] = top;
        let xv = self.x.matvec(&v[1..]);
        for i in 0..d {
            out[i + 1] = self.l[i] * v[0] + xv[i];
        }
    }
}

/// Assemble a below-threshold pseudoexpectation: block-diagonal
/// `X_check = diag(J, Y(lambda_2), ..., Y(lambda_k))` conjugated back
/// through the transition eigenbasis, with `l_check = (e, 0, ..., 0)`.
pub fn assemble_lb_pseudoexpectation(
    g: &Graph,
    params: &ModelParams,
    spectrum: &TransitionSpectrum,
    m: usize,
    p: usize,
) -> Result<Pseudoexpectation2> {
    let n = g.n();
    let k = params.k;
    let d = params.d as usize;
    if !g.is_regular(d) {
        return Err(Error::Precondition("assemble needs a d-regular graph".into()));
    }
    for i in 1..k {
        let li = spectrum.eigenvalues[i];
        if li * li * (params.d - 1.0) >= 1.0 {
            return Err(Error::Precondition(format!(
                "eigenvalue lambda_{} = {li} is at or above threshold",
                i + 1
            )));
        }
    }
    let mut x_check = Mat::zeros(n * k, n * k);
    // Block (0,0) = J.
    for u in 0..n {
        for v in 0..n {
            x_check[(u, v)] = 1.0;
        }
    }
    for i in 1..k {
        let li = spectrum.eigenvalues[i];
        let w = null_witness(g, d, li, m, p)?;
        for u in 0..n {
            for v in 0..n {
                x_check[(i * n + u, i * n + v)] = w.matrix[(u, v)];
            }
        }
    }
    let x = change_of_basis_inverse(&x_check, &spectrum.f)?;
    // l = (F^{-T} (x) 1) (e, 0, ..., 0) has block i equal to
    // (F^{-1})_{1,i} e = pi(i) e.
    let mut l = vec![0.0; n * k];
    for i in 0..k {
        for u in 0..n {
            l[i * n + u] = params.pi[i];
        }
    }
    Ok(Pseudoexpectation2 { n, k, l, x })
}

/// Check the quadratic-pseudoexpectation constraint set and the path-moment
/// affine bands against the graph.
pub fn validate_pseudoexpectation(
    pe: &Pseudoexpectation2,
    g: &Graph,
    params: &ModelParams,
    spectrum: &TransitionSpectrum,
    m: usize,
) -> Result<PseudoValidation> {
    let n = pe.n;
    let k = pe.k;
    let d = params.d as usize;
    let op = BorderedOp { l: &pe.l, x: &pe.x };
    let (bordered_min_eig, _) = lanczos_extremes(&op, 240, 3)?;

    let mut diag_gap = 0.0f64;
    for i in 0..n * k {
        diag_gap = diag_gap.max((pe.x[(i, i)] - pe.l[i]).abs());
    }
    let mut block_trace_gap = 0.0f64;
    for u in 0..n {
        let tr: f64 = (0..k).map(|i| pe.x[(i * n + u, i * n + u)]).sum();
        block_trace_gap = block_trace_gap.max((tr - 1.0).abs());
        let lsum: f64 = (0..k).map(|i| pe.l[i * n + u]).sum();
        block_trace_gap = block_trace_gap.max((lsum - 1.0).abs());
    }
    let mut row_sum_gap = 0.0f64;
    for u in 0..n {
        for v in 0..n {
            for i in 0..k {
                let s: f64 = (0..k).map(|j| pe.x[(i * n + u, j * n + v)]).sum();
                row_sum_gap = row_sum_gap.max((s - pe.l[i * n + u]).abs());
            }
        }
    }
    let mut first_moment_gap = 0.0f64;
    for i in 0..k {
        let s: f64 = (0..n).map(|u| pe.l[i * n + u]).sum();
        first_moment_gap = first_moment_gap.max((s - params.pi[i] * n as f64).abs() / n as f64);
    }

    let nb = nb_matrices(g, d, m)?;
    // T^s running power.
    let mut tpow = Mat::identity(k);
    let mut band_gap = 0.0f64;
    for s in 0..=m {
        if s > 0 {
            tpow = spectrum.t.matmul(&tpow);
        }
        for i in 0..k {
            for j in 0..k {
                let block = pe.x_block(i, j);
                let got = block.dot(&nb[s].mat);
                let want = params.pi[i] * tpow[(i, j)] * km_norm_sq(s, params.d) * n as f64;
                if s >= 1 {
                    band_gap = band_gap.max((got - want).abs() / n as f64);
                }
            }
        }
    }
    let mut j_gap = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let block = pe.x_block(i, j);
            let got = block.sum();
            let want = params.pi[i] * params.pi[j] * (n * n) as f64;
            j_gap = j_gap.max((got - want).abs() / (n * n) as f64);
        }
    }
    Ok(PseudoValidation {
        bordered_min_eig,
        diag_gap,
        block_trace_gap,
        row_sum_gap,
        first_moment_gap,
        band_gap,
        j_gap,
    })
}

/// Level-m path statistics instance for the irregular model: box and
/// block-trace hard constraints plus centered-walk bands
/// `<X_ij, CNB^s> = pi(i) Tbar^s_ij d^s n +- delta n`.
pub fn build_path_stats_sbm(
    g: &Graph,
    params: &ModelParams,
    spectrum: &TransitionSpectrum,
    m: usize,
    delta: f64,
) -> Result<SdpInstance> {
    let n = g.n();
    let k = params.k;
    let mut cnb = Vec::with_capacity(m + 1);
    for s in 0..=m {
        cnb.push(centered_nb(g, params.d, s, &[])?);
    }
    let mut tbar_pow = Mat::identity(k);
    let mut bands = Vec::new();
    for s in 0..=m {
        if s > 0 {
            tbar_pow = spectrum.tbar.matmul(&tbar_pow);
        }
        for i in 0..k {
            for j in i..k {
                let mut c = Mat::zeros(n * k, n * k);
                for u in 0..n {
                    for v in 0..n {
                        let w = cnb[s].mat[(u, v)];
                        c[(i * n + u, j * n + v)] += 0.5 * w;
                        c[(j * n + u, i * n + v)] += 0.5 * w;
                    }
                }
                let target =
                    params.pi[i] * tbar_pow[(i, j)] * params.d.powi(s as i32) * n as f64;
                bands.push(AffineBand {
                    label: format!("cnb{s}_{i}{j}"),
                    matrix: c,
                    target,
                    halfwidth: delta * n as f64,
                });
            }
        }
    }
    Ok(SdpInstance {
        dim: n * k,
        hard: vec![
            HardConstraint::BoxDiagAtMostOne { k },
            HardConstraint::BlockTraceOne { k },
        ],
        bands,
    })
}

/// Output of the irregular-model lower-bound construction.
#[derive(Debug, Clone)]
pub struct SbmLbWitness {
    pub matrix: Mat,
    /// Minimum eigenvalue of the walk series `M_s(z)` before repair.
    pub m_min_eig: f64,
    /// PSD slack mixed into `X(z)`.
    pub delta_n: f64,
    /// Largest diagonal repair applied.
    pub gamma_max: f64,
    /// Series order used.
    pub order: usize,
}

/// Build `Y(z)` from the truncated centered walk series
/// `M_s(z) = sum_{l<=order} A_c^(l) z^l`, made PSD by mixing toward the
/// identity and given an exactly unit diagonal by a PSD diagonal shift.
/// Truncation is the caller's job (pass the [`crate::walks::truncate`]
/// output).
///
/// The admissible range of `z` is gated by the measured growth rate
/// `||A_c^(order)||^{1/order}` of the truncated walk matrices (the series
/// behaves when `|z|` is below its inverse); this is the finite-n form of
/// the `1/((1+2eps)^6 sqrt(d))` margin, which over-deletes at desk scale.
pub fn sbm_lb_construct(
    tg: &crate::walks::TruncatedGraph,
    d: f64,
    z: f64,
    order: usize,
) -> Result<SbmLbWitness> {
    if order < 1 {
        return Err(Error::Precondition("series order must be at least 1".into()));
    }
    let n = tg.base.n();
    let mut series: Vec<Mat> = Vec::with_capacity(order + 1);
    for ell in 0..=order {
        series.push(centered_nb(&tg.surviving, d, ell, &tg.deleted)?.mat);
    }
    let (_, top) = crate::linalg::power_iteration(&series[order], 3000, 1e-9, 41)?;
    let growth = top.powf(1.0 / order as f64);
    if z.abs() * growth >= 0.95 {
        return Err(Error::Precondition(format!(
            "need |z| < {:.4} (measured walk growth {growth:.3}), got {z}",
            0.95 / growth
        )));
    }
    let mut m_mat = Mat::zeros(n, n);
    for (ell, w) in series.iter().enumerate() {
        m_mat.add_assign_scaled(w, z.powi(ell as i32));
    }
    // Deleted vertices have all-zero rows; give them a unit diagonal so the
    // series matrix stays comparable to the identity there.
    for &v in &tg.deleted {
        m_mat[(v, v)] = 1.0;
    }
    let (m_min_eig, _) = lanczos_extremes(&m_mat, 200, 5)?;
    if m_min_eig < -0.5 {
        return Err(Error::Construction(format!(
            "walk series minimum eigenvalue {m_min_eig} is below -0.5; z outside the regime"
        )));
    }
    let delta_n = (-m_min_eig).max(0.0) + 1e-9;
    // X = (1 - delta) M + delta I is PSD by construction.
    let mut x = m_mat;
    x.scale(1.0 - delta_n);
    for u in 0..n {
        x[(u, u)] += delta_n;
    }
    let delta_prime = (0..n).map(|u| (x[(u, u)] - 1.0).abs()).fold(0.0f64, f64::max);
    let mut y = x;
    y.scale(1.0 - delta_prime);
    let mut gamma_max = 0.0f64;
    for u in 0..n {
        let gamma = 1.0 - y[(u, u)];
        if gamma < -1e-12 {
            return Err(Error::Construction("diagonal repair went negative".into()));
        }
        gamma_max = gamma_max.max(gamma);
        y[(u, u)] = 1.0;
    }
    Ok(SbmLbWitness { matrix: y, m_min_eig, delta_n, gamma_max, order })
}

/// Default dimension cap for [`solve_feasibility`].
pub const SOLVER_DIM_CAP: usize = 600;

/// Alternating projections between the PSD cone (eigenvalue clipping via the
/// Jacobi eigensolver) and the affine/box constraint set. Over-relaxation is
/// applied to the band projections. Returns a feasible witness when
/// post-projection residuals drop below `tol`; otherwise inconclusive (the
/// solver never claims refutation).
pub fn solve_feasibility(inst: &SdpInstance, iters: usize, tol: f64) -> Result<SdpResolution> {
    if inst.dim > SOLVER_DIM_CAP {
        return Err(Error::Resource(format!(
            "solver capped at dimension {SOLVER_DIM_CAP}, instance has {}",
            inst.dim
        )));
    }
    let n = inst.dim;
    let mut y = Mat::identity(n);
    let omega = 1.5;
    let band_norms: Vec<f64> = inst.bands.iter().map(|b| b.matrix.dot(&b.matrix)).collect();
    let mut diagnostics = Diagnostics::default();
    for _it in 0..=iters {
        // Several cyclic affine passes per PSD projection; the eigensolve is
        // the expensive step, so let the cheap projections settle first.
        for _pass in 0..24 {
            for (b, &nsq) in inst.bands.iter().zip(&band_norms) {
                if nsq == 0.0 {
                    continue;
                }
                let v = y.dot(&b.matrix);
                let lo = b.target - b.halfwidth;
                let hi = b.target + b.halfwidth;
                let clamped = v.clamp(lo, hi);
                if clamped != v {
                    y.add_assign_scaled(&b.matrix, omega * (clamped - v) / nsq);
                }
            }
            for h in &inst.hard {
                match *h {
                    HardConstraint::UnitDiagonal => {
                        for u in 0..n {
                            y[(u, u)] = 1.0;
                        }
                    }
                    HardConstraint::TraceJZero => {
                        let mean = y.sum() / (n * n) as f64;
                        for x in y.data.iter_mut() {
                            *x -= mean;
                        }
                    }
                    HardConstraint::BoxDiagAtMostOne { .. } => {
                        for u in 0..n {
                            if y[(u, u)] > 1.0 {
                                y[(u, u)] = 1.0;
                            }
                        }
                    }
                    HardConstraint::BlockTraceOne { k } => {
                        let nv = n / k;
                        for u in 0..nv {
                            let tr: f64 = (0..k).map(|i| y[(i * nv + u, i * nv + u)]).sum();
                            let adjust = (tr - 1.0) / k as f64;
                            for i in 0..k {
                                y[(i * nv + u, i * nv + u)] -= adjust;
                            }
                        }
                    }
                }
            }
        }
        // PSD projection.
        y.symmetrize();
        let (eigs, vecs) = jacobi_eigen(&y)?;
        let min_eig = *eigs.last().unwrap();
        if min_eig < 0.0 {
            let mut rebuilt = Mat::zeros(n, n);
            for (idx, &e) in eigs.iter().enumerate() {
                if e <= 0.0 {
                    break;
                }
                for r in 0..n {
                    let vr = vecs[(r, idx)] * e;
                    if vr == 0.0 {
                        continue;
                    }
                    for c in 0..n {
                        rebuilt[(r, c)] += vr * vecs[(c, idx)];
                    }
                }
            }
            y = rebuilt;
        }
        // Residuals measured on the PSD iterate.
        let mut max_violation = 0.0f64;
        for b in &inst.bands {
            let v = y.dot(&b.matrix);
            let excess = (v - b.target).abs() - b.halfwidth;
            if excess > 0.0 {
                max_violation = max_violation.max(excess / b.halfwidth.max(1e-12));
            }
        }
        for h in &inst.hard {
            match *h {
                HardConstraint::UnitDiagonal => {
                    for u in 0..n {
                        max_violation = max_violation.max((y[(u, u)] - 1.0).abs());
                    }
                }
                HardConstraint::TraceJZero => {
                    max_violation = max_violation.max(y.sum().abs() / n as f64);
                }
                HardConstraint::BoxDiagAtMostOne { .. } => {
                    for u in 0..n {
                        max_violation = max_violation.max((y[(u, u)] - 1.0).max(0.0));
                    }
                }
                HardConstraint::BlockTraceOne { k } => {
                    let nv = n / k;
                    for u in 0..nv {
                        let tr: f64 = (0..k).map(|i| y[(i * nv + u, i * nv + u)]).sum();
                        max_violation = max_violation.max((tr - 1.0).abs());
                    }
                }
            }
        }
        diagnostics = Diagnostics { max_violation, min_eigenvalue: 0.0 };
        if max_violation < tol {
            return Ok(SdpResolution {
                verdict: SdpVerdict::FeasibleWitness,
                witness: Some(y),
                certificate: None,
                diagnostics,
            });
        }
    }
    Ok(SdpResolution {
        verdict: SdpVerdict::SolverInconclusive,
        witness: None,
        certificate: None,
        diagnostics,
    })
}
