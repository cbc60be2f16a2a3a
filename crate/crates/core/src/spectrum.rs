//! Eigenvalues of `M` and the combined Property O verdict.
//!
//! Two independent routes are compared: the numeric spectrum (Hessenberg/QR via
//! a real Schur decomposition, plus shifted power iteration for the Perron
//! root) and the exact graph test (strong connectivity and period equal to `r`).
//! Matrix entries become floating point only in this module.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chevalley::{ChevalleyTable, WindowPolicy};
use crate::error::{Error, Result};
use crate::graph::{build_graph, period, strongly_connected, QuantumBruhatGraph};
use crate::operator::{c1_matrix_from_table, window_audit, C1Matrix, WindowAudit};
use crate::partitions::Shape;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance for grouping eigenvalues by modulus.
    pub modulus: f64,
    /// Relative tolerance for matching `delta0 * zeta`.
    pub root: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            modulus: 1e-8,
            root: 1e-6,
        }
    }
}

const SCHUR_SWEEPS_PER_ROW: usize = 1000;

fn to_dense(m: &C1Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.size(), m.size(), |i, j| m.get(i, j) as f64)
}

/// All eigenvalues of a dense real matrix, with multiplicity.
///
/// The trace of the matrix must match the eigenvalue sum to `tol * ||A||_F * n`.
pub fn eigenvalues_dense(a: DMatrix<f64>, tol: f64) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let trace = a.trace();
    let norm = a.norm();
    let max_iter = SCHUR_SWEEPS_PER_ROW * n;
    let schur = a
        .try_schur(f64::EPSILON, max_iter)
        .ok_or(Error::EigenNoConvergence { max_iter })?;
    let eigs: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    let sum: Complex64 = eigs.iter().sum();
    if (sum.re - trace).abs() > tol * norm.max(1.0) * n as f64 || sum.im.abs() > tol * norm.max(1.0) * n as f64 {
        return Err(Error::EigenNoConvergence { max_iter });
    }
    Ok(eigs)
}

pub fn eigenvalues(m: &C1Matrix, tol: f64) -> Result<Vec<Complex64>> {
    eigenvalues_dense(to_dense(m), tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerronRoot {
    pub value: f64,
    /// Normalized to sum 1.
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Power iteration on `M + I` from the all-ones vector.
///
/// The unit shift breaks the rotation by `r`-th roots of unity that stalls plain
/// power iteration on a periodic matrix; the returned value is shifted back.
/// Stops when `||(M+I)x - mu x||_1 <= tol * mu`.
pub fn perron_root(m: &C1Matrix, tol: f64, max_iter: usize) -> Result<PerronRoot> {
    let n = m.size();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let columns: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|j| {
            (0..n)
                .filter(|&i| m.get(i, j) > 0)
                .map(|i| (i, m.get(i, j) as f64))
                .collect()
        })
        .collect();
    let apply = |x: &[f64], y: &mut [f64]| {
        y.copy_from_slice(x);
        for (j, col) in columns.iter().enumerate() {
            for &(i, v) in col {
                y[i] += v * x[j];
            }
        }
    };

    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iteration in 1..=max_iter {
        apply(&x, &mut y);
        let mu: f64 = y.iter().sum();
        residual = y.iter().zip(&x).map(|(yi, xi)| (yi - mu * xi).abs()).sum();
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / mu;
        }
        if residual <= tol * mu {
            return Ok(PerronRoot {
                value: mu - 1.0,
                vector: x,
                iterations: iteration,
                residual,
            });
        }
    }
    Err(Error::PowerIterationNoConvergence { max_iter, residual })
}

/// Outcome of the eigenvalue test for conditions (1) and (2) of Property O.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralCheck {
    pub delta0: f64,
    pub fano_index: usize,
    pub eigenvalues: Vec<Complex64>,
    /// Number of eigenvalues with `|delta| >= delta0 (1 - tol)`.
    pub max_modulus_count: usize,
    /// `delta0` is a real eigenvalue of multiplicity one.
    pub condition1: bool,
    /// The max-modulus eigenvalues are exactly `delta0` times the `r`-th roots of unity.
    pub condition2: bool,
    /// Largest `|delta - delta0 zeta| / delta0` over the matched pairs, when counts agree.
    pub root_deviation: Option<f64>,
    pub tolerances: Tolerances,
}

impl SpectralCheck {
    pub fn holds(&self) -> bool {
        self.condition1 && self.condition2
    }
}

pub fn spectral_radius(eigs: &[Complex64]) -> f64 {
    eigs.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn verify_property_o(eigs: &[Complex64], r: usize, delta0: f64, tol: Tolerances) -> SpectralCheck {
    let near_delta0: Vec<&Complex64> = eigs
        .iter()
        .filter(|z| (**z - Complex64::new(delta0, 0.0)).norm() <= delta0 * tol.modulus)
        .collect();
    let condition1 = delta0 > 0.0
        && near_delta0.len() == 1
        && near_delta0[0].re > 0.0
        && near_delta0[0].im.abs() <= delta0 * tol.modulus;

    let top: Vec<Complex64> = eigs
        .iter()
        .copied()
        .filter(|z| z.norm() >= delta0 * (1.0 - tol.modulus))
        .collect();
    let max_modulus_count = top.len();

    let mut root_deviation = None;
    let mut condition2 = false;
    if max_modulus_count == r && r > 0 {
        let mut used = vec![false; top.len()];
        let mut worst: f64 = 0.0;
        let mut matched = true;
        for j in 0..r {
            let target = Complex64::from_polar(delta0, TAU * j as f64 / r as f64);
            let best = top
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, z)| (i, (z - target).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, d)) => {
                    used[i] = true;
                    worst = worst.max(d / delta0);
                }
                None => matched = false,
            }
        }
        root_deviation = Some(worst);
        condition2 = matched && worst <= tol.root;
    }

    SpectralCheck {
        delta0,
        fano_index: r,
        eigenvalues: eigs.to_vec(),
        max_modulus_count,
        condition1,
        condition2,
        root_deviation,
        tolerances: tol,
    }
}

/// Graph-theoretic verdict: irreducible and imprimitivity index equal to `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactVerdict {
    pub strongly_connected: bool,
    pub component_count: usize,
    pub period: Option<usize>,
    pub fano_index: usize,
    pub holds: bool,
}

pub fn exact_verdict(graph: &QuantumBruhatGraph, r: usize) -> ExactVerdict {
    let conn = strongly_connected(graph);
    let period = period(graph).ok();
    ExactVerdict {
        strongly_connected: conn.strongly_connected,
        component_count: conn.components.len(),
        period,
        fano_index: r,
        holds: conn.strongly_connected && period == Some(r),
    }
}

/// Determinant over the integers (fraction-free Bareiss elimination).
pub fn exact_determinant(m: &C1Matrix) -> BigInt {
    let n = m.size();
    let mut a: Vec<Vec<BigInt>> = m
        .entries
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// `|det|` as `f64`, saturating to infinity.
pub fn abs_f64(v: &BigInt) -> f64 {
    v.abs().to_string().parse().unwrap_or(f64::INFINITY)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Numeric,
    #[default]
    Both,
}

impl Mode {
    pub fn exact(self) -> bool {
        matches!(self, Mode::Exact | Mode::Both)
    }

    pub fn numeric(self) -> bool {
        matches!(self, Mode::Numeric | Mode::Both)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
            Mode::Both => "both",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "numeric" => Ok(Mode::Numeric),
            "both" => Ok(Mode::Both),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericVerdict {
    #[serde(flatten)]
    pub check: SpectralCheck,
    /// Always "implementation-derived": no reference values exist for `delta0`.
    pub delta0_provenance: String,
    pub perron_value: f64,
    pub perron_iterations: usize,
    pub perron_vector_positive: bool,
    /// Power iteration and QR agree on `delta0` within `tolerances.modulus * delta0`.
    pub perron_agrees: bool,
}

/// Exact and numeric verdicts for one shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyOReport {
    pub shape: Shape,
    pub dimension: usize,
    pub basis_size: usize,
    pub fano_index: usize,
    pub window: WindowPolicy,
    pub exact: Option<ExactVerdict>,
    pub numeric: Option<NumericVerdict>,
    /// `Some(false)` flags a disagreement between the two routes.
    pub paths_agree: Option<bool>,
    pub window_audit: WindowAudit,
    pub verdict: bool,
}

pub const POWER_TOL: f64 = 1e-13;
pub const POWER_MAX_ITER: usize = 2_000_000;

pub fn numeric_verdict(m: &C1Matrix, tol: Tolerances) -> Result<NumericVerdict> {
    let eigs = eigenvalues(m, tol.modulus)?;
    let delta0 = spectral_radius(&eigs);
    let check = verify_property_o(&eigs, m.shape.fano_index(), delta0, tol);
    let perron = perron_root(m, POWER_TOL, POWER_MAX_ITER)?;
    Ok(NumericVerdict {
        perron_agrees: (perron.value - delta0).abs() <= tol.modulus * delta0,
        perron_vector_positive: perron.vector.iter().all(|&v| v > 0.0),
        perron_value: perron.value,
        perron_iterations: perron.iterations,
        delta0_provenance: "implementation-derived".into(),
        check,
    })
}

/// Runs the selected verification routes for `shape`.
pub fn analyze(shape: Shape, mode: Mode, tol: Tolerances, policy: WindowPolicy) -> Result<PropertyOReport> {
    let table = ChevalleyTable::new(shape, policy);
    let m = c1_matrix_from_table(&table);
    let r = shape.fano_index();

    let exact = mode.exact().then(|| exact_verdict(&build_graph(&m), r));
    let numeric = if mode.numeric() {
        Some(numeric_verdict(&m, tol)?)
    } else {
        None
    };
    let numeric_holds = numeric
        .as_ref()
        .map(|v| v.check.holds() && v.perron_agrees && v.perron_vector_positive);
    let paths_agree = match (&exact, numeric_holds) {
        (Some(e), Some(n)) => Some(e.holds == n),
        _ => None,
    };
    let verdict = exact.as_ref().is_none_or(|e| e.holds)
        && numeric_holds.unwrap_or(true)
        && paths_agree.unwrap_or(true);

    Ok(PropertyOReport {
        shape,
        dimension: shape.dimension(),
        basis_size: m.size(),
        fano_index: r,
        window: policy,
        exact,
        numeric,
        paths_agree,
        window_audit: window_audit(shape),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::build_c1_matrix;

    fn shape(k: i64, n: i64) -> Shape {
        Shape::new(k, n).unwrap()
    }

    fn c1(k: i64, n: i64) -> C1Matrix {
        build_c1_matrix(shape(k, n), WindowPolicy::Standard)
    }

    #[test]
    fn projective_space_spectrum() {
        let m = c1(1, 2);
        let eigs = eigenvalues(&m, 1e-8).unwrap();
        assert_eq!(eigs.len(), 5);
        for j in 0..5 {
            let want = Complex64::from_polar(5.0, TAU * j as f64 / 5.0);
            let best = eigs.iter().map(|z| (z - want).norm()).fold(f64::INFINITY, f64::min);
            assert!(best <= 5e-9, "root {j}: {best}");
        }
    }

    #[test]
    fn one_by_one() {
        let eigs = eigenvalues_dense(DMatrix::from_element(1, 1, 7.0), 1e-8).unwrap();
        assert_eq!(eigs, vec![Complex64::new(7.0, 0.0)]);
        assert!(matches!(
            eigenvalues_dense(DMatrix::zeros(0, 0), 1e-8),
            Err(Error::EmptyMatrix)
        ));
    }

    #[test]
    fn ig25_has_four_top_eigenvalues() {
        let m = c1(2, 2);
        let eigs = eigenvalues(&m, 1e-8).unwrap();
        assert_eq!(eigs.len(), 8);
        let check = verify_property_o(&eigs, 4, spectral_radius(&eigs), Tolerances::default());
        assert_eq!(check.max_modulus_count, 4);
        assert!(check.holds());
    }

    #[test]
    fn perron_root_examples() {
        let p = perron_root(&c1(1, 2), 1e-13, 100_000).unwrap();
        assert!((p.value - 5.0).abs() < 1e-9);
        assert!(p.vector.iter().all(|v| (v - 0.2).abs() < 1e-9));

        let m = c1(2, 2);
        let p = perron_root(&m, 1e-13, 100_000).unwrap();
        let eigs = eigenvalues(&m, 1e-8).unwrap();
        let d0 = spectral_radius(&eigs);
        assert!((p.value - d0).abs() <= 1e-8 * d0, "{} vs {d0}", p.value);
        assert!(p.vector.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn perron_root_symmetric_two_by_two() {
        // [[a, b], [b, a]] with a = 3, b = 2 has Perron root 5.
        let m = C1Matrix {
            shape: shape(1, 1),
            policy: WindowPolicy::Standard,
            basis: crate::partitions::enumerate_basis(&shape(1, 1))[..2].to_vec(),
            entries: vec![vec![3, 2], vec![2, 3]],
        };
        let p = perron_root(&m, 1e-14, 10_000).unwrap();
        assert!((p.value - 5.0).abs() < 1e-10);
    }

    #[test]
    fn perron_root_reports_non_convergence() {
        let m = c1(2, 3);
        assert!(matches!(
            perron_root(&m, 1e-14, 3),
            Err(Error::PowerIterationNoConvergence { max_iter: 3, .. })
        ));
    }

    #[test]
    fn synthetic_negative() {
        let eigs = [Complex64::new(2.0, 0.0), Complex64::new(-2.0, 0.0)];
        let check = verify_property_o(&eigs, 1, 2.0, Tolerances::default());
        assert!(check.condition1);
        assert!(!check.condition2);
        assert_eq!(check.max_modulus_count, 2);
    }

    #[test]
    fn double_top_eigenvalue_fails_condition1() {
        let eigs = [Complex64::new(3.0, 0.0), Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)];
        let check = verify_property_o(&eigs, 2, 3.0, Tolerances::default());
        assert!(!check.condition1);
    }

    #[test]
    fn exact_verdicts() {
        assert!(exact_verdict(&build_graph(&c1(2, 2)), 4).holds);
        let e = exact_verdict(&build_graph(&c1(1, 1)), 3);
        assert!(e.holds);
        assert_eq!(e.period, Some(3));
        assert!(!exact_verdict(&build_graph(&c1(2, 2)), 3).holds);
    }

    #[test]
    fn trace_and_conjugation() {
        for (k, n) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
            let m = c1(k, n);
            let eigs = eigenvalues(&m, 1e-8).unwrap();
            let sum: Complex64 = eigs.iter().sum();
            let norm = to_dense(&m).norm();
            assert!((sum.re - m.trace() as f64).abs() <= 1e-8 * norm);
            assert!(sum.im.abs() <= 1e-8 * norm);
            for z in &eigs {
                let closest = eigs
                    .iter()
                    .map(|w| (w - z.conj()).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(closest <= 1e-6 * norm, "{z}");
            }
        }
    }

    #[test]
    fn determinant_matches_eigenvalue_product() {
        for n in 1..=5 {
            for k in 1..=n {
                let m = c1(k, n);
                if m.size() > 12 {
                    continue;
                }
                let det = abs_f64(&exact_determinant(&m));
                let prod: f64 = eigenvalues(&m, 1e-8).unwrap().iter().map(|z| z.norm()).product();
                let scale = to_dense(&m).norm().powi(m.size() as i32);
                assert!((prod - det).abs() <= 1e-8 * det.max(1e-8 * scale), "k={k} n={n}: {prod} vs {det}");
            }
        }
    }

    #[test]
    fn bareiss_small_cases() {
        let s = shape(1, 1);
        let basis = crate::partitions::enumerate_basis(&s);
        let m = C1Matrix {
            shape: s,
            policy: WindowPolicy::Standard,
            basis: basis.clone(),
            entries: vec![vec![0, 0, 3], vec![3, 0, 0], vec![0, 3, 0]],
        };
        assert_eq!(exact_determinant(&m), BigInt::from(27));
        let m = C1Matrix {
            entries: vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 2]],
            ..m
        };
        assert_eq!(exact_determinant(&m), BigInt::from(-2));
    }

    #[test]
    fn analyze_ig25() {
        let rep = analyze(shape(2, 2), Mode::Both, Tolerances::default(), WindowPolicy::Standard).unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.paths_agree, Some(true));
        let num = rep.numeric.unwrap();
        assert!(num.check.condition1 && num.check.condition2);
        assert_eq!(num.check.max_modulus_count, 4);
        assert_eq!(rep.exact.unwrap().period, Some(4));
    }
}
