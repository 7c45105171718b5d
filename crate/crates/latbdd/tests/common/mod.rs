//! Shared brute-force oracles for integration tests. Everything here is
//! deliberately independent of the library's SVD path: eigenvalues come
//! from a two-sided Jacobi sweep on the Gram matrix, determinants from
//! fraction-free elimination over exact integers.

#![allow(dead_code)]

use latbdd::linalg::{Matrix, Vector};
use latbdd::rng::SplitMix64;

/// Eigenvalues of a symmetric matrix by classical two-sided Jacobi,
/// descending.
pub fn jacobi_symmetric_eigenvalues(a_in: &[Vec<f64>]) -> Vec<f64> {
    let n = a_in.len();
    let mut a: Vec<Vec<f64>> = a_in.to_vec();
    let fro: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * fro.max(1e-300) {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eig
}

/// Singular values of `m` through the Gram matrix `M^T M`: an oracle that
/// never touches the one-sided path.
pub fn gram_singular_values(m: &Matrix) -> Vec<f64> {
    let c = m.cols();
    let mut gram = vec![vec![0.0; c]; c];
    for i in 0..c {
        for j in i..c {
            let mut acc = 0.0;
            for k in 0..m.rows() {
                acc += m.get(k, i) * m.get(k, j);
            }
            gram[i][j] = acc;
            gram[j][i] = acc;
        }
    }
    jacobi_symmetric_eigenvalues(&gram)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect()
}

/// Exact determinant of an integer matrix by Bareiss fraction-free
/// elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Gaussian error function, Abramowitz-Stegun 7.1.26 (|error| < 1.5e-7,
/// plenty for Kolmogorov-Smirnov thresholds around 5e-3).
pub fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}

pub fn normal_cdf(x: f64, sigma: f64) -> f64 {
    0.5 * (1.0 + erf(x / (sigma * std::f64::consts::SQRT_2)))
}

/// Two-sided Kolmogorov-Smirnov statistic of samples against a CDF.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Unit vector drawn from the rotation-invariant distribution.
pub fn random_unit_vector(dim: usize, rng: &mut SplitMix64) -> Vector {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.standard_normal()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return Vector::new(v.iter().map(|x| x / norm).collect()).unwrap();
        }
    }
}

/// Shortest nonzero lattice vector by brute force over a coefficient box.
pub fn brute_force_lambda1(b: &Matrix, bound: i64) -> f64 {
    let n = b.cols();
    let mut best = f64::INFINITY;
    let total = (2 * bound + 1).pow(n as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut x = vec![0i64; n];
        for j in 0..n {
            x[j] = rem % (2 * bound + 1) - bound;
            rem /= 2 * bound + 1;
        }
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        let v = b.matvec_int(&x).unwrap();
        best = best.min(v.norm());
    }
    best
}

/// Uniformly random 3-CNF: `t` clauses over `k` variables, each clause a
/// random size-(1..=3) subset with random signs.
pub fn random_3cnf(k: usize, t: usize, rng: &mut SplitMix64) -> latbdd::sat::CnfFormula {
    let clauses: Vec<Vec<i32>> = (0..t)
        .map(|_| {
            let len = 1 + (rng.next_u64() % 3) as usize;
            let len = len.min(k);
            let mut vars: Vec<i32> = Vec::new();
            while vars.len() < len {
                let v = (rng.next_u64() % k as u64) as i32 + 1;
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.into_iter()
                .map(|v| if rng.next_u64() & 1 == 1 { -v } else { v })
                .collect()
        })
        .collect();
    latbdd::sat::CnfFormula::new(k, clauses).expect("random clauses are well-formed")
}
