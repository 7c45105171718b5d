//! Decoder behavior on planted ensembles: recovery guarantees, the
//! candidate scan, soundness, and invariances.

mod common;

use latbdd::decoder::{decode, decode_with_scan, least_squares_decode, BddInstance, RESIDUAL_SLACK};
use latbdd::ensembles::{generate_gaussian_bdd, sample_matrix, DistributionSpec};
use latbdd::linalg::{singular_values, Matrix};
use latbdd::rng::SplitMix64;

/// Random planted instance with error drawn inside the radius ball.
fn planted(
    m: usize,
    n: usize,
    sigma: f64,
    radius: f64,
    seed: u64,
) -> (BddInstance, Vec<i64>) {
    let spec = DistributionSpec::gaussian(sigma).unwrap();
    let basis = sample_matrix(&spec, m, n, seed);
    let mut rng = SplitMix64::new(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1));
    let x: Vec<i64> = (0..n).map(|_| (rng.next_u64() % 7) as i64 - 3).collect();
    let dir = common::random_unit_vector(m, &mut rng);
    let e = dir.scale(radius * rng.next_f64());
    let target = basis.matvec_int(&x).unwrap().add(&e).unwrap();
    (BddInstance::new(basis, target, radius).unwrap(), x)
}

#[test]
fn well_separated_planted_instances_recover_exactly() {
    // sigma_n(B) > 2r forces single-candidate recovery of the planted
    // coefficients, for arbitrary integer secrets.
    let mut checked = 0;
    for seed in 0..60 {
        let (inst, x) = planted(14, 8, 10.0, 1.0, seed);
        let sv = singular_values(inst.basis()).unwrap();
        if sv[7] <= 2.0 * inst.radius() {
            continue;
        }
        checked += 1;
        let out = decode(&inst);
        assert_eq!(out.coefficients(), Some(x.as_slice()), "seed {seed}");
        assert_eq!(out.candidates_tried, 1);
    }
    assert!(checked >= 55, "separation condition should hold essentially always");
}

#[test]
fn theorem_regime_gaussian_batch() {
    // sigma = 17, m = ceil(4n/3), planted error within sqrt(n): success
    // on (nearly) every draw, far above the e^{-0.0045 m} guarantee.
    let n = 60;
    let trials = 60;
    let mut successes = 0;
    for seed in 0..trials {
        let planted = generate_gaussian_bdd(n, 4.0 / 3.0, 17.0, (n as f64).sqrt(), seed).unwrap();
        let out = decode(&planted.instance);
        if out.is_success() && out.coefficients() == Some(planted.planted_x.as_slice()) {
            successes += 1;
        }
    }
    let m = (4.0 / 3.0 * n as f64).round();
    let guarantee = 1.0 - (-0.0045 * m).exp();
    assert!(
        successes as f64 / trials as f64 >= guarantee,
        "success {successes}/{trials} below guarantee {guarantee:.3}"
    );
    assert!(successes >= trials - 2, "expected near-certain recovery, got {successes}");
}

#[test]
fn scan_recovers_where_single_candidate_fails() {
    // Search tiny noisy instances for a case where plain rounding misses
    // but some rescaling of the singular direction hits. The scan must
    // strictly extend the single-candidate success set.
    let mut scan_only = 0;
    let mut decode_successes = 0;
    for seed in 0..4000u64 {
        let spec = DistributionSpec::uniform_interval(1.0).unwrap();
        let basis = sample_matrix(&spec, 3, 2, 50_000 + seed);
        let mut rng = SplitMix64::new(seed);
        let x = vec![rng.bernoulli_bit(), rng.bernoulli_bit()];
        let dir = common::random_unit_vector(3, &mut rng);
        let radius = 0.4 + 0.4 * rng.next_f64();
        let e = dir.scale(radius * (0.6 + 0.4 * rng.next_f64()));
        let target = basis.matvec_int(&x).unwrap().add(&e).unwrap();
        let inst = BddInstance::new(basis, target, radius).unwrap();
        let plain = decode(&inst);
        let scan = decode_with_scan(&inst);
        if plain.is_success() {
            decode_successes += 1;
            assert!(scan.is_success(), "scan lost a decode success at seed {seed}");
        }
        if scan.is_success() && !plain.is_success() {
            scan_only += 1;
        }
    }
    assert!(decode_successes > 0);
    assert!(
        scan_only > 0,
        "search found no instance where only the scan succeeds"
    );
}

#[test]
fn scan_candidate_count_obeys_direction_bound() {
    // candidates <= n ||z||_inf / |z_last| + 1 on instances where the
    // scan runs to completion.
    for seed in 0..40u64 {
        let (inst, _) = planted(7, 4, 1.0, 0.05, 7000 + seed);
        let m = inst.basis().with_appended_column(inst.target(), -1.0).unwrap();
        let (_, z) = latbdd::linalg::smallest_singular_pair(&m).unwrap();
        let z_last = z.get(4);
        if z_last.abs() < 1e-9 {
            continue;
        }
        let out = decode_with_scan(&inst);
        if out.is_success() {
            continue; // stopped early, bound applies to the full scan
        }
        let bound = 4.0 * z.max_abs_entry() / z_last.abs() + 1.0;
        assert!(
            out.candidates_tried as f64 <= bound + 1e-9,
            "seed {seed}: {} candidates > bound {bound}",
            out.candidates_tried
        );
    }
}

#[test]
fn decode_is_invariant_under_column_permutation() {
    for seed in 0..20u64 {
        let (inst, _) = planted(12, 6, 8.0, 1.0, 900 + seed);
        let out = decode(&inst);
        if !out.is_success() {
            continue;
        }
        // Reverse the columns.
        let b = inst.basis();
        let rev_rows: Vec<Vec<f64>> = (0..b.rows())
            .map(|i| (0..b.cols()).map(|j| b.get(i, b.cols() - 1 - j)).collect())
            .collect();
        let rev = Matrix::from_rows(&rev_rows).unwrap();
        let inst2 = BddInstance::new(rev, inst.target().clone(), inst.radius()).unwrap();
        let out2 = decode(&inst2);
        assert!(out2.is_success(), "permuted instance must also decode (seed {seed})");
        let x: Vec<i64> = out.coefficients().unwrap().to_vec();
        let mut x_rev: Vec<i64> = out2.coefficients().unwrap().to_vec();
        x_rev.reverse();
        assert_eq!(x, x_rev, "seed {seed}");
    }
}

#[test]
fn soundness_on_mixed_fuzz_batch() {
    // Smaller sibling of the acceptance fuzz: every success respects the
    // radius; scan success set contains decode's.
    let mut rng = SplitMix64::new(31337);
    for _ in 0..300 {
        let n = 2 + (rng.next_u64() % 6) as usize;
        let m = n + 1 + (rng.next_u64() % 6) as usize;
        let sigma = 0.5 + 4.0 * rng.next_f64();
        let radius = 0.2 + 2.0 * rng.next_f64();
        let (inst, _) = planted(m, n, sigma, radius, rng.next_u64());
        let out = decode(&inst);
        if let Some(res) = out.residual() {
            assert!(res <= inst.radius() * (1.0 + RESIDUAL_SLACK));
        }
        let scan = decode_with_scan(&inst);
        if out.is_success() {
            assert!(scan.is_success());
        }
        if let Some(res) = scan.residual() {
            assert!(res <= inst.radius() * (1.0 + RESIDUAL_SLACK));
        }
        let ls = least_squares_decode(&inst);
        if let Some(res) = ls.residual() {
            assert!(res <= inst.radius() * (1.0 + RESIDUAL_SLACK));
        }
    }
}

#[test]
fn least_squares_baseline_tracks_decoder_on_easy_instances() {
    let mut both = 0;
    for seed in 0..30u64 {
        let planted = generate_gaussian_bdd(20, 1.5, 17.0, (20.0_f64).sqrt(), seed).unwrap();
        let a = decode(&planted.instance);
        let b = least_squares_decode(&planted.instance);
        if a.is_success() && b.is_success() {
            both += 1;
            assert_eq!(a.coefficients(), b.coefficients(), "seed {seed}");
        }
    }
    assert!(both >= 25, "baseline should agree on well-separated instances, got {both}");
}

#[test]
fn zero_error_instances_up_to_moderate_size() {
    for n in [1usize, 3, 6] {
        let planted = generate_gaussian_bdd(n, 2.0, 5.0, 0.0, 11).unwrap();
        let out = decode(&planted.instance);
        assert_eq!(out.coefficients(), Some(planted.planted_x.as_slice()));
        assert_eq!(out.residual(), Some(0.0));
    }
}

#[test]
fn huge_theta_lwe_always_recovers() {
    // theta = 50 drives the basis-to-error ratio into the guaranteed
    // regime: 100 of 100 trials recover the secret.
    let params = latbdd::ensembles::LweParams::new(20, 1.5, 50.0, 1.0, false).unwrap();
    for seed in 0..100 {
        let planted = latbdd::ensembles::generate_lwe_real(&params, seed).unwrap();
        let out = decode(&planted.instance);
        assert_eq!(
            out.coefficients(),
            Some(planted.planted_x.as_slice()),
            "seed {seed} failed in the large-theta regime"
        );
    }
}

#[test]
fn square_basis_lwe_instances_decode() {
    // beta = 1 exercises the kernel path end to end on real data.
    let params = latbdd::ensembles::LweParams::new(12, 1.0, 40.0, 1.0, false).unwrap();
    let mut successes = 0;
    for seed in 0..20 {
        let planted = latbdd::ensembles::generate_lwe_real(&params, seed).unwrap();
        assert_eq!(planted.instance.dims(), (12, 12));
        let out = decode(&planted.instance);
        if out.coefficients() == Some(planted.planted_x.as_slice()) {
            successes += 1;
        }
    }
    // theta = 40 makes the noise negligible next to the basis; the kernel
    // candidate recovers the secret essentially always.
    assert!(successes >= 18, "square-basis recovery too rare: {successes}/20");
}
