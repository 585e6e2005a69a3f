use cspursuit::experiment::{generate_instance, is_exact_recovery, run_trial};
use cspursuit::matrix::norm2;
use cspursuit::recovery::{default_max_iterations, StoppingError};
use cspursuit::{
    exhaustive_oracle_recovery, gaussian_sensing_matrix, mix_seed, run, Algorithm, DenseMatrix,
    MatrixEnsemble, RecoveryConfig, SignalDistribution, SparseSignal, TrialConfig,
};

fn seeded_example() -> (DenseMatrix, SparseSignal, Vec<f64>) {
    let a = gaussian_sensing_matrix(32, 64, 42).unwrap();
    let x = SparseSignal::from_entries(64, &[(3, 1.0), (17, -2.0), (40, 3.0), (59, -4.0)]).unwrap();
    let y = a.apply(x.values()).unwrap();
    (a, x, y)
}

#[test]
fn seeded_32x64_both_algorithms_match_oracle() {
    let (a, x, y) = seeded_example();
    let oracle = exhaustive_oracle_recovery(&a, &y, 4).unwrap();
    assert!(is_exact_recovery(&oracle, &x));
    for alg in [Algorithm::Cosamp, Algorithm::Sp] {
        let res = run(alg, &a, &y, &RecoveryConfig::new(4), Some(&x)).unwrap();
        assert!(res.converged, "{alg}");
        assert!(
            res.final_residual_norm < 1e-10,
            "{alg}: {}",
            res.final_residual_norm
        );
        assert_eq!(res.estimate.support(), oracle.support(), "{alg}");
        assert!(is_exact_recovery(&res.estimate, &oracle), "{alg}");
    }
}

#[test]
fn seeded_128x256_recovers_support() {
    let a = gaussian_sensing_matrix(128, 256, 7).unwrap();
    let inst = generate_instance(
        MatrixEnsemble::Gaussian,
        128,
        256,
        8,
        SignalDistribution::Gaussian,
        0.0,
        7,
    )
    .unwrap();
    assert_eq!(inst.matrix, a);
    for alg in [Algorithm::Cosamp, Algorithm::Sp] {
        let res = run(alg, &a, &inst.measurements, &RecoveryConfig::new(8), None).unwrap();
        assert!(res.converged, "{alg}");
        assert!(res.iterations_used <= 40, "{alg}: {}", res.iterations_used);
        assert_eq!(res.estimate.support(), inst.signal.support(), "{alg}");
    }
}

#[test]
fn small_oracle_returns_truth() {
    for t in 0..20 {
        let inst = generate_instance(
            MatrixEnsemble::Gaussian,
            8,
            10,
            2,
            SignalDistribution::Gaussian,
            0.0,
            mix_seed(11, t),
        )
        .unwrap();
        let oracle = exhaustive_oracle_recovery(&inst.matrix, &inst.measurements, 2).unwrap();
        // any 2-subset of 8×10 Gaussian columns is full rank almost surely
        assert!(is_exact_recovery(&oracle, &inst.signal), "trial {t}");
    }
}

#[test]
fn traces_are_bit_identical() {
    let (a, x, y) = seeded_example();
    for alg in [Algorithm::Cosamp, Algorithm::Sp] {
        let first = run(alg, &a, &y, &RecoveryConfig::new(4), Some(&x)).unwrap();
        let second = run(alg, &a, &y, &RecoveryConfig::new(4), Some(&x)).unwrap();
        assert_eq!(first, second);
    }
}

#[test]
fn support_size_contract_and_residual_monotonicity() {
    let k = 6;
    for t in 0..30 {
        let inst = generate_instance(
            MatrixEnsemble::Gaussian,
            40,
            80,
            k,
            SignalDistribution::Gaussian,
            0.0,
            mix_seed(3, t),
        )
        .unwrap();
        for alg in [Algorithm::Cosamp, Algorithm::Sp] {
            let mut x = SparseSignal::zeros(80);
            for _ in 0..default_max_iterations(k) {
                let before = norm2(
                    &cspursuit::residual(&inst.matrix, x.values(), &inst.measurements).unwrap(),
                );
                if before <= 1e-10 * norm2(&inst.measurements) {
                    break;
                }
                let (next, step) = match alg {
                    Algorithm::Cosamp => {
                        cspursuit::cosamp_step(&inst.matrix, &inst.measurements, &x, k)
                    }
                    Algorithm::Sp => cspursuit::sp_step(&inst.matrix, &inst.measurements, &x, k),
                }
                .unwrap();
                let merged_cap = match alg {
                    Algorithm::Cosamp => x.sparsity() + 2 * k,
                    Algorithm::Sp => 2 * k,
                };
                assert!(next.sparsity() <= k);
                assert!(step.merged.len() <= merged_cap);
                assert!(x.support().is_subset_of(&step.merged));
                let after = norm2(
                    &cspursuit::residual(&inst.matrix, &step.merged_estimate, &inst.measurements)
                        .unwrap(),
                );
                assert!(
                    after <= before * (1.0 + 1e-12) + 1e-14,
                    "{alg} trial {t}: {after} > {before}"
                );
                x = next;
            }
        }
    }
}

#[test]
fn absolute_stopping_error_and_budget() {
    let (a, _, y) = seeded_example();
    let cfg = RecoveryConfig::new(4)
        .with_stopping_error(StoppingError::Absolute(f64::INFINITY))
        .with_max_iterations(3);
    let res = run(Algorithm::Sp, &a, &y, &cfg, None).unwrap();
    assert_eq!(res.iterations_used, 0);
    assert!(res.converged);
    assert!(res.trace.records.is_empty());

    let cfg = RecoveryConfig::new(4)
        .with_stopping_error(StoppingError::Absolute(0.0))
        .with_max_iterations(2);
    let res = run(Algorithm::Cosamp, &a, &y, &cfg, None).unwrap();
    assert!(res.iterations_used <= 2);
}

#[test]
fn trials_are_independent_of_neighbours() {
    let cfg = TrialConfig::new(16, 32, 3, Algorithm::Sp, 12, 5);
    let all = cspursuit::run_trials(&cfg).unwrap();
    let mut reordered: Vec<usize> = (0..12).rev().collect();
    reordered.retain(|t| t % 3 != 0);
    for t in reordered {
        assert_eq!(run_trial(&cfg, t), all[t]);
    }
    let fewer = TrialConfig {
        trials: 5,
        ..cfg.clone()
    };
    assert_eq!(cspursuit::run_trials(&fewer).unwrap()[..], all[..5]);
}
