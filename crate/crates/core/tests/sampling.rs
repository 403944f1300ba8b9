use num_traits::ToPrimitive;

use plancherel_core::experiments::{
    chi_square_gof, clt_total_sum, conjecture_probe_exact, conjecture_probe_mc, main_term_samples,
    map_samples, partial_sum_samples, sampler_goodness_of_fit, total_sum_samples, RunOptions,
};
use plancherel_core::permutation::Permutation;
use plancherel_core::plancherel::{sample_plancherel_growth, sample_rng, PlancherelEnsemble};
use plancherel_core::seminormal::{exact_unit, SeminormalForm};

const SEED: u64 = 7;

fn opts(samples: usize, jobs: usize) -> RunOptions {
    RunOptions { samples, seed: SEED, jobs }
}

#[test]
fn rsk_sampler_matches_plancherel() {
    for n in 4..=8 {
        let t = sampler_goodness_of_fit(n, &opts(100_000, 0)).unwrap();
        assert!(t.p_value > 1e-3, "n = {n}: {t:?}");
    }
}

#[test]
fn growth_sampler_matches_plancherel() {
    for n in 4..=7 {
        let ens = PlancherelEnsemble::exact(n);
        let mut counts = vec![0u64; ens.support.len()];
        for i in 0..40_000 {
            let l = sample_plancherel_growth(n, &mut sample_rng(SEED, i));
            counts[ens.support.iter().position(|(m, _)| *m == l).unwrap()] += 1;
        }
        let probs: Vec<f64> = ens.support.iter().map(|(_, p)| p.to_f64().unwrap()).collect();
        let t = chi_square_gof(&counts, &probs);
        assert!(t.p_value > 1e-3, "n = {n}: {t:?}");
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let sigma: Permutation = "(1,2,3)".parse().unwrap();
    let a = total_sum_samples(60, &sigma, SeminormalForm::Rational, &opts(64, 1)).unwrap();
    let b = total_sum_samples(60, &sigma, SeminormalForm::Rational, &opts(64, 3)).unwrap();
    assert_eq!(a, b);
    let shapes_a = map_samples(30, &opts(32, 1), |l| l.clone()).unwrap();
    let shapes_b = map_samples(30, &opts(32, 4), |l| l.clone()).unwrap();
    assert_eq!(shapes_a, shapes_b);
}

#[test]
fn identity_total_sum_is_deterministic() {
    let rows = clt_total_sum(50, &[Permutation::identity(2)], SeminormalForm::Rational, &opts(16, 0)).unwrap();
    assert_eq!(rows[0].variance, 0.0);
    assert_eq!(rows[0].max_abs_sqrt_n, 0.0);
}

#[test]
fn main_term_at_full_range_is_the_character() {
    let sigma: Permutation = "(1,2)".parse().unwrap();
    let rows = main_term_samples(40, &sigma, &exact_unit(1.0), SeminormalForm::Rational, &opts(16, 0)).unwrap();
    for (mt, chi, _, _) in rows {
        assert!((mt - chi).abs() < 1e-9 * chi.abs().max(1.0), "{mt} vs {chi}");
    }
    let empty = main_term_samples(40, &sigma, &exact_unit(0.0), SeminormalForm::Rational, &opts(8, 0)).unwrap();
    assert!(empty.iter().all(|r| r.0 == 0.0 && r.2 == 0.0));
}

#[test]
fn identity_partial_sum_is_the_cut() {
    let id = Permutation::identity(1);
    let xs = partial_sum_samples(30, &id, 0.5, SeminormalForm::Rational, &opts(32, 0)).unwrap();
    // Each value is floor(dim / 2) / dim, within 1/dim of 1/2.
    assert!(xs.iter().all(|&x| (x - 0.5).abs() < 1e-6), "{xs:?}");
}

#[test]
fn conjecture_monte_carlo_agrees_with_enumeration() {
    let exact = conjecture_probe_exact(20, 0.2, 1).unwrap();
    let mc = conjecture_probe_mc(20, 0.2, 1, &opts(20_000, 0)).unwrap();
    let se = mc.std_error.unwrap().max(1e-4);
    assert!((exact.probability - mc.probability).abs() < 5.0 * se, "{exact:?} vs {mc:?}");
}
