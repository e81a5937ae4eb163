mod common;

use common::{ep_naive, rng};
use entpow::linalg::{partial_transpose, realign, trace_power4};
use entpow::montecarlo::monte_carlo_ep;
use entpow::random::{random_bipartite_unitary, random_local_unitary};
use entpow::{
    entangling_power, entangling_power_from_decomposition, entangling_power_permutation_oracle,
    BipartiteOperator, ProductTermSum,
};

const MC_SAMPLES: usize = 100_000;

#[test]
fn three_way_agreement_on_random_unitaries() {
    let mut r = rng(201);
    for (d1, d2) in [(2, 2), (2, 3), (3, 3), (2, 4)] {
        for k in 0..25 {
            let u = random_bipartite_unitary(d1, d2, &mut r);
            let ep = entangling_power(&u).unwrap();
            let oracle = entangling_power_permutation_oracle(&u).unwrap();
            assert!((ep - oracle).abs() < 1e-9, "{d1}x{d2} #{k}: {ep} vs oracle {oracle}");
            assert!((ep - ep_naive(&u)).abs() < 1e-10);
            let mc = monte_carlo_ep(&u, MC_SAMPLES, 1000 + k).unwrap();
            assert!(
                mc.agrees_with(ep, 5.0),
                "{d1}x{d2} #{k}: {ep} vs mc {} ± {}",
                mc.mean,
                mc.std_error
            );
        }
    }
}

#[test]
fn decomposition_path_agrees() {
    let mut r = rng(202);
    for (d1, d2) in [(2, 2), (2, 3), (3, 2)] {
        for _ in 0..5 {
            let u = random_bipartite_unitary(d1, d2, &mut r);
            let dec = ProductTermSum::from_operator(&u);
            let a = entangling_power_from_decomposition(&dec).unwrap();
            assert!((a - entangling_power(&u).unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn local_unitary_invariance() {
    let mut r = rng(203);
    for (d1, d2) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
        for _ in 0..10 {
            let u = random_bipartite_unitary(d1, d2, &mut r);
            let v = random_local_unitary(d1, d2, &mut r);
            let w = random_local_unitary(d1, d2, &mut r);
            let dressed = v.compose(&u).unwrap().compose(&w).unwrap();
            let a = entangling_power(&u).unwrap();
            let b = entangling_power(&dressed).unwrap();
            assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn range_and_product_unitaries() {
    let mut r = rng(204);
    for (d1, d2) in [(2, 2), (2, 3), (3, 3), (2, 5), (4, 3)] {
        let hi = 1.0 - 1.0 / d1.min(d2) as f64;
        for _ in 0..20 {
            let ep = entangling_power(&random_bipartite_unitary(d1, d2, &mut r)).unwrap();
            assert!((-1e-10..=hi + 1e-10).contains(&ep));
            let local = entangling_power(&random_local_unitary(d1, d2, &mut r)).unwrap();
            assert!(local.abs() < 1e-10);
        }
    }
}

#[test]
fn equal_dimension_special_case() {
    // (d²+1)/(d+1)² − (Tr_R + Tr_T1) / (d²(d+1)²)
    let mut r = rng(205);
    for d in [2usize, 3] {
        let df = d as f64;
        for _ in 0..10 {
            let u = random_bipartite_unitary(d, d, &mut r);
            let tr = trace_power4(&realign(&u)).unwrap() + trace_power4(partial_transpose(&u).matrix()).unwrap();
            let special = (df * df + 1.0) / (df + 1.0).powi(2) - tr / (df * df * (df + 1.0).powi(2));
            assert!((special - entangling_power(&u).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn swap_has_zero_power() {
    for d in 2..=4 {
        let swap = BipartiteOperator::swap(d);
        assert!(entangling_power(&swap).unwrap().abs() < 1e-10);
        if d * d <= 16 {
            assert!(entangling_power_permutation_oracle(&swap).unwrap().abs() < 1e-10);
        }
    }
}

#[test]
fn monte_carlo_is_independent_of_thread_count() {
    let mut r = rng(206);
    let u = random_bipartite_unitary(2, 3, &mut r);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| monte_carlo_ep(&u, 20_000, 77).unwrap())
    };
    let one = run(1);
    let many = run(4);
    assert_eq!(one.mean.to_bits(), many.mean.to_bits());
    assert_eq!(one.std_error.to_bits(), many.std_error.to_bits());
}
