//! Structural invariants over random chains.

use nalgebra::DMatrix;
use proptest::prelude::*;
use spiderchain::chain::{LegRates, Prob, Rates};
use spiderchain::factorization::{darboux, thresholds, ul_factorize, verify_product, BetaVector};
use spiderchain::oracle::{exact_levels, power_block, simulate};
use spiderchain::spider_rw::{rw_stieltjes, RWParams};
use spiderchain::stieltjes::{chain_stieltjes, C64, CF_TOL};
use spiderchain::{validate, SpiderParams, StateIndex, ValidatedChain};

fn rates() -> impl Strategy<Value = Rates> {
    (0.05f64..0.45, 0.05f64..0.45).prop_map(|(a, c)| Rates::new(a, 1.0 - a - c, c))
}

fn alpha(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, n + 1).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.iter().map(|x| x / s).collect()
    })
}

fn constant_chain() -> impl Strategy<Value = ValidatedChain> {
    (1usize..=4)
        .prop_flat_map(|n| (alpha(n), rates()))
        .prop_map(|(alpha, r)| {
            let v = r.values();
            validate(SpiderParams::constant(&alpha, v.a, v.b, v.c)).unwrap()
        })
}

fn prefix_chain() -> impl Strategy<Value = ValidatedChain> {
    (1usize..=4)
        .prop_flat_map(|n| {
            let leg = (prop::collection::vec(rates(), 0..=2), rates())
                .prop_map(|(prefix, tail)| LegRates { prefix, tail });
            (alpha(n), prop::collection::vec(leg, n))
        })
        .prop_map(|(alpha, legs)| {
            validate(SpiderParams {
                n_legs: legs.len(),
                alpha: alpha.into_iter().map(Prob::float).collect(),
                legs,
            })
            .unwrap()
        })
}

fn cmax(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn off_axis() -> impl Strategy<Value = C64> {
    (-2.0f64..2.0, 0.1f64..2.0, any::<bool>()).prop_map(|(re, im, up)| C64::new(re, if up { im } else { -im }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn potentials_symmetrize_the_blocks(chain in prefix_chain()) {
        for n in 0..6 {
            let lhs = chain.potential(n).matrix() * chain.blocks(n).a;
            let rhs = chain.blocks(n + 1).c.unwrap().transpose() * chain.potential(n + 1).matrix();
            prop_assert!((&lhs - rhs).amax() < 1e-13 * lhs.amax());
            let pb = chain.potential(n).matrix() * chain.blocks(n).b;
            prop_assert!((&pb - pb.transpose()).amax() < 1e-13 * pb.amax());
        }
    }

    #[test]
    fn block_rows_are_stochastic(chain in prefix_chain()) {
        for n in 0..6 {
            for s in chain.blocks(n).row_sums().iter() {
                prop_assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn truncations_are_nested(chain in prefix_chain(), small in 1usize..6, extra in 1usize..4) {
        let a = chain.truncate(small).unwrap();
        let b = chain.truncate(small + extra).unwrap();
        let dim = a.matrix.nrows();
        prop_assert_eq!(a.matrix, b.matrix.view((0, 0), (dim, dim)).into_owned());
    }

    #[test]
    fn json_round_trip_keeps_the_blocks(chain in prefix_chain()) {
        let text = chain.params().to_json_string();
        let back = validate(SpiderParams::from_json_str(&text).unwrap()).unwrap();
        for n in 0..5 {
            prop_assert_eq!(chain.blocks(n), back.blocks(n));
        }
    }

    #[test]
    fn assembly_matches_closed_form(chain in constant_chain(), z in off_axis()) {
        let closed = rw_stieltjes(&RWParams::from_chain(&chain).unwrap(), z).unwrap();
        let assembled = chain_stieltjes(chain.params(), z).unwrap();
        prop_assert!(cmax(&(&closed - &assembled)) < 1e-12 * (1.0 + cmax(&closed)));
    }

    #[test]
    fn stieltjes_symmetries(chain in prefix_chain(), z in off_axis()) {
        let b = chain_stieltjes(chain.params(), z).unwrap();
        let bc = chain_stieltjes(chain.params(), z.conj()).unwrap();
        prop_assert!(cmax(&(&bc - b.map(|v| v.conj()))) < 1e-12);
        prop_assert!(cmax(&(&b - b.transpose())) < 1e-12);
    }

    #[test]
    fn chapman_kolmogorov(chain in prefix_chain(), i in 0usize..3, j in 0usize..3, m in 0usize..4, n in 0usize..4) {
        let levels = exact_levels(i, j, m + n) + 1;
        let whole = power_block(&chain, levels, m + n, i, j).unwrap();
        let mut split = DMatrix::zeros(chain.n_legs, chain.n_legs);
        for k in 0..=(i + m) {
            split += power_block(&chain, levels, m, i, k).unwrap() * power_block(&chain, levels, n, k, j).unwrap();
        }
        prop_assert!((whole - split).amax() < 1e-12);
    }

    #[test]
    fn feasible_beta_factorizes(chain in constant_chain(), weights in prop::collection::vec(0.0f64..1.0, 4)) {
        let th = thresholds(chain.params(), CF_TOL);
        prop_assume!(th.is_ok());
        let th = th.unwrap();
        let slack = 1.0 - th.sum;
        prop_assume!(slack > 0.05);
        let total: f64 = weights.iter().take(chain.n_legs).sum::<f64>() + 1.0;
        let free: Vec<f64> = th.h.iter().zip(&weights).map(|(h, w)| h + 0.01 + (slack - 0.05) * w / total).collect();
        let beta = BetaVector::new(&free).unwrap();
        let pair = ul_factorize(&chain, &beta, 60).unwrap();
        prop_assert!(verify_product(&chain, &pair, 60).unwrap() < 1e-12);

        let d = darboux(&chain, &pair);
        for n in 0..8 {
            let t = d.blocks(n).unwrap();
            for s in t.row_sums().iter() {
                prop_assert!((s - 1.0).abs() < 1e-12);
            }
            for v in t.a.iter().chain(t.b.iter()).chain(t.c.iter().flat_map(|c| c.iter())) {
                prop_assert!(*v >= -1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn assembly_matches_the_resolvent(chain in prefix_chain(), theta in 0.0f64..std::f64::consts::TAU) {
        let z = C64::from_polar(2.0, theta);
        let b = chain_stieltjes(chain.params(), z).unwrap();
        let n = chain.n_legs;
        let t = chain.truncate(60).unwrap();
        let dim = t.matrix.nrows();
        let resolvent = (DMatrix::<C64>::identity(dim, dim) * z - t.matrix.map(|v| C64::new(v, 0.0)))
            .try_inverse()
            .unwrap();
        let pi0 = chain.potential(0).matrix().map(|v| C64::new(v, 0.0));
        let corner = resolvent.view((0, 0), (n, n)).into_owned();
        prop_assert!(cmax(&(-b * pi0 - corner)) < 1e-12);
    }

    #[test]
    fn simulation_ignores_thread_count(chain in prefix_chain(), seed in any::<u64>(), steps in 0usize..6) {
        let paths = 40_000;
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = one.install(|| simulate(&chain, StateIndex::BODY, steps, paths, seed).unwrap());
        let parallel = simulate(&chain, StateIndex::BODY, steps, paths, seed).unwrap();
        prop_assert_eq!(serial, parallel);
    }
}
