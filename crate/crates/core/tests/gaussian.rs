use prony::arith::Rational;
use prony::poly::IndexFamily;
use prony::prony::{run_pipeline, Mode, PipelineConfig};
use prony::structures::{GaussTerm, GeneratorSpec, Hankel};
use prony::Approx;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<GaussTerm> {
    let mut terms: Vec<GaussTerm> = Vec::new();
    while terms.len() < k {
        let center: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..=2.0)).collect();
        let far = terms.iter().all(|t| {
            t.center
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt()
                >= 0.5
        });
        if far {
            terms.push(GaussTerm {
                coeff: rng.random_range(0.5..=2.0),
                center,
            });
        }
    }
    terms
}

#[test]
fn gaussian_sums_recover_centers() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..40 {
        let n = 1 + trial % 2;
        let k = 1 + trial % 3;
        let terms = instance(&mut rng, n, k);
        let a = (0..n)
            .map(|i| (0..n).map(|j| Rational::integer((i == j) as i64)).collect())
            .collect();
        let spec = GeneratorSpec::Gaussian {
            n,
            a,
            terms: terms.clone(),
        };
        let mut oracle = spec.float_oracle::<Approx>().unwrap();
        let out = run_pipeline(
            &Hankel::standard(IndexFamily::total(n)),
            &mut oracle,
            Mode::RankBound(k),
            &PipelineConfig::float(1e-10),
        )
        .unwrap_or_else(|e| panic!("trial {trial}: {e} for {terms:?}"));
        let (centers, coeffs) = spec
            .decode_gaussian(&out.support, &out.coefficients)
            .unwrap();
        assert_eq!(centers.len(), k, "trial {trial}");
        for t in &terms {
            let i = centers
                .iter()
                .position(|c| c.iter().zip(&t.center).all(|(a, b)| (a - b).abs() < 1e-6))
                .unwrap_or_else(|| {
                    panic!(
                        "trial {trial}: center {:?} missing from {centers:?}",
                        t.center
                    )
                });
            assert!(
                (coeffs[i] - t.coeff).abs() < 1e-5,
                "trial {trial}: {} vs {}",
                coeffs[i],
                t.coeff
            );
        }
    }
}
