use proptest::prelude::*;

use prony::arith::{Approx, Rational};
use prony::prony::{Domain, ModeTag};
use prony::Exponent;
use prony_cli::docs::{Field, ResultDoc, SampleEntry, SamplesDoc};

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..50).prop_map(|(p, q)| Rational::new(p, q))
}

fn approx() -> impl Strategy<Value = Approx> {
    (-1e6f64..1e6).prop_map(|x| Approx::new(x).unwrap())
}

fn index(n: usize) -> impl Strategy<Value = Exponent> {
    prop::collection::vec(-20i64..20, n).prop_map(Exponent::new)
}

proptest! {
    #[test]
    fn rational_samples(n in 1usize..4, entries in prop::collection::vec((prop::collection::vec(-20i64..20, 3), rational()), 0..10)) {
        let doc = SamplesDoc {
            n,
            domain: Domain::Int,
            field: Field::Rational,
            samples: entries.into_iter().map(|(i, value)| SampleEntry { index: Exponent::new(i[..n].to_vec()), value }).collect(),
        };
        let text = serde_json::to_string(&doc).unwrap();
        prop_assert_eq!(serde_json::from_str::<SamplesDoc<Rational>>(&text).unwrap(), doc);
    }

    #[test]
    fn float_samples(entries in prop::collection::vec((index(2), approx()), 0..10)) {
        let doc = SamplesDoc {
            n: 2,
            domain: Domain::Nat,
            field: Field::Float,
            samples: entries.into_iter().map(|(index, value)| SampleEntry { index, value }).collect(),
        };
        let text = serde_json::to_string(&doc).unwrap();
        prop_assert_eq!(serde_json::from_str::<SamplesDoc<Approx>>(&text).unwrap(), doc);
    }

    #[test]
    fn results(points in prop::collection::vec((rational(), rational(), rational()), 0..5), d in 0usize..10, evals in 0usize..100, auto in any::<bool>()) {
        let doc = ResultDoc {
            support: points.iter().map(|(a, b, _)| vec![a.clone(), b.clone()]).collect(),
            coefficients: points.iter().map(|(_, _, c)| c.clone()).collect(),
            degree_used: d,
            mode: if auto { ModeTag::Stabilized } else { ModeTag::RankBound },
            exact: true,
            evaluations: evals,
            decoded: None,
            decoded_coefficients: None,
        };
        let text = serde_json::to_string_pretty(&doc).unwrap();
        prop_assert_eq!(serde_json::from_str::<ResultDoc<Rational>>(&text).unwrap(), doc);
    }
}
