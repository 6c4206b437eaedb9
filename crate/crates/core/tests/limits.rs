mod support;

use num_traits::Zero;
use support::{canonical, canonical_laurent, laurent_displacement, laurent_limit_length, spec};
use treelimits::algebra::GaussianRational;
use treelimits::tree::four_point_defect;
use treelimits::valuation::{
    limit_length, limit_metric_unchecked, orbit_limit_length, End, MatrixCache, RepCurve,
};
use treelimits::words::{enumerate_ball, parse_word, Word};

fn curves() -> Vec<RepCurve> {
    vec![
        canonical().curve,
        spec(r#"{ "a": [["t", "1"], ["0", "1/t"]], "b": [["2", "t"], ["1", "(t+1)/2"]] }"#).curve,
        spec(r#"{ "a": [["t^2", "0"], ["0", "1/t^2"]], "b": [["0", "1"], ["-1", "t"]] }"#).curve,
        spec(r#"{ "a": [["1", "t"], ["0", "1"]], "b": [["1", "0"], ["t", "1"]] }"#).curve,
    ]
}

fn w(c: &RepCurve, s: &str) -> Word {
    parse_word(s, c.alphabet()).unwrap()
}

#[test]
fn symbolic_and_orbit_engines_agree() {
    let ends = [
        End::Infinity,
        End::Finite(GaussianRational::from_integer(0)),
        End::Finite(GaussianRational::from_integer(1)),
    ];
    for (k, c) in curves().iter().enumerate() {
        let ball = enumerate_ball(c.alphabet(), 3).unwrap();
        for end in &ends {
            for word in &ball.words {
                let sym = limit_length(c, end, word).unwrap();
                let orb = orbit_limit_length(c, end, word).unwrap();
                assert_eq!(
                    sym,
                    orb,
                    "curve {k} end {end} word {}",
                    c.alphabet().render(word)
                );
            }
        }
    }
}

#[test]
fn length_is_a_class_function() {
    for c in curves() {
        let ball = enumerate_ball(c.alphabet(), 2).unwrap();
        for u in &ball.words {
            let base = limit_length(&c, &End::Infinity, u).unwrap();
            assert_eq!(
                limit_length(&c, &End::Infinity, &u.inverse()).unwrap(),
                base
            );
            for v in &ball.words {
                assert_eq!(
                    limit_length(&c, &End::Infinity, &u.conjugate_by(v)).unwrap(),
                    base
                );
            }
        }
    }
}

#[test]
fn canonical_matches_laurent_oracle() {
    let c = canonical().curve;
    let ball = enumerate_ball(c.alphabet(), 3).unwrap();
    let mut cache = MatrixCache::new(&c);
    for word in &ball.words {
        let m = canonical_laurent(c.alphabet(), word);
        let name = c.alphabet().render(word);
        assert_eq!(
            cache.limit_length(&End::Infinity, word).unwrap(),
            laurent_limit_length(&m),
            "{name}"
        );
        assert_eq!(
            cache.displacement(&End::Infinity, word).unwrap(),
            laurent_displacement(&m),
            "{name}"
        );
    }
    for (s, v) in [("a", 2), ("b", 0), ("ab", 2), ("ba", 2), ("abAB", 4)] {
        assert_eq!(
            limit_length(&c, &End::Infinity, &w(&c, s)).unwrap(),
            v,
            "{s}"
        );
    }
}

#[test]
fn canonical_ends_mirror() {
    // t ↦ 1/t swaps the diagonal of a and leaves b alone
    let c = canonical().curve;
    let zero = End::Finite(GaussianRational::from_integer(0));
    for word in &enumerate_ball(c.alphabet(), 3).unwrap().words {
        assert_eq!(
            limit_length(&c, &zero, word).unwrap(),
            limit_length(&c, &End::Infinity, word).unwrap()
        );
    }
}

#[test]
fn limit_metric_is_a_tree() {
    for c in curves() {
        let ball = enumerate_ball(c.alphabet(), 2).unwrap();
        let m = limit_metric_unchecked(&c, &End::Infinity, &ball).unwrap();
        assert!(four_point_defect(&m.metric).defect.is_zero());
        // translation length read off the metric
        let id = Word::identity();
        for g in c.alphabet().generators() {
            let d1 = m.distance(&id, &g).unwrap().clone();
            let d2 = m.distance(&id, &g.pow(2)).unwrap().clone();
            let l = (d2 - d1).to_integer();
            let l: i64 = l.max(0.into()).try_into().unwrap();
            assert_eq!(l, limit_length(&c, &End::Infinity, &g).unwrap());
        }
    }
}
