use std::collections::BTreeMap;

use num_complex::Complex;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semiclassical_core::ncpoly::{
    canonical_eq, eval_factor, eval_ncpoly, factor_normalize, make_generators, random_polynomial, substitute_lambda,
    tp_add, tp_adjoint, tp_commutator, tp_mul, translate_qm, FactorPoly, Letter, ObservableExpr, ProjectorRelations,
    RIndex, ROperator, Rewriter, ScalarCoeff, Strategy as RewriteStrategy, TensorPoly, TermKey,
};
use semiclassical_core::{Exact, Poly};

type R = BigRational;
type C = ScalarCoeff<R>;
type F = FactorPoly<R>;
type E = ObservableExpr<R>;

fn rat(n: i64, d: i64) -> R {
    R::ratio(n, d)
}

/// Independent oracle: expands a word by recursively splitting at its first
/// `PQ` pair. Coefficients are tracked as (power of ħ) → Gaussian integer.
fn brute_force(word: &[Letter]) -> BTreeMap<(u32, u32, u32), (i64, i64)> {
    fn go(word: Vec<Letter>, hbar: u32, c: (i64, i64), out: &mut BTreeMap<(u32, u32, u32), (i64, i64)>) {
        let pos = (0..word.len().saturating_sub(1)).find(|&i| word[i] == Letter::P && word[i + 1] == Letter::Q);
        match pos {
            None => {
                let m = word.iter().filter(|&&l| l == Letter::Q).count() as u32;
                let e = out.entry((m, word.len() as u32 - m, hbar)).or_insert((0, 0));
                e.0 += c.0;
                e.1 += c.1;
            }
            Some(i) => {
                let mut swapped = word.clone();
                swapped.swap(i, i + 1);
                go(swapped, hbar, c, out);
                let mut contracted = word;
                contracted.drain(i..i + 2);
                // multiply by -i: (a + bi)(-i) = b - ai
                go(contracted, hbar + 1, (c.1, -c.0), out);
            }
        }
    }
    let mut out = BTreeMap::new();
    go(word.to_vec(), 0, (1, 0), &mut out);
    out.retain(|_, v| *v != (0, 0));
    out
}

fn oracle_to_factor(map: &BTreeMap<(u32, u32, u32), (i64, i64)>) -> F {
    let mut out = F::zero();
    for (&(m, n, h), &(re, im)) in map {
        let c = C::monomial(h, 0, Complex::new(rat(re, 1), rat(im, 1)));
        out = &out + &F::monomial((m, n), c);
    }
    out
}

#[test]
fn factor_normalize_examples() {
    use Letter::{P, Q};
    assert_eq!(factor_normalize::<R>(&[Q, P]), F::monomial((1, 1), C::one()));
    assert_eq!(
        factor_normalize::<R>(&[P, Q]),
        &F::monomial((1, 1), C::one()) + &F::monomial((0, 0), -&C::i_hbar())
    );

    // Frozen from the brute-force oracle: PPQQ = Q²P² − 4iħ QP − 2ħ².
    let oracle = brute_force(&[P, P, Q, Q]);
    let frozen: BTreeMap<(u32, u32, u32), (i64, i64)> =
        [((2, 2, 0), (1, 0)), ((1, 1, 1), (0, -4)), ((0, 0, 2), (-2, 0))].into_iter().collect();
    assert_eq!(oracle, frozen);
    assert_eq!(factor_normalize::<R>(&[P, P, Q, Q]), oracle_to_factor(&frozen));
}

fn word_strategy() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop_oneof![Just(Letter::Q), Just(Letter::P)], 0..=8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rewriting_is_confluent(word in word_strategy()) {
        let left = Rewriter::<R>::default().with_strategy(RewriteStrategy::Leftmost).normalize(&word);
        let right = Rewriter::<R>::default().with_strategy(RewriteStrategy::Rightmost).normalize(&word);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left, oracle_to_factor(&brute_force(&word)));
    }
}

#[test]
fn tp_add_examples() {
    let g = make_generators::<R>();
    assert_eq!(tp_add(&g.q_tilde, &Poly::zero()), g.q_tilde);

    let one = F::one();
    let q_part = TensorPoly::from_parts(&F::q(), &one, &ROperator::r_q());
    let p_part = TensorPoly::from_parts(&one, &F::q(), &ROperator::r_p());
    assert_eq!(tp_add(&q_part, &p_part), g.q_qm);

    let diff = tp_add(&g.q_tilde, &(-&g.q_qm));
    let expected = TensorPoly::from_parts(&F::q(), &one, &ROperator::r_p()).scale(&C::lambda());
    assert_eq!(diff, expected);
}

#[test]
fn tp_mul_examples() {
    let g = make_generators::<R>();
    assert!(tp_mul(&g.r_q, &g.r_p).is_zero());
    assert_eq!(tp_mul(&g.identity, &g.q_tilde), g.q_tilde);

    let one = F::one();
    let qp = F::monomial((1, 1), C::one());
    let expected = &TensorPoly::from_parts(&qp, &one, &ROperator::r_q())
        + &TensorPoly::from_parts(&one, &qp, &ROperator::r_p());
    assert_eq!(tp_mul(&g.q_qm, &g.p_qm), expected);
}

#[test]
fn commutator_examples() {
    let g = make_generators::<R>();
    let i_hbar = Poly::scalar(C::i_hbar());
    assert!(canonical_eq(&tp_commutator(&g.q_qm, &g.p_qm), &i_hbar));
    assert!(tp_commutator(&g.q_cm, &g.p_cm).is_zero());

    // Holds with λ left symbolic.
    let tilde = tp_commutator(&g.q_tilde, &g.p_tilde);
    assert!(canonical_eq(&tilde, &i_hbar));
    for v in [rat(0, 1), rat(1, 3), rat(1, 1)] {
        let q = substitute_lambda(&g.q_tilde, &v).unwrap();
        let p = substitute_lambda(&g.p_tilde, &v).unwrap();
        assert!(canonical_eq(&tp_commutator(&q, &p), &i_hbar));
    }
}

#[test]
fn adjoint_examples() {
    let g = make_generators::<R>();
    for (name, x) in g.named() {
        assert_eq!(&tp_adjoint(x), x, "{name} is not self-adjoint");
    }
    assert_eq!(tp_adjoint(&Poly::scalar(C::i_hbar())), Poly::scalar(-&C::i_hbar()));

    let one = F::one();
    let qp = F::monomial((1, 1), C::one());
    let x = TensorPoly::from_parts(&qp, &one, &ROperator::r_q());
    let expected = TensorPoly::from_parts(&(&qp + &F::monomial((0, 0), -&C::i_hbar())), &one, &ROperator::r_q());
    assert_eq!(tp_adjoint(&x), expected);
}

#[test]
fn generator_examples() {
    let g = make_generators::<R>();
    assert_eq!(substitute_lambda(&g.q_tilde, &rat(0, 1)).unwrap(), g.q_qm);
    assert_eq!(substitute_lambda(&g.p_tilde, &rat(0, 1)).unwrap(), g.p_qm);

    let expected_q_cm = &TensorPoly::monomial(TermKey::new((1, 0), (0, 0), RIndex::Q, RIndex::Q), C::one())
        + &TensorPoly::monomial(TermKey::new((1, 0), (0, 0), RIndex::P, RIndex::P), C::one());
    assert_eq!(g.q_cm, expected_q_cm);
    assert!(g.q_tilde.has_lambda());
    assert!(!g.q_cm.has_lambda());
}

#[test]
fn substitute_lambda_examples() {
    let g = make_generators::<R>();
    let one = F::one();
    let at_one = substitute_lambda(&g.q_tilde, &rat(1, 1)).unwrap();
    let expected = &TensorPoly::from_parts(&F::q(), &one, &ROperator::identity())
        + &TensorPoly::from_parts(&one, &F::q(), &ROperator::r_p());
    assert_eq!(at_one, expected);
    assert!(!canonical_eq(&at_one, &g.q_cm));

    for v in [rat(0, 1), rat(2, 7), rat(1, 1)] {
        assert_eq!(substitute_lambda(&g.identity, &v).unwrap(), g.identity);
    }
    assert!(substitute_lambda(&g.q_tilde, &rat(-1, 2)).is_err());
    assert!(substitute_lambda(&g.q_tilde, &rat(3, 2)).is_err());
}

#[test]
fn eval_ncpoly_examples() {
    let g = make_generators::<R>();
    let rw = Rewriter::default();

    let sym = E::x() * E::y() + E::y() * E::x();
    let lhs = eval_ncpoly(&sym, &g.q_qm, &g.p_qm).unwrap();
    let f = eval_factor(&rw, &sym).unwrap();
    assert_eq!(lhs, translate_qm(&f));

    let sq = E::x().pow(2) + E::y().pow(2);
    let lhs = eval_ncpoly(&sq, &g.q_cm, &g.p_cm).unwrap();
    let one = F::one();
    let q2 = F::monomial((2, 0), C::one());
    let p2 = F::monomial((0, 2), C::one());
    let expected = &TensorPoly::from_parts(&q2, &one, &ROperator::identity())
        + &TensorPoly::from_parts(&one, &p2, &ROperator::identity());
    assert_eq!(lhs, expected);

    assert_eq!(eval_ncpoly(&E::ratio(1, 1), &g.q_tilde, &g.p_cm).unwrap(), g.identity);
}

#[test]
fn canonical_eq_examples() {
    let g = make_generators::<R>();
    assert!(canonical_eq(&tp_commutator(&g.q_qm, &g.p_qm), &Poly::scalar(C::i_hbar())));
    assert!(!canonical_eq(&g.q_tilde, &g.q_cm));
    assert!(canonical_eq(&g.p_tilde, &g.p_tilde));
}

#[test]
fn projector_relations() {
    assert!(ProjectorRelations::check::<R>(&ROperator::r_q(), &ROperator::r_p()).all());

    let g = make_generators::<R>();
    assert!(tp_mul(&g.r_q, &g.r_p).is_zero());
    assert_eq!(tp_mul(&g.r_q, &g.r_q), g.r_q);
    assert_eq!(tp_mul(&g.r_p, &g.r_p), g.r_p);
    assert_eq!(tp_adjoint(&g.r_q), g.r_q);
    assert_eq!(tp_adjoint(&g.r_p), g.r_p);
    assert_eq!(tp_add(&g.r_q, &g.r_p), g.identity);
}

#[test]
fn translation_identity_random() {
    let g = make_generators::<R>();
    let rw = Rewriter::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let f: E = random_polynomial(&mut rng, 4, 4);
        let lhs = eval_ncpoly(&f, &g.q_qm, &g.p_qm).unwrap();
        let rhs = translate_qm(&eval_factor(&rw, &f).unwrap());
        assert!(canonical_eq(&lhs, &rhs), "translation fails for {f}");
    }
}

#[test]
fn classical_algebra_is_commutative_random() {
    let g = make_generators::<R>();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let f: E = random_polynomial(&mut rng, 4, 4);
        let h: E = random_polynomial(&mut rng, 4, 4);
        let a = eval_ncpoly(&f, &g.q_cm, &g.p_cm).unwrap();
        let b = eval_ncpoly(&h, &g.q_cm, &g.p_cm).unwrap();
        assert!(tp_commutator(&a, &b).is_zero(), "[{f}, {h}] != 0");
    }
}

#[test]
fn adjoint_is_an_involution() {
    let g = make_generators::<R>();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let f: E = random_polynomial(&mut rng, 4, 3);
        let x = eval_ncpoly(&f, &g.q_tilde, &g.p_qm).unwrap().scale(&C::i());
        assert_eq!(tp_adjoint(&tp_adjoint(&x)), x);
    }
}

#[test]
fn small_integer_ratios_agree_with_bigrational() {
    type R64 = num_rational::Ratio<i64>;
    let g = make_generators::<R64>();
    let c = tp_commutator(&g.q_tilde, &g.p_tilde);
    assert_eq!(c, TensorPoly::scalar(ScalarCoeff::i_hbar()));
}
