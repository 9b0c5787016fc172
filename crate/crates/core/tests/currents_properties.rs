use chen_core::currents::{brute_force, crossings, delta_iterated_integral_from, oracle_identities, random_cases};
use chen_core::shuffle_hopf::{antipode, Letter, Word};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn two_hundred_random_cases() {
    let cases = random_cases(7, 200);
    let rep = oracle_identities(&cases).unwrap();
    assert_eq!(rep.cases, 200);
    assert!(rep.pass(), "{:?}", rep.failures);
    assert!(rep.brute_force_checks > 0);
}

#[test]
fn dp_matches_enumeration_on_long_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in random_cases(3, 60) {
        let path = case.alpha.compose(&case.beta).unwrap();
        let cs = crossings(&path, &case.arrangement).unwrap();
        let k = case.arrangement.hyperplanes.len();
        for _ in 0..5 {
            let w: Vec<usize> = (0..rng.random_range(0..=5)).map(|_| rng.random_range(0..k)).collect();
            assert_eq!(delta_iterated_integral_from(&w, &cs), brute_force(&w, &cs));
        }
    }
}

#[test]
fn reversal_sign_matches_antipode() {
    // reversing a path flips every crossing and reverses their order, so a
    // word of length r picks up (−1)^r: the antipode sign on degree-1 letters
    for case in random_cases(5, 40) {
        let cs = crossings(&case.alpha, &case.arrangement).unwrap();
        let rev = crossings(&case.alpha.reversed(), &case.arrangement).unwrap();
        let w: Vec<usize> = case.u.iter().chain(&case.v).copied().collect();
        let mut reversed = w.clone();
        reversed.reverse();
        let sign = if w.len() % 2 == 0 { 1 } else { -1 };
        assert_eq!(delta_iterated_integral_from(&w, &rev), sign * delta_iterated_integral_from(&reversed, &cs));
        let word = Word(w.iter().map(|&h| Letter::new(h as u32, 1)).collect());
        let s = antipode(&word);
        let (_, c) = s.iter().next().unwrap();
        assert_eq!(c.to_integer().to_i64().unwrap(), sign);
    }
}

#[test]
fn shared_letters_are_rejected() {
    let mut cases = random_cases(9, 1);
    cases[0].u = vec![0];
    cases[0].v = vec![0];
    assert!(oracle_identities(&cases).is_err());
    // the square of a single letter counts each crossing with itself too
    let case = &random_cases(9, 1)[0];
    let cs = crossings(&case.alpha, &case.arrangement).unwrap();
    let one = delta_iterated_integral_from(&[0], &cs);
    let diagonal = cs.iter().filter(|c| c.hyperplane == 0).count() as i64;
    assert_eq!(one * one, 2 * delta_iterated_integral_from(&[0, 0], &cs) + diagonal);
}
