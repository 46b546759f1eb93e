mod common;

use dulac::normalform::{normal_degree, normalize};
use dulac::resonance::{enumerate_resonances, Component, ResonantMonomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::random_case1_field;

fn component(n: usize, i: usize) -> Component {
    match i {
        0 => Component::X,
        1 => Component::Y,
        2 if n == 3 => Component::Z,
        _ => Component::U,
    }
}

#[test]
fn survivors_are_resonant() {
    for seed in 0..6 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_case1_field(&mut rng, 3, 2);
        let eig = x.validate().unwrap();
        let nf = normalize(&x, 3).unwrap();
        let res = enumerate_resonances(&eig, 4);
        for (i, e, _) in nf.field.all_terms() {
            if normal_degree(e) < 2 {
                continue;
            }
            let m = ResonantMonomial {
                component: component(3, i),
                exponents: [e[0], e[1], e[2]],
            };
            assert!(res.contains(&m), "seed {seed}: {m:?} survived");
        }
    }
}

#[test]
fn idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x = random_case1_field(&mut rng, 3, 2);
    let nf = normalize(&x, 3).unwrap();
    let again = normalize(&nf.field, 3).unwrap();
    assert_eq!(again.field, nf.field);
    assert!(again.generators.is_empty());
    assert!(again.time_factor.is_one());
}

#[test]
fn higher_steps_keep_lower_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = random_case1_field(&mut rng, 3, 2);
    let full = normalize(&x, 3).unwrap();
    for d in 1..3 {
        let low = normalize(&x, d).unwrap();
        assert_eq!(full.field.with_degree(d), low.field, "degree {d}");
    }
}
