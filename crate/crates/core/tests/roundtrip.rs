use parkforest::enumerate::{all_forests, verify_random};
use parkforest::forest_stats::inv_total;
use parkforest::parking::sample_parking_function_with;
use parkforest::{phi, phi_inv, triangular, Forest, ParkingFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn small_sizes_match_hand_tables() {
    let table: [(&[usize], &[usize]); 4] = [
        (&[], &[]),
        (&[0], &[1]),
        (&[0, 0], &[2, 1]),
        (&[2, 0], &[1, 1]),
    ];
    for (parent, p) in table {
        let f = Forest::new(parent.to_vec()).unwrap();
        assert_eq!(phi(&f).0.as_slice(), p, "phi of {parent:?}");
        assert_eq!(phi_inv(&ParkingFunction::new(p.to_vec()).unwrap()), f);
    }
    assert_eq!(phi(&Forest::new(vec![0, 1]).unwrap()).0.as_slice(), [1, 2]);
}

#[test]
fn forests_of_size_500_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for _ in 0..10_000 {
        let f = Forest::random(500, &mut rng);
        let (p, _) = phi(&f);
        assert_eq!(inv_total(&f) as u64, triangular(500) - p.weight());
        assert_eq!(phi_inv(&p), f);
    }
}

#[test]
fn parking_functions_of_size_500_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    for _ in 0..10_000 {
        let p = sample_parking_function_with(500, &mut rng);
        assert_eq!(phi(&phi_inv(&p)).0, p);
    }
}

#[test]
fn random_verification_is_clean_and_reproducible() {
    let a = verify_random(60, 300, 9);
    assert!(a.success(), "{a:?}");
    let b = verify_random(60, 300, 9);
    assert_eq!(
        (a.forest_count, a.parking_function_count),
        (b.forest_count, b.parking_function_count)
    );
}

#[test]
fn images_are_distinct_parking_functions() {
    let mut seen = std::collections::HashSet::new();
    for f in all_forests(5).unwrap() {
        let p = phi(&f).0;
        assert!(ParkingFunction::new(p.as_slice().to_vec()).is_ok());
        assert!(seen.insert(p.into_inner()));
    }
    assert_eq!(seen.len(), 1296);
}
