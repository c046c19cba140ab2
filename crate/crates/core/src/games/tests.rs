use super::*;
use crate::algebra::{complex_algebra, AtomStructure};
use crate::rainbow::{rainbow_atom_structure, RainbowSig};
use crate::set_algebra::{full_space, ops_on};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn square(base: usize, dim: usize) -> AtomStructure {
    ops_on(&full_space(base, dim).unwrap()).algebra.structure().clone()
}

fn random_structure(seed: u64, atoms: usize, density: f64) -> AtomStructure {
    AtomStructure::random(&mut ChaCha8Rng::seed_from_u64(seed), 2, atoms, density)
}

fn limits(history: History) -> Limits {
    Limits { history, ..Limits::default() }
}

fn winner(s: &AtomStructure, spec: GameSpec, history: History) -> Winner {
    let result = solve_atomic_game(s, spec, limits(history)).unwrap();
    verify_certificate(s, &result.certificate).unwrap();
    result.winner
}

#[test]
fn one_point_square_is_won_by_exists() {
    let s = square(1, 2);
    assert_eq!(s.atom_count(), 1);
    assert_eq!(winner(&s, GameSpec::g(3, Rounds::Omega), History::Positional), Winner::Exists);
}

#[test]
fn two_point_square_has_a_three_square_representation() {
    let s = square(2, 2);
    let result = solve_atomic_game(&s, GameSpec::g(3, Rounds::Omega), limits(History::Positional)).unwrap();
    assert_eq!(result.winner, Winner::Exists);
    assert!(matches!(result.certificate, Certificate::Exists(_)));
    verify_certificate(&s, &result.certificate).unwrap();
}

#[test]
fn no_rounds_means_exists_wins() {
    let s = random_structure(3, 4, 0.3);
    for kind in [GameKind::G, GameKind::F] {
        let spec = GameSpec { kind, nodes: 3, rounds: Rounds::Finite(0) };
        assert_eq!(winner(&s, spec, History::Positional), Winner::Exists);
    }
}

#[test]
fn exact_history_rejects_omega() {
    let s = square(2, 2);
    let err = solve_atomic_game(&s, GameSpec::g(3, Rounds::Omega), limits(History::Exact)).unwrap_err();
    assert!(matches!(err, crate::Error::InvalidArgument(_)));
}

#[test]
fn tampered_forall_certificate_is_rejected() {
    let (s, mut cert) = (0..500)
        .find_map(|seed| {
            let s = random_structure(seed, 4, 0.5);
            match solve_atomic_game(&s, GameSpec::g(3, Rounds::Finite(3)), limits(History::Positional)).unwrap().certificate {
                Certificate::Forall(cert) if !cert.positions.is_empty() => Some((s, cert)),
                _ => None,
            }
        })
        .expect("some small structure needs a ∀ strategy beyond the opening");
    verify_certificate(&s, &Certificate::Forall(cert.clone())).unwrap();
    cert.positions.clear();
    assert!(verify_certificate(&s, &Certificate::Forall(cert)).is_err());
}

#[test]
fn ca_4_3_script_wins_f6_and_replays() {
    let rs = rainbow_atom_structure(&RainbowSig::new(3, 4, 3).unwrap()).unwrap();
    let outcome = scripted_forall_rainbow(&rs, GameKind::F, 6, 8).unwrap();
    let ScriptOutcome::ForallWin { rounds, certificate } = outcome else {
        panic!("script inconclusive: {outcome:?}");
    };
    assert!(rounds <= 8);
    verify_certificate(&rs.structure, &Certificate::Forall(certificate)).unwrap();
}

#[test]
fn balanced_rainbow_is_inconclusive_at_shallow_depth() {
    let rs = rainbow_atom_structure(&RainbowSig::new(3, 3, 3).unwrap()).unwrap();
    let outcome = scripted_forall_rainbow(&rs, GameKind::F, 6, 4).unwrap();
    assert!(matches!(outcome, ScriptOutcome::Inconclusive { .. }), "{outcome:?}");
}

#[test]
fn zero_depth_script_is_inconclusive() {
    let rs = rainbow_atom_structure(&RainbowSig::new(3, 4, 3).unwrap()).unwrap();
    let outcome = scripted_forall_rainbow(&rs, GameKind::F, 6, 0).unwrap();
    assert!(matches!(outcome, ScriptOutcome::Inconclusive { depth: 0, .. }));
}

#[test]
fn membership_certificate_for_ca_4_3_replays() {
    let rs = rainbow_atom_structure(&RainbowSig::new(3, 4, 3).unwrap()).unwrap();
    let cert = non_membership_certificate(&rs.structure, Some(&rs), 6, 8, Limits::default()).unwrap().expect("certificate");
    assert!(matches!(cert, MembershipCertificate::NotInNeatReducts { dim: 3, nodes: 6, .. }));
    cert.verify(&rs.structure).unwrap();
}

#[test]
fn lyndon_refutes_a_structure_with_an_unrealisable_atom() {
    let found = (0..300).find_map(|seed| {
        let s = random_structure(seed, 3, 0.2);
        let report = lyndon_check(&s, 1, 3, Limits::default()).unwrap();
        (report.refuted_at() == Some(1)).then_some((s, report))
    });
    let (s, report) = found.expect("a sparse structure with an atom that has no network");
    let certificate = report.rounds[0].certificate.as_ref().expect("∀ certificate");
    verify_certificate(&s, certificate).unwrap();
}

#[test]
fn lyndon_passes_on_a_representable_square() {
    let s = square(2, 2);
    let report = lyndon_check(&s, 3, 6, Limits::default()).unwrap();
    assert!(report.is_complete(3));
    assert_eq!(report.refuted_at(), None);
    assert!(report.rounds.iter().all(|r| r.verdict == LyndonVerdict::Pass));
}

#[test]
fn rep_game_on_the_two_element_algebra() {
    let algebra = ops_on(&full_space(1, 2).unwrap()).algebra;
    let result = rep_game(&algebra, 3, RepLimits::default()).unwrap();
    assert_eq!(result.winner, Winner::Exists);
    let play = scheduled_rep_play(&algebra, RepLimits::default()).unwrap();
    assert!(play.survived && play.saturated);
    let elements: Vec<_> = algebra.elements().unwrap().collect();
    let (_, check) = extract_representation(&algebra, &play.network, &elements).unwrap();
    assert!(check.is_embedding(), "{check:?}");
}

#[test]
fn scheduled_play_represents_the_cube_on_two_points() {
    let algebra = ops_on(&full_space(2, 3).unwrap()).algebra;
    let play = scheduled_rep_play(&algebra, RepLimits::default()).unwrap();
    assert!(play.survived && play.saturated);
    assert_eq!(play.network.node_count(), 2);
    let elements: Vec<_> = algebra.elements().unwrap().collect();
    let (rep, check) = extract_representation(&algebra, &play.network, &elements).unwrap();
    assert!(check.is_embedding(), "{check:?}");
    assert_eq!(rep.image(&algebra.one()).len(), 8);
}

#[test]
fn extraction_detects_a_non_embedding() {
    let algebra = ops_on(&full_space(2, 2).unwrap()).algebra;
    let start = ElementNetwork::initial(&algebra);
    let elements: Vec<_> = algebra.elements().unwrap().collect();
    let (_, check) = extract_representation(&algebra, &start, &elements).unwrap();
    assert!(!check.is_embedding());
}

#[test]
fn complex_algebra_of_a_square_round_trips_through_games() {
    let s = square(2, 2);
    let again = crate::algebra::atom_structure_of(&complex_algebra(s.clone()));
    assert_eq!(
        winner(&s, GameSpec::g(3, Rounds::Finite(3)), History::Positional),
        winner(&again, GameSpec::g(3, Rounds::Finite(3)), History::Positional)
    );
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn more_rounds_only_help_forall(seed in 0u64..10_000, atoms in 2usize..5) {
        let s = random_structure(seed, atoms, 0.5);
        for kind in [GameKind::G, GameKind::F] {
            let mut lost = false;
            for k in 0..=4 {
                let w = winner(&s, GameSpec { kind, nodes: 3, rounds: Rounds::Finite(k) }, History::Positional);
                prop_assert!(!(lost && w == Winner::Exists), "∃ recovers at round {k}");
                lost |= w == Winner::Forall;
            }
        }
    }

    #[test]
    fn more_nodes_only_help_forall(seed in 0u64..10_000, atoms in 2usize..5) {
        let s = random_structure(seed, atoms, 0.5);
        for kind in [GameKind::G, GameKind::F] {
            let mut lost = false;
            for m in 2..=4 {
                let w = winner(&s, GameSpec { kind, nodes: m, rounds: Rounds::Finite(3) }, History::Positional);
                prop_assert!(!(lost && w == Winner::Exists), "∃ recovers at {m} nodes");
                lost |= w == Winner::Forall;
            }
        }
    }

    #[test]
    fn exact_and_positional_history_agree(seed in 0u64..10_000, atoms in 2usize..5, k in 1usize..4) {
        let s = random_structure(seed, atoms, 0.5);
        for kind in [GameKind::G, GameKind::F] {
            let spec = GameSpec { kind, nodes: 3, rounds: Rounds::Finite(k) };
            prop_assert_eq!(winner(&s, spec, History::Positional), winner(&s, spec, History::Exact));
        }
    }

    #[test]
    fn omega_winner_matches_long_finite_games(seed in 0u64..10_000, atoms in 2usize..5) {
        let s = random_structure(seed, atoms, 0.5);
        let omega = winner(&s, GameSpec::g(3, Rounds::Omega), History::Positional);
        let long = winner(&s, GameSpec::g(3, Rounds::Finite(12)), History::Positional);
        prop_assert_eq!(omega, long);
    }
}
