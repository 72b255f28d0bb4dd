mod common;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signed_beliefs::hypercube::{
    apply_schedule, code_schedule, find_hypercube_labeling, hypercube_schedule, schedule_has_perfect_matching,
    verify_schedule,
};
use signed_beliefs::selection::PairDraw;
use signed_beliefs::dynamics::step_symmetric;
use signed_beliefs::{make_selection, SelectionKind, Sign, SignedGraph, UpdateParams};

#[test]
fn lengths_follow_m_times_half_n() {
    for m in 0..=6u32 {
        assert_eq!(code_schedule(m).len(), (m as usize) << m.saturating_sub(1));
    }
}

#[test]
fn every_schedule_contains_a_matching() {
    for m in 1..=3u32 {
        let s = hypercube_schedule(&SignedGraph::hypercube(m), m, &(0..1 << m).collect::<Vec<_>>()).unwrap();
        assert!(common::brute_force_matching(1 << m, &s.pairs));
        assert!(schedule_has_perfect_matching(&s, 1 << m).unwrap());
    }
}

/// Hide a hypercube inside a shuffled host with extra edges, then recover it.
#[test]
fn labeling_search_recovers_hidden_cube() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in 1..=4u32 {
        let n = 1usize << m;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let cube = (u ^ v).count_ones() == 1;
                let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
                if cube {
                    edges.push((a, b, Sign::Positive));
                } else if rng.random::<f64>() < 0.2 {
                    edges.push((a, b, if rng.random() { Sign::Negative } else { Sign::Positive }));
                }
            }
        }
        let g = SignedGraph::new(n, edges).unwrap();
        let labels = find_hypercube_labeling(&g, m).unwrap().expect("embedding exists");
        let s = hypercube_schedule(&g, m, &labels).unwrap();
        s.check_against(&g).unwrap();
        assert!(verify_schedule(&s, n, 0.5).unwrap().pass);
    }
}

/// Once the schedule has produced agreement, later events of any sign keep it.
/// Integer starts keep every intermediate value dyadic, so agreement is exact;
/// any rounding residue would otherwise be amplified by negative events.
#[test]
fn agreement_survives_negative_events() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = SignedGraph::complete(8, |u, v| if (u ^ v).count_ones() == 1 { Sign::Positive } else { Sign::Negative });
    let s = hypercube_schedule(&g, 3, &(0..8).collect::<Vec<_>>()).unwrap();
    let sel = make_selection(&SelectionKind::Complete, &g).unwrap();
    let params = UpdateParams::symmetric(0.5, 3.0);
    for _ in 0..20 {
        let x0: Vec<f64> = (0..8).map(|_| f64::from(rng.random_range(-64i32..=64))).collect();
        let avg = x0.iter().sum::<f64>() / 8.0;
        let scale = x0.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let mut x = x0.clone();
        apply_schedule(&s, &mut x, 0.5);
        for _ in 0..100 {
            if let PairDraw::Pair { initiator, partner } = sel.sample_pair(&mut rng) {
                step_symmetric(&mut x, initiator, partner, g.sign(initiator, partner).unwrap(), &params);
            }
        }
        assert!(x.iter().all(|v| (v - avg).abs() <= 1e-12 * scale), "{x:?}");
    }
}
