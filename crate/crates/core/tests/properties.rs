use eaqec::catalog::{catalog, lookup};
use eaqec::circuit::{canonical_check_matrix, Circuit};
use eaqec::code::{min_distance_by_membership, min_distance_with_logicals};
use eaqec::{
    min_distance, synthesize_encoding, BitMatrix, BitVector, EbitPattern, FrameOp, SimplifiedCheckMatrix,
    SymplecticFrame,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_op(rng: &mut impl Rng, r: usize, k: usize) -> FrameOp {
    loop {
        let kind = rng.gen_range(1..=4u8);
        let l = rng.gen_range(0..r);
        let m = match kind {
            1 | 2 => rng.gen_range(0..r),
            _ if k == 0 => continue,
            _ => rng.gen_range(0..k),
        };
        if kind == 1 && l == m {
            continue;
        }
        return FrameOp::from_type(kind, l, m).unwrap();
    }
}

#[test]
fn frame_survives_ten_thousand_random_operations() {
    for (name, seed) in [("shor_9_1_3", 1u64), ("gottesman_8_3_3", 2), ("bch_7_1_3", 3)] {
        let mut frame = SymplecticFrame::from_code(&lookup(name).unwrap().check).unwrap();
        assert!(frame.is_valid());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for step in 0..10_000 {
            let op = random_op(&mut rng, frame.r(), frame.k());
            frame.apply(op).unwrap();
            assert!(frame.violations().is_empty(), "{name}: step {step} after {op:?}");
        }
    }
}

fn induced_distance(frame: &SymplecticFrame, t: &EbitPattern) -> usize {
    let (h, _) = frame.induced_code(t).unwrap();
    min_distance(&h).unwrap().0
}

fn scrambled_frame(name: &str, seed: u64, steps: usize) -> SymplecticFrame {
    let mut frame = SymplecticFrame::from_code(&lookup(name).unwrap().check).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..steps {
        frame.apply(random_op(&mut rng, frame.r(), frame.k())).unwrap();
    }
    frame
}

fn pattern(r: usize, bits: u32) -> EbitPattern {
    let slots: Vec<usize> = (0..r).filter(|i| bits >> i & 1 == 1).collect();
    EbitPattern::new(r, slots).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Adding stabilizers to partners leaves the induced row space alone.
    #[test]
    fn stabilizer_cross_preserves_distance(seed in any::<u64>(), l in 0usize..6, m in 0usize..6, bits in 1u32..64) {
        let frame = scrambled_frame("bch_7_1_3", seed, 20);
        let t = pattern(6, bits);
        let before = frame.induced_code(&t).unwrap().0;
        let after_frame = frame.with(FrameOp::StabilizerCross { l, m }).unwrap();
        let after = after_frame.induced_code(&t).unwrap().0;
        prop_assert_eq!(after.matrix().rank(), before.matrix().rank());
        prop_assert_eq!(after.matrix().vstack(before.matrix()).unwrap().rank(), before.matrix().rank());
        prop_assert_eq!(induced_distance(&after_frame, &t), induced_distance(&frame, &t));
    }

    /// Operations whose modified partner slot lies outside `T` leave the distance alone.
    #[test]
    fn operations_off_the_ebit_slots_preserve_distance(
        seed in any::<u64>(),
        kind in prop::sample::select(vec![1u8, 3, 4]),
        m in 0usize..6,
        bits in 1u32..63,
        pick in any::<prop::sample::Index>(),
    ) {
        let frame = scrambled_frame("bch_7_1_3", seed, 20);
        let t = pattern(6, bits);
        let outside: Vec<usize> = (0..6).filter(|j| !t.contains(*j)).collect();
        let l = *pick.get(&outside);
        let m = if kind == 1 { m } else { 0 };
        prop_assume!(kind != 1 || l != m);
        let op = FrameOp::from_type(kind, l, m).unwrap();
        let after = frame.with(op).unwrap();
        prop_assert_eq!(induced_distance(&after, &t), induced_distance(&frame, &t));
    }
}

fn random_check_matrix(rng: &mut impl Rng) -> SimplifiedCheckMatrix {
    loop {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=2 * n);
        let rows: Vec<BitVector> = (0..m)
            .map(|_| {
                let bools: Vec<bool> = (0..2 * n).map(|_| rng.gen()).collect();
                BitVector::from_bools(&bools)
            })
            .collect();
        let mat = BitMatrix::from_rows(2 * n, rows).unwrap();
        if mat.rank() == m {
            return SimplifiedCheckMatrix::new(n, mat).unwrap();
        }
    }
}

fn assert_synthesis_round_trip(h: &SimplifiedCheckMatrix) {
    let n = h.n();
    let c = h.ebits();
    let s = synthesize_encoding(h).unwrap();
    assert_eq!(s.ebits, c);
    assert_eq!(s.canonical, canonical_check_matrix(n, h.rows() - c, c));
    let forward = s.circuit.apply(h.matrix()).unwrap();
    assert_eq!(s.row_ops.mul(&forward).unwrap(), s.canonical);
    // Decoding the canonical matrix gives back the row space of H.
    let undo = s.row_ops.inverse().unwrap().mul(&s.canonical).unwrap();
    assert_eq!(&s.circuit.inverse().apply(&undo).unwrap(), h.matrix());
    let reparsed = Circuit::parse(n, &s.circuit.to_text()).unwrap();
    assert_eq!(reparsed.gates(), s.circuit.gates());
}

#[test]
fn synthesis_round_trips_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        assert_synthesis_round_trip(&random_check_matrix(&mut rng));
    }
}

#[test]
fn synthesis_round_trips_on_catalog() {
    for e in catalog() {
        assert_synthesis_round_trip(&e.check);
    }
}

#[test]
fn distance_paths_agree_on_catalog() {
    for e in catalog() {
        let (d, en) = min_distance(&e.check).unwrap();
        if let Some(l) = &e.logical {
            let (d2, en2) = min_distance_with_logicals(&e.check, l).unwrap();
            assert_eq!((d, &en), (d2, &en2), "{}", e.name);
        }
        let dim = 2 * e.check.n() - e.check.rows();
        if dim <= 24 {
            let (d3, en3) = min_distance_by_membership(&e.check).unwrap();
            assert_eq!((d, &en), (d3, &en3), "{}", e.name);
        }
    }
}

#[test]
fn distance_paths_agree_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let h = random_check_matrix(&mut rng);
        assert_eq!(min_distance(&h).unwrap(), min_distance_by_membership(&h).unwrap());
    }
}
