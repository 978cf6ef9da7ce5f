use std::sync::OnceLock;

use proptest::prelude::*;

use hyperqec::harness::{merge_counts, run_erasure_trials};
use hyperqec::{
    generate_operators, syndrome_of, BoundaryOperatorSet, ErasureDecoder, ErasurePattern,
    IntOptDecoder, Pauli, PauliString, Preset, SweepConfig, SymplecticMatrix,
};

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(0usize..4, n)
        .prop_map(|v| PauliString::from_paulis(&v.into_iter().map(Pauli::from_index).collect::<Vec<_>>()))
}

fn pair(max: usize) -> impl Strategy<Value = (PauliString, PauliString)> {
    (1..max).prop_flat_map(|n| (pauli_string(n), pauli_string(n)))
}

fn happy1() -> &'static BoundaryOperatorSet {
    static OPS: OnceLock<BoundaryOperatorSet> = OnceLock::new();
    OPS.get_or_init(|| generate_operators(&Preset::MaxRateHappy.build(1).unwrap()).unwrap())
}

fn steane0() -> &'static BoundaryOperatorSet {
    static OPS: OnceLock<BoundaryOperatorSet> = OnceLock::new();
    OPS.get_or_init(|| generate_operators(&Preset::ZeroRateSteane.build(0).unwrap()).unwrap())
}

proptest! {
    #[test]
    fn commutation_is_symplectic((a, b) in pair(140)) {
        let odd = (0..a.num_qubits())
            .filter(|&q| {
                let (x, y) = (a.get(q), b.get(q));
                x != Pauli::I && y != Pauli::I && x != y
            })
            .count() % 2 == 1;
        prop_assert_eq!(a.commutes(&b).unwrap(), !odd);
        prop_assert_eq!(b.commutes(&a).unwrap(), !odd);
    }

    #[test]
    fn multiplication_is_a_group((a, b) in pair(140)) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(ab.multiply(&b).unwrap(), a.clone());
        prop_assert_eq!(b.multiply(&a).unwrap(), ab.clone());
        prop_assert!(ab.weight() <= a.weight() + b.weight());
        for q in 0..a.num_qubits() {
            prop_assert_eq!(ab.get(q), a.get(q).mul(b.get(q)));
        }
    }

    #[test]
    fn rref_is_idempotent(rows in (1usize..20).prop_flat_map(|n| prop::collection::vec(pauli_string(n), 1..12))) {
        let m = SymplecticMatrix::from_rows(rows.clone()).unwrap();
        let basis = m.canonical_basis();
        prop_assert_eq!(basis.len(), m.rank());
        let again = SymplecticMatrix::new(m.num_qubits(), basis.clone()).unwrap();
        prop_assert_eq!(again.canonical_basis(), basis);
        prop_assert!(m.same_span(&again));
        for r in &rows {
            prop_assert!(again.contains(r).unwrap());
        }
    }

    #[test]
    fn erasure_is_monotone(mask in prop::collection::vec(any::<bool>(), 25), drop in 0usize..25) {
        let dec = ErasureDecoder::new(happy1(), &[0]).unwrap();
        let bigger = ErasurePattern::new(mask.clone());
        let mut smaller = mask;
        smaller[drop] = false;
        if dec.correctable(&bigger).unwrap() {
            prop_assert!(dec.correctable(&ErasurePattern::new(smaller)).unwrap());
        }
    }

    #[test]
    fn intopt_preserves_syndrome(e in pauli_string(7)) {
        let ops = steane0();
        let dec = IntOptDecoder::new(ops, &[0], 26).unwrap();
        let s = syndrome_of(&ops.stabilizers, &e).unwrap();
        let c = dec.decode(&s).unwrap();
        prop_assert_eq!(syndrome_of(&ops.stabilizers, &c).unwrap(), s);
        prop_assert!(c.weight() <= e.weight());
    }

    #[test]
    fn intopt_on_a_larger_code(e in pauli_string(25)) {
        let ops = happy1();
        let dec = IntOptDecoder::new(ops, &[0], 26).unwrap();
        let s = syndrome_of(&ops.stabilizers, &e).unwrap();
        let c = dec.decode(&s).unwrap();
        prop_assert_eq!(syndrome_of(&ops.stabilizers, &c).unwrap(), s);
        prop_assert!(c.weight() <= e.weight());
    }

    #[test]
    fn sweep_splits_and_merges(split in 0u64..=40, seed in any::<u64>()) {
        let mut cfg = SweepConfig::erasure(Preset::MaxRateHappy, 1);
        cfg.p_start = 0.1;
        cfg.p_end = 0.5;
        cfg.p_step = 0.2;
        cfg.trials = 40;
        cfg.master_seed = seed;
        cfg.workers = 1;
        let whole = run_erasure_trials(&cfg, 0..40).unwrap();
        let mut parts = run_erasure_trials(&cfg, 0..split).unwrap();
        merge_counts(&mut parts, &run_erasure_trials(&cfg, split..40).unwrap()).unwrap();
        prop_assert_eq!(parts.rows, whole.rows);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn solve_reproduces_target(
        (rows, coeffs, frozen) in (1usize..24, 1usize..16).prop_flat_map(|(n, r)| (
            prop::collection::vec(pauli_string(n), r),
            prop::collection::vec(any::<bool>(), r),
            prop::collection::vec(any::<bool>(), n),
        ))
    ) {
        let m = SymplecticMatrix::from_rows(rows).unwrap();
        let frozen: Vec<usize> = (0..frozen.len()).filter(|&q| frozen[q]).collect();
        let target = m.combine(&coeffs);
        let c = m.solve_combination(&target, &frozen).unwrap().expect("target is in the span");
        let got = m.combine(&c);
        for &q in &frozen {
            prop_assert_eq!(got.get(q), target.get(q));
        }
    }
}
