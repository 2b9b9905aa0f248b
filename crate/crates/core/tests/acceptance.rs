//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (run with `--nocapture` to see them on success).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rmdec::circuit;
use rmdec::code::{self, params};
use rmdec::decode_chen::{self, ChenPlan};
use rmdec::decode_new::{self, DecoderPlan};
use rmdec::geometry::{CosetSystem, Spread};
use rmdec::gf2::{Subspace, Vec2m, Word};
use rmdec::harness::{self, CodewordPolicy, VerifyOptions, DEFAULT_BUDGET};
use rmdec::metrics::{self, FunctionKind};

/// Prints the per-criterion verdict even when the test panics.
struct Verdict(&'static str);

impl Drop for Verdict {
    fn drop(&mut self) {
        let verdict = if std::thread::panicking() {
            "FAIL"
        } else {
            "pass"
        };
        println!("{}: {verdict}", self.0);
    }
}

fn word(bits: &[u8]) -> Word {
    Word::from_bits(bits.iter().map(|&b| b == 1))
}

fn bools(bits: &[u8]) -> Vec<bool> {
    bits.iter().map(|&b| b == 1).collect()
}

/// Received word and codeword of the worked RM(2,5) example
/// (errors at positions 0, 1 and 31).
fn worked_example() -> (Word, Word) {
    let z = word(&[
        0, 0, 1, 1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1, 1,
        0, 1, 1,
    ]);
    let c = word(&[
        1, 1, 1, 1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1, 1,
        0, 1, 0,
    ]);
    (z, c)
}

/// The published RM(2,5) fixture: the six 2-subspaces U_l, their
/// complement spans W_l, and the representative order of the tables.
fn fixture_plan_rm25() -> DecoderPlan {
    let p = params(2, 5).unwrap();
    let us: [[u32; 4]; 6] = [
        [0, 1, 30, 31],
        [0, 2, 24, 26],
        [0, 3, 20, 23],
        [0, 4, 18, 22],
        [0, 5, 25, 28],
        [0, 6, 27, 29],
    ];
    let ws: [[u32; 8]; 6] = [
        [0, 2, 8, 10, 16, 18, 24, 26],
        [0, 3, 4, 7, 16, 19, 20, 23],
        [0, 4, 8, 12, 18, 22, 26, 30],
        [0, 2, 5, 7, 25, 27, 28, 30],
        [0, 6, 8, 14, 19, 21, 27, 29],
        [0, 1, 8, 9, 22, 30, 23, 31],
    ];
    let v = |bits: u32| Vec2m::new(bits, 5).unwrap();
    let span = |elems: &[u32]| {
        Subspace::from_span(&elems.iter().map(|&b| v(b)).collect::<Vec<_>>(), 5).unwrap()
    };
    let spread =
        Spread::from_subspaces(p, us.iter().map(|u| span(u)).collect()).unwrap();
    let complements = ws.iter().map(|w| span(w)).collect();
    let reps = ws
        .iter()
        .map(|w| w.iter().map(|&b| v(b)).collect())
        .collect();
    let cosets = CosetSystem::from_parts(&spread, complements, reps).unwrap();
    DecoderPlan::from_cosets(cosets)
}

#[test]
fn criterion_1_worked_example_reproduction() {
    let _v = Verdict("criterion 1 (worked-example reproduction)");
    let plan = fixture_plan_rm25();
    let (z, c) = worked_example();
    let trace = decode_new::decode(&plan, &z).unwrap();

    let expected_sigma: [[u8; 8]; 6] = [
        [0, 1, 1, 1, 1, 1, 1, 1],
        [0, 0, 1, 0, 1, 1, 1, 1],
        [0, 1, 0, 1, 1, 0, 1, 1],
        [0, 1, 0, 1, 1, 0, 1, 1],
        [0, 0, 1, 1, 1, 1, 1, 0],
        [1, 1, 0, 0, 0, 0, 0, 1],
    ];
    for (l, row) in expected_sigma.iter().enumerate() {
        assert_eq!(trace.sigma[l], bools(row), "sigma row {l}");
    }
    assert_eq!(trace.mu, bools(&[1, 1, 1, 1, 1, 0]));
    let expected_sigma_bar: [[u8; 8]; 6] = [
        [1, 0, 0, 0, 0, 0, 0, 0],
        [1, 1, 0, 1, 0, 0, 0, 0],
        [1, 0, 1, 0, 0, 1, 0, 0],
        [1, 0, 1, 0, 0, 1, 0, 0],
        [1, 1, 0, 0, 0, 0, 0, 1],
        [1, 1, 0, 0, 0, 0, 0, 1],
    ];
    for (l, row) in expected_sigma_bar.iter().enumerate() {
        assert_eq!(trace.sigma_bar[l], bools(row), "sigma-bar row {l}");
    }
    for (i, expected) in [(0, true), (1, true), (31, true), (2, false), (3, false), (30, false)] {
        assert_eq!(trace.eta.get(i), expected, "eta_{i}");
    }
    assert_eq!(trace.corrected, c);
}

#[test]
fn criterion_2_call_count_tables() {
    let _v = Verdict("criterion 2 (call-count table reproduction)");
    // (r, m, chen check-sums, new check-sums, chen maj(d-2), new maj(d),
    //  new maj(d-2), chen xor, new xor)
    let cells = [
        (2, 4, 64, 8, 48, 2, 16, 16, 24),
        (2, 5, 1_152, 48, 224, 6, 32, 32, 80),
        (3, 6, 2_304, 48, 448, 6, 64, 64, 112),
        (3, 7, 25_088, 224, 1_920, 14, 128, 128, 352),
    ];
    for (r, m, chen_cs, new_cs, chen_maj, new_maj_d, new_maj_small, chen_xor, new_xor) in cells {
        let p = params(r, m).unwrap();
        let d = p.delta as usize;
        let chen = metrics::chen_counts(&p);
        let new = metrics::new_counts(&p);
        let calls = |t: &metrics::CallTable, f: FunctionKind, inputs: usize| -> usize {
            t.rows
                .iter()
                .filter(|row| row.function == f && row.inputs == inputs)
                .map(|row| row.calls)
                .sum()
        };
        assert_eq!(calls(&chen, FunctionKind::CheckSum, 2 * p.n / d), chen_cs);
        assert_eq!(calls(&new, FunctionKind::CheckSum, p.n / d), new_cs);
        assert_eq!(calls(&chen, FunctionKind::MajorityVote, d - 2), chen_maj);
        assert_eq!(calls(&new, FunctionKind::MajorityVote, d), new_maj_d);
        assert_eq!(calls(&new, FunctionKind::MajorityVote, d - 2), new_maj_small);
        assert_eq!(chen.calls_of(FunctionKind::Xor), chen_xor);
        assert_eq!(new.calls_of(FunctionKind::Xor), new_xor);
    }
}

#[test]
fn criterion_3_correction_guarantee_exhaustive() {
    let _v = Verdict("criterion 3 (exhaustive correction guarantee)");
    // (a) all codewords x all patterns of weight <= t
    for (r, m) in [(1, 3), (1, 4), (2, 4)] {
        let p = params(r, m).unwrap();
        let report = harness::verify_exhaustive(
            &p,
            &VerifyOptions {
                max_weight: p.t,
                policy: CodewordPolicy::All,
                with_ml: false,
                budget: DEFAULT_BUDGET,
            },
        )
        .unwrap();
        assert_eq!(report.failures, 0, "RM({r},{m})");
        assert!(report.identity_checks_passed, "RM({r},{m})");
    }
    // (b) RM(2,5): 1,000 random codewords x all 5,489 patterns of weight <= 3
    let p = params(2, 5).unwrap();
    let report = harness::verify_exhaustive(
        &p,
        &VerifyOptions {
            max_weight: 3,
            policy: CodewordPolicy::Sample {
                count: 1_000,
                seed: 2_025,
            },
            with_ml: false,
            budget: DEFAULT_BUDGET,
        },
    )
    .unwrap();
    assert_eq!(report.trials, 1_000 * 5_489);
    assert_eq!(report.failures, 0);
    assert!(report.identity_checks_passed);
}

#[test]
fn criterion_4_oracle_equivalence() {
    let _v = Verdict("criterion 4 (oracle equivalence)");
    for (r, m) in [(1, 4), (2, 4)] {
        let p = params(r, m).unwrap();
        let report = harness::verify_exhaustive(
            &p,
            &VerifyOptions {
                max_weight: p.t,
                policy: CodewordPolicy::All,
                with_ml: true,
                budget: DEFAULT_BUDGET,
            },
        )
        .unwrap();
        assert_eq!(report.failures, 0, "RM({r},{m})");
        assert!(report.identity_checks_passed, "RM({r},{m})");
    }
}

#[test]
fn criterion_5_circuit_equivalence_and_depth() {
    let _v = Verdict("criterion 5 (circuit equivalence, depth, census)");
    let p = params(2, 5).unwrap();
    let new_plan = decode_new::build_plan(&p).unwrap();
    let chen_plan = decode_chen::build_chen_plan(&p).unwrap();
    let new_net = circuit::synthesize_new(&new_plan);
    let chen_net = circuit::synthesize_chen(&chen_plan);

    let mut rng = ChaCha12Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let z = Word::from_bits((0..p.n).map(|_| rng.gen::<bool>()));
        let via_circuit = circuit::evaluate(&new_net, &z).unwrap();
        let via_decoder = decode_new::decode(&new_plan, &z).unwrap().corrected;
        assert_eq!(via_circuit, via_decoder);
        let via_circuit = circuit::evaluate(&chen_net, &z).unwrap();
        let via_decoder = decode_chen::chen_decode(&chen_plan, &z).unwrap().corrected;
        assert_eq!(via_circuit, via_decoder);
    }

    let n = p.n;
    let d = p.delta as usize;
    let new_metrics = circuit::metrics(&new_net).unwrap();
    assert_eq!(new_metrics.depth, 6);
    // parity trees + normalizers + correction layer
    assert_eq!(
        new_metrics.xor2,
        (d - 2) * d * (n / d - 1) + d * (d - 2) + n
    );
    assert_eq!(new_metrics.maj.get(&d).copied(), Some(d - 2));
    assert_eq!(new_metrics.maj.get(&(d - 2)).copied(), Some(n));

    let chen_metrics = circuit::metrics(&chen_net).unwrap();
    assert_eq!(chen_metrics.depth, 6);
    assert_eq!(
        chen_metrics.xor2,
        n * (d - 2) * (d - 2) * (2 * n / d - 1) + n
    );
    assert_eq!(
        chen_metrics.maj.get(&(d - 2)).copied(),
        Some(n * (d - 2) + n)
    );
}

#[test]
fn criterion_6_theorem_invariants() {
    let _v = Verdict("criterion 6 (theorem invariants)");
    let p = params(2, 5).unwrap();
    let plan = decode_new::build_plan(&p).unwrap();
    let gen = code::generator_matrix(&p);
    let d = p.delta as usize;
    let mut rng = ChaCha12Rng::seed_from_u64(6);
    for _ in 0..100_000 {
        let msg = Word::from_bits((0..p.k as usize).map(|_| rng.gen::<bool>()));
        let c = code::encode(&gen, &msg).unwrap();
        let wt = rng.gen_range(0..=p.t);
        let mut e = Word::zeros(p.n);
        while e.weight() < wt {
            e.set(rng.gen_range(0..p.n), true);
        }
        let z = c.xor(&e).unwrap();
        let trace = decode_new::decode(&plan, &z).unwrap();
        // (i) no row has exactly delta/2 ones among its check-sums
        for row in &trace.sigma {
            assert_ne!(row.iter().filter(|&&b| b).count(), d / 2);
        }
        // (ii) normalized check-sums equal the true flat parities of e
        let witness = decode_new::flat_parity_witness(&plan, &e).unwrap();
        assert_eq!(trace.sigma_bar, witness);
        // (iii) the estimated error equals the injected one
        assert_eq!(trace.eta, e);
        // (iv) eta does not depend on the codeword
        let zero_trace = decode_new::decode(&plan, &e).unwrap();
        assert_eq!(zero_trace.eta, trace.eta);
    }
    // keep the chen plan import exercised: sanity decode on the fixture pair
    let chen_plan = ChenPlan::from_cosets(plan.cosets()).unwrap();
    let (z, c) = worked_example();
    assert_eq!(decode_chen::chen_decode(&chen_plan, &z).unwrap().corrected, c);
}
