//! Acceptance suite: one test per gate, each printing a pass line with its
//! runtime. Run with `cargo test --test acceptance -- --nocapture` to see
//! the lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use stackfilter::{
    a_profile, balanced_eval, balanced_profile, build_ced, downward_closure, enumerate_zeros,
    joint_profile, parse_balanced_dnf, parse_dnf, rank_selection, restrict_to_zeros,
    threshold_probs, transfer, BalancedPbf, Bitstring, Cell, ExponentTuple, Implicant,
    JointDistribution, MixedMonomial, MultiRow, Oracle, Pbf, Window,
};

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"))
}

fn pass(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("acceptance {name}: PASS ({elapsed:.2?})");
    assert!(
        elapsed < budget,
        "{name} exceeded its time budget: {elapsed:.2?} > {budget:.2?}"
    );
}

fn row_of(window: Window, text: &str) -> MultiRow {
    let cells: Vec<Cell> = text
        .split_whitespace()
        .map(|tok| match tok {
            "0" => Cell::Zero,
            "1" => Cell::One,
            "2" => Cell::Free,
            t => Cell::Bubble(t.strip_prefix('n').expect("cell token").parse().unwrap()),
        })
        .collect();
    MultiRow::from_cells(window, &cells).unwrap()
}

/// Order-free row identity: fixed cells plus the set of bubble masks.
fn signature(row: &MultiRow) -> (u64, u64, BTreeSet<u64>) {
    (
        row.zeros_mask(),
        row.ones_mask(),
        row.bubble_masks().iter().copied().collect(),
    )
}

fn binom_i128(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Independent expansion of `sum coeff * p^a * (1-p)^e` into coefficients
/// in `p` (test-local route, separate from the library's).
fn expand_mixed(terms: &[(i128, usize, usize)]) -> Vec<i128> {
    let deg = terms.iter().map(|(_, a, e)| a + e).max().unwrap_or(0);
    let mut out = vec![0i128; deg + 1];
    for &(c, a, e) in terms {
        for k in 0..=e {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out[a + k] += c * sign * binom_i128(e, k);
        }
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn expanded_as_i128(poly: &stackfilter::TransferPolynomial) -> Vec<i128> {
    poly.expanded()
        .iter()
        .map(|c| c.to_i128().expect("coefficient fits i128"))
        .collect()
}

/// Closed-form transfer of the cascade `U_n L_n` as mixed terms:
/// `1 - q^(n+1) - n p q^(n+1) - p q^(2n+2) - (n-1)(n+2)/2 p^2 q^(2n+2)`.
fn unln_closed_form(n: usize) -> Vec<(i128, usize, usize)> {
    vec![
        (1, 0, 0),
        (-1, 0, n + 1),
        (-(n as i128), 1, n + 1),
        (-1, 1, 2 * n + 2),
        (-((n as i128 - 1) * (n as i128 + 2) / 2), 2, 2 * n + 2),
    ]
}

fn random_pbf(rng: &mut ChaCha8Rng, w_min: usize, w_max: usize) -> Pbf {
    let w = rng.gen_range(w_min..=w_max);
    let lo = rng.gen_range(-3..=3);
    let window = Window::new(lo, lo + w as i32 - 1).unwrap();
    let h = rng.gen_range(1..=(2 * w).max(2));
    let implicants = (0..h)
        .map(|_| {
            let size = rng.gen_range(1..=w);
            let mut positions: Vec<i32> = window.positions().collect();
            positions.shuffle(rng);
            Implicant::new(positions.into_iter().take(size))
        })
        .collect();
    Pbf::new(window, implicants).unwrap().absorb()
}

fn random_balanced(rng: &mut ChaCha8Rng, w_max: usize) -> BalancedPbf {
    let w = rng.gen_range(1..=w_max);
    let x_window = Window::new(0, w as i32 - 1).unwrap();
    let combined = Window::new(0, 2 * w as i32 - 1).unwrap();
    let h = rng.gen_range(1..=2 * w);
    let implicants = (0..h)
        .map(|_| {
            let size = rng.gen_range(1..=(2 * w).min(4));
            let mut positions: Vec<i32> = combined.positions().collect();
            positions.shuffle(rng);
            Implicant::new(positions.into_iter().take(size))
        })
        .collect();
    let pbf = Pbf::new(combined, implicants).unwrap().absorb();
    BalancedPbf::new(x_window, pbf).unwrap()
}

#[test]
fn acceptance_01_zero_count() {
    let started = Instant::now();
    let b = parse_dnf(&fixture("b1.dnf")).unwrap();
    let rows = enumerate_zeros(&b);
    assert_eq!(rows.member_count(), &BigUint::from(376u32));
    assert_eq!(rows.row_count(), 5);
    pass("01 zero count N=376, R=5", started, Duration::from_secs(1));
}

#[test]
fn acceptance_02_golden_transfer() {
    let started = Instant::now();
    let b = parse_dnf(&fixture("b1.dnf")).unwrap();
    let phi = transfer(&enumerate_zeros(&b));

    // Mixed form: p^2q^2 + pq - pq^3 + p^3q^5 + p^2q^4 - p^2q^6 + p - pq^4.
    let reference = [
        (1, 2, 2),
        (1, 1, 1),
        (-1, 1, 3),
        (1, 3, 5),
        (1, 2, 4),
        (-1, 2, 6),
        (1, 1, 0),
        (-1, 1, 4),
    ];
    let mut expect: Vec<MixedMonomial> = reference
        .iter()
        .map(|&(c, p, q)| MixedMonomial::new(c, p, q))
        .collect();
    expect.sort_by_key(|t| (t.p_exp, t.q_exp));
    assert_eq!(phi.collected_mixed(), expect);

    // Expanded form equals the independent expansion of the same terms.
    let mixed_i128: Vec<(i128, usize, usize)> = reference
        .iter()
        .map(|&(c, p, q)| (c, p as usize, q as usize))
        .collect();
    assert_eq!(expanded_as_i128(&phi), expand_mixed(&mixed_i128));

    // And the closed form of the two-stage cascade at n = 2.
    assert_eq!(expanded_as_i128(&phi), expand_mixed(&unln_closed_form(2)));

    pass(
        "02 golden transfer polynomial",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn acceptance_03_cascade_closed_form() {
    let started = Instant::now();
    for n in 1..=3usize {
        let b = build_ced(&format!("U{n}L{n}")).unwrap();
        assert_eq!(b.width(), 4 * n + 1, "U{n}L{n} window");
        let phi = transfer(&enumerate_zeros(&b));
        assert_eq!(
            expanded_as_i128(&phi),
            expand_mixed(&unln_closed_form(n)),
            "U{n}L{n} transfer"
        );
    }
    pass(
        "03 cascade closed form n=1..3",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn acceptance_04_cover_semantics() {
    let started = Instant::now();
    let b = parse_dnf(&fixture("b1.dnf")).unwrap();
    let w = b.window();
    let rows = enumerate_zeros(&b);

    // Disjoint cover of exactly the brute-force zeros.
    let oracle = Oracle::default();
    let zeros = oracle.brute_zeros(&b).unwrap();
    assert_eq!(zeros.len(), 376);
    for m in 0..512u64 {
        let hits = rows.rows().iter().filter(|r| r.contains_mask(m)).count();
        let expect = !b.eval_bool(&Bitstring::from_mask(w, m)).unwrap();
        assert_eq!(hits, usize::from(expect), "mask {m:b}");
    }

    // The five reference rows, up to row order and bubble labeling.
    let reference = [
        "2 2 0 1 1 0 2 2 2",
        "2 2 2 0 1 n1 n1 2 2",
        "0 1 1 0 0 1 1 1 2",
        "2 1 1 n1 0 0 1 1 n1",
        "2 n1 n1 2 0 2 n1 n1 2",
    ];
    let expect: BTreeSet<_> = reference.iter().map(|t| signature(&row_of(w, t))).collect();
    let got: BTreeSet<_> = rows.rows().iter().map(signature).collect();
    assert_eq!(got, expect);

    // Cardinality breakdown 32 + 96 + 2 + 6 + 240 = 376.
    let mut cards: Vec<u64> = rows
        .rows()
        .iter()
        .map(|r| r.cardinality().to_u64().unwrap())
        .collect();
    cards.sort_unstable();
    assert_eq!(cards, vec![2, 6, 32, 96, 240]);

    pass(
        "04 cover equals the five reference rows",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn acceptance_05_profile_contribution() {
    let started = Instant::now();
    let w = Window::new(-4, 4).unwrap();
    let r = row_of(w, "2 n1 n1 2 0 2 n1 n1 2");

    // Independent tally over the row's members.
    let mut direct = vec![0u64; 10];
    for m in r.members() {
        direct[m.weight() as usize] += 1;
    }
    assert_eq!(direct.iter().sum::<u64>(), 240);
    assert_eq!(r.cardinality(), BigUint::from(240u32));

    // The counting polynomial agrees, entry by entry. At weight 5 the
    // value is C(8,5) - C(4,1) = 52 (the count below 49 circulating for
    // this row does not sum to the row's 240 members).
    let expect: Vec<BigUint> = [1u64, 8, 28, 56, 69, 52, 22, 4, 0, 0]
        .iter()
        .map(|&x| BigUint::from(x))
        .collect();
    let direct: Vec<BigUint> = direct.into_iter().map(BigUint::from).collect();
    assert_eq!(direct, expect);
    assert_eq!(r.weight_profile(), expect);

    pass(
        "05 row weight-profile contribution",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn acceptance_06_rank_selection() {
    let started = Instant::now();
    let majority = parse_dnf(&fixture("majority3.dnf")).unwrap();
    let rv = rank_selection(&a_profile(&enumerate_zeros(&majority))).unwrap();
    assert_eq!(
        rv.probs(),
        &[BigRational::zero(), BigRational::one(), BigRational::zero()]
    );

    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..100 {
        let pbf = random_pbf(&mut rng, 1, 12);
        if pbf.is_constant_one() {
            continue;
        }
        let rv = rank_selection(&a_profile(&enumerate_zeros(&pbf))).unwrap();
        let mut sum = BigRational::zero();
        for p in rv.probs() {
            assert!(!p.is_negative(), "negative rank probability in {pbf}");
            sum += p;
        }
        assert_eq!(sum, BigRational::one(), "probabilities of {pbf}");
    }
    pass(
        "06 rank selection sanity (100 instances)",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn acceptance_07_oracle_sweep() {
    let started = Instant::now();
    let oracle = Oracle::default();
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for round in 0..200 {
        let pbf = random_pbf(&mut rng, 3, 12);
        let rows = enumerate_zeros(&pbf);
        let zeros = oracle.brute_zeros(&pbf).unwrap();
        assert_eq!(
            rows.member_count(),
            &BigUint::from(zeros.len()),
            "round {round}: {pbf}"
        );
        for m in 0..(1u64 << pbf.width()) {
            let hits = rows.rows().iter().filter(|r| r.contains_mask(m)).count();
            assert!(hits <= 1, "round {round}: overlap at {m:b} in {pbf}");
            let is_zero = !pbf
                .eval_bool(&Bitstring::from_mask(pbf.window(), m))
                .unwrap();
            assert_eq!(hits == 1, is_zero, "round {round}: mask {m:b} of {pbf}");
        }
        let (brute_poly, brute_profile) = oracle.brute_transfer_profile(&pbf).unwrap();
        assert_eq!(
            transfer(&rows).expanded(),
            brute_poly.expanded(),
            "round {round}"
        );
        assert_eq!(
            a_profile(&rows).counts(),
            brute_profile.counts(),
            "round {round}"
        );
    }
    pass(
        "07 oracle sweep (200 instances)",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn acceptance_08_joint() {
    let started = Instant::now();
    let oracle = Oracle::default();

    // Random pairs against brute force.
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    for round in 0..50 {
        let w = rng.gen_range(1..=9usize);
        let lo = rng.gen_range(-2..=2);
        let window = Window::new(lo, lo + w as i32 - 1).unwrap();
        let pick = |rng: &mut ChaCha8Rng| {
            let h = rng.gen_range(1..=w.max(2));
            let imps = (0..h)
                .map(|_| {
                    let size = rng.gen_range(1..=w);
                    let mut positions: Vec<i32> = window.positions().collect();
                    positions.shuffle(rng);
                    Implicant::new(positions.into_iter().take(size))
                })
                .collect();
            Pbf::new(window, imps).unwrap().absorb()
        };
        let b1 = pick(&mut rng);
        let b2 = pick(&mut rng);
        let fast = joint_profile(&b1, &b2).unwrap();
        let brute = oracle.brute_joint(&b1, &b2).unwrap();
        assert_eq!(fast, brute, "round {round}: {b1} vs {b2}");
    }

    // Diagonal reduction: equal filters at p = pi collapse to the
    // transfer polynomial, exactly, on a 17-point grid.
    let b = parse_dnf(&fixture("b1.dnf")).unwrap();
    let jd = JointDistribution::new(&b, &b).unwrap();
    let phi = transfer(&enumerate_zeros(&b));
    for k in 0..=16 {
        let p = BigRational::new(BigInt::from(k), BigInt::from(16));
        assert_eq!(
            jd.eval_exact(&p, &p).unwrap(),
            phi.eval_exact(&p),
            "grid point {k}/16"
        );
    }

    // The worked 11-wide restriction example.
    let w11 = Window::new(1, 11).unwrap();
    let r = row_of(w11, "n1 n1 n1 2 2 0 n2 n2 n2 1 1");
    let r0 = downward_closure(&r);
    assert_eq!(r0, row_of(w11, "n1 n1 n1 2 2 0 n2 n2 n2 2 2"));
    let b2 = parse_dnf(&fixture("b2_window11.dnf")).unwrap();
    let restricted = restrict_to_zeros(r0.clone(), &b2).unwrap();
    let expect: BTreeSet<_> = [
        "2 2 0 2 2 0 n1 n1 n1 2 2",
        "n1 n1 1 2 2 0 2 2 0 2 2",
        "n1 n1 1 2 2 0 n2 n2 1 0 2",
    ]
    .iter()
    .map(|t| signature(&row_of(w11, t)))
    .collect();
    let got: BTreeSet<_> = restricted.rows().iter().map(signature).collect();
    assert_eq!(got, expect);

    // Stratified counts below every member x of r match brute force.
    for x in r.members() {
        let mut strata = vec![BigUint::zero(); 12];
        for rho in restricted.rows() {
            if let Some(profile) = rho.weight_profile_below(&x).unwrap() {
                for (j, c) in profile.into_iter().enumerate() {
                    strata[j] += c;
                }
            }
        }
        let mut brute = vec![0u64; 12];
        let mut y = x.ones();
        loop {
            if !b2.eval_bool(&Bitstring::from_mask(w11, y)).unwrap() && r0.contains_mask(y) {
                brute[y.count_ones() as usize] += 1;
            }
            if y == 0 {
                break;
            }
            y = (y - 1) & x.ones();
        }
        let brute: Vec<BigUint> = brute.into_iter().map(BigUint::from).collect();
        assert_eq!(strata, brute, "x = {x}");
    }

    // The two printed sub-rows stratify binomially: the all-free one
    // contributes C(5,j) at offset 0 and the one-fixed one C(4,j) at
    // offset 1, i.e. to columns j and j+1 of matrix row i = 4.
    let sigma = row_of(w11, "0 2 2 2 0 0 0 2 0 0 2");
    let tau = row_of(w11, "0 2 2 2 0 0 1 0 0 0 2");
    let c5: Vec<BigUint> = (0..=11).map(|j| stackfilter::binomial_big(5, j)).collect();
    let mut c4_shift: Vec<BigUint> = vec![BigUint::zero()];
    c4_shift.extend((0..=10).map(|j| stackfilter::binomial_big(4, j)));
    assert_eq!(sigma.weight_profile(), c5);
    assert_eq!(tau.weight_profile(), c4_shift);
    let x_printed = row_of(w11, "0 1 1 1 0 0 1 1 0 1 1");
    assert_eq!(
        (11 - x_printed.ones_mask().count_ones()) as usize,
        4,
        "the printed x pairs with matrix row i = 4"
    );

    pass("08 joint distribution", started, Duration::from_secs(60));
}

#[test]
fn acceptance_09_balanced() {
    let started = Instant::now();
    let oracle = Oracle::default();

    // Random functions against brute force.
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    for round in 0..50 {
        let b = random_balanced(&mut rng, 7);
        let fast = balanced_profile(&b);
        let brute = oracle.brute_balanced(&b).unwrap();
        assert_eq!(fast, brute, "round {round}");
    }

    // The worked 9+9 example row, and its sub-row fixed at
    // x* = (1,1,1,1,1,0,0,0,0).
    let w18 = Window::new(0, 17).unwrap();
    let r = row_of(w18, "n1 n2 n3 1 n4 n4 0 2 n3   n1 n1 n3 n2 n2 n1 n1 n2 n2");
    let full = stackfilter::BalancedProfile::from_rows(9, std::slice::from_ref(&r)).unwrap();
    let mut brute = std::collections::BTreeMap::new();
    for m in r.members() {
        let x = m.ones() & 0x1ff;
        let y = m.ones() >> 9;
        let t = ExponentTuple {
            pp: (x & y).count_ones(),
            pm: (x & !y).count_ones(),
            mp: (!x & y & 0x1ff).count_ones(),
            mm: (!x & !y & 0x1ff).count_ones(),
        };
        *brute.entry(t).or_insert(0u64) += 1;
    }
    assert_eq!(full.counts().len(), brute.len());
    for (t, c) in &brute {
        assert_eq!(full.counts()[t], BigUint::from(*c), "tuple {t}");
    }

    // Fixing the x block to x* leaves (n1 n1 2 n2 n2 n1 n1 n2 n2) on the
    // y side; the tuple (2, 3, 3, 1) then counts 36 choices, the brute
    // tally over that sub-row's members.
    let r_xstar = row_of(w18, "1 1 1 1 1 0 0 0 0   n1 n1 2 n2 n2 n1 n1 n2 n2");
    let fixed = stackfilter::BalancedProfile::from_rows(9, std::slice::from_ref(&r_xstar)).unwrap();
    let key = ExponentTuple {
        pp: 2,
        pm: 3,
        mp: 3,
        mm: 1,
    };
    let mut direct = 0u64;
    for m in r_xstar.members() {
        let y = m.ones() >> 9;
        if (y & 0x1f).count_ones() == 2 && (y >> 5).count_ones() == 3 {
            direct += 1;
        }
    }
    assert_eq!(direct, 36);
    assert_eq!(fixed.counts()[&key], BigUint::from(36u32));

    // A function ignoring its y block reduces to the plain transfer, in
    // both sign cases, on an exact grid.
    let xonly = parse_balanced_dnf("window -1..1\nx-1 x0\nx0 x1\n").unwrap();
    let profile = balanced_profile(&xonly);
    let phi = transfer(&enumerate_zeros(&xonly.x_projection().unwrap()));
    for num_t in 0..=8 {
        for num_neg in 0..=8 {
            let f_t = BigRational::new(BigInt::from(num_t), BigInt::from(8));
            let f_neg = BigRational::new(BigInt::from(num_neg), BigInt::from(8));
            if num_t <= num_neg {
                let q = threshold_probs(&f_t, &f_neg, true).unwrap();
                assert_eq!(balanced_eval(&profile, &q), phi.eval_exact(&f_t));
            }
            if num_neg <= num_t {
                let q = threshold_probs(&f_t, &f_neg, false).unwrap();
                assert_eq!(balanced_eval(&profile, &q), phi.eval_exact(&f_t));
            }
        }
    }

    // Along a symmetric input distribution (F(-t) = 1 - F(t)), the value
    // is a CDF in t: nondecreasing as the threshold sweeps upward.
    let mixed = parse_balanced_dnf(&fixture("balanced_pair.dnf")).unwrap();
    let profile = balanced_profile(&mixed);
    let mut prev = BigRational::zero();
    for k in 0..=16 {
        let g = BigRational::new(BigInt::from(k), BigInt::from(16));
        let mirror = BigRational::one() - &g;
        let nonpos = 2 * k <= 16;
        let q = if nonpos {
            threshold_probs(&g, &mirror, true).unwrap()
        } else {
            threshold_probs(&g, &mirror, false).unwrap()
        };
        let v = balanced_eval(&profile, &q);
        assert!(v >= prev, "value dropped at grid point {k}");
        prev = v;
    }

    pass("09 balanced distribution", started, Duration::from_secs(60));
}

#[test]
fn acceptance_10_idempotence() {
    let started = Instant::now();
    let g = build_ced("U1L1").unwrap();
    let twice = g.compose(&g).unwrap();
    assert_eq!(twice.width(), 9);
    let w9 = twice.window();
    let w5 = g.window();
    for m in 0..512u64 {
        let x = Bitstring::from_mask(w9, m);
        let center: Vec<bool> = w5.positions().map(|p| x.bit(p).unwrap()).collect();
        let embedded = g
            .eval_bool(&Bitstring::from_bits(w5, &center).unwrap())
            .unwrap();
        assert_eq!(twice.eval_bool(&x).unwrap(), embedded, "mask {m:b}");
    }
    pass("10 idempotence of U1L1", started, Duration::from_secs(5));
}

#[test]
fn acceptance_11_scale_c2() {
    let started = Instant::now();
    let c2 = build_ced("L2U2L1U1").unwrap();
    assert_eq!(c2.width(), 13);
    let phi = transfer(&enumerate_zeros(&c2));
    let (brute_poly, _) = Oracle::default().brute_transfer_profile(&c2).unwrap();
    assert_eq!(phi.expanded(), brute_poly.expanded());
    pass(
        "11 scale: 13-wide cascade transfer",
        started,
        Duration::from_secs(10),
    );
}

/// Stretch: the eight-stage cascade over 41 positions. Its zero set has
/// 657 billion members, covered by a couple thousand rows.
#[test]
fn acceptance_11_stretch_c4() {
    let started = Instant::now();
    let c4 = build_ced("L4U4L3U3L2U2L1U1").unwrap();
    assert_eq!(c4.width(), 41);
    assert_eq!(c4.implicant_count(), 826);
    println!(
        "    eight-stage cascade: window {}, {} clauses, built in {:.2?}",
        c4.window(),
        c4.implicant_count(),
        started.elapsed()
    );
    let rows = enumerate_zeros(&c4);
    let phi = transfer(&rows);
    assert_eq!(phi.degree(), 36);
    // Largest coefficient magnitude, at p^28. Cross-checked against the
    // zero count: phi(1/2) * 2^41 = N holds exactly.
    assert_eq!(phi.expanded()[28], BigInt::from(2544));
    assert!(phi.expanded().iter().all(|c| c.abs() <= BigInt::from(2544)));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let n_from_phi = phi.eval_exact(&half) * BigRational::from(BigInt::from(2i128.pow(41)));
    assert_eq!(
        n_from_phi,
        BigRational::from(BigInt::from(657_005_073_792i64))
    );
    assert_eq!(rows.member_count(), &BigUint::from(657_005_073_792u64));
    assert_eq!(rows.row_count(), 2201);
    pass(
        "11-stretch eight-stage cascade transfer",
        started,
        Duration::from_secs(120),
    );
}
