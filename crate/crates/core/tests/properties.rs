use std::cmp::Ordering;

use num_bigint::BigInt;
use proptest::prelude::*;

use thetalift_core::corpus::enumerate_corpus;
use thetalift_core::dsl::{parse, render};
use thetalift_core::grothendieck::{big_m_star, coassociative, m_star, RingElement};
use thetalift_core::lifts::{lift, round_trip, LiftCase, LiftResult, Tower};
use thetalift_core::model::sort_block;
use thetalift_core::occurrence::{first_occurrence, nonzero_levels};
use thetalift_core::rearrange::{
    invert, ladder_transform, len_k, longest_ladder, reduce_chain, run_algorithm, ReduceCase,
};
use thetalift_core::segment::{compare_lex, contains, contragredient, linked};
use thetalift_core::{AlphaBlock, CoreError, Form, GLFactor, HalfInt, Pair, Segment, StandardModule, TemperedToken};
use thetalift_oracles as oracle;

fn seg_in(alpha2: i64, max2: i64, max_len: i64) -> impl Strategy<Value = Segment> {
    (-max2..=max2, 0..=max_len).prop_filter_map("class", move |(a2, len)| {
        let b2 = a2 + 2 * len;
        ((a2 - alpha2).rem_euclid(2) == 0 && b2 <= max2).then(|| Segment::d(a2, b2))
    })
}

fn positive_seg(alpha2: i64) -> impl Strategy<Value = Segment> {
    seg_in(alpha2, 8, 4).prop_filter("a + b > 0", |s| s.exponent_sum().doubled() > 0)
}

fn pair() -> impl Strategy<Value = Pair> {
    prop_oneof![Just(Pair::SpO), Just(Pair::MpO)]
}

fn alpha2(p: Pair) -> i64 {
    p.alpha().doubled()
}

fn sorted_block(p: Pair, segs: &[Segment]) -> AlphaBlock {
    let b = AlphaBlock::from_segments(p.alpha(), segs).unwrap();
    sort_block(&b).unwrap()
}

/// A positive sorted block with a `k` taken among its ends.
fn block_and_k() -> impl Strategy<Value = (Pair, AlphaBlock, HalfInt)> {
    pair()
        .prop_flat_map(|p| (Just(p), prop::collection::vec(positive_seg(alpha2(p)), 1..=5), any::<prop::sample::Index>()))
        .prop_map(|(p, segs, i)| {
            let b = sorted_block(p, &segs);
            let k = segs[i.index(segs.len())].b();
            (p, b, k)
        })
}

fn tempered(kappa: i64) -> impl Strategy<Value = TemperedToken> {
    (-1i64..=5, 1u64..=2).prop_filter_map("parity", move |(l, c)| {
        if (l - kappa).rem_euclid(2) != 0 {
            None
        } else if l > 0 {
            Some(TemperedToken::atom_with("tau", l, &[(l, c)]))
        } else {
            Some(TemperedToken::atom(l))
        }
    })
}

fn module() -> impl Strategy<Value = StandardModule> {
    pair()
        .prop_flat_map(|p| (Just(p), prop::collection::vec(positive_seg(alpha2(p)), 0..=4), tempered(p.kappa())))
        .prop_map(|(p, segs, t)| StandardModule::simple(p, &segs, t).unwrap().sorted().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn lex_order_is_total(a2 in 0i64..=1, xs in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let all: Vec<Segment> = (-12..=12)
            .flat_map(|x| (x..=12).step_by(2).map(move |y| Segment::d(x, y)))
            .filter(|s| s.class().doubled() == a2)
            .collect();
        let [s, t, u] = [0, 1, 2].map(|i| all[xs[i].index(all.len())]);
        let st = compare_lex(&s, &t).unwrap();
        prop_assert_eq!(st, compare_lex(&t, &s).unwrap().reverse());
        prop_assert_eq!(st == Ordering::Equal, s == t);
        let tu = compare_lex(&t, &u).unwrap();
        if st != Ordering::Greater && tu != Ordering::Greater {
            prop_assert_ne!(compare_lex(&s, &u).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn contragredient_is_an_involution(s in seg_in(1, 12, 6)) {
        prop_assert_eq!(contragredient(&contragredient(&s)), s);
        prop_assert_eq!(contragredient(&s).len(), s.len());
    }

    #[test]
    fn linked_segments_are_not_nested(s in seg_in(0, 8, 4), t in seg_in(0, 8, 4)) {
        if linked(&s, &t) {
            prop_assert!(!contains(&s, &t) && !contains(&t, &s));
        }
    }

    #[test]
    fn sorting_is_idempotent(p in pair(), n in 0usize..6, seed in prop::collection::vec(any::<prop::sample::Index>(), 6)) {
        let kinds: Vec<Segment> = enumerate_corpus(1, HalfInt::int(3), p.alpha()).unwrap()
            .into_iter().skip(1).map(|b| b.segments().unwrap()[0]).collect();
        let segs: Vec<Segment> = seed[..n].iter().map(|i| kinds[i.index(kinds.len())]).collect();
        let once = sort_block(&AlphaBlock::from_segments(p.alpha(), &segs).unwrap()).unwrap();
        prop_assert!(once.is_sorted());
        prop_assert_eq!(sort_block(&once).unwrap(), once.clone());
        let mut before = segs.clone();
        let mut after = once.segments().unwrap();
        before.sort();
        after.sort();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn wrong_class_is_rejected(p in pair(), s in seg_in(1, 8, 3), l in -1i64..=1) {
        let wrong = if p == Pair::SpO { s } else { Segment::d(s.a().doubled() + 1, s.b().doubled() + 1) };
        let text = format!("pair={p}; D[{},{}] ; tau(l={})", wrong.a(), wrong.b(), p.kappa() - 2 + 2 * l.max(0));
        match parse(&text) {
            Err(CoreError::Validation { invariant, .. }) => prop_assert_eq!(invariant, "alpha-kappa"),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn algorithm_agrees_with_ladders((_p, b, k) in block_and_k()) {
        let (r, _) = run_algorithm(&b, k, false).unwrap();
        prop_assert_eq!(&ladder_transform(&b, k).unwrap(), &r);
        let ladder = longest_ladder(&b, k).unwrap();
        prop_assert!(ladder.is_ladder());
        prop_assert_eq!(len_k(&b, k).unwrap(), r.iterations);
        prop_assert_eq!(ladder.len(), r.iterations);
        let segs: Vec<oracle::Seg> = b.segments().unwrap().iter().map(|s| (s.a().doubled(), s.b().doubled())).collect();
        prop_assert_eq!(oracle::longest_ladder(&segs, k.doubled()).len(), r.iterations);
        prop_assert!(r.check_shape().is_ok());
        if r.iterations > 0 {
            prop_assert_eq!(invert(&r).unwrap(), b);
        }
    }

    #[test]
    fn reduction_terminates_by_degree((_p, b, k) in block_and_k()) {
        let (r, _) = run_algorithm(&b, k, false).unwrap();
        let chain = reduce_chain(&r).unwrap();
        let mut degree = r.degree();
        for (i, step) in chain.iter().enumerate() {
            if i + 1 == chain.len() {
                prop_assert_eq!(step.case, ReduceCase::Base);
            } else {
                prop_assert_ne!(step.case, ReduceCase::Base);
                prop_assert!(step.residual.degree() < degree);
                prop_assert!(step.residual.check_shape().is_ok());
                degree = step.residual.degree();
            }
        }
    }

    #[test]
    fn occurrence_matches_exhaustive_search(m in module()) {
        let r = first_occurrence(&m).unwrap();
        let (l, even) = match &m.tempered {
            TemperedToken::Atom { l_down, mult, .. } => (*l_down, mult.get(l_down).is_some_and(|c| c % 2 == 0)),
            _ => unreachable!(),
        };
        let mut seq: Vec<oracle::Seg> = m.block.segments().unwrap().iter().map(|s| (s.a().doubled(), s.b().doubled())).collect();
        seq.reverse();
        prop_assert_eq!(r.f, oracle::occurrence_f(&seq, l, even));
        prop_assert_eq!(r.l_down + r.l_up, -2);
        prop_assert!(r.witness.is_ladder());
        if l == -1 {
            prop_assert_eq!(r.f, 0);
        }
    }

    #[test]
    fn adding_a_segment_never_lowers_f(m in module(), extra in positive_seg(0), other in positive_seg(1)) {
        let f = first_occurrence(&m).unwrap().f;
        let s = if m.pair == Pair::SpO { extra } else { other };
        let mut segs = m.block.segments().unwrap();
        segs.push(s);
        let bigger = StandardModule::simple(m.pair, &segs, m.tempered.clone()).unwrap();
        prop_assert!(first_occurrence(&bigger).unwrap().f >= f);
    }

    #[test]
    fn dimensions_add_up(m in module(), n in 0i64..20, eps in prop_oneof![Just(1i64), Just(-1i64)]) {
        let mut m = m;
        m.n = Some(n);
        m.epsilon = eps;
        let r = first_occurrence(&m).unwrap();
        prop_assert_eq!(r.m_down.unwrap() + r.m_up.unwrap(), 2 * n + 2 * eps + 2);
    }

    #[test]
    fn lifts_are_valid_and_zero_exactly_off_the_level_set(m in module(), up in any::<bool>(), i in 0i64..12) {
        let tower = if up { Tower::Up } else { Tower::Down };
        let set = nonzero_levels(&m, tower).unwrap();
        let level = set.max + 4 - 2 * i;
        let r = lift(&m, level, tower).unwrap();
        prop_assert_eq!(r == LiftResult::Zero, !set.contains(level));
        if let LiftResult::Module { module, case, .. } = &r {
            prop_assert!(module.validate().is_ok());
            prop_assert!(module.block.is_sorted());
            prop_assert_eq!(module.side, m.side.flip());
            if *case == LiftCase::HighRank {
                // The character chain up to the absolute value of the level.
                let l = -level;
                let mut want = m.block.segments().unwrap();
                want.extend(((3 - m.kappa())..=(l - 1)).step_by(2).map(|x2| Segment::d(x2, x2)));
                want.sort();
                let mut got = module.block.segments().unwrap();
                got.sort();
                prop_assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn negative_levels_lift_back(m in module(), up in any::<bool>(), i in 0i64..5) {
        let tower = if up { Tower::Up } else { Tower::Down };
        let level = if up {
            first_occurrence(&m).unwrap().l_up - 2 * i
        } else {
            -m.kappa() - 2 * i
        };
        prop_assert!(round_trip(&m, level, tower).unwrap());
    }

    #[test]
    fn canonical_text_round_trips(m in module(), n in prop::option::of(0i64..30), eps in prop_oneof![Just(1i64), Just(-1i64)]) {
        let mut m = m;
        m.n = n;
        m.epsilon = eps;
        let text = render(&m);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(render(&back), text);
    }

    #[test]
    fn lifted_modules_render_and_parse(m in module(), level in 0i64..8) {
        let level = level * 2 + m.kappa() - 2 * 4;
        if let Ok(LiftResult::Module { module, .. }) = lift(&m, level, Tower::Down) {
            prop_assert_eq!(parse(&render(&module)).unwrap(), module);
        }
    }

    #[test]
    fn m_star_is_coassociative_and_graded(s in seg_in(1, 8, 4), zeta in any::<bool>()) {
        let form = if zeta { Form::Zeta } else { Form::Delta };
        prop_assert!(coassociative(s, form));
        let small = m_star(s, form);
        prop_assert_eq!(small.total(), BigInt::from(s.len() + 1));
        let w = s.len() + 1;
        prop_assert_eq!(big_m_star(s, form).total(), BigInt::from(w * (w + 1) / 2));
        for (l, r, _) in small.terms() {
            prop_assert_eq!(l.degree() + r.word.degree(), s.len());
        }
    }

    #[test]
    fn products_keep_degree(segs in prop::collection::vec((seg_in(0, 6, 2), any::<bool>()), 1..=3)) {
        let deg: i64 = segs.iter().map(|(s, _)| s.len()).sum();
        let prod = segs.iter().fold(RingElement::one(), |acc, (s, z)| {
            acc.mult(&big_m_star(*s, if *z { Form::Zeta } else { Form::Delta }))
        });
        for (l, r, _) in prod.terms() {
            prop_assert_eq!(l.degree() + r.word.degree(), deg);
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    for alpha in [HalfInt::ZERO, HalfInt::HALF] {
        let a = enumerate_corpus(3, HalfInt::int(2), alpha).unwrap();
        let b = enumerate_corpus(3, HalfInt::int(2), alpha).unwrap();
        assert_eq!(a, b);
        let n = oracle::corpus_size(3, 4, alpha.doubled());
        assert_eq!(a.len() as u128, n);
    }
}

#[test]
fn factor_display_uses_characters_for_points() {
    assert_eq!(GLFactor::Delta(Segment::i(3, 3)).to_string(), "|.|^3");
}
