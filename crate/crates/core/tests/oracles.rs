mod common;

use std::ops::ControlFlow;

use common::{all_graphs, brute_embeds, brute_ex, brute_free, green_clique_cover_number};
use wturan::constructions::*;
use wturan::enumerate::{enumerate, iso_representatives, Mode};
use wturan::homomorphism::{find_hom_general, find_hom_rk_minus, verify_certificate};
use wturan::search::{compute_ex, empirical_threshold, verify_theorem, TheoremKind};
use wturan::{canonical_form, ColoredGraph};

/// All maps `V(g) -> 0..k` with `w(x, y) <= allowed(cx, cy)`.
fn brute_hom(g: &ColoredGraph, k: usize, allowed: impl Fn(usize, usize) -> u8) -> bool {
    let n = g.order();
    (0..k.pow(n as u32)).any(|mut code| {
        let mut c = vec![0; n];
        for slot in c.iter_mut() {
            *slot = code % k;
            code /= k;
        }
        (0..n).all(|x| {
            (x + 1..n).all(|y| g.weight(x, y) <= if c[x] == c[y] { 0 } else { allowed(c[x], c[y]) })
        })
    })
}

#[test]
fn rk_minus_matches_brute_force() {
    for n in 0..=4 {
        for g in all_graphs(n) {
            for r in 2..=4 {
                let want = brute_hom(
                    &g,
                    r,
                    |a, b| if a.min(b) == 0 && a.max(b) == 1 { 1 } else { 2 },
                );
                let got = find_hom_rk_minus(&g, r).unwrap();
                assert_eq!(got.exists(), Some(want), "{g:?} r={r}");
                if let Some(c) = got.certificate() {
                    assert!(verify_certificate(&g, c).unwrap());
                }
            }
        }
    }
}

#[test]
fn general_hom_matches_brute_force() {
    let targets: Vec<ColoredGraph> = (1..=3)
        .flat_map(|n| iso_representatives(n).unwrap())
        .collect();
    for n in 0..=4 {
        for g in all_graphs(n) {
            for t in &targets {
                let want = brute_hom(&g, t.order(), |a, b| t.weight(a, b));
                assert_eq!(
                    find_hom_general(&g, t).unwrap().exists(),
                    Some(want),
                    "{g:?} -> {t:?}"
                );
            }
        }
    }
}

#[test]
fn rk_minus_reduces_to_rk_cover() {
    // Without the special pair's constraint nothing distinguishes RK_r^- from RK_r,
    // so a cover by r-1 green cliques always suffices.
    for g in all_graphs(5) {
        if green_clique_cover_number(&g) < 3 {
            assert_eq!(
                find_hom_rk_minus(&g, 3).unwrap().exists(),
                Some(true),
                "{g:?}"
            );
        }
    }
}

#[test]
fn iso_enumeration_matches_canonical_dedup() {
    for n in 0..=5 {
        let mut raw = std::collections::BTreeSet::new();
        for g in all_graphs(n) {
            raw.insert(canonical_form(&g).unwrap());
        }
        let iso: Vec<_> = iso_representatives(n).unwrap();
        let forms: std::collections::BTreeSet<_> =
            iso.iter().map(|g| canonical_form(g).unwrap()).collect();
        assert_eq!(forms.len(), iso.len(), "duplicate classes at n={n}");
        assert_eq!(forms, raw, "n={n}");
    }
    let counts: Vec<usize> = (0..=5)
        .map(|n| iso_representatives(n).unwrap().len())
        .collect();
    assert_eq!(counts, vec![1, 1, 3, 10, 66, 792]);
}

#[test]
fn compute_ex_matches_brute_force() {
    let mut families: Vec<Vec<ColoredGraph>> = (3..=5).map(|t| gen_family(t).unwrap()).collect();
    families.push(vec![gen_rk(2).unwrap()]);
    families.push(vec![gen_bk(3).unwrap()]);
    families.push(vec![gen_rk_minus(3).unwrap()]);
    families.push(vec![ColoredGraph::from_pair_weights(3, &[2, 1, 0]).unwrap()]);
    families.push(vec![gen_bk(4).unwrap(), gen_rk(2).unwrap()]);
    for family in &families {
        for cap in 1..=2u8 {
            for n in 0..=4 {
                let got = compute_ex(n, family, cap).unwrap();
                let want = brute_ex(n, family, cap).map(i64::from);
                assert_eq!(got.value(), want, "n={n} cap={cap} family={family:?}");
                if let Some(w) = got.witness() {
                    assert!(brute_free(w, family));
                    assert!(w.pair_weights().all(|x| x <= cap));
                }
            }
        }
    }
}

#[test]
fn compute_ex_is_monotone() {
    let small = vec![gen_rk(3).unwrap()];
    let large = vec![gen_rk(3).unwrap(), gen_bk(4).unwrap()];
    let mut prev = 0;
    for n in 1..=6 {
        let a = compute_ex(n, &small, 2).unwrap().value().unwrap();
        let b = compute_ex(n, &large, 2).unwrap().value().unwrap();
        let c = compute_ex(n, &small, 1).unwrap().value().unwrap();
        assert!(a >= prev, "nondecreasing in n");
        assert!(b <= a, "nonincreasing as the family grows");
        assert!(c <= a, "nondecreasing in the cap");
        prev = a;
    }
}

#[test]
fn raw_and_iso_verdicts_agree() {
    for n in 1..=5 {
        for (kind, r) in [
            (TheoremKind::Odd, 2),
            (TheoremKind::Odd, 3),
            (TheoremKind::Even, 3),
        ] {
            let raw = verify_theorem(kind, r, n, Mode::Raw, 1).unwrap();
            let iso = verify_theorem(kind, r, n, Mode::IsomorphFree, 1).unwrap();
            assert_eq!(raw.is_verified(), iso.is_verified(), "{kind} r={r} n={n}");
            assert!(raw.is_verified());
        }
    }
}

#[test]
fn parallel_runs_match_sequential() {
    let one = verify_theorem(TheoremKind::Odd, 2, 5, Mode::Raw, 1).unwrap();
    let four = verify_theorem(TheoremKind::Odd, 2, 5, Mode::Raw, 4).unwrap();
    assert_eq!(one.outcome, four.outcome);
    assert_eq!(one.stats.enumerated, four.stats.enumerated);
    let a = empirical_threshold(5, 2, TheoremKind::Odd, Mode::Raw, 1).unwrap();
    let b = empirical_threshold(5, 2, TheoremKind::Odd, Mode::Raw, 3).unwrap();
    assert_eq!(a.outcome, b.outcome);
}

#[test]
fn empirical_thresholds() {
    let five = empirical_threshold(5, 2, TheoremKind::Odd, Mode::IsomorphFree, 1).unwrap();
    assert_eq!(five.value(), Some(4));
    let c5 = five.witness().unwrap();
    assert_eq!(c5.color_counts(), [5, 0, 5]);
    assert!(c5.degrees().iter().all(|&d| d == 4));

    let four = empirical_threshold(4, 2, TheoremKind::Odd, Mode::Raw, 1).unwrap();
    assert!(four.value().is_none_or(|v| v <= 3));

    let six = empirical_threshold(6, 3, TheoremKind::Even, Mode::IsomorphFree, 1).unwrap();
    assert!(six.value().is_none_or(|v| v <= 6), "{:?}", six.value());
}

#[test]
fn theorem_hypothesis_counts_agree_with_oracle() {
    // Hypothesis graphs at n=4 for the odd theorem, r=2, counted naively.
    let f5 = gen_family(5).unwrap();
    let naive = all_graphs(4)
        .filter(|g| 5 * i64::from(g.min_degree().unwrap()) > 4 * 4 && brute_free(g, &f5))
        .count() as u64;
    let rep = verify_theorem(TheoremKind::Odd, 2, 4, Mode::Raw, 1).unwrap();
    assert_eq!(rep.stats.passing_hypothesis, naive);
}

#[test]
fn family_members_embed_into_each_other_as_expected() {
    // G_{t,i} sits inside RK_t for every i; none of F_t fits into fewer vertices.
    for t in 2..=7 {
        let rk = gen_rk(t).unwrap();
        for m in gen_family(t).unwrap() {
            assert!(brute_embeds(&m, &rk));
        }
    }
    let mut count = 0;
    enumerate(3, Mode::IsomorphFree, |_| {
        count += 1;
        ControlFlow::Continue(())
    })
    .unwrap();
    assert_eq!(count, 10);
}
