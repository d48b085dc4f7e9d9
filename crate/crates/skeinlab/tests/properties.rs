use proptest::prelude::*;

use skeinlab::diagram::Diagram;
use skeinlab::RationalFunc;

fn braid() -> impl Strategy<Value = (usize, Vec<i32>)> {
    (2usize..5).prop_flat_map(|m| {
        let letters = prop::collection::vec((1..m as i32, any::<bool>()), 1..7)
            .prop_map(|v| v.into_iter().map(|(i, s)| if s { i } else { -i }).collect::<Vec<_>>());
        (Just(m), letters)
    })
}

/// Closure of a braid in the annulus around the braid axis, when the word
/// uses every generator.
fn annular(m: usize, w: &[i32]) -> Option<Diagram> {
    let d = Diagram::from_braid(m, w).ok()?;
    if !d.connected() {
        return None;
    }
    for f0 in 0..d.num_faces() {
        for f in 0..d.num_faces() {
            if let Ok(e) = d.with_holes(1, vec![f0, f]) {
                let ws = e.winding_numbers_g1().ok()?;
                if ws.iter().sum::<i64>() == m as i64 && ws.iter().all(|&x| x > 0) {
                    return Some(e);
                }
            }
        }
    }
    None
}

fn lasso(m: usize) -> Vec<i32> {
    let mut v: Vec<i32> = (1..m as i32).collect();
    v.extend((1..m as i32).rev());
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reidemeister_two_in_annulus((m, w) in braid(), at in 0usize..7, i in 1i32..4) {
        let i = 1 + (i - 1) % (m as i32 - 1);
        let at = at % (w.len() + 1);
        let mut w2 = w.clone();
        w2.splice(at..at, [i, -i]);
        if let (Some(a), Some(b)) = (annular(m, &w), annular(m, &w2)) {
            prop_assert_eq!(a.bracket().unwrap(), b.bracket().unwrap());
        }
    }

    #[test]
    fn reidemeister_three_in_annulus((m, w) in braid(), sign in prop::bool::ANY) {
        prop_assume!(m >= 3);
        let s = if sign { 1 } else { -1 };
        let mut a = w.clone();
        a.extend([s, 2 * s, s]);
        let mut b = w.clone();
        b.extend([2 * s, s, 2 * s]);
        if let (Some(x), Some(y)) = (annular(m, &a), annular(m, &b)) {
            prop_assert_eq!(x.bracket().unwrap(), y.bracket().unwrap());
        }
    }

    #[test]
    fn encircling_is_a_framing_change((m, w) in braid()) {
        let mut w2 = w.clone();
        w2.extend(lasso(m));
        if let (Some(a), Some(b)) = (annular(m, &w), annular(m, &w2)) {
            prop_assert_eq!(b.bracket().unwrap(), &a.bracket().unwrap() * &RationalFunc::monomial(1, -6));
        }
    }

    #[test]
    fn odd_strand_closures_vanish((m, w) in braid()) {
        prop_assume!(m % 2 == 1);
        if let Some(d) = annular(m, &w) {
            prop_assert!(!d.is_z2_trivial());
            prop_assert!(d.bracket().unwrap().is_zero());
        }
    }

    #[test]
    fn mirror_in_annulus((m, w) in braid()) {
        if let Some(d) = annular(m, &w) {
            prop_assert_eq!(d.mirror().bracket().unwrap(), d.bracket().unwrap().mirror());
        }
    }

    #[test]
    fn json_round_trip((m, w) in braid()) {
        if let Some(d) = annular(m, &w) {
            let s = serde_json::to_string(&d.to_json()).unwrap();
            let e = Diagram::from_json_str(&s).unwrap();
            prop_assert_eq!(e.bracket().unwrap(), d.bracket().unwrap());
            prop_assert_eq!(e.z2_class(), d.z2_class());
        }
    }
}
