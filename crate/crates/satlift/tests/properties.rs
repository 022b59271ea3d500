//! Property tests over randomized inputs: the exact-arithmetic
//! postconditions, the twist calculus invariants, and the diagram sign
//! symmetries.

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use satlift::cobordism::{
    admissible, elementary_twist, framing_condition, reduce_to_hopf, FramedLinkingMatrix,
    TwistMove,
};
use satlift::diagram::{BraidWord, LinkPresentation};
use satlift::exact::{smith_normal_form, solve_integral, Int, IntMatrix};

fn small_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c).prop_map(move |vals| {
            let rows: Vec<Vec<i64>> = vals.chunks(c).map(|ch| ch.to_vec()).collect();
            IntMatrix::from_rows(&rows)
        })
    })
}

proptest! {
    #[test]
    fn snf_postconditions(m in small_matrix(5, 6)) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert_eq!(snf.u.determinant().abs(), Int::one());
        prop_assert_eq!(snf.v.determinant().abs(), Int::one());
        let k = m.rows().min(m.cols());
        for i in 0..k {
            prop_assert!(!snf.d.get(i, i).is_negative());
            if i + 1 < k && !snf.d.get(i, i).is_zero() {
                let next = snf.d.get(i + 1, i + 1);
                prop_assert!((next % snf.d.get(i, i)).is_zero() || next.is_zero());
            }
        }
        if m.is_square() {
            prop_assert_eq!(snf.d.determinant().abs(), m.determinant().abs());
        }
    }

    #[test]
    fn solve_integral_round_trip(
        m in small_matrix(4, 4),
        seed in proptest::collection::vec(-3i64..=3, 4)
    ) {
        let y: Vec<Int> = seed.iter().take(m.cols()).map(|&v| Int::from(v)).collect();
        if y.len() == m.cols() {
            let x = m.mul_vec(&y);
            let sol = solve_integral(&m, &x);
            prop_assert!(sol.is_some());
            prop_assert_eq!(m.mul_vec(&sol.unwrap()), x);
        }
    }

    #[test]
    fn twist_preserves_framing_condition(
        entries in proptest::collection::vec(0i64..=4, 15),
        i in 0usize..6,
        j in 0usize..6,
    ) {
        // Build an admissible 6x6 matrix from the random linking entries.
        let n = 6;
        let mut lk = IntMatrix::zero(n, n);
        let mut it = entries.iter();
        for a in 0..n {
            for b in a + 1..n {
                let v = Int::from(*it.next().unwrap());
                lk.set(a, b, v.clone());
                lk.set(b, a, v);
            }
        }
        let fr: Vec<Int> = (0..n)
            .map(|a| -(0..n).filter(|&b| b != a).map(|b| lk.get(a, b).clone()).sum::<Int>())
            .collect();
        let m = FramedLinkingMatrix::from_linking_and_framings(&lk, &fr).unwrap();
        prop_assert!(admissible(&m, false));
        if i != j {
            let mut t = m.clone();
            // Iterated twists may drive linkings negative; the framing
            // identity must survive regardless.
            for _ in 0..3 {
                t = elementary_twist(&t, TwistMove::new(i, j).unwrap()).unwrap();
                prop_assert!(framing_condition(&t), "framing condition must survive twists");
            }
        }
    }

    #[test]
    fn reduction_certificates_replay(
        entries in proptest::collection::vec(0i64..=5, 10),
    ) {
        let n = 5;
        let mut lk = IntMatrix::zero(n, n);
        let mut it = entries.iter();
        let mut any = false;
        for a in 0..n {
            for b in a + 1..n {
                let v = *it.next().unwrap();
                any |= v > 0;
                lk.set(a, b, Int::from(v));
                lk.set(b, a, Int::from(v));
            }
        }
        prop_assume!(any);
        let fr: Vec<Int> = (0..n)
            .map(|a| -(0..n).filter(|&b| b != a).map(|b| lk.get(a, b).clone()).sum::<Int>())
            .collect();
        let m = FramedLinkingMatrix::from_linking_and_framings(&lk, &fr).unwrap();
        let mut pair = None;
        'outer: for a in 0..n {
            for b in a + 1..n {
                if m.linking(a, b) >= &Int::one() {
                    pair = Some((a, b));
                    break 'outer;
                }
            }
        }
        let (i0, j0) = pair.unwrap();
        let cert = reduce_to_hopf(&m, i0, j0).unwrap();
        prop_assert!(cert.replay().is_ok());
        let total: Int = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
            .map(|(a, b)| m.linking(a, b).clone())
            .sum();
        prop_assert_eq!(Int::from(cert.two_handle_count as i64), total - Int::one());
    }

    #[test]
    fn braid_mirror_antisymmetry(
        strands in 2usize..5,
        letters in proptest::collection::vec((-3i64..=3).prop_filter("nonzero", |v| *v != 0), 0..10),
    ) {
        let letters: Vec<i64> = letters
            .into_iter()
            .map(|l| {
                let idx = (l.unsigned_abs() as usize - 1) % (strands - 1) + 1;
                idx as i64 * l.signum()
            })
            .collect();
        let w = BraidWord::from_signed(strands, &letters).unwrap();
        let p = LinkPresentation::from_braid(&w).unwrap();
        let pm = LinkPresentation::from_braid(&w.mirror()).unwrap();
        prop_assert_eq!(pm.component_count(), p.component_count());
        prop_assert_eq!(
            pm.linking_matrix().unwrap(),
            p.linking_matrix().unwrap().neg()
        );
        prop_assert_eq!(pm.writhe(None).unwrap(), -p.writhe(None).unwrap());
    }
}
