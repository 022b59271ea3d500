//! Built-in pattern and knot corpus. Patterns are stored in unknotted-axis
//! position: the branch locus is the round axis and the pattern curve is the
//! annular word around it.

use crate::diagram::{AnnularMorseWord, AnnularSlice, BraidWord, Orient, Sign};

/// A named pattern with its slice-disk declaration for the pattern knot.
#[derive(Debug, Clone)]
pub struct CorpusPattern {
    pub name: &'static str,
    pub word: AnnularMorseWord,
    /// Whether the pattern applied to the unknot is declared slice (true for
    /// every built-in: they all close to the unknot).
    pub declared_slice_unknot: bool,
}

/// The (n,1)-cable pattern curve: n forward strands with one positive sweep
/// of crossings. Winding n, writhe n-1; the double of the sweep closes to
/// the (n,q) torus link in the q-fold cover.
pub fn cable_pattern(n: usize) -> AnnularMorseWord {
    assert!(n >= 1);
    let orients = vec![Orient::Forward; n];
    let slices = (1..n)
        .map(|i| AnnularSlice::Crossing {
            pos: i,
            sign: Sign::Positive,
        })
        .collect();
    AnnularMorseWord::new(orients, slices).expect("cable words are knots")
}

/// The positively-clasped doubling pattern: two antiparallel passes around
/// the axis locked through each other by a clasp. Winding 0, writhe -2; its
/// two lifts in the double cover link -2.
pub fn whitehead_pattern() -> AnnularMorseWord {
    AnnularMorseWord::new(
        vec![Orient::Forward, Orient::Backward],
        vec![
            AnnularSlice::Cup {
                pos: 2,
                left: Orient::Forward,
            },
            AnnularSlice::Crossing {
                pos: 3,
                sign: Sign::Negative,
            },
            AnnularSlice::Crossing {
                pos: 2,
                sign: Sign::Positive,
            },
            AnnularSlice::Cap { pos: 1 },
        ],
    )
    .expect("clasp word is a knot")
}

/// The (n,1) alternating cable for odd n: the n-strand braid with letters of
/// alternating sign. Closes to the unknot and induces a pseudo-homomorphism,
/// so its lift data must never trigger an obstruction.
pub fn alternating_cable_pattern(n: usize) -> AnnularMorseWord {
    assert!(n >= 1 && n % 2 == 1, "alternating cables need odd n");
    let orients = vec![Orient::Forward; n];
    let slices = (1..n)
        .map(|i| AnnularSlice::Crossing {
            pos: i,
            sign: if i % 2 == 1 {
                Sign::Positive
            } else {
                Sign::Negative
            },
        })
        .collect();
    AnnularMorseWord::new(orients, slices).expect("alternating cable words are knots")
}

/// The core of the solid torus: one forward strand, no events. Winding 1.
pub fn unknot_pattern() -> AnnularMorseWord {
    AnnularMorseWord::new(vec![Orient::Forward], vec![]).expect("core is a knot")
}

/// All built-in patterns, sorted by name.
pub fn builtin_patterns() -> Vec<CorpusPattern> {
    let mut out = vec![
        CorpusPattern {
            name: "whitehead",
            word: whitehead_pattern(),
            declared_slice_unknot: true,
        },
        CorpusPattern {
            name: "unknot-pattern",
            word: unknot_pattern(),
            declared_slice_unknot: true,
        },
        CorpusPattern {
            name: "alt-cable-3",
            word: alternating_cable_pattern(3),
            declared_slice_unknot: true,
        },
        CorpusPattern {
            name: "alt-cable-5",
            word: alternating_cable_pattern(5),
            declared_slice_unknot: true,
        },
    ];
    for n in 2..=6 {
        out.push(CorpusPattern {
            name: match n {
                2 => "cable-2-1",
                3 => "cable-3-1",
                4 => "cable-4-1",
                5 => "cable-5-1",
                _ => "cable-6-1",
            },
            word: cable_pattern(n),
            declared_slice_unknot: true,
        });
    }
    out.sort_by_key(|p| p.name);
    out
}

pub fn builtin_pattern(name: &str) -> Option<CorpusPattern> {
    builtin_patterns().into_iter().find(|p| p.name == name)
}

/// The (2, m) torus knot braid on two strands (m odd; negative m mirrors).
pub fn torus_2_braid(m: i64) -> BraidWord {
    let letters: Vec<i64> = (0..m.unsigned_abs())
        .map(|_| if m > 0 { 1 } else { -1 })
        .collect();
    BraidWord::from_signed(2, &letters).expect("valid two-strand word")
}

/// Braid-sum word on three strands for T(2,m) # T(2,m).
pub fn torus_2_sum_braid(m: i64) -> BraidWord {
    let mut letters: Vec<i64> = (0..m.unsigned_abs())
        .map(|_| if m > 0 { 1 } else { -1 })
        .collect();
    letters.extend((0..m.unsigned_abs()).map(|_| if m > 0 { 2 } else { -2 }));
    BraidWord::from_signed(3, &letters).expect("valid three-strand word")
}

/// Companion-knot braid words with knot closures, used by the invariance
/// suites.
pub fn knot_corpus() -> Vec<(&'static str, BraidWord)> {
    vec![
        ("unknot", torus_2_braid(1)),
        ("trefoil", torus_2_braid(3)),
        ("t25", torus_2_braid(5)),
        ("t27", torus_2_braid(7)),
        ("mirror-trefoil", torus_2_braid(-3)),
        (
            "figure-eight",
            BraidWord::from_signed(3, &[1, -2, 1, -2]).unwrap(),
        ),
        (
            "six-two",
            BraidWord::from_signed(3, &[-1, 2, -1, 2, 2, 2]).unwrap(),
        ),
        (
            "t34",
            BraidWord::from_signed(3, &[1, 2, 1, 2, 1, 2, 1, 2]).unwrap(),
        ),
        ("trefoil-sum", torus_2_sum_braid(3)),
        ("t25-sum", torus_2_sum_braid(5)),
    ]
}
