//! Exact correction-term arithmetic: lens spaces, +-1 surgeries on
//! alternating knots, connected sums, orientation reversal, the maximum
//! correction term, and the rational-homology-ball obstruction.
//!
//! Lens-space values come from the standard recursion
//! `d(p, q, i) = ((2i + 1 - p - q)^2 - pq) / (4pq) - d(q, p mod q, i mod q)`
//! with `d(1, 0, 0) = 0`. Surgery values on alternating knots use
//! `d(S^3_{+1}(K)) = 2 min(0, -ceil(-sigma/4))`; the -1 case follows by
//! orientation reversal and mirroring.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::exact::{Int, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DinvError {
    #[error("lens space parameters ({p}, {q}) are not coprime")]
    NotCoprime { p: u64, q: u64 },
    #[error("lens space requires p > q >= 1, got ({p}, {q})")]
    BadLensParameters { p: u64, q: u64 },
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Correction term of the lens space L(p, q) with Spin^c index i in the
/// recursion's integer-index convention.
pub fn d_lens(p: u64, q: u64, i: u64) -> Result<Rat, DinvError> {
    if p <= q || q < 1 {
        return Err(DinvError::BadLensParameters { p, q });
    }
    if Integer::gcd(&p, &q) != 1 {
        return Err(DinvError::NotCoprime { p, q });
    }
    Ok(d_lens_rec(p, q, i % p))
}

fn d_lens_rec(p: u64, q: u64, i: u64) -> Rat {
    if p == 1 {
        return Rat::zero(); // d(S^3)
    }
    let (pi, qi, ii) = (p as i64, q as i64, i as i64);
    let num = 2 * ii + 1 - pi - qi;
    let head = rat(num * num, 4 * pi * qi) - rat(1, 4);
    let (p2, q2, i2) = (q, p % q, i % q);
    if q == 1 {
        // Next step is L(1, 0) = S^3.
        head
    } else {
        head - d_lens_rec(p2, q2, i2)
    }
}

/// All p correction terms of L(p, q), indexed 0..p.
pub fn d_lens_spectrum(p: u64, q: u64) -> Result<Vec<Rat>, DinvError> {
    (0..p).map(|i| d_lens(p, q, i)).collect()
}

/// Correction term of +-1 surgery on an alternating knot with the given
/// signature. The caller asserts alternation.
pub fn d_surgery_pm1_alternating(sigma: i64, surgery_sign: i8) -> Rat {
    assert!(
        surgery_sign == 1 || surgery_sign == -1,
        "surgery coefficient must be +-1"
    );
    if surgery_sign == 1 {
        // 2 min(0, -ceil(-sigma/4))
        let c = Integer::div_ceil(&-sigma, &4);
        Rat::from_integer(Int::from(2 * 0.min(-c)))
    } else {
        // d(S^3_{-1}(K)) = -d(S^3_{+1}(mirror K)) and sigma(mirror) = -sigma.
        -d_surgery_pm1_alternating(-sigma, 1)
    }
}

/// One connected summand of a Spin^c-indexed manifold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ManifoldAtom {
    S3,
    /// L(p, q), orientation-reversed when `reversed`.
    Lens { p: u64, q: u64, reversed: bool },
    /// +-1 surgery on an alternating knot with the given signature,
    /// orientation-reversed when `reversed`.
    SurgeryPm1 {
        signature: i64,
        surgery_sign: i8,
        reversed: bool,
    },
}

impl ManifoldAtom {
    fn spectrum(&self) -> Result<Vec<Rat>, DinvError> {
        match *self {
            ManifoldAtom::S3 => Ok(vec![Rat::zero()]),
            ManifoldAtom::Lens { p, q, reversed } => {
                let spec = d_lens_spectrum(p, q)?;
                Ok(if reversed {
                    spec.into_iter().map(|d| -d).collect()
                } else {
                    spec
                })
            }
            ManifoldAtom::SurgeryPm1 {
                signature,
                surgery_sign,
                reversed,
            } => {
                let d = d_surgery_pm1_alternating(signature, surgery_sign);
                Ok(vec![if reversed { -d } else { d }])
            }
        }
    }

    fn label_count(&self) -> u64 {
        match *self {
            ManifoldAtom::Lens { p, .. } => p,
            _ => 1,
        }
    }
}

/// A formal connected sum of atoms; Spin^c labels are tuples indexing each
/// atom's label set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectedSum {
    pub atoms: Vec<ManifoldAtom>,
}

impl ConnectedSum {
    pub fn new(atoms: Vec<ManifoldAtom>) -> Self {
        assert!(!atoms.is_empty(), "atom list must be nonempty");
        ConnectedSum { atoms }
    }

    pub fn s3() -> Self {
        ConnectedSum {
            atoms: vec![ManifoldAtom::S3],
        }
    }

    pub fn label_count(&self) -> u64 {
        self.atoms.iter().map(|a| a.label_count()).product()
    }
}

/// The full correction-term spectrum: every Spin^c label (as a tuple of
/// per-atom indices) with its value. Additive over the connected sum.
pub fn d_spectrum(m: &ConnectedSum) -> Result<Vec<(Vec<u64>, Rat)>, DinvError> {
    let per_atom: Vec<Vec<Rat>> = m
        .atoms
        .iter()
        .map(|a| a.spectrum())
        .collect::<Result<_, _>>()?;
    let counts: Vec<u64> = per_atom.iter().map(|s| s.len() as u64).collect();
    let total: u64 = counts.iter().product();
    Ok(spectrum_labels(&per_atom, &counts, total))
}

#[cfg(feature = "parallel")]
fn spectrum_labels(per_atom: &[Vec<Rat>], counts: &[u64], total: u64) -> Vec<(Vec<u64>, Rat)> {
    (0..total)
        .into_par_iter()
        .map(|flat| spectrum_entry(per_atom, counts, flat))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn spectrum_labels(per_atom: &[Vec<Rat>], counts: &[u64], total: u64) -> Vec<(Vec<u64>, Rat)> {
    spectrum_labels_seq(per_atom, counts, total)
}

/// Sequential spectrum enumeration; the benchmark baseline and the fallback
/// when the parallel feature is disabled.
pub fn d_spectrum_seq(m: &ConnectedSum) -> Result<Vec<(Vec<u64>, Rat)>, DinvError> {
    let per_atom: Vec<Vec<Rat>> = m
        .atoms
        .iter()
        .map(|a| a.spectrum())
        .collect::<Result<_, _>>()?;
    let counts: Vec<u64> = per_atom.iter().map(|s| s.len() as u64).collect();
    let total: u64 = counts.iter().product();
    Ok(spectrum_labels_seq(&per_atom, &counts, total))
}

fn spectrum_labels_seq(per_atom: &[Vec<Rat>], counts: &[u64], total: u64) -> Vec<(Vec<u64>, Rat)> {
    (0..total)
        .map(|flat| spectrum_entry(per_atom, counts, flat))
        .collect()
}

fn spectrum_entry(per_atom: &[Vec<Rat>], counts: &[u64], flat: u64) -> (Vec<u64>, Rat) {
    let mut label = Vec::with_capacity(counts.len());
    let mut rem = flat;
    let mut value = Rat::zero();
    for (spec, &c) in per_atom.iter().zip(counts) {
        let idx = rem % c;
        rem /= c;
        label.push(idx);
        value += &spec[idx as usize];
    }
    (label, value)
}

/// Maximum correction term over all Spin^c labels.
pub fn d_max(m: &ConnectedSum) -> Result<Rat, DinvError> {
    Ok(d_spectrum(m)?
        .into_iter()
        .map(|(_, d)| d)
        .max()
        .expect("nonempty label set"))
}

/// Outcome of the rational-homology-ball test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Obstruction {
    /// The manifold cannot bound a rational homology ball.
    Obstructed,
    /// The test is silent.
    Inconclusive,
}

/// A manifold bounding a rational homology ball has nonnegative maximum
/// correction term; a negative maximum is an obstruction.
pub fn qhb_obstruction(m: &ConnectedSum) -> Result<Obstruction, DinvError> {
    Ok(if d_max(m)?.is_negative() {
        Obstruction::Obstructed
    } else {
        Obstruction::Inconclusive
    })
}

/// The bound `-2k + 2C` on the maximum correction term of the k-th test
/// manifold, with C symbolic or numeric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZkBound {
    pub k: i64,
    /// Numeric value of the constant C, when known.
    #[serde(with = "crate::exact::serde_rat_opt")]
    pub c: Option<Rat>,
    /// The bound -2k + 2C when C is numeric.
    #[serde(with = "crate::exact::serde_rat_opt")]
    pub value: Option<Rat>,
    /// Smallest k making the bound negative: floor(C) + 1 for numeric C.
    pub threshold: Option<i64>,
    /// Rendering of the bound, exact for numeric C, symbolic otherwise.
    pub expression: String,
}

/// Evaluates the bound `-2k + 2C`; for numeric C also reports the smallest k
/// with a strictly negative bound.
pub fn zk_bound(k: i64, c: Option<Rat>) -> ZkBound {
    assert!(k >= 0, "k must be nonnegative");
    match c {
        Some(c) => {
            let value = rat(-2 * k, 1) + &c * rat(2, 1);
            let threshold = c.floor().to_integer() + Int::one();
            let threshold = i64::try_from(&threshold).expect("threshold fits i64");
            ZkBound {
                k,
                expression: crate::exact::rat_to_string(&value),
                value: Some(value),
                threshold: Some(threshold),
                c: Some(c),
            }
        }
        None => ZkBound {
            k,
            c: None,
            value: None,
            threshold: None,
            expression: format!("-2*{k} + 2C (negative for k > C)"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        rat(n, d)
    }

    #[test]
    fn lens_base_case() {
        // L(1, 0) is the 3-sphere; exercised through p = q+1 recursions.
        assert_eq!(d_lens(2, 1, 0).unwrap(), r(1, 4));
        assert_eq!(d_lens(2, 1, 1).unwrap(), r(-1, 4));
    }

    #[test]
    fn lens_3_1_spectrum() {
        let spec = d_lens_spectrum(3, 1).unwrap();
        assert_eq!(spec, vec![r(1, 2), r(-1, 6), r(-1, 6)]);
    }

    #[test]
    fn lens_rejects_bad_parameters() {
        assert_eq!(
            d_lens(4, 2, 0).unwrap_err(),
            DinvError::NotCoprime { p: 4, q: 2 }
        );
        assert!(d_lens(1, 1, 0).is_err());
    }

    #[test]
    fn lens_index_normalizes() {
        assert_eq!(d_lens(3, 1, 4).unwrap(), d_lens(3, 1, 1).unwrap());
    }

    #[test]
    fn lens_max_of_p_1() {
        for p in 2..=12u64 {
            let max = d_lens_spectrum(p, 1).unwrap().into_iter().max().unwrap();
            assert_eq!(max, r(p as i64 - 1, 4), "L({p},1)");
        }
    }

    #[test]
    fn lens_conjugation_symmetry() {
        // d(L(p,q), i) = d(L(p,q), (p + q - 1 - i) mod p), pointwise.
        for p in 2..=20u64 {
            for q in 1..p {
                if Integer::gcd(&p, &q) != 1 {
                    continue;
                }
                let spec = d_lens_spectrum(p, q).unwrap();
                for i in 0..p {
                    let conj = (p + q - 1 - i) % p;
                    assert_eq!(
                        spec[i as usize], spec[conj as usize],
                        "L({p},{q}) index {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn lens_denominator_bound() {
        // 4pq * d(L(p,q), i) is an integer.
        for p in 2..=20u64 {
            for q in 1..p {
                if Integer::gcd(&p, &q) != 1 {
                    continue;
                }
                for (i, d) in d_lens_spectrum(p, q).unwrap().iter().enumerate() {
                    let scaled = d * r(4 * p as i64 * q as i64, 1);
                    assert!(scaled.is_integer(), "L({p},{q}) index {i}");
                }
            }
        }
    }

    #[test]
    fn surgery_values() {
        assert_eq!(d_surgery_pm1_alternating(0, 1), r(0, 1));
        assert_eq!(d_surgery_pm1_alternating(-2, 1), r(-2, 1));
        for k in 0..=10i64 {
            assert_eq!(d_surgery_pm1_alternating(-4 * k, 1), r(-2 * k, 1));
            assert_eq!(d_surgery_pm1_alternating(4 * k, 1), r(0, 1), "positive sigma");
        }
    }

    #[test]
    fn surgery_orientation_reversal() {
        for sigma in -13..=13i64 {
            let plus = d_surgery_pm1_alternating(sigma, 1);
            let minus = d_surgery_pm1_alternating(-sigma, -1);
            assert_eq!(plus + minus, Rat::zero(), "sigma {sigma}");
        }
        // Sign constraints: <= 0 for +1 surgery, >= 0 for -1 surgery.
        for sigma in -13..=13i64 {
            assert!(!d_surgery_pm1_alternating(sigma, 1).is_positive());
            assert!(!d_surgery_pm1_alternating(sigma, -1).is_negative());
        }
    }

    #[test]
    fn spectrum_of_s3() {
        let spec = d_spectrum(&ConnectedSum::s3()).unwrap();
        assert_eq!(spec, vec![(vec![0], Rat::zero())]);
    }

    #[test]
    fn spectrum_l21_minus_l21() {
        let m = ConnectedSum::new(vec![
            ManifoldAtom::Lens {
                p: 2,
                q: 1,
                reversed: false,
            },
            ManifoldAtom::Lens {
                p: 2,
                q: 1,
                reversed: true,
            },
        ]);
        let mut values: Vec<Rat> = d_spectrum(&m).unwrap().into_iter().map(|(_, d)| d).collect();
        values.sort();
        assert_eq!(values, vec![r(-1, 2), r(0, 1), r(0, 1), r(1, 2)]);
        assert!(values.contains(&Rat::zero()));
    }

    #[test]
    fn spectrum_single_lens_matches_d_lens() {
        let m = ConnectedSum::new(vec![ManifoldAtom::Lens {
            p: 3,
            q: 1,
            reversed: false,
        }]);
        let spec = d_spectrum(&m).unwrap();
        assert_eq!(spec.len(), 3);
        for (label, d) in spec {
            assert_eq!(d, d_lens(3, 1, label[0]).unwrap());
        }
    }

    #[test]
    fn sum_with_reverse_contains_zero() {
        let m = ConnectedSum::new(vec![
            ManifoldAtom::Lens {
                p: 5,
                q: 2,
                reversed: false,
            },
            ManifoldAtom::Lens {
                p: 5,
                q: 2,
                reversed: true,
            },
            ManifoldAtom::SurgeryPm1 {
                signature: -4,
                surgery_sign: 1,
                reversed: false,
            },
            ManifoldAtom::SurgeryPm1 {
                signature: -4,
                surgery_sign: 1,
                reversed: true,
            },
        ]);
        let values: Vec<Rat> = d_spectrum(&m).unwrap().into_iter().map(|(_, d)| d).collect();
        assert!(values.contains(&Rat::zero()));
    }

    #[test]
    fn parallel_and_sequential_spectra_agree() {
        let m = ConnectedSum::new(vec![
            ManifoldAtom::Lens {
                p: 7,
                q: 2,
                reversed: false,
            },
            ManifoldAtom::Lens {
                p: 5,
                q: 1,
                reversed: true,
            },
            ManifoldAtom::S3,
        ]);
        assert_eq!(d_spectrum(&m).unwrap(), d_spectrum_seq(&m).unwrap());
    }

    #[test]
    fn dmax_and_obstruction() {
        assert_eq!(d_max(&ConnectedSum::s3()).unwrap(), Rat::zero());
        assert_eq!(
            qhb_obstruction(&ConnectedSum::s3()).unwrap(),
            Obstruction::Inconclusive
        );

        let l21 = ConnectedSum::new(vec![ManifoldAtom::Lens {
            p: 2,
            q: 1,
            reversed: false,
        }]);
        assert_eq!(d_max(&l21).unwrap(), r(1, 4));
        assert_eq!(qhb_obstruction(&l21).unwrap(), Obstruction::Inconclusive);

        let zk3 = ConnectedSum::new(vec![
            ManifoldAtom::SurgeryPm1 {
                signature: -12,
                surgery_sign: 1,
                reversed: false,
            },
            ManifoldAtom::SurgeryPm1 {
                signature: -12,
                surgery_sign: 1,
                reversed: false,
            },
        ]);
        assert_eq!(d_max(&zk3).unwrap(), r(-12, 1));
        assert_eq!(qhb_obstruction(&zk3).unwrap(), Obstruction::Obstructed);
    }

    #[test]
    fn zk_bound_values() {
        let b = zk_bound(5, Some(r(3, 1)));
        assert_eq!(b.value, Some(r(-4, 1)));
        assert_eq!(b.threshold, Some(4));
        assert_eq!(b.expression, "-4");

        let b = zk_bound(0, Some(r(0, 1)));
        assert_eq!(b.value, Some(r(0, 1)));
        assert_eq!(b.threshold, Some(1));

        let b = zk_bound(2, None);
        assert!(b.value.is_none());
        assert!(b.expression.contains("2C"));

        // Non-integer C: threshold is ceil(C) = floor(C) + 1.
        let b = zk_bound(1, Some(r(5, 2)));
        assert_eq!(b.threshold, Some(3));
        assert_eq!(b.value, Some(r(3, 1)));
    }
}
