//! Closed-form predictions for compressed rings of type 2: h-vectors,
//! initial degree, the f-vector, Betti shapes, Golod thresholds and the
//! generic multiplication class.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::apolarity::check_type2_range;
use crate::error::{Error, Result};
use crate::graded_ring::{binomial, hq};
use crate::koszul::{BettiTable, TorClass};

fn ceil_half(n: usize) -> usize {
    n.div_ceil(2)
}

/// `√n <= k`, decided in integers.
fn sqrt_le(n: i64, k: i64) -> bool {
    k >= 0 && n <= k * k
}

/// Compressed Gorenstein h-vector of socle degree `s` in `e` variables, and its initial degree.
pub fn gorenstein_profile(e: u32, s: usize) -> (Vec<u64>, usize) {
    let h: Vec<u64> = (0..=s as i64)
        .map(|i| hq(e, i).min(hq(e, s as i64 - i)))
        .collect();
    let t = if s <= 1 { s + 1 } else { ceil_half(s + 1) };
    (h, t)
}

/// Compressed h-vector for socle polynomial `χ^s1 + χ^s` (three variables).
pub fn type2_h(s1: usize, s: usize) -> Vec<u64> {
    (0..=s as i64)
        .map(|i| hq(3, i).min(hq(3, s1 as i64 - i) + hq(3, s as i64 - i)))
        .collect()
}

/// First degree where `h` falls below `h_Q`.
pub fn initial_degree(h: &[u64]) -> usize {
    (0..h.len())
        .find(|&i| h[i] != hq(3, i as i64))
        .unwrap_or(h.len())
}

/// `a = s1 - ⌈(s+1)/2⌉ + 1`.
pub fn a_value(s1: usize, s: usize) -> i64 {
    s1 as i64 - ceil_half(s + 1) as i64 + 1
}

/// `(f0, f1, f2) = (C(a+1,2), a(a+2), C(a+2,2))`.
pub fn f_vector(a: u64) -> (u64, u64, u64) {
    (binomial(a + 1, 2), a * (a + 2), binomial(a + 2, 2))
}

pub fn golod_by_degree(s: usize, t: usize) -> bool {
    ceil_half(s + 1) < t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "parity", rename_all = "lowercase")]
pub enum Thresholds {
    Odd { n: f64 },
    Even { n1: f64, n2: f64, n: f64 },
}

pub fn thresholds(s: usize) -> Result<Thresholds> {
    if s < 4 {
        return Err(Error::Range(format!("thresholds need s >= 4, got {s}")));
    }
    let sf = s as f64;
    Ok(if s % 2 == 1 {
        Thresholds::Odd {
            n: (sf - 2.0 + (4.0 * sf + 13.0).sqrt()) / 2.0,
        }
    } else {
        Thresholds::Even {
            n1: (3.0 * sf - 5.0 + (24.0 * sf + 97.0).sqrt()) / 6.0,
            n2: (sf - 1.0 + (8.0 * sf + 25.0).sqrt()) / 2.0,
            n: sf / 2.0 - 1.0 + (sf + 4.0).sqrt(),
        }
    })
}

/// `N(s) <= s1`, with `N(s) = (s - 2 + √(4s+13))/2` for odd `s` and
/// `s/2 - 1 + √(s+4)` for even `s`.
pub fn reaches_n(s1: usize, s: usize) -> bool {
    let (s1, s) = (s1 as i64, s as i64);
    if s % 2 == 1 {
        sqrt_le(4 * s + 13, 2 * s1 - s + 2)
    } else {
        sqrt_le(s + 4, s1 - s / 2 + 1)
    }
}

/// `N1(s) <= s1` for even `s`.
pub fn reaches_n1(s1: usize, s: usize) -> bool {
    let (s1, s) = (s1 as i64, s as i64);
    sqrt_le(24 * s + 97, 6 * s1 - 3 * s + 5)
}

/// `N2(s) <= s1` for even `s`.
pub fn reaches_n2(s1: usize, s: usize) -> bool {
    let (s1, s) = (s1 as i64, s as i64);
    sqrt_le(8 * s + 25, 2 * s1 - s + 1)
}

/// Coefficients of `(1-χ)^3 H(χ)`.
pub fn b_polynomial(h: &[u64]) -> Vec<i64> {
    let cube = [1i64, -3, 3, -1];
    let mut b = vec![0i64; h.len() + 3];
    for (i, &v) in h.iter().enumerate() {
        for (k, &c) in cube.iter().enumerate() {
            b[i + k] += c * v as i64;
        }
    }
    b
}

/// Fewest generators compatible with the B-polynomial of `h`:
/// `max(0, -b(t)) + max(0, -b(t+1))`.
pub fn generic_m(h: &[u64]) -> usize {
    let b = b_polynomial(h);
    let t = initial_degree(h);
    let at = |j: usize| b.get(j).copied().unwrap_or(0).min(0).unsigned_abs() as usize;
    at(t) + at(t + 1)
}

pub fn generic_class(s1: usize, s: usize) -> Result<(TorClass, usize)> {
    check_type2_range(s1, s)?;
    let m = generic_m(&type2_h(s1, s));
    let class = match s {
        2 => TorClass::H(3, 2),
        3 if s1 == 2 => TorClass::B,
        3 => TorClass::golod(),
        _ if reaches_n(s1, s) => TorClass::golod(),
        _ if s % 2 == 1 => {
            let a = s1 - (s - 1) / 2;
            TorClass::G((s + 3 - a * (a + 1)) / 2)
        }
        _ if s1 == s / 2 + 1 => TorClass::G(s - 1),
        _ => {
            let a = s1 - s / 2;
            TorClass::G(s + 3 - a * (a + 2))
        }
    };
    Ok((class, m))
}

/// Classes permitted by the structure theorem for compressed type-2
/// intersections with socle `χ^s1 + χ^s` and `m` generators.
pub fn allowed_classes(s1: usize, s: usize, m: usize) -> Result<BTreeSet<TorClass>> {
    check_type2_range(s1, s)?;
    let t = initial_degree(&type2_h(s1, s));
    let mut out = BTreeSet::new();
    let (si, mi) = (s as i64, m as i64);
    if s % 2 == 1 {
        let half = ceil_half(s);
        if t > half {
            out.insert(TorClass::golod());
        } else if s >= 5 {
            let a = (s1 - (s - 1) / 2) as i64;
            let r = mi - a * (a + 2);
            if s1 != s && r >= 1 && 2 * r >= si + 3 - a * (a + 1) {
                out.insert(TorClass::G(r as usize));
            }
        } else if s == 3 && s1 == 2 {
            match m {
                5 => {
                    out.insert(TorClass::B);
                }
                6 => {
                    out.insert(TorClass::G(3));
                }
                _ => {}
            }
        }
        return Ok(out);
    }
    let half = s / 2 + 1;
    if t > half {
        out.insert(TorClass::golod());
    } else if s1 == s {
        match s {
            2 if m == 4 => {
                out.insert(TorClass::H(3, 2));
            }
            2 if m == 5 => {
                out.insert(TorClass::B);
            }
            4 => {
                if (5..=8).contains(&m) {
                    out.insert(TorClass::golod());
                }
                if (6..=7).contains(&m) {
                    out.extend((1..=m - 5).map(TorClass::G));
                }
                if m == 7 {
                    out.insert(TorClass::H(0, 2));
                }
            }
            6 => {
                if (9..=11).contains(&m) {
                    out.insert(TorClass::golod());
                }
                if m == 10 {
                    out.insert(TorClass::G(1));
                }
            }
            8 if m == 14 => {
                out.insert(TorClass::golod());
            }
            _ => {}
        }
    } else if s1 == half {
        if m > 3 {
            out.insert(TorClass::G(m - 3));
        }
    } else {
        let a = (s1 - s / 2) as i64;
        out.insert(TorClass::golod());
        let lo = (mi - a * (a + 2)).max(1);
        let hi = mi - a * (a + 3) / 2;
        if 2 * (mi - a * (a + 2)) >= 2 * (si + 3) - 3 * a * a - 5 * a {
            out.extend((lo..=hi).map(|r| TorClass::G(r as usize)));
        }
    }
    Ok(out)
}

/// Graded Betti numbers of a compressed type-2 ring with `⌈(s+1)/2⌉ = t`,
/// for the free parameter `beta`.
pub fn betti_shape(s1: usize, s: usize, beta: u64) -> Result<BettiTable> {
    check_type2_range(s1, s)?;
    let t = initial_degree(&type2_h(s1, s));
    if golod_by_degree(s, t) {
        return Err(Error::ShapeNotApplicable(format!(
            "(s1, s) = ({s1}, {s}) has t = {t} > ⌈(s+1)/2⌉"
        )));
    }
    let a = a_value(s1, s) as u64;
    let (f0, f1, f2) = f_vector(a);
    let tt = t as u64;
    let mut entries = vec![((0, 0), 1)];
    if s % 2 == 1 {
        entries.extend([
            ((1, t), tt + 1 - f0),
            ((1, t + 1), f1 + beta),
            ((2, t + 1), beta),
            ((2, t + 2), tt + 1 + f2),
        ]);
    } else {
        let floor = f1.saturating_sub(2 * tt + 1);
        if beta < floor {
            return Err(Error::Range(format!(
                "beta = {beta} is below the bound {floor} for (s1, s) = ({s1}, {s})"
            )));
        }
        entries.extend([
            ((1, t), 2 * tt + 1 - f0),
            ((1, t + 1), beta),
            ((2, t + 1), 2 * tt + 1 + beta - f1),
            ((2, t + 2), f2),
        ]);
    }
    let mut merged = std::collections::BTreeMap::new();
    for (k, v) in entries
        .into_iter()
        .chain([((3, s1 + 3), 1), ((3, s + 3), 1)])
    {
        *merged.entry(k).or_insert(0) += v;
    }
    Ok(BettiTable::from_entries(merged))
}

/// Smallest `beta` allowed in `betti_shape`.
pub fn minimal_beta(s1: usize, s: usize) -> u64 {
    if s % 2 == 1 {
        return 0;
    }
    let t = ceil_half(s + 1) as u64;
    let a = a_value(s1, s).max(0) as u64;
    f_vector(a).1.saturating_sub(2 * t + 1)
}

/// Smallest `beta` in `gorenstein_betti_shape`: the generator count of a
/// codimension-3 Gorenstein ideal is odd, so `beta` is odd when `t + 1` is even.
pub fn gorenstein_minimal_beta(s: usize) -> u64 {
    let t = ceil_half(s + 1);
    u64::from(s % 2 == 1 && t % 2 == 1)
}

/// Betti numbers of a compressed Gorenstein ring of socle degree `s >= 2`.
pub fn gorenstein_betti_shape(s: usize, beta: u64) -> BettiTable {
    let t = ceil_half(s + 1);
    let tt = t as u64;
    let mut entries = vec![((0, 0), 1), ((3, s + 3), 1)];
    if s.is_multiple_of(2) {
        entries.extend([((1, t), 2 * tt + 1), ((2, t + 1), 2 * tt + 1)]);
    } else {
        entries.extend([
            ((1, t), tt + 1),
            ((1, t + 1), beta),
            ((2, t + 1), beta),
            ((2, t + 2), tt + 1),
        ]);
    }
    BettiTable::from_entries(entries)
}

/// Pairs for which the socle degrees alone pin down `m` and the class.
pub fn special_m(s1: usize, s: usize) -> Option<(usize, TorClass)> {
    match (s1, s) {
        (3, 3) => return Some((8, TorClass::golod())),
        (7, 9) => return Some((15, TorClass::golod())),
        (6, 7) => return Some((12, TorClass::golod())),
        _ => {}
    }
    for k in 2usize.. {
        let so = k * (k + 1) - 1;
        if so > s {
            break;
        }
        if so == s && s1 == k * (k + 3) / 2 - 1 {
            return Some((1 + k * (k + 2), TorClass::G(1)));
        }
    }
    for k in 4usize.. {
        let se = (k * (k + 1) / 2).saturating_sub(2);
        if se > s {
            break;
        }
        if se == s && s.is_multiple_of(2) && (k * (k + 5)) % 4 == 0 && s1 == k * (k + 5) / 4 - 1 {
            return Some((k * (k + 3) / 2, TorClass::golod()));
        }
    }
    None
}

/// Numerical statements for general embedding dimension `e`, kept for
/// documentation and cross-checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralEBounds {
    pub e: u32,
    pub s: usize,
    pub s1: usize,
    /// `⌈(s+1)/2⌉`, the initial degree of a compressed Gorenstein ring of socle degree `s`.
    pub t2: usize,
    /// `h_Q(t2) - h_Q(s - t2)` computed directly.
    pub ht_difference: u64,
    /// The same difference from the binomial formula.
    pub ht_formula: u64,
    /// Whether `⌈(s+1)/2⌉ = t` is predicted for the intersection.
    pub t2_equals_t: bool,
    /// Socle degree from which compressed level rings are Golod.
    pub level_golod_bound: f64,
    pub level_golod: bool,
    /// Largest `s - s1` forcing Golodness (three variables).
    pub ta_bound: f64,
    pub ta_golod: bool,
}

pub fn general_e_bounds(e: u32, s: usize, s1: usize) -> Result<GeneralEBounds> {
    if e < 3 {
        return Err(Error::Range(format!("embedding dimension {e} < 3")));
    }
    let t2 = ceil_half(s + 1);
    let (si, s1i, t2i, ei) = (s as i64, s1 as i64, t2 as i64, e as i64);
    let even = s.is_multiple_of(2);
    let ht_difference = hq(e, t2i) - hq(e, si - t2i);
    let ht_formula = hq(e - 1, t2i) + if even { hq(e - 1, t2i - 1) } else { 0 };
    let t2_equals_t = hq(e, s1i - t2i) < ht_formula;
    let base = 2 * ei - 3;
    let extra = 8 * (ei - 1) * (ei - 1) + 1;
    let (level_golod_bound, level_golod) = if even {
        (
            base as f64 + (extra as f64).sqrt(),
            sqrt_le(extra, si - base),
        )
    } else {
        (base as f64, si >= base)
    };
    let (ta_bound, ta_golod) = if even {
        (
            (si as f64 + 1.0 - (8.0 * si as f64 + 25.0).sqrt()) / 2.0,
            reaches_n2(s1, s),
        )
    } else {
        (
            (si as f64 + 2.0 - (4.0 * si as f64 + 13.0).sqrt()) / 2.0,
            sqrt_le(4 * si + 13, 2 * s1i - si + 2),
        )
    };
    Ok(GeneralEBounds {
        e,
        s,
        s1,
        t2,
        ht_difference,
        ht_formula,
        t2_equals_t,
        level_golod_bound,
        level_golod,
        ta_bound,
        ta_golod,
    })
}

/// Everything the closed forms say about `χ^s1 + χ^s` in three variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Type2Profile {
    pub s1: usize,
    pub s: usize,
    pub e: u32,
    pub h: Vec<u64>,
    pub t: usize,
    pub a: i64,
    pub f0: u64,
    pub f1: u64,
    pub f2: u64,
    pub golod_by_degree: bool,
    pub generic_class: TorClass,
    pub generic_m: usize,
    pub thresholds: Option<Thresholds>,
    /// Betti shape at the smallest admissible `beta`, when the shape applies.
    pub betti_shape: Option<BettiTable>,
    pub special_m: Option<usize>,
}

pub fn type2_profile(s1: usize, s: usize) -> Result<Type2Profile> {
    check_type2_range(s1, s)?;
    let h = type2_h(s1, s);
    let t = initial_degree(&h);
    let a = a_value(s1, s);
    let (f0, f1, f2) = f_vector(a.max(0) as u64);
    let (generic_class, generic_m) = generic_class(s1, s)?;
    Ok(Type2Profile {
        s1,
        s,
        e: 3,
        t,
        a,
        f0,
        f1,
        f2,
        golod_by_degree: golod_by_degree(s, t),
        generic_class,
        generic_m,
        thresholds: thresholds(s).ok(),
        betti_shape: betti_shape(s1, s, minimal_beta(s1, s)).ok(),
        special_m: special_m(s1, s).map(|(m, _)| m),
        h,
    })
}

/// All `(s1, s)` with `2 <= s1 <= s <= max_s` and `s < 2 s1`, ordered by `s` then `s1`.
pub fn valid_pairs(max_s: usize) -> Vec<(usize, usize)> {
    (2..=max_s)
        .flat_map(|s| (2..=s).filter(move |&s1| s < 2 * s1).map(move |s1| (s1, s)))
        .collect()
}
