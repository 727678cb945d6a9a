//! Koszul homology of `R = Q/I`: graded Betti numbers and the products on
//! `Tor^Q(R, k)` that decide the multiplication class.
//!
//! Slice `(i, j)` of `K ⊗ R` is `∧^i k^3 ⊗ R_{j-i}`, laid out as consecutive
//! blocks of length `dim R_{j-i}`, one per subset `S` of `{x, y, z}` in lex
//! order. The differential is `∂(e_S ⊗ a) = Σ_l (-1)^l e_{S \ k_l} ⊗ x_{k_l} a`
//! and `e_S · e_T = (-1)^{#{(s, t) ∈ S × T : s > t}} e_{S ∪ T}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::graded_ring::NVARS;
use crate::ideal::{GradedIdeal, Quotient};
use crate::linalg::{Echelon, MatrixGF, TaggedEchelon};

const SUBSETS: [&[&[usize]]; 4] = [
    &[&[]],
    &[&[0], &[1], &[2]],
    &[&[0, 1], &[0, 2], &[1, 2]],
    &[&[0, 1, 2]],
];

fn subset_index(s: &[usize]) -> usize {
    SUBSETS[s.len()]
        .iter()
        .position(|&t| t == s)
        .expect("sorted subset")
}

/// Sign of `e_S · e_T`, or `None` when the subsets meet.
fn merge_sign(s: &[usize], t: &[usize]) -> Option<(bool, Vec<usize>)> {
    if s.iter().any(|a| t.contains(a)) {
        return None;
    }
    let inversions = s
        .iter()
        .map(|&a| t.iter().filter(|&&b| a > b).count())
        .sum::<usize>();
    let mut u: Vec<usize> = s.iter().chain(t).copied().collect();
    u.sort_unstable();
    Some((inversions % 2 == 1, u))
}

/// Multiplication class of a codimension-three Tor algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TorClass {
    C3,
    B,
    G(usize),
    H(usize, usize),
    Unclassified(usize, usize, usize),
}

impl TorClass {
    pub fn golod() -> TorClass {
        TorClass::H(0, 0)
    }
}

impl fmt::Display for TorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorClass::C3 => write!(f, "C(3)"),
            TorClass::B => write!(f, "B"),
            TorClass::G(r) => write!(f, "G({r})"),
            TorClass::H(p, q) => write!(f, "H({p},{q})"),
            TorClass::Unclassified(p, q, r) => write!(f, "UNCLASSIFIED({p},{q},{r})"),
        }
    }
}

impl Serialize for TorClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Class label from the ring type, generator count and `(p, q, r)`.
pub fn class_from_parameters(ring_type: u64, m: usize, p: usize, q: usize, r: usize) -> TorClass {
    match ring_type {
        1 if m == 3 => TorClass::C3,
        1 => TorClass::G(m),
        2 => match (p, q, r) {
            (1, 1, 2) => TorClass::B,
            (0, 1, r) if r >= 1 => TorClass::G(r),
            (p, q, r) if q == r && q <= 2 => TorClass::H(p, q),
            _ => TorClass::Unclassified(p, q, r),
        },
        _ if (p, q, r) == (0, 0, 0) => TorClass::golod(),
        _ => TorClass::Unclassified(p, q, r),
    }
}

/// Graded Betti numbers `β_{ij} = dim Tor_i(R, k)_j`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, usize), u64>,
}

impl BettiTable {
    pub fn from_entries(entries: impl IntoIterator<Item = ((usize, usize), u64)>) -> BettiTable {
        BettiTable {
            entries: entries.into_iter().filter(|&(_, v)| v != 0).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Degree -> count map of column `i`.
    pub fn column(&self, i: usize) -> BTreeMap<usize, u64> {
        self.entries
            .iter()
            .filter(|((c, _), _)| *c == i)
            .map(|(&(_, j), &v)| (j, v))
            .collect()
    }

    pub fn total(&self, i: usize) -> u64 {
        self.column(i).values().sum()
    }

    /// Coefficients of `Σ_{i,j} (-1)^i β_{ij} χ^j`.
    pub fn b_polynomial(&self) -> Vec<i64> {
        let top = self.entries.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let mut b = vec![0i64; top + 1];
        for (&(i, j), &v) in &self.entries {
            b[j] += if i % 2 == 0 { v as i64 } else { -(v as i64) };
        }
        b
    }

    /// Plain text grid: rows are `j - i`, columns are `i`, dots for zeros.
    pub fn to_grid(&self) -> String {
        let top = self.entries.keys().map(|&(i, j)| j - i).max().unwrap_or(0);
        let cell = |v: u64| {
            if v == 0 {
                ".".to_string()
            } else {
                v.to_string()
            }
        };
        let mut out = format!("{:>7}", "");
        for i in 0..=NVARS {
            out += &format!("{i:>4}");
        }
        out += &format!("\n{:>7}", "total:");
        for i in 0..=NVARS {
            out += &format!("{:>4}", self.total(i));
        }
        for row in 0..=top {
            out += &format!("\n{:>6}:", row);
            for i in 0..=NVARS {
                out += &format!("{:>4}", cell(self.get(i, i + row)));
            }
        }
        out.push('\n');
        out
    }
}

impl Serialize for BettiTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let columns: Vec<BTreeMap<String, u64>> = (0..=NVARS)
            .map(|i| {
                self.column(i)
                    .into_iter()
                    .map(|(j, v)| (j.to_string(), v))
                    .collect()
            })
            .collect();
        columns.serialize(s)
    }
}

/// Homology of one slice: representatives plus a way to read coordinates.
#[derive(Debug, Clone)]
struct HomologySlice {
    reps: Vec<Vec<u32>>,
    boundaries: usize,
    coords: TaggedEchelon,
}

impl HomologySlice {
    fn coordinates(&self, cycle: &[u32]) -> Vec<u32> {
        let c = self
            .coords
            .coordinates(cycle)
            .expect("products of cycles are cycles");
        c[self.boundaries..].to_vec()
    }
}

/// Koszul homology `H(K ⊗ R)` with chosen cycle representatives.
#[derive(Debug, Clone)]
pub struct KoszulHomology {
    ring: Quotient,
    socle_degree: usize,
    slices: BTreeMap<(usize, usize), HomologySlice>,
}

impl KoszulHomology {
    pub fn new(ideal: &GradedIdeal) -> KoszulHomology {
        let ring = ideal.quotient();
        let s = ideal.socle_degree();
        let mut mult = BTreeMap::new();
        for d in 0..=s {
            for k in 0..NVARS {
                mult.insert((d, k), ring.times_var(d, k));
            }
        }
        let mut out = KoszulHomology {
            ring,
            socle_degree: s,
            slices: BTreeMap::new(),
        };
        for j in 0..=s + NVARS {
            let diffs: Vec<Option<MatrixGF>> = (0..=NVARS + 1)
                .map(|i| {
                    (1..=NVARS)
                        .contains(&i)
                        .then(|| out.differential(i, j, &mult))
                })
                .collect();
            for i in 0..=NVARS {
                if out.slice_dim(i, j) == 0 {
                    continue;
                }
                let slice = out.homology_slice(i, j, diffs[i].as_ref(), diffs[i + 1].as_ref());
                if !slice.reps.is_empty() {
                    out.slices.insert((i, j), slice);
                }
            }
        }
        out
    }

    fn block(&self, i: usize, j: usize) -> usize {
        if j < i {
            0
        } else {
            self.ring.dim(j - i)
        }
    }

    fn slice_dim(&self, i: usize, j: usize) -> usize {
        if i > NVARS {
            return 0;
        }
        SUBSETS[i].len() * self.block(i, j)
    }

    /// Matrix of `∂: K_{i,j} -> K_{i-1,j}` acting on row vectors.
    fn differential(
        &self,
        i: usize,
        j: usize,
        mult: &BTreeMap<(usize, usize), MatrixGF>,
    ) -> MatrixGF {
        let f = self.ring.field();
        let (hr, hc) = (self.block(i, j), self.block(i - 1, j));
        let mut d = MatrixGF::zeros(f, self.slice_dim(i, j), self.slice_dim(i - 1, j));
        if hr == 0 || hc == 0 {
            return d;
        }
        for (si, set) in SUBSETS[i].iter().enumerate() {
            for (l, &k) in set.iter().enumerate() {
                let rest: Vec<usize> = set.iter().copied().filter(|&v| v != k).collect();
                let ti = subset_index(&rest);
                let m = &mult[&(j - i, k)];
                for a in 0..hr {
                    for b in 0..hc {
                        let v = m.get(a, b);
                        if v != 0 {
                            let v = if l % 2 == 1 { f.neg(v) } else { v };
                            d.set(si * hr + a, ti * hc + b, v);
                        }
                    }
                }
            }
        }
        d
    }

    fn homology_slice(
        &self,
        i: usize,
        j: usize,
        out_of: Option<&MatrixGF>,
        into: Option<&MatrixGF>,
    ) -> HomologySlice {
        let f = self.ring.field();
        let n = self.slice_dim(i, j);
        let cycles = match out_of {
            Some(d) => d.transpose().kernel_basis(),
            None => MatrixGF::identity(f, n),
        };
        let boundaries = match into {
            Some(d) => d.row_reduce().1,
            None => MatrixGF::zeros(f, 0, n),
        };
        let mut span = Echelon::from_matrix(&boundaries);
        let reps: Vec<Vec<u32>> = cycles
            .row_iter()
            .filter(|z| span.insert(z.to_vec()))
            .map(<[u32]>::to_vec)
            .collect();
        let mut coords = TaggedEchelon::new(f, n, boundaries.rows() + reps.len());
        for b in boundaries.row_iter() {
            coords.push_independent(b);
        }
        for z in &reps {
            coords.push_independent(z);
        }
        HomologySlice {
            reps,
            boundaries: boundaries.rows(),
            coords,
        }
    }

    pub fn socle_degree(&self) -> usize {
        self.socle_degree
    }

    pub fn betti(&self) -> BettiTable {
        BettiTable::from_entries(self.slices.iter().map(|(&k, sl)| (k, sl.reps.len() as u64)))
    }

    /// Internal degrees carrying homology in position `i`, with their dimensions.
    fn degrees(&self, i: usize) -> Vec<(usize, usize)> {
        self.slices
            .iter()
            .filter(|((c, _), _)| *c == i)
            .map(|(&(_, j), sl)| (j, sl.reps.len()))
            .collect()
    }

    /// Product of chains `u ∈ K_{i1,j1}` and `v ∈ K_{i2,j2}`.
    fn chain_product(
        &self,
        (i1, j1): (usize, usize),
        u: &[u32],
        (i2, j2): (usize, usize),
        v: &[u32],
    ) -> Vec<u32> {
        let f = self.ring.field();
        let (i, j) = (i1 + i2, j1 + j2);
        let mut out = vec![0u32; self.slice_dim(i, j)];
        let h = self.block(i, j);
        if h == 0 {
            return out;
        }
        let (h1, h2) = (self.block(i1, j1), self.block(i2, j2));
        for (a, s) in SUBSETS[i1].iter().enumerate() {
            let ua = &u[a * h1..(a + 1) * h1];
            if ua.iter().all(|&x| x == 0) {
                continue;
            }
            for (b, t) in SUBSETS[i2].iter().enumerate() {
                let Some((negative, union)) = merge_sign(s, t) else {
                    continue;
                };
                let vb = &v[b * h2..(b + 1) * h2];
                if vb.iter().all(|&x| x == 0) {
                    continue;
                }
                let prod = self.ring.mul(j1 - i1, ua, j2 - i2, vb);
                let c = subset_index(&union);
                for (o, &x) in out[c * h..(c + 1) * h].iter_mut().zip(&prod) {
                    *o = if negative { f.sub(*o, x) } else { f.add(*o, x) };
                }
            }
        }
        out
    }

    /// Homology coordinates of `[α_a] · [β_b]` for basis classes in
    /// `H_{i1,j1}` and `H_{i2,j2}`, in the basis of `H_{i1+i2, j1+j2}`.
    pub fn product(
        &self,
        (i1, j1): (usize, usize),
        a: usize,
        (i2, j2): (usize, usize),
        b: usize,
    ) -> Vec<u32> {
        let (i, j) = (i1 + i2, j1 + j2);
        let Some(target) = self.slices.get(&(i, j)) else {
            return Vec::new();
        };
        let u = &self.slices[&(i1, j1)].reps[a];
        let v = &self.slices[&(i2, j2)].reps[b];
        target.coordinates(&self.chain_product((i1, j1), u, (i2, j2), v))
    }

    /// `Σ_j dim span(A_{i1} · A_{i2})_j`.
    fn product_rank(&self, i1: usize, i2: usize) -> usize {
        let f = self.ring.field();
        let mut by_target: BTreeMap<usize, Echelon> = BTreeMap::new();
        for (j1, n1) in self.degrees(i1) {
            for (j2, n2) in self.degrees(i2) {
                let j = j1 + j2;
                let Some(target) = self.slices.get(&(i1 + i2, j)) else {
                    continue;
                };
                let span = by_target
                    .entry(j)
                    .or_insert_with(|| Echelon::new(f, target.reps.len()));
                for a in 0..n1 {
                    for b in 0..n2 {
                        if span.is_full() {
                            break;
                        }
                        span.insert(self.product((i1, j1), a, (i2, j2), b));
                    }
                }
            }
        }
        by_target.values().map(Echelon::dim).sum()
    }

    /// `p = rank(A_1 · A_1)`.
    pub fn p(&self) -> usize {
        self.product_rank(1, 1)
    }

    /// `q = rank(A_1 · A_2)`.
    pub fn q(&self) -> usize {
        self.product_rank(1, 2)
    }

    /// `r = rank(δ: A_2 -> Hom(A_1, A_3))`.
    pub fn r(&self) -> usize {
        let f = self.ring.field();
        let a1 = self.degrees(1);
        let a3 = self.degrees(3);
        let n1: usize = a1.iter().map(|&(_, n)| n).sum();
        let n3: usize = a3.iter().map(|&(_, n)| n).sum();
        let mut rows = Vec::new();
        for (j2, n2) in self.degrees(2) {
            for y in 0..n2 {
                let mut row = vec![0u32; n1 * n3];
                let mut off1 = 0;
                for &(j1, c1) in &a1 {
                    let mut off3 = 0;
                    for &(j3, c3) in &a3 {
                        if j1 + j2 == j3 {
                            for x in 0..c1 {
                                let prod = self.product((1, j1), x, (2, j2), y);
                                for (w, &v) in prod.iter().enumerate() {
                                    row[(off1 + x) * n3 + off3 + w] = v;
                                }
                            }
                        }
                        off3 += c3;
                    }
                    off1 += c1;
                }
                rows.push(row);
            }
        }
        MatrixGF::from_rows(f, n1 * n3, &rows).rank()
    }

    /// Whether every product `A_1 · A_1` and `A_1 · A_2` of basis classes is zero.
    pub fn low_products_vanish(&self) -> bool {
        [(1, 1), (1, 2)].iter().all(|&(i1, i2)| {
            self.degrees(i1).iter().all(|&(j1, n1)| {
                self.degrees(i2).iter().all(|&(j2, n2)| {
                    (0..n1).all(|a| {
                        (0..n2).all(|b| {
                            self.product((i1, j1), a, (i2, j2), b)
                                .iter()
                                .all(|&x| x == 0)
                        })
                    })
                })
            })
        })
    }
}

/// Betti numbers, multiplication parameters and class of `Q/I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorAlgebra {
    pub betti: BettiTable,
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub ring_type: u64,
    pub m: usize,
    pub class: TorClass,
}

impl TorAlgebra {
    pub fn new(ideal: &GradedIdeal) -> TorAlgebra {
        TorAlgebra::from_homology(&KoszulHomology::new(ideal))
    }

    pub fn from_homology(h: &KoszulHomology) -> TorAlgebra {
        let betti = h.betti();
        let (p, q, r) = (h.p(), h.q(), h.r());
        let ring_type = betti.total(3);
        let m = betti.total(1) as usize;
        TorAlgebra {
            class: class_from_parameters(ring_type, m, p, q, r),
            betti,
            p,
            q,
            r,
            ring_type,
            m,
        }
    }
}

pub fn betti_numbers(ideal: &GradedIdeal) -> BettiTable {
    KoszulHomology::new(ideal).betti()
}

pub fn tor_parameters(ideal: &GradedIdeal) -> (usize, usize, usize) {
    let h = KoszulHomology::new(ideal);
    (h.p(), h.q(), h.r())
}

pub fn classify(ideal: &GradedIdeal) -> TorClass {
    TorAlgebra::new(ideal).class
}
