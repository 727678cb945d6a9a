//! Homogeneous q-primary ideals of `k[x, y, z]`, stored degree by degree.
//!
//! An ideal is a list of reduced spanning matrices `I_0, ..., I_D` over the
//! monomial bases of `Q_d`; every degree past the truncation `D` is full.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldPrime;
use crate::graded_ring::{basis, hq, macaulay_growth, times_var, Exponent, Form, NVARS};
use crate::linalg::{subspace_intersect, subspace_sum, Echelon, MatrixGF};

/// Largest truncation tried when it has to be discovered from the generators.
pub const MAX_AUTO_TRUNCATION: usize = 40;

#[derive(Debug, Clone)]
pub struct GradedIdeal {
    field: FieldPrime,
    pieces: Vec<MatrixGF>,
}

/// Which closed-form h-vector `is_compressed` compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompressedKind {
    Gorenstein,
    Type2,
}

fn dim_q(d: usize) -> usize {
    basis(d).len()
}

fn full_piece(field: FieldPrime, d: usize) -> MatrixGF {
    MatrixGF::identity(field, dim_q(d))
}

/// Rows spanning `Q_1 * span(piece)` inside `Q_{d+1}`.
fn shift_rows(piece: &MatrixGF, d: usize) -> Vec<Vec<u32>> {
    let b = basis(d);
    let n = dim_q(d + 1);
    let mut out = Vec::with_capacity(piece.rows() * NVARS);
    for row in piece.row_iter() {
        for k in 0..NVARS {
            let mut v = vec![0u32; n];
            for (j, &c) in row.iter().enumerate() {
                if c != 0 {
                    v[times_var(b.exponent(j), k)] = c;
                }
            }
            out.push(v);
        }
    }
    out
}

fn shift(piece: &MatrixGF, d: usize) -> MatrixGF {
    MatrixGF::from_rows(piece.field(), dim_q(d + 1), &shift_rows(piece, d))
}

/// Leading column of each row of a reduced matrix.
fn pivots_of(m: &MatrixGF) -> Vec<usize> {
    m.row_iter()
        .map(|r| {
            r.iter()
                .position(|&x| x != 0)
                .expect("reduced matrix has no zero rows")
        })
        .collect()
}

fn contains_space(big: &MatrixGF, small: &MatrixGF) -> bool {
    if small.rows() == 0 {
        return true;
    }
    let e = Echelon::from_matrix(big);
    small.row_iter().all(|r| e.contains(r))
}

impl GradedIdeal {
    /// Ideal generated by homogeneous forms of degree at least 2.
    ///
    /// With `truncation = None` the bound is discovered: pieces are grown
    /// until one is full, and the ideal is rejected when it provably never
    /// becomes q-primary or no full piece appears by degree 40.
    pub fn from_generators(
        field: FieldPrime,
        gens: &[Form],
        truncation: Option<usize>,
    ) -> Result<GradedIdeal> {
        let mut by_degree: BTreeMap<usize, Vec<Vec<u32>>> = BTreeMap::new();
        for g in gens {
            if g.field() != field {
                return Err(Error::Input(format!(
                    "generator over {} in an ideal over {field}",
                    g.field()
                )));
            }
            if g.degree() < 2 {
                return Err(Error::Input(format!(
                    "generator {g} has degree {} < 2",
                    g.degree()
                )));
            }
            if !g.is_zero() {
                by_degree
                    .entry(g.degree())
                    .or_default()
                    .push(g.coeffs().to_vec());
            }
        }
        let Some(&max_deg) = by_degree.keys().next_back() else {
            return Err(Error::Input("the zero ideal is not q-primary".into()));
        };
        let piece = |d: usize, prev: Option<&MatrixGF>| -> MatrixGF {
            let mut rows = by_degree.get(&d).cloned().unwrap_or_default();
            if let Some(prev) = prev {
                rows.extend(shift_rows(prev, d - 1));
            }
            MatrixGF::from_rows(field, dim_q(d), &rows).row_reduce().1
        };

        if let Some(d_max) = truncation {
            if d_max < max_deg {
                return Err(Error::Input(format!(
                    "truncation {d_max} is below the generator degree {max_deg}"
                )));
            }
            let mut pieces: Vec<MatrixGF> = Vec::with_capacity(d_max + 1);
            for d in 0..=d_max {
                let p = piece(d, pieces.last());
                pieces.push(p);
            }
            if pieces[d_max].rows() != dim_q(d_max) {
                return Err(Error::Input(format!(
                    "ideal is not full in degree {d_max}; not q-primary within the truncation"
                )));
            }
            return Ok(GradedIdeal { field, pieces });
        }

        let mut pieces: Vec<MatrixGF> = Vec::new();
        for d in 0..=MAX_AUTO_TRUNCATION {
            let p = piece(d, pieces.last());
            let full = p.rows() == dim_q(d);
            pieces.push(p);
            if full {
                pieces.push(full_piece(field, d + 1));
                return Ok(GradedIdeal { field, pieces });
            }
            // Gotzmann persistence: maximal growth past the generator degrees
            // continues forever, so the quotient is never artinian.
            if d >= 1 && d > max_deg {
                let prev = d - 1;
                let h_prev = (dim_q(prev) - pieces[prev].rows()) as u64;
                let h_cur = (dim_q(d) - pieces[d].rows()) as u64;
                if h_prev > 0 && h_cur == macaulay_growth(h_prev, prev as u64) {
                    return Err(Error::Input(format!(
                        "ideal is not q-primary: Hilbert function has maximal growth {h_prev} -> {h_cur} in degree {prev}"
                    )));
                }
            }
        }
        Err(Error::Input(format!(
            "no full piece up to degree {MAX_AUTO_TRUNCATION}; input is not q-primary or too large"
        )))
    }

    /// Builds an ideal from already closed, reduced pieces.
    pub(crate) fn from_pieces(field: FieldPrime, pieces: Vec<MatrixGF>) -> GradedIdeal {
        debug_assert!(pieces.last().is_some_and(|p| p.rows() == p.cols()));
        GradedIdeal { field, pieces }
    }

    /// The power `q^u`, truncated at `u`.
    pub fn maximal_power(field: FieldPrime, u: usize) -> GradedIdeal {
        let pieces = (0..=u)
            .map(|d| {
                if d < u {
                    MatrixGF::zeros(field, 0, dim_q(d))
                } else {
                    full_piece(field, d)
                }
            })
            .collect();
        GradedIdeal { field, pieces }
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn truncation(&self) -> usize {
        self.pieces.len() - 1
    }

    /// Reduced spanning matrix of `I_d`; the identity past the truncation.
    pub fn piece(&self, d: usize) -> MatrixGF {
        match self.pieces.get(d) {
            Some(p) => p.clone(),
            None => full_piece(self.field, d),
        }
    }

    pub fn dim(&self, d: usize) -> usize {
        self.pieces.get(d).map_or(dim_q(d), |p| p.rows())
    }

    /// Same ideal with full pieces appended up to `d_max`.
    pub fn extended_to(&self, d_max: usize) -> GradedIdeal {
        let mut pieces = self.pieces.clone();
        while pieces.len() <= d_max {
            pieces.push(full_piece(self.field, pieces.len()));
        }
        GradedIdeal {
            field: self.field,
            pieces,
        }
    }

    fn check_field(&self, other: &GradedIdeal) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Input(format!(
                "ideals over {} and {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    fn combine(
        &self,
        other: &GradedIdeal,
        op: fn(&MatrixGF, &MatrixGF) -> Result<MatrixGF>,
    ) -> Result<GradedIdeal> {
        self.check_field(other)?;
        let d_max = self.truncation().max(other.truncation());
        let pieces = (0..=d_max)
            .map(|d| op(&self.piece(d), &other.piece(d)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedIdeal {
            field: self.field,
            pieces,
        })
    }

    pub fn intersect(&self, other: &GradedIdeal) -> Result<GradedIdeal> {
        self.combine(other, subspace_intersect)
    }

    pub fn sum(&self, other: &GradedIdeal) -> Result<GradedIdeal> {
        self.combine(other, subspace_sum)
    }

    /// `I + q^i`.
    pub fn add_power(&self, i: usize) -> GradedIdeal {
        let d_max = self.truncation().max(i);
        let pieces = (0..=d_max)
            .map(|d| {
                if d < i {
                    self.piece(d)
                } else {
                    full_piece(self.field, d)
                }
            })
            .collect();
        GradedIdeal {
            field: self.field,
            pieces,
        }
    }

    pub fn equals(&self, other: &GradedIdeal) -> bool {
        self.field == other.field
            && (0..=self.truncation().max(other.truncation()))
                .all(|d| self.piece(d) == other.piece(d))
    }

    pub fn contains(&self, other: &GradedIdeal) -> bool {
        (0..=other.truncation()).all(|d| contains_space(&self.piece(d), &other.piece(d)))
    }

    /// `I_1 = 0`, i.e. the ideal lies in `q^2`.
    pub fn is_embedded(&self) -> bool {
        self.dim(0) == 0 && self.dim(1) == 0
    }

    /// Hilbert function of `Q/I` up to its last nonzero value.
    pub fn hilbert(&self) -> Vec<u64> {
        let mut h: Vec<u64> = (0..=self.truncation())
            .map(|d| (dim_q(d) - self.dim(d)) as u64)
            .collect();
        while h.last() == Some(&0) {
            h.pop();
        }
        h
    }

    /// Smallest degree where `I` is nonzero.
    pub fn initial_degree(&self) -> usize {
        (0..=self.truncation())
            .find(|&d| self.dim(d) > 0)
            .unwrap_or(self.truncation())
    }

    /// Top degree with `R_d != 0`.
    pub fn socle_degree(&self) -> usize {
        self.hilbert().len().saturating_sub(1)
    }

    pub fn quotient(&self) -> Quotient {
        Quotient::new(self)
    }

    /// Socle dimensions of `Q/I` by degree, up to the socle degree.
    pub fn socle_polynomial(&self) -> Vec<u64> {
        self.quotient().socle_polynomial()
    }

    pub fn ring_type(&self) -> u64 {
        self.socle_polynomial().iter().sum()
    }

    pub fn is_level(&self) -> bool {
        self.socle_polynomial().iter().filter(|&&c| c != 0).count() == 1
    }

    /// Number of minimal generators in each degree.
    pub fn minimal_generator_degrees(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for d in 0..=self.truncation() {
            let below = if d == 0 {
                0
            } else {
                shift(&self.pieces[d - 1], d - 1).rank()
            };
            let mu = self.dim(d) - below;
            if mu > 0 {
                out.insert(d, mu);
            }
        }
        out
    }

    pub fn generator_count(&self) -> usize {
        self.minimal_generator_degrees().values().sum()
    }

    /// A minimal generating set: in each degree, a complement of `Q_1 I_{d-1}`
    /// chosen among the reduced rows of `I_d`.
    pub fn minimal_generators(&self) -> Vec<Form> {
        let mut out = Vec::new();
        for d in 0..=self.truncation() {
            let mut span = if d == 0 {
                Echelon::new(self.field, 1)
            } else {
                Echelon::from_matrix(&shift(&self.pieces[d - 1], d - 1))
            };
            for row in self.pieces[d].row_iter() {
                if span.insert(row.to_vec()) {
                    out.push(
                        Form::from_coeffs(self.field, d, row.to_vec())
                            .expect("row length matches the basis"),
                    );
                }
            }
        }
        out
    }

    /// `min { i >= 0 : q^i I2 ⊆ I1 }`.
    pub fn compute_a(i1: &GradedIdeal, i2: &GradedIdeal) -> Result<usize> {
        i1.check_field(i2)?;
        let d_max = i1.truncation().max(i2.truncation());
        let mut power: Vec<MatrixGF> = (0..=d_max).map(|d| i2.piece(d)).collect();
        for i in 0..=d_max + 1 {
            let contained = power
                .iter()
                .enumerate()
                .all(|(d, p)| d > i1.truncation() || contains_space(&i1.pieces[d], p));
            if contained {
                return Ok(i);
            }
            let mut next = vec![MatrixGF::zeros(i1.field, 0, 1)];
            for (d, piece) in power.iter().enumerate().take(d_max) {
                next.push(shift(piece, d).row_reduce().1);
            }
            power = next;
        }
        Ok(d_max + 1)
    }

    /// `min { i >= 1 : q^(i+1) ∩ I2 ⊆ I1 }`.
    pub fn compute_b(i1: &GradedIdeal, i2: &GradedIdeal) -> Result<usize> {
        i1.check_field(i2)?;
        let d_max = i1.truncation().max(i2.truncation());
        let bad = (0..=d_max)
            .rev()
            .find(|&d| !contains_space(&i1.piece(d), &i2.piece(d)));
        Ok(match bad {
            Some(d) => d.max(1),
            None => 1,
        })
    }

    /// Compares the Hilbert function with the maximal one for the socle data.
    pub fn is_compressed(&self, kind: CompressedKind) -> Result<bool> {
        let socle = self.socle_polynomial();
        let ty: u64 = socle.iter().sum();
        let s = self.socle_degree() as i64;
        let expect: Box<dyn Fn(i64) -> u64> = match kind {
            CompressedKind::Gorenstein => {
                if ty != 1 {
                    return Err(Error::Input(format!(
                        "Gorenstein compressedness asked of a ring of type {ty}"
                    )));
                }
                Box::new(move |i| hq(3, i).min(hq(3, s - i)))
            }
            CompressedKind::Type2 => {
                if ty != 2 {
                    return Err(Error::Input(format!(
                        "type-2 compressedness asked of a ring of type {ty}"
                    )));
                }
                let b = socle.iter().position(|&c| c != 0).unwrap_or(0) as i64;
                Box::new(move |i| hq(3, i).min(hq(3, b - i) + hq(3, s - i)))
            }
        };
        let h = self.hilbert();
        Ok((0..h.len()).all(|i| h[i] == expect(i as i64)))
    }

    pub fn to_file(&self) -> IdealFile {
        let generators = self
            .minimal_generators()
            .iter()
            .map(|g| {
                g.terms()
                    .map(|(c, e)| Term {
                        c: self.field.signed(c),
                        e,
                    })
                    .collect()
            })
            .collect();
        IdealFile {
            prime: self.field.p(),
            vars: vec!["x".into(), "y".into(), "z".into()],
            truncation: Some(self.truncation()),
            generators,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("ideal file serializes")
    }

    /// Parses the JSON ideal format; `prime` overrides the file's modulus.
    pub fn from_json(text: &str, prime: Option<u32>) -> Result<GradedIdeal> {
        let file: IdealFile =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("bad ideal file: {e}")))?;
        file.to_ideal(prime)
    }
}

impl PartialEq for GradedIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

/// Renders socle coefficients as a polynomial in `χ`, e.g. `χ^2 + χ^3`.
pub fn socle_string(coeffs: &[u64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(d, &c)| {
            let mono = match d {
                0 => String::from("1"),
                1 => String::from("χ"),
                _ => format!("χ^{d}"),
            };
            match (c, d) {
                (1, _) => mono,
                (_, 0) => c.to_string(),
                _ => format!("{c}{mono}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub c: i64,
    pub e: Exponent,
}

/// On-disk form of an ideal: a prime, three variable names, an optional
/// truncation and a list of homogeneous generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealFile {
    pub prime: u32,
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    pub generators: Vec<Vec<Term>>,
}

impl IdealFile {
    pub fn to_ideal(&self, prime: Option<u32>) -> Result<GradedIdeal> {
        if self.vars.len() != NVARS {
            return Err(Error::Input(format!(
                "expected 3 variables, found {}",
                self.vars.len()
            )));
        }
        let field = FieldPrime::new(prime.unwrap_or(self.prime))?;
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let terms: Vec<(i64, Exponent)> = g.iter().map(|t| (t.c, t.e)).collect();
                Form::from_terms(field, &terms)
            })
            .collect::<Result<Vec<_>>>()?;
        GradedIdeal::from_generators(field, &gens, self.truncation)
    }
}

/// The graded ring `R = Q/I`, with standard monomials as basis in each degree.
#[derive(Debug, Clone)]
pub struct Quotient {
    field: FieldPrime,
    standard: Vec<Vec<usize>>,
    /// Per degree, a `dim Q_d x dim R_d` matrix sending monomials to normal forms.
    normal: Vec<MatrixGF>,
}

impl Quotient {
    fn new(ideal: &GradedIdeal) -> Quotient {
        let f = ideal.field;
        let mut standard = Vec::new();
        let mut normal = Vec::new();
        for (d, piece) in ideal.pieces.iter().enumerate() {
            let n = dim_q(d);
            let pivots = pivots_of(piece);
            let mut is_pivot = vec![false; n];
            pivots.iter().for_each(|&c| is_pivot[c] = true);
            let std_d: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
            let mut pos = vec![usize::MAX; n];
            std_d.iter().enumerate().for_each(|(k, &c)| pos[c] = k);
            let mut nf = MatrixGF::zeros(f, n, std_d.len());
            for (k, &c) in std_d.iter().enumerate() {
                nf.set(c, k, 1);
            }
            for (r, &pc) in pivots.iter().enumerate() {
                for (k, &c) in std_d.iter().enumerate() {
                    let v = piece.get(r, c);
                    if v != 0 {
                        nf.set(pc, k, f.neg(v));
                    }
                }
            }
            standard.push(std_d);
            normal.push(nf);
        }
        Quotient {
            field: f,
            standard,
            normal,
        }
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    /// `dim R_d`.
    pub fn dim(&self, d: usize) -> usize {
        self.standard.get(d).map_or(0, Vec::len)
    }

    /// Monomial indices (in the basis of `Q_d`) forming the basis of `R_d`.
    pub fn standard_monomials(&self, d: usize) -> &[usize] {
        self.standard.get(d).map_or(&[], Vec::as_slice)
    }

    /// Coordinates in `R_d` of an element of `Q_d`.
    pub fn reduce(&self, d: usize, v: &[u32]) -> Vec<u32> {
        match self.normal.get(d) {
            Some(nf) => nf.left_mul(v),
            None => Vec::new(),
        }
    }

    /// Product of `u ∈ R_a` and `v ∈ R_b` in `R_{a+b}`.
    pub fn mul(&self, a: usize, u: &[u32], b: usize, v: &[u32]) -> Vec<u32> {
        let c = a + b;
        if self.dim(c) == 0 {
            return Vec::new();
        }
        let f = self.field;
        let (ba, bb) = (basis(a), basis(b));
        let mut lifted = vec![0u32; dim_q(c)];
        for (i, &x) in u.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let ea = ba.exponent(self.standard[a][i]);
            for (j, &y) in v.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let eb = bb.exponent(self.standard[b][j]);
                let idx = crate::graded_ring::monomial_index([
                    ea[0] + eb[0],
                    ea[1] + eb[1],
                    ea[2] + eb[2],
                ]);
                lifted[idx] = f.mul_add(lifted[idx], x, y);
            }
        }
        self.reduce(c, &lifted)
    }

    /// Matrix of multiplication by `x_k` from `R_d` to `R_{d+1}` (rows = basis of `R_d`).
    pub fn times_var(&self, d: usize, k: usize) -> MatrixGF {
        let rows = self.dim(d);
        let cols = self.dim(d + 1);
        let mut m = MatrixGF::zeros(self.field, rows, cols);
        if cols == 0 {
            return m;
        }
        let b = basis(d);
        let nf = &self.normal[d + 1];
        for (i, &mono) in self.standard[d].iter().enumerate() {
            let target = times_var(b.exponent(mono), k);
            for c in 0..cols {
                m.set(i, c, nf.get(target, c));
            }
        }
        m
    }

    pub fn socle_polynomial(&self) -> Vec<u64> {
        let top = (0..self.standard.len())
            .rev()
            .find(|&d| self.dim(d) > 0)
            .unwrap_or(0);
        (0..=top)
            .map(|d| {
                let rows = self.dim(d);
                if rows == 0 {
                    return 0;
                }
                let next = self.dim(d + 1);
                let mut m = MatrixGF::zeros(self.field, rows, NVARS * next);
                for k in 0..NVARS {
                    let t = self.times_var(d, k);
                    for i in 0..rows {
                        for c in 0..next {
                            m.set(i, k * next + c, t.get(i, c));
                        }
                    }
                }
                (rows - m.rank()) as u64
            })
            .collect()
    }
}
