//! The graded pieces `Q_d` of `Q = k[x, y, z]`: monomial bases, products,
//! the contraction action used for inverse systems, and Macaulay growth.

use std::fmt::{self, Write as _};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::FieldPrime;

pub type Exponent = [u32; 3];

/// Number of variables used for all ring-level computations.
pub const NVARS: usize = 3;

const CACHED_DEGREES: usize = 64;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `dim Q_i` for a polynomial ring in `e` variables; zero for negative `i`.
pub fn hq(e: u32, i: i64) -> u64 {
    if i < 0 || e == 0 {
        return if i == 0 { 1 } else { 0 };
    }
    binomial(e as u64 - 1 + i as u64, e as u64 - 1)
}

/// Position of `x^a y^b z^c` in the graded-lex basis of its degree
/// (x > y > z, so `x^d` comes first and `z^d` last).
#[inline]
pub fn monomial_index(e: Exponent) -> usize {
    let d = (e[0] + e[1] + e[2]) as usize;
    let rest = d - e[0] as usize;
    rest * (rest + 1) / 2 + (rest - e[1] as usize)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    degree: usize,
    exponents: Vec<Exponent>,
}

impl MonomialBasis {
    fn build(d: usize) -> Self {
        let d32 = d as u32;
        let mut exponents = Vec::with_capacity((d + 1) * (d + 2) / 2);
        for a in (0..=d32).rev() {
            for b in (0..=d32 - a).rev() {
                exponents.push([a, b, d32 - a - b]);
            }
        }
        MonomialBasis {
            degree: d,
            exponents,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exponents
    }

    pub fn exponent(&self, i: usize) -> Exponent {
        self.exponents[i]
    }

    pub fn index_of(&self, e: Exponent) -> Option<usize> {
        (e.iter().sum::<u32>() as usize == self.degree).then(|| monomial_index(e))
    }
}

/// Shared, immutable monomial basis of `Q_d`.
pub fn basis(d: usize) -> &'static MonomialBasis {
    static CACHE: OnceLock<Vec<MonomialBasis>> = OnceLock::new();
    static LARGE: OnceLock<std::sync::Mutex<Vec<&'static MonomialBasis>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| (0..CACHED_DEGREES).map(MonomialBasis::build).collect());
    if d < CACHED_DEGREES {
        return &cache[d];
    }
    let mut large = LARGE.get_or_init(Default::default).lock().unwrap();
    if let Some(b) = large.iter().find(|b| b.degree == d) {
        return b;
    }
    let leaked: &'static MonomialBasis = Box::leak(Box::new(MonomialBasis::build(d)));
    large.push(leaked);
    leaked
}

/// Index table of the product map `Q_{d1} x Q_{d2} -> Q_{d1+d2}` on monomials.
#[derive(Debug, Clone)]
pub struct MultTensor {
    d1: usize,
    d2: usize,
    n2: usize,
    table: Vec<usize>,
}

impl MultTensor {
    pub fn new(d1: usize, d2: usize) -> Self {
        let (b1, b2) = (basis(d1), basis(d2));
        let mut table = Vec::with_capacity(b1.len() * b2.len());
        for m1 in b1.exponents() {
            for m2 in b2.exponents() {
                table.push(monomial_index([
                    m1[0] + m2[0],
                    m1[1] + m2[1],
                    m1[2] + m2[2],
                ]));
            }
        }
        MultTensor {
            d1,
            d2,
            n2: b2.len(),
            table,
        }
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Index in `Q_{d1+d2}` of the product of monomials `i` (degree d1) and `j` (degree d2).
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> usize {
        self.table[i * self.n2 + j]
    }
}

/// Index in `Q_{d+1}` of `x_k * m` for monomial `m` of degree `d`.
#[inline]
pub fn times_var(e: Exponent, k: usize) -> usize {
    let mut e = e;
    e[k] += 1;
    monomial_index(e)
}

/// A homogeneous polynomial: coefficients over the monomial basis of its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    field: FieldPrime,
    degree: usize,
    coeffs: Vec<u32>,
}

impl Form {
    pub fn zero(field: FieldPrime, degree: usize) -> Self {
        Form {
            field,
            degree,
            coeffs: vec![0; basis(degree).len()],
        }
    }

    pub fn from_coeffs(field: FieldPrime, degree: usize, coeffs: Vec<u32>) -> Result<Self> {
        if coeffs.len() != basis(degree).len() {
            return Err(Error::Dimension(format!(
                "{} coefficients for degree {degree}",
                coeffs.len()
            )));
        }
        let p = field.p();
        Ok(Form {
            field,
            degree,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        })
    }

    /// Builds a form from `(coefficient, exponent)` terms; all terms must share one degree.
    pub fn from_terms(field: FieldPrime, terms: &[(i64, Exponent)]) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Input("empty polynomial".into()));
        };
        let degree = first.1.iter().sum::<u32>() as usize;
        let mut f = Form::zero(field, degree);
        for &(c, e) in terms {
            if e.iter().sum::<u32>() as usize != degree {
                return Err(Error::Input(format!(
                    "inhomogeneous polynomial: terms of degree {degree} and {}",
                    e.iter().sum::<u32>()
                )));
            }
            let i = monomial_index(e);
            f.coeffs[i] = field.add(f.coeffs[i], field.reduce_i64(c));
        }
        Ok(f)
    }

    pub fn monomial(field: FieldPrime, e: Exponent) -> Self {
        let mut f = Form::zero(field, e.iter().sum::<u32>() as usize);
        f.coeffs[monomial_index(e)] = 1 % field.p();
        f
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn coeff(&self, e: Exponent) -> u32 {
        basis(self.degree).index_of(e).map_or(0, |i| self.coeffs[i])
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, Exponent)> + '_ {
        let b = basis(self.degree);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (c, b.exponent(i)))
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        if self.degree != other.degree || self.field != other.field {
            return Err(Error::Degree(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let f = self.field;
        Ok(Form {
            field: f,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: u32) -> Form {
        let f = self.field;
        Form {
            field: f,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c % f.p())).collect(),
        }
    }

    pub fn mul(&self, other: &Form) -> Form {
        let f = self.field;
        let mut out = Form::zero(f, self.degree + other.degree);
        for (a, ea) in self.terms() {
            for (b, eb) in other.terms() {
                let i = monomial_index([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]]);
                out.coeffs[i] = f.mul_add(out.coeffs[i], a, b);
            }
        }
        out
    }

    /// Contraction `self ∘ target`: the bilinear extension of
    /// `x^α ∘ x^β = x^(β-α)` when `α ≤ β` componentwise, and 0 otherwise.
    pub fn contract(&self, target: &Form) -> Result<Form> {
        if self.degree > target.degree {
            return Err(Error::Degree(format!(
                "cannot contract degree {} into degree {}",
                self.degree, target.degree
            )));
        }
        let f = self.field;
        let mut out = Form::zero(f, target.degree - self.degree);
        for (a, ea) in self.terms() {
            for (b, eb) in target.terms() {
                if (0..NVARS).all(|k| ea[k] <= eb[k]) {
                    let i = monomial_index([eb[0] - ea[0], eb[1] - ea[1], eb[2] - ea[2]]);
                    out.coeffs[i] = f.mul_add(out.coeffs[i], a, b);
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn write_monomial(out: &mut impl fmt::Write, e: Exponent) -> fmt::Result {
    let names = ['x', 'y', 'z'];
    let mut first = true;
    for k in 0..NVARS {
        if e[k] == 0 {
            continue;
        }
        if !first {
            out.write_char('*')?;
        }
        first = false;
        out.write_char(names[k])?;
        if e[k] > 1 {
            write!(out, "^{}", e[k])?;
        }
    }
    if first {
        out.write_char('1')?;
    }
    Ok(())
}

impl fmt::Display for Form {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (c, e) in self.terms() {
            let c = self.field.signed(c);
            if any {
                out.write_str(if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                out.write_char('-')?;
            }
            any = true;
            let mag = c.unsigned_abs();
            let constant = e == [0, 0, 0];
            if mag != 1 || constant {
                write!(out, "{mag}")?;
                if !constant {
                    out.write_char('*')?;
                }
            }
            if !constant {
                write_monomial(out, e)?;
            }
        }
        if !any {
            out.write_char('0')?;
        }
        Ok(())
    }
}

/// Macaulay's bound `n^<d>`: the largest possible value in degree `d+1` of a
/// Hilbert function that takes the value `n` in degree `d`.
pub fn macaulay_growth(n: u64, d: u64) -> u64 {
    assert!(d >= 1, "Macaulay growth needs d >= 1");
    let mut rest = n;
    let mut out = 0u64;
    let mut i = d;
    while rest > 0 && i >= 1 {
        // largest k with C(k, i) <= rest
        let mut k = i;
        while binomial(k + 1, i) <= rest {
            k += 1;
        }
        rest -= binomial(k, i);
        out += binomial(k + 1, i + 1);
        i -= 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> FieldPrime {
        FieldPrime::new(p).unwrap()
    }

    #[test]
    fn hq_values() {
        assert_eq!(hq(3, 2), 6);
        assert_eq!(hq(3, 0), 1);
        assert_eq!(hq(2, 4), 5);
        assert_eq!(hq(3, -1), 0);
        for d in 0..=20 {
            assert_eq!(hq(3, d as i64) as usize, basis(d).len());
        }
    }

    #[test]
    fn basis_order_and_index() {
        let b = basis(2);
        assert_eq!(
            b.exponents(),
            &[
                [2, 0, 0],
                [1, 1, 0],
                [1, 0, 1],
                [0, 2, 0],
                [0, 1, 1],
                [0, 0, 2]
            ]
        );
        for d in 0..12 {
            for (i, &e) in basis(d).exponents().iter().enumerate() {
                assert_eq!(monomial_index(e), i);
            }
        }
        assert_eq!(basis(70).len(), hq(3, 70) as usize);
    }

    #[test]
    fn mult_tensor_entries() {
        let t = MultTensor::new(1, 1);
        let x = monomial_index([1, 0, 0]);
        assert_eq!(t.product(x, x), monomial_index([2, 0, 0]));
        let t = MultTensor::new(2, 1);
        let xy = monomial_index([1, 1, 0]);
        let z = monomial_index([0, 0, 1]);
        assert_eq!(t.product(xy, z), monomial_index([1, 1, 1]));
        for d in 0..6 {
            assert_eq!(MultTensor::new(1, d).len(), 3 * basis(d).len());
        }
    }

    #[test]
    fn contraction_examples() {
        let f = gf(5);
        let x = Form::monomial(f, [1, 0, 0]);
        let y = Form::monomial(f, [0, 1, 0]);
        let x2y = Form::monomial(f, [2, 1, 0]);
        assert_eq!(x.contract(&x2y).unwrap(), Form::monomial(f, [1, 1, 0]));
        assert!(y.contract(&Form::monomial(f, [2, 0, 0])).unwrap().is_zero());
        let g = Form::from_terms(f, &[(1, [1, 0, 0]), (1, [0, 1, 0])]).unwrap();
        let big = Form::from_terms(f, &[(1, [2, 0, 0]), (1, [1, 1, 0])]).unwrap();
        let expect = Form::from_terms(f, &[(2, [1, 0, 0]), (1, [0, 1, 0])]).unwrap();
        assert_eq!(g.contract(&big).unwrap(), expect);
        assert!(x2y.contract(&x).is_err());
    }

    #[test]
    fn inhomogeneous_rejected() {
        let f = gf(7);
        assert!(Form::from_terms(f, &[(1, [2, 0, 0]), (1, [0, 0, 3])]).is_err());
    }

    #[test]
    fn display() {
        let f = gf(7);
        let g = Form::from_terms(f, &[(1, [1, 1, 0]), (-1, [0, 0, 2]), (3, [2, 0, 0])]).unwrap();
        assert_eq!(g.to_string(), "3*x^2 + x*y - z^2");
    }

    #[test]
    fn macaulay_growth_values() {
        assert_eq!(macaulay_growth(12, 4), 15);
        assert_eq!(macaulay_growth(6, 3), 7);
        assert_eq!(macaulay_growth(2, 2), 2);
        assert_eq!(macaulay_growth(4, 2), 5);
        assert_eq!(macaulay_growth(0, 3), 0);
        for e in 1..6u32 {
            for d in 1..10u64 {
                assert_eq!(macaulay_growth(hq(e, d as i64), d), hq(e, d as i64 + 1));
            }
        }
    }
}
