//! Gorenstein ideals from Macaulay inverse systems, and random compressed
//! type-2 intersections built from pairs of them.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::FieldPrime;
use crate::graded_ring::{basis, monomial_index, Form};
use crate::ideal::{CompressedKind, GradedIdeal};
use crate::linalg::MatrixGF;

pub const DEFAULT_RETRY_CAP: usize = 100;

/// A nonzero form of degree at least 2, acted on by contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualForm(Form);

impl DualForm {
    pub fn new(form: Form) -> Result<DualForm> {
        if form.is_zero() {
            return Err(Error::Input("dual form must be nonzero".into()));
        }
        if form.degree() < 2 {
            return Err(Error::Input(format!(
                "dual form of degree {} < 2",
                form.degree()
            )));
        }
        Ok(DualForm(form))
    }

    /// Uniform draw from the nonzero forms of degree `s`.
    pub fn random<R: Rng + ?Sized>(s: usize, field: FieldPrime, rng: &mut R) -> Result<DualForm> {
        let n = basis(s).len();
        loop {
            let coeffs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..field.p())).collect();
            if coeffs.iter().any(|&c| c != 0) {
                return DualForm::new(Form::from_coeffs(field, s, coeffs)?);
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    pub fn form(&self) -> &Form {
        &self.0
    }

    /// Transposed catalecticant: rows indexed by `Q_{s-d}`, columns by `Q_d`,
    /// entry `F_{α+γ}`, so its kernel is `Ann(F)_d`.
    fn catalecticant_t(&self, d: usize) -> MatrixGF {
        let s = self.degree();
        let f = self.0.field();
        let (bd, bc) = (basis(d), basis(s - d));
        let coeffs = self.0.coeffs();
        let mut m = MatrixGF::zeros(f, bc.len(), bd.len());
        for (r, g) in bc.exponents().iter().enumerate() {
            for (c, a) in bd.exponents().iter().enumerate() {
                let v = coeffs[monomial_index([a[0] + g[0], a[1] + g[1], a[2] + g[2]])];
                if v != 0 {
                    m.set(r, c, v);
                }
            }
        }
        m
    }
}

/// `Ann(F)`, truncated at `D` (default `s + 2`).
pub fn annihilator(dual: &DualForm, truncation: Option<usize>) -> Result<GradedIdeal> {
    let s = dual.degree();
    let d_max = truncation.unwrap_or(s + 2);
    if d_max < s + 2 {
        return Err(Error::Input(format!(
            "truncation {d_max} is below s + 2 = {}",
            s + 2
        )));
    }
    let f = dual.form().field();
    let pieces = (0..=d_max)
        .map(|d| {
            if d <= s {
                dual.catalecticant_t(d).kernel_basis().row_reduce().1
            } else {
                MatrixGF::identity(f, basis(d).len())
            }
        })
        .collect();
    Ok(GradedIdeal::from_pieces(f, pieces))
}

/// Draws dual forms of degree `s` until the annihilator is compressed and
/// contained in `q^2`. Returns the ideal and the number of draws used.
pub fn random_compressed_gorenstein<R: Rng + ?Sized>(
    s: usize,
    field: FieldPrime,
    rng: &mut R,
    cap: usize,
) -> Result<(GradedIdeal, usize)> {
    if s < 2 {
        return Err(Error::Range(format!("socle degree {s} < 2")));
    }
    for draw in 1..=cap {
        let ideal = annihilator(&DualForm::random(s, field, rng)?, None)?;
        if ideal.is_embedded() && ideal.is_compressed(CompressedKind::Gorenstein)? {
            return Ok((ideal, draw));
        }
    }
    Err(Error::Genericity {
        what: format!("compressed Gorenstein ideal of socle degree {s} over {field}"),
        attempts: cap,
    })
}

/// A compressed type-2 intersection `I = I1 ∩ I2` with `I' = I1 + I2`.
#[derive(Debug, Clone)]
pub struct Type2Pair {
    pub s1: usize,
    pub s: usize,
    pub i1: GradedIdeal,
    pub i2: GradedIdeal,
    pub intersection: GradedIdeal,
    pub sum: GradedIdeal,
    /// Pairs drawn, including the accepted one.
    pub pair_draws: usize,
    /// Dual forms drawn across all pairs.
    pub gorenstein_draws: usize,
}

pub fn check_type2_range(s1: usize, s: usize) -> Result<()> {
    if s1 < 2 || s1 > s {
        return Err(Error::Range(format!(
            "(s1, s) = ({s1}, {s}) requires 2 <= s1 <= s"
        )));
    }
    if s >= 2 * s1 {
        return Err(Error::Range(format!(
            "(s1, s) = ({s1}, {s}) requires s < 2*s1"
        )));
    }
    Ok(())
}

pub fn random_type2_pair<R: Rng + ?Sized>(
    s1: usize,
    s: usize,
    field: FieldPrime,
    rng: &mut R,
    cap: usize,
) -> Result<Type2Pair> {
    check_type2_range(s1, s)?;
    let mut gorenstein_draws = 0;
    for pair_draws in 1..=cap {
        let (i1, n1) = random_compressed_gorenstein(s1, field, rng, cap)?;
        let (i2, n2) = random_compressed_gorenstein(s, field, rng, cap)?;
        gorenstein_draws += n1 + n2;
        let intersection = i1.intersect(&i2)?;
        if intersection.ring_type() != 2 || !intersection.is_compressed(CompressedKind::Type2)? {
            log::debug!("({s1}, {s}) draw {pair_draws}: intersection not compressed of type 2");
            continue;
        }
        let sum = i1.sum(&i2)?;
        return Ok(Type2Pair {
            s1,
            s,
            i1,
            i2,
            intersection,
            sum,
            pair_draws,
            gorenstein_draws,
        });
    }
    Err(Error::Genericity {
        what: format!("compressed type-2 intersection for (s1, s) = ({s1}, {s}) over {field}"),
        attempts: cap,
    })
}
