//! Independent checks on constructed morphisms: exact linear algebra over
//! the base field (or its prime subfield for Frobenius twists) and brute
//! force on tiny rings.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::quotient::{QuotientElement, QuotientRing, StabilizingMorphism};

/// Rings above this size are refused by the exhaustive checks.
pub const EXHAUSTIVE_CAP: u128 = 1 << 10;

/// Dense row-major matrix over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        let n = rows.len();
        let entries = rows
            .into_iter()
            .flatten()
            .map(|e| field.canonicalize(&e))
            .collect();
        Ok(Matrix {
            field: field.clone(),
            rows: n,
            cols,
            entries,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(self.get(i, j), &v[j])))
            })
            .collect()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !f.is_zero(m.get(i, col))) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.entries.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for j in col..m.cols {
                let v = f.mul(m.get(row, j), &inv);
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row || f.is_zero(m.get(i, col)) {
                    continue;
                }
                let c = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&c, m.get(row, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space; empty exactly when the matrix is injective.
    pub fn kernel_basis(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, free));
                }
                v
            })
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.field.format(self.get(i, j)))
                .collect();
            writeln!(out, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Elem>> {
    m.kernel_basis()
}

fn padded(coeffs: &[Elem], len: usize, field: &Field) -> Vec<Elem> {
    let mut v = coeffs.to_vec();
    v.resize(len, field.zero());
    v
}

/// Matrix of `f` on the monomial basis of the source.
///
/// When `σ` acts trivially on `K` the matrix is over `K`. Otherwise `f` is
/// only semilinear over `K`, and the matrix is taken over the prime
/// subfield on the basis `gᵢXʲ` (column `j·m + i`), with `gᵢ` the prime
/// basis of `K`.
pub fn morphism_matrix(f: &StabilizingMorphism) -> Result<Matrix> {
    let field = f.source().field();
    let sigma = f.sigma();
    let (ds, dt) = (f.source().dimension(), f.target().dimension());
    let modulus = f.target().modulus();
    if sigma.is_trivial_on(field) {
        let mut m = Matrix::zero(field, dt, ds);
        let mut pw = crate::poly::Poly::one(field);
        for j in 0..ds {
            for (i, c) in padded(pw.coeffs(), dt, field).into_iter().enumerate() {
                m.set(i, j, c);
            }
            pw = (&pw * f.q_image()).rem(modulus)?;
        }
        return Ok(m);
    }
    if !field.is_finite() {
        return Err(Error::UnsupportedAutomorphism(
            sigma.to_string(),
            field.to_string(),
        ));
    }
    let prime = field.prime_subfield().expect("finite field has a prime subfield");
    let basis = field.prime_basis();
    let k = basis.len();
    let images: Vec<Elem> = basis
        .iter()
        .map(|g| sigma.apply(field, g))
        .collect::<Result<_>>()?;
    let mut m = Matrix::zero(&prime, dt * k, ds * k);
    let mut pw = crate::poly::Poly::one(field);
    for j in 0..ds {
        for (i, img) in images.iter().enumerate() {
            let col = pw.scale(img);
            for (t, c) in padded(col.coeffs(), dt, field).iter().enumerate() {
                for (s, r) in field.prime_coords(c).into_iter().enumerate() {
                    m.set(t * k + s, j * k + i, Elem::Residue(r));
                }
            }
        }
        pw = (&pw * f.q_image()).rem(modulus)?;
    }
    Ok(m)
}

/// Dimension over `K` of the kernel of `f` (an ideal, hence a
/// `K`-subspace even for semilinear `f`).
pub fn kernel_dimension(f: &StabilizingMorphism) -> Result<usize> {
    let m = morphism_matrix(f)?;
    let scale = if f.sigma().is_trivial_on(f.source().field()) {
        1
    } else {
        f.source().field().prime_degree().unwrap()
    };
    Ok(m.kernel_basis().len() / scale)
}

/// True exactly when `f` is injective and source and target have equal
/// dimension over `K`.
pub fn certify_isomorphism(f: &StabilizingMorphism) -> Result<bool> {
    if f.source().dimension() != f.target().dimension() {
        return Ok(false);
    }
    Ok(morphism_matrix(f)?.kernel_basis().is_empty())
}

/// Outcome of a brute-force ring-map check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustiveReport {
    pub pairs_checked: usize,
    /// First pair `(a, b)` with `φ(a+b) ≠ φ(a)+φ(b)` or `φ(ab) ≠ φ(a)φ(b)`.
    pub witness: Option<(QuotientElement, QuotientElement)>,
}

impl ExhaustiveReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn exhaustive_size(ring: &QuotientRing) -> Result<u128> {
    let size = ring
        .size()
        .ok_or_else(|| Error::UnsupportedField(ring.field().to_string()))?;
    if size > EXHAUSTIVE_CAP {
        return Err(Error::TooLarge(size));
    }
    Ok(size)
}

/// Checks additivity and multiplicativity of an arbitrary map over all
/// pairs of source elements, and that `1 ↦ 1`.
pub fn exhaustive_map_check<F>(
    source: &QuotientRing,
    target: &QuotientRing,
    map: F,
) -> Result<ExhaustiveReport>
where
    F: Fn(&QuotientElement) -> Result<QuotientElement>,
{
    let size = exhaustive_size(source)? as usize;
    let elements: Vec<QuotientElement> = source.elements()?.collect();
    let images: Vec<QuotientElement> = elements.iter().map(&map).collect::<Result<_>>()?;
    if images.iter().any(|y| y.ring() != target) {
        return Err(Error::RingMismatch);
    }
    let mut report = ExhaustiveReport {
        pairs_checked: 0,
        witness: None,
    };
    let one = source.one().rep().counting_index() as usize;
    if images[one] != target.one() {
        report.witness = Some((source.one(), source.one()));
        return Ok(report);
    }
    for i in 0..size {
        for j in i..size {
            let (a, b) = (&elements[i], &elements[j]);
            let s = (a + b).rep().counting_index() as usize;
            let p = (a * b).rep().counting_index() as usize;
            if images[s] != &images[i] + &images[j] || images[p] != &images[i] * &images[j] {
                report.witness = Some((a.clone(), b.clone()));
                return Ok(report);
            }
            report.pairs_checked += 1;
        }
    }
    Ok(report)
}

pub fn exhaustive_morphism_check(f: &StabilizingMorphism) -> Result<ExhaustiveReport> {
    exhaustive_map_check(f.source(), f.target(), |a| f.apply(a))
}
