//! Dense univariate polynomials over a [`Field`].
//!
//! The free functions at the top work on raw coefficient slices and are shared
//! with the field module, which uses them for `F_p(t)` and extension
//! arithmetic. [`Poly`] wraps a coefficient vector with its field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::fields::{Elem, Field, FieldAutomorphism, FieldDescriptor};

/// Upper bound on the number of candidates any brute-force enumeration visits.
pub const ENUMERATION_BUDGET: u128 = 1 << 24;

pub(crate) fn trim(f: &Field, v: &mut Vec<Elem>) {
    while v.last().is_some_and(|c| f.is_zero(c)) {
        v.pop();
    }
}

fn prime_of(f: &Field) -> Option<u64> {
    match f.descriptor() {
        FieldDescriptor::Prime(p) => Some(*p),
        _ => None,
    }
}

fn residues(v: &[Elem]) -> Vec<u64> {
    v.iter()
        .map(|c| match c {
            Elem::Residue(r) => *r,
            _ => unreachable!(),
        })
        .collect()
}

fn from_residues(v: Vec<u64>) -> Vec<Elem> {
    let mut out: Vec<Elem> = v.into_iter().map(Elem::Residue).collect();
    while matches!(out.last(), Some(Elem::Residue(0))) {
        out.pop();
    }
    out
}

pub(crate) fn add(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = f.add(o, s);
    }
    trim(f, &mut out);
    out
}

pub(crate) fn neg(f: &Field, a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|c| f.neg(c)).collect()
}

pub(crate) fn sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), f.zero());
    }
    for (o, s) in out.iter_mut().zip(b) {
        *o = f.sub(o, s);
    }
    trim(f, &mut out);
    out
}

pub(crate) fn scale(f: &Field, a: &[Elem], c: &Elem) -> Vec<Elem> {
    if f.is_zero(c) {
        return Vec::new();
    }
    a.iter().map(|x| f.mul(x, c)).collect()
}

pub(crate) fn mul(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if let Some(p) = prime_of(f) {
        let (a, b) = (residues(a), residues(b));
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        return from_residues(out);
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, &mut out);
    out
}

/// Long division. Panics when `b` is zero.
pub(crate) fn divmod(f: &Field, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let lc_inv = f.inv(b.last().unwrap()).unwrap();
    let db = b.len() - 1;
    if let Some(p) = prime_of(f) {
        let lc_inv = residues(std::slice::from_ref(&lc_inv))[0];
        let bb = residues(b);
        let mut r = residues(a);
        let mut q = vec![0u64; a.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db] * lc_inv % p;
            q[k] = c;
            if c != 0 {
                for (j, bj) in bb.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - c * bj % p) % p;
                }
            }
        }
        r.truncate(db);
        return (from_residues(q), from_residues(r));
    }
    let mut r = a.to_vec();
    let mut q = vec![f.zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + db], &lc_inv);
        if !f.is_zero(&c) {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    trim(f, &mut r);
    trim(f, &mut q);
    (q, r)
}

pub(crate) fn rem(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.len() < b.len() {
        let mut r = a.to_vec();
        trim(f, &mut r);
        return r;
    }
    divmod(f, a, b).1
}

/// Extended Euclid: `(g, u, v)` with `g = u·a + v·b` and `g` monic. All
/// three are empty when both inputs are zero.
pub(crate) fn ext_gcd(f: &Field, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>, Vec<Elem>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divmod(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    match r0.last() {
        None => (Vec::new(), Vec::new(), Vec::new()),
        Some(lc) => {
            let c = f.inv(lc).unwrap();
            (scale(f, &r0, &c), scale(f, &s0, &c), scale(f, &t0, &c))
        }
    }
}

/// Whether a rendered coefficient can be followed by `*x` without brackets.
pub(crate) fn is_atomic(s: &str) -> bool {
    !s.contains(['+', '-', '/', '*', ' '])
}

pub(crate) fn format_dense(f: &Field, coeffs: &[Elem], var: &str) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if f.is_zero(c) {
            continue;
        }
        let (negative, mag) = f.split_sign(c);
        let term = if i == 0 {
            f.format(&mag)
        } else {
            let mono = if i == 1 {
                var.to_string()
            } else {
                format!("{var}^{i}")
            };
            if f.is_one(&mag) {
                mono
            } else {
                let s = f.format(&mag);
                if is_atomic(&s) {
                    format!("{s}*{mono}")
                } else {
                    format!("({s})*{mono}")
                }
            }
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push(if negative { '-' } else { '+' });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Dense polynomial over a field, coefficients in ascending degree order.
/// The zero polynomial has no coefficients; otherwise the leading one is
/// nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Self {
        trim(field, &mut coeffs);
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Self {
        Poly::constant(field, field.one())
    }

    pub fn x(field: &Field) -> Self {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn constant(field: &Field, c: Elem) -> Self {
        Poly::new(field, vec![c])
    }

    pub fn monomial(field: &Field, c: Elem, degree: usize) -> Self {
        let mut v = vec![field.zero(); degree];
        v.push(c);
        Poly::new(field, v)
    }

    /// Integer coefficients, ascending, mapped into the field.
    pub fn from_i64s(field: &Field, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// The polynomial of degree `< len` at position `index` of the counting
    /// order (coefficient indices as base-`q` digits, constant term least
    /// significant). Finite fields only.
    pub fn from_counting_index(field: &Field, mut index: u128, len: usize) -> Self {
        let q = field.order().expect("counting order over an infinite field");
        let coeffs = (0..len)
            .map(|_| {
                let c = field.element_at(index % q);
                index /= q;
                c
            })
            .collect();
        Poly::new(field, coeffs)
    }

    pub fn counting_index(&self) -> u128 {
        let q = self.field.order().expect("counting order over an infinite field");
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, c| acc * q + self.field.index_of(c))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.field.is_one(c))
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ))
        }
    }

    fn with(&self, coeffs: Vec<Elem>) -> Poly {
        Poly {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.with(add(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.with(sub(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.with(mul(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        self.with(scale(&self.field, &self.coeffs, c))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `(quotient, remainder)` with `self = quotient·b + remainder`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = divmod(&self.field, &self.coeffs, &b.coeffs);
        Ok((self.with(q), self.with(r)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(b)?.1)
    }

    /// Quotient of an exact division; a nonzero remainder is an error.
    pub fn exact_div(&self, b: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision(r))
        }
    }

    /// `(g, u, v)` with `g = u·self + v·b`, `g` the monic gcd.
    pub fn ext_gcd(&self, b: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.same_field(b)?;
        if self.is_zero() && b.is_zero() {
            return Err(Error::InvalidArgument("gcd of two zero polynomials".into()));
        }
        let (g, u, v) = ext_gcd(&self.field, &self.coeffs, &b.coeffs);
        Ok((self.with(g), self.with(u), self.with(v)))
    }

    pub fn gcd(&self, b: &Poly) -> Result<Poly> {
        Ok(self.ext_gcd(b)?.0)
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &Poly) -> Result<Option<Poly>> {
        let (g, u, _) = self.ext_gcd(m)?;
        if g.is_one() {
            Ok(Some(u.rem(m)?))
        } else {
            Ok(None)
        }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&self.field.inv(lc).unwrap()),
        }
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
            .collect();
        Poly::new(f, coeffs)
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Exact composition `self(q)`.
    pub fn compose(&self, q: &Poly) -> Result<Poly> {
        self.same_field(q)?;
        let f = &self.field;
        let mut acc: Vec<Elem> = Vec::new();
        for c in self.coeffs.iter().rev() {
            acc = add(f, &mul(f, &acc, &q.coeffs), std::slice::from_ref(c));
        }
        Ok(self.with(acc))
    }

    /// `self(q) mod m` by Horner evaluation, reducing after every step.
    pub fn compose_mod(&self, q: &Poly, m: &Poly) -> Result<Poly> {
        self.same_field(q)?;
        self.same_field(m)?;
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let q = rem(f, &q.coeffs, &m.coeffs);
        let mut acc: Vec<Elem> = Vec::new();
        for c in self.coeffs.iter().rev() {
            let step = add(f, &mul(f, &acc, &q), std::slice::from_ref(c));
            acc = rem(f, &step, &m.coeffs);
        }
        Ok(self.with(acc))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Result<Poly> {
        self.same_field(m)?;
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let mut base = rem(f, &self.coeffs, &m.coeffs);
        let mut acc = rem(f, &[f.one()], &m.coeffs);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(f, &mul(f, &acc, &base), &m.coeffs);
            }
            e >>= 1;
            if e > 0 {
                base = rem(f, &mul(f, &base, &base), &m.coeffs);
            }
        }
        Ok(self.with(acc))
    }

    /// Applies a field automorphism to every coefficient, fixing `X`.
    pub fn map_coeffs(&self, sigma: FieldAutomorphism) -> Result<Poly> {
        sigma.check(&self.field)?;
        if sigma.is_trivial_on(&self.field) {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| sigma.apply(&self.field, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(&self.field, coeffs))
    }

    /// Copy of this polynomial over a simple extension of its field (or
    /// over the field itself).
    pub fn lift_to(&self, ext: &Field) -> Poly {
        if *ext == self.field {
            return self.clone();
        }
        assert!(ext.base() == Some(&self.field), "{ext} does not extend {}", self.field);
        Poly::new(ext, self.coeffs.iter().map(|c| ext.embed_base(c)).collect())
    }

    /// Irreducibility over a finite field: `gcd(a, X^(q^i) − X) = 1` for
    /// every `i ≤ deg/2`, with `X^(q^i)` built by repeated powering mod `a`.
    pub fn is_irreducible_fq(&self) -> Result<bool> {
        let q = self
            .field
            .order()
            .ok_or_else(|| Error::UnsupportedField(self.field.to_string()))?;
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => {
                return Err(Error::InvalidArgument(
                    "irreducibility needs degree at least 1".into(),
                ))
            }
        };
        let a = self.monic();
        let x = Poly::x(&self.field);
        let mut h = x.rem(&a)?;
        for _ in 0..d / 2 {
            h = h.pow_mod(q, &a)?;
            if !(&h - &x).gcd(&a)?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All monic irreducible polynomials of exactly `degree`, in counting order.
    pub fn enumerate_irreducibles(field: &Field, degree: usize) -> Result<Vec<Poly>> {
        let q = field
            .order()
            .ok_or_else(|| Error::UnsupportedField(field.to_string()))?;
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        let count = q
            .checked_pow(degree as u32)
            .filter(|&c| c <= ENUMERATION_BUDGET)
            .ok_or(Error::BudgetExceeded(u128::MAX))?;
        let lead = Poly::monomial(field, field.one(), degree);
        let mut out = Vec::new();
        for i in 0..count {
            let cand = &Poly::from_counting_index(field, i, degree) + &lead;
            if cand.is_irreducible_fq()? {
                out.push(cand);
            }
        }
        Ok(out)
    }

    /// Rendering with a chosen indeterminate name.
    pub fn display_in(&self, var: &str) -> String {
        format_dense(&self.field, &self.coeffs, var)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;

            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("polynomials over different fields")
            }
        }

        impl $trait<Poly> for Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        self.with(neg(&self.field, &self.coeffs))
    }
}
