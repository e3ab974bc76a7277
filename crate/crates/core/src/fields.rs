//! Exact base fields: the rationals, prime fields `F_p`, rational function
//! fields `F_p(t)`, and simple extensions `K[a]/(m(a))` over a prime field
//! (possibly as a tower) or over the rationals.
//!
//! A [`Field`] is a cheap, shareable handle to a [`FieldDescriptor`]. Field
//! elements are stored as bare payloads ([`Elem`]) and every operation goes
//! through the field handle, so polynomial code never has to carry a
//! descriptor per coefficient. [`FieldElement`] pairs the two for callers
//! that want checked, self-describing values.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{self, Poly};

/// Largest prime accepted for `F_p`; residues multiply without overflow in `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// Canonical payload of a field element. Only meaningful together with the
/// [`Field`] that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    /// Element of `Q`, always in lowest terms with positive denominator.
    Rational(BigRational),
    /// Element of `F_p`, in `[0, p)`.
    Residue(u64),
    /// Element of `F_p(t)`.
    Fraction(Box<RatFn>),
    /// Element of a simple extension: coefficients over the base in the
    /// generator, ascending, no trailing zeros, fewer than `deg(modulus)`.
    Ext(Vec<Elem>),
}

/// Reduced ratio of two polynomials over `F_p`: coprime, monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Vec<Elem>,
    den: Vec<Elem>,
}

impl RatFn {
    pub fn numerator(&self) -> &[Elem] {
        &self.num
    }

    pub fn denominator(&self) -> &[Elem] {
        &self.den
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    Prime(u64),
    RationalFunctions {
        p: u64,
        var: String,
        prime: Field,
    },
    Extension {
        base: Field,
        modulus: Poly,
        generator: String,
    },
}

/// Shared handle to a field descriptor.
#[derive(Clone)]
pub struct Field(Arc<FieldDescriptor>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Prime(p) => write!(f, "F{p}"),
            FieldDescriptor::RationalFunctions { p, var, .. } => write!(f, "F{p}({var})"),
            FieldDescriptor::Extension {
                base,
                modulus,
                generator,
            } => write!(f, "{base}[{generator}]/({})", modulus.display_in(generator)),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(p as i64) as u64)
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldDescriptor::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::InvalidArgument(format!(
                "{p} is not a supported prime"
            )));
        }
        Ok(Field(Arc::new(FieldDescriptor::Prime(p))))
    }

    pub fn rational_functions(p: u64, var: &str) -> Result<Field> {
        let prime = Field::prime(p)?;
        check_symbol(var)?;
        if var == "x" || var == "X" {
            return Err(Error::InvalidArgument(
                "the function-field variable cannot be x".into(),
            ));
        }
        Ok(Field(Arc::new(FieldDescriptor::RationalFunctions {
            p,
            var: var.to_string(),
            prime,
        })))
    }

    /// Simple extension `base[generator]/(modulus)`.
    ///
    /// The modulus must be monic of degree at least 2. Over finite bases its
    /// irreducibility is verified; over the rationals it is taken on trust.
    pub fn extension(modulus: Poly, generator: &str) -> Result<Field> {
        let base = modulus.field().clone();
        match base.descriptor() {
            FieldDescriptor::Rationals | FieldDescriptor::Prime(_) => {}
            FieldDescriptor::Extension { .. } if base.is_finite() => {}
            _ => return Err(Error::UnsupportedField(base.to_string())),
        }
        check_symbol(generator)?;
        if generator == "x" || generator == "X" || base.symbols().iter().any(|s| s == generator) {
            return Err(Error::InvalidArgument(format!(
                "generator name `{generator}` is already in use"
            )));
        }
        if modulus.degree() < Some(2) {
            return Err(Error::InvalidArgument(format!(
                "extension modulus {modulus} must have degree at least 2"
            )));
        }
        if !modulus.is_monic() {
            return Err(Error::NotMonic(modulus));
        }
        if base.is_finite() && !modulus.is_irreducible_fq()? {
            return Err(Error::NotIrreducible(modulus));
        }
        Ok(Field(Arc::new(FieldDescriptor::Extension {
            base,
            modulus,
            generator: generator.to_string(),
        })))
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0
    }

    pub fn ptr_eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldDescriptor::Rationals => 0,
            FieldDescriptor::Prime(p) | FieldDescriptor::RationalFunctions { p, .. } => *p,
            FieldDescriptor::Extension { base, .. } => base.characteristic(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.prime_degree().is_some()
    }

    /// Dimension over the prime field, for finite fields.
    pub fn prime_degree(&self) -> Option<usize> {
        match &*self.0 {
            FieldDescriptor::Prime(_) => Some(1),
            FieldDescriptor::Extension { base, modulus, .. } => {
                Some(base.prime_degree()? * modulus.degree().unwrap_or(0))
            }
            _ => None,
        }
    }

    /// Number of elements, for finite fields small enough to count in `u128`.
    pub fn order(&self) -> Option<u128> {
        let m = u32::try_from(self.prime_degree()?).ok()?;
        (self.characteristic() as u128).checked_pow(m)
    }

    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            FieldDescriptor::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    /// The prime subfield `F_p` of a field of positive characteristic.
    pub fn prime_subfield(&self) -> Option<Field> {
        match &*self.0 {
            FieldDescriptor::Rationals => None,
            FieldDescriptor::Prime(_) => Some(self.clone()),
            FieldDescriptor::RationalFunctions { prime, .. } => Some(prime.clone()),
            FieldDescriptor::Extension { base, .. } => base.prime_subfield(),
        }
    }

    /// Symbol names that denote constants of this field in text syntax.
    pub fn symbols(&self) -> Vec<String> {
        match &*self.0 {
            FieldDescriptor::RationalFunctions { var, .. } => vec![var.clone()],
            FieldDescriptor::Extension {
                base, generator, ..
            } => {
                let mut s = base.symbols();
                s.push(generator.clone());
                s
            }
            _ => Vec::new(),
        }
    }

    /// The constant a symbol denotes, if it names one.
    pub fn symbol_value(&self, name: &str) -> Option<Elem> {
        match &*self.0 {
            FieldDescriptor::RationalFunctions { var, .. } if var == name => Some(self.ratfn(
                vec![Elem::Residue(0), Elem::Residue(1)],
                vec![Elem::Residue(1)],
            )),
            FieldDescriptor::Extension {
                base, generator, ..
            } => {
                if generator == name {
                    self.generator()
                } else {
                    base.symbol_value(name).map(|b| self.embed_base(&b))
                }
            }
            _ => None,
        }
    }

    /// Class of the generator of a simple extension.
    pub fn generator(&self) -> Option<Elem> {
        let base = self.base()?;
        Some(Elem::Ext(vec![base.zero(), base.one()]))
    }

    /// Image of a base-field element in a simple extension.
    pub fn embed_base(&self, b: &Elem) -> Elem {
        let base = self.base().expect("embed_base on a non-extension field");
        let mut v = vec![b.clone()];
        poly::trim(base, &mut v);
        Elem::Ext(v)
    }

    pub fn zero(&self) -> Elem {
        match &*self.0 {
            FieldDescriptor::Rationals => Elem::Rational(BigRational::zero()),
            FieldDescriptor::Prime(_) => Elem::Residue(0),
            FieldDescriptor::RationalFunctions { .. } => Elem::Fraction(Box::new(RatFn {
                num: Vec::new(),
                den: vec![Elem::Residue(1)],
            })),
            FieldDescriptor::Extension { .. } => Elem::Ext(Vec::new()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match &*self.0 {
            FieldDescriptor::Rationals => Elem::Rational(BigRational::from_integer(n.clone())),
            FieldDescriptor::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Elem::Residue(r.to_u64().expect("residue fits in u64"))
            }
            FieldDescriptor::RationalFunctions { prime, .. } => {
                let c = prime.from_bigint(n);
                self.ratfn(vec![c], vec![Elem::Residue(1)])
            }
            FieldDescriptor::Extension { base, .. } => self.embed_base(&base.from_bigint(n)),
        }
    }

    pub fn rational(&self, r: BigRational) -> Result<Elem> {
        match &*self.0 {
            FieldDescriptor::Rationals => Ok(Elem::Rational(r)),
            _ => {
                let n = self.from_bigint(r.numer());
                let d = self.from_bigint(r.denom());
                self.div(&n, &d)
            }
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rational(r) => r.is_zero(),
            Elem::Residue(r) => *r == 0,
            Elem::Fraction(f) => f.num.is_empty(),
            Elem::Ext(v) => v.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    fn p(&self) -> u64 {
        match &*self.0 {
            FieldDescriptor::Prime(p) => *p,
            _ => unreachable!("residue arithmetic outside a prime field"),
        }
    }

    fn ratfn(&self, num: Vec<Elem>, den: Vec<Elem>) -> Elem {
        let prime = match &*self.0 {
            FieldDescriptor::RationalFunctions { prime, .. } => prime,
            _ => unreachable!(),
        };
        Elem::Fraction(Box::new(reduce_ratfn(prime, num, den)))
    }

    fn ext_modulus(&self) -> (&Field, &Poly) {
        match &*self.0 {
            FieldDescriptor::Extension { base, modulus, .. } => (base, modulus),
            _ => unreachable!(),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Rational(x), Elem::Rational(y)) => Elem::Rational(x + y),
            (Elem::Residue(x), Elem::Residue(y)) => {
                let p = self.p();
                let s = x + y;
                Elem::Residue(if s >= p { s - p } else { s })
            }
            (Elem::Fraction(x), Elem::Fraction(y)) => {
                let prime = self.prime_subfield().unwrap();
                let num = poly::add(
                    &prime,
                    &poly::mul(&prime, &x.num, &y.den),
                    &poly::mul(&prime, &y.num, &x.den),
                );
                let den = poly::mul(&prime, &x.den, &y.den);
                self.ratfn(num, den)
            }
            (Elem::Ext(x), Elem::Ext(y)) => Elem::Ext(poly::add(self.ext_modulus().0, x, y)),
            _ => panic!("mixed payloads in {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Rational(x) => Elem::Rational(-x),
            Elem::Residue(x) => Elem::Residue(if *x == 0 { 0 } else { self.p() - x }),
            Elem::Fraction(x) => {
                let prime = self.prime_subfield().unwrap();
                Elem::Fraction(Box::new(RatFn {
                    num: poly::neg(&prime, &x.num),
                    den: x.den.clone(),
                }))
            }
            Elem::Ext(x) => Elem::Ext(poly::neg(self.ext_modulus().0, x)),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Residue(x), Elem::Residue(y)) => {
                let p = self.p();
                Elem::Residue(if x >= y { x - y } else { x + p - y })
            }
            (Elem::Rational(x), Elem::Rational(y)) => Elem::Rational(x - y),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Residue(x), Elem::Residue(y)) => Elem::Residue(x * y % self.p()),
            (Elem::Rational(x), Elem::Rational(y)) => Elem::Rational(x * y),
            (Elem::Fraction(x), Elem::Fraction(y)) => {
                let prime = self.prime_subfield().unwrap();
                let num = poly::mul(&prime, &x.num, &y.num);
                let den = poly::mul(&prime, &x.den, &y.den);
                self.ratfn(num, den)
            }
            (Elem::Ext(x), Elem::Ext(y)) => {
                let (base, modulus) = self.ext_modulus();
                let prod = poly::mul(base, x, y);
                Elem::Ext(poly::rem(base, &prod, modulus.coeffs()))
            }
            _ => panic!("mixed payloads in {self}"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match a {
            Elem::Rational(x) => Elem::Rational(x.recip()),
            Elem::Residue(x) => Elem::Residue(inv_mod(*x, self.p()).expect("p is prime")),
            Elem::Fraction(x) => self.ratfn(x.den.clone(), x.num.clone()),
            Elem::Ext(x) => {
                let (base, modulus) = self.ext_modulus();
                let (g, u, _) = poly::ext_gcd(base, x, modulus.coeffs());
                debug_assert!(g.len() == 1, "extension modulus is irreducible");
                Elem::Ext(u)
            }
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, mut e: u128) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Re-derives the canonical payload. Idempotent on canonical input.
    pub fn canonicalize(&self, a: &Elem) -> Elem {
        match (a, &*self.0) {
            (Elem::Rational(r), FieldDescriptor::Rationals) => {
                Elem::Rational(BigRational::new(r.numer().clone(), r.denom().clone()))
            }
            (Elem::Residue(r), FieldDescriptor::Prime(p)) => Elem::Residue(r % p),
            (Elem::Fraction(f), FieldDescriptor::RationalFunctions { .. }) => {
                self.ratfn(f.num.clone(), f.den.clone())
            }
            (Elem::Ext(v), FieldDescriptor::Extension { base, modulus, .. }) => {
                let v: Vec<Elem> = v.iter().map(|c| base.canonicalize(c)).collect();
                Elem::Ext(poly::rem(base, &v, modulus.coeffs()))
            }
            _ => panic!("payload does not belong to {self}"),
        }
    }

    /// Whether `a` is a payload of this field (right shape, canonical).
    pub fn contains(&self, a: &Elem) -> bool {
        let shape_ok = matches!(
            (a, &*self.0),
            (Elem::Rational(_), FieldDescriptor::Rationals)
                | (Elem::Residue(_), FieldDescriptor::Prime(_))
                | (Elem::Fraction(_), FieldDescriptor::RationalFunctions { .. })
                | (Elem::Ext(_), FieldDescriptor::Extension { .. })
        );
        shape_ok
            && match (a, &*self.0) {
                (Elem::Ext(v), FieldDescriptor::Extension { base, .. }) => {
                    v.iter().all(|c| base.contains(c)) && self.canonicalize(a) == *a
                }
                _ => self.canonicalize(a) == *a,
            }
    }

    /// Splits off a sign for display. Only rationals are ever negative.
    pub(crate) fn split_sign(&self, a: &Elem) -> (bool, Elem) {
        match a {
            Elem::Rational(r) if r.is_negative() => (true, Elem::Rational(-r)),
            _ => (false, a.clone()),
        }
    }

    pub fn format(&self, a: &Elem) -> String {
        match (a, &*self.0) {
            (Elem::Rational(r), _) => r.to_string(),
            (Elem::Residue(r), _) => r.to_string(),
            (Elem::Fraction(f), FieldDescriptor::RationalFunctions { var, prime, .. }) => {
                let num = poly::format_dense(prime, &f.num, var);
                if f.den.len() == 1 {
                    return num;
                }
                let den = poly::format_dense(prime, &f.den, var);
                format!("{}/{}", wrap(&num), wrap(&den))
            }
            (Elem::Ext(v), FieldDescriptor::Extension {
                base, generator, ..
            }) => poly::format_dense(base, v, generator),
            _ => panic!("payload does not belong to {self}"),
        }
    }

    /// Coordinates over the prime subfield (finite fields only).
    pub fn prime_coords(&self, a: &Elem) -> Vec<u64> {
        match (a, &*self.0) {
            (Elem::Residue(r), _) => vec![*r],
            (Elem::Ext(v), FieldDescriptor::Extension { base, modulus, .. }) => {
                let zero = base.zero();
                let d = modulus.degree().unwrap();
                (0..d)
                    .flat_map(|i| base.prime_coords(v.get(i).unwrap_or(&zero)))
                    .collect()
            }
            _ => panic!("prime coordinates requested over infinite field {self}"),
        }
    }

    pub fn from_prime_coords(&self, coords: &[u64]) -> Elem {
        match &*self.0 {
            FieldDescriptor::Prime(p) => Elem::Residue(coords[0] % p),
            FieldDescriptor::Extension { base, modulus, .. } => {
                let m = base.prime_degree().unwrap();
                let d = modulus.degree().unwrap();
                let mut v: Vec<Elem> = (0..d)
                    .map(|i| base.from_prime_coords(&coords[i * m..(i + 1) * m]))
                    .collect();
                poly::trim(base, &mut v);
                Elem::Ext(v)
            }
            _ => panic!("prime coordinates requested over infinite field {self}"),
        }
    }

    /// Position of `a` in the counting order of a finite field: prime
    /// coordinates read as base-`p` digits, first coordinate least significant.
    pub fn index_of(&self, a: &Elem) -> u128 {
        let p = self.characteristic() as u128;
        self.prime_coords(a)
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * p + c as u128)
    }

    pub fn element_at(&self, mut index: u128) -> Elem {
        let p = self.characteristic() as u128;
        let m = self.prime_degree().expect("element_at over an infinite field");
        let coords: Vec<u64> = (0..m)
            .map(|_| {
                let c = (index % p) as u64;
                index /= p;
                c
            })
            .collect();
        self.from_prime_coords(&coords)
    }

    /// All elements of a finite field in counting order.
    pub fn elements(&self) -> Result<impl Iterator<Item = Elem> + '_> {
        let q = self
            .order()
            .ok_or_else(|| Error::UnsupportedField(self.to_string()))?;
        Ok((0..q).map(move |i| self.element_at(i)))
    }

    /// A basis of the field over its prime subfield, matching `prime_coords`.
    pub fn prime_basis(&self) -> Vec<Elem> {
        let m = self.prime_degree().expect("prime basis of an infinite field");
        (0..m)
            .map(|i| {
                let mut c = vec![0u64; m];
                c[i] = 1;
                self.from_prime_coords(&c)
            })
            .collect()
    }

    /// A random element: uniform on finite fields, small height otherwise.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match &*self.0 {
            FieldDescriptor::Rationals => Elem::Rational(BigRational::new(
                BigInt::from(rng.gen_range(-9i64..=9)),
                BigInt::from(rng.gen_range(1i64..=5)),
            )),
            FieldDescriptor::RationalFunctions { prime, .. } => {
                let num: Vec<Elem> = (0..3).map(|_| prime.random(rng)).collect();
                let mut den: Vec<Elem> = (0..2).map(|_| prime.random(rng)).collect();
                den.push(prime.one());
                self.ratfn(num, den)
            }
            FieldDescriptor::Extension { base, modulus, .. } if !self.is_finite() => {
                let d = modulus.degree().unwrap_or(1);
                self.canonicalize(&Elem::Ext((0..d).map(|_| base.random(rng)).collect()))
            }
            _ => {
                let q = self.order().expect("finite field of countable size");
                self.element_at(rng.gen_range(0..q))
            }
        }
    }
}

fn wrap(s: &str) -> String {
    if poly::is_atomic(s) {
        s.to_string()
    } else {
        format!("({s})")
    }
}

pub(crate) fn check_symbol(name: &str) -> Result<()> {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("`{name}` is not a valid symbol")))
    }
}

fn reduce_ratfn(prime: &Field, mut num: Vec<Elem>, mut den: Vec<Elem>) -> RatFn {
    poly::trim(prime, &mut num);
    poly::trim(prime, &mut den);
    assert!(!den.is_empty(), "zero denominator in F_p(t)");
    if num.is_empty() {
        return RatFn {
            num,
            den: vec![prime.one()],
        };
    }
    let (g, _, _) = poly::ext_gcd(prime, &num, &den);
    if g.len() > 1 {
        num = poly::divmod(prime, &num, &g).0;
        den = poly::divmod(prime, &den, &g).0;
    }
    let lc_inv = prime.inv(den.last().unwrap()).unwrap();
    RatFn {
        num: poly::scale(prime, &num, &lc_inv),
        den: poly::scale(prime, &den, &lc_inv),
    }
}

/// A field element together with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl FieldElement {
    /// Wraps a payload, canonicalizing it. Panics if the payload has the
    /// wrong shape for `field`.
    pub fn new(field: &Field, value: Elem) -> Self {
        let value = field.canonicalize(&value);
        FieldElement {
            field: field.clone(),
            value,
        }
    }

    pub fn from_i64(field: &Field, n: i64) -> Self {
        FieldElement {
            field: field.clone(),
            value: field.from_i64(n),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn into_value(self) -> Elem {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ))
        }
    }

    fn wrap(&self, value: Elem) -> Self {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(&self.value, &other.value)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(&self.value, &other.value)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(&self.value, &other.value)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.div(&self.value, &other.value)?))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field.inv(&self.value)?))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.field.neg(&self.value))
    }

    pub fn apply(&self, sigma: FieldAutomorphism) -> Result<Self> {
        Ok(self.wrap(sigma.apply(&self.field, &self.value)?))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

/// The field automorphisms the library can compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum FieldAutomorphism {
    #[default]
    Identity,
    /// `a ↦ a^(p^e)` on a finite field of characteristic `p`, `e ≥ 1`.
    FrobeniusPower(u32),
}

impl FieldAutomorphism {
    pub fn frobenius(e: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidArgument(
                "Frobenius exponent must be at least 1".into(),
            ));
        }
        Ok(FieldAutomorphism::FrobeniusPower(e))
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, FieldAutomorphism::Identity)
    }

    pub fn check(&self, field: &Field) -> Result<()> {
        match self {
            FieldAutomorphism::Identity => Ok(()),
            FieldAutomorphism::FrobeniusPower(0) => Err(Error::InvalidArgument(
                "Frobenius exponent must be at least 1".into(),
            )),
            FieldAutomorphism::FrobeniusPower(_) if field.is_finite() => Ok(()),
            FieldAutomorphism::FrobeniusPower(_) => Err(Error::UnsupportedAutomorphism(
                self.to_string(),
                field.to_string(),
            )),
        }
    }

    pub fn apply(&self, field: &Field, a: &Elem) -> Result<Elem> {
        self.check(field)?;
        Ok(match self {
            FieldAutomorphism::Identity => a.clone(),
            FieldAutomorphism::FrobeniusPower(e) => {
                if matches!(field.descriptor(), FieldDescriptor::Prime(_)) {
                    return Ok(a.clone());
                }
                let p = field.characteristic() as u128;
                let mut x = a.clone();
                // a^(p^e) with e reduced by the order of Frobenius
                let m = field.prime_degree().unwrap() as u32;
                for _ in 0..(e % m) {
                    x = field.pow(&x, p);
                }
                x
            }
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldAutomorphism::Identity, s) | (s, FieldAutomorphism::Identity) => *s,
            (FieldAutomorphism::FrobeniusPower(a), FieldAutomorphism::FrobeniusPower(b)) => {
                FieldAutomorphism::FrobeniusPower(a + b)
            }
        }
    }

    /// Inverse on `field`: Frobenius has order equal to the prime degree.
    pub fn inverse(&self, field: &Field) -> Result<Self> {
        self.check(field)?;
        Ok(match self {
            FieldAutomorphism::Identity => FieldAutomorphism::Identity,
            FieldAutomorphism::FrobeniusPower(e) => {
                let m = field.prime_degree().unwrap() as u32;
                match (m - e % m) % m {
                    0 => FieldAutomorphism::Identity,
                    k => FieldAutomorphism::FrobeniusPower(k),
                }
            }
        })
    }

    /// Whether this automorphism acts as the identity on `field`.
    pub fn is_trivial_on(&self, field: &Field) -> bool {
        match self {
            FieldAutomorphism::Identity => true,
            FieldAutomorphism::FrobeniusPower(e) => field
                .prime_degree()
                .is_some_and(|m| (*e as usize).is_multiple_of(m)),
        }
    }
}

impl fmt::Display for FieldAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldAutomorphism::Identity => write!(f, "id"),
            FieldAutomorphism::FrobeniusPower(e) => write!(f, "frob^{e}"),
        }
    }
}

impl std::str::FromStr for FieldAutomorphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "id" | "identity" => Ok(FieldAutomorphism::Identity),
            "frob" => Ok(FieldAutomorphism::FrobeniusPower(1)),
            _ => {
                let e = s
                    .strip_prefix("frob^")
                    .and_then(|e| e.parse::<u32>().ok())
                    .ok_or_else(|| Error::parse(s, "expected `id`, `frob` or `frob^e`"))?;
                FieldAutomorphism::frobenius(e).map_err(|_| Error::parse(s, "exponent must be ≥ 1"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_element, parse_field};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn el(field: &Field, s: &str) -> Elem {
        parse_element(field, s).unwrap().into_value()
    }

    fn sample_fields() -> Vec<Field> {
        ["Q", "F2", "F3", "F7", "F2(t)", "F3(t)", "F2[a]/(a^2+a+1)", "F3[a]/(a^2+1)", "Q[r]/(r^2-2)",
         "F2[a]/(a^2+a+1)[b]/(b^2+b+a)"]
            .iter()
            .map(|s| parse_field(s).unwrap())
            .collect()
    }

    #[test]
    fn trivial_arithmetic_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.mul(&Elem::Residue(2), &Elem::Residue(2)), Elem::Residue(1));

        let q = Field::rationals();
        assert_eq!(q.format(&q.add(&el(&q, "1/2"), &el(&q, "1/3"))), "5/6");

        let f2t = parse_field("F2(t)").unwrap();
        let t = el(&f2t, "t");
        let inv_t = el(&f2t, "1/t");
        assert!(f2t.is_one(&f2t.mul(&inv_t, &t)));
    }

    #[test]
    fn checked_ops_report_errors() {
        let f3 = Field::prime(3).unwrap();
        let f5 = Field::prime(5).unwrap();
        let a = FieldElement::from_i64(&f3, 1);
        let b = FieldElement::from_i64(&f5, 1);
        assert!(matches!(a.checked_add(&b), Err(Error::DescriptorMismatch(..))));
        let z = FieldElement::from_i64(&f3, 0);
        assert!(matches!(a.checked_div(&z), Err(Error::DivisionByZero)));
    }

    #[test]
    fn frobenius_examples() {
        let f4 = parse_field("F2[a]/(a^2+a+1)").unwrap();
        let a = f4.generator().unwrap();
        let frob = FieldAutomorphism::FrobeniusPower(1);
        assert_eq!(f4.format(&frob.apply(&f4, &a).unwrap()), "a+1");

        let f3 = Field::prime(3).unwrap();
        assert_eq!(frob.apply(&f3, &Elem::Residue(2)).unwrap(), Elem::Residue(2));

        let q = Field::rationals();
        let x = el(&q, "5/7");
        assert_eq!(FieldAutomorphism::Identity.apply(&q, &x).unwrap(), x);
        assert!(matches!(
            frob.apply(&q, &x),
            Err(Error::UnsupportedAutomorphism(..))
        ));
        let f2t = parse_field("F2(t)").unwrap();
        assert!(frob.apply(&f2t, &f2t.one()).is_err());
    }

    #[test]
    fn field_axioms_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in sample_fields() {
            for _ in 0..200 {
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)), "{f}");
                assert_eq!(
                    f.mul(&a, &f.add(&b, &c)),
                    f.add(&f.mul(&a, &b), &f.mul(&a, &c)),
                    "{f}"
                );
                assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                assert!(f.is_zero(&f.sub(&a, &a)));
                if !f.is_zero(&a) {
                    assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())), "{f}: {}", f.format(&a));
                }
                assert_eq!(f.canonicalize(&a), a);
                assert!(f.contains(&a));
            }
        }
    }

    #[test]
    fn automorphisms_are_ring_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in sample_fields().into_iter().filter(|f| f.is_finite()) {
            let m = f.prime_degree().unwrap() as u32;
            for e in 1..=m + 1 {
                let s = FieldAutomorphism::FrobeniusPower(e);
                for _ in 0..200 {
                    let (a, b) = (f.random(&mut rng), f.random(&mut rng));
                    let sa = s.apply(&f, &a).unwrap();
                    let sb = s.apply(&f, &b).unwrap();
                    assert_eq!(s.apply(&f, &f.add(&a, &b)).unwrap(), f.add(&sa, &sb));
                    assert_eq!(s.apply(&f, &f.mul(&a, &b)).unwrap(), f.mul(&sa, &sb));
                }
            }
            // iterating frob^e k times equals frob^(e*k)
            for a in f.elements().unwrap() {
                for (e, k) in [(1u32, 2u32), (1, 3), (2, 2)] {
                    let s = FieldAutomorphism::FrobeniusPower(e);
                    let mut x = a.clone();
                    for _ in 0..k {
                        x = s.apply(&f, &x).unwrap();
                    }
                    assert_eq!(x, FieldAutomorphism::FrobeniusPower(e * k).apply(&f, &a).unwrap());
                }
                let s = FieldAutomorphism::FrobeniusPower(1);
                let back = s.inverse(&f).unwrap().apply(&f, &s.apply(&f, &a).unwrap()).unwrap();
                assert_eq!(back, a);
            }
        }
    }

    #[test]
    fn counting_order_round_trips() {
        for f in sample_fields().into_iter().filter(|f| f.is_finite()) {
            let q = f.order().unwrap();
            for i in 0..q {
                assert_eq!(f.index_of(&f.element_at(i)), i);
            }
        }
    }

    #[test]
    fn descriptor_validation() {
        assert!(Field::prime(4).is_err());
        assert!(Field::rational_functions(2, "x").is_err());
        let f2 = Field::prime(2).unwrap();
        let reducible = Poly::from_i64s(&f2, &[1, 0, 1]);
        assert!(matches!(Field::extension(reducible, "a"), Err(Error::NotIrreducible(_))));
        let f2t = Field::rational_functions(2, "t").unwrap();
        let m = Poly::from_i64s(&f2t, &[1, 1, 1]);
        assert!(matches!(Field::extension(m, "a"), Err(Error::UnsupportedField(_))));
    }
}
