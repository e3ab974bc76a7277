//! The local rings `K[X]/(P^n)` and morphisms between them.
//!
//! A morphism is stored as a base-field automorphism `σ` together with the
//! image of the class of `X`; its action on a class `h` is `σ(h)(q)` reduced
//! modulo the target modulus. Construction checks well-definedness, so every
//! [`StabilizingMorphism`] in existence sends the source modulus to zero.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Field, FieldAutomorphism};
use crate::parse::{parse_field, parse_poly};
use crate::poly::Poly;

/// How a ring constructor treats the irreducibility hypothesis on `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Check it (finite fields only).
    Verify,
    /// Take the caller's word for it.
    Assumed,
}

impl Irreducibility {
    /// `Verify` over finite fields, `Assumed` otherwise.
    pub fn default_for(field: &Field) -> Self {
        if field.is_finite() {
            Irreducibility::Verify
        } else {
            Irreducibility::Assumed
        }
    }
}

#[derive(Debug)]
struct RingData {
    base: Poly,
    power: usize,
    modulus: Poly,
}

/// `K[X]/(P^n)` for a monic irreducible `P`.
#[derive(Clone)]
pub struct QuotientRing(Arc<RingData>);

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.power == other.0.power && self.0.base == other.0.base)
    }
}

impl Eq for QuotientRing {}

impl Hash for QuotientRing {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.base.hash(state);
        self.0.power.hash(state);
    }
}

impl fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuotientRing({self})")
    }
}

impl fmt::Display for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field();
        if self.0.power == 1 {
            write!(f, "{field}[x]/({})", self.0.base)
        } else {
            write!(f, "{field}[x]/(({})^{})", self.0.base, self.0.power)
        }
    }
}

impl QuotientRing {
    pub fn new(p: Poly, n: usize, irreducibility: Irreducibility) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("ring power must be at least 1".into()));
        }
        if p.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidArgument(format!(
                "{p} must have degree at least 1"
            )));
        }
        if !p.is_monic() {
            return Err(Error::NotMonic(p));
        }
        if irreducibility == Irreducibility::Verify && !p.is_irreducible_fq()? {
            return Err(Error::NotIrreducible(p));
        }
        Ok(Self::build(p, n))
    }

    /// Constructor with [`Irreducibility::default_for`] the field of `p`.
    pub fn make(p: Poly, n: usize) -> Result<Self> {
        let check = Irreducibility::default_for(p.field());
        Self::new(p, n, check)
    }

    fn build(p: Poly, n: usize) -> Self {
        let modulus = p.pow(n as u32);
        QuotientRing(Arc::new(RingData {
            base: p,
            power: n,
            modulus,
        }))
    }

    pub fn field(&self) -> &Field {
        self.0.base.field()
    }

    /// The irreducible `P`.
    pub fn base_poly(&self) -> &Poly {
        &self.0.base
    }

    pub fn power(&self) -> usize {
        self.0.power
    }

    /// `P^n`.
    pub fn modulus(&self) -> &Poly {
        &self.0.modulus
    }

    pub fn base_degree(&self) -> usize {
        self.0.base.degree().unwrap()
    }

    /// Dimension over `K`, `n·deg P`.
    pub fn dimension(&self) -> usize {
        self.0.power * self.base_degree()
    }

    /// Number of elements, when the base field is finite and the count fits.
    pub fn size(&self) -> Option<u128> {
        self.field().order()?.checked_pow(self.dimension() as u32)
    }

    /// The ring `K[X]/(P^m)` with the same `P`.
    pub fn level(&self, m: usize) -> Result<QuotientRing> {
        if m == 0 {
            return Err(Error::BadTarget {
                level: m,
                power: self.power(),
            });
        }
        if m == self.power() {
            return Ok(self.clone());
        }
        Ok(Self::build(self.0.base.clone(), m))
    }

    /// The residue field `K[X]/(P)`.
    pub fn residue_field(&self) -> QuotientRing {
        self.level(1).unwrap()
    }

    /// Class of a polynomial.
    pub fn element(&self, p: &Poly) -> Result<QuotientElement> {
        let rep = p.rem(self.modulus())?;
        Ok(QuotientElement {
            ring: self.clone(),
            rep,
        })
    }

    pub(crate) fn reduced(&self, rep: Poly) -> QuotientElement {
        debug_assert!(rep.degree().is_none_or(|d| d < self.modulus().degree().unwrap()));
        QuotientElement {
            ring: self.clone(),
            rep,
        }
    }

    pub fn zero(&self) -> QuotientElement {
        self.reduced(Poly::zero(self.field()))
    }

    pub fn one(&self) -> QuotientElement {
        self.reduced(Poly::one(self.field()))
    }

    /// Class of `X`.
    pub fn x(&self) -> QuotientElement {
        self.element(&Poly::x(self.field())).unwrap()
    }

    /// Class of `P`, the generator of the maximal ideal.
    pub fn p_class(&self) -> QuotientElement {
        self.element(self.base_poly()).unwrap()
    }

    /// Element at a position of the counting order of representatives.
    pub fn element_at(&self, index: u128) -> QuotientElement {
        self.reduced(Poly::from_counting_index(self.field(), index, self.dimension()))
    }

    /// Every element, in counting order (finite base fields only).
    pub fn elements(&self) -> Result<impl Iterator<Item = QuotientElement> + '_> {
        let size = self
            .size()
            .ok_or_else(|| Error::UnsupportedField(self.field().to_string()))?;
        Ok((0..size).map(move |i| self.element_at(i)))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> QuotientElement {
        let f = self.field();
        let coeffs = (0..self.dimension()).map(|_| f.random(rng)).collect();
        self.reduced(Poly::new(f, coeffs))
    }
}

/// A class in `K[X]/(P^n)`, held by its reduced representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientElement {
    ring: QuotientRing,
    rep: Poly,
}

impl QuotientElement {
    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    /// Representative of degree below `deg(P^n)`.
    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.ring.reduced(&self.rep + &other.rep))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.ring.reduced(&self.rep - &other.rep))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        self.ring.element(&(&self.rep * &other.rep))
    }

    pub fn pow(&self, e: u32) -> Self {
        let rep = self.rep.pow_mod(e as u128, self.ring.modulus()).unwrap();
        self.ring.reduced(rep)
    }

    /// Units of the local ring are exactly the classes prime to `P`.
    pub fn is_unit(&self) -> bool {
        self.rep.gcd(self.ring.base_poly()).unwrap().is_one()
    }

    pub fn invert(&self) -> Result<Self> {
        match self.rep.inverse_mod(self.ring.modulus())? {
            Some(inv) => Ok(self.ring.reduced(inv)),
            None => Err(Error::NotAUnit(self.rep.clone())),
        }
    }

    /// Image under `K[X]/(P^n) → K[X]/(P^m)`, `1 ≤ m ≤ n`.
    pub fn project(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.ring.power() {
            return Err(Error::BadTarget {
                level: m,
                power: self.ring.power(),
            });
        }
        self.ring.level(m)?.element(&self.rep)
    }
}

impl fmt::Display for QuotientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

macro_rules! elem_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuotientElement> for &QuotientElement {
            type Output = QuotientElement;

            fn $method(self, rhs: &QuotientElement) -> QuotientElement {
                self.$checked(rhs).expect("elements of different rings")
            }
        }
    };
}

elem_binop!(Add, add, checked_add);
elem_binop!(Sub, sub, checked_sub);
elem_binop!(Mul, mul, checked_mul);

impl Neg for &QuotientElement {
    type Output = QuotientElement;

    fn neg(self) -> QuotientElement {
        self.ring.reduced(-&self.rep)
    }
}

/// Ring morphism `K[X]/(P₁^m) → K[X]/(P₂^n)` restricting to `σ` on `K`.
#[derive(Clone, Debug)]
pub struct StabilizingMorphism {
    source: QuotientRing,
    target: QuotientRing,
    sigma: FieldAutomorphism,
    q_image: Poly,
    s_cert: Option<Poly>,
}

impl PartialEq for StabilizingMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.sigma == other.sigma
            && self.q_image == other.q_image
    }
}

impl Eq for StabilizingMorphism {}

impl StabilizingMorphism {
    /// Builds the morphism sending the class of `X` to the class of `q`.
    ///
    /// Fails with [`Error::NotWellDefined`] unless `σ(P₁^m)(q) ≡ 0` modulo the
    /// target modulus; the error carries that residue.
    pub fn new(
        source: &QuotientRing,
        target: &QuotientRing,
        sigma: FieldAutomorphism,
        q: &Poly,
    ) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::DescriptorMismatch(
                source.field().to_string(),
                target.field().to_string(),
            ));
        }
        sigma.check(source.field())?;
        let q_image = q.rem(target.modulus())?;
        let residue = source
            .modulus()
            .map_coeffs(sigma)?
            .compose_mod(&q_image, target.modulus())?;
        if !residue.is_zero() {
            return Err(Error::NotWellDefined(residue));
        }
        Ok(StabilizingMorphism {
            source: source.clone(),
            target: target.clone(),
            sigma,
            q_image,
            s_cert: None,
        })
    }

    pub fn identity(ring: &QuotientRing) -> Self {
        Self::new(ring, ring, FieldAutomorphism::Identity, &Poly::x(ring.field())).unwrap()
    }

    pub fn source(&self) -> &QuotientRing {
        &self.source
    }

    pub fn target(&self) -> &QuotientRing {
        &self.target
    }

    pub fn sigma(&self) -> FieldAutomorphism {
        self.sigma
    }

    /// Image of the class of `X`, reduced modulo the target modulus.
    pub fn q_image(&self) -> &Poly {
        &self.q_image
    }

    /// Cofactor `S` with `σ(P₁)∘Q = S·P₂`, when it has been computed.
    pub fn s_cert(&self) -> Option<&Poly> {
        self.s_cert.as_ref()
    }

    pub(crate) fn with_s_cert(mut self, s: Poly) -> Self {
        self.s_cert = Some(s);
        self
    }

    /// `σ(P₁^m)(q) mod P₂^n`; zero for every constructed morphism.
    pub fn certificate_residue(&self) -> Poly {
        self.source
            .modulus()
            .map_coeffs(self.sigma)
            .and_then(|m| m.compose_mod(&self.q_image, self.target.modulus()))
            .expect("validated at construction")
    }

    /// Image of an arbitrary polynomial's class.
    pub fn apply_poly(&self, h: &Poly) -> Result<Poly> {
        h.map_coeffs(self.sigma)?
            .compose_mod(&self.q_image, self.target.modulus())
    }

    pub fn apply(&self, a: &QuotientElement) -> Result<QuotientElement> {
        if *a.ring() != self.source {
            return Err(Error::RingMismatch);
        }
        Ok(self.target.reduced(self.apply_poly(a.rep())?))
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &StabilizingMorphism) -> Result<StabilizingMorphism> {
        if f.target != self.source {
            return Err(Error::RingMismatch);
        }
        let q = self.apply_poly(&f.q_image)?;
        Self::new(&f.source, &self.target, self.sigma.compose(&f.sigma), &q)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MorphismJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: MorphismJson = serde_json::from_str(text)
            .map_err(|e| Error::parse(text.chars().take(40).collect::<String>(), e.to_string()))?;
        let source = j.source.to_ring()?;
        let target = j.target.to_ring()?;
        let sigma: FieldAutomorphism = j.sigma.parse()?;
        let q = parse_poly(target.field(), &j.q_image)?;
        Self::new(&source, &target, sigma, &q)
    }
}

/// `g ∘ f`.
pub fn compose_morphisms(
    g: &StabilizingMorphism,
    f: &StabilizingMorphism,
) -> Result<StabilizingMorphism> {
    g.after(f)
}

impl fmt::Display for StabilizingMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {}: x |-> {} (sigma = {})",
            self.source, self.target, self.q_image, self.sigma
        )
    }
}

/// Serialized form of a ring: `{p, n, field}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub p: String,
    pub n: usize,
    pub field: String,
}

impl RingJson {
    pub fn to_ring(&self) -> Result<QuotientRing> {
        let field = parse_field(&self.field)?;
        let p = parse_poly(&field, &self.p)?;
        QuotientRing::make(p, self.n)
    }
}

impl From<&QuotientRing> for RingJson {
    fn from(r: &QuotientRing) -> Self {
        RingJson {
            p: r.base_poly().to_string(),
            n: r.power(),
            field: r.field().to_string(),
        }
    }
}

/// Serialized form of a morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub source: RingJson,
    pub target: RingJson,
    pub sigma: String,
    pub q_image: String,
}

impl From<&StabilizingMorphism> for MorphismJson {
    fn from(m: &StabilizingMorphism) -> Self {
        MorphismJson {
            source: (&m.source).into(),
            target: (&m.target).into(),
            sigma: m.sigma.to_string(),
            q_image: m.q_image.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_field, parse_poly};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(field: &str, p: &str, n: usize) -> QuotientRing {
        let f = parse_field(field).unwrap();
        QuotientRing::make(parse_poly(&f, p).unwrap(), n).unwrap()
    }

    fn cls(r: &QuotientRing, s: &str) -> QuotientElement {
        r.element(&parse_poly(r.field(), s).unwrap()).unwrap()
    }

    #[test]
    fn make_ring_examples() {
        assert_eq!(ring("F2", "x^2+x+1", 2).dimension(), 4);
        let f9 = ring("F3", "x^2+1", 1);
        assert_eq!(f9.size(), Some(9));
        let f2 = Field::prime(2).unwrap();
        assert!(matches!(
            QuotientRing::make(parse_poly(&f2, "x^2+1").unwrap(), 1),
            Err(Error::NotIrreducible(_))
        ));
        let f3 = Field::prime(3).unwrap();
        assert!(matches!(
            QuotientRing::make(parse_poly(&f3, "2*x^2+2").unwrap(), 1),
            Err(Error::NotMonic(_))
        ));
        let q = Field::rationals();
        let r = QuotientRing::make(parse_poly(&q, "x^2-2").unwrap(), 3).unwrap();
        assert_eq!(r.modulus(), &parse_poly(&q, "(x^2-2)^3").unwrap());
    }

    #[test]
    fn ring_arith_examples() {
        let f9 = ring("F3", "x^2+1", 1);
        assert_eq!(&f9.x() * &f9.x(), cls(&f9, "2"));
        let r = ring("F2", "x^2+x+1", 3);
        let p = r.p_class();
        assert!((&p * &p.pow(2)).is_zero());
        let a = cls(&r, "x^5+x");
        assert_eq!(&a + &r.zero(), a);
        assert!(matches!(
            a.checked_add(&f9.one()),
            Err(Error::RingMismatch)
        ));
    }

    #[test]
    fn units_and_inverses() {
        let r = ring("F2", "x^2+x+1", 2);
        assert!(r.x().is_unit());
        assert!(!r.p_class().is_unit());
        assert!(matches!(r.p_class().invert(), Err(Error::NotAUnit(_))));
        let inv = r.x().invert().unwrap();
        assert!((&inv * &r.x()) == r.one());

        let q = ring("Q", "x^2-2", 1);
        assert_eq!(cls(&q, "2*x").invert().unwrap(), cls(&q, "x/4"));
    }

    #[test]
    fn projection_examples() {
        let r = ring("F2", "x^2+x+1", 2);
        assert_eq!(cls(&r, "x^3").project(1).unwrap(), r.residue_field().one());
        let a = cls(&r, "x^3+x");
        assert_eq!(a.project(2).unwrap(), a);
        assert!(r.p_class().project(1).unwrap().is_zero());
        assert!(matches!(a.project(3), Err(Error::BadTarget { .. })));
    }

    #[test]
    fn local_ring_properties() {
        for (f, p) in [("F2", "x^2+x+1"), ("F3", "x^2+1"), ("F2", "x^3+x+1")] {
            for n in 1..=3 {
                let r = ring(f, p, n);
                let pc = r.p_class();
                assert!(pc.pow(n as u32).is_zero());
                if n > 1 {
                    assert!(!pc.pow(n as u32 - 1).is_zero());
                }
                if r.size().unwrap() <= 729 {
                    for a in r.elements().unwrap() {
                        assert_eq!(a.is_unit(), !a.project(1).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn make_morphism_examples() {
        let r = ring("F2", "x^3+x+1", 1);
        let frob = StabilizingMorphism::new(&r, &r, FieldAutomorphism::Identity, &cls(&r, "x^2").rep().clone()).unwrap();
        assert_eq!(frob.apply(&r.x()).unwrap(), cls(&r, "x^2"));
        let id = StabilizingMorphism::identity(&r);
        assert_eq!(id.apply(&cls(&r, "x^2+1")).unwrap(), cls(&r, "x^2+1"));

        let a = ring("F3", "x^2+1", 1);
        let b = ring("F3", "x^2+x+2", 1);
        let f3 = a.field().clone();
        match StabilizingMorphism::new(&a, &b, FieldAutomorphism::Identity, &Poly::x(&f3)) {
            Err(Error::NotWellDefined(w)) => assert_eq!(w, parse_poly(&f3, "2*x+2").unwrap()),
            other => panic!("{other:?}"),
        }
        let f = StabilizingMorphism::new(&a, &b, FieldAutomorphism::Identity, &parse_poly(&f3, "x+2").unwrap()).unwrap();
        assert_eq!(f.apply(&a.x()).unwrap(), cls(&b, "x+2"));
        assert_eq!(f.apply(&a.one()).unwrap(), b.one());
        assert!(f.certificate_residue().is_zero());
    }

    #[test]
    fn composition_examples() {
        let r = ring("F2", "x^3+x+1", 1);
        let f2 = r.field().clone();
        let frob = StabilizingMorphism::new(&r, &r, FieldAutomorphism::Identity, &parse_poly(&f2, "x^2").unwrap()).unwrap();
        let ff = compose_morphisms(&frob, &frob).unwrap();
        assert_eq!(ff.q_image(), &parse_poly(&f2, "x^2+x").unwrap());
        let id = StabilizingMorphism::identity(&r);
        assert_eq!(frob.after(&id).unwrap(), frob);
        // Frobenius has order 3 on F8
        assert_eq!(ff.after(&frob).unwrap(), id);
        let other = ring("F2", "x^2+x+1", 1);
        assert!(matches!(frob.after(&StabilizingMorphism::identity(&other)), Err(Error::RingMismatch)));
    }

    #[test]
    fn morphism_law_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = ring("F3", "x^2+1", 3);
        let b = ring("F3", "x^2+x+2", 3);
        let f3 = a.field().clone();
        let f = StabilizingMorphism::new(&a, &b, FieldAutomorphism::Identity, &parse_poly(&f3, "x+2").unwrap()).unwrap();
        for _ in 0..200 {
            let (u, v) = (a.random(&mut rng), a.random(&mut rng));
            assert_eq!(f.apply(&(&u + &v)).unwrap(), &f.apply(&u).unwrap() + &f.apply(&v).unwrap());
            assert_eq!(f.apply(&(&u * &v)).unwrap(), &f.apply(&u).unwrap() * &f.apply(&v).unwrap());
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let f4 = parse_field("F2[a]/(a^2+a+1)").unwrap();
        let p = parse_poly(&f4, "x^2+x+a").unwrap();
        let r = QuotientRing::make(p.clone(), 2).unwrap();
        let sigma = FieldAutomorphism::FrobeniusPower(1);
        // x ↦ x is well defined only if σ fixes P, so search a valid image.
        let target = QuotientRing::make(p.map_coeffs(sigma).unwrap(), 2).unwrap();
        let f = StabilizingMorphism::new(&r, &target, sigma, &Poly::x(&f4)).unwrap();
        let text = f.to_json();
        assert!(text.starts_with(r#"{"source":{"p":"x^2+x+a","n":2,"field":"F2[a]/(a^2+a+1)"}"#));
        let back = StabilizingMorphism::from_json(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), text);
        assert!(StabilizingMorphism::from_json("{").is_err());
    }
}
