//! Residue-field embeddings for separable `P` and the decomposition
//! `K[X]/(P^k) ≅ (K[X]/(P))[Y]/(Y^k)`, `Y ↦ P`.
//!
//! The embedding sends the class of `X` to an approximate root
//! `U = X + Q₁P + … + Q_{k−1}P^{k−1}` of `P`, built one power of `P` at a
//! time: if `P(U) = R·P^j`, adding `S·P^j` with `S ≡ −R·P′(U)⁻¹ (mod P)`
//! pushes the exponent to `j + 1`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::FieldAutomorphism;
use crate::poly::Poly;
use crate::quotient::{QuotientElement, QuotientRing, StabilizingMorphism};

/// Rings with at most this many elements are checked exhaustively.
pub const EXHAUSTIVE_LIMIT: u128 = 729;
/// Sample size when a ring is too large (or infinite) for exhaustion.
pub const SAMPLE_SIZE: usize = 1000;

/// Returns `R` with `P(X + Q) = P + P′·Q + R·Q²`.
///
/// `R` is the exact quotient of `P(X+Q) − P − P′Q` by `Q²`; for `Q = 0`
/// it is zero by convention.
pub fn taylor_shift_certificate(p: &Poly, q: &Poly) -> Result<Poly> {
    let field = p.field();
    if q.is_zero() {
        return Ok(Poly::zero(field));
    }
    let shifted = p.compose(&(&Poly::x(field) + q))?;
    let rest = &(&shifted - p) - &(&p.derivative() * q);
    rest.exact_div(&(q * q))
}

/// Approximate root of `P` to precision `P^k`, with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSeries {
    p: Poly,
    k: usize,
    q_list: Vec<Poly>,
    u: Poly,
    r_cert: Poly,
}

impl RootSeries {
    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `Q₁ … Q_{k−1}`, each of degree below `deg P`.
    pub fn q_list(&self) -> &[Poly] {
        &self.q_list
    }

    /// `U = X + Σ Qᵢ Pⁱ`.
    pub fn u(&self) -> &Poly {
        &self.u
    }

    /// The exact cofactor `R` in `P(U) = R·P^k`.
    pub fn r_cert(&self) -> &Poly {
        &self.r_cert
    }

    /// `P(U) − R·P^k`, computed afresh; zero for every constructed series.
    pub fn certificate_defect(&self) -> Poly {
        let lhs = self.p.compose(&self.u).unwrap();
        &lhs - &(&self.r_cert * &self.p.pow(self.k as u32))
    }
}

fn check_separable(p: &Poly) -> Result<Poly> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(Error::InvalidArgument(format!(
            "{p} must have degree at least 1"
        )));
    }
    let dp = p.derivative();
    if dp.is_zero() {
        return Err(Error::NotSeparable(p.clone()));
    }
    Ok(dp)
}

/// Builds `U` with `P(U) ≡ 0 (mod P^k)`, fixing `Q₀ = 0` and choosing each
/// `Qᵢ` as the reduced representative modulo `P`.
pub fn hensel_root_series(p: &Poly, k: usize) -> Result<RootSeries> {
    if k == 0 {
        return Err(Error::InvalidArgument("precision k must be at least 1".into()));
    }
    let dp = check_separable(p)?;
    let field = p.field();
    let mut u = Poly::x(field);
    let mut r = Poly::one(field);
    let mut p_pow = p.clone();
    let mut q_list = Vec::with_capacity(k - 1);
    for _ in 1..k {
        let dpu = dp.compose_mod(&u, p)?;
        let inv = dpu
            .inverse_mod(p)?
            .ok_or_else(|| Error::NotSeparable(p.clone()))?;
        let s = (-&(&r * &inv)).rem(p)?;
        u = &u + &(&s * &p_pow);
        p_pow = &p_pow * p;
        r = p.compose(&u)?.exact_div(&p_pow)?;
        q_list.push(s);
    }
    Ok(RootSeries {
        p: p.clone(),
        k,
        q_list,
        u,
        r_cert: r,
    })
}

/// The embedding `K[X]/(P) → K[X]/(P^k)`, `X ↦ U`.
pub fn embed_residue_field(p: &Poly, k: usize) -> Result<StabilizingMorphism> {
    check_separable(p)?;
    let ring = QuotientRing::make(p.clone(), k)?;
    Ok(StructureIsomorphism::new(&ring)?.embedding)
}

/// Coordinates `a₀ … a_{k−1}` of an element in the basis `1, P, …, P^{k−1}`
/// over the embedded residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueDigits {
    ring: QuotientRing,
    digits: Vec<QuotientElement>,
}

impl ResidueDigits {
    pub fn new(ring: &QuotientRing, digits: Vec<QuotientElement>) -> Result<Self> {
        let residue = ring.residue_field();
        if digits.len() != ring.power() || digits.iter().any(|d| *d.ring() != residue) {
            return Err(Error::InvalidArgument(format!(
                "expected {} digits in {residue}",
                ring.power()
            )));
        }
        Ok(ResidueDigits {
            ring: ring.clone(),
            digits,
        })
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn digits(&self) -> &[QuotientElement] {
        &self.digits
    }
}

/// `ψ_k: (K[X]/(P))[Y]/(Y^k) → K[X]/(P^k)` together with its inverse,
/// digit extraction.
#[derive(Clone, Debug)]
pub struct StructureIsomorphism {
    ring: QuotientRing,
    series: RootSeries,
    embedding: StabilizingMorphism,
    p_powers: Vec<QuotientElement>,
}

impl StructureIsomorphism {
    pub fn new(ring: &QuotientRing) -> Result<Self> {
        let series = hensel_root_series(ring.base_poly(), ring.power())?;
        let embedding = StabilizingMorphism::new(
            &ring.residue_field(),
            ring,
            FieldAutomorphism::Identity,
            series.u(),
        )?;
        let p = ring.p_class();
        let p_powers = (0..ring.power()).map(|j| p.pow(j as u32)).collect();
        Ok(StructureIsomorphism {
            ring: ring.clone(),
            series,
            embedding,
            p_powers,
        })
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn series(&self) -> &RootSeries {
        &self.series
    }

    pub fn embedding(&self) -> &StabilizingMorphism {
        &self.embedding
    }

    pub fn embed(&self, a: &QuotientElement) -> Result<QuotientElement> {
        self.embedding.apply(a)
    }

    /// Repeatedly splits off the embedded residue of the current quotient
    /// and divides the remainder exactly by `P`.
    pub fn to_digits(&self, a: &QuotientElement) -> Result<ResidueDigits> {
        if *a.ring() != self.ring {
            return Err(Error::RingMismatch);
        }
        let p = self.ring.base_poly();
        let residue = self.ring.residue_field();
        let mut current = a.rep().clone();
        let mut digits = Vec::with_capacity(self.ring.power());
        for _ in 0..self.ring.power() {
            let d = residue.element(&current)?;
            let lifted = self.embedding.apply_poly(d.rep())?;
            current = (&current - &lifted).exact_div(p)?;
            digits.push(d);
        }
        Ok(ResidueDigits {
            ring: self.ring.clone(),
            digits,
        })
    }

    /// `Σ embed(aⱼ)·Pʲ`.
    pub fn from_digits(&self, d: &ResidueDigits) -> Result<QuotientElement> {
        if d.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        let mut acc = self.ring.zero();
        for (digit, pj) in d.digits.iter().zip(&self.p_powers) {
            acc = &acc + &(&self.embed(digit)? * pj);
        }
        Ok(acc)
    }

    /// Product in `(K[X]/(P))[Y]/(Y^k)`: convolution truncated at `Y^k`.
    pub fn digit_mul(&self, a: &ResidueDigits, b: &ResidueDigits) -> ResidueDigits {
        let k = self.ring.power();
        let residue = self.ring.residue_field();
        let digits = (0..k)
            .map(|n| {
                (0..=n).fold(residue.zero(), |acc, i| {
                    &acc + &(&a.digits[i] * &b.digits[n - i])
                })
            })
            .collect();
        ResidueDigits {
            ring: self.ring.clone(),
            digits,
        }
    }

    pub fn digit_add(&self, a: &ResidueDigits, b: &ResidueDigits) -> ResidueDigits {
        let digits = a.digits.iter().zip(&b.digits).map(|(x, y)| x + y).collect();
        ResidueDigits {
            ring: self.ring.clone(),
            digits,
        }
    }
}

/// Digit expansion of `a` over its ring's residue field.
pub fn to_digits(a: &QuotientElement) -> Result<ResidueDigits> {
    StructureIsomorphism::new(a.ring())?.to_digits(a)
}

/// Inverse of [`to_digits`].
pub fn from_digits(d: &ResidueDigits) -> Result<QuotientElement> {
    StructureIsomorphism::new(d.ring())?.from_digits(d)
}

/// Outcome of [`structure_isomorphism_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub exhaustive: bool,
    pub elements_checked: usize,
    pub pairs_checked: usize,
    pub counterexample: Option<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks that `ψ_k` is bijective (digit round trip) and multiplicative
/// (digit-side convolution against ring-side multiplication).
pub fn structure_isomorphism_check(p: &Poly, k: usize) -> Result<StructureReport> {
    check_separable(p)?;
    let ring = QuotientRing::make(p.clone(), k)?;
    let iso = StructureIsomorphism::new(&ring)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ k as u64);
    let exhaustive = ring.size().is_some_and(|s| s <= EXHAUSTIVE_LIMIT);
    let elements: Vec<QuotientElement> = if exhaustive {
        ring.elements()?.collect()
    } else {
        (0..SAMPLE_SIZE).map(|_| ring.random(&mut rng)).collect()
    };
    let mut report = StructureReport {
        exhaustive,
        elements_checked: 0,
        pairs_checked: 0,
        counterexample: None,
    };
    let mut digit_cache = Vec::with_capacity(elements.len());
    for a in &elements {
        let d = iso.to_digits(a)?;
        if iso.from_digits(&d)? != *a {
            report.counterexample = Some(format!("digit round trip fails at {a}"));
            return Ok(report);
        }
        if iso.to_digits(&iso.from_digits(&d)?)? != d {
            report.counterexample = Some(format!("digits of {a} are not canonical"));
            return Ok(report);
        }
        digit_cache.push(d);
        report.elements_checked += 1;
    }
    use rand::Rng;
    for _ in 0..SAMPLE_SIZE.min(elements.len() * elements.len()) {
        let i = rng.gen_range(0..elements.len());
        let j = rng.gen_range(0..elements.len());
        let (a, b) = (&elements[i], &elements[j]);
        let prod = iso.from_digits(&iso.digit_mul(&digit_cache[i], &digit_cache[j]))?;
        let sum = iso.from_digits(&iso.digit_add(&digit_cache[i], &digit_cache[j]))?;
        if prod != a * b || sum != a + b {
            report.counterexample = Some(format!("psi is not a ring map at ({a}, {b})"));
            return Ok(report);
        }
        report.pairs_checked += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;
    use crate::parse::{parse_field, parse_poly};

    fn poly(field: &str, s: &str) -> Poly {
        parse_poly(&parse_field(field).unwrap(), s).unwrap()
    }

    #[test]
    fn taylor_shift_examples() {
        let q = Field::rationals();
        let x2 = parse_poly(&q, "x^2").unwrap();
        let c = parse_poly(&q, "7/3").unwrap();
        assert!(taylor_shift_certificate(&x2, &c).unwrap().is_one());
        let p = parse_poly(&q, "x^2-2").unwrap();
        for s in ["x", "x^3-1/2", "5"] {
            let qq = parse_poly(&q, s).unwrap();
            assert!(taylor_shift_certificate(&p, &qq).unwrap().is_one());
        }
        let p = poly("F2", "x^3+x+1");
        let qq = poly("F2", "x");
        // P(X+X) = P(0) = 1 = P + P'X exactly, so the cofactor vanishes.
        assert!(taylor_shift_certificate(&p, &qq).unwrap().is_zero());
        for s in ["x^2", "x+1", "x^4+x"] {
            let qq = poly("F2", s);
            let r = taylor_shift_certificate(&p, &qq).unwrap();
            let lhs = p.compose(&(&Poly::x(p.field()) + &qq)).unwrap();
            assert_eq!(lhs, &(&p + &(&p.derivative() * &qq)) + &(&r * &(&qq * &qq)));
        }
        assert!(taylor_shift_certificate(&p, &Poly::zero(p.field())).unwrap().is_zero());
    }

    #[test]
    fn root_series_examples() {
        let s = hensel_root_series(&poly("Q", "x^2-2"), 2).unwrap();
        assert_eq!(s.q_list(), &[poly("Q", "-x/4")]);
        assert_eq!(s.u(), &poly("Q", "x - (x/4)*(x^2-2)"));
        assert!(s.certificate_defect().is_zero());

        let s = hensel_root_series(&poly("F2", "x^2+x+1"), 2).unwrap();
        assert_eq!(s.q_list(), &[poly("F2", "1")]);
        assert_eq!(s.u(), &poly("F2", "x^2+1"));
        assert!(s.r_cert().is_one());

        let s = hensel_root_series(&poly("F3", "x^2+1"), 1).unwrap();
        assert_eq!(s.u(), &poly("F3", "x"));
        assert!(s.q_list().is_empty());

        for k in 1..=4 {
            assert!(matches!(
                hensel_root_series(&poly("F2(t)", "x^2+t"), k),
                Err(Error::NotSeparable(_))
            ));
        }
        assert!(hensel_root_series(&poly("F3", "x^2+1"), 0).is_err());
    }

    #[test]
    fn embedding_examples() {
        let p = poly("F2", "x^2+x+1");
        let e1 = embed_residue_field(&p, 1).unwrap();
        assert_eq!(e1, StabilizingMorphism::identity(e1.source()));
        let e2 = embed_residue_field(&p, 2).unwrap();
        assert_eq!(e2.q_image(), &poly("F2", "x^2+1"));
        let x = e2.source().x();
        assert_eq!(e2.apply(&x).unwrap().project(1).unwrap(), x);
        assert!(matches!(
            embed_residue_field(&poly("F2(t)", "x^2+t"), 2),
            Err(Error::NotSeparable(_))
        ));
    }

    #[test]
    fn digit_examples() {
        let p = poly("F2", "x^2+x+1");
        let ring = QuotientRing::make(p.clone(), 2).unwrap();
        let iso = StructureIsomorphism::new(&ring).unwrap();
        let res = ring.residue_field();
        let d = iso.to_digits(&ring.x()).unwrap();
        assert_eq!(d.digits(), &[res.x(), res.one()]);
        let d = iso.to_digits(&ring.p_class()).unwrap();
        assert_eq!(d.digits(), &[res.zero(), res.one()]);
        let d = iso.to_digits(&ring.zero()).unwrap();
        assert!(d.digits().iter().all(|x| x.is_zero()));

        let ring3 = QuotientRing::make(p, 3).unwrap();
        let iso3 = StructureIsomorphism::new(&ring3).unwrap();
        let b = res.element(&poly("F2", "x+1")).unwrap();
        let d = iso3.to_digits(&iso3.embed(&b).unwrap()).unwrap();
        assert_eq!(d.digits(), &[b, res.zero(), res.zero()]);
        let p2 = ring3.p_class().pow(2);
        assert_eq!(
            iso3.to_digits(&p2).unwrap().digits(),
            &[res.zero(), res.zero(), res.one()]
        );
    }

    #[test]
    fn structure_check_examples() {
        for k in 1..=4 {
            let r = structure_isomorphism_check(&poly("F2", "x^2+x+1"), k).unwrap();
            assert!(r.passed() && r.exhaustive, "{r:?}");
        }
        let r = structure_isomorphism_check(&poly("F3", "x^2+1"), 3).unwrap();
        assert!(r.passed() && r.exhaustive);
        assert_eq!(r.elements_checked, 729);
        assert!(matches!(
            structure_isomorphism_check(&poly("F2(t)", "x^2+t"), 2),
            Err(Error::NotSeparable(_))
        ));
    }

    #[test]
    fn rational_digits_round_trip() {
        let r = structure_isomorphism_check(&poly("Q", "x^2-2"), 3).unwrap();
        assert!(r.passed() && !r.exhaustive);
    }
}
