//! Residue-level morphisms `K[X]/(P₁) → K[X]/(P₂)` given by `X ↦ Q_f`, their
//! lifts `X ↦ Q_f` at level `n`, and the test for when a lift is an
//! isomorphism: `gcd(S_f, P₂) = 1`, equivalently `Q_f′ ≠ 0`, where
//! `σ(P₁)∘Q_f = S_f·P₂`.

use crate::error::{Error, Result};
use crate::fields::{Field, FieldAutomorphism};
use crate::hensel::StructureIsomorphism;
use crate::poly::{Poly, ENUMERATION_BUDGET};
use crate::quotient::{Irreducibility, QuotientElement, QuotientRing, StabilizingMorphism};
use crate::verify;

/// Applies `σ` to every coefficient, fixing `X`.
pub fn extend_automorphism(sigma: FieldAutomorphism, a: &Poly) -> Result<Poly> {
    a.map_coeffs(sigma)
}

fn same_field(a: &Poly, b: &Poly) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::DescriptorMismatch(
            a.field().to_string(),
            b.field().to_string(),
        ));
    }
    Ok(())
}

fn equal_degrees(p1: &Poly, p2: &Poly) -> Result<usize> {
    let (d1, d2) = (p1.degree().unwrap_or(0), p2.degree().unwrap_or(0));
    if d1 != d2 {
        return Err(Error::DegreeMismatch(d1, d2));
    }
    Ok(d1)
}

/// `S_f = σ(P₁)∘Q / P₂`, or [`Error::NotAMorphism`] with the remainder.
pub fn compute_sf(p1: &Poly, p2: &Poly, sigma: FieldAutomorphism, q: &Poly) -> Result<Poly> {
    let comp = extend_automorphism(sigma, p1)?.compose(q)?;
    let (s, r) = comp.divmod(p2)?;
    if !r.is_zero() {
        return Err(Error::NotAMorphism(r));
    }
    Ok(s)
}

/// The field map `K[X]/(P₁) → K[X]/(P₂)`, `X ↦ Q`, with `S_f` attached.
///
/// For degree-one moduli `Q` is a constant.
pub fn residue_morphism_from_q(
    p1: &Poly,
    p2: &Poly,
    sigma: FieldAutomorphism,
    q: &Poly,
) -> Result<StabilizingMorphism> {
    same_field(p1, p2)?;
    let d = equal_degrees(p1, p2)?;
    let dq = q.degree().unwrap_or(0);
    if dq >= d.max(1) || (d >= 2 && dq == 0) {
        return Err(Error::InvalidArgument(format!(
            "X-image {q} must be nonconstant of degree below {d}"
        )));
    }
    let s = compute_sf(p1, p2, sigma, q)?;
    let source = QuotientRing::make(p1.clone(), 1)?;
    let target = QuotientRing::make(p2.clone(), 1)?;
    Ok(StabilizingMorphism::new(&source, &target, sigma, q)?.with_s_cert(s))
}

/// Every `X ↦ Q` with `σ(P₁)∘Q ≡ 0 (mod P₂)`, in counting order of `Q`.
pub fn find_residue_isomorphisms(
    p1: &Poly,
    p2: &Poly,
    sigma: FieldAutomorphism,
) -> Result<Vec<StabilizingMorphism>> {
    same_field(p1, p2)?;
    let field = p1.field();
    let q = field
        .order()
        .ok_or_else(|| Error::UnsupportedField(field.to_string()))?;
    let d = equal_degrees(p1, p2)?;
    sigma.check(field)?;
    let total = q
        .checked_pow(d as u32)
        .filter(|&t| t <= ENUMERATION_BUDGET)
        .ok_or(Error::BudgetExceeded(q.saturating_pow(d as u32)))?;
    let sp1 = extend_automorphism(sigma, p1)?;
    let source = QuotientRing::make(p1.clone(), 1)?;
    let target = QuotientRing::make(p2.clone(), 1)?;
    let start = if d >= 2 { q } else { 0 };
    let mut found = Vec::new();
    for index in start..total {
        let cand = Poly::from_counting_index(field, index, d);
        let (s, r) = sp1.compose(&cand)?.divmod(p2)?;
        if r.is_zero() {
            found.push(StabilizingMorphism::new(&source, &target, sigma, &cand)?.with_s_cert(s));
        }
    }
    Ok(found)
}

fn check_level_one(f: &StabilizingMorphism) -> Result<()> {
    if f.source().power() != 1 || f.target().power() != 1 {
        return Err(Error::InvalidArgument(
            "expected a morphism between residue fields".into(),
        ));
    }
    Ok(())
}

fn s_f_of(f: &StabilizingMorphism) -> Result<Poly> {
    match f.s_cert() {
        Some(s) => Ok(s.clone()),
        None => compute_sf(
            f.source().base_poly(),
            f.target().base_poly(),
            f.sigma(),
            f.q_image(),
        ),
    }
}

fn ring_at(base: &QuotientRing, n: usize) -> Result<QuotientRing> {
    QuotientRing::new(base.base_poly().clone(), n, Irreducibility::Assumed)
}

/// `f_{X,n}: K[X]/(P₁ⁿ) → K[X]/(P₂ⁿ)`, `X ↦ Q_f`.
pub fn lift_morphism(f: &StabilizingMorphism, n: usize) -> Result<StabilizingMorphism> {
    check_level_one(f)?;
    let s = s_f_of(f)?;
    let source = ring_at(f.source(), n)?;
    let target = ring_at(f.target(), n)?;
    Ok(StabilizingMorphism::new(&source, &target, f.sigma(), f.q_image())?.with_s_cert(s))
}

/// Both forms of the isomorphism test for `f_{X,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    pub n: usize,
    pub q_f: Poly,
    pub s_f: Poly,
    pub q_f_derivative_nonzero: bool,
    pub gcd_sf_p2_is_one: bool,
    /// `n = 1`, or both criteria hold.
    pub verdict: bool,
    /// Multiplicity of `P₂` in `σ(P₁)∘Q_f` (zero when that composition is 0).
    pub multiplicity: usize,
    /// For a negative verdict, `e` with `P₁^e ≠ 0` at level `n` and
    /// `f_{X,n}(P₁^e) = 0`.
    pub kernel_exponent: Option<usize>,
}

fn multiplicity(mut a: Poly, p: &Poly) -> Result<usize> {
    if a.is_zero() {
        return Ok(0);
    }
    let mut m = 0;
    loop {
        let (quot, r) = a.divmod(p)?;
        if !r.is_zero() {
            return Ok(m);
        }
        a = quot;
        m += 1;
    }
}

pub fn lift_is_isomorphism(f: &StabilizingMorphism, n: usize) -> Result<LiftReport> {
    check_level_one(f)?;
    if n == 0 {
        return Err(Error::InvalidArgument("ring power must be at least 1".into()));
    }
    let p1 = f.source().base_poly();
    let p2 = f.target().base_poly();
    let s_f = s_f_of(f)?;
    let q_f = f.q_image().clone();
    let gcd_one = s_f.gcd(p2)?.is_one();
    let deriv = !q_f.derivative().is_zero();
    if gcd_one != deriv {
        return Err(Error::CriterionDisagreement {
            gcd: gcd_one,
            derivative: deriv,
        });
    }
    let comp = extend_automorphism(f.sigma(), p1)?.compose(&q_f)?;
    let mult = multiplicity(comp, p2)?;
    let verdict = n == 1 || gcd_one;
    let kernel_exponent = if verdict {
        None
    } else if n == 2 || mult == 0 {
        Some(1)
    } else {
        Some(n / mult + 1)
    };
    Ok(LiftReport {
        n,
        q_f,
        s_f,
        q_f_derivative_nonzero: deriv,
        gcd_sf_p2_is_one: gcd_one,
        verdict,
        multiplicity: mult,
        kernel_exponent,
    })
}

/// The class of `P₁^e` in the level-`n` source for a negative report.
pub fn kernel_witness(
    f: &StabilizingMorphism,
    report: &LiftReport,
) -> Result<Option<QuotientElement>> {
    let Some(e) = report.kernel_exponent else {
        return Ok(None);
    };
    let source = ring_at(f.source(), report.n)?;
    Ok(Some(source.p_class().pow(e as u32)))
}

/// The map on residue fields induced by a level-`m` morphism: `X ↦` the
/// remainder of its X-image modulo `P₂`.
pub fn induced_residue_morphism(f: &StabilizingMorphism) -> Result<StabilizingMorphism> {
    let p2 = f.target().base_poly();
    let q = f.q_image().rem(p2)?;
    residue_morphism_from_q(f.source().base_poly(), p2, f.sigma(), &q)
}

/// Outcome of [`roots_bijection_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootsReport {
    /// The splitting field used, `F_{q^d}`.
    pub field: Field,
    pub roots_p2: Vec<String>,
    pub roots_sigma_p1: Vec<String>,
    /// Images `Q_f(α)` for the roots `α` of `P₂`, in the same order.
    pub images: Vec<String>,
    pub bijective: bool,
}

fn fresh_generator(field: &Field) -> String {
    let used = field.symbols();
    ('a'..='w')
        .map(String::from)
        .find(|s| !used.contains(s))
        .expect("towers are shallow")
}

/// Checks that `α ↦ Q_f(α)` maps the roots of `P₂` bijectively onto those
/// of `σ(P₁)` inside `F_{q^d}`.
pub fn roots_bijection_check(f: &StabilizingMorphism) -> Result<RootsReport> {
    let field = f.source().field();
    if !field.is_finite() {
        return Err(Error::UnsupportedField(field.to_string()));
    }
    let p2 = f.target().base_poly();
    let sp1 = extend_automorphism(f.sigma(), f.source().base_poly())?;
    let ext = if p2.degree() == Some(1) {
        field.clone()
    } else {
        Field::extension(p2.clone(), &fresh_generator(field))?
    };
    let (p2e, sp1e, qe) = (p2.lift_to(&ext), sp1.lift_to(&ext), f.q_image().lift_to(&ext));
    let mut roots2 = Vec::new();
    let mut roots1 = Vec::new();
    for a in ext.elements()? {
        if ext.is_zero(&p2e.eval(&a)) {
            roots2.push(a.clone());
        }
        if ext.is_zero(&sp1e.eval(&a)) {
            roots1.push(a);
        }
    }
    let images: Vec<_> = roots2.iter().map(|a| qe.eval(a)).collect();
    let mut distinct = images.clone();
    distinct.sort_by_key(|a| ext.index_of(a));
    distinct.dedup();
    let onto = roots1.iter().all(|r| images.contains(r));
    let into = images.iter().all(|y| roots1.contains(y));
    let bijective = distinct.len() == images.len()
        && images.len() == roots1.len()
        && onto
        && into
        && !roots1.is_empty();
    let fmt = |v: &[crate::fields::Elem]| v.iter().map(|a| ext.format(a)).collect();
    Ok(RootsReport {
        roots_p2: fmt(&roots2),
        roots_sigma_p1: fmt(&roots1),
        images: fmt(&images),
        bijective,
        field: ext,
    })
}

/// `X ↦ X + c₂ − σ(c₁)` between `K[X]/((X+c₁)ⁿ)` and `K[X]/((X+c₂)ⁿ)`.
pub fn affine_isomorphism(
    p1: &Poly,
    p2: &Poly,
    sigma: FieldAutomorphism,
    n: usize,
) -> Result<StabilizingMorphism> {
    same_field(p1, p2)?;
    if equal_degrees(p1, p2)? != 1 {
        return Err(Error::InvalidArgument("affine path needs linear moduli".into()));
    }
    let field = p1.field();
    let c1 = sigma.apply(field, &p1.coeff(0))?;
    let shift = field.sub(&p2.coeff(0), &c1);
    let q = &Poly::x(field) + &Poly::constant(field, shift);
    let source = QuotientRing::make(p1.clone(), n)?;
    let target = QuotientRing::make(p2.clone(), n)?;
    StabilizingMorphism::new(&source, &target, sigma, &q)
}

/// Transports `f` digit by digit: `ψ₂ ∘ (f on each digit) ∘ ψ₁⁻¹` sends
/// `X` to an element `R`, and `X ↦ R` is an isomorphism at level `n`.
pub fn isomorphism_through_digits(
    f: &StabilizingMorphism,
    n: usize,
) -> Result<StabilizingMorphism> {
    check_level_one(f)?;
    let source = ring_at(f.source(), n)?;
    let target = ring_at(f.target(), n)?;
    let psi1 = StructureIsomorphism::new(&source)?;
    let psi2 = StructureIsomorphism::new(&target)?;
    let digits = psi1.to_digits(&source.x())?;
    let mapped = digits
        .digits()
        .iter()
        .map(|d| f.apply(d))
        .collect::<Result<Vec<_>>>()?;
    let d2 = crate::hensel::ResidueDigits::new(&target, mapped)?;
    let r = psi2.from_digits(&d2)?;
    StabilizingMorphism::new(&source, &target, f.sigma(), r.rep())
}

/// An isomorphism at level `n` extending the residue isomorphism `f`:
/// the direct lift when `Q_f′ ≠ 0`, the digit transport otherwise.
/// Works over any field, given separable moduli.
pub fn isomorphism_from_residue(
    f: &StabilizingMorphism,
    n: usize,
) -> Result<StabilizingMorphism> {
    for p in [f.source().base_poly(), f.target().base_poly()] {
        if p.derivative().is_zero() {
            return Err(Error::NotSeparable(p.clone()));
        }
    }
    if lift_is_isomorphism(f, n)?.verdict {
        lift_morphism(f, n)
    } else {
        isomorphism_through_digits(f, n)
    }
}

/// A certified isomorphism `K[X]/(P₁ⁿ) ≅ K[X]/(P₂ⁿ)` over a finite field,
/// or `None` when the residue fields differ (different degrees).
pub fn rings_isomorphic_separable(
    p1: &Poly,
    p2: &Poly,
    n: usize,
) -> Result<Option<StabilizingMorphism>> {
    same_field(p1, p2)?;
    for p in [p1, p2] {
        if p.derivative().is_zero() {
            return Err(Error::NotSeparable(p.clone()));
        }
    }
    if !p1.field().is_finite() {
        return Err(Error::UnsupportedField(p1.field().to_string()));
    }
    if p1.degree() != p2.degree() {
        return Ok(None);
    }
    let iso = if p1.degree() == Some(1) {
        affine_isomorphism(p1, p2, FieldAutomorphism::Identity, n)?
    } else {
        let candidates = find_residue_isomorphisms(p1, p2, FieldAutomorphism::Identity)?;
        let preferred = candidates
            .iter()
            .find(|f| !f.q_image().derivative().is_zero())
            .or(candidates.first());
        let Some(f) = preferred else {
            return Ok(None);
        };
        isomorphism_from_residue(f, n)?
    };
    if !verify::certify_isomorphism(&iso)? {
        return Err(Error::NotAMorphism(iso.q_image().clone()));
    }
    Ok(Some(iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_field, parse_poly};

    fn poly(field: &str, s: &str) -> Poly {
        parse_poly(&parse_field(field).unwrap(), s).unwrap()
    }

    const ID: FieldAutomorphism = FieldAutomorphism::Identity;

    #[test]
    fn extend_automorphism_examples() {
        let f9 = "F3[a]/(a^2+1)";
        let frob = FieldAutomorphism::frobenius(1).unwrap();
        let a = poly(f9, "x+a+1");
        let cubed = poly(f9, "x+(a+1)^3");
        assert_eq!(extend_automorphism(frob, &a).unwrap(), cubed);
        assert_eq!(extend_automorphism(ID, &a).unwrap(), a);
        let b = poly("F2", "x^3+x+1");
        assert_eq!(extend_automorphism(frob, &b).unwrap(), b);
        assert!(extend_automorphism(frob, &poly("Q", "x+1")).is_err());
    }

    #[test]
    fn residue_morphism_examples() {
        let (p1, p2) = (poly("F3", "x^2+1"), poly("F3", "x^2+x+2"));
        let f = residue_morphism_from_q(&p1, &p2, ID, &poly("F3", "x+2")).unwrap();
        assert!(f.s_cert().unwrap().is_one());

        let p = poly("F2", "x^3+x+1");
        let f = residue_morphism_from_q(&p, &p, ID, &poly("F2", "x^2")).unwrap();
        assert_eq!(f.s_cert().unwrap(), &p);

        // (x^2+1) - (x^2+x+2) = -x-1 = 2x+2 over F3.
        match residue_morphism_from_q(&p1, &p2, ID, &poly("F3", "x")) {
            Err(Error::NotAMorphism(r)) => assert_eq!(r, poly("F3", "2*x+2")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            residue_morphism_from_q(&p1, &poly("F3", "x^3+2*x+1"), ID, &poly("F3", "x")),
            Err(Error::DegreeMismatch(2, 3))
        ));
    }

    #[test]
    fn search_examples() {
        let (p1, p2) = (poly("F3", "x^2+1"), poly("F3", "x^2+x+2"));
        let found = find_residue_isomorphisms(&p1, &p2, ID).unwrap();
        let qs: Vec<Poly> = found.iter().map(|f| f.q_image().clone()).collect();
        assert_eq!(qs, vec![poly("F3", "x+2"), poly("F3", "2*x+1")]);

        let found =
            find_residue_isomorphisms(&poly("F2", "x^3+x+1"), &poly("F2", "x^3+x^2+1"), ID)
                .unwrap();
        assert_eq!(found.len(), 3);

        let p = poly("F2", "x^2+x+1");
        let found = find_residue_isomorphisms(&p, &p, ID).unwrap();
        assert!(found.iter().any(|f| f.q_image() == &poly("F2", "x")));
        assert_eq!(found.len(), 2);

        assert!(matches!(
            find_residue_isomorphisms(&poly("Q", "x^2-2"), &poly("Q", "x^2-2"), ID),
            Err(Error::UnsupportedField(_))
        ));
    }

    #[test]
    fn lift_examples() {
        let (p1, p2) = (poly("F3", "x^2+1"), poly("F3", "x^2+x+2"));
        let f = residue_morphism_from_q(&p1, &p2, ID, &poly("F3", "x+2")).unwrap();
        assert_eq!(lift_morphism(&f, 1).unwrap(), f);
        let f3 = lift_morphism(&f, 3).unwrap();
        assert!(f3.certificate_residue().is_zero());
        assert_eq!(induced_residue_morphism(&f3).unwrap(), f);
        let rep = lift_is_isomorphism(&f, 3).unwrap();
        assert!(rep.verdict && rep.s_f.is_one());

        let p = poly("F2", "x^3+x+1");
        let g = residue_morphism_from_q(&p, &p, ID, &poly("F2", "x^2")).unwrap();
        let g2 = lift_morphism(&g, 2).unwrap();
        assert!(g2.certificate_residue().is_zero());
        let rep = lift_is_isomorphism(&g, 2).unwrap();
        assert!(!rep.verdict && !rep.q_f_derivative_nonzero && !rep.gcd_sf_p2_is_one);
        assert_eq!(rep.multiplicity, 2);
        let w = kernel_witness(&g, &rep).unwrap().unwrap();
        assert_eq!(w.rep(), &p);
        assert!(!w.is_zero() && g2.apply(&w).unwrap().is_zero());
        assert!(lift_is_isomorphism(&g, 1).unwrap().verdict);
    }

    #[test]
    fn kernel_witness_beyond_level_two() {
        let p = poly("F2", "x^3+x+1");
        let g = residue_morphism_from_q(&p, &p, ID, &poly("F2", "x^2")).unwrap();
        for n in 2..=6 {
            let rep = lift_is_isomorphism(&g, n).unwrap();
            let w = kernel_witness(&g, &rep).unwrap().unwrap();
            let gn = lift_morphism(&g, n).unwrap();
            assert!(!w.is_zero(), "n={n}");
            assert!(gn.apply(&w).unwrap().is_zero(), "n={n}");
        }
    }

    #[test]
    fn linear_q_over_quadratics_always_lifts() {
        for field in ["F2", "F3"] {
            let f = parse_field(field).unwrap();
            for p1 in Poly::enumerate_irreducibles(&f, 2).unwrap() {
                for p2 in Poly::enumerate_irreducibles(&f, 2).unwrap() {
                    for g in find_residue_isomorphisms(&p1, &p2, ID).unwrap() {
                        if g.q_image().degree() == Some(1) {
                            assert!(lift_is_isomorphism(&g, 3).unwrap().verdict);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn induced_morphism_strips_multiples_of_p2() {
        let p = poly("F2", "x^3+x+1");
        let source = QuotientRing::make(p.clone(), 2).unwrap();
        let r = &poly("F2", "x^2") + &(&p * &poly("F2", "x+1"));
        let f = StabilizingMorphism::new(&source, &source, ID, &r).unwrap();
        assert_eq!(induced_residue_morphism(&f).unwrap().q_image(), &poly("F2", "x^2"));
        let id = StabilizingMorphism::identity(&source);
        let res = induced_residue_morphism(&id).unwrap();
        assert_eq!(res, StabilizingMorphism::identity(&source.residue_field()));
    }

    #[test]
    fn roots_examples() {
        let (p1, p2) = (poly("F3", "x^2+1"), poly("F3", "x^2+x+2"));
        let f = residue_morphism_from_q(&p1, &p2, ID, &poly("F3", "x+2")).unwrap();
        let rep = roots_bijection_check(&f).unwrap();
        assert!(rep.bijective);
        assert_eq!(rep.roots_p2.len(), 2);
        assert_eq!(rep.field.order(), Some(9));

        let p = poly("F2", "x^3+x+1");
        let id = StabilizingMorphism::identity(&QuotientRing::make(p, 1).unwrap());
        let rep = roots_bijection_check(&id).unwrap();
        assert!(rep.bijective);
        assert_eq!(rep.images, rep.roots_p2);

        let (c1, c2) = (poly("F2", "x^3+x+1"), poly("F2", "x^3+x^2+1"));
        for f in find_residue_isomorphisms(&c1, &c2, ID).unwrap() {
            let rep = roots_bijection_check(&f).unwrap();
            assert!(rep.bijective && rep.roots_p2.len() == 3);
        }
    }

    #[test]
    fn pipeline_examples() {
        let (p1, p2) = (poly("F3", "x^2+1"), poly("F3", "x^2+x+2"));
        let iso = rings_isomorphic_separable(&p1, &p2, 3).unwrap().unwrap();
        assert_eq!(iso.q_image(), &poly("F3", "x+2"));
        assert!(
            rings_isomorphic_separable(&p1, &poly("F3", "x^3+2*x+1"), 2)
                .unwrap()
                .is_none()
        );
        let iso = rings_isomorphic_separable(&p1, &p1, 4).unwrap().unwrap();
        assert_eq!(iso, StabilizingMorphism::identity(iso.source()));
        assert!(matches!(
            rings_isomorphic_separable(&poly("F2(t)", "x^2+t"), &poly("F2(t)", "x^2+t"), 2),
            Err(Error::NotSeparable(_))
        ));
    }

    #[test]
    fn degree_one_uses_the_affine_map() {
        let (p1, p2) = (poly("F3", "x+1"), poly("F3", "x+2"));
        let iso = rings_isomorphic_separable(&p1, &p2, 3).unwrap().unwrap();
        assert_eq!(iso.q_image(), &poly("F3", "x+1"));
        let found = find_residue_isomorphisms(&p1, &p2, ID).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].q_image().is_constant());
        let rep = lift_is_isomorphism(&found[0], 2).unwrap();
        assert!(!rep.verdict);
        let w = kernel_witness(&found[0], &rep).unwrap().unwrap();
        assert!(lift_morphism(&found[0], 2).unwrap().apply(&w).unwrap().is_zero());
    }

    #[test]
    fn digit_transport_yields_an_isomorphism() {
        let p = poly("F2", "x^3+x+1");
        let g = residue_morphism_from_q(&p, &p, ID, &poly("F2", "x^2")).unwrap();
        for n in 1..=4 {
            let iso = isomorphism_through_digits(&g, n).unwrap();
            assert!(verify::certify_isomorphism(&iso).unwrap(), "n={n}");
            assert_eq!(induced_residue_morphism(&iso).unwrap(), g);
        }
        let q = poly("Q", "x^2-2");
        let f = residue_morphism_from_q(&q, &q, ID, &poly("Q", "-x")).unwrap();
        let iso = isomorphism_from_residue(&f, 3).unwrap();
        assert!(verify::certify_isomorphism(&iso).unwrap());
    }
}
