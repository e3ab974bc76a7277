//! Exhaustive sweep over pairs of monic irreducibles of equal degree:
//! every residue morphism found, lifted to each level, with both criteria
//! and the kernel dimension of the lift side by side.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{Field, FieldAutomorphism};
use crate::lift::{
    affine_isomorphism, find_residue_isomorphisms, lift_is_isomorphism, lift_morphism,
    LiftReport,
};
use crate::poly::Poly;
use crate::quotient::StabilizingMorphism;
use crate::verify::kernel_dimension;

/// One residue morphism at one level. Column order is the CSV order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub field: String,
    pub sigma: String,
    pub degree: usize,
    pub p1: String,
    pub p2: String,
    pub n: usize,
    pub q_f: String,
    pub s_f: String,
    pub gcd_sf_p2_is_one: bool,
    pub q_f_derivative_nonzero: bool,
    pub verdict: bool,
    pub kernel_dim: usize,
    #[serde(skip)]
    sort_key: (usize, u128, u128, usize, u128),
}

impl SurveyRow {
    /// `verdict ⟺ kernel_dim = 0`.
    pub fn consistent(&self) -> bool {
        self.verdict == (self.kernel_dim == 0)
    }
}

fn row(
    field: &Field,
    sigma: FieldAutomorphism,
    level_one: &StabilizingMorphism,
    lifted: &StabilizingMorphism,
    report: &LiftReport,
) -> Result<SurveyRow> {
    let p1 = level_one.source().base_poly();
    let p2 = level_one.target().base_poly();
    let d = p1.degree().unwrap_or(0);
    Ok(SurveyRow {
        field: field.to_string(),
        sigma: sigma.to_string(),
        degree: d,
        p1: p1.to_string(),
        p2: p2.to_string(),
        n: report.n,
        q_f: report.q_f.to_string(),
        s_f: report.s_f.to_string(),
        gcd_sf_p2_is_one: report.gcd_sf_p2_is_one,
        q_f_derivative_nonzero: report.q_f_derivative_nonzero,
        verdict: report.verdict,
        kernel_dim: kernel_dimension(lifted)?,
        sort_key: (
            d,
            p1.counting_index(),
            p2.counting_index(),
            report.n,
            report.q_f.counting_index(),
        ),
    })
}

/// Linear moduli: the affine map `X ↦ X + c₂ − σ(c₁)` has `S_f = 1`.
fn affine_rows(
    p1: &Poly,
    p2: &Poly,
    sigma: FieldAutomorphism,
    max_power: usize,
) -> Result<Vec<SurveyRow>> {
    let field = p1.field();
    let mut rows = Vec::new();
    for n in 1..=max_power {
        let iso = affine_isomorphism(p1, p2, sigma, n)?;
        let shift = field.sub(&p2.coeff(0), &sigma.apply(field, &p1.coeff(0))?);
        let q = &Poly::x(field) + &Poly::constant(field, shift);
        let s = crate::lift::compute_sf(p1, p2, sigma, &q)?;
        let gcd_one = s.gcd(p2)?.is_one();
        let deriv = !q.derivative().is_zero();
        let report = LiftReport {
            n,
            q_f: q,
            s_f: s,
            q_f_derivative_nonzero: deriv,
            gcd_sf_p2_is_one: gcd_one,
            verdict: gcd_one && deriv,
            multiplicity: 1,
            kernel_exponent: None,
        };
        let level_one = affine_isomorphism(p1, p2, sigma, 1)?;
        rows.push(row(field, sigma, &level_one, &iso, &report)?);
    }
    Ok(rows)
}

/// All rows for monic irreducibles of degree `1..=max_degree` over a
/// finite field and levels `1..=max_power`, for each `σ` in `sigmas`.
/// Sorted by (degree, p1, p2, n, q_f) in counting order, then by `σ`.
pub fn survey(
    field: &Field,
    max_degree: usize,
    max_power: usize,
    sigmas: &[FieldAutomorphism],
) -> Result<Vec<SurveyRow>> {
    if !field.is_finite() {
        return Err(Error::UnsupportedField(field.to_string()));
    }
    let mut rows = Vec::new();
    for &sigma in sigmas {
        sigma.check(field)?;
        for d in 1..=max_degree {
            let irreducibles = Poly::enumerate_irreducibles(field, d)?;
            for p1 in &irreducibles {
                for p2 in &irreducibles {
                    if d == 1 {
                        rows.extend(affine_rows(p1, p2, sigma, max_power)?);
                        continue;
                    }
                    for f in find_residue_isomorphisms(p1, p2, sigma)? {
                        for n in 1..=max_power {
                            let report = lift_is_isomorphism(&f, n)?;
                            let lifted = lift_morphism(&f, n)?;
                            rows.push(row(field, sigma, &f, &lifted, &report)?);
                        }
                    }
                }
            }
        }
    }
    rows.sort_by(|a, b| a.sort_key.cmp(&b.sort_key).then_with(|| a.sigma.cmp(&b.sigma)));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_survey_is_consistent() {
        let f3 = Field::prime(3).unwrap();
        let rows = survey(&f3, 2, 3, &[FieldAutomorphism::Identity]).unwrap();
        assert!(rows.iter().all(SurveyRow::consistent));
        // 9 linear pairs and 9 quadratic pairs with 2 morphisms each, 3 levels.
        assert_eq!(rows.len(), (9 + 9 * 2) * 3);
        assert!(rows.iter().filter(|r| r.degree == 1).all(|r| r.verdict));
        let keys: Vec<_> = rows.iter().map(|r| r.sort_key).collect();
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn frobenius_rows_over_f4() {
        let f4 = crate::parse::parse_field("F2[a]/(a^2+a+1)").unwrap();
        let frob = FieldAutomorphism::frobenius(1).unwrap();
        let rows = survey(&f4, 2, 2, &[FieldAutomorphism::Identity, frob]).unwrap();
        assert!(rows.iter().all(SurveyRow::consistent));
        assert!(rows.iter().any(|r| r.sigma == "frob^1"));
        // Degree-two X-images are linear, so every lift is an isomorphism.
        assert!(rows.iter().filter(|r| r.degree == 2).all(|r| r.verdict));
        assert!(rows.iter().any(|r| r.degree == 2));
    }

    #[test]
    fn infinite_fields_are_refused() {
        assert!(matches!(
            survey(&Field::rationals(), 2, 2, &[FieldAutomorphism::Identity]),
            Err(Error::UnsupportedField(_))
        ));
    }
}
