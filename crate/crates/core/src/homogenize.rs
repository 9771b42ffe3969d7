//! Coefficients of the homogenized (effective) equations.
//!
//! [`BracketCoefficients`] holds the fifteen cell averages `C1..C15` built
//! from nested averaging operators of the area `a(y)`. Every average whose
//! definition contains the slope `a_y` is evaluated through an equivalent
//! slope-free form, using `a⁻³a_y = −½(a⁻²)_y` and integration by parts, so
//! step profiles (where `a_y` is a sum of point masses) are handled exactly.
//!
//! [`HomogCoefficients`] are the `α`/`β` coefficients of the effective system
//!
//! ```text
//! ρ_t = α1 q_x + α2 q_xx + α3 q ρ_x + α4 q² q_x + α5 q_xxx + α6 q ρ ρ_x + α7 q_x ρ_x + α8 q ρ_xx
//! q_t = β1 ρ_x + β2 q q_x + β3 ρ ρ_x + β4 ρ_xx + β5 q ρ q_x + β6 q_x² + β7 q q_xx
//!       + β8 q² ρ_x + β9 ρ_x² + β10 ρ ρ_xx + β11 ρ_xxx
//! ```
//!
//! together with `α5b`, `β11b`, the coefficients of `ρ_xxt` and `q_xxt` in
//! the mixed-derivative form of the third-order terms.

use crate::averaging::{PeriodicFunction, DEFAULT_SAMPLES};
use crate::error::{Error, Result};
use crate::medium::{CrossSectionProfile, GasModel};

/// `(⟨a⟩, ⟨a⁻¹⟩, ⟨a⁻²⟩, ⟨a⁻³⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaMoments {
    pub mean: f64,
    pub inv: f64,
    pub inv2: f64,
    pub inv3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    pub c11: f64,
    pub c12: f64,
    pub c13: f64,
    pub c14: f64,
    pub c15: f64,
    pub rho0: f64,
    pub moments: AreaMoments,
    pub profile_label: String,
}

impl BracketCoefficients {
    pub fn table(&self) -> [(&'static str, f64); 15] {
        [
            ("C1", self.c1),
            ("C2", self.c2),
            ("C3", self.c3),
            ("C4", self.c4),
            ("C5", self.c5),
            ("C6", self.c6),
            ("C7", self.c7),
            ("C8", self.c8),
            ("C9", self.c9),
            ("C10", self.c10),
            ("C11", self.c11),
            ("C12", self.c12),
            ("C13", self.c13),
            ("C14", self.c14),
            ("C15", self.c15),
        ]
    }
}

/// Bundle of the functions every coefficient is assembled from.
struct Integrands {
    a: PeriodicFunction,
    inv: PeriodicFunction,
    inv2: PeriodicFunction,
    inv3: PeriodicFunction,
}

impl Integrands {
    fn new(profile: &CrossSectionProfile, n: usize) -> Result<Self> {
        let a = profile.unit_function(n)?;
        let min = a.samples().iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(Error::NonPositiveProfile { min });
        }
        Ok(Self {
            inv: a.pow(-1.0)?,
            inv2: a.pow(-2.0)?,
            inv3: a.pow(-3.0)?,
            a,
        })
    }

    fn moments(&self) -> AreaMoments {
        AreaMoments {
            mean: self.a.mean(),
            inv: self.inv.mean(),
            inv2: self.inv2.mean(),
            inv3: self.inv3.mean(),
        }
    }
}

fn check_rho0(rho0: f64) -> Result<()> {
    if !(rho0 > 0.0 && rho0.is_finite()) {
        return Err(Error::param("rho0", format!("must be positive, got {rho0}")));
    }
    Ok(())
}

pub fn area_moments(profile: &CrossSectionProfile) -> Result<AreaMoments> {
    area_moments_with(profile, DEFAULT_SAMPLES)
}

pub fn area_moments_with(profile: &CrossSectionProfile, n: usize) -> Result<AreaMoments> {
    Ok(Integrands::new(profile, n)?.moments())
}

pub fn bracket_coefficients(
    profile: &CrossSectionProfile,
    rho0: f64,
) -> Result<BracketCoefficients> {
    bracket_coefficients_with(profile, rho0, DEFAULT_SAMPLES)
}

/// Slope-free evaluation of `C1..C15` on `n` samples per period.
pub fn bracket_coefficients_with(
    profile: &CrossSectionProfile,
    rho0: f64,
    n: usize,
) -> Result<BracketCoefficients> {
    check_rho0(rho0)?;
    let f = Integrands::new(profile, n)?;
    let m = f.moments();
    let br_a = f.a.bracket();

    let c1 = f.inv.mean_product(&br_a)?;
    let c2 = f.inv.mean_product(&br_a.bracket())?;
    let c3 = -(m.inv - m.mean * m.inv2) / (2.0 * rho0 * rho0);
    let c4 = -f.a.mean_product(&f.inv2.bracket())? / (2.0 * rho0);
    let c5 = -(m.inv3 - m.inv * m.inv2) / (2.0 * rho0 * rho0);
    let c6 = -(m.inv3 + m.mean * m.inv2 * m.inv2 - 2.0 * m.inv * m.inv2) / (4.0 * rho0 * rho0);
    let c7 = m.inv2 * c1 / (2.0 * rho0);
    // ⟨a⁻³a_y[[a]]²⟩ = ⟨a⁻²[[a]]{a}⟩ after integrating by parts
    let c8 = -(c1 - m.mean * f.inv2.mean_product(&br_a)?) / rho0;
    let c9 = -f.inv.mean_product(&br_a.mul(&br_a)?)?;
    let c10 = m.inv / (rho0 * rho0);
    let br_inv = f.inv.bracket();
    let c11 = -f.a.mean_product(&br_inv.mul(&br_inv)?)?;
    let c12 = m.inv3 / (rho0 * rho0);
    let c13 = -(m.inv - m.mean * m.inv2) / (2.0 * rho0);
    let c14 = m.inv / rho0;
    let c15 = -c1 / rho0;

    Ok(BracketCoefficients {
        c1,
        c2,
        c3,
        c4,
        c5,
        c6,
        c7,
        c8,
        c9,
        c10,
        c11,
        c12,
        c13,
        c14,
        c15,
        rho0,
        moments: m,
        profile_label: profile.label(),
    })
}

/// `C1..C15` from their literal definitions, with `a_y` taken from the
/// profile's closed-form slope. Only smooth profiles qualify.
pub fn direct_bracket_coefficients(
    profile: &CrossSectionProfile,
    rho0: f64,
    n: usize,
) -> Result<BracketCoefficients> {
    check_rho0(rho0)?;
    let slope = profile
        .unit_slope(n)
        .ok_or_else(|| Error::param("profile", "no closed-form slope for this profile kind"))??;
    let f = Integrands::new(profile, n)?;
    let m = f.moments();
    let r2 = rho0 * rho0;
    let s3 = f.inv3.mul(&slope)?; // a⁻³ a_y
    let br_a = f.a.bracket();
    let br_s3 = s3.bracket();

    let c1 = f.inv.mean_product(&br_a)?;
    Ok(BracketCoefficients {
        c1,
        c2: f.inv.mean_product(&br_a.bracket())?,
        c3: f.a.mean_product(&br_s3)? / r2,
        c4: s3.mean_product(&br_a.bracket())? / rho0,
        c5: f.inv.mean_product(&br_s3)? / r2,
        c6: s3.mean_product(&f.a.mul(&br_s3)?.bracket())? / r2,
        c7: s3.mean_product(&f.a.mul(&f.inv.bracket())?.bracket())? / rho0,
        c8: f.a.mean_product(&s3.mul(&br_a)?.bracket())? / rho0,
        c9: f.a.mean_product(&f.inv.mul(&br_a)?.bracket())?,
        c10: m.inv / r2,
        c11: f.inv.mean_product(&f.a.mul(&f.inv.bracket())?.bracket())?,
        c12: m.inv3 / r2,
        c13: f.a.mean_product(&br_s3)? / rho0,
        c14: m.inv / rho0,
        c15: f.a.mean_product(&f.inv.bracket())? / rho0,
        rho0,
        moments: m,
        profile_label: profile.label(),
    })
}

/// One independent evaluation of a coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientForm {
    pub coefficient: &'static str,
    pub expression: &'static str,
    pub value: f64,
    /// Whether this form needs `a_y` directly.
    pub uses_slope: bool,
}

/// Every equivalent expression of each multi-form coefficient, each evaluated
/// on its own. Forms that need `a_y` are included only when the profile has a
/// closed-form slope.
pub fn coefficient_forms(
    profile: &CrossSectionProfile,
    rho0: f64,
    n: usize,
) -> Result<Vec<CoefficientForm>> {
    check_rho0(rho0)?;
    let f = Integrands::new(profile, n)?;
    let m = f.moments();
    let r2 = rho0 * rho0;
    let br_a = f.a.bracket();
    let br_inv = f.inv.bracket();
    let br_inv2 = f.inv2.bracket();
    let fl_inv2 = f.inv2.fluctuation();

    let mut out = Vec::new();
    let mut push = |coefficient, expression, value: f64, uses_slope| {
        out.push(CoefficientForm {
            coefficient,
            expression,
            value,
            uses_slope,
        })
    };

    let c1 = f.inv.mean_product(&br_a)?;
    push("C1", "<a^-1 [[a]]>", c1, false);
    push("C1", "-<a [[a^-1]]>", -f.a.mean_product(&br_inv)?, false);

    push("C2", "<a^-1 [[[[a]]]]>", f.inv.mean_product(&br_a.bracket())?, false);
    push("C2", "<a [[[[a^-1]]]]>", f.a.mean_product(&br_inv.bracket())?, false);

    push("C3", "-(<a^-1> - <a><a^-2>)/(2 rho0^2)", -(m.inv - m.mean * m.inv2) / (2.0 * r2), false);
    push("C3", "-<a {a^-2}>/(2 rho0^2)", -f.a.mean_product(&fl_inv2)? / (2.0 * r2), false);
    push("C3", "-<a^-2 {a}>/(2 rho0^2)", -f.inv2.mean_product(&f.a.fluctuation())? / (2.0 * r2), false);

    push("C4", "-<a [[a^-2]]>/(2 rho0)", -f.a.mean_product(&br_inv2)? / (2.0 * rho0), false);
    push("C4", "<a^-2 [[a]]>/(2 rho0)", f.inv2.mean_product(&br_a)? / (2.0 * rho0), false);

    push("C5", "-(<a^-3> - <a^-1><a^-2>)/(2 rho0^2)", -(m.inv3 - m.inv * m.inv2) / (2.0 * r2), false);
    push("C5", "-<a^-1 {a^-2}>/(2 rho0^2)", -f.inv.mean_product(&fl_inv2)? / (2.0 * r2), false);

    push(
        "C6",
        "-(<a^-3> + <a><a^-2>^2 - 2<a^-1><a^-2>)/(4 rho0^2)",
        -(m.inv3 + m.mean * m.inv2 * m.inv2 - 2.0 * m.inv * m.inv2) / (4.0 * r2),
        false,
    );
    push("C6", "-<a {a^-2}^2>/(4 rho0^2)", -f.a.mean_product(&fl_inv2.mul(&fl_inv2)?)? / (4.0 * r2), false);

    push("C7", "<a^-2> C1/(2 rho0)", m.inv2 * c1 / (2.0 * rho0), false);
    push("C7", "<{a^-2} a [[a^-1]]>/(2 rho0)", fl_inv2.mul(&f.a)?.mean_product(&br_inv)? / (2.0 * rho0), false);

    push("C8", "-(C1 - <a><a^-2 [[a]]>)/rho0", -(c1 - m.mean * f.inv2.mean_product(&br_a)?) / rho0, false);
    push("C8", "-<a^-2 [[a]] {a}>/rho0", -f.inv2.mul(&br_a)?.mean_product(&f.a.fluctuation())? / rho0, false);

    push("C9", "<a [[a^-1 [[a]]]]>", f.a.mean_product(&f.inv.mul(&br_a)?.bracket())?, false);
    push("C9", "-<a^-1 [[a]]^2>", -f.inv.mean_product(&br_a.mul(&br_a)?)?, false);

    push("C11", "<a^-1 [[a [[a^-1]]]]>", f.inv.mean_product(&f.a.mul(&br_inv)?.bracket())?, false);
    push("C11", "-<a [[a^-1]]^2>", -f.a.mean_product(&br_inv.mul(&br_inv)?)?, false);

    push("C13", "-(<a^-1> - <a><a^-2>)/(2 rho0)", -(m.inv - m.mean * m.inv2) / (2.0 * rho0), false);
    push("C13", "-<a {a^-2}>/(2 rho0)", -f.a.mean_product(&fl_inv2)? / (2.0 * rho0), false);

    push("C15", "<a [[a^-1]]>/rho0", f.a.mean_product(&br_inv)? / rho0, false);
    push("C15", "-<a^-1 [[a]]>/rho0", -c1 / rho0, false);

    if let Some(slope) = profile.unit_slope(n) {
        let s3 = f.inv3.mul(&slope?)?;
        let br_s3 = s3.bracket();
        let bb_a = br_a.bracket();
        push("C3", "<a [[a_y a^-3]]>/rho0^2", f.a.mean_product(&br_s3)? / r2, true);
        push("C3", "-<a_y a^-3 [[a]]>/rho0^2", -s3.mean_product(&br_a)? / r2, true);
        push("C4", "<a^-3 a_y [[[[a]]]]>/rho0", s3.mean_product(&bb_a)? / rho0, true);
        push("C4", "<a [[[[a^-3 a_y]]]]>/rho0", f.a.mean_product(&br_s3.bracket())? / rho0, true);
        push("C5", "<a^-1 [[a^-3 a_y]]>/rho0^2", f.inv.mean_product(&br_s3)? / r2, true);
        push("C5", "-<a^-3 a_y [[a^-1]]>/rho0^2", -s3.mean_product(&br_inv)? / r2, true);
        push("C6", "<a^-3 a_y [[a [[a^-3 a_y]]]]>/rho0^2", s3.mean_product(&f.a.mul(&br_s3)?.bracket())? / r2, true);
        push("C7", "<a^-3 a_y [[a [[a^-1]]]]>/rho0", s3.mean_product(&f.a.mul(&br_inv)?.bracket())? / rho0, true);
        push("C7", "<a^-1 [[a [[a^-3 a_y]]]]>/rho0", f.inv.mean_product(&f.a.mul(&br_s3)?.bracket())? / rho0, true);
        push("C8", "<a [[a^-3 a_y [[a]]]]>/rho0", f.a.mean_product(&s3.mul(&br_a)?.bracket())? / rho0, true);
        push("C8", "-<a^-3 a_y [[a]]^2>/rho0", -s3.mean_product(&br_a.mul(&br_a)?)? / rho0, true);
        push("C13", "<a [[a^-3 a_y]]>/rho0", f.a.mean_product(&br_s3)? / rho0, true);
        push("C13", "-<a^-3 a_y [[a]]>/rho0", -s3.mean_product(&br_a)? / rho0, true);
    }
    Ok(out)
}

/// Coefficients of the effective system for one profile, gas and
/// background density.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    pub alpha5: f64,
    pub alpha6: f64,
    pub alpha7: f64,
    pub alpha8: f64,
    pub alpha5b: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
    pub beta5: f64,
    pub beta6: f64,
    pub beta7: f64,
    pub beta8: f64,
    pub beta9: f64,
    pub beta10: f64,
    pub beta11: f64,
    pub beta11b: f64,
    pub delta: f64,
    pub rho0: f64,
    pub gas: GasModel,
}

impl HomogCoefficients {
    pub fn table(&self) -> [(&'static str, f64); 21] {
        [
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
            ("alpha3", self.alpha3),
            ("alpha4", self.alpha4),
            ("alpha5", self.alpha5),
            ("alpha6", self.alpha6),
            ("alpha7", self.alpha7),
            ("alpha8", self.alpha8),
            ("alpha5b", self.alpha5b),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("beta3", self.beta3),
            ("beta4", self.beta4),
            ("beta5", self.beta5),
            ("beta6", self.beta6),
            ("beta7", self.beta7),
            ("beta8", self.beta8),
            ("beta9", self.beta9),
            ("beta10", self.beta10),
            ("beta11", self.beta11),
            ("beta11b", self.beta11b),
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.table().iter().all(|(_, v)| v.is_finite())
    }
}

/// `α`/`β` coefficients from the bracket table. `P'` and `P''` are taken at
/// the table's background density.
pub fn homog_coefficients(
    c: &BracketCoefficients,
    gas: &GasModel,
    delta: f64,
) -> Result<HomogCoefficients> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::param("delta", format!("must be positive, got {delta}")));
    }
    let pr = gas.pressure(c.rho0)?;
    let (p1, p2) = (pr.dp, pr.d2p);
    let m1 = c.moments.mean;
    let mi = c.moments.inv;
    let d = delta;
    let d2 = delta * delta;
    let quartic = 4.0 * c.c13 * c.c13 + 4.0 * c.c13 * c.c14;

    Ok(HomogCoefficients {
        alpha1: -1.0 / m1,
        alpha2: d * (-c.c1 / (mi * m1 * m1)),
        alpha3: d * 2.0 * c.c13 / (mi * m1),
        alpha4: d2
            * (quartic / (mi * p1 * m1 * m1)
                - c.c3 / (p1 * m1 * m1)
                - c.c13 * p2 / (p1 * p1 * m1 * m1)),
        alpha5: d2 * (c.c9 / (mi * m1.powi(3)) - c.c2 / (mi * m1 * m1)),
        alpha6: d2 * (-2.0 * c.c3 / (mi * m1)),
        alpha7: d2 * (2.0 * c.c8 / (mi * m1 * m1) - 2.0 * c.c4 / (mi * m1)),
        alpha8: d2
            * (-2.0 * c.c13 * c.c1 / (mi * mi * m1 * m1) + 2.0 * c.c8 / (mi * m1 * m1)
                - 2.0 * c.c4 / (mi * m1)),
        alpha5b: d2 * (-c.c9 / (mi * m1 * m1) + c.c2 / (mi * m1)),
        beta1: -p1 / mi,
        beta2: d * (-2.0 * c.c13 - 2.0 * c.c14) / (mi * m1),
        beta3: d * (-p2 / mi),
        beta4: d * c.c1 * p1 / (mi * mi * m1),
        beta5: d2 * (2.0 * c.c10 + 2.0 * c.c3) / (mi * m1),
        beta6: d2 * (2.0 * c.c1 * c.c13 / (mi * mi * m1 * m1) - c.c8 / (mi * m1 * m1)),
        beta7: d2
            * (-2.0 * c.c1 * c.c13 / (mi * mi * m1 * m1) + 4.0 * c.c7 / (mi * mi * m1)
                - 2.0 * c.c4 / (mi * m1)),
        beta8: d2 * ((-3.0 * c.c5 + 4.0 * c.c6 + c.c12) / (mi * mi) + quartic / (mi * mi * m1)),
        beta9: d2
            * (2.0 * c.c7 * p1 / mi.powi(3) + c.c1 * p2 / (mi * mi * m1)
                - 2.0 * c.c1 * c.c13 * p1 / (mi.powi(3) * m1)),
        beta10: d2 * c.c1 * p2 / (mi * mi * m1),
        beta11: d2 * (c.c11 * p1 / (mi.powi(3) * m1) - c.c2 * p1 / (mi * mi * m1)),
        beta11b: d2 * (-c.c11 / (mi * mi * m1) + c.c2 / (mi * m1)),
        delta,
        rho0: c.rho0,
        gas: *gas,
    })
}

/// Bracket table and `α`/`β` coefficients for a profile in one call, using
/// the profile period as `δ`.
pub fn homogenize(
    profile: &CrossSectionProfile,
    gas: &GasModel,
    rho0: f64,
) -> Result<(BracketCoefficients, HomogCoefficients)> {
    let c = bracket_coefficients(profile, rho0)?;
    let h = homog_coefficients(&c, gas, profile.period())?;
    Ok((c, h))
}
