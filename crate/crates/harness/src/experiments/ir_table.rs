//! Infrared classification table, vanishing of the condensate form on
//! physical directions, and generator-level containment of the ideals.

use super::common;
use crate::config::RunConfig;
use crate::error::HarnessResult;
use crate::report::{real, ReportRow};
use rand::Rng;
use vanhove_core::forms::{ir_classify, q_zero, SingularityConvention};
use vanhove_core::resolvent::{classify_direction, condensate_excluded, quotient_project, Projection, ResolventExpression, ResolventGenerator};
use vanhove_core::{CondensateParams, Complex64, Dispersion, RadialDirection, RadialTestFunction};

const ID: &str = "ir-table";

fn verdict(admissible: bool) -> &'static str {
    if admissible {
        "admissible"
    } else {
        "rejected"
    }
}

pub fn run(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let c = &cfg.ir_table;
    let cond = CondensateParams::new(1.0, c.condensate_density);
    let with_origin: RadialDirection = RadialTestFunction::gaussian(Complex64::new(1.0, 0.0), 1.0)?.into();
    let without_origin: RadialDirection =
        RadialTestFunction::polynomial_gaussian(Complex64::new(1.0, 0.0), 2.0, 1.0)?.into();
    let mut rows = Vec::new();
    for &s in &c.exponents {
        let disp = Dispersion::power(s)?;
        for (value, f) in [(0, &without_origin), (1, &with_origin)] {
            let desc = format!("s={s:.2} f(0)={value}");
            let faithful = ir_classify(f, &disp, SingularityConvention::DefinitionFaithful);
            // Rejected exactly for f̂(0) ≠ 0 and s ≥ 2.
            let expected = !(value == 1 && s >= 2.0);
            rows.push(ReportRow::categorical(
                format!("{ID}.definition-faithful"),
                desc.clone(),
                verdict(faithful.class.is_admissible()),
                verdict(expected),
            ));
            let literal = ir_classify(f, &disp, SingularityConvention::TheoremLiteral);
            let expected = !(value == 1 && s > 2.0);
            rows.push(ReportRow::categorical(
                format!("{ID}.theorem-literal"),
                desc.clone(),
                verdict(literal.class.is_admissible()),
                verdict(expected),
            ));
            if s > 2.0 {
                for (name, report) in [("definition-faithful", faithful), ("theorem-literal", literal)] {
                    if report.class.is_admissible() {
                        let q0 = q_zero(f, f, &cond).norm();
                        rows.push(ReportRow::new(
                            format!("{ID}.condensate-form"),
                            format!("{desc} {name}"),
                            real(q0),
                            None,
                            q0,
                            0.0,
                        ));
                    }
                }
            }
        }
    }

    let mut rng = common::rng(cfg, 50);
    for i in 0..c.family_draws {
        let s = c.family_exponents[rng.gen_range(0..c.family_exponents.len())];
        let disp = Dispersion::power(s)?;
        let count = rng.gen_range(1..=3);
        let mut factors = Vec::with_capacity(count);
        let mut any_rejected = false;
        let mut contained = true;
        let mut q0_max = 0.0f64;
        for _ in 0..count {
            let f = random_family_member(&mut rng)?;
            let class = classify_direction(&f, &disp);
            contained &= condensate_excluded(class, &disp);
            any_rejected |= !class.in_x_phys;
            if class.in_x_phys {
                q0_max = q0_max.max(q_zero(&f, &f, &cond).norm());
            }
            let z = common::random_parameter(&mut rng, 0.5, 2.0);
            factors.push(ResolventGenerator::new(z, f)?);
        }
        let desc = format!("draw={} s={s} factors={count}", common::padded(i));
        rows.push(ReportRow::categorical(
            format!("{ID}.containment"),
            desc.clone(),
            if contained { "disjoint" } else { "intersecting" },
            "disjoint",
        ));
        rows.push(ReportRow::new(
            format!("{ID}.family-condensate-form"),
            desc.clone(),
            real(q0_max),
            None,
            q0_max,
            0.0,
        ));
        let expr = ResolventExpression { prefactor: Complex64::new(1.0, 0.0), factors };
        let projected = match quotient_project(&expr, &disp) {
            Projection::Physical(_) => "physical",
            Projection::Ideal { .. } => "ideal",
        };
        rows.push(ReportRow::categorical(
            format!("{ID}.quotient"),
            desc,
            projected,
            if any_rejected { "ideal" } else { "physical" },
        ));
    }
    // The scalar survives the quotient.
    let scalar = ResolventExpression::<RadialDirection>::scalar(Complex64::new(2.0, 0.0));
    let projected = if quotient_project(&scalar, &Dispersion::power(3.0)?).is_physical() { "physical" } else { "ideal" };
    rows.push(ReportRow::categorical(format!("{ID}.quotient"), "scalar", projected, "physical"));
    Ok(rows)
}

/// Profiles with and without a zero-momentum component and assorted origin orders.
fn random_family_member(rng: &mut rand_chacha::ChaCha8Rng) -> HarnessResult<RadialDirection> {
    let amplitude = common::uniform_complex(rng, 1.0);
    let width = rng.gen_range(0.3..2.0);
    let f = match rng.gen_range(0..4) {
        0 => RadialTestFunction::gaussian(amplitude, width)?,
        1 => RadialTestFunction::polynomial_gaussian(amplitude, rng.gen_range(0.1..4.0), width)?,
        2 => {
            let inner = rng.gen_range(0.05..1.0);
            RadialTestFunction::shell_bump(amplitude, inner, inner + width)?
        }
        _ => {
            // f̂(0) ≠ 0 mixed with a vanishing profile.
            let a: RadialDirection = RadialTestFunction::gaussian(amplitude, width)?.into();
            let b: RadialDirection = RadialTestFunction::polynomial_gaussian(Complex64::new(1.0, 0.0), 1.0, 1.0)?.into();
            return Ok(a.combine(Complex64::new(1.0, 0.0), &b, Complex64::new(0.5, 0.0)));
        }
    };
    Ok(f.into())
}
