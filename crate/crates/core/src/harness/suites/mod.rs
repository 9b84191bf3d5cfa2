mod counting;
mod exact;
mod extension;

use rand::Rng;

use super::config::{within_budget, ExperimentConfig, GridPoint};
use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::grid::Space;

/// What each suite checks.
pub fn statement(suite: &str) -> Result<&'static str> {
    Ok(match suite {
        "gauss" => "the quadratic Gauss sum equals its sign/power-of-i closed form and has modulus sqrt(q)",
        "sphere-fourier" => "closed forms for the inverse transform of sphere indicators agree with the dense transform",
        "weak-l2" => "sum over S_0 of |FT(1_G)|^2 <= q^(d-1)|G| + q^((d-2)/2)|G|^2 when d = 4k+2, q = 3 mod 4",
        "energy" => "E(A) and zero-distance pairs on S_j, j != 0, stay within a q-independent multiple of their bounds",
        "paraboloid-pairs" => "pair counts on the paraboloid against the point-hyperplane incidence bound",
        "lines" => "a line with non-isotropic direction meets S_j, j != 0, in at most two points",
        "weak-l4" => "the L^4 norm of the extension of 1_A equals q^(d/4)|S_j|^(-1)E(A)^(1/4)",
        "main-zero" => "extension from S_0 at (2, (2d+4)/d) is bounded and sharp for d = 4k+2, q = 3 mod 4",
        "main-nonzero" => "extension from S_j, j != 0, at (4d/(3d-2), 4) is sharp",
        "duality" => "extension and restriction ratios have the same supremum; dual-norm extremals realise L^p norms",
        "decay" => "max over m != 0 of |(d sigma)^v(m)| is at most a constant times q^(-(d-2)/2) on S_0",
        "subspaces" => "maximal isotropic subspaces of S_0 and affine subspaces of S_j have the predicted dimensions",
        other => return Err(Error::UnknownSuite(other.to_string())),
    })
}

/// Runs one suite and writes JSON and CSV if `config.out` is set.
pub fn run_suite(name: &str, config: &ExperimentConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(name, statement(name)?, config);
    config.validate()?;
    report.timed("total", |rep| -> Result<()> {
        match name {
            "gauss" => exact::gauss(config, rep),
            "sphere-fourier" => exact::sphere_fourier(config, rep),
            "lines" => exact::lines(config, rep),
            "subspaces" => exact::subspaces(config, rep),
            "decay" => exact::decay(config, rep),
            "weak-l2" => counting::weak_l2(config, rep),
            "energy" => counting::energy(config, rep),
            "paraboloid-pairs" => counting::paraboloid_pairs(config, rep),
            "weak-l4" => counting::weak_l4(config, rep),
            "main-zero" => extension::main_zero(config, rep),
            "main-nonzero" => extension::main_nonzero(config, rep),
            "duality" => extension::duality(config, rep),
            other => Err(Error::UnknownSuite(other.to_string())),
        }
    })?;
    if report.assertions.iter().all(|a| a.informational) {
        report.check("ran", !report.cases.is_empty(), "at least one case inside the budget");
    }
    if let Some(path) = &config.out {
        report.save(path, config.format)?;
    }
    Ok(report)
}

/// The grid point as a space, or a notice if it is over budget.
fn space_for(rep: &mut VerificationReport, p: GridPoint, budget: usize) -> Result<Option<Space>> {
    if within_budget(p, budget).is_none() {
        rep.notice(format!("skipped d = {}, q = {}: q^d exceeds the budget {budget}", p.d, p.q));
        return Ok(None);
    }
    Ok(Some(Space::new(FiniteField::with_order(p.q)?, p.d)?))
}

/// Integer log-uniform in `[lo, hi]`.
fn log_uniform<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> usize {
    if hi <= lo {
        return lo;
    }
    let x = rng.gen_range((lo as f64).ln()..=(hi as f64).ln()).exp().round() as usize;
    x.clamp(lo, hi)
}

fn sorted_q(points: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = points.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Per-`q` maxima are non-increasing over `q ≥ from`, with slack `tol` relative.
fn non_increasing_from(per_q: &[(usize, f64)], from: usize, tol: f64) -> bool {
    let tail: Vec<f64> = per_q.iter().filter(|p| p.0 >= from).map(|p| p.1).collect();
    tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + tol))
}
