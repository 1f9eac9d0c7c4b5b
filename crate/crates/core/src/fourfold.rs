//! Cubic fourfolds `X = {F + x₅·Q = 0}` containing the nodal threefold `Y`
//! as the hyperplane section `x₅ = 0`, and the residual-line involution on
//! lines of `X`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::detgeo::{direction_system, random_smooth_point, scroll_data, DeterminantalInstance};
use crate::error::{Error, Result};
use crate::poly::complex::{cvec_from_rational, normalize_max, pow2, serde_f64, vec_norm, ComplexMP, Float};
use crate::poly::{int, restrict_to_subspace_complex, roots, CMatrix, CPoly, MPoly, Rational, UPoly};

const QUADRIC_BOUND: i64 = 9;
const SPOT_CHECKS: usize = 200;
const SPOT_PRECISION: usize = 128;
/// Relative tolerance for containment and incidence at 256 bits, scaled with precision.
pub const TOLERANCE_BITS_PER_256: usize = 100;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CubicFourfold {
    pub seed: u64,
    pub instance: DeterminantalInstance,
    /// `Q` in `x₀ … x₅`.
    pub quadric: MPoly,
    /// `F(x₀ … x₄) + x₅·Q`.
    pub cubic: MPoly,
    pub attempts: usize,
}

/// `ε = 2^(−100·prec/256)`, i.e. about `10⁻³⁰` at 256 bits.
pub fn tolerance(prec: usize) -> Float {
    pow2(-((TOLERANCE_BITS_PER_256 * prec / 256) as isize), prec)
}

fn tolerance_f64(prec: usize) -> f64 {
    2f64.powi(-((TOLERANCE_BITS_PER_256 * prec / 256) as i32))
}

fn random_quadric(rng: &mut ChaCha8Rng) -> MPoly {
    let mut q = MPoly::zero(6);
    for i in 0..6 {
        for j in i..6 {
            let mut e = vec![0u32; 6];
            e[i] += 1;
            e[j] += 1;
            q.add_term(e, int(rng.gen_range(-QUADRIC_BOUND..=QUADRIC_BOUND)));
        }
    }
    q
}

fn embed(y: &[Rational]) -> Vec<Rational> {
    y.iter().cloned().chain(std::iter::once(Rational::zero())).collect()
}

impl CubicFourfold {
    /// Builds `F + x₅·Q` for a given quadric and verifies it.
    pub fn with_quadric(inst: &DeterminantalInstance, quadric: MPoly, seed: u64) -> Result<Self> {
        if quadric.nvars() != 6 || quadric.homogeneous_degree() != Some(2) {
            return Err(Error::Precondition("Q must be a quadric in six variables".into()));
        }
        if let Some(i) = inst.nodes.iter().position(|p| quadric.eval(&embed(p)).is_zero()) {
            return Err(Error::Degenerate(format!("Q vanishes at node {}", i + 1)));
        }
        let cubic = inst.cubic_y.insert_variable(5) + MPoly::var(6, 5) * quadric.clone();
        let x = CubicFourfold { seed, instance: inst.clone(), quadric, cubic, attempts: 1 };
        x.spot_check_smoothness(seed)?;
        Ok(x)
    }

    pub fn restriction_to_hyperplane(&self) -> MPoly {
        self.cubic.substitute_value(5, &Rational::zero()).drop_variable(5)
    }

    /// Gradient nonvanishing at the nodes of `Y` and at random points of `X`.
    pub fn spot_check_smoothness(&self, seed: u64) -> Result<()> {
        let grad = self.cubic.gradient();
        for (i, p) in self.instance.nodes.iter().enumerate() {
            if grad.iter().all(|g| g.eval(&embed(p)).is_zero()) {
                return Err(Error::Degenerate(format!("X is singular at node {}", i + 1)));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5370_6f74);
        let mut checked = 0;
        while checked < SPOT_CHECKS {
            let x: Vec<Rational> = (0..5).map(|_| int(rng.gen_range(-QUADRIC_BOUND..=QUADRIC_BOUND))).collect();
            let vars: Vec<MPoly> =
                x.iter().map(|c| MPoly::constant(1, c.clone())).chain(std::iter::once(MPoly::var(1, 0))).collect();
            let Some(u) = UPoly::from_mpoly(&self.cubic.compose(&vars)?, 0) else { continue };
            if u.degree().unwrap_or(0) == 0 {
                continue;
            }
            let r = roots(&u, SPOT_PRECISION)?;
            let pt: Vec<ComplexMP> = cvec_from_rational(&x, SPOT_PRECISION)
                .into_iter()
                .chain(std::iter::once(r[0].value.to_complex(SPOT_PRECISION)))
                .collect();
            let pt = normalize_max(&pt);
            let g: Vec<ComplexMP> = grad.iter().map(|g| g.eval_complex(&pt)).collect();
            let scale = grad.iter().map(MPoly::max_abs_coeff_f64).fold(0.0, f64::max);
            if g.iter().map(ComplexMP::abs_f64).fold(0.0, f64::max) < 1e-20 * scale {
                return Err(Error::Degenerate("X appears singular at a sampled point".into()));
            }
            checked += 1;
        }
        Ok(())
    }
}

/// `X = F + x₅·Q` with `Q` a seeded random quadric, resampled until `Q` misses every node.
pub fn extend_to_fourfold(inst: &DeterminantalInstance, seed: u64) -> Result<CubicFourfold> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for attempt in 1..=crate::detgeo::RETRY_CAP {
        match CubicFourfold::with_quadric(inst, random_quadric(&mut rng), seed) {
            Ok(mut x) => {
                x.attempts = attempt;
                return Ok(x);
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Degenerate("no quadric found".into())))
}

/// A line of `X` spanned by its point on `x₅ = 0` and a second point.
#[derive(Clone, Debug, Serialize)]
pub struct FourfoldLine {
    #[serde(serialize_with = "serde_f64::serialize")]
    pub base: Vec<ComplexMP>,
    #[serde(serialize_with = "serde_f64::serialize")]
    pub other: Vec<ComplexMP>,
    pub exact: bool,
    pub precision: usize,
    /// Largest relative coefficient of `X` restricted to the line.
    pub residual: f64,
}

impl FourfoldLine {
    pub fn plucker(&self) -> Vec<ComplexMP> {
        let (p, q) = (&self.base, &self.other);
        let mut out = Vec::with_capacity(15);
        for i in 0..6 {
            for j in i + 1..6 {
                out.push(&(&p[i] * &q[j]) - &(&p[j] * &q[i]));
            }
        }
        normalize_max(&out)
    }

    /// Largest coordinate difference of normalized Plücker vectors.
    pub fn distance(&self, other: &FourfoldLine) -> f64 {
        self.plucker().iter().zip(other.plucker()).map(|(a, b)| (a - &b).abs_f64()).fold(0.0, f64::max)
    }
}

fn restrict_c(f: &MPoly, basis: &[Vec<ComplexMP>]) -> Result<CPoly> {
    let normalized: Vec<Vec<ComplexMP>> = basis.iter().map(|b| normalize_max(b)).collect();
    restrict_to_subspace_complex(f, &normalized)
}

fn max_coeff(p: &CPoly) -> f64 {
    p.terms().map(|(_, c)| c.abs_f64()).fold(0.0, f64::max)
}

/// `max|coeff of f|_ℓ| / max|coeff of f|` with spanning points at unit max-norm.
pub fn line_residual(f: &MPoly, p: &[ComplexMP], q: &[ComplexMP]) -> Result<f64> {
    Ok(max_coeff(&restrict_c(f, &[p.to_vec(), q.to_vec()])?) / f.max_abs_coeff_f64())
}

/// Lines of `X` through the point `y` of `Y`, cut to finitely many by a random
/// hyperplane of directions, keeping those leaving `x₅ = 0`.
pub fn lines_through(x: &CubicFourfold, y: &[Rational], seed: u64, prec: usize) -> Result<Vec<FourfoldLine>> {
    let y6 = embed(y);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..crate::detgeo::RETRY_CAP {
        let sys = direction_system(&x.cubic, &y6, 1, &mut rng)?;
        let Some((_, sols)) = sys.solve(prec)? else { continue };
        let base = cvec_from_rational(&y6, prec);
        let mut out = Vec::new();
        for s in sols {
            if s.direction[5].abs_f64() < tolerance_f64(prec) {
                continue;
            }
            let residual = line_residual(&x.cubic, &base, &s.direction)?.max(s.eliminant_residual);
            out.push(FourfoldLine {
                base: base.clone(),
                other: s.direction,
                exact: s.exact.is_some(),
                precision: prec,
                residual,
            });
        }
        if !out.is_empty() {
            return Ok(out);
        }
    }
    Err(Error::Degenerate("every line found lies in the hyperplane section".into()))
}

/// A line of `X` through a random smooth rational point of `Y`, not contained in `x₅ = 0`.
pub fn sample_line(x: &CubicFourfold, seed: u64, prec: usize) -> Result<FourfoldLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = random_smooth_point(&x.instance, &mut rng)?;
    sample_line_through(x, &y, seed, prec)
}

pub fn sample_line_through(x: &CubicFourfold, y: &[Rational], seed: u64, prec: usize) -> Result<FourfoldLine> {
    Ok(lines_through(x, y, seed, prec)?.remove(0))
}

/// Data of one evaluation of `ι`.
#[derive(Clone, Debug, Serialize)]
pub struct IotaResult {
    pub line: FourfoldLine,
    /// `m ∩ {x₅ = 0}`.
    #[serde(serialize_with = "serde_f64::serialize")]
    pub y: Vec<ComplexMP>,
    /// Spans the left kernel of `φ(y)`.
    #[serde(serialize_with = "serde_f64::serialize")]
    pub vdual: Vec<ComplexMP>,
    /// Largest relative coefficient left after dividing `X|_Π` by the two known lines.
    pub division_remainder: f64,
    pub meets_l_dual: bool,
    pub in_plane: bool,
}

fn rank_with_tol(rows: Vec<Vec<ComplexMP>>, tol: &Float) -> (usize, Vec<Vec<ComplexMP>>) {
    let (r, null, _) = CMatrix::from_rows(rows).nullspace_with_tol(tol);
    (r, null)
}

fn combine(coeffs: &[ComplexMP], vecs: &[Vec<ComplexMP>]) -> Vec<ComplexMP> {
    let prec = coeffs[0].precision();
    (0..vecs[0].len())
        .map(|i| coeffs.iter().zip(vecs).fold(ComplexMP::zero(prec), |acc, (c, v)| &acc + &(c * &v[i])))
        .collect()
}

/// `m ∩ {x₅ = 0}` for a line not contained in the hyperplane.
fn hyperplane_point(m: &FourfoldLine, tol: &Float) -> Result<Vec<ComplexMP>> {
    let (p, q) = (&m.base, &m.other);
    let y: Vec<ComplexMP> = (0..6).map(|i| &(&q[5] * &p[i]) - &(&p[5] * &q[i])).collect();
    if vec_norm(&y) <= &vec_norm(p) * tol && vec_norm(&y) <= &vec_norm(q) * tol {
        return Err(Error::Precondition("line lies in the hyperplane section".into()));
    }
    let mut y = normalize_max(&y);
    y[5] = ComplexMP::zero(m.precision);
    Ok(y)
}

/// `φ(y)` for `y ∈ P(Λ^⊥)` given in the first five coordinates.
fn phi_c(inst: &DeterminantalInstance, y: &[ComplexMP], prec: usize) -> CMatrix {
    let basis: Vec<CMatrix> = inst.lambda_perp.basis.iter().map(|b| b.to_complex(prec)).collect();
    CMatrix::from_rows(
        (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| basis.iter().zip(y).fold(ComplexMP::zero(prec), |acc, (b, c)| &acc + &(&b[(i, j)] * c)))
                    .collect()
            })
            .collect(),
    )
}

/// The residual line `m̄` with `Π ∩ X = m ∪ ℓ∨ ∪ m̄`, where `ℓ∨` is the line of
/// the `P∨` family through `m ∩ Y` and `Π` the plane spanned by `m` and `ℓ∨`.
pub fn iota(x: &CubicFourfold, m: &FourfoldLine) -> Result<IotaResult> {
    let prec = m.precision;
    let tol = tolerance(prec);
    let tol64 = tolerance_f64(prec);
    let y = hyperplane_point(m, &tol)?;
    let phi = phi_c(&x.instance, &y[..5], prec);
    let (rank, left) = rank_with_tol(phi.transpose().to_rows(), &tol);
    if rank != 2 {
        return Err(Error::Degenerate(format!("φ(y) has rank {rank}; y is not a smooth point of Y")));
    }
    let vdual = normalize_max(&left[0]);
    // ℓ∨ = {φ ∈ Λ^⊥ : v∨ ∘ φ = 0}.
    let basis: Vec<CMatrix> = x.instance.lambda_perp.basis.iter().map(|b| b.to_complex(prec)).collect();
    let cols: Vec<Vec<ComplexMP>> = basis.iter().map(|b| b.transpose().mul_vec(&vdual)).collect();
    let rows: Vec<Vec<ComplexMP>> = (0..3).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let (r, ell) = rank_with_tol(rows, &tol);
    if r != 3 || ell.len() != 2 {
        return Err(Error::Degenerate("the P∨ line through y is not a line".into()));
    }
    let embed_c = |v: &[ComplexMP]| -> Vec<ComplexMP> {
        v.iter().cloned().chain(std::iter::once(ComplexMP::zero(prec))).collect()
    };
    let ell: Vec<Vec<ComplexMP>> = ell.iter().map(|v| normalize_max(&embed_c(v))).collect();
    // A point of ℓ∨ other than y.
    let ell_other = {
        let (r0, _) = rank_with_tol(vec![y.clone(), ell[0].clone()], &tol);
        if r0 == 2 {
            ell[0].clone()
        } else {
            ell[1].clone()
        }
    };
    let m_other =
        if rank_with_tol(vec![y.clone(), m.other.clone()], &tol).0 == 2 { m.other.clone() } else { m.base.clone() };
    let plane = vec![y.clone(), normalize_max(&m_other), ell_other];
    if rank_with_tol(plane.clone(), &tol).0 != 3 {
        return Err(Error::Degenerate("m and ℓ∨ do not span a plane".into()));
    }
    // X|_Π = b·c·(l_a a + l_b b + l_c c) in coordinates a·y + b·m' + c·ℓ'.
    let f = restrict_to_subspace_complex(&x.cubic, &plane)?;
    let scale = max_coeff(&f);
    let coeff = |e: [u32; 3]| f.coeff(&e).cloned().unwrap_or_else(|| ComplexMP::zero(prec));
    let (la, lb, lc) = (coeff([1, 1, 1]), coeff([0, 2, 1]), coeff([0, 1, 2]));
    let remainder = [[3, 0, 0], [2, 1, 0], [2, 0, 1], [1, 2, 0], [1, 0, 2], [0, 3, 0], [0, 0, 3]]
        .iter()
        .map(|&e| coeff(e).abs_f64())
        .fold(0.0, f64::max)
        / scale;
    if remainder > tol64 {
        return Err(Error::Tolerance(format!("X|Π is not divisible by m·ℓ∨ (remainder {remainder:e})")));
    }
    if la.abs_f64() <= tol64 * scale {
        return Err(Error::Degenerate("residual line passes through y".into()));
    }
    // m̄ ∩ ℓ∨ = (l_c, 0, −l_a) and m̄ ∩ m = (l_b, −l_a, 0).
    let zero = ComplexMP::zero(prec);
    let base = normalize_max(&combine(&[lc.clone(), zero.clone(), -&la], &plane));
    let other = normalize_max(&combine(&[lb, -&la, zero], &plane));
    let residual = line_residual(&x.cubic, &base, &other)?;
    let line = FourfoldLine { base, other, exact: false, precision: prec, residual };
    let meets_l_dual = rank_with_tol(vec![line.base.clone(), ell[0].clone(), ell[1].clone()], &tol).0 <= 2;
    let in_plane =
        rank_with_tol(plane.iter().cloned().chain([line.base.clone(), line.other.clone()]).collect(), &tol).0 == 3;
    Ok(IotaResult { line, y, vdual, division_remainder: remainder, meets_l_dual, in_plane })
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionCheck {
    pub distance: f64,
    pub first: IotaResult,
    pub second: IotaResult,
}

/// `ι(ι(m))` compared with `m`.
pub fn check_involution(x: &CubicFourfold, m: &FourfoldLine) -> Result<InvolutionCheck> {
    let first = iota(x, m)?;
    let second = iota(x, &first.line)?;
    Ok(InvolutionCheck { distance: m.distance(&second.line), first, second })
}

#[derive(Clone, Debug, Serialize)]
pub struct IncidenceReport {
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub v: Vec<Rational>,
    pub m_meets: bool,
    pub image_meets: bool,
    /// Relative size of the scroll quadrics at `m ∩ Y` and `ι(m) ∩ Y`.
    pub margins: (f64, f64),
    pub invariant: bool,
}

/// Since `T_v ⊂ {x₅ = 0}`, a line leaving the hyperplane meets `T_v` exactly when its
/// point on `x₅ = 0` satisfies the three quadrics of `T_v`.
fn meets_scroll(quadrics: &[MPoly], y: &[ComplexMP]) -> f64 {
    let y = normalize_max(&y[..5]);
    quadrics
        .iter()
        .map(|q| {
            let s = q.max_abs_coeff_f64();
            if s == 0.0 {
                0.0
            } else {
                q.eval_complex(&y).abs_f64() / s
            }
        })
        .fold(0.0, f64::max)
}

pub fn scroll_incidence_report(x: &CubicFourfold, m: &FourfoldLine, v: &[Rational]) -> Result<IncidenceReport> {
    let data = scroll_data(&x.instance, v, v)?;
    let im = iota(x, m)?;
    let tol = tolerance(m.precision);
    let tol64 = tolerance_f64(m.precision);
    let y_m = hyperplane_point(m, &tol)?;
    let margins = (meets_scroll(&data.t_v, &y_m), meets_scroll(&data.t_v, &im.line.base));
    let marginal = |e: f64| e > tol64 && e < tol64.sqrt();
    if marginal(margins.0) || marginal(margins.1) {
        return Err(Error::Tolerance(format!("scroll incidence is marginal: {:e}, {:e}", margins.0, margins.1)));
    }
    let m_meets = margins.0 <= tol64;
    let image_meets = margins.1 <= tol64;
    Ok(IncidenceReport { v: v.to_vec(), m_meets, image_meets, margins, invariant: m_meets == image_meets })
}

/// `(m meets T_v) == (ι(m) meets T_v)`.
pub fn scroll_incidence_invariance(x: &CubicFourfold, m: &FourfoldLine, v: &[Rational]) -> Result<bool> {
    Ok(scroll_incidence_report(x, m, v)?.invariant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detgeo::{make_instance, random_vector3, t_v_ruling};
    use crate::poly::DEFAULT_PRECISION;

    fn fourfold() -> CubicFourfold {
        extend_to_fourfold(&make_instance(1).unwrap(), 1).unwrap()
    }

    #[test]
    fn extension_restricts_to_y() {
        let x = fourfold();
        assert_eq!(x.restriction_to_hyperplane(), x.instance.cubic_y);
        assert_eq!(x.cubic.homogeneous_degree(), Some(3));
    }

    #[test]
    fn quadric_through_a_node_is_rejected() {
        let inst = make_instance(1).unwrap();
        // x₁x₂ vanishes at the coordinate nodes.
        let q = MPoly::var(6, 1) * MPoly::var(6, 2);
        assert!(CubicFourfold::with_quadric(&inst, q, 0).is_err());
    }

    #[test]
    fn iota_is_an_involution() {
        let x = fourfold();
        let m = sample_line(&x, 2, DEFAULT_PRECISION).unwrap();
        assert!(m.residual < 1e-40, "{}", m.residual);
        let c = check_involution(&x, &m).unwrap();
        assert!(c.distance < 1e-30, "{}", c.distance);
        assert!(c.first.meets_l_dual && c.first.in_plane);
        assert!(c.first.line.residual < 1e-30);
    }

    #[test]
    fn planted_scroll_incidence() {
        let x = fourfold();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let v = random_vector3(&mut rng);
        let ruling = t_v_ruling(&x.instance, &v, &mut rng).unwrap();
        let y = crate::detgeo::primitive(&ruling.point_at(&int(2), &int(3)));
        let m = sample_line_through(&x, &y, 4, DEFAULT_PRECISION).unwrap();
        let rep = scroll_incidence_report(&x, &m, &v).unwrap();
        assert!(rep.m_meets && rep.image_meets, "{rep:?}");
        let w = random_vector3(&mut rng);
        let rep = scroll_incidence_report(&x, &m, &w).unwrap();
        assert!(!rep.m_meets && !rep.image_meets && rep.invariant, "{rep:?}");
    }
}
