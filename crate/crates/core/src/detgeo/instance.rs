use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{cokernel, image, outer, primitive, trace_pairing, trace_perp, EndoSubspace};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::poly::rational::{dot, normalize_projective, projectively_equal};
use crate::poly::{int, macaulay_resultant_data, poly_det, resultant_bivariate, MPoly, QMatrix, Rational, UPoly};

/// Attempts before instance generation gives up.
pub const RETRY_CAP: usize = 32;
pub(crate) const ENTRY_BOUND: i64 = 9;
/// Coordinate changes and random combinations tried when isolating the sixth node.
const RESIDUAL_TRIES: usize = 12;

/// `Λ`, `Λ^⊥`, the two determinantal cubics and the six nodes of `Y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterminantalInstance {
    pub seed: u64,
    pub lambda: EndoSubspace,
    pub lambda_perp: EndoSubspace,
    /// `det` on `P(Λ^⊥)` in the coordinates of `lambda_perp.basis`.
    pub cubic_y: MPoly,
    /// `det` on `P(Λ)` in the coordinates of `lambda.basis`.
    pub cubic_s: MPoly,
    /// Nodes `p₁ … p₆` in `Λ^⊥` coordinates.
    #[serde(with = "crate::poly::rational::serde_str::vec2")]
    pub nodes: Vec<Vec<Rational>>,
    /// `qᵢ = im pᵢ` in `P(V)`.
    #[serde(with = "crate::poly::rational::serde_str::vec2")]
    pub q_points: Vec<Vec<Rational>>,
    /// `qᵢ∨`, the functional annihilating `ker pᵢ`.
    #[serde(with = "crate::poly::rational::serde_str::vec2")]
    pub q_dual_points: Vec<Vec<Rational>>,
    pub attempts: usize,
}

impl DeterminantalInstance {
    /// The endomorphism with `Λ^⊥` coordinates `x`.
    pub fn phi(&self, x: &[Rational]) -> QMatrix {
        self.lambda_perp.element(x)
    }

    /// The endomorphism with `Λ` coordinates `t`.
    pub fn sigma(&self, t: &[Rational]) -> QMatrix {
        self.lambda.element(t)
    }

    pub fn node_matrix(&self, i: usize) -> QMatrix {
        self.phi(&self.nodes[i])
    }

    /// Index of the node at `x`, if any.
    pub fn node_index(&self, x: &[Rational]) -> Option<usize> {
        self.nodes.iter().position(|p| projectively_equal(p, x))
    }

    /// `Λ^⊥` coordinates of a matrix in `Λ^⊥`.
    pub fn perp_coordinates(&self, m: &QMatrix) -> Option<Vec<Rational>> {
        self.lambda_perp.coordinates(m)
    }

    /// The point `s ∈ S` with `β(s) = v`: the element of `Λ` killing `v`.
    pub fn s_point_over(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        let rows: Vec<Vec<Rational>> =
            (0..3).map(|r| self.lambda.basis.iter().map(|b| dot(&b.row(r), v)).collect()).collect();
        let null = QMatrix::from_rows(rows).nullspace();
        if null.len() != 1 {
            return Err(Error::Degenerate(format!("{} elements of Λ kill v", null.len())));
        }
        Ok(primitive(&null[0]))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Re-verifies every invariant from the stored data.
    pub fn check(&self, exec: Exec) -> Result<InstanceCheck> {
        let orthogonal =
            self.lambda.basis.iter().all(|a| self.lambda_perp.basis.iter().all(|b| trace_pairing(a, b).is_zero()));
        let grad = self.cubic_y.gradient();
        let nodes_rank_one = (0..self.nodes.len()).all(|i| self.node_matrix(i).rank() == 1);
        let nodes_singular =
            self.nodes.iter().all(|p| self.cubic_y.eval(p).is_zero() && grad.iter().all(|g| g.eval(p).is_zero()));
        let odp = self.nodes.iter().map(|p| is_odp(&self.cubic_y, p)).collect::<Result<Vec<_>>>()?;
        let q_match = (0..self.nodes.len()).all(|i| {
            let m = self.node_matrix(i);
            projectively_equal(&image(&m)[0], &self.q_points[i])
                && projectively_equal(&row_direction(&m), &self.q_dual_points[i])
        });
        let smooth = s_smoothness_certificate(&self.cubic_s, exec)?;
        Ok(InstanceCheck {
            dims: (self.lambda.dimension(), self.lambda_perp.dimension()),
            orthogonal,
            cubic_y_is_determinant: self.lambda_perp.determinant()? == self.cubic_y,
            cubic_s_is_determinant: self.lambda.determinant()? == self.cubic_s,
            node_count: self.nodes.len(),
            nodes_rank_one,
            nodes_singular,
            nodes_odp: odp,
            linear_general_position: linear_general_position(&self.nodes),
            q_points_match: q_match,
            s_smooth: smooth.nonzero,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceCheck {
    pub dims: (usize, usize),
    pub orthogonal: bool,
    pub cubic_y_is_determinant: bool,
    pub cubic_s_is_determinant: bool,
    pub node_count: usize,
    pub nodes_rank_one: bool,
    pub nodes_singular: bool,
    pub nodes_odp: Vec<bool>,
    pub linear_general_position: bool,
    pub q_points_match: bool,
    pub s_smooth: bool,
}

impl InstanceCheck {
    pub fn all_pass(&self) -> bool {
        self.dims == (4, 5)
            && self.orthogonal
            && self.cubic_y_is_determinant
            && self.cubic_s_is_determinant
            && self.node_count == 6
            && self.nodes_rank_one
            && self.nodes_singular
            && self.nodes_odp.iter().all(|&b| b)
            && self.linear_general_position
            && self.q_points_match
            && self.s_smooth
    }
}

/// Nonvanishing of the Macaulay determinant of the four partials of the cubic
/// surface, certifying that they have no common zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessCertificate {
    pub matrix_size: usize,
    /// Bit length of the numerator of `det M`.
    pub det_bits: u64,
    pub nonzero: bool,
}

pub fn s_smoothness_certificate(cubic_s: &MPoly, exec: Exec) -> Result<SmoothnessCertificate> {
    let partials = cubic_s.gradient();
    match macaulay_resultant_data(&partials, exec) {
        Ok(d) => Ok(SmoothnessCertificate {
            matrix_size: d.size,
            det_bits: d.det_m.numer().bits(),
            nonzero: !d.det_m.is_zero(),
        }),
        Err(Error::MacaulayInconclusive { det_nonzero }) => {
            Ok(SmoothnessCertificate { matrix_size: 0, det_bits: 0, nonzero: det_nonzero })
        }
        Err(e) => Err(e),
    }
}

/// Whether every five of the points are linearly independent.
pub fn linear_general_position(points: &[Vec<Rational>]) -> bool {
    let n = points.first().map_or(0, Vec::len);
    if points.len() < n {
        return QMatrix::from_rows(points.to_vec()).rank() == points.len();
    }
    subsets(points.len(), n)
        .iter()
        .all(|s| QMatrix::from_rows(s.iter().map(|&i| points[i].clone()).collect()).rank() == n)
}

pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invertible matrix whose last column is `p` and whose other columns are unit vectors.
pub(crate) fn frame_with_last(p: &[Rational]) -> Result<QMatrix> {
    let n = p.len();
    let k = p.iter().position(|x| !x.is_zero()).ok_or_else(|| Error::Precondition("zero point".into()))?;
    let mut cols: Vec<Vec<Rational>> =
        (0..n).filter(|&j| j != k).map(|j| (0..n).map(|i| int(i64::from(i == j))).collect()).collect();
    cols.push(p.to_vec());
    Ok(QMatrix::from_cols(&cols))
}

/// `f(T y)`.
pub(crate) fn change_coordinates(f: &MPoly, t: &QMatrix) -> Result<MPoly> {
    let subs: Vec<MPoly> = (0..t.rows()).map(|i| MPoly::linear(&t.row(i))).collect();
    f.compose(&subs)
}

/// Writes `f(T y) = y_n² A₁ + y_n A₂ + A₃` with `p` moved to the last
/// coordinate point; returns `(A₁, A₂, A₃)` as polynomials in the first `n−1` variables.
pub(crate) fn tangent_cone_split(f: &MPoly, p: &[Rational]) -> Result<(MPoly, MPoly, MPoly, QMatrix)> {
    if f.nvars() != p.len() {
        return Err(Error::VariableMismatch(f.nvars(), p.len()));
    }
    if !f.eval(p).is_zero() {
        return Err(Error::NotOnHypersurface);
    }
    let t = frame_with_last(p)?;
    let g = change_coordinates(f, &t)?;
    let last = p.len() - 1;
    let mut parts = g.coefficients_in(last);
    parts.resize(4, MPoly::zero(p.len()));
    let strip = |q: &MPoly| q.drop_variable(last);
    Ok((strip(&parts[2]), strip(&parts[1]), strip(&parts[0]), t))
}

/// Symmetric matrix of a quadratic form (`q(x) = xᵀ H x / 2` with `H` the Hessian).
pub(crate) fn hessian(q: &MPoly) -> QMatrix {
    let n = q.nvars();
    let zero = vec![Rational::zero(); n];
    QMatrix::from_rows((0..n).map(|i| (0..n).map(|j| q.derivative(i).derivative(j).eval(&zero)).collect()).collect())
}

/// Ordinary double point test for a cubic at `p`.
pub fn is_odp(f: &MPoly, p: &[Rational]) -> Result<bool> {
    let (a1, a2, _, _) = tangent_cone_split(f, p)?;
    Ok(a1.is_zero() && hessian(&a2).rank() == p.len() - 1)
}

/// Nonzero vector of `Q³` with entries in `[−9, 9]`.
pub fn random_vector3(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..3).map(|_| int(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Maximal minors of the `4 × 3` matrix with rows `(A_j u)ᵀ`, as cubics in `u`.
fn residual_minors(lambda: &EndoSubspace) -> Result<Vec<MPoly>> {
    let rows: Vec<Vec<MPoly>> =
        lambda.basis.iter().map(|a| (0..3).map(|c| MPoly::linear(&a.row(c))).collect()).collect();
    let mut out = Vec::new();
    for s in subsets(rows.len(), 3) {
        let m: Vec<Vec<MPoly>> = s.iter().map(|&i| rows[i].clone()).collect();
        out.push(poly_det(&m)?);
    }
    Ok(out)
}

fn random_combination(fs: &[MPoly], rng: &mut ChaCha8Rng) -> MPoly {
    fs.iter().fold(MPoly::zero(fs[0].nvars()), |acc, f| acc + f.scale(&int(rng.gen_range(-7..=7))))
}

/// The sixth point of `Σ₁ ∩ P(span)` for five independent rank-1 matrices.
///
/// The rank-1 matrices `u wᵀ` orthogonal to `Λ = span^⊥` are those with
/// `wᵀ A_j u = 0` for all `j`, so `u` is a common zero of the maximal minors
/// of the `4 × 3` matrix with rows `(A_j u)ᵀ`. Two resultants of random
/// combinations, deflated by the five known roots, share exactly the sixth.
pub fn residual_rank1_point(five: &[QMatrix]) -> Result<QMatrix> {
    if five.len() != 5 || five.iter().any(|m| m.rank() != 1) {
        return Err(Error::Precondition("expected five rank-1 matrices".into()));
    }
    let span =
        EndoSubspace::new(five.to_vec()).map_err(|_| Error::Degenerate("rank-1 matrices are dependent".into()))?;
    let lambda = trace_perp(&span);
    let minors = residual_minors(&lambda)?;
    if minors.iter().all(MPoly::is_zero) {
        return Err(Error::Degenerate("every point of P(V) is a base point".into()));
    }
    let known: Vec<Vec<Rational>> = five.iter().map(|m| image(m).remove(0)).collect();
    for i in 0..5 {
        for j in i + 1..5 {
            if projectively_equal(&known[i], &known[j])
                || projectively_equal(&cokernel(&five[i])[0], &cokernel(&five[j])[0])
            {
                return Err(Error::Degenerate("two rank-1 factors share a direction".into()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..RESIDUAL_TRIES {
        let g = loop {
            let g = QMatrix::from_rows((0..3).map(|_| random_vector3(&mut rng)).collect());
            if !g.det()?.is_zero() {
                break g;
            }
        };
        if let Some(u) = isolate_sixth(&minors, &known, &g, &mut rng)? {
            let rows: Vec<Vec<Rational>> = lambda.basis.iter().map(|a| a.mul_vec(&u)).collect();
            let w = QMatrix::from_rows(rows).nullspace();
            let w = match w.as_slice() {
                [w] => w.clone(),
                _ => continue,
            };
            let p6 = outer(&primitive(&u), &primitive(&w));
            if span.contains(&p6) && five.iter().all(|m| !proportional(m, &p6)) {
                return Ok(p6);
            }
        }
    }
    Err(Error::Degenerate("sixth rank-1 point not isolated".into()))
}

fn proportional(a: &QMatrix, b: &QMatrix) -> bool {
    projectively_equal(a.entries(), b.entries())
}

/// Works in coordinates `u = G z`, dehomogenized at `z₀ = 1`.
fn isolate_sixth(
    minors: &[MPoly],
    known: &[Vec<Rational>],
    g: &QMatrix,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<Rational>>> {
    let ginv = g.inverse()?;
    let known_z: Vec<Vec<Rational>> = known.iter().map(|u| ginv.mul_vec(u)).collect();
    if known_z.iter().any(|z| z[0].is_zero()) {
        return Ok(None);
    }
    let xs: Vec<Rational> = known_z.iter().map(|z| &z[1] / &z[0]).collect();
    if (0..xs.len()).any(|i| (i + 1..xs.len()).any(|j| xs[i] == xs[j])) {
        return Ok(None);
    }
    // u = G·(1, x, y) with x, y the two variables of the dehomogenized system.
    let subs: Vec<MPoly> = (0..3)
        .map(|i| {
            MPoly::constant(2, g[(i, 0)].clone())
                + MPoly::var(2, 0).scale(&g[(i, 1)])
                + MPoly::var(2, 1).scale(&g[(i, 2)])
        })
        .collect();
    let local: Vec<MPoly> = minors.iter().map(|f| f.compose(&subs)).collect::<Result<_>>()?;
    let nonzero: Vec<MPoly> = local.iter().filter(|f| !f.is_zero()).cloned().collect();
    if nonzero.len() < 2 {
        return Ok(None);
    }
    let deflated = |rng: &mut ChaCha8Rng| -> Result<Option<UPoly>> {
        let f = random_combination(&nonzero, rng);
        let h = random_combination(&nonzero, rng);
        let mut r = resultant_bivariate(&f, &h, 1)?;
        if r.is_zero() {
            return Ok(None);
        }
        for x in &xs {
            match r.div_exact(&UPoly::linear_root(x)) {
                Some(q) => r = q,
                None => return Ok(None),
            }
        }
        Ok(Some(r))
    };
    let (Some(r1), Some(r2)) = (deflated(rng)?, deflated(rng)?) else {
        return Ok(None);
    };
    let common = r1.gcd(&r2);
    if common.degree() != Some(1) {
        return Ok(None);
    }
    let x6 = -common.coeff(0) / common.coeff(1);
    let mut in_y: Option<UPoly> = None;
    for f in &nonzero {
        let p = UPoly::from_mpoly(&f.substitute_value(0, &x6), 1).expect("only y remains");
        in_y = Some(match in_y {
            None => p,
            Some(acc) => acc.gcd(&p),
        });
    }
    let in_y = in_y.expect("at least two forms");
    if in_y.degree() != Some(1) {
        return Ok(None);
    }
    let y6 = -in_y.coeff(0) / in_y.coeff(1);
    let z = vec![Rational::one(), x6, y6];
    let u = g.mul_vec(&z);
    if minors.iter().any(|m| !m.eval(&u).is_zero()) {
        return Ok(None);
    }
    Ok(Some(normalize_projective(&u)))
}

/// Deterministic instance for `seed`, resampling degenerate draws.
pub fn make_instance(seed: u64) -> Result<DeterminantalInstance> {
    make_instance_with(seed, Exec::default())
}

pub fn make_instance_with(seed: u64, exec: Exec) -> Result<DeterminantalInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_err = None;
    for attempt in 1..=RETRY_CAP {
        let factors: Vec<(Vec<Rational>, Vec<Rational>)> =
            (0..5).map(|_| (random_vector3(&mut rng), random_vector3(&mut rng))).collect();
        match instance_from_factors(&factors, seed, exec) {
            Ok(mut inst) => {
                inst.attempts = attempt;
                return Ok(inst);
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(Error::Degenerate(format!(
        "no clean instance after {RETRY_CAP} attempts (last: {})",
        last_err.map_or_else(String::new, |e| e.to_string())
    )))
}

/// Builds and verifies an instance from five rank-1 factors `(u, w)`, `p = u wᵀ`.
pub fn instance_from_factors(
    factors: &[(Vec<Rational>, Vec<Rational>)],
    seed: u64,
    exec: Exec,
) -> Result<DeterminantalInstance> {
    let five: Vec<QMatrix> = factors.iter().map(|(u, w)| outer(u, w)).collect();
    let p6 = residual_rank1_point(&five)?;
    let lambda_perp = EndoSubspace::new(five.clone())?;
    let lambda = trace_perp(&lambda_perp);
    let mut nodes: Vec<Vec<Rational>> = (0..5).map(|i| (0..5).map(|j| int(i64::from(i == j))).collect()).collect();
    nodes.push(primitive(&lambda_perp.coordinates(&p6).ok_or_else(|| Error::Degenerate("p6 outside Λ^⊥".into()))?));
    let mats: Vec<QMatrix> = five.iter().cloned().chain(std::iter::once(p6)).collect();
    let inst = DeterminantalInstance {
        seed,
        cubic_y: lambda_perp.determinant()?,
        cubic_s: lambda.determinant()?,
        q_points: mats.iter().map(|m| primitive(&image(m)[0])).collect(),
        q_dual_points: mats.iter().map(|m| primitive(&row_direction(m))).collect(),
        lambda,
        lambda_perp,
        nodes,
        attempts: 1,
    };
    if !linear_general_position(&inst.nodes) {
        return Err(Error::Degenerate("nodes not in linear general position".into()));
    }
    for p in &inst.nodes {
        if !is_odp(&inst.cubic_y, p)? {
            return Err(Error::Degenerate("node is not an ordinary double point".into()));
        }
    }
    if !s_smoothness_certificate(&inst.cubic_s, exec)?.nonzero {
        return Err(Error::Degenerate("cubic surface is singular".into()));
    }
    Ok(inst)
}

/// For rank-1 `m = u wᵀ`, the row direction `w`, which annihilates `ker m`.
pub(crate) fn row_direction(m: &QMatrix) -> Vec<Rational> {
    (0..m.rows()).map(|i| m.row(i)).find(|r| r.iter().any(|x| !x.is_zero())).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: [i64; 3]) -> Vec<Rational> {
        a.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn odp_examples() {
        let x = |i| MPoly::var(5, i);
        let f = x(4) * (x(0).pow(2) + x(1).pow(2) + x(2).pow(2) + x(3).pow(2)) + x(0).pow(3);
        let p = v([0, 0, 0]).into_iter().chain([int(0), int(1)]).collect::<Vec<_>>();
        assert!(is_odp(&f, &p).unwrap());
        let g = x(4) * (x(0).pow(2) + x(1).pow(2)) + x(3).pow(3);
        assert!(!is_odp(&g, &p).unwrap());
        let off: Vec<Rational> = vec![int(1), int(0), int(0), int(0), int(0)];
        assert!(matches!(is_odp(&f, &off), Err(Error::NotOnHypersurface)));
    }

    #[test]
    fn general_position_examples() {
        let mut pts: Vec<Vec<Rational>> = (0..5).map(|i| (0..5).map(|j| int(i64::from(i == j))).collect()).collect();
        pts.push(vec![int(1); 5]);
        assert!(linear_general_position(&pts));
        let mut rep = pts.clone();
        rep[5] = rep[0].clone();
        assert!(!linear_general_position(&rep));
        let mut hyper = pts.clone();
        hyper[5] = vec![int(1), int(1), int(1), int(1), int(0)];
        assert!(!linear_general_position(&hyper));
    }

    #[test]
    fn planted_sixth_point() {
        let inst = make_instance(1).unwrap();
        let five: Vec<QMatrix> = (0..5).map(|i| inst.node_matrix(i)).collect();
        let p6 = residual_rank1_point(&five).unwrap();
        assert!(proportional(&p6, &inst.node_matrix(5)));
        // Any five of the six recover the remaining one.
        let others: Vec<QMatrix> = (1..6).map(|i| inst.node_matrix(i)).collect();
        assert!(proportional(&residual_rank1_point(&others).unwrap(), &inst.node_matrix(0)));
    }

    #[test]
    fn shared_kernel_is_degenerate() {
        let w = v([1, 2, 3]);
        let five: Vec<QMatrix> =
            [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1]].iter().map(|u| outer(&v(*u), &w)).collect();
        assert!(residual_rank1_point(&five).is_err());
        let proportional_pair = vec![
            (v([1, 2, 3]), v([1, 0, 1])),
            (v([2, 4, 6]), v([-2, 0, -2])),
            (v([0, 1, 5]), v([3, 1, 1])),
            (v([4, 0, 1]), v([1, 1, 7])),
            (v([1, -1, 2]), v([0, 2, 1])),
        ];
        assert!(instance_from_factors(&proportional_pair, 0, Exec::Sequential).is_err());
    }

    #[test]
    fn seed_one_instance_checks() {
        let inst = make_instance(1).unwrap();
        let report = inst.check(Exec::default()).unwrap();
        assert!(report.all_pass(), "{report:?}");
        let again = make_instance(1).unwrap();
        assert_eq!(inst, again);
        let round = DeterminantalInstance::from_json(&inst.to_json().unwrap()).unwrap();
        assert_eq!(round, inst);
    }
}
