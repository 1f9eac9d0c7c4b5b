use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::instance::{random_vector3, ENTRY_BOUND, RETRY_CAP};
use super::{cokernel, image, kernel, primitive, DeterminantalInstance, ProjLine};
use crate::error::{Error, Result};
use crate::poly::complex::{cvec_from_rational, normalize_max, pow2, serde_f64, vec_norm, ComplexMP, Float};
use crate::poly::linalg::{cross3, cross3_c, is_zero_vec};
use crate::poly::rational::dot;
use crate::poly::{int, resultant_bivariate, roots, CMatrix, MPoly, QMatrix, Rational, RootValue, UPoly};

/// Generic direction planes tried before giving up.
const DIRECTION_TRIES: usize = 16;
const DIRECTION_SEED: u64 = 0x6c69_6e65;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    /// `{φ : φ(v) = 0}` for `v ∈ V`.
    FromV,
    /// `{φ : v∨ ∘ φ = 0}` for `v∨ ∈ V∨`.
    FromVdual,
    /// `{φ : σφσ = 0}` for a rank-2 `σ ∈ Λ`.
    FromS,
}

impl LineKind {
    pub const ALL: [LineKind; 3] = [LineKind::FromV, LineKind::FromVdual, LineKind::FromS];

    pub fn family(self) -> LineFamily {
        match self {
            LineKind::FromV => LineFamily::P,
            LineKind::FromVdual => LineFamily::PDual,
            LineKind::FromS => LineFamily::SComponent,
        }
    }
}

impl FromStr for LineKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "from_v" | "v" => Ok(LineKind::FromV),
            "from_vdual" | "vdual" => Ok(LineKind::FromVdual),
            "from_s" | "s" => Ok(LineKind::FromS),
            _ => Err(Error::Parse(format!("unknown line kind {s:?}"))),
        }
    }
}

/// Component of the variety of lines of `Y` containing a line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineFamily {
    P,
    PDual,
    SComponent,
    /// Passes through a node.
    SingularLocus,
}

fn line_from_conditions(rows: Vec<Vec<Rational>>) -> Result<ProjLine> {
    let null = QMatrix::from_rows(rows).nullspace();
    if null.len() != 2 {
        return Err(Error::Degenerate(format!("solution space has dimension {}, expected 2", null.len())));
    }
    ProjLine::new(primitive(&null[0]), primitive(&null[1]))
}

fn rows_from_cols(cols: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    QMatrix::from_cols(cols).to_rows()
}

/// The line of `Y` attached to `param`: a vector of `V` or `V∨`, or the `Λ`
/// coordinates of a rank-2 `σ`.
pub fn special_line(inst: &DeterminantalInstance, kind: LineKind, param: &[Rational]) -> Result<ProjLine> {
    let basis = &inst.lambda_perp.basis;
    let expected = if kind == LineKind::FromS { 4 } else { 3 };
    if param.len() != expected {
        return Err(Error::VariableMismatch(param.len(), expected));
    }
    if is_zero_vec(param) {
        return Err(Error::Precondition("zero parameter".into()));
    }
    let rows = match kind {
        LineKind::FromV => rows_from_cols(&basis.iter().map(|b| b.mul_vec(param)).collect::<Vec<_>>()),
        LineKind::FromVdual => rows_from_cols(&basis.iter().map(|b| b.vec_mul(param)).collect::<Vec<_>>()),
        LineKind::FromS => {
            let sigma = inst.sigma(param);
            let r = sigma.rank();
            if r != 2 {
                return Err(Error::RankMismatch { expected: 2, found: r });
            }
            let k = kernel(&sigma).remove(0);
            let ann = QMatrix::from_rows(vec![k]).nullspace();
            let im = image(&sigma);
            ann.iter()
                .flat_map(|w| im.iter().map(move |v| basis.iter().map(|b| dot(w, &b.mul_vec(v))).collect()))
                .collect()
        }
    };
    let line = line_from_conditions(rows)?;
    if !line.lies_on(&inst.cubic_y)? {
        return Err(Error::Degenerate("special line is not contained in Y".into()));
    }
    Ok(line)
}

/// `Λ` coordinates of the rank-2 `σ` with `σφσ = 0` for both `a` and `b`, if any.
///
/// Along such a line `ker φ ⊂ im σ` and `φ(im σ) = ker σ`, which makes the
/// conditions on `σ` linear.
pub fn s_component_sigma(inst: &DeterminantalInstance, a: &QMatrix, b: &QMatrix) -> Option<Vec<Rational>> {
    let (ka, kb) = (kernel(a), kernel(b));
    if ka.len() != 1 || kb.len() != 1 {
        return None;
    }
    let u_i = cross3(&ka[0], &kb[0]);
    if is_zero_vec(&u_i) {
        return None;
    }
    let k = a.mul_vec(&kb[0]);
    let basis = &inst.lambda.basis;
    let mut rows: Vec<Vec<Rational>> = rows_from_cols(&basis.iter().map(|s| s.mul_vec(&k)).collect::<Vec<_>>());
    rows.extend(rows_from_cols(&basis.iter().map(|s| s.vec_mul(&u_i)).collect::<Vec<_>>()));
    let null = QMatrix::from_rows(rows).nullspace();
    if null.len() != 1 {
        return None;
    }
    let t = primitive(&null[0]);
    let sigma = inst.sigma(&t);
    let kills = |m: &QMatrix| sigma.mul(m).mul(&sigma).is_zero();
    (sigma.rank() == 2 && kills(a) && kills(b)).then_some(t)
}

/// Exact classification of a line contained in `Y`.
pub fn classify_line(inst: &DeterminantalInstance, line: &ProjLine) -> Result<LineFamily> {
    if line.ambient_dim() != 5 {
        return Err(Error::VariableMismatch(line.ambient_dim(), 5));
    }
    if !line.lies_on(&inst.cubic_y)? {
        return Err(Error::NotOnHypersurface);
    }
    if inst.nodes.iter().any(|p| line.contains_point(p)) {
        return Ok(LineFamily::SingularLocus);
    }
    let a = inst.phi(&line.points[0]);
    let b = inst.phi(&line.points[1]);
    let stacked = |x: &QMatrix, y: &QMatrix| QMatrix::from_rows(x.to_rows().into_iter().chain(y.to_rows()).collect());
    if !stacked(&a, &b).nullspace().is_empty() {
        return Ok(LineFamily::P);
    }
    if !stacked(&a.transpose(), &b.transpose()).nullspace().is_empty() {
        return Ok(LineFamily::PDual);
    }
    if s_component_sigma(inst, &a, &b).is_some() {
        return Ok(LineFamily::SComponent);
    }
    Err(Error::Degenerate("line lies in no known family".into()))
}

/// A random parameter for `kind` whose special line misses the nodes.
pub fn random_line_param(inst: &DeterminantalInstance, kind: LineKind, rng: &mut ChaCha8Rng) -> Result<Vec<Rational>> {
    for _ in 0..RETRY_CAP {
        let v = random_vector3(rng);
        let param = match kind {
            LineKind::FromS => match inst.s_point_over(&v) {
                Ok(t) => t,
                Err(_) => continue,
            },
            _ => v,
        };
        if let Ok(line) = special_line(inst, kind, &param) {
            if !inst.nodes.iter().any(|p| line.contains_point(p)) {
                return Ok(param);
            }
        }
    }
    Err(Error::Degenerate(format!("no generic {kind:?} parameter after {RETRY_CAP} draws")))
}

/// A rational smooth point of `Y`, taken on a random line of the `P` family, lying on no line of `Y`
/// through a node.
pub fn random_smooth_point(inst: &DeterminantalInstance, rng: &mut ChaCha8Rng) -> Result<Vec<Rational>> {
    let grad = inst.cubic_y.gradient();
    for _ in 0..RETRY_CAP {
        let param = random_line_param(inst, LineKind::FromV, rng)?;
        let line = special_line(inst, LineKind::FromV, &param)?;
        let (s, t) = (int(rng.gen_range(1..=ENTRY_BOUND)), int(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND)));
        let y = primitive(&line.point_at(&s, &t));
        if inst.node_index(&y).is_some() || inst.phi(&y).rank() != 2 || grad.iter().all(|g| g.eval(&y).is_zero()) {
            continue;
        }
        let on_node_line = inst
            .nodes
            .iter()
            .map(|p| ProjLine::new(y.clone(), p.clone()).and_then(|l| l.lies_on(&inst.cubic_y)))
            .collect::<Result<Vec<_>>>()?;
        if !on_node_line.iter().any(|&b| b) {
            return Ok(y);
        }
    }
    Err(Error::Degenerate(format!("no smooth point after {RETRY_CAP} draws")))
}

/// Line through `point` in the direction of a numerically computed point.
#[derive(Clone, Debug, Serialize)]
pub struct NumLine {
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub point: Vec<Rational>,
    #[serde(serialize_with = "serde_f64::serialize")]
    pub direction: Vec<ComplexMP>,
    /// Present when the direction is rational.
    pub exact: Option<ProjLine>,
    /// Relative residual of the eliminant at the root.
    pub eliminant_residual: f64,
    /// Largest relative residual of the direction equations.
    pub direction_residual: f64,
    pub multiplicity: usize,
    pub family: Option<LineFamily>,
}

impl NumLine {
    pub fn max_residual(&self) -> f64 {
        self.eliminant_residual.max(self.direction_residual)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointLines {
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub point: Vec<Rational>,
    pub precision: usize,
    pub eliminant_degree: usize,
    pub lines: Vec<NumLine>,
}

impl PointLines {
    /// Lines counted with multiplicity.
    pub fn total_multiplicity(&self) -> usize {
        self.lines.iter().map(|l| l.multiplicity).sum()
    }

    pub fn family_counts(&self) -> BTreeMap<LineFamily, usize> {
        let mut out = BTreeMap::new();
        for l in &self.lines {
            if let Some(f) = l.family {
                *out.entry(f).or_insert(0) += l.multiplicity;
            }
        }
        out
    }

    /// `(P, P∨, S)` counts.
    pub fn split(&self) -> (usize, usize, usize) {
        let c = self.family_counts();
        let get = |f| c.get(&f).copied().unwrap_or(0);
        (get(LineFamily::P), get(LineFamily::PDual), get(LineFamily::SComponent))
    }

    pub fn max_residual(&self) -> f64 {
        self.lines.iter().map(NumLine::max_residual).fold(0.0, f64::max)
    }
}

/// The conic and cubic cutting out directions of lines through `y`, on a
/// plane of directions `a·e₀ + b·e₁ + c·e₂`.
#[derive(Clone, Debug)]
pub(crate) struct DirectionSystem {
    pub e: [Vec<Rational>; 3],
    pub conic: MPoly,
    pub cubic: MPoly,
}

/// One solution of a [`DirectionSystem`].
#[derive(Clone, Debug)]
pub(crate) struct DirectionRoot {
    pub direction: Vec<ComplexMP>,
    pub exact: Option<Vec<Rational>>,
    pub eliminant_residual: f64,
    pub direction_residual: f64,
    pub multiplicity: usize,
}

fn random_ints(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND))).collect()
}

/// Builds the direction system on a random complement of `y`, cut down by the
/// tangent hyperplane and `extra` random hyperplanes to a plane.
pub(crate) fn direction_system(
    f: &MPoly,
    y: &[Rational],
    extra: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DirectionSystem> {
    let n = y.len();
    if f.nvars() != n {
        return Err(Error::VariableMismatch(f.nvars(), n));
    }
    if n != 5 + extra {
        return Err(Error::Precondition(format!("{extra} extra hyperplanes do not cut P^{} to a plane", n - 1)));
    }
    if !f.eval(y).is_zero() {
        return Err(Error::NotOnHypersurface);
    }
    let grad: Vec<Rational> = f.gradient().iter().map(|g| g.eval(y)).collect();
    if is_zero_vec(&grad) {
        return Err(Error::Precondition("point is singular".into()));
    }
    let h: Vec<Vec<Rational>> = loop {
        let h: Vec<Vec<Rational>> = (0..n - 1).map(|_| random_ints(rng, n)).collect();
        let mut all = h.clone();
        all.push(y.to_vec());
        if QMatrix::from_rows(all).rank() == n {
            break h;
        }
    };
    let mut cond = vec![h.iter().map(|hi| dot(&grad, hi)).collect::<Vec<_>>()];
    cond.extend((0..extra).map(|_| random_ints(rng, n - 1)));
    let null = QMatrix::from_rows(cond).nullspace();
    if null.len() != 3 {
        return Err(Error::Degenerate("direction constraints are dependent".into()));
    }
    let mix = loop {
        let m = QMatrix::from_rows((0..3).map(|_| random_ints(rng, 3)).collect());
        if !m.det()?.is_zero() {
            break m;
        }
    };
    let e: [Vec<Rational>; 3] = std::array::from_fn(|j| {
        let coords: Vec<Rational> =
            (0..n - 1).map(|i| (0..3).fold(Rational::zero(), |acc, k| acc + &mix[(j, k)] * &null[k][i])).collect();
        (0..n).map(|r| (0..n - 1).fold(Rational::zero(), |acc, i| acc + &coords[i] * &h[i][r])).collect()
    });
    let g = f.restrict_linear(&[y.to_vec(), e[0].clone(), e[1].clone(), e[2].clone()])?;
    let parts = g.coefficients_in(0);
    let part = |k: usize| parts.get(k).cloned().unwrap_or_else(|| MPoly::zero(4)).drop_variable(0);
    debug_assert!(part(2).is_zero() && part(3).is_zero());
    Ok(DirectionSystem { e, conic: part(1), cubic: part(0) })
}

fn eval_c(f: &MPoly, pt: &[ComplexMP]) -> ComplexMP {
    f.eval_complex(pt)
}

/// `|f(w)| / max|coeff|` with `w` scaled to unit max-norm.
fn relative_value(f: &MPoly, w: &[ComplexMP]) -> f64 {
    let scale = f.max_abs_coeff_f64();
    if scale == 0.0 {
        return 0.0;
    }
    eval_c(f, &normalize_max(w)).abs_f64() / scale
}

impl DirectionSystem {
    /// Solves on the chart `c = 1`. Returns `None` when this plane is not
    /// generic enough (eliminant degree below six, or a vanishing leading term).
    pub(crate) fn solve(&self, prec: usize) -> Result<Option<(UPoly, Vec<DirectionRoot>)>> {
        let one = Rational::one();
        let q = self.conic.substitute_value(2, &one).drop_variable(2);
        let r = self.cubic.substitute_value(2, &one).drop_variable(2);
        if q.degree_in(1) != Some(2) {
            return Ok(None);
        }
        let elim = resultant_bivariate(&q, &r, 1)?;
        if elim.degree() != Some(6) {
            return Ok(None);
        }
        let mut out = Vec::new();
        for root in roots(&elim, prec)? {
            let exact = match &root.value {
                RootValue::Exact(a) => exact_partner(&q, &r, a).map(|b| vec![a.clone(), b, one.clone()]),
                RootValue::Approx(_) => None,
            };
            let plane: Vec<ComplexMP> = match &exact {
                Some(w) => cvec_from_rational(w, prec),
                None => match numeric_partner(&q, &r, &root.value.to_complex(prec), prec) {
                    Some(w) => w,
                    None => return Ok(None),
                },
            };
            let direction_residual = if exact.is_some() {
                0.0
            } else {
                relative_value(&self.conic, &plane).max(relative_value(&self.cubic, &plane))
            };
            let exact_dir = exact.map(|w| self.combine_exact(&w));
            let direction = match &exact_dir {
                Some(d) => cvec_from_rational(d, prec),
                None => normalize_max(&self.combine(&plane, prec)),
            };
            out.push(DirectionRoot {
                direction,
                exact: exact_dir,
                eliminant_residual: root.residual,
                direction_residual,
                multiplicity: root.multiplicity,
            });
        }
        Ok(Some((elim, out)))
    }

    fn combine(&self, w: &[ComplexMP], prec: usize) -> Vec<ComplexMP> {
        let es: Vec<Vec<ComplexMP>> = self.e.iter().map(|e| cvec_from_rational(e, prec)).collect();
        (0..es[0].len()).map(|i| (0..3).fold(ComplexMP::zero(prec), |acc, k| &acc + &(&w[k] * &es[k][i]))).collect()
    }

    fn combine_exact(&self, w: &[Rational]) -> Vec<Rational> {
        primitive(
            &(0..self.e[0].len())
                .map(|i| (0..3).fold(Rational::zero(), |acc, k| acc + &w[k] * &self.e[k][i]))
                .collect::<Vec<_>>(),
        )
    }
}

/// Rational `b` with `q(a, b) = r(a, b) = 0`, when unique.
fn exact_partner(q: &MPoly, r: &MPoly, a: &Rational) -> Option<Rational> {
    let qa = UPoly::from_mpoly(&q.substitute_value(0, a), 1)?;
    let ra = UPoly::from_mpoly(&r.substitute_value(0, a), 1)?;
    let g = qa.gcd(&ra);
    (g.degree() == Some(1)).then(|| -g.coeff(0) / g.coeff(1))
}

/// Solves `q(a, b) = 0` for `b`, keeps the root nearer to `r = 0`, and polishes
/// `(a, b)` with Newton steps on `(q, r)`.
fn numeric_partner(q: &MPoly, r: &MPoly, a: &ComplexMP, prec: usize) -> Option<Vec<ComplexMP>> {
    let zero = ComplexMP::zero(prec);
    let cs: Vec<ComplexMP> = q.coefficients_in(1).iter().map(|c| eval_c(c, &[a.clone(), zero.clone()])).collect();
    let (b0, b1, b2) = (&cs[0], &cs[1], &cs[2]);
    if b2.abs_f64() < 1e-30 * (b0.abs_f64() + b1.abs_f64()).max(1.0) {
        return None;
    }
    let four = ComplexMP::from_i64(4, prec);
    let two = ComplexMP::from_i64(2, prec);
    let disc = (&(b1 * b1) - &(&(&four * b2) * b0)).sqrt();
    let denom = &two * b2;
    let cands = [&(&(-b1) + &disc) / &denom, &(&(-b1) - &disc) / &denom];
    let score = |b: &ComplexMP| eval_c(r, &[a.clone(), b.clone()]).abs();
    let mut b = if score(&cands[0]) <= score(&cands[1]) { cands[0].clone() } else { cands[1].clone() };
    let mut a = a.clone();
    let (qa, qb, ra, rb) = (q.derivative(0), q.derivative(1), r.derivative(0), r.derivative(1));
    for _ in 0..3 {
        let pt = [a.clone(), b.clone()];
        let (fq, fr) = (eval_c(q, &pt), eval_c(r, &pt));
        let (j11, j12, j21, j22) = (eval_c(&qa, &pt), eval_c(&qb, &pt), eval_c(&ra, &pt), eval_c(&rb, &pt));
        let det = &(&j11 * &j22) - &(&j12 * &j21);
        if det.is_exact_zero() || det.abs_f64() == 0.0 {
            break;
        }
        let da = &(&(&j22 * &fq) - &(&j12 * &fr)) / &det;
        let db = &(&(&j11 * &fr) - &(&j21 * &fq)) / &det;
        a = &a - &da;
        b = &b - &db;
    }
    Some(vec![a, b, ComplexMP::one(prec)])
}

/// All lines through a smooth point `y` of a cubic threefold in `P⁴`.
pub fn lines_through_point(f: &MPoly, y: &[Rational], prec: usize) -> Result<PointLines> {
    let mut rng = ChaCha8Rng::seed_from_u64(DIRECTION_SEED);
    let mut fallback = None;
    for _ in 0..DIRECTION_TRIES {
        let sys = direction_system(f, y, 0, &mut rng)?;
        let Some((elim, sols)) = sys.solve(prec)? else { continue };
        let squarefree = sols.iter().all(|s| s.multiplicity == 1);
        let pl = PointLines {
            point: y.to_vec(),
            precision: prec,
            eliminant_degree: elim.degree().unwrap_or(0),
            lines: sols
                .into_iter()
                .map(|s| -> Result<NumLine> {
                    Ok(NumLine {
                        point: y.to_vec(),
                        exact: s.exact.map(|d| ProjLine::new(y.to_vec(), d)).transpose()?,
                        direction: s.direction,
                        eliminant_residual: s.eliminant_residual,
                        direction_residual: s.direction_residual,
                        multiplicity: s.multiplicity,
                        family: None,
                    })
                })
                .collect::<Result<_>>()?,
        };
        if squarefree {
            return Ok(pl);
        }
        fallback.get_or_insert(pl);
    }
    fallback.ok_or_else(|| Error::Degenerate(format!("no generic direction plane in {DIRECTION_TRIES} tries")))
}

/// Lines through `y ∈ Y`, each tagged with its family.
pub fn lines_through_instance_point(inst: &DeterminantalInstance, y: &[Rational], prec: usize) -> Result<PointLines> {
    let mut pl = lines_through_point(&inst.cubic_y, y, prec)?;
    for l in &mut pl.lines {
        l.family = Some(classify_numeric_line(inst, l, prec)?);
    }
    Ok(pl)
}

fn tolerance(prec: usize) -> Float {
    pow2(-((prec / 2) as isize), prec)
}

fn complex_phi(inst: &DeterminantalInstance, x: &[ComplexMP], prec: usize) -> CMatrix {
    let basis: Vec<CMatrix> = inst.lambda_perp.basis.iter().map(|b| b.to_complex(prec)).collect();
    CMatrix::from_rows(
        (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| basis.iter().zip(x).fold(ComplexMP::zero(prec), |acc, (b, c)| &acc + &(&b[(i, j)] * c)))
                    .collect()
            })
            .collect(),
    )
}

fn matrix_norm(m: &CMatrix) -> Float {
    vec_norm(
        &(0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))).map(|ij| m[ij].clone()).collect::<Vec<_>>(),
    )
}

/// Numeric classification of a line through a rational point of `Y`.
pub fn classify_numeric_line(inst: &DeterminantalInstance, line: &NumLine, prec: usize) -> Result<LineFamily> {
    if let Some(exact) = &line.exact {
        return classify_line(inst, exact);
    }
    let tol = tolerance(prec);
    let y = normalize_max(&cvec_from_rational(&line.point, prec));
    let d = &line.direction;
    let dn = normalize_max(d);
    for p in &inst.nodes {
        let m = CMatrix::from_rows(vec![y.clone(), dn.clone(), normalize_max(&cvec_from_rational(p, prec))]);
        if m.nullspace_with_tol(&tol).0 <= 2 {
            return Ok(LineFamily::SingularLocus);
        }
    }
    let phi_y = inst.phi(&line.point);
    let (v, u) = (kernel(&phi_y), cokernel(&phi_y));
    if v.len() != 1 || u.len() != 1 {
        return Err(Error::Degenerate("base point is not a smooth point of Y".into()));
    }
    let (vc, uc) = (cvec_from_rational(&v[0], prec), cvec_from_rational(&u[0], prec));
    let dm = complex_phi(inst, d, prec);
    let small = |w: &[ComplexMP], x: &[ComplexMP]| vec_norm(w) <= &(&tol * &matrix_norm(&dm)) * &vec_norm(x);
    if small(&dm.mul_vec(&vc), &vc) {
        return Ok(LineFamily::P);
    }
    if small(&dm.transpose().mul_vec(&uc), &uc) {
        return Ok(LineFamily::PDual);
    }
    let (rank, kd, _) = dm.nullspace_with_tol(&tol);
    if rank == 2 {
        let kd = &kd[0];
        let k = phi_y.to_complex(prec).mul_vec(kd);
        let u_i = cross3_c(&vc, kd);
        let lam: Vec<CMatrix> = inst.lambda.basis.iter().map(|s| s.to_complex(prec)).collect();
        let by_k: Vec<Vec<ComplexMP>> = lam.iter().map(|s| s.mul_vec(&k)).collect();
        let by_u: Vec<Vec<ComplexMP>> = lam.iter().map(|s| s.transpose().mul_vec(&u_i)).collect();
        let rows: Vec<Vec<ComplexMP>> = (0..3)
            .map(|r| by_k.iter().map(|c| c[r].clone()).collect())
            .chain((0..3).map(|r| by_u.iter().map(|c| c[r].clone()).collect()))
            .collect();
        if CMatrix::from_rows(rows).nullspace_with_tol(&tol).0 == 3 {
            return Ok(LineFamily::SComponent);
        }
    }
    Err(Error::Tolerance(format!(
        "line fits no family at tolerance 2^-{}; residual {:e}",
        prec / 2,
        line.max_residual()
    )))
}
