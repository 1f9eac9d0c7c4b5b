//! The Segre cubic threefold through five cubics double at six points, and
//! six-point configurations on `P¹` modulo Möbius transformations.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use rand_chacha::ChaCha8Rng;

use crate::detgeo::{cokernel, kernel, primitive, DeterminantalInstance};
use crate::error::{Error, Result};
use crate::poly::rational::{dot, normalize_projective, projectively_equal};
use crate::poly::{int, MPoly, QMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegreVariant {
    /// `y₃ = (x₁ − x₂)·x₃·(x₄ − x₁)`.
    Printed,
    /// `y₃ = (x₁ − x₂)·x₃·(x₄ − x₀)`, following `yᵢ = (x_{i+3} − x_{i+4})·xᵢ·(x_{i+1} − x_{i+2})`.
    Cyclic,
}

impl FromStr for SegreVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(SegreVariant::Printed),
            "cyclic" => Ok(SegreVariant::Cyclic),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

fn x(i: usize) -> MPoly {
    MPoly::var(5, i % 5)
}

fn diff(i: usize, j: usize) -> MPoly {
    x(i) - x(j)
}

/// The five cubics `y₀ … y₄` in `x₀ … x₄`.
pub fn segre_forms(variant: SegreVariant) -> [MPoly; 5] {
    std::array::from_fn(|i| {
        let last = if i == 3 && variant == SegreVariant::Printed { diff(4, 1) } else { diff(i + 1, i + 2) };
        diff(i + 3, i + 4) * x(i) * last
    })
}

/// `Σᵢ yᵢ·yᵢ₊₁·yᵢ₊₂` with indices mod 5.
pub fn quintic_relation(y: &[MPoly]) -> MPoly {
    let n = y[0].nvars();
    (0..5).fold(MPoly::zero(n), |acc, i| acc + y[i].clone() * y[(i + 1) % 5].clone() * y[(i + 2) % 5].clone())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub variant: SegreVariant,
    pub forms: Vec<String>,
    pub relation_holds: bool,
    /// Nonzero terms left after expanding the relation.
    pub residual_terms: usize,
    pub double_at_standard_points: bool,
}

pub fn identity_report(variant: SegreVariant) -> IdentityReport {
    let forms = segre_forms(variant);
    let rel = quintic_relation(&forms);
    let points = standard_points();
    IdentityReport {
        variant,
        forms: forms.iter().map(ToString::to_string).collect(),
        relation_holds: rel.is_zero(),
        residual_terms: rel.num_terms(),
        double_at_standard_points: forms.iter().all(|f| double_at_points(f, &points)),
    }
}

/// Coordinate points `e₀ … e₄` and `(1,1,1,1,1)`.
pub fn standard_points() -> Vec<Vec<Rational>> {
    let mut pts: Vec<Vec<Rational>> = (0..5).map(|i| (0..5).map(|j| int(i64::from(i == j))).collect()).collect();
    pts.push(vec![int(1); 5]);
    pts
}

/// Whether `f` and all its first partials vanish at every point.
pub fn double_at_points(f: &MPoly, points: &[Vec<Rational>]) -> bool {
    let grad = f.gradient();
    points.iter().all(|p| f.eval(p).is_zero() && grad.iter().all(|g| g.eval(p).is_zero()))
}

/// Six points of `P¹` as homogeneous pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SixTupleOnLine {
    #[serde(with = "crate::poly::rational::serde_str::vec2")]
    pub points: Vec<Vec<Rational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl SixTupleOnLine {
    pub fn new(points: Vec<[Rational; 2]>) -> Result<Self> {
        if points.len() != 6 {
            return Err(Error::Precondition(format!("expected 6 points, got {}", points.len())));
        }
        if points.iter().any(|p| p[0].is_zero() && p[1].is_zero()) {
            return Err(Error::Precondition("point (0,0) is not in P1".into()));
        }
        Ok(SixTupleOnLine { points: points.into_iter().map(|p| p.to_vec()).collect() })
    }

    /// Affine values `a/b`, with `b = 0` allowed as `∞`.
    pub fn from_affine(values: &[Option<Rational>]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|v| match v {
                    Some(a) => [a.clone(), Rational::one()],
                    None => [Rational::one(), Rational::zero()],
                })
                .collect(),
        )
    }

    fn point(&self, i: usize) -> [Rational; 2] {
        [self.points[i][0].clone(), self.points[i][1].clone()]
    }

    /// Largest number of coincident points.
    pub fn max_multiplicity(&self) -> usize {
        let mut counts: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();
        for p in &self.points {
            *counts.entry(normalize_projective(p)).or_insert(0) += 1;
        }
        counts.into_values().max().unwrap_or(0)
    }

    pub fn stability(&self) -> Stability {
        match self.max_multiplicity() {
            m if m < 3 => Stability::Stable,
            3 => Stability::StrictlySemistable,
            _ => Stability::Unstable,
        }
    }

    /// Applies `z ↦ (a z + b)/(c z + d)` to every point.
    pub fn mobius(&self, m: [[Rational; 2]; 2]) -> Result<Self> {
        if (&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]).is_zero() {
            return Err(Error::Degenerate("singular Möbius matrix".into()));
        }
        Self::new(
            (0..6)
                .map(|i| {
                    let [u, v] = self.point(i);
                    [&m[0][0] * &u + &m[0][1] * &v, &m[1][0] * &u + &m[1][1] * &v]
                })
                .collect(),
        )
    }

    /// Permutes the points: entry `i` of the result is `self[perm[i]]`.
    pub fn permuted(&self, perm: [usize; 6]) -> Self {
        SixTupleOnLine { points: perm.iter().map(|&i| self.points[i].clone()).collect() }
    }
}

/// `det [p q]`.
fn bracket(p: &[Rational; 2], q: &[Rational; 2]) -> Rational {
    &p[0] * &q[1] - &p[1] * &q[0]
}

/// First index triple of pairwise distinct points.
fn reference_triple(t: &SixTupleOnLine) -> Option<[usize; 3]> {
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                let (a, b, c) = (t.point(i), t.point(j), t.point(k));
                if !bracket(&a, &b).is_zero() && !bracket(&a, &c).is_zero() && !bracket(&b, &c).is_zero() {
                    return Some([i, j, k]);
                }
            }
        }
    }
    None
}

/// Images of all points under the Möbius map sending points `i, j, k` to `0, 1, ∞`.
fn normalized(t: &SixTupleOnLine, [i, j, k]: [usize; 3]) -> Option<Vec<Vec<Rational>>> {
    let (a, b, c) = (t.point(i), t.point(j), t.point(k));
    let (ba, bc) = (bracket(&b, &a), bracket(&b, &c));
    if ba.is_zero() || bc.is_zero() || bracket(&a, &c).is_zero() {
        return None;
    }
    Some(
        (0..6)
            .map(|n| {
                let p = t.point(n);
                normalize_projective(&[bracket(&p, &a) * &bc, bracket(&p, &c) * &ba])
            })
            .collect(),
    )
}

/// Whether two ordered six-tuples agree modulo `PGL₂`.
pub fn tuple_equiv(t1: &SixTupleOnLine, t2: &SixTupleOnLine) -> Result<bool> {
    let triple = reference_triple(t1).ok_or_else(|| Error::Precondition("fewer than three distinct points".into()))?;
    let n1 = normalized(t1, triple).expect("triple chosen distinct");
    Ok(match normalized(t2, triple) {
        Some(n2) => n1.iter().zip(&n2).all(|(p, q)| projectively_equal(p, q)),
        None => false,
    })
}

/// The two six-tuples attached to a point `s` of `S°`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JmapReport {
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub s: Vec<Rational>,
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub beta: Vec<Rational>,
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub beta_dual: Vec<Rational>,
    /// `q₁ … q₆` projected from `β(s)`.
    pub primal: SixTupleOnLine,
    /// `q₁∨ … q₆∨` projected from `β∨(s)`.
    pub dual: SixTupleOnLine,
    pub agree: bool,
}

/// Projects each point from `center` onto the pencil of lines through it.
fn project_from(center: &[Rational], points: &[Vec<Rational>]) -> Result<SixTupleOnLine> {
    let f = QMatrix::from_rows(vec![center.to_vec()]).nullspace();
    SixTupleOnLine::new(points.iter().map(|q| [dot(&f[0], q), dot(&f[1], q)]).collect())
}

/// Checks that `s` (in `Λ` coordinates) lies in `S°` and returns `(β(s), β∨(s))`.
pub fn s_circ_data(inst: &DeterminantalInstance, s: &[Rational]) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let sigma = inst.sigma(s);
    let r = sigma.rank();
    if r != 2 {
        return Err(Error::RankMismatch { expected: 2, found: r });
    }
    let beta = primitive(&kernel(&sigma)[0]);
    let beta_dual = primitive(&cokernel(&sigma)[0]);
    let q = &inst.q_points;
    if let Some(i) = q.iter().position(|qi| projectively_equal(qi, &beta)) {
        return Err(Error::Precondition(format!("β(s) = q{}", i + 1)));
    }
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            if QMatrix::from_rows(vec![beta.clone(), q[i].clone(), q[j].clone()]).det()?.is_zero() {
                return Err(Error::Precondition(format!("β(s) lies on the line q{}q{}", i + 1, j + 1)));
            }
        }
    }
    Ok((beta, beta_dual))
}

pub fn jmap_report(inst: &DeterminantalInstance, s: &[Rational]) -> Result<JmapReport> {
    let (beta, beta_dual) = s_circ_data(inst, s)?;
    let primal = project_from(&beta, &inst.q_points)?;
    let dual = project_from(&beta_dual, &inst.q_dual_points)?;
    let agree = tuple_equiv(&primal, &dual)?;
    Ok(JmapReport { s: s.to_vec(), beta, beta_dual, primal, dual, agree })
}

/// Whether `j(s) = j∨(s)` as points of `M₀,₆`.
pub fn jmap_agree(inst: &DeterminantalInstance, s: &[Rational]) -> Result<bool> {
    Ok(jmap_report(inst, s)?.agree)
}

/// A rational point of `S°`: the element of `Λ` killing a random vector.
pub fn random_s_circ_point(inst: &DeterminantalInstance, rng: &mut ChaCha8Rng) -> Result<Vec<Rational>> {
    for _ in 0..crate::detgeo::RETRY_CAP {
        let v = crate::detgeo::random_vector3(rng);
        if let Ok(s) = inst.s_point_over(&v) {
            if s_circ_data(inst, &s).is_ok() {
                return Ok(s);
            }
        }
    }
    Err(Error::Degenerate("no point of S° found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn tuple(vals: &[i64]) -> SixTupleOnLine {
        SixTupleOnLine::from_affine(&vals.iter().map(|&v| Some(int(v))).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn exactly_one_variant_satisfies_relation() {
        let printed = identity_report(SegreVariant::Printed);
        let cyclic = identity_report(SegreVariant::Cyclic);
        assert!(cyclic.relation_holds);
        assert!(!printed.relation_holds);
        assert!(cyclic.double_at_standard_points);
        for f in segre_forms(SegreVariant::Cyclic) {
            assert_eq!(f.homogeneous_degree(), Some(3));
        }
    }

    #[test]
    fn double_points() {
        let y0 = &segre_forms(SegreVariant::Cyclic)[0];
        let pts = standard_points();
        assert!(double_at_points(y0, &pts[5..]));
        assert!(double_at_points(y0, &pts[..1]));
        assert!(!double_at_points(&x(0).pow(3), &pts[..1]));
    }

    #[test]
    fn stability_thresholds() {
        assert_eq!(tuple(&[0, 1, 2, 3, 4, 5]).stability(), Stability::Stable);
        assert_eq!(tuple(&[0, 0, 0, 3, 4, 5]).stability(), Stability::StrictlySemistable);
        assert_eq!(tuple(&[0, 0, 0, 0, 4, 5]).stability(), Stability::Unstable);
    }

    #[test]
    fn equivalence_under_mobius() {
        let t = tuple(&[0, 1, 3, -2, 7, 11]);
        let m = [[rat(2, 3), int(5)], [int(-1), rat(1, 7)]];
        assert!(tuple_equiv(&t, &t.mobius(m).unwrap()).unwrap());
        assert!(tuple_equiv(&t, &t).unwrap());
        assert!(!tuple_equiv(&t, &t.permuted([0, 1, 2, 4, 3, 5])).unwrap());
        assert!(tuple_equiv(&tuple(&[0, 0, 0, 0, 0, 1]), &t).is_err());
    }

    #[test]
    fn jmap_on_seed_one() {
        use rand::SeedableRng;
        let inst = crate::detgeo::make_instance(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut reports = Vec::new();
        for _ in 0..5 {
            let s = random_s_circ_point(&inst, &mut rng).unwrap();
            let rep = jmap_report(&inst, &s).unwrap();
            assert!(rep.agree, "{rep:?}");
            reports.push(rep);
        }
        assert!(!tuple_equiv(&reports[0].primal, &reports[1].dual).unwrap());
        let at_q1 = inst.s_point_over(&inst.q_points[0]);
        if let Ok(s) = at_q1 {
            assert!(matches!(jmap_agree(&inst, &s), Err(Error::Precondition(_))));
        }
    }
}
