use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::instance::{random_vector3, ENTRY_BOUND};
use super::lines::{special_line, LineKind};
use super::{cokernel, kernel, primitive, DeterminantalInstance, ProjLine};
use crate::error::{Error, Result};
use crate::poly::rational::dot;
use crate::poly::{int, MPoly, QMatrix, Rational};

/// Quadrics cutting the cubic scrolls `T_v` and `T_{v∨}` out of `P(Λ^⊥)`,
/// computed in a basis `(v, v', v'')` with `v', v''` spanning `ker v∨`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScrollData {
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub v: Vec<Rational>,
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub vdual: Vec<Rational>,
    /// 2×2 minors of the bottom two rows of `B = g⁻¹ φ g`.
    pub t_v: Vec<MPoly>,
    /// 2×2 minors of the right two columns of `B`.
    pub t_vdual: Vec<MPoly>,
    /// `b₂₂b₃₃ − b₂₃b₃₂`.
    pub union_quadric: MPoly,
    /// `det B` equals the first-row expansion in the minors of the bottom rows.
    pub row_expansion_identity: bool,
}

fn minor(b: &[Vec<MPoly>], r: [usize; 2], c: [usize; 2]) -> MPoly {
    b[r[0]][c[0]].clone() * b[r[1]][c[1]].clone() - b[r[0]][c[1]].clone() * b[r[1]][c[0]].clone()
}

/// `B = g⁻¹ φ g` as a 3×3 matrix of linear forms in the `Λ^⊥` coordinates.
fn adapted_matrix(inst: &DeterminantalInstance, g: &QMatrix) -> Result<Vec<Vec<MPoly>>> {
    let ginv = g.inverse()?;
    let conj: Vec<QMatrix> = inst.lambda_perp.basis.iter().map(|b| ginv.mul(b).mul(g)).collect();
    Ok((0..3)
        .map(|i| (0..3).map(|j| MPoly::linear(&conj.iter().map(|m| m[(i, j)].clone()).collect::<Vec<_>>())).collect())
        .collect())
}

pub fn scroll_data(inst: &DeterminantalInstance, v: &[Rational], vdual: &[Rational]) -> Result<ScrollData> {
    if v.len() != 3 || vdual.len() != 3 {
        return Err(Error::Precondition("v and v∨ live in a 3-dimensional space".into()));
    }
    if dot(v, vdual).is_zero() {
        return Err(Error::Degenerate("v∨(v) = 0 admits no adapted basis".into()));
    }
    let rest = QMatrix::from_rows(vec![vdual.to_vec()]).nullspace();
    let g = QMatrix::from_cols(&[v.to_vec(), rest[0].clone(), rest[1].clone()]);
    let b = adapted_matrix(inst, &g)?;
    let pairs = [[0, 1], [0, 2], [1, 2]];
    let t_v: Vec<MPoly> = pairs.iter().map(|&c| minor(&b, [1, 2], c)).collect();
    let t_vdual: Vec<MPoly> = pairs.iter().map(|&r| minor(&b, r, [1, 2])).collect();
    let union_quadric = minor(&b, [1, 2], [1, 2]);
    let expansion =
        b[0][0].clone() * t_v[2].clone() - b[0][1].clone() * t_v[1].clone() + b[0][2].clone() * t_v[0].clone();
    let det = crate::poly::poly_det(&b)?;
    // det(g⁻¹φg) = det φ.
    let row_expansion_identity = det == expansion && det == inst.cubic_y;
    Ok(ScrollData { v: v.to_vec(), vdual: vdual.to_vec(), t_v, t_vdual, union_quadric, row_expansion_identity })
}

impl ScrollData {
    pub fn on_t_v(&self, x: &[Rational]) -> bool {
        self.t_v.iter().all(|q| q.eval(x).is_zero())
    }

    pub fn on_t_vdual(&self, x: &[Rational]) -> bool {
        self.t_vdual.iter().all(|q| q.eval(x).is_zero())
    }

    /// Whether every quadric of `T_v` vanishes on the line.
    pub fn line_in_t_v(&self, line: &ProjLine) -> Result<bool> {
        for q in &self.t_v {
            if !line.lies_on(q)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Random point of `V∨` annihilating `v`, or of `V` killed by `v∨`.
fn random_in_annihilator(w: &[Rational], rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let basis = QMatrix::from_rows(vec![w.to_vec()]).nullspace();
    loop {
        let (a, b) = (int(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND)), int(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND)));
        let x: Vec<Rational> = (0..3).map(|i| &a * &basis[0][i] + &b * &basis[1][i]).collect();
        if x.iter().any(|c| !c.is_zero()) {
            return primitive(&x);
        }
    }
}

/// A ruling of `T_v`: the line `{φ : u ∘ φ = 0}` for `u(v) = 0`.
pub fn t_v_ruling(inst: &DeterminantalInstance, v: &[Rational], rng: &mut ChaCha8Rng) -> Result<ProjLine> {
    special_line(inst, LineKind::FromVdual, &random_in_annihilator(v, rng))
}

/// A ruling of `T_{v∨}`: the line `{φ : φ(w) = 0}` for `v∨(w) = 0`.
pub fn t_vdual_ruling(inst: &DeterminantalInstance, vdual: &[Rational], rng: &mut ChaCha8Rng) -> Result<ProjLine> {
    special_line(inst, LineKind::FromV, &random_in_annihilator(vdual, rng))
}

fn random_point_on(line: &ProjLine, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let s = int(rng.gen_range(1..=ENTRY_BOUND));
    let t = int(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND));
    primitive(&line.point_at(&s, &t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrollReport {
    pub samples: usize,
    pub t_v_samples_on_scroll: bool,
    pub t_vdual_samples_on_scroll: bool,
    /// `Q` and the cubic vanish on every sample of both scrolls.
    pub union_quadric_vanishes: bool,
    pub row_expansion_identity: bool,
    /// Sampled rulings `{u ∘ φ = 0}`, `u(v) = 0`, lie on `T_v`.
    pub rulings_in_t_v: bool,
    /// `deg T_v + deg T_{v∨} = deg(Y ∩ Q) = 2·3`.
    pub degree_budget: (u32, u32, u32),
}

impl ScrollReport {
    pub fn all_pass(&self) -> bool {
        self.t_v_samples_on_scroll
            && self.t_vdual_samples_on_scroll
            && self.union_quadric_vanishes
            && self.row_expansion_identity
            && self.rulings_in_t_v
            && self.degree_budget.0 + self.degree_budget.1 == self.degree_budget.2
    }
}

/// Checks both scrolls on `samples` points each, drawn from random rulings.
pub fn verify_scrolls(
    inst: &DeterminantalInstance,
    data: &ScrollData,
    samples: usize,
    seed: u64,
) -> Result<ScrollReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tv = Vec::with_capacity(samples);
    let mut tvd = Vec::with_capacity(samples);
    let mut rulings_ok = true;
    for _ in 0..samples {
        let r = t_v_ruling(inst, &data.v, &mut rng)?;
        rulings_ok &= data.line_in_t_v(&r)?;
        tv.push(random_point_on(&r, &mut rng));
        tvd.push(random_point_on(&t_vdual_ruling(inst, &data.vdual, &mut rng)?, &mut rng));
    }
    let on_union = |x: &Vec<Rational>| data.union_quadric.eval(x).is_zero() && inst.cubic_y.eval(x).is_zero();
    Ok(ScrollReport {
        samples,
        t_v_samples_on_scroll: tv.iter().all(|x| data.on_t_v(x)),
        t_vdual_samples_on_scroll: tvd.iter().all(|x| data.on_t_vdual(x)),
        union_quadric_vanishes: tv.iter().chain(&tvd).all(on_union),
        row_expansion_identity: data.row_expansion_identity,
        rulings_in_t_v: rulings_ok,
        degree_budget: (3, 3, 2 * 3),
    })
}

/// Incidence of the nodes with `T_{β(s)}`, `T_{β∨(s)}` and `ℓ_s`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwistedQuarticReport {
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub s: Vec<Rational>,
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub beta: Vec<Rational>,
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub beta_dual: Vec<Rational>,
    pub on_t_beta: Vec<bool>,
    pub on_t_beta_dual: Vec<bool>,
    pub on_l_s: Vec<bool>,
}

impl TwistedQuarticReport {
    pub fn all_pass(&self) -> bool {
        self.on_t_beta.iter().all(|&b| b) && self.on_t_beta_dual.iter().all(|&b| b) && !self.on_l_s.iter().any(|&b| b)
    }
}

/// `s` is given in `Λ` coordinates; `β(s) = ker σ` and `β∨(s)` is the left kernel.
pub fn twisted_quartic_check(inst: &DeterminantalInstance, s: &[Rational]) -> Result<TwistedQuarticReport> {
    let sigma = inst.sigma(s);
    let r = sigma.rank();
    if r != 2 {
        return Err(Error::RankMismatch { expected: 2, found: r });
    }
    let beta = primitive(&kernel(&sigma)[0]);
    let beta_dual = primitive(&cokernel(&sigma)[0]);
    let data = scroll_data(inst, &beta, &beta_dual)?;
    let l_s = special_line(inst, LineKind::FromS, s)?;
    let on_l_s: Vec<bool> = inst.nodes.iter().map(|p| l_s.contains_point(p)).collect();
    if on_l_s.iter().any(|&b| b) {
        return Err(Error::Degenerate("a node lies on ℓ_s".into()));
    }
    Ok(TwistedQuarticReport {
        s: s.to_vec(),
        on_t_beta: inst.nodes.iter().map(|p| data.on_t_v(p)).collect(),
        on_t_beta_dual: inst.nodes.iter().map(|p| data.on_t_vdual(p)).collect(),
        on_l_s,
        beta,
        beta_dual,
    })
}

/// Whether two lines of the same projective space meet.
pub fn lines_meet(a: &ProjLine, b: &ProjLine) -> bool {
    QMatrix::from_rows(a.points.iter().chain(&b.points).cloned().collect()).rank() <= 3
}

/// A random `v ∈ V` paired with `v∨ = v` when `v·v ≠ 0`.
pub fn random_scroll_pair(rng: &mut ChaCha8Rng) -> (Vec<Rational>, Vec<Rational>) {
    let v = random_vector3(rng);
    let vd = random_vector3(rng);
    if dot(&v, &vd).is_zero() {
        (v.clone(), v)
    } else {
        (v, vd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detgeo::make_instance;

    #[test]
    fn scrolls_on_seed_one() {
        let inst = make_instance(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (v, vd) = random_scroll_pair(&mut rng);
        let data = scroll_data(&inst, &v, &vd).unwrap();
        let report = verify_scrolls(&inst, &data, 25, 9).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn nodes_on_both_scrolls() {
        let inst = make_instance(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..3 {
            let s = inst.s_point_over(&random_vector3(&mut rng)).unwrap();
            let rep = twisted_quartic_check(&inst, &s).unwrap();
            assert!(rep.all_pass(), "{rep:?}");
        }
    }

    #[test]
    fn l_s_meets_every_ruling_once() {
        let inst = make_instance(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let s = inst.s_point_over(&random_vector3(&mut rng)).unwrap();
        let beta = kernel(&inst.sigma(&s)).remove(0);
        let l_s = special_line(&inst, LineKind::FromS, &s).unwrap();
        for _ in 0..5 {
            let ruling = t_v_ruling(&inst, &beta, &mut rng).unwrap();
            assert!(lines_meet(&l_s, &ruling));
            assert!(!l_s.same_line(&ruling));
        }
    }

    #[test]
    fn degenerate_inputs() {
        let inst = make_instance(1).unwrap();
        let v = vec![int(1), int(0), int(0)];
        let vd = vec![int(0), int(1), int(0)];
        assert!(scroll_data(&inst, &v, &vd).is_err());
        let zero = vec![int(0); 4];
        assert!(matches!(twisted_quartic_check(&inst, &zero), Err(Error::RankMismatch { .. })));
    }
}
