use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{cokernel, flatten, image, kernel, outer, trace_perp, EndoSubspace};
use crate::error::{Error, Result};
use crate::poly::rational::dot;
use crate::poly::{QMatrix, Rational};

/// Whether `m ∈ T_a Σ_k` for `k = rank a`, i.e. `m(ker a) ⊂ im a`.
pub fn tangent_contains(a: &QMatrix, m: &QMatrix) -> Result<bool> {
    let r = a.rank();
    if r == 0 || r == 3 {
        return Err(Error::Precondition(format!("tangent space needs rank 1 or 2, got {r}")));
    }
    let ks = kernel(a);
    let us = cokernel(a);
    Ok(us.iter().all(|u| ks.iter().all(|k| dot(u, &m.mul_vec(k)).is_zero())))
}

/// `m ∈ T_a Σ₂` for a rank-2 matrix `a`.
pub fn tangent_sigma2_contains(a: &QMatrix, m: &QMatrix) -> Result<bool> {
    let r = a.rank();
    if r != 2 {
        return Err(Error::RankMismatch { expected: 2, found: r });
    }
    tangent_contains(a, m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualityCase {
    /// `Λ ⊂ T_{a0} Σ₂` with `a0 ∈ Λ` of rank 2.
    TangentSigma2 { a0: QMatrix },
    /// `a0 ∈ Λ` of rank 1.
    MeetsSigma1 { a0: QMatrix },
}

/// The degeneracy of `Λ^⊥` matching a degeneracy of `Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DualityWitness {
    /// `Λ^⊥` is tangent to `Σ₁` at `b0`: `b1 ∈ Λ^⊥ ∩ T_{b0} Σ₁` independent of `b0`.
    Sigma1Tangency {
        #[serde(with = "pair")]
        b: (QMatrix, QMatrix),
    },
    /// `Λ^⊥ ⊂ T_b Σ₂` with `b` of rank 2.
    Sigma2Tangency {
        #[serde(with = "single")]
        b: QMatrix,
    },
}

mod pair {
    use serde::{Deserializer, Serializer};

    use crate::poly::QMatrix;

    pub fn serialize<S: Serializer>(p: &(QMatrix, QMatrix), s: S) -> Result<S::Ok, S::Error> {
        super::super::matrix_list::serialize(&[p.0.clone(), p.1.clone()], s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(QMatrix, QMatrix), D::Error> {
        use serde::de::Error as _;
        let mut v = super::super::matrix_list::deserialize(d)?;
        if v.len() != 2 {
            return Err(D::Error::custom("expected two matrices"));
        }
        let b = v.pop().expect("len 2");
        Ok((v.pop().expect("len 2"), b))
    }
}

mod single {
    use serde::{Deserializer, Serializer};

    use crate::poly::QMatrix;

    pub fn serialize<S: Serializer>(m: &QMatrix, s: S) -> Result<S::Ok, S::Error> {
        super::super::matrix_list::serialize(std::slice::from_ref(m), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<QMatrix, D::Error> {
        use serde::de::Error as _;
        let mut v = super::super::matrix_list::deserialize(d)?;
        if v.len() != 1 {
            return Err(D::Error::custom("expected one matrix"));
        }
        Ok(v.remove(0))
    }
}

/// Elements of `perp` satisfying `wᵀ M k = 0` for every listed pair `(w, k)`.
fn solve_in(perp: &EndoSubspace, conditions: &[(Vec<Rational>, Vec<Rational>)]) -> Vec<QMatrix> {
    if conditions.is_empty() {
        return perp.basis.clone();
    }
    let rows: Vec<Vec<Rational>> =
        conditions.iter().map(|(w, k)| perp.basis.iter().map(|b| dot(w, &b.mul_vec(k))).collect()).collect();
    QMatrix::from_rows(rows).nullspace().iter().map(|c| perp.element(c)).collect()
}

fn independent_of(b0: &QMatrix, candidates: &[QMatrix]) -> Option<QMatrix> {
    candidates.iter().find(|m| QMatrix::from_rows(vec![flatten(b0), flatten(m)]).rank() == 2).cloned()
}

/// Functionals vanishing on the span of `vs`.
fn annihilator(vs: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if vs.is_empty() {
        return (0..3).map(|i| (0..3).map(|j| Rational::from_integer(i64::from(i == j).into())).collect()).collect();
    }
    QMatrix::from_rows(vs.to_vec()).nullspace()
}

/// Follows the linear-algebra duality between degeneracies of `Λ` and of
/// `Λ^⊥`, producing a verified witness on the `Λ^⊥` side.
pub fn linalg_duality_witness(lambda: &EndoSubspace, case: &DualityCase) -> Result<DualityWitness> {
    if lambda.dimension() != 4 {
        return Err(Error::Precondition(format!("Λ must have dimension 4, got {}", lambda.dimension())));
    }
    let perp = trace_perp(lambda);
    let witness = match case {
        DualityCase::TangentSigma2 { a0 } => {
            if a0.rank() != 2 || !lambda.contains(a0) {
                return Err(Error::Precondition("a0 must be a rank-2 element of Λ".into()));
            }
            for m in &lambda.basis {
                if !tangent_sigma2_contains(a0, m)? {
                    return Err(Error::Precondition("Λ is not tangent to Σ₂ at a0".into()));
                }
            }
            let k = kernel(a0).remove(0);
            let u = cokernel(a0).remove(0);
            let b0 = outer(&k, &u);
            let im = image(a0);
            let ann_ker = annihilator(std::slice::from_ref(&k));
            let mut conds: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::new();
            for f in &ann_ker {
                for i in &im {
                    conds.push((f.clone(), i.clone()));
                }
            }
            conds.push((u, k));
            let b1 = independent_of(&b0, &solve_in(&perp, &conds))
                .ok_or_else(|| Error::Degenerate("no tangent direction independent of B0".into()))?;
            DualityWitness::Sigma1Tangency { b: (b0, b1) }
        }
        DualityCase::MeetsSigma1 { a0 } => {
            if a0.rank() != 1 || !lambda.contains(a0) {
                return Err(Error::Precondition("a0 must be a rank-1 element of Λ".into()));
            }
            let im = image(a0);
            let ker = kernel(a0);
            let mut conds: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::new();
            for e in 0..3 {
                let unit: Vec<Rational> = (0..3).map(|j| Rational::from_integer(i64::from(e == j).into())).collect();
                conds.push((unit, im[0].clone()));
            }
            let w_ann_ker = annihilator(&ker);
            for f in &w_ann_ker {
                for k in &ker {
                    conds.push((f.clone(), k.clone()));
                }
            }
            let b = solve_in(&perp, &conds)
                .into_iter()
                .find(|m| !m.is_zero())
                .ok_or_else(|| Error::Degenerate("the dual subspace misses Λ^⊥".into()))?;
            match b.rank() {
                2 => DualityWitness::Sigma2Tangency { b },
                1 => {
                    let us = cokernel(&b);
                    let ks = kernel(&b);
                    let conds: Vec<_> =
                        us.iter().flat_map(|u| ks.iter().map(move |k| (u.clone(), k.clone()))).collect();
                    let b1 = independent_of(&b, &solve_in(&perp, &conds))
                        .ok_or_else(|| Error::Degenerate("no tangent direction at the rank-1 point".into()))?;
                    DualityWitness::Sigma1Tangency { b: (b, b1) }
                }
                r => return Err(Error::Degenerate(format!("dual witness has rank {r}"))),
            }
        }
    };
    verify_witness(&perp, &witness)?;
    Ok(witness)
}

fn verify_witness(perp: &EndoSubspace, w: &DualityWitness) -> Result<()> {
    let ok = match w {
        DualityWitness::Sigma1Tangency { b: (b0, b1) } => {
            b0.rank() == 1
                && perp.contains(b0)
                && perp.contains(b1)
                && tangent_contains(b0, b1)?
                && independent_of(b0, std::slice::from_ref(b1)).is_some()
        }
        DualityWitness::Sigma2Tangency { b } => {
            b.rank() == 2
                && perp.contains(b)
                && perp
                    .basis
                    .iter()
                    .map(|m| tangent_sigma2_contains(b, m))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .all(|x| x)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Degenerate("duality witness failed verification".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detgeo::trace_pairing;

    fn m(rows: [[i64; 3]; 3]) -> QMatrix {
        QMatrix::from_i64(&rows.iter().map(|r| &r[..]).collect::<Vec<_>>())
    }

    #[test]
    fn tangent_predicate() {
        let a = m([[1, 0, 0], [0, 1, 0], [0, 0, 0]]);
        assert!(tangent_sigma2_contains(&a, &a).unwrap());
        assert!(!tangent_sigma2_contains(&a, &m([[0, 0, 0], [0, 0, 0], [0, 0, 1]])).unwrap());
        assert!(tangent_sigma2_contains(&m([[1, 0, 0], [0, 0, 0], [0, 0, 0]]), &a).is_err());
        // B0 with ker B0 = im a and im B0 = ker a annihilates the tangent space.
        let b0 = m([[0, 0, 0], [0, 0, 0], [0, 0, 1]]);
        for i in 0..3 {
            for j in 0..3 {
                let mut e = QMatrix::zeros(3, 3);
                e[(i, j)] = Rational::from_integer(1.into());
                if tangent_sigma2_contains(&a, &e).unwrap() {
                    assert!(trace_pairing(&b0, &e).is_zero());
                }
            }
        }
    }

    #[test]
    fn tangent_sigma2_gives_sigma1_tangency() {
        let a0 = m([[1, 0, 0], [0, 1, 0], [0, 0, 0]]);
        let lam = EndoSubspace::new(vec![
            a0.clone(),
            m([[2, 1, 5], [0, -3, 1], [1, 4, 0]]),
            m([[0, 7, 1], [1, 1, -2], [3, 0, 0]]),
            m([[1, 0, 0], [4, 2, 3], [-1, 2, 0]]),
        ])
        .unwrap();
        let w = linalg_duality_witness(&lam, &DualityCase::TangentSigma2 { a0 }).unwrap();
        assert!(matches!(w, DualityWitness::Sigma1Tangency { .. }));
    }

    #[test]
    fn rank_one_in_lambda_gives_dual_tangency() {
        let a0 = m([[1, 2, 0], [2, 4, 0], [-1, -2, 0]]);
        let lam = EndoSubspace::new(vec![
            a0.clone(),
            m([[2, 1, 5], [0, -3, 1], [1, 4, 0]]),
            m([[0, 7, 1], [1, 1, -2], [3, 0, 2]]),
            m([[1, 0, 0], [4, 2, 3], [-1, 2, 1]]),
        ])
        .unwrap();
        let w = linalg_duality_witness(&lam, &DualityCase::MeetsSigma1 { a0 }).unwrap();
        assert!(matches!(w, DualityWitness::Sigma2Tangency { .. } | DualityWitness::Sigma1Tangency { .. }));
    }
}
