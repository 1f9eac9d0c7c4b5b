//! Determinantal cubics: `S = P(Λ) ∩ Σ₂` and `Y = P(Λ^⊥) ∩ Σ₂` for a
//! four-dimensional `Λ ⊂ End(V)`, `dim V = 3`, under the trace pairing.

mod duality;
mod instance;
mod lines;
mod project;
mod scroll;

pub use duality::{linalg_duality_witness, tangent_contains, tangent_sigma2_contains, DualityCase, DualityWitness};
pub use instance::{instance_from_factors, random_vector3};
pub use instance::{
    is_odp, linear_general_position, make_instance, make_instance_with, residual_rank1_point, s_smoothness_certificate,
    DeterminantalInstance, InstanceCheck, SmoothnessCertificate, RETRY_CAP,
};
pub(crate) use lines::direction_system;
pub use lines::{
    classify_line, classify_numeric_line, lines_through_instance_point, lines_through_point, random_line_param,
    random_smooth_point, s_component_sigma, special_line, LineFamily, LineKind, NumLine, PointLines,
};
use num_traits::Zero;
pub use project::{project_from_node, NodeProjection};
pub use scroll::{
    lines_meet, random_scroll_pair, scroll_data, t_v_ruling, t_vdual_ruling, twisted_quartic_check, verify_scrolls,
    ScrollData, ScrollReport, TwistedQuarticReport,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::rational::{normalize_projective, primitive_integer_vector};
use crate::poly::{MPoly, QMatrix, Rational};

/// Row-major entries of a 3×3 matrix.
pub fn flatten(m: &QMatrix) -> Vec<Rational> {
    m.entries().to_vec()
}

pub fn unflatten(v: &[Rational]) -> QMatrix {
    assert_eq!(v.len(), 9, "End(V) has dimension 9");
    QMatrix::from_rows(v.chunks(3).map(<[Rational]>::to_vec).collect())
}

/// `tr(AB)`.
pub fn trace_pairing(a: &QMatrix, b: &QMatrix) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..3 {
        for j in 0..3 {
            acc += &a[(i, j)] * &b[(j, i)];
        }
    }
    acc
}

/// Outer product `u wᵀ`.
pub fn outer(u: &[Rational], w: &[Rational]) -> QMatrix {
    QMatrix::from_rows(u.iter().map(|a| w.iter().map(|b| a * b).collect()).collect())
}

/// Right kernel of a matrix.
pub fn kernel(m: &QMatrix) -> Vec<Vec<Rational>> {
    m.nullspace()
}

/// Left kernel `{u : uᵀ M = 0}`.
pub fn cokernel(m: &QMatrix) -> Vec<Vec<Rational>> {
    m.left_nullspace()
}

/// Basis of the column space.
pub fn image(m: &QMatrix) -> Vec<Vec<Rational>> {
    m.transpose().row_space_basis()
}

/// Scales a vector to a primitive integer vector (as rationals).
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    primitive_integer_vector(v).into_iter().map(Rational::from_integer).collect()
}

/// Linear subspace of `End(V)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndoSubspace {
    #[serde(with = "matrix_list")]
    pub basis: Vec<QMatrix>,
}

impl EndoSubspace {
    pub fn new(basis: Vec<QMatrix>) -> Result<Self> {
        if basis.iter().any(|m| m.rows() != 3 || m.cols() != 3) {
            return Err(Error::Precondition("End(V) elements must be 3x3".into()));
        }
        let s = EndoSubspace { basis };
        if s.flat_matrix().rank() != s.basis.len() {
            return Err(Error::DependentBasis);
        }
        Ok(s)
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Rows are the flattened basis matrices.
    pub fn flat_matrix(&self) -> QMatrix {
        if self.basis.is_empty() {
            return QMatrix::zeros(0, 9);
        }
        QMatrix::from_rows(self.basis.iter().map(flatten).collect())
    }

    /// `Σ cⱼ·basisⱼ`.
    pub fn element(&self, coords: &[Rational]) -> QMatrix {
        assert_eq!(coords.len(), self.basis.len());
        let mut acc = QMatrix::zeros(3, 3);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }

    /// Coordinates of `m` in the basis, if `m` lies in the span.
    pub fn coordinates(&self, m: &QMatrix) -> Option<Vec<Rational>> {
        self.flat_matrix().transpose().solve(&flatten(m))
    }

    pub fn contains(&self, m: &QMatrix) -> bool {
        self.coordinates(m).is_some()
    }

    /// Generic element `Σ xⱼ·basisⱼ` as a 3×3 matrix of linear forms.
    pub fn linear_matrix(&self) -> Vec<Vec<MPoly>> {
        (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| MPoly::linear(&self.basis.iter().map(|b| b[(i, j)].clone()).collect::<Vec<_>>()))
                    .collect()
            })
            .collect()
    }

    /// `det(Σ xⱼ·basisⱼ)`.
    pub fn determinant(&self) -> Result<MPoly> {
        crate::poly::poly_det(&self.linear_matrix())
    }
}

/// Orthogonal complement under `(A, B) = tr(AB)`.
pub fn trace_perp(s: &EndoSubspace) -> EndoSubspace {
    // tr(B M) = Σ B_ij M_ji, so the condition row for B is flatten(Bᵀ).
    let rows: Vec<Vec<Rational>> = s.basis.iter().map(|b| flatten(&b.transpose())).collect();
    let null = if rows.is_empty() {
        (0..9).map(|i| (0..9).map(|j| Rational::from_integer(i64::from(i == j).into())).collect()).collect()
    } else {
        QMatrix::from_rows(rows).nullspace()
    };
    EndoSubspace { basis: null.iter().map(|v| unflatten(&primitive(v))).collect() }
}

/// Line in projective space spanned by two points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjLine {
    #[serde(with = "crate::poly::rational::serde_str::vec2")]
    pub points: Vec<Vec<Rational>>,
    /// `p_i q_j − p_j q_i` for `i < j`, scaled to a primitive integer vector.
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub plucker: Vec<Rational>,
}

impl ProjLine {
    pub fn new(p: Vec<Rational>, q: Vec<Rational>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::VariableMismatch(p.len(), q.len()));
        }
        let plucker = plucker_coordinates(&p, &q);
        if plucker.iter().all(Zero::is_zero) {
            return Err(Error::DependentBasis);
        }
        Ok(ProjLine { points: vec![p, q], plucker: primitive(&plucker) })
    }

    pub fn ambient_dim(&self) -> usize {
        self.points[0].len()
    }

    /// `s·p + t·q`.
    pub fn point_at(&self, s: &Rational, t: &Rational) -> Vec<Rational> {
        self.points[0].iter().zip(&self.points[1]).map(|(a, b)| s * a + t * b).collect()
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        QMatrix::from_rows(vec![self.points[0].clone(), self.points[1].clone(), x.to_vec()]).rank() == 2
    }

    /// Restriction of `f` to the line as a binary form.
    pub fn restrict(&self, f: &MPoly) -> Result<MPoly> {
        f.restrict_linear(&self.points)
    }

    pub fn lies_on(&self, f: &MPoly) -> Result<bool> {
        Ok(self.restrict(f)?.is_zero())
    }

    pub fn same_line(&self, o: &ProjLine) -> bool {
        normalize_projective(&self.plucker) == normalize_projective(&o.plucker)
    }

    /// Whether the Plücker coordinates satisfy every three-term relation.
    pub fn plucker_relations_hold(&self) -> bool {
        let n = self.ambient_dim();
        let idx = pair_index(n);
        let p = |i: usize, j: usize| &self.plucker[idx[i][j]];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let r = p(i, j) * p(k, l) - p(i, k) * p(j, l) + p(i, l) * p(j, k);
                        if !r.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![usize::MAX; n]; n];
    let mut k = 0;
    for (i, row) in idx.iter_mut().enumerate() {
        for slot in &mut row[i + 1..] {
            *slot = k;
            k += 1;
        }
    }
    idx
}

pub fn plucker_coordinates(p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    let n = p.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(&p[i] * &q[j] - &p[j] * &q[i]);
        }
    }
    out
}

/// Serde for lists of 3×3 matrices as row-major rational-string arrays.
pub(crate) mod matrix_list {
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    use crate::poly::rational::{format_rational, parse_rational};
    use crate::poly::QMatrix;

    pub fn serialize<S: Serializer>(v: &[QMatrix], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<Vec<Vec<String>>> =
            v.iter().map(|m| m.to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect()).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<QMatrix>, D::Error> {
        let raw = Vec::<Vec<Vec<String>>>::deserialize(d)?;
        raw.iter()
            .map(|m| {
                let rows = m
                    .iter()
                    .map(|r| r.iter().map(|s| parse_rational(s).map_err(D::Error::custom)).collect())
                    .collect::<Result<Vec<Vec<_>>, _>>()?;
                if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
                    return Err(D::Error::custom("expected a 3x3 matrix"));
                }
                Ok(QMatrix::from_rows(rows))
            })
            .collect()
    }
}
