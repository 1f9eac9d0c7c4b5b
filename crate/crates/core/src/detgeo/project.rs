use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::instance::{hessian, subsets, tangent_cone_split};
use super::{primitive, DeterminantalInstance, ProjLine};
use crate::error::{Error, Result};
use crate::poly::rational::projectively_equal;
use crate::poly::{MPoly, QMatrix, Rational};

/// Projection of `Y` from a node: `f(Ty) = y₄·A₂ + A₃` and the images of
/// the other five nodes on the curve `C₆ = {A₂ = A₃ = 0} ⊂ P³`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeProjection {
    pub node: usize,
    pub a2: MPoly,
    pub a3: MPoly,
    #[serde(with = "crate::poly::rational::serde_str::vec2")]
    pub images: Vec<Vec<Rational>>,
    pub a2_rank: usize,
    pub images_on_c6: bool,
    /// Rank of the 2×4 Jacobian of `(A₂, A₃)` at each image.
    pub jacobian_ranks: Vec<usize>,
    pub distinct: bool,
    /// No line joining two images lies on `{A₂ = 0}`.
    pub no_common_ruling: bool,
    /// Every four images span `P³`.
    pub no_four_coplanar: bool,
}

impl NodeProjection {
    pub fn all_pass(&self) -> bool {
        self.a2_rank == 4
            && self.images_on_c6
            && self.jacobian_ranks.iter().all(|&r| r <= 1)
            && self.distinct
            && self.no_common_ruling
            && self.no_four_coplanar
    }
}

/// `i` is a 0-based node index.
pub fn project_from_node(inst: &DeterminantalInstance, i: usize) -> Result<NodeProjection> {
    if i >= inst.nodes.len() {
        return Err(Error::Precondition(format!("node index {} out of range 1..={}", i + 1, inst.nodes.len())));
    }
    let (a1, a2, a3, t) = tangent_cone_split(&inst.cubic_y, &inst.nodes[i])?;
    if !a1.is_zero() {
        return Err(Error::Degenerate(format!("node {} is not a double point", i + 1)));
    }
    let tinv = t.inverse()?;
    let images: Vec<Vec<Rational>> = (0..inst.nodes.len())
        .filter(|&j| j != i)
        .map(|j| {
            let mut y = tinv.mul_vec(&inst.nodes[j]);
            y.pop();
            primitive(&y)
        })
        .collect();
    if images.iter().any(|y| y.iter().all(Zero::is_zero)) {
        return Err(Error::Degenerate("two nodes coincide".into()));
    }
    let grad2 = a2.gradient();
    let grad3 = a3.gradient();
    let jacobian_ranks = images
        .iter()
        .map(|y| {
            QMatrix::from_rows(vec![
                grad2.iter().map(|g| g.eval(y)).collect(),
                grad3.iter().map(|g| g.eval(y)).collect(),
            ])
            .rank()
        })
        .collect();
    let mut distinct = true;
    let mut no_common_ruling = true;
    for (a, b) in subsets(images.len(), 2).iter().map(|s| (&images[s[0]], &images[s[1]])) {
        if projectively_equal(a, b) {
            distinct = false;
            continue;
        }
        no_common_ruling &= !ProjLine::new(a.clone(), b.clone())?.lies_on(&a2)?;
    }
    let no_four_coplanar = subsets(images.len(), 4)
        .iter()
        .all(|s| QMatrix::from_rows(s.iter().map(|&k| images[k].clone()).collect()).rank() == 4);
    Ok(NodeProjection {
        node: i,
        a2_rank: hessian(&a2).rank(),
        images_on_c6: images.iter().all(|y| a2.eval(y).is_zero() && a3.eval(y).is_zero()),
        jacobian_ranks,
        distinct,
        no_common_ruling,
        no_four_coplanar,
        images,
        a2,
        a3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detgeo::make_instance;

    #[test]
    fn projection_from_each_node() {
        let inst = make_instance(1).unwrap();
        for i in 0..6 {
            let p = project_from_node(&inst, i).unwrap();
            assert!(p.all_pass(), "node {i}: {p:?}");
            assert_eq!(p.images.len(), 5);
            assert_eq!(p.a2.homogeneous_degree(), Some(2));
            assert_eq!(p.a3.homogeneous_degree(), Some(3));
        }
        assert!(project_from_node(&inst, 6).is_err());
    }
}
