//! Classical Macaulay resultant of `n+1` homogeneous forms in `n+1` variables.

use num_traits::Zero;

use super::linalg::{det_fraction_free, QMatrix};
use super::mpoly::MPoly;
use super::rational::Rational;
use crate::error::{Error, Result};
use crate::par::Exec;

/// All exponent vectors of total degree `d` in `n` variables, lex-descending.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(n, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Details of one Macaulay evaluation.
#[derive(Clone, Debug)]
pub struct MacaulayData {
    pub critical_degree: u32,
    pub size: usize,
    pub minor_size: usize,
    pub det_m: Rational,
    pub det_minor: Rational,
    /// Variable priority used to assign rows.
    pub order: Vec<usize>,
    /// Index of the coordinate change applied before building the matrix (0 = none).
    pub coordinate_change: usize,
}

impl MacaulayData {
    pub fn resultant(&self) -> Rational {
        &self.det_m / &self.det_minor
    }
}

/// Builds the Macaulay matrix for one variable priority.
pub fn macaulay_matrices(forms: &[MPoly], order: &[usize]) -> Result<(QMatrix, QMatrix, u32)> {
    let n = forms.len();
    let degs: Vec<u32> = forms
        .iter()
        .map(|f| {
            if f.nvars() != n {
                return Err(Error::VariableMismatch(f.nvars(), n));
            }
            f.homogeneous_degree().ok_or(Error::NotHomogeneous)
        })
        .collect::<Result<_>>()?;
    let crit: u32 = degs.iter().map(|d| d - 1).sum::<u32>() + 1;
    let monos = monomials_of_degree(n, crit);
    let index: std::collections::HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let size = monos.len();
    let mut m = QMatrix::zeros(size, size);
    let mut extraneous = Vec::new();
    for (r, alpha) in monos.iter().enumerate() {
        let reduced: Vec<usize> = order.iter().copied().filter(|&i| alpha[i] >= degs[i]).collect();
        let i = reduced[0];
        if reduced.len() >= 2 {
            extraneous.push(r);
        }
        let mut shift = alpha.clone();
        shift[i] -= degs[i];
        for (e, c) in forms[i].terms() {
            let target: Vec<u32> = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
            m[(r, index[&target])] = c.clone();
        }
    }
    let k = extraneous.len();
    let mut minor = QMatrix::zeros(k, k);
    for (a, &r) in extraneous.iter().enumerate() {
        for (b, &c) in extraneous.iter().enumerate() {
            minor[(a, b)] = m[(r, c)].clone();
        }
    }
    Ok((m, minor, crit))
}

/// Macaulay resultant: zero iff the forms have a common projective zero.
///
/// When the extraneous minor vanishes for every variable priority, the forms
/// are moved by a few deterministic unimodular coordinate changes, which
/// preserve both the existence of common zeros and the nonvanishing of the
/// resultant.
pub fn macaulay_resultant_data(forms: &[MPoly], exec: Exec) -> Result<MacaulayData> {
    let n = forms.len();
    let mut det_nonzero = false;
    for change in 0..=COORDINATE_CHANGES {
        let moved;
        let fs = if change == 0 {
            forms
        } else {
            moved = change_coordinates(forms, change)?;
            &moved[..]
        };
        for order in priorities(n) {
            let (m, minor, crit) = macaulay_matrices(fs, &order)?;
            let det_m = det_fraction_free(&m, exec)?;
            det_nonzero |= !det_m.is_zero();
            let det_minor =
                if minor.rows() == 0 { Rational::from_integer(1.into()) } else { det_fraction_free(&minor, exec)? };
            if !det_minor.is_zero() {
                return Ok(MacaulayData {
                    critical_degree: crit,
                    size: m.rows(),
                    minor_size: minor.rows(),
                    det_m,
                    det_minor,
                    order,
                    coordinate_change: change,
                });
            }
        }
        if det_nonzero {
            break;
        }
    }
    Err(Error::MacaulayInconclusive { det_nonzero })
}

const COORDINATE_CHANGES: usize = 3;

/// Cyclic rotations of the variable priority.
fn priorities(n: usize) -> Vec<Vec<usize>> {
    (0..n.max(1)).map(|s| (0..n).map(|i| (i + s) % n).collect()).collect()
}

/// Substitutes `x_i -> x_i + k·Σ_{j>i} (j-i)(j-i+1) x_j`, an upper unitriangular change.
fn change_coordinates(forms: &[MPoly], k: usize) -> Result<Vec<MPoly>> {
    let n = forms.len();
    let subs: Vec<MPoly> = (0..n)
        .map(|i| {
            let coeffs: Vec<Rational> = (0..n)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Equal => Rational::from_integer(1.into()),
                    std::cmp::Ordering::Greater => Rational::from_integer(((k * (j - i) * (j - i + 1)) as i64).into()),
                    std::cmp::Ordering::Less => Rational::zero(),
                })
                .collect();
            MPoly::linear(&coeffs)
        })
        .collect();
    forms.iter().map(|f| f.compose(&subs)).collect()
}

pub fn macaulay_resultant(forms: &[MPoly]) -> Result<Rational> {
    Ok(macaulay_resultant_data(forms, Exec::default())?.resultant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::int;

    fn x(i: usize) -> MPoly {
        MPoly::var(4, i)
    }

    #[test]
    fn squares_are_coprime() {
        let forms: Vec<MPoly> = (0..4).map(|i| &x(i) * &x(i)).collect();
        let data = macaulay_resultant_data(&forms, Exec::Sequential).unwrap();
        assert_eq!(data.size, 56);
        assert!(!data.resultant().is_zero());
    }

    #[test]
    fn fermat_smooth_cayley_singular() {
        let fermat = (0..4).fold(MPoly::zero(4), |acc, i| &acc + &x(i).pow(3));
        assert!(!macaulay_resultant(&fermat.gradient()).unwrap().is_zero());
        let cayley = &(&(&(&x(0) * &x(1)) * &x(2)) + &(&(&x(0) * &x(1)) * &x(3)))
            + &(&(&(&x(0) * &x(2)) * &x(3)) + &(&(&x(1) * &x(2)) * &x(3)));
        let node = [int(1), int(0), int(0), int(0)];
        assert!(cayley.gradient().iter().all(|g| g.eval(&node).is_zero()));
        match macaulay_resultant_data(&cayley.gradient(), Exec::Sequential) {
            Ok(d) => assert!(d.resultant().is_zero()),
            Err(Error::MacaulayInconclusive { det_nonzero }) => assert!(!det_nonzero),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn linear_forms_reduce_to_determinant() {
        let a = QMatrix::from_i64(&[&[2, 1, 0], &[0, 3, -1], &[1, 0, 4]]);
        let forms: Vec<MPoly> = (0..3).map(|i| MPoly::linear(&a.row(i))).collect();
        let r = macaulay_resultant(&forms).unwrap();
        assert_eq!(r.clone() * r, a.det().unwrap() * a.det().unwrap());
    }
}
