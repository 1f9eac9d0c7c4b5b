//! Determinants of polynomial matrices and Sylvester resultants.

use std::collections::HashMap;

use num_traits::Zero;

use super::linalg::QMatrix;
use super::mpoly::{Coeff, MPoly, Poly};
use super::rational::Rational;
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// Exact determinant of a square matrix of polynomials by Laplace expansion
/// along rows, memoized over the set of remaining columns.
pub fn poly_det<C: Coeff>(m: &[Vec<Poly<C>>]) -> Result<Poly<C>> {
    let n = m.len();
    if let Some(bad) = m.iter().find(|r| r.len() != n) {
        return Err(Error::NonSquare { rows: n, cols: bad.len() });
    }
    if n == 0 {
        return Ok(Poly::one(0));
    }
    let nvars = m[0][0].nvars();
    if m.iter().flatten().any(|p| p.nvars() != nvars) {
        return Err(Error::VariableMismatch(nvars, m.iter().flatten().map(Poly::nvars).max().unwrap_or(0)));
    }
    assert!(n < 64, "matrix too large for subset memo");
    let mut memo: HashMap<u64, Poly<C>> = HashMap::new();
    Ok(laplace(m, 0, (1u64 << n) - 1, nvars, &mut memo))
}

fn laplace<C: Coeff>(
    m: &[Vec<Poly<C>>],
    row: usize,
    cols: u64,
    nvars: usize,
    memo: &mut HashMap<u64, Poly<C>>,
) -> Poly<C> {
    let n = m.len();
    if row == n {
        return Poly::one(nvars);
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut acc = Poly::zero(nvars);
    let mut sign_pos = true;
    for c in 0..n {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let minor = laplace(m, row + 1, cols & !(1 << c), nvars, memo);
            if !minor.is_zero() {
                let t = entry * &minor;
                acc = if sign_pos { &acc + &t } else { &acc - &t };
            }
        }
        sign_pos = !sign_pos;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Sylvester matrix of `f` and `g` viewed as polynomials in `var` with
/// polynomial coefficients.
pub fn sylvester_matrix<C: Coeff>(f: &Poly<C>, g: &Poly<C>, var: usize) -> Result<Vec<Vec<Poly<C>>>> {
    let nv = f.nvars();
    if g.nvars() != nv {
        return Err(Error::VariableMismatch(nv, g.nvars()));
    }
    let (m, n) = match (f.degree_in(var), g.degree_in(var)) {
        (Some(m), Some(n)) if m + n > 0 => (m as usize, n as usize),
        _ => return Err(Error::ConstantPolynomials),
    };
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    let size = m + n;
    let mut rows = vec![vec![Poly::zero(nv); size]; size];
    for i in 0..n {
        for (k, c) in fc.iter().enumerate() {
            rows[i][i + m - k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in gc.iter().enumerate() {
            rows[n + i][i + n - k] = c.clone();
        }
    }
    Ok(rows)
}

/// Resultant of `f` and `g` with respect to `var`; the result no longer involves `var`.
pub fn resultant<C: Coeff>(f: &Poly<C>, g: &Poly<C>, var: usize) -> Result<Poly<C>> {
    if f.is_zero() || g.is_zero() {
        return Ok(Poly::zero(f.nvars()));
    }
    match (f.degree_in(var), g.degree_in(var)) {
        (Some(0), Some(0)) => return Err(Error::ConstantPolynomials),
        (Some(0), Some(n)) => return Ok(f.pow(n)),
        (Some(m), Some(0)) => return Ok(g.pow(m)),
        _ => {}
    }
    poly_det(&sylvester_matrix(f, g, var)?)
}

/// Resultant of two bivariate polynomials eliminating `var`, returned as a
/// univariate polynomial in the other variable.
pub fn resultant_bivariate(f: &MPoly, g: &MPoly, var: usize) -> Result<UPoly> {
    if f.nvars() != 2 || g.nvars() != 2 {
        return Err(Error::VariableMismatch(2, f.nvars().max(g.nvars())));
    }
    let r = resultant(f, g, var)?;
    let other = 1 - var;
    Ok(UPoly::from_mpoly(&r, other).expect("resultant involves only the remaining variable"))
}

/// Resultant of two univariate rational polynomials.
pub fn resultant_univariate(f: &UPoly, g: &UPoly) -> Result<Rational> {
    let (m, n) = match (f.degree(), g.degree()) {
        (Some(m), Some(n)) if m + n > 0 => (m, n),
        (None, _) | (_, None) => return Ok(Rational::zero()),
        _ => return Err(Error::ConstantPolynomials),
    };
    let size = m + n;
    let mut s = QMatrix::zeros(size, size);
    for i in 0..n {
        for k in 0..=m {
            s[(i, i + m - k)] = f.coeff(k);
        }
    }
    for i in 0..m {
        for k in 0..=n {
            s[(n + i, i + n - k)] = g.coeff(k);
        }
    }
    s.det()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::int;
    use num_traits::Signed;

    fn v(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn diagonal_det() {
        let z = MPoly::zero(3);
        let m = vec![
            vec![v(3, 0), z.clone(), z.clone()],
            vec![z.clone(), v(3, 1), z.clone()],
            vec![z.clone(), z.clone(), v(3, 2)],
        ];
        assert_eq!(poly_det(&m).unwrap(), &(&v(3, 0) * &v(3, 1)) * &v(3, 2));
    }

    #[test]
    fn resultant_of_linear_forms() {
        // res_x(x - a, x - b) = a - b.
        let x = v(3, 0);
        let f = &x - &v(3, 1);
        let g = &x - &v(3, 2);
        let r = resultant(&f, &g, 0).unwrap();
        assert_eq!(r, &v(3, 1) - &v(3, 2));
    }

    #[test]
    fn resultant_with_itself_vanishes() {
        let x = v(2, 0);
        let y = v(2, 1);
        let f = &(&x * &x) - &(&y * &y.scale(&int(3)));
        assert!(resultant_bivariate(&f, &f, 0).unwrap().is_zero());
    }

    #[test]
    fn univariate_resultant() {
        let f = UPoly::from_i64(&[-2, 0, 1]);
        let g = UPoly::from_i64(&[-3, 1]);
        // res(x^2 - 2, x - 3) = f(3) up to sign
        assert_eq!(resultant_univariate(&f, &g).unwrap().abs(), int(7));
    }
}
