use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gram matrix of the transferred lattice in the basis `(g, τ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub gram: [[i64; 2]; 2],
    pub det: i64,
    /// `(τ, τ) = 0`, which happens exactly when `t = a²`.
    pub degenerate: bool,
}

/// Transfers `K = [[3, a], [a, t]]` (basis `h², T`) to `[[6, 2a], [2a, a² − t]]`.
///
/// Writing `T = (a/3)h² + z` with `z ⊥ h²`, the class `τ` is `α(T)` with
/// `g = α(h²)`, `(g,g) = 2·3` and `(α z₁, α z₂) = −⟨z₁, z₂⟩`.
pub fn transfer_k_to_j(k: [[i64; 2]; 2]) -> Result<Transfer> {
    if k[0][0] != 3 {
        return Err(Error::InvalidTransfer(format!("expected ⟨h²,h²⟩ = 3, found {}", k[0][0])));
    }
    if k[0][1] != k[1][0] {
        return Err(Error::InvalidTransfer("K must be symmetric".into()));
    }
    let (a, t) = (k[0][1], k[1][1]);
    let tt = a
        .checked_mul(a)
        .and_then(|a2| a2.checked_sub(t))
        .ok_or_else(|| Error::InvalidTransfer("entries too large".into()))?;
    let gram = [[6, 2 * a], [2 * a, tt]];
    let det = i64::try_from(BigInt::from(6) * tt - BigInt::from(4) * a * a)
        .map_err(|_| Error::InvalidTransfer("determinant overflow".into()))?;
    Ok(Transfer { gram, det, degenerate: tt == 0 })
}

/// Discriminants `d` of special cubic fourfolds: `d ≡ 0, 2 (mod 6)` and `d > 6`.
pub fn special_discriminant(d: i64) -> bool {
    d > 6 && matches!(d.rem_euclid(6), 0 | 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k12_to_j12() {
        let t = transfer_k_to_j([[3, 3], [3, 7]]).unwrap();
        assert_eq!(t.gram, [[6, 6], [6, 2]]);
        assert_eq!(t.det, -24);
        let u = transfer_k_to_j([[3, 4], [4, 10]]).unwrap();
        assert_eq!((u.gram, u.det), ([[6, 8], [8, 6]], -28));
        assert!(transfer_k_to_j([[3, 2], [2, 4]]).unwrap().degenerate);
        assert!(transfer_k_to_j([[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn discriminants() {
        assert!(special_discriminant(12) && special_discriminant(14) && special_discriminant(8));
        assert!(!special_discriminant(6) && !special_discriminant(7) && !special_discriminant(9));
    }
}
