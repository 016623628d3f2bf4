use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Result, ZhlError};

const TOL: f64 = 1e-12;

/// A Dirichlet character modulo `m`, stored as its value table on the
/// residues `0..m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u32,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct CharacterTable {
    modulus: u32,
    values: Vec<[f64; 2]>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl DirichletCharacter {
    pub fn new(modulus: u32, values: Vec<Complex64>) -> Result<Self> {
        if modulus == 0 {
            return Err(ZhlError::InvalidCharacter("modulus must be positive".into()));
        }
        if values.len() != modulus as usize {
            return Err(ZhlError::InvalidCharacter(format!(
                "expected {modulus} values, got {}",
                values.len()
            )));
        }
        let chi = Self { modulus, values };
        chi.validate()?;
        Ok(chi)
    }

    /// The principal character mod `m`.
    pub fn principal(modulus: u32) -> Result<Self> {
        if modulus == 0 {
            return Err(ZhlError::InvalidCharacter("modulus must be positive".into()));
        }
        let values = (0..modulus)
            .map(|r| {
                if gcd(r as u64, modulus as u64) == 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::new(modulus, values)
    }

    /// The non-principal character mod 4: 1, -1 on 1, 3 mod 4.
    pub fn chi4() -> Self {
        let v = [0.0, 1.0, 0.0, -1.0];
        Self::new(4, v.iter().map(|&x| Complex64::new(x, 0.0)).collect()).expect("valid chi_4")
    }

    /// The non-principal (quadratic) character mod 3.
    pub fn chi3() -> Self {
        let v = [0.0, 1.0, -1.0];
        Self::new(3, v.iter().map(|&x| Complex64::new(x, 0.0)).collect()).expect("valid chi_3")
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, n: i64) -> Complex64 {
        let m = self.modulus as i64;
        self.values[n.rem_euclid(m) as usize]
    }

    pub fn is_principal(&self) -> bool {
        (0..self.modulus as u64).all(|r| {
            let v = self.values[r as usize];
            if gcd(r, self.modulus as u64) == 1 {
                (v - 1.0).norm() < TOL
            } else {
                v.norm() < TOL
            }
        })
    }

    /// Checks the zero pattern, unit modulus and complete multiplicativity
    /// exhaustively over all residue pairs.
    pub fn validate(&self) -> Result<()> {
        let m = self.modulus as u64;
        for (r, v) in self.values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(ZhlError::InvalidCharacter(format!("non-finite value at {r}")));
            }
            let coprime = gcd(r as u64, m) == 1;
            if coprime && (v.norm() - 1.0).abs() > TOL {
                return Err(ZhlError::InvalidCharacter(format!("|chi({r})| != 1")));
            }
            if !coprime && v.norm() > TOL {
                return Err(ZhlError::InvalidCharacter(format!("chi({r}) != 0 but gcd({r}, {m}) > 1")));
            }
        }
        for a in 0..m {
            for b in 0..m {
                let lhs = self.values[((a * b) % m) as usize];
                let rhs = self.values[a as usize] * self.values[b as usize];
                if (lhs - rhs).norm() > 1e-10 {
                    return Err(ZhlError::InvalidCharacter(format!("chi({a}*{b}) != chi({a}) chi({b})")));
                }
            }
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let t: CharacterTable = serde_json::from_str(s)?;
        Self::new(t.modulus, t.values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        let t = CharacterTable {
            modulus: self.modulus,
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        };
        serde_json::to_string(&t).expect("character table serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_satisfy_invariants() {
        for chi in [
            DirichletCharacter::principal(1).unwrap(),
            DirichletCharacter::principal(3).unwrap(),
            DirichletCharacter::principal(4).unwrap(),
            DirichletCharacter::chi3(),
            DirichletCharacter::chi4(),
        ] {
            chi.validate().unwrap();
            for n in -20i64..40 {
                assert_eq!(chi.at(n), chi.at(n + chi.modulus() as i64));
            }
        }
        assert!(DirichletCharacter::principal(1).unwrap().is_principal());
        assert!(!DirichletCharacter::chi4().is_principal());
    }

    #[test]
    fn rejects_invalid_tables() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        // not multiplicative: chi(3) = 1 but chi(9 mod 4 = 1) ... use chi(3)^2 != chi(1)
        assert!(DirichletCharacter::new(4, vec![zero, one, zero, Complex64::new(0.0, 1.0)]).is_err());
        // nonzero at a non-unit
        assert!(DirichletCharacter::new(4, vec![zero, one, one, -one]).is_err());
        assert!(DirichletCharacter::new(4, vec![zero, one]).is_err());
        assert!(DirichletCharacter::new(0, vec![]).is_err());
    }

    #[test]
    fn complex_character_mod_5() {
        // generator 2 -> i
        let i = Complex64::new(0.0, 1.0);
        let v = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), i, -i, Complex64::new(-1.0, 0.0)];
        DirichletCharacter::new(5, v).unwrap();
    }

    #[test]
    fn json_round_trip_and_validation() {
        let chi = DirichletCharacter::chi4();
        let back = DirichletCharacter::from_json_str(&chi.to_json_string()).unwrap();
        assert_eq!(chi, back);
        let bad = r#"{"modulus": 3, "values": [[0,0],[1,0],[0,1]]}"#;
        assert!(matches!(DirichletCharacter::from_json_str(bad), Err(ZhlError::InvalidCharacter(_))));
        assert!(DirichletCharacter::from_json_str("{").is_err());
    }
}
