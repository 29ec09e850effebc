//! Univariate polynomials with coefficients in a [`FieldTower`].

use std::fmt;

use crate::error::{Error, Result};
use crate::field_tower::{FieldElement, FieldTower};

/// Coefficients low degree first, with no trailing zeros. The zero
/// polynomial has an empty coefficient list and degree `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(FieldElement::ONE)
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(vec![c])
    }

    /// `X^n`
    pub fn monomial(c: FieldElement, n: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; n + 1];
        coeffs[n] = c;
        Poly::new(coeffs)
    }

    /// `X^n - eta`
    pub fn binomial(tower: &FieldTower, n: usize, eta: FieldElement) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; n + 1];
        coeffs[0] = tower.neg(eta);
        coeffs[n] = tower.add(coeffs[n], FieldElement::ONE);
        Poly::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `X^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn add(&self, other: &Poly, tower: &FieldTower) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|i| tower.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, tower: &FieldTower) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|i| tower.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: FieldElement, tower: &FieldTower) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| tower.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, tower: &FieldTower) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = tower.add(out[i + j], tower.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FieldElement, tower: &FieldTower) -> FieldElement {
        self.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| tower.add(tower.mul(acc, x), c))
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly, tower: &FieldTower) -> Result<(Poly, Poly)> {
        let d = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = tower.inv(divisor.coeffs[d])?;
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= d) else {
            return Ok((Poly::zero(), self.clone()));
        };
        let mut quot = vec![FieldElement::ZERO; n - d + 1];
        for top in (d..=n).rev() {
            let t = tower.mul(rem[top], lead_inv);
            if t.is_zero() {
                continue;
            }
            quot[top - d] = t;
            for (i, &c) in divisor.coeffs.iter().enumerate() {
                let k = top - d + i;
                rem[k] = tower.sub(rem[k], tower.mul(t, c));
            }
        }
        rem.truncate(d);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Whether `self` divides `f`.
    pub fn divides(&self, f: &Poly, tower: &FieldTower) -> Result<bool> {
        Ok(f.div_rem(self, tower)?.1.is_zero())
    }

    /// Whether every coefficient is fixed by `x -> x^q`.
    pub fn coefficients_in_subfield(&self, tower: &FieldTower) -> bool {
        self.coeffs.iter().all(|&c| tower.in_base(c))
    }

    /// The monic polynomial `prod (X - root)`.
    pub fn from_roots(roots: &[FieldElement], tower: &FieldTower) -> Poly {
        roots
            .iter()
            .fold(Poly::one(), |acc, &r| acc.mul(&Poly::new(vec![tower.neg(r), FieldElement::ONE]), tower))
    }

    /// Space-separated coefficient encodings, low degree first.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.enc().to_string()).collect();
        parts.join(" ")
    }

    pub fn parse(text: &str, tower: &FieldTower) -> Result<Poly> {
        let coeffs = text
            .split_whitespace()
            .map(|tok| {
                let v: u64 = tok.parse().map_err(|_| Error::Parse(format!("bad coefficient {tok:?}")))?;
                tower.element(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }
}

/// Human-readable form like `X^2 + 1*X + 2`, with encodings as coefficients.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.enc()) {
                (0, v) => write!(f, "{v}")?,
                (1, 1) => write!(f, "X")?,
                (1, v) => write!(f, "{v}*X")?,
                (i, 1) => write!(f, "X^{i}")?,
                (i, v) => write!(f, "{v}*X^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod test {
    use super::*;

    fn p(tower: &FieldTower, c: &[u32]) -> Poly {
        Poly::new(c.iter().map(|&x| tower.element(x as u64).unwrap()).collect())
    }

    #[test]
    fn zero_degree_is_none() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::new(vec![FieldElement::ZERO; 3]).degree(), None);
        assert_eq!(Poly::one().degree(), Some(0));
    }

    #[test]
    fn eval_examples() {
        let t = FieldTower::new(3, 1).unwrap();
        let x2_plus_1 = p(&t, &[1, 0, 1]);
        assert_eq!(x2_plus_1.eval(t.alpha(), &t), FieldElement::ZERO);
        let f = p(&t, &[2, 1, 1]);
        assert_eq!(f.eval(FieldElement::ZERO, &t), f.coeff(0));
        let t2 = FieldTower::new(2, 1).unwrap();
        let x1 = p(&t2, &[1, 1]);
        assert_eq!(x1.mul(&x1, &t2), p(&t2, &[1, 0, 1]));
    }

    #[test]
    fn from_roots_examples() {
        let t = FieldTower::new(3, 1).unwrap();
        assert_eq!(Poly::from_roots(&[FieldElement::ONE], &t), p(&t, &[2, 1]));
        assert_eq!(Poly::from_roots(&[], &t), Poly::one());
        let a = t.alpha();
        let roots = [t.pow_signed(a, -1).unwrap(), FieldElement::ONE, a];
        let g = Poly::from_roots(&roots, &t);
        assert_eq!(g, p(&t, &[2, 1, 2, 1]));
        assert!(g.coefficients_in_subfield(&t));

        let t2 = FieldTower::new(2, 1).unwrap();
        let a = t2.alpha();
        assert_eq!(Poly::from_roots(&[a, t2.pow(a, 2)], &t2), p(&t2, &[1, 1, 1]));
    }

    #[test]
    fn divides_examples() {
        for q in [2u64, 3, 4, 5, 9] {
            let t = FieldTower::for_order(q).unwrap();
            let n = q as usize + 1;
            let x_minus_1 = Poly::binomial(&t, 1, FieldElement::ONE);
            assert!(x_minus_1.divides(&Poly::binomial(&t, n, FieldElement::ONE), &t).unwrap());
        }
        let t = FieldTower::new(3, 1).unwrap();
        let g = p(&t, &[2, 1, 2, 1]);
        let f = Poly::binomial(&t, 4, FieldElement::ONE);
        let (quot, rem) = f.div_rem(&g, &t).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot, p(&t, &[1, 1]));

        let t2 = FieldTower::new(2, 1).unwrap();
        assert!(p(&t2, &[1, 1, 1]).divides(&Poly::binomial(&t2, 3, FieldElement::ONE), &t2).unwrap());
        assert!(!p(&t2, &[1, 1, 1]).divides(&Poly::binomial(&t2, 4, FieldElement::ONE), &t2).unwrap());
        assert_eq!(Poly::zero().divides(&f, &t), Err(Error::DivisionByZero));
    }

    #[test]
    fn subfield_check() {
        let t = FieldTower::new(3, 1).unwrap();
        assert!(Poly::one().coefficients_in_subfield(&t));
        let x_minus_omega = Poly::new(vec![t.neg(t.omega()), FieldElement::ONE]);
        assert!(!x_minus_omega.coefficients_in_subfield(&t));
    }

    #[test]
    fn text_round_trip_and_display() {
        let t = FieldTower::new(3, 1).unwrap();
        let g = p(&t, &[2, 1, 1]);
        assert_eq!(g.to_text(), "2 1 1");
        assert_eq!(Poly::parse("2 1 1", &t).unwrap(), g);
        assert_eq!(g.to_string(), "X^2 + X + 2");
        assert!(Poly::parse("2 x", &t).is_err());
        assert!(Poly::parse("9", &t).is_err());
    }
}
