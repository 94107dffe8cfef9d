//! Univariate polynomials over exact rationals, low-degree first.
//!
//! Certificate predicates are differences of coordinate or squared-distance
//! polynomials; with trajectory degree bounded by `s` everything here stays
//! at degree <= 2s, so classical O(n^2) arithmetic is the right tool.

use super::Rat;
use num::traits::{Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    /// Coefficients, index = power; empty means the zero polynomial and the
    /// last entry is always nonzero otherwise.
    coeffs: Vec<Rat>,
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{}", c),
                1 => format!("{}*t", c),
                _ => format!("{}*t^{}", c, i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c0 + c1 t + c2 t^2 + ...`, trailing zeros trimmed.
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + super::rat_to_f64(c);
        }
        acc
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(Rat::zero);
            out.push(a + b);
        }
        QPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(Rat::zero);
            out.push(a - b);
        }
        QPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn scale(&self, k: &Rat) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from_integer(i.into()))
            .collect();
        QPoly::from_coeffs(out)
    }

    /// Euclidean division; panics on zero divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dlead = divisor.leading().unwrap().clone();
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(ddeg)];
        while rem.len() > ddeg && !rem.is_empty() {
            let rdeg = rem.len() - 1;
            let factor = rem.last().unwrap() / &dlead;
            if !factor.is_zero() {
                let shift = rdeg - ddeg;
                quot[shift] = factor.clone();
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    let v = &factor * dc;
                    rem[shift + i] -= v;
                }
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    /// Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => self.scale(&l.clone().recip()),
        }
    }

    /// Squarefree part (product of distinct irreducible factors), monic.
    pub fn squarefree_part(&self) -> QPoly {
        if self.is_zero() || self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        if g.is_constant() {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Yun's squarefree decomposition: returns monic pairwise-coprime factors
    /// with their multiplicities, so `self ~ prod f_i^{m_i}`.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        if self.is_zero() || self.is_constant() {
            return Vec::new();
        }
        let f = self.monic();
        let df = f.derivative();
        let d = f.gcd(&df);
        if d.is_constant() {
            return vec![(f, 1)];
        }
        let mut out = Vec::new();
        let mut b = f.div_rem(&d).0;
        let mut c = df.div_rem(&d).0;
        let mut dd = c.sub(&b.derivative());
        let mut i = 1usize;
        while !b.is_constant() {
            let a = b.gcd(&dd);
            if !a.is_constant() {
                out.push((a.monic(), i));
            }
            b = b.div_rem(&a).0;
            c = dd.div_rem(&a).0;
            dd = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Sign of the polynomial at a rational point.
    pub fn sign_at(&self, t: &Rat) -> i32 {
        let v = self.eval(t);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }
}
