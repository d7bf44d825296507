//! Exact arithmetic in `Q(ζ_L)` with integer coordinates on the power basis
//! `1, ζ, …, ζ^(φ(L)-1)`.

use std::sync::Arc;

use num_integer::Integer;

/// Integer coefficient vectors, lowest degree first.
type Poly = Vec<i64>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Exact division by a monic polynomial; panics on a nonzero remainder.
fn div_exact(num: &Poly, den: &Poly) -> Poly {
    let mut rem = num.clone();
    let dl = den.len();
    assert_eq!(den[dl - 1], 1, "divisor must be monic");
    if rem.len() < dl {
        return vec![0];
    }
    let mut quot = vec![0; rem.len() - dl + 1];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dl - 1];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "division is not exact");
    trim(quot)
}

/// The `n`-th cyclotomic polynomial, from `x^n - 1 = Π_{d | n} Φ_d`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut num = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = div_exact(&num, &cyclotomic_polynomial(d));
    }
    num
}

/// The field `Q(ζ_L)` with a table of reduced powers of `ζ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicField {
    order: u32,
    degree: usize,
    powers: Vec<Vec<i64>>,
}

impl CyclotomicField {
    pub fn new(order: u32) -> Arc<Self> {
        assert!(order > 0);
        let phi = cyclotomic_polynomial(order);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0; degree];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by ζ and use ζ^degree = -Σ φ_i ζ^i
            let top = cur[degree - 1];
            let mut next = vec![0; degree];
            next[1..degree].copy_from_slice(&cur[..degree - 1]);
            for i in 0..degree {
                next[i] -= top * phi[i];
            }
            cur = next;
        }
        assert_eq!(cur[0], 1, "ζ^L must reduce to 1");
        Arc::new(CyclotomicField {
            order,
            degree,
            powers,
        })
    }

    /// Smallest field containing the `m`-th roots of unity and `ω = ζ_3`.
    pub fn for_root_order(m: u32) -> Arc<Self> {
        CyclotomicField::new(m.lcm(&3))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// An element of a [`CyclotomicField`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    coords: Vec<i64>,
}

impl CyclotomicNumber {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CyclotomicNumber {
            field: field.clone(),
            coords: vec![0; field.degree],
        }
    }

    pub fn integer(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let mut z = Self::zero(field);
        z.coords[0] = k;
        z
    }

    /// `ζ_L^k`.
    pub fn root_power(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let l = field.order as i64;
        CyclotomicNumber {
            field: field.clone(),
            coords: field.powers[k.rem_euclid(l) as usize].clone(),
        }
    }

    /// `ζ_m^k` for `m | L`.
    pub fn root_of_order(field: &Arc<CyclotomicField>, m: u32, k: i64) -> Self {
        assert!(
            field.order.is_multiple_of(m),
            "ζ_{m} is not in Q(ζ_{})",
            field.order
        );
        Self::root_power(field, k * (field.order / m) as i64)
    }

    /// `ω^k` with `ω = ζ_3`.
    pub fn omega(field: &Arc<CyclotomicField>, k: i64) -> Self {
        Self::root_of_order(field, 3, k)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The value as a rational integer, if all non-constant coordinates
    /// vanish.
    pub fn to_integer(&self) -> Option<i64> {
        self.coords[1..]
            .iter()
            .all(|&c| c == 0)
            .then_some(self.coords[0])
    }

    /// Complex conjugate, `ζ ↦ ζ^(-1)`.
    pub fn conj(&self) -> Self {
        let l = self.field.order as usize;
        let mut out = Self::zero(&self.field);
        for (i, &c) in self.coords.iter().enumerate() {
            if c != 0 {
                for (o, &p) in out.coords.iter_mut().zip(&self.field.powers[(l - i) % l]) {
                    *o += c * p;
                }
            }
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        CyclotomicNumber {
            field: self.field.clone(),
            coords: self.coords.iter().map(|&c| c * k).collect(),
        }
    }
}

impl std::ops::Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert!(Arc::ptr_eq(&self.field, &rhs.field) || self.field == rhs.field);
        CyclotomicNumber {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::AddAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn add_assign(&mut self, rhs: &CyclotomicNumber) {
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}

impl std::ops::Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert!(Arc::ptr_eq(&self.field, &rhs.field) || self.field == rhs.field);
        let field = &self.field;
        let l = field.order as usize;
        let mut out = CyclotomicNumber::zero(field);
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coords.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                for (o, &p) in out.coords.iter_mut().zip(&field.powers[(i + j) % l]) {
                    *o += a * b * p;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // degree φ(n)
        assert_eq!(cyclotomic_polynomial(105).len() - 1, 48);
    }

    #[test]
    fn sums_of_roots() {
        for l in [3u32, 6, 12, 15, 24, 30] {
            let f = CyclotomicField::new(l);
            // Σ_k ζ^k = 0 and ζ^L = 1
            let mut s = CyclotomicNumber::zero(&f);
            for k in 0..l as i64 {
                s += &CyclotomicNumber::root_power(&f, k);
            }
            assert!(s.is_zero(), "L = {l}");
            let z = CyclotomicNumber::root_power(&f, 1);
            let mut p = CyclotomicNumber::integer(&f, 1);
            for _ in 0..l {
                p = &p * &z;
            }
            assert_eq!(p.to_integer(), Some(1));
        }
    }

    #[test]
    fn omega_identities() {
        let f = CyclotomicField::for_root_order(4);
        assert_eq!(f.order(), 12);
        let w = CyclotomicNumber::omega(&f, 1);
        let w2 = CyclotomicNumber::omega(&f, 2);
        assert_eq!(
            (&(&w + &w2) + &CyclotomicNumber::integer(&f, 1)).to_integer(),
            Some(0)
        );
        assert_eq!(w.conj(), w2);
        assert_eq!((&w * &w.conj()).to_integer(), Some(1));
        assert_eq!(w.to_integer(), None);
        let minus_one = CyclotomicNumber::root_of_order(&f, 2, 1);
        assert_eq!(minus_one.to_integer(), Some(-1));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn root_powers_multiply(l in 1u32..40, a in -50i64..50, b in -50i64..50) {
                let f = CyclotomicField::new(l);
                let za = CyclotomicNumber::root_power(&f, a);
                let zb = CyclotomicNumber::root_power(&f, b);
                prop_assert_eq!(&za * &zb, CyclotomicNumber::root_power(&f, a + b));
                prop_assert_eq!(za.conj(), CyclotomicNumber::root_power(&f, -a));
            }
        }
    }
}
