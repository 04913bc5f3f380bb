//! Arithmetic in the prime field `F = GF(q)` and its quadratic extension
//! `E = GF(q²) = F(s)`, `s² = eps`.
//!
//! Elements of `E` are stored as a coefficient pair `re + im·s`. The Galois
//! conjugation `x ↦ x^q` sends `s` to `-s`, so the fixed field is exactly the
//! set of elements with `im = 0`.
//!
//! Every [`EScalar`] carries its field parameters, which keeps the operator
//! overloads (`a * b + c`) free of an explicit context argument. Mixing
//! elements of different fields is a logic error and is caught by debug
//! assertions.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported characteristic. Square roots and norm equations are
/// solved by scanning all of `E`, so `q` is kept small.
pub const MAX_Q: u32 = 251;

/// The base field `GF(q)` together with the non-residue `eps` defining `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldParams {
    q: u16,
    eps: u16,
}

/// Builds the field parameters for an odd prime `q`, choosing the smallest
/// quadratic non-residue as `eps`.
pub fn make_fields(q: u32) -> Result<FieldParams> {
    FieldParams::new(q)
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

impl FieldParams {
    pub fn new(q: u32) -> Result<Self> {
        if q == 2 || !is_prime(q) {
            return Err(Error::Parameter(format!("q = {q} is not an odd prime")));
        }
        if q > MAX_Q {
            return Err(Error::Parameter(format!(
                "q = {q} exceeds the supported maximum {MAX_Q}"
            )));
        }
        let eps = (2..q)
            .find(|&a| pow_mod(a as u64, ((q - 1) / 2) as u64, q as u64) == (q - 1) as u64)
            .expect("every odd prime field has a non-residue");
        Ok(FieldParams {
            q: q as u16,
            eps: eps as u16,
        })
    }

    pub fn q(&self) -> u32 {
        self.q as u32
    }

    pub fn eps(&self) -> u32 {
        self.eps as u32
    }

    /// Number of elements of `E`.
    pub fn order_e(&self) -> usize {
        self.q as usize * self.q as usize
    }

    /// The element `re + im·s`; coefficients are reduced mod `q`.
    pub fn elem(&self, re: i64, im: i64) -> EScalar {
        let q = self.q as i64;
        EScalar {
            re: re.rem_euclid(q) as u16,
            im: im.rem_euclid(q) as u16,
            q: self.q,
            eps: self.eps,
        }
    }

    /// An element of the base field `F`.
    pub fn from_f(&self, a: i64) -> EScalar {
        self.elem(a, 0)
    }

    pub fn zero(&self) -> EScalar {
        self.elem(0, 0)
    }

    pub fn one(&self) -> EScalar {
        self.elem(1, 0)
    }

    /// The generator `s` of `E` over `F`.
    pub fn s(&self) -> EScalar {
        self.elem(0, 1)
    }

    /// The element with scan index `k = re + q·im`, `0 ≤ k < q²`.
    pub fn from_index(&self, k: usize) -> EScalar {
        let q = self.q as usize;
        self.elem((k % q) as i64, (k / q) as i64)
    }

    /// All elements of `E` in scan order (`re` fastest).
    pub fn elements(&self) -> impl Iterator<Item = EScalar> + '_ {
        (0..self.order_e()).map(move |k| self.from_index(k))
    }

    /// All elements of `F` in increasing order.
    pub fn base_elements(&self) -> impl Iterator<Item = EScalar> + '_ {
        (0..self.q as i64).map(move |a| self.from_f(a))
    }

    /// Whether `a ∈ F` is a square in `F`.
    pub fn is_square_in_f(&self, a: EScalar) -> bool {
        debug_assert!(a.is_rational());
        let q = self.q as u64;
        let a = a.re as u64;
        a == 0 || pow_mod(a, (q - 1) / 2, q) == 1
    }

    /// `+1` when `-1` is a square in `F`, else `-1`.
    pub fn epsilon_f(&self) -> i8 {
        if self.is_square_in_f(-self.one()) {
            1
        } else {
            -1
        }
    }

    /// `+1` when `-2` is a square in `F`, else `-1`.
    pub fn tau_f(&self) -> i8 {
        if self.is_square_in_f(self.from_f(-2)) {
            1
        } else {
            -1
        }
    }

    /// Returns `t` with `t² = x`, the first hit in scan order.
    pub fn sqrt_in_e(&self, x: EScalar) -> Option<EScalar> {
        self.elements().find(|&t| t * t == x)
    }

    /// Returns `t` with `N(t) = a` for `a ∈ F^×`.
    pub fn solve_norm(&self, a: EScalar) -> Result<EScalar> {
        if !a.is_rational() || a.is_zero() {
            return Err(Error::Parameter(format!(
                "norm equation needs a nonzero element of F, got {a}"
            )));
        }
        self.elements()
            .find(|t| t.norm() == a)
            .ok_or_else(|| Error::Internal(format!("norm map missed {a}")))
    }

    /// Hilbert 90: for `N(u) = 1` returns `d ≠ 0` with `u = d / conj(d)`.
    pub fn hilbert90(&self, u: EScalar) -> Result<EScalar> {
        if u.norm() != self.one() {
            return Err(Error::Parameter(format!("N({u}) = {} ≠ 1", u.norm())));
        }
        if u == self.one() {
            Ok(self.one())
        } else if u == -self.one() {
            Ok(self.s())
        } else {
            Ok(self.one() + u)
        }
    }

    /// Elements of norm one, in scan order. There are `q + 1` of them.
    pub fn norm_one(&self) -> Vec<EScalar> {
        self.elements().filter(|t| t.norm() == self.one()).collect()
    }

    /// Parses the textual encoding `a` or `a+b*s`.
    pub fn parse_scalar(&self, text: &str) -> Result<EScalar> {
        let text = text.trim();
        let coeff = |t: &str| -> Result<i64> {
            let v: u32 = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {t:?} in {text:?}")))?;
            if v >= self.q() {
                return Err(Error::Parse(format!(
                    "coefficient {v} outside 0..{} in {text:?}",
                    self.q
                )));
            }
            Ok(v as i64)
        };
        match text.split_once('+') {
            None => Ok(self.from_f(coeff(text)?)),
            Some((re, rest)) => {
                let im = rest
                    .strip_suffix("*s")
                    .ok_or_else(|| Error::Parse(format!("expected `a+b*s`, got {text:?}")))?;
                Ok(self.elem(coeff(re)?, coeff(im)?))
            }
        }
    }
}

/// An element `re + im·s` of `E = GF(q²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EScalar {
    re: u16,
    im: u16,
    q: u16,
    eps: u16,
}

impl EScalar {
    pub fn re(self) -> u32 {
        self.re as u32
    }

    pub fn im(self) -> u32 {
        self.im as u32
    }

    pub fn field(self) -> FieldParams {
        FieldParams {
            q: self.q,
            eps: self.eps,
        }
    }

    /// Scan index `re + q·im`.
    pub fn index(self) -> usize {
        self.re as usize + self.q as usize * self.im as usize
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_one(self) -> bool {
        self.re == 1 && self.im == 0
    }

    /// Whether the element lies in `F`.
    pub fn is_rational(self) -> bool {
        self.im == 0
    }

    /// Galois conjugation `a + b·s ↦ a − b·s`.
    pub fn conj(self) -> Self {
        EScalar {
            im: (self.q - self.im) % self.q,
            ..self
        }
    }

    /// `x · conj(x)`, an element of `F`.
    pub fn norm(self) -> Self {
        self * self.conj()
    }

    /// `x + conj(x)`, an element of `F`.
    pub fn trace(self) -> Self {
        self + self.conj()
    }

    pub fn inv(self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let q = self.q as u64;
        let n = self.norm().re as u64;
        let n_inv = pow_mod(n, q - 2, q);
        let f = self.field();
        let c = self.conj();
        Some(f.elem(
            (c.re as u64 * n_inv % q) as i64,
            (c.im as u64 * n_inv % q) as i64,
        ))
    }

    pub fn checked_div(self, rhs: Self) -> Option<Self> {
        rhs.inv().map(|r| self * r)
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut acc = self.field().one();
        let mut base = self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Display for EScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}*s", self.re, self.im)
        }
    }
}

impl Add for EScalar {
    type Output = EScalar;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.q, rhs.q);
        EScalar {
            re: (self.re + rhs.re) % self.q,
            im: (self.im + rhs.im) % self.q,
            ..self
        }
    }
}

impl Sub for EScalar {
    type Output = EScalar;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for EScalar {
    type Output = EScalar;
    fn neg(self) -> Self {
        EScalar {
            re: (self.q - self.re) % self.q,
            im: (self.q - self.im) % self.q,
            ..self
        }
    }
}

impl Mul for EScalar {
    type Output = EScalar;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.q, rhs.q);
        let q = self.q as u32;
        let (a, b, c, d) = (
            self.re as u32,
            self.im as u32,
            rhs.re as u32,
            rhs.im as u32,
        );
        let re = (a * c + (b * d % q) * self.eps as u32) % q;
        let im = (a * d + b * c) % q;
        EScalar {
            re: re as u16,
            im: im as u16,
            ..self
        }
    }
}

impl AddAssign for EScalar {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for EScalar {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for EScalar {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

/// Parses a field order such as `"7"`. Scalars need a field to parse into,
/// see [`FieldParams::parse_scalar`].
impl FromStr for FieldParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let q: u32 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field order {s:?}")))?;
        FieldParams::new(q)
    }
}
