//! Exact arithmetic in finite fields `F_q`, `q = p^m`.
//!
//! Extension fields are realised as `F_p[t]/(modulus)` with elements stored in
//! the power basis. An element is a compact [`Elem`] code
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` built from its residues
//! `(c_0, ..., c_{m-1})`, so prime-subfield elements have codes `0..p` and the
//! canonical enumeration order is ascending code: zero first, then base-`p`
//! counting (lexicographic on the residues read from the leading coefficient
//! down). The [`Field`] handle is cheap to clone and owns all the context;
//! polynomials and sets carry the handle, elements do not.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Fields up to this order get full addition/multiplication tables.
const TABLE_LIMIT: u32 = 256;

/// An element of some field, identified by its code. Meaningless without the
/// [`Field`] it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Serializable field descriptor: `{"p": int, "m": int, "modulus": [int,...]?}`.
///
/// `modulus` lists the coefficients of the monic modulus in ascending degree
/// order (constant term first, leading 1 last) and is present iff `m > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<Field> {
        Field::new(self.p, self.m, self.modulus.clone())
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// Shared handle to a finite field.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}[t]/{:?}", self.0.p, self.0.modulus)
        }
    }
}

impl Field {
    /// Builds `F_{p^m}`. For `m > 1` without an explicit modulus, the monic
    /// irreducible of degree `m` with the smallest code (lower coefficients
    /// read as a base-`p` number, constant term least significant) is used.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if p < 2 || !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::BadField("extension degree must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        if q > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as u32;
        let modulus = if m == 1 {
            match modulus {
                None => Vec::new(),
                Some(v) if v.is_empty() => Vec::new(),
                Some(v) => {
                    // A degree-1 monic modulus t + c is accepted and carries no information.
                    check_modulus_shape(&v, p, 1)?;
                    Vec::new()
                }
            }
        } else {
            match modulus {
                Some(v) => {
                    check_modulus_shape(&v, p, m)?;
                    if !is_irreducible(&v, p) {
                        return Err(Error::ReducibleModulus(v));
                    }
                    v
                }
                None => find_irreducible(p, m),
            }
        };
        let mut inner = Inner {
            p,
            m,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(Field(Arc::new(inner)))
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// Builds the field of order `q` (a prime power) with the default modulus.
    pub fn with_order(q: u32) -> Result<Field> {
        if q < 2 {
            return Err(Error::BadField(format!("{q} is not a prime power")));
        }
        let p = smallest_prime_factor(q as u64) as u32;
        let mut m = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(Error::BadField(format!("{q} is not a prime power")));
        }
        Field::new(p, m, None)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.0.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// The modulus (ascending coefficients), `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        if self.0.m == 1 {
            None
        } else {
            Some(&self.0.modulus)
        }
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.0.p,
            m: self.0.m,
            modulus: self.modulus().map(<[u32]>::to_vec),
        }
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem(1)
    }

    pub fn elem(&self, code: u32) -> Result<Elem> {
        if code < self.0.q {
            Ok(Elem(code))
        } else {
            Err(Error::ElementOutOfRange {
                value: code as u64,
                q: self.0.q,
            })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Image of a non-negative integer in the prime subfield.
    #[inline]
    pub fn from_u128(&self, n: u128) -> Elem {
        Elem((n % self.0.p as u128) as u32)
    }

    /// Element with the given power-basis residues (constant term first).
    pub fn from_residues(&self, residues: &[u32]) -> Result<Elem> {
        if residues.len() != self.0.m as usize {
            return Err(Error::ArityMismatch {
                expected: self.0.m as usize,
                found: residues.len(),
            });
        }
        let mut code = 0u32;
        for &c in residues.iter().rev() {
            if c >= self.0.p {
                return Err(Error::ElementOutOfRange {
                    value: c as u64,
                    q: self.0.p,
                });
            }
            code = code * self.0.p + c;
        }
        Ok(Elem(code))
    }

    /// Power-basis residues of `a`, constant term first.
    pub fn residues(&self, a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.m as usize);
        let mut c = a.0;
        for _ in 0..self.0.m {
            out.push(c % self.0.p);
            c /= self.0.p;
        }
        out
    }

    /// All `q` elements in canonical order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.0.q).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.0.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if let Some(t) = &inner.tables {
            return Elem(t.add[(a.0 * inner.q + b.0) as usize]);
        }
        if inner.m == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= inner.p { s - inner.p } else { s });
        }
        add_slow(inner, a.0, b.0)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.0;
        if inner.m == 1 {
            return Elem(if a.0 == 0 { 0 } else { inner.p - a.0 });
        }
        let p = inner.p;
        let mut code = 0u32;
        let mut place = 1u32;
        let mut c = a.0;
        for _ in 0..inner.m {
            let d = c % p;
            c /= p;
            code += ((p - d) % p) * place;
            place *= p;
        }
        Elem(code)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if let Some(t) = &inner.tables {
            return Elem(t.mul[(a.0 * inner.q + b.0) as usize]);
        }
        if inner.m == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % inner.p as u64) as u32);
        }
        mul_slow(inner, a.0, b.0)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.0.tables {
            return Ok(Elem(t.inv[a.0 as usize]));
        }
        Ok(self.pow(a, self.0.q as u64 - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Human-readable rendering: an integer for prime fields, a polynomial in
    /// `t` (leading term first) otherwise.
    pub fn display(&self, a: Elem) -> String {
        if self.0.m == 1 {
            return a.0.to_string();
        }
        let res = self.residues(a);
        let mut parts = Vec::new();
        for (i, &c) in res.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// An element together with its field; the checked surface for mixing
/// elements from independently constructed fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> Result<Self> {
        field.elem(value.code())?;
        Ok(FieldElement {
            field: field.clone(),
            value,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn residues(&self) -> Vec<u32> {
        self.field.residues(self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.display(self.value))
    }
}

pub fn arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    if a.field != b.field {
        return Err(Error::MixedFields);
    }
    let f = &a.field;
    let value = match op {
        ArithOp::Add => f.add(a.value, b.value),
        ArithOp::Sub => f.sub(a.value, b.value),
        ArithOp::Mul => f.mul(a.value, b.value),
        ArithOp::Div => f.div(a.value, b.value)?,
    };
    Ok(FieldElement {
        field: f.clone(),
        value,
    })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

fn check_modulus_shape(v: &[u32], p: u32, m: u32) -> Result<()> {
    if v.len() != m as usize + 1 {
        return Err(Error::BadModulus(format!(
            "expected {} coefficients, found {}",
            m + 1,
            v.len()
        )));
    }
    if let Some(&c) = v.iter().find(|&&c| c >= p) {
        return Err(Error::BadModulus(format!("coefficient {c} is not below p = {p}")));
    }
    if v[m as usize] != 1 {
        return Err(Error::BadModulus("modulus must be monic".into()));
    }
    Ok(())
}

// Dense polynomials over F_p, ascending coefficients, used only for the
// modulus and for extension-field multiplication without tables.

fn poly_rem_monic(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    let p64 = p as u64;
    while r.len() > db {
        let lead = r[r.len() - 1] % p64;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let sub = lead * bc as u64 % p64;
                r[shift + i] = (r[shift + i] + p64 - sub) % p64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

/// Exhaustive trial division by every monic polynomial of degree `1..=m/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    if m <= 1 {
        return m == 1;
    }
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if poly_rem_monic(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn find_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for code in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut c = code;
        for _ in 0..m {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits(inner: &Inner, mut c: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(inner.m as usize);
    for _ in 0..inner.m {
        out.push(c % inner.p);
        c /= inner.p;
    }
    out
}

fn undigits(inner: &Inner, d: &[u32]) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * inner.p + c)
}

fn add_slow(inner: &Inner, a: u32, b: u32) -> Elem {
    if inner.m == 1 {
        return Elem((a + b) % inner.p);
    }
    let da = digits(inner, a);
    let db = digits(inner, b);
    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % inner.p).collect();
    Elem(undigits(inner, &sum))
}

fn mul_slow(inner: &Inner, a: u32, b: u32) -> Elem {
    if inner.m == 1 {
        return Elem(((a as u64 * b as u64) % inner.p as u64) as u32);
    }
    let da = digits(inner, a);
    let db = digits(inner, b);
    let p = inner.p as u64;
    let mut prod = vec![0u32; da.len() + db.len() - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
        }
    }
    let r = poly_rem_monic(&prod, &inner.modulus, inner.p);
    let mut out = vec![0u32; inner.m as usize];
    out[..r.len()].copy_from_slice(&r);
    Elem(undigits(inner, &out))
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q as usize;
    let mut add = vec![0u32; q * q];
    let mut mul = vec![0u32; q * q];
    let mut inv = vec![0u32; q];
    for a in 0..inner.q {
        for b in 0..inner.q {
            let i = a as usize * q + b as usize;
            add[i] = add_slow(inner, a, b).0;
            mul[i] = mul_slow(inner, a, b).0;
            if mul[i] == 1 {
                inv[a as usize] = b;
            }
        }
    }
    Tables { add, mul, inv }
}
