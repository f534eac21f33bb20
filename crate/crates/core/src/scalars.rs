//! Exact coefficient fields: the rationals, odd prime fields, and univariate
//! rational function fields in the parameter `t` over either of those.
//!
//! All values are immutable; arithmetic is by value or through `&` operators.
//! Mixed-field operations are a programming error and panic in the operator
//! impls; the checked entry point is [`field_arith`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Trial-division bound for square-free extraction over the rationals.
pub const FACTOR_BOUND: u64 = 1_000_000;

/// Identifies one of the supported coefficient fields.
///
/// `PrimeFunctions` is the function-field variant with prime-field
/// coefficients; it backs conductor checks over F_p and is otherwise
/// internal (the CLI only exposes `Q`, `Fp:<p>` and `Qt`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldId {
    Rationals,
    PrimeField(u32),
    RationalFunctions,
    PrimeFunctions(u32),
}

impl FieldId {
    /// Odd prime field F_p, p an odd prime below 2^31.
    pub fn prime_field(p: u64) -> Result<FieldId> {
        if p < (1 << 31) && p % 2 == 1 && is_prime_u64(p) {
            Ok(FieldId::PrimeField(p as u32))
        } else {
            Err(Error::InvalidPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldId::Rationals | FieldId::RationalFunctions => 0,
            FieldId::PrimeField(p) | FieldId::PrimeFunctions(p) => *p as u64,
        }
    }

    /// The coefficient field of a function field; identity otherwise.
    pub fn base(&self) -> FieldId {
        match self {
            FieldId::RationalFunctions => FieldId::Rationals,
            FieldId::PrimeFunctions(p) => FieldId::PrimeField(*p),
            other => *other,
        }
    }

    /// The function field k(t) over this field.
    pub fn function_field(&self) -> Result<FieldId> {
        match self {
            FieldId::Rationals => Ok(FieldId::RationalFunctions),
            FieldId::PrimeField(p) => Ok(FieldId::PrimeFunctions(*p)),
            other => Err(Error::UnsupportedField(*other)),
        }
    }

    pub fn is_function_field(&self) -> bool {
        matches!(self, FieldId::RationalFunctions | FieldId::PrimeFunctions(_))
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldId::Rationals => write!(f, "Q"),
            FieldId::PrimeField(p) => write!(f, "Fp:{p}"),
            FieldId::RationalFunctions => write!(f, "Qt"),
            FieldId::PrimeFunctions(p) => write!(f, "Fp:{p}(t)"),
        }
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = 11u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of one of the supported fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp { p: u32, value: u64 },
    Fun(Box<RatFunc>),
}

/// A reduced fraction of univariate polynomials in `t` with coefficients in
/// a base field (Q or F_p). Invariants: denominator monic and nonzero,
/// gcd(num, den) = 1, coefficient vectors have no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    base: FieldId,
    num: Vec<Scalar>,
    den: Vec<Scalar>,
}

// ---------------------------------------------------------------------------
// polynomial helpers over the base field (coefficients ascending in t)

fn tp_trim(c: &mut Vec<Scalar>) {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
}

fn tp_is_zero(c: &[Scalar]) -> bool {
    c.is_empty()
}

fn tp_add(base: FieldId, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    for i in 0..a.len().max(b.len()) {
        let x = a.get(i).cloned().unwrap_or_else(|| Scalar::zero(base));
        let y = b.get(i).cloned().unwrap_or_else(|| Scalar::zero(base));
        out.push(&x + &y);
    }
    tp_trim(&mut out);
    out
}

fn tp_neg(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| -x).collect()
}

fn tp_mul(base: FieldId, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if tp_is_zero(a) || tp_is_zero(b) {
        return vec![];
    }
    let mut out = vec![Scalar::zero(base); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    tp_trim(&mut out);
    out
}

fn tp_scale(a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = a.iter().map(|x| x * c).collect();
    tp_trim(&mut out);
    out
}

/// Polynomial division with remainder: a = q*b + r, deg r < deg b.
fn tp_divrem(base: FieldId, a: &[Scalar], b: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    assert!(!tp_is_zero(b), "t-polynomial division by zero");
    let mut r = a.to_vec();
    if tp_is_zero(a) || a.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![Scalar::zero(base); a.len() - b.len() + 1];
    let lead_inv = b.last().unwrap().inv().expect("nonzero leading coefficient");
    while !tp_is_zero(&r) && r.len() >= b.len() {
        let k = r.len() - b.len();
        let c = &(r.last().unwrap().clone()) * &lead_inv;
        q[k] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            let delta = &c * bj;
            r[k + j] = &r[k + j] - &delta;
        }
        tp_trim(&mut r);
    }
    tp_trim(&mut q);
    (q, r)
}

fn tp_make_monic(a: &[Scalar]) -> Vec<Scalar> {
    match a.last() {
        None => vec![],
        Some(l) => tp_scale(a, &l.inv().expect("nonzero leading coefficient")),
    }
}

/// Monic gcd by the Euclidean algorithm.
fn tp_gcd(base: FieldId, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !tp_is_zero(&y) {
        let (_, r) = tp_divrem(base, &x, &y);
        x = y;
        y = r;
    }
    tp_make_monic(&x)
}

fn tp_derivative(base: FieldId, a: &[Scalar]) -> Vec<Scalar> {
    if a.len() <= 1 {
        return vec![];
    }
    let mut out = Vec::with_capacity(a.len() - 1);
    for (i, c) in a.iter().enumerate().skip(1) {
        out.push(c * &Scalar::from_int(i as i64, base));
    }
    tp_trim(&mut out);
    out
}

/// Number of leading zero coefficients, i.e. the t-adic valuation.
fn tp_t_order(a: &[Scalar]) -> usize {
    a.iter().position(|c| !c.is_zero()).expect("nonzero polynomial")
}

/// Square-free decomposition f = prod z_i^{m_i} (z_i monic square-free,
/// pairwise coprime), valid in characteristic zero and p. Inputs are monic.
fn tp_sqf_decomposition(base: FieldId, f: &[Scalar]) -> Vec<(Vec<Scalar>, usize)> {
    if f.len() <= 1 {
        return vec![];
    }
    let p = base.characteristic() as usize;
    let df = tp_derivative(base, f);
    if tp_is_zero(&df) {
        // f = h(t^p); over the prime field h(t^p) = h(t)^p
        let root: Vec<Scalar> = f.iter().step_by(p).cloned().collect();
        return tp_sqf_decomposition(base, &root)
            .into_iter()
            .map(|(z, m)| (z, m * p))
            .collect();
    }
    let mut g = tp_gcd(base, f, &df);
    let mut w = tp_divrem(base, f, &g).0;
    let mut out = Vec::new();
    let mut i = 1usize;
    while w.len() > 1 {
        let y = tp_gcd(base, &w, &g);
        let z = tp_divrem(base, &w, &y).0;
        if z.len() > 1 {
            out.push((z, i));
        }
        g = tp_divrem(base, &g, &y).0;
        w = y;
        i += 1;
    }
    if g.len() > 1 {
        // leftover p-th-power part (multiplicities divisible by char)
        let root: Vec<Scalar> = g.iter().step_by(p).cloned().collect();
        for (z, m) in tp_sqf_decomposition(base, &root) {
            out.push((z, m * p));
        }
    }
    out
}

/// Odd-multiplicity (square-free) part of a monic polynomial.
fn tp_odd_part(base: FieldId, f: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::one(base)];
    for (z, m) in tp_sqf_decomposition(base, f) {
        if m % 2 == 1 {
            out = tp_mul(base, &out, &z);
        }
    }
    out
}

impl RatFunc {
    fn normalized(base: FieldId, mut num: Vec<Scalar>, mut den: Vec<Scalar>) -> RatFunc {
        tp_trim(&mut num);
        tp_trim(&mut den);
        assert!(!tp_is_zero(&den), "rational function with zero denominator");
        if tp_is_zero(&num) {
            return RatFunc { base, num: vec![], den: vec![Scalar::one(base)] };
        }
        let g = tp_gcd(base, &num, &den);
        if g.len() > 1 {
            num = tp_divrem(base, &num, &g).0;
            den = tp_divrem(base, &den, &g).0;
        }
        let lead_inv = den.last().unwrap().inv().expect("nonzero leading coefficient");
        num = tp_scale(&num, &lead_inv);
        den = tp_scale(&den, &lead_inv);
        RatFunc { base, num, den }
    }

    pub fn base(&self) -> FieldId {
        self.base
    }

    pub fn field(&self) -> FieldId {
        self.base.function_field().expect("base field has a function field")
    }

    pub fn is_zero(&self) -> bool {
        tp_is_zero(&self.num)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1
    }

    /// Numerator coefficients, ascending powers of t.
    pub fn numerator(&self) -> &[Scalar] {
        &self.num
    }

    pub fn denominator(&self) -> &[Scalar] {
        &self.den
    }
}

impl Scalar {
    pub fn zero(field: FieldId) -> Scalar {
        match field {
            FieldId::Rationals => Scalar::Rat(BigRational::zero()),
            FieldId::PrimeField(p) => Scalar::Fp { p, value: 0 },
            FieldId::RationalFunctions | FieldId::PrimeFunctions(_) => {
                let base = field.base();
                Scalar::Fun(Box::new(RatFunc {
                    base,
                    num: vec![],
                    den: vec![Scalar::one(base)],
                }))
            }
        }
    }

    pub fn one(field: FieldId) -> Scalar {
        Scalar::from_int(1, field)
    }

    pub fn from_int(n: i64, field: FieldId) -> Scalar {
        Scalar::from_bigint(BigInt::from(n), field)
    }

    pub fn from_bigint(n: BigInt, field: FieldId) -> Scalar {
        match field {
            FieldId::Rationals => Scalar::Rat(BigRational::from_integer(n)),
            FieldId::PrimeField(p) => {
                let m = n.mod_floor(&BigInt::from(p));
                let (_, digits) = m.to_u64_digits();
                Scalar::Fp { p, value: digits.first().copied().unwrap_or(0) }
            }
            FieldId::RationalFunctions | FieldId::PrimeFunctions(_) => {
                let base = field.base();
                let c = Scalar::from_bigint(n, base);
                let num = if c.is_zero() { vec![] } else { vec![c] };
                Scalar::Fun(Box::new(RatFunc { base, num, den: vec![Scalar::one(base)] }))
            }
        }
    }

    pub fn from_rational(q: BigRational, field: FieldId) -> Result<Scalar> {
        match field {
            FieldId::Rationals => Ok(Scalar::Rat(q)),
            FieldId::PrimeField(_) => {
                let n = Scalar::from_bigint(q.numer().clone(), field);
                let d = Scalar::from_bigint(q.denom().clone(), field);
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(&n * &d.inv()?)
            }
            FieldId::RationalFunctions | FieldId::PrimeFunctions(_) => {
                let base = field.base();
                let c = Scalar::from_rational(q, base)?;
                Ok(Scalar::constant_fun(c))
            }
        }
    }

    fn constant_fun(c: Scalar) -> Scalar {
        let base = c.field();
        let num = if c.is_zero() { vec![] } else { vec![c] };
        Scalar::Fun(Box::new(RatFunc { base, num, den: vec![Scalar::one(base)] }))
    }

    /// The parameter `t` of a function field.
    pub fn t(field: FieldId) -> Result<Scalar> {
        match field {
            FieldId::RationalFunctions | FieldId::PrimeFunctions(_) => {
                let base = field.base();
                Ok(Scalar::Fun(Box::new(RatFunc {
                    base,
                    num: vec![Scalar::zero(base), Scalar::one(base)],
                    den: vec![Scalar::one(base)],
                })))
            }
            other => Err(Error::UnsupportedField(other)),
        }
    }

    /// A rational function built from ascending numerator/denominator
    /// coefficients over the base field of `field`.
    pub fn rat_func(field: FieldId, num: Vec<Scalar>, den: Vec<Scalar>) -> Result<Scalar> {
        let base = field.base();
        if !field.is_function_field() {
            return Err(Error::UnsupportedField(field));
        }
        let mut d = den;
        tp_trim(&mut d);
        if tp_is_zero(&d) {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Fun(Box::new(RatFunc::normalized(base, num, d))))
    }

    pub fn field(&self) -> FieldId {
        match self {
            Scalar::Rat(_) => FieldId::Rationals,
            Scalar::Fp { p, .. } => FieldId::PrimeField(*p),
            Scalar::Fun(f) => f.field(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
            Scalar::Fun(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
            Scalar::Fun(f) => f.den.len() == 1 && f.num.len() == 1 && f.num[0].is_one(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(q) => Scalar::Rat(q.recip()),
            Scalar::Fp { p, value } => Scalar::Fp { p: *p, value: fp_inv(*p as u64, *value) },
            Scalar::Fun(f) => Scalar::Fun(Box::new(RatFunc::normalized(
                f.base,
                f.den.clone(),
                f.num.clone(),
            ))),
        })
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.same_field(rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.same_field(rhs)?;
        Ok(self - rhs)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.same_field(rhs)?;
        Ok(self * rhs)
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        self.same_field(rhs)?;
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &rhs.inv()?)
    }

    fn same_field(&self, rhs: &Scalar) -> Result<()> {
        if self.field() == rhs.field() {
            Ok(())
        } else {
            Err(Error::MixedFields(self.field(), rhs.field()))
        }
    }

    /// Exact rational content of a Q scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_fun(&self) -> Option<&RatFunc> {
        match self {
            Scalar::Fun(f) => Some(f),
            _ => None,
        }
    }

    /// Sign of a rational scalar (+1, 0, -1).
    pub fn rat_sign(&self) -> Option<i32> {
        self.as_rational().map(|q| {
            if q.is_zero() {
                0
            } else if q.is_positive() {
                1
            } else {
                -1
            }
        })
    }

    /// Deterministic total order used for canonical sorting; values of the
    /// same field compare by value, different fields by field tag.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Fp { p: p1, value: v1 }, Scalar::Fp { p: p2, value: v2 }) => {
                p1.cmp(p2).then(v1.cmp(v2))
            }
            (Scalar::Fun(a), Scalar::Fun(b)) => {
                let key = |f: &RatFunc| (f.num.len(), f.den.len());
                key(a).cmp(&key(b)).then_with(|| {
                    for (x, y) in a.num.iter().zip(b.num.iter()) {
                        let c = x.canonical_cmp(y);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                    for (x, y) in a.den.iter().zip(b.den.iter()) {
                        let c = x.canonical_cmp(y);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                    Ordering::Equal
                })
            }
            _ => self.field().cmp(&other.field()),
        }
    }

    /// Writes f = t^ord * u(t) with u(0) finite and nonzero; returns
    /// (ord, u(0)) with u(0) in the base field.
    pub fn t_order_and_unit(&self) -> Result<(i64, Scalar)> {
        let f = match self {
            Scalar::Fun(f) => f,
            _ => return Err(Error::UnsupportedField(self.field())),
        };
        if f.is_zero() {
            return Err(Error::ZeroInput);
        }
        let a = tp_t_order(&f.num);
        let b = tp_t_order(&f.den);
        let u0 = f.num[a].checked_div(&f.den[b])?;
        Ok((a as i64 - b as i64, u0))
    }
}

fn fp_inv(p: u64, v: u64) -> u64 {
    // extended Euclid on (v, p); p prime, v != 0
    let (mut r0, mut r1) = (p as i128, v as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p as i128) as u64
}

fn fp_pow(p: u64, mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { p, value: a }, Scalar::Fp { p: p2, value: b }) if p == p2 => {
                Scalar::Fp { p: *p, value: (a + b) % (*p as u64) }
            }
            (Scalar::Fun(a), Scalar::Fun(b)) if a.base == b.base => {
                // a/b + c/d = (ad + cb)/(bd)
                let base = a.base;
                let num = tp_add(
                    base,
                    &tp_mul(base, &a.num, &b.den),
                    &tp_mul(base, &b.num, &a.den),
                );
                let den = tp_mul(base, &a.den, &b.den);
                Scalar::Fun(Box::new(RatFunc::normalized(base, num, den)))
            }
            _ => panic!("scalar addition across fields: {} vs {}", self.field(), rhs.field()),
        }
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { p, value } => {
                Scalar::Fp { p: *p, value: if *value == 0 { 0 } else { *p as u64 - value } }
            }
            Scalar::Fun(f) => Scalar::Fun(Box::new(RatFunc {
                base: f.base,
                num: tp_neg(&f.num),
                den: f.den.clone(),
            })),
        }
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { p, value: a }, Scalar::Fp { p: p2, value: b }) if p == p2 => {
                Scalar::Fp { p: *p, value: a * b % (*p as u64) }
            }
            (Scalar::Fun(a), Scalar::Fun(b)) if a.base == b.base => {
                let base = a.base;
                let num = tp_mul(base, &a.num, &b.num);
                let den = tp_mul(base, &a.den, &b.den);
                Scalar::Fun(Box::new(RatFunc::normalized(base, num, den)))
            }
            _ => panic!("scalar multiplication across fields: {} vs {}", self.field(), rhs.field()),
        }
    }
}

/// The checked four-function arithmetic entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

// ---------------------------------------------------------------------------
// printing

fn write_tpoly(f: &mut fmt::Formatter<'_>, c: &[Scalar]) -> fmt::Result {
    // descending powers of t
    if c.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, coef) in c.iter().enumerate().rev() {
        if coef.is_zero() {
            continue;
        }
        let (neg, abs) = match coef {
            Scalar::Rat(q) if q.is_negative() => (true, Scalar::Rat(-q)),
            other => (false, other.clone()),
        };
        if first {
            if neg {
                write!(f, "-")?;
            }
            first = false;
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if i == 0 {
            write!(f, "{abs}")?;
        } else {
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            if i == 1 {
                write!(f, "t")?;
            } else {
                write!(f, "t^{i}")?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
            Scalar::Fun(r) => {
                if r.is_polynomial() {
                    write_tpoly(f, &r.num)
                } else {
                    write!(f, "(")?;
                    write_tpoly(f, &r.num)?;
                    write!(f, ")/(")?;
                    write_tpoly(f, &r.den)?;
                    write!(f, ")")
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// square classes

/// The class of a nonzero scalar modulo nonzero squares, stored through a
/// canonical representative:
///
/// * over Q: a signed square-free integer,
/// * over F_p: 1 or the least quadratic non-residue,
/// * over k(t): square-free part of the base constant times the monic
///   square-free (odd-multiplicity) polynomial part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareClass {
    rep: Scalar,
}

impl SquareClass {
    pub fn representative(&self) -> &Scalar {
        &self.rep
    }

    pub fn field(&self) -> FieldId {
        self.rep.field()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    pub fn mul(&self, other: &SquareClass) -> Result<SquareClass> {
        square_class(&self.rep.checked_mul(&other.rep)?)
    }

    pub fn neg(&self) -> SquareClass {
        square_class(&-&self.rep).expect("negation of a nonzero representative")
    }
}

impl Ord for SquareClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rep.canonical_cmp(&other.rep)
    }
}

impl PartialOrd for SquareClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// Square-free part of a nonzero integer, by trial division up to
/// [`FACTOR_BOUND`]; the sign is carried along.
pub fn squarefree_int(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let negative = n.sign() == Sign::Minus;
    let mut m = n.magnitude().clone();
    let mut rep = BigUint::one();
    let mut d = BigUint::from(2u32);
    let bound = BigUint::from(FACTOR_BOUND);
    while &d * &d <= m && d <= bound {
        if (&m % &d).is_zero() {
            let mut mult = 0u32;
            while (&m % &d).is_zero() {
                m /= &d;
                mult += 1;
            }
            if mult % 2 == 1 {
                rep *= &d;
            }
        }
        d += if d == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    if !m.is_one() {
        // residual cofactor: all prime factors exceed the bound (or it is
        // below bound^2 and therefore prime)
        if m < (&bound * &bound) || is_probable_prime(&m) {
            rep *= &m;
        } else if m.sqrt().pow(2) == m {
            // a perfect square has only even multiplicities
        } else {
            return Err(Error::FactorizationBoundExceeded(n.to_string()));
        }
    }
    let rep = BigInt::from(rep);
    Ok(if negative { -rep } else { rep })
}

/// Deterministic Miller-Rabin for inputs below 3.3 * 10^24.
fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigUint::from(p);
        if n == &bp {
            return true;
        }
        if (n % bp).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least quadratic non-residue mod an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| fp_pow(p, a, (p - 1) / 2) != 1).expect("odd prime has a non-residue")
}

/// Canonical square class of a nonzero scalar.
pub fn square_class(a: &Scalar) -> Result<SquareClass> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    let rep = match a {
        Scalar::Rat(q) => {
            let n = squarefree_int(&(q.numer() * q.denom()))?;
            Scalar::Rat(BigRational::from_integer(n))
        }
        Scalar::Fp { p, value } => {
            let pu = *p as u64;
            let v = if fp_pow(pu, *value, (pu - 1) / 2) == 1 { 1 } else { least_nonresidue(pu) };
            Scalar::Fp { p: *p, value: v }
        }
        Scalar::Fun(f) => {
            let base = f.base;
            // class(num/den) = class(num * den)
            let prod = tp_mul(base, &f.num, &f.den);
            let lead = prod.last().unwrap().clone();
            let monic = tp_make_monic(&prod);
            let poly_part = tp_odd_part(base, &monic);
            let const_part = square_class(&lead)?;
            let num = tp_scale(&poly_part, const_part.representative());
            Scalar::Fun(Box::new(RatFunc {
                base,
                num,
                den: vec![Scalar::one(base)],
            }))
        }
    };
    Ok(SquareClass { rep })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let a = q(1, 2);
        let b = q(1, 3);
        assert_eq!(field_arith(&a, &b, ArithOp::Add).unwrap(), q(5, 6));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldId::prime_field(7).unwrap();
        let a = Scalar::from_int(2, f);
        let b = Scalar::from_int(4, f);
        assert_eq!(field_arith(&a, &b, ArithOp::Mul).unwrap(), Scalar::from_int(1, f));
        assert!(FieldId::prime_field(2).is_err());
        assert!(FieldId::prime_field(9).is_err());
    }

    #[test]
    fn function_field_cancellation() {
        let k = FieldId::RationalFunctions;
        let t = Scalar::t(k).unwrap();
        let one = Scalar::one(k);
        let opt = &one + &t; // 1 + t
        let frac = t.checked_div(&opt).unwrap(); // t/(1+t)
        assert_eq!(frac.checked_mul(&opt).unwrap(), t);
    }

    #[test]
    fn mixed_fields_is_an_error() {
        let a = q(1, 1);
        let b = Scalar::from_int(1, FieldId::prime_field(5).unwrap());
        assert!(matches!(field_arith(&a, &b, ArithOp::Add), Err(Error::MixedFields(_, _))));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let a = q(1, 1);
        assert_eq!(field_arith(&a, &Scalar::zero(FieldId::Rationals), ArithOp::Div), Err(Error::DivisionByZero));
    }

    #[test]
    fn square_classes_over_q() {
        let c = square_class(&q(18, 1)).unwrap();
        assert_eq!(c.representative(), &q(2, 1));
        let c = square_class(&q(-8, 25)).unwrap();
        assert_eq!(c.representative(), &q(-2, 1));
        // stability under multiplication by squares
        let a = q(-75, 49);
        let c1 = square_class(&a).unwrap();
        let c2 = square_class(&a.checked_mul(&q(36, 121)).unwrap()).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn square_classes_mod_7() {
        // squares mod 7 are {1, 2, 4}
        let f = FieldId::prime_field(7).unwrap();
        let c3 = square_class(&Scalar::from_int(3, f)).unwrap();
        assert!(!c3.is_one());
        assert_eq!(c3.representative(), &Scalar::from_int(3, f)); // 3 is the least non-residue
        let c2 = square_class(&Scalar::from_int(2, f)).unwrap();
        assert!(c2.is_one());
    }

    #[test]
    fn square_class_multiplicativity() {
        let a = q(6, 1);
        let b = q(-10, 1);
        let ab = a.checked_mul(&b).unwrap();
        let lhs = square_class(&a).unwrap().mul(&square_class(&b).unwrap()).unwrap();
        assert_eq!(lhs, square_class(&ab).unwrap());
    }

    #[test]
    fn t_order_and_unit_examples() {
        let k = FieldId::RationalFunctions;
        let t = Scalar::t(k).unwrap();
        let t2 = t.checked_mul(&t).unwrap();
        assert_eq!(t2.t_order_and_unit().unwrap(), (2, q(1, 1)));

        // (2t + t^3)/(1 - t) has order 1 and unit value 2
        let two_t = t.checked_mul(&Scalar::from_int(2, k)).unwrap();
        let t3 = t2.checked_mul(&t).unwrap();
        let numer = two_t.checked_add(&t3).unwrap();
        let denom = Scalar::one(k).checked_sub(&t).unwrap();
        let f = numer.checked_div(&denom).unwrap();
        assert_eq!(f.t_order_and_unit().unwrap(), (1, q(2, 1)));

        let five = Scalar::from_int(5, k);
        assert_eq!(five.t_order_and_unit().unwrap(), (0, q(5, 1)));

        assert_eq!(Scalar::zero(k).t_order_and_unit(), Err(Error::ZeroInput));
    }

    #[test]
    fn t_order_is_multiplicative() {
        let k = FieldId::RationalFunctions;
        let t = Scalar::t(k).unwrap();
        let one = Scalar::one(k);
        let f = t.checked_mul(&Scalar::from_int(3, k)).unwrap(); // 3t
        let g = (&(&t * &t) + &one).checked_div(&t).unwrap(); // (t^2+1)/t
        let (of, uf) = f.t_order_and_unit().unwrap();
        let (og, ug) = g.t_order_and_unit().unwrap();
        let (ofg, ufg) = f.checked_mul(&g).unwrap().t_order_and_unit().unwrap();
        assert_eq!(ofg, of + og);
        assert_eq!(ufg, uf.checked_mul(&ug).unwrap());
    }

    #[test]
    fn squarefree_part_of_t_polynomials() {
        let k = FieldId::RationalFunctions;
        let t = Scalar::t(k).unwrap();
        let one = Scalar::one(k);
        // 4t^2(1+t) ~ (1+t)
        let f = &(&(&t * &t) * &(&one + &t)) * &Scalar::from_int(4, k);
        let c = square_class(&f).unwrap();
        assert_eq!(c.representative(), &(&one + &t));
        // -6t stays -6t
        let g = &t * &Scalar::from_int(-6, k);
        let cg = square_class(&g).unwrap();
        assert_eq!(cg.representative(), &(&t * &Scalar::from_int(-6, k)));
    }

    #[test]
    fn factorization_bound_is_reported() {
        // a large prime residual is recognized and kept
        let p = BigInt::from(10_000_019u64);
        assert_eq!(squarefree_int(&(BigInt::from(4) * &p)).unwrap(), p);
        // a perfect-square residual is absorbed
        assert_eq!(squarefree_int(&(&p * &p * BigInt::from(3))).unwrap(), BigInt::from(3));
        // a composite non-square residual beyond the bound cannot be decided
        let b = &p * BigInt::from(10_000_079u64);
        assert!(matches!(squarefree_int(&b), Err(Error::FactorizationBoundExceeded(_))));
    }
}
