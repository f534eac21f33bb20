//! Grothendieck-Witt classes of virtual nondegenerate symmetric bilinear
//! forms: construction from Gram matrices, group and ring operations,
//! classical invariants, equality over Q (Hasse-Minkowski) and F_p, and the
//! specialization map GW(k(t)) -> GW(k).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::symmetric_diagonalize;
use crate::scalars::{square_class, FieldId, Scalar, SquareClass};

/// A virtual symmetric bilinear form: signed multiset of rank-one classes
/// plus a signed hyperbolic count. Kept canonical: classes merged, zero
/// multiplicities dropped, and <u> + <-u> pairs folded into H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GWClass {
    field: FieldId,
    entries: BTreeMap<SquareClass, i64>,
    hyperbolic: i64,
}

impl GWClass {
    pub fn zero(field: FieldId) -> GWClass {
        GWClass { field, entries: BTreeMap::new(), hyperbolic: 0 }
    }

    /// The rank-one form <u>.
    pub fn rank_one(u: &Scalar) -> Result<GWClass> {
        let mut q = GWClass::zero(u.field());
        q.entries.insert(square_class(u)?, 1);
        q.canonicalize();
        Ok(q)
    }

    /// n copies of the hyperbolic form H = <1> + <-1>.
    pub fn hyperbolic(field: FieldId, n: i64) -> GWClass {
        GWClass { field, entries: BTreeMap::new(), hyperbolic: n }
    }

    /// Builds a class from diagonal entries (all nonzero).
    pub fn from_diagonal(field: FieldId, diag: &[Scalar]) -> Result<GWClass> {
        let mut q = GWClass::zero(field);
        for d in diag {
            if d.is_zero() {
                return Err(Error::ZeroScalar);
            }
            if d.field() != field {
                return Err(Error::MixedFields(field, d.field()));
            }
            *q.entries.entry(square_class(d)?).or_insert(0) += 1;
        }
        q.canonicalize();
        Ok(q)
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn entries(&self) -> impl Iterator<Item = (&SquareClass, i64)> {
        self.entries.iter().map(|(c, &m)| (c, m))
    }

    pub fn hyperbolic_count(&self) -> i64 {
        self.hyperbolic
    }

    pub fn rank(&self) -> i64 {
        self.entries.values().sum::<i64>() + 2 * self.hyperbolic
    }

    pub fn is_zero_class(&self) -> bool {
        self.entries.is_empty() && self.hyperbolic == 0
    }

    /// True when the class is an integer multiple of H.
    pub fn is_hyperbolic_multiple(&self) -> bool {
        self.entries.is_empty()
    }

    fn canonicalize(&mut self) {
        self.entries.retain(|_, m| *m != 0);
        // fold <u> + <-u> into H; pairs are visited once via rep order
        let classes: Vec<SquareClass> = self.entries.keys().cloned().collect();
        for c in classes {
            let m1 = match self.entries.get(&c) {
                Some(&m) => m,
                None => continue,
            };
            let neg = c.neg();
            if neg <= c {
                continue; // handled from the other side
            }
            let m2 = match self.entries.get(&neg) {
                Some(&m) => m,
                None => continue,
            };
            let fold = if m1 > 0 && m2 > 0 {
                m1.min(m2)
            } else if m1 < 0 && m2 < 0 {
                m1.max(m2)
            } else {
                0
            };
            if fold != 0 {
                self.hyperbolic += fold;
                set_or_remove(&mut self.entries, &c, m1 - fold);
                set_or_remove(&mut self.entries, &neg, m2 - fold);
            }
        }
    }

    pub fn add(&self, other: &GWClass) -> Result<GWClass> {
        if self.field != other.field {
            return Err(Error::MixedFields(self.field, other.field));
        }
        let mut out = self.clone();
        for (c, m) in other.entries.iter() {
            *out.entries.entry(c.clone()).or_insert(0) += m;
        }
        out.hyperbolic += other.hyperbolic;
        out.canonicalize();
        Ok(out)
    }

    /// The GW inverse -[q].
    pub fn negate(&self) -> GWClass {
        GWClass {
            field: self.field,
            entries: self.entries.iter().map(|(c, m)| (c.clone(), -m)).collect(),
            hyperbolic: -self.hyperbolic,
        }
    }

    pub fn sub(&self, other: &GWClass) -> Result<GWClass> {
        self.add(&other.negate())
    }

    /// <u> * q, scaling every diagonal entry; H is absorbed (<u>H = H).
    pub fn scale(&self, u: &Scalar) -> Result<GWClass> {
        if u.is_zero() {
            return Err(Error::ZeroScalar);
        }
        if u.field() != self.field {
            return Err(Error::MixedFields(self.field, u.field()));
        }
        let uc = square_class(u)?;
        let mut out = GWClass::zero(self.field);
        for (c, m) in self.entries.iter() {
            *out.entries.entry(c.mul(&uc)?).or_insert(0) += m;
        }
        out.hyperbolic = self.hyperbolic;
        out.canonicalize();
        Ok(out)
    }

    /// (-<e>)^n * q: scale by <e>^n, then negate if n is odd.
    pub fn sign_power(&self, e: &Scalar, n: i64) -> Result<GWClass> {
        if e.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let scaled = if n.rem_euclid(2) == 1 { self.scale(e)? } else { self.clone() };
        Ok(if n.rem_euclid(2) == 1 { scaled.negate() } else { scaled })
    }

    /// Multiplication of GW classes on rank-one generators:
    /// <u>.<v> = <uv>, <u>.H = H, H.H = 2H.
    pub fn mul(&self, other: &GWClass) -> Result<GWClass> {
        if self.field != other.field {
            return Err(Error::MixedFields(self.field, other.field));
        }
        let mut out = GWClass::zero(self.field);
        for (c1, m1) in self.entries.iter() {
            for (c2, m2) in other.entries.iter() {
                *out.entries.entry(c1.mul(c2)?).or_insert(0) += m1 * m2;
            }
        }
        // H absorbs rank-one classes and H.H = 2H
        let r1: i64 = self.entries.values().sum();
        let r2: i64 = other.entries.values().sum();
        out.hyperbolic =
            self.hyperbolic * r2 + other.hyperbolic * r1 + 2 * self.hyperbolic * other.hyperbolic;
        out.canonicalize();
        Ok(out)
    }

    /// Splits a virtual class as (positive part, negative part): two genuine
    /// forms with q = pos - neg.
    fn split(&self) -> (GWClass, GWClass) {
        let mut pos = GWClass::zero(self.field);
        let mut neg = GWClass::zero(self.field);
        for (c, m) in self.entries.iter() {
            if *m > 0 {
                pos.entries.insert(c.clone(), *m);
            } else {
                neg.entries.insert(c.clone(), -*m);
            }
        }
        if self.hyperbolic >= 0 {
            pos.hyperbolic = self.hyperbolic;
        } else {
            neg.hyperbolic = -self.hyperbolic;
        }
        (pos, neg)
    }

    /// Fully expanded diagonal of a genuine (non-virtual) class, hyperbolic
    /// summands expanded as <1> + <-1>.
    fn expanded_diagonal(&self) -> Result<Vec<SquareClass>> {
        let one = square_class(&Scalar::one(self.field))?;
        let minus_one = one.neg();
        let mut out = Vec::new();
        for (c, m) in self.entries.iter() {
            if *m < 0 {
                return Err(Error::InvalidInput("expanded diagonal of a virtual class".into()));
            }
            for _ in 0..*m {
                out.push(c.clone());
            }
        }
        if self.hyperbolic < 0 {
            return Err(Error::InvalidInput("expanded diagonal of a virtual class".into()));
        }
        for _ in 0..self.hyperbolic {
            out.push(one.clone());
            out.push(minus_one.clone());
        }
        Ok(out)
    }

    /// Base-changes a class over k to the function field k(t) by the
    /// constant embedding of representatives.
    pub fn lift_to_function_field(&self) -> Result<GWClass> {
        let target = self.field.function_field()?;
        let mut out = GWClass::zero(target);
        for (c, m) in self.entries.iter() {
            let rep = match c.representative() {
                Scalar::Rat(q) => Scalar::from_rational(q.clone(), target)?,
                Scalar::Fp { value, .. } => Scalar::from_int(*value as i64, target),
                other => return Err(Error::UnsupportedField(other.field())),
            };
            *out.entries.entry(square_class(&rep)?).or_insert(0) += m;
        }
        out.hyperbolic = self.hyperbolic;
        out.canonicalize();
        Ok(out)
    }

    /// The specialization map sp_t: GW(k(t)) -> GW(k), sending <t^n u> to
    /// <u(0)> entrywise; hyperbolic count is preserved.
    pub fn specialize(&self) -> Result<GWClass> {
        let base = match self.field {
            FieldId::RationalFunctions | FieldId::PrimeFunctions(_) => self.field.base(),
            other => return Err(Error::UnsupportedField(other)),
        };
        let mut out = GWClass::zero(base);
        for (c, m) in self.entries.iter() {
            if c.representative().is_zero() {
                return Err(Error::ZeroEntry);
            }
            let (_, unit) = c.representative().t_order_and_unit()?;
            *out.entries.entry(square_class(&unit)?).or_insert(0) += m;
        }
        out.hyperbolic = self.hyperbolic;
        out.canonicalize();
        Ok(out)
    }
}

fn set_or_remove(map: &mut BTreeMap<SquareClass, i64>, key: &SquareClass, value: i64) {
    if value == 0 {
        map.remove(key);
    } else {
        map.insert(key.clone(), value);
    }
}

impl fmt::Display for GWClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, m) in self.entries.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *m == 1 {
                write!(f, "<{c}>")?;
            } else {
                write!(f, "{m}*<{c}>")?;
            }
        }
        if self.hyperbolic != 0 {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*H", self.hyperbolic)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Diagonalizes a symmetric nondegenerate Gram matrix into a GW class,
/// returning the congruence transform as certificate.
pub fn diagonalize(field: FieldId, gram: &[Vec<Scalar>]) -> Result<(GWClass, Vec<Scalar>, Vec<Vec<Scalar>>)> {
    let (diag, transform) = symmetric_diagonalize(field, gram)?;
    let class = GWClass::from_diagonal(field, &diag)?;
    Ok((class, diag, transform))
}

// ---------------------------------------------------------------------------
// Hilbert symbols over Q

/// A place of Q: the real place or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "oo"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

fn valuation(n: &BigInt, p: u64) -> (i64, BigInt) {
    let bp = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.clone();
    while (&m % &bp).is_zero() {
        m /= &bp;
        v += 1;
    }
    (v, m)
}

fn mod_u64(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn legendre(u: u64, p: u64) -> i8 {
    // p odd prime, p does not divide u
    let mut acc = 1u64;
    let mut b = u % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Decomposes a nonzero rational as p^v * (x/y) with p coprime to x, y, and
/// returns (v, unit mod p) for odd p, or (v, odd part mod 8) for p = 2.
fn p_split(a: &BigRational, p: u64) -> (i64, u64) {
    let (vn, nn) = valuation(a.numer(), p);
    let (vd, nd) = valuation(a.denom(), p);
    let v = vn - vd;
    let modulus = if p == 2 { 8 } else { p };
    let x = mod_u64(&nn, modulus);
    let y = mod_u64(&nd, modulus);
    // invert y in (Z/modulus)^* ; both 8 and odd p have tiny unit groups
    let yinv = (1..modulus).find(|&z| z * y % modulus == 1).expect("unit mod modulus");
    (v, x * yinv % modulus)
}

/// The Hilbert symbol (a, b)_v over Q by the classical closed formulas.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> i8 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = p_split(a, 2);
            let (beta, v) = p_split(b, 2);
            let eps = |x: u64| (x.wrapping_sub(1) / 2) % 2; // (x-1)/2 mod 2 for odd x mod 8
            let omega = |x: u64| (x * x - 1) / 8 % 2;
            let exp = eps(u) * eps(v)
                + (alpha.rem_euclid(2) as u64) * omega(v)
                + (beta.rem_euclid(2) as u64) * omega(u);
            if exp.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = p_split(a, p);
            let (beta, v) = p_split(b, p);
            let mut s = 1i8;
            if alpha.rem_euclid(2) == 1 && beta.rem_euclid(2) == 1 && (p - 1) / 2 % 2 == 1 {
                s = -s;
            }
            if beta.rem_euclid(2) == 1 {
                s *= legendre(u, p);
            }
            if alpha.rem_euclid(2) == 1 {
                s *= legendre(v, p);
            }
            s
        }
    }
}

/// Odd primes dividing the (squarefree integer) representative, plus 2.
///
/// Canonical representatives are products of primes below the trial
/// division bound and at most one certified larger prime, so stopping the
/// scan at the bound is exact.
fn relevant_primes(classes: impl Iterator<Item = SquareClass>) -> Result<Vec<u64>> {
    let mut primes = vec![2u64];
    for c in classes {
        let rep = c
            .representative()
            .as_rational()
            .ok_or(Error::UnsupportedField(c.field()))?;
        let mut m = rep.numer().abs();
        let mut d = BigInt::from(3);
        let two = BigInt::from(2);
        let bound = BigInt::from(crate::scalars::FACTOR_BOUND);
        while (&m % &two).is_zero() {
            m /= &two;
        }
        while &d * &d <= m && d <= bound {
            if (&m % &d).is_zero() {
                let (_, digits) = d.to_u64_digits();
                primes.push(digits[0]);
                while (&m % &d).is_zero() {
                    m /= &d;
                }
            }
            d += 2;
        }
        if m > BigInt::one() {
            let (_, digits) = m.to_u64_digits();
            if digits.len() != 1 {
                return Err(Error::FactorizationBoundExceeded(rep.to_string()));
            }
            primes.push(digits[0]);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

/// Hasse-Witt invariant s_p = prod_{i<j} (d_i, d_j)_p of a genuine diagonal
/// form over Q.
fn hasse_invariant(diag: &[SquareClass], p: u64) -> i8 {
    let mut s = 1i8;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let a = diag[i].representative().as_rational().expect("rational entries");
            let b = diag[j].representative().as_rational().expect("rational entries");
            s *= hilbert_symbol(a, b, Place::Prime(p));
        }
    }
    s
}

// ---------------------------------------------------------------------------
// invariants

/// Classical invariants of a GW class. For virtual classes the Hasse data is
/// reported separately for the positive and the negative part.
#[derive(Debug, Clone)]
pub struct GWInvariants {
    pub rank: i64,
    /// Over Q only.
    pub signature: Option<i64>,
    /// Signed discriminant (-1)^{r(r-1)/2} det.
    pub signed_discriminant: SquareClass,
    /// Determinant class.
    pub determinant: SquareClass,
    /// Over Q: Hasse invariants of the positive part at 2 and the primes
    /// dividing some entry.
    pub hasse_positive: Option<BTreeMap<u64, i8>>,
    /// Over Q, for virtual classes: Hasse invariants of the negative part.
    pub hasse_negative: Option<BTreeMap<u64, i8>>,
}

pub fn invariants(q: &GWClass) -> Result<GWInvariants> {
    let field = q.field();
    let rank = q.rank();
    let one = square_class(&Scalar::one(field))?;
    let minus_one = one.neg();

    let mut det = one.clone();
    for (c, m) in q.entries.iter() {
        if m.rem_euclid(2) == 1 {
            det = det.mul(c)?;
        }
    }
    if q.hyperbolic.rem_euclid(2) == 1 {
        det = det.mul(&minus_one)?;
    }
    let r = rank;
    let sign_exp = (r * (r - 1) / 2).rem_euclid(2);
    let signed_discriminant = if sign_exp == 1 { det.mul(&minus_one)? } else { det.clone() };

    let signature = match field {
        FieldId::Rationals => {
            let mut s = 0i64;
            for (c, m) in q.entries.iter() {
                let sign = c.representative().rat_sign().expect("rational representative");
                s += *m * sign as i64;
            }
            Some(s)
        }
        _ => None,
    };

    let (hasse_positive, hasse_negative) = if field == FieldId::Rationals {
        let (pos, neg) = q.split();
        let primes = relevant_primes(q.entries.keys().cloned())?;
        let pos_diag = pos.expanded_diagonal()?;
        let neg_diag = neg.expanded_diagonal()?;
        let mut hp = BTreeMap::new();
        let mut hn = BTreeMap::new();
        for &p in &primes {
            hp.insert(p, hasse_invariant(&pos_diag, p));
            if !neg.is_zero_class() {
                hn.insert(p, hasse_invariant(&neg_diag, p));
            }
        }
        (Some(hp), if neg.is_zero_class() { None } else { Some(hn) })
    } else {
        (None, None)
    };

    Ok(GWInvariants {
        rank,
        signature,
        signed_discriminant,
        determinant: det,
        hasse_positive,
        hasse_negative,
    })
}

// ---------------------------------------------------------------------------
// equality

/// One compared invariant in an equality certificate.
#[derive(Debug, Clone)]
pub struct ComparedInvariant {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

/// The certificate behind a gw_equal verdict: every invariant compared, on
/// the two genuine forms obtained by splitting the difference class.
#[derive(Debug, Clone)]
pub struct EqualityCertificate {
    pub field: FieldId,
    pub equal: bool,
    pub compared: Vec<ComparedInvariant>,
}

/// Decides q1 = q2 in GW(k) for k = Q (complete, via Hasse-Minkowski on the
/// difference) or k = F_p (rank and discriminant). Refused over k(t).
pub fn gw_equal(q1: &GWClass, q2: &GWClass) -> Result<EqualityCertificate> {
    if q1.field() != q2.field() {
        return Err(Error::MixedFields(q1.field(), q2.field()));
    }
    let field = q1.field();
    let mut compared = Vec::new();
    let push = |name: &str, lhs: String, rhs: String, compared: &mut Vec<ComparedInvariant>| {
        let equal = lhs == rhs;
        compared.push(ComparedInvariant { name: name.to_string(), lhs, rhs, equal });
        equal
    };
    match field {
        FieldId::Rationals => {
            // q1 = q2 iff the difference splits as pos = neg of genuine forms
            let diff = q1.sub(q2)?;
            let (pos, neg) = diff.split();
            let mut equal = true;
            equal &= push("rank", pos.rank().to_string(), neg.rank().to_string(), &mut compared);
            let ip = invariants(&pos)?;
            let iq = invariants(&neg)?;
            equal &= push(
                "signature",
                format!("{:?}", ip.signature),
                format!("{:?}", iq.signature),
                &mut compared,
            );
            equal &= push(
                "signed_discriminant",
                ip.signed_discriminant.to_string(),
                iq.signed_discriminant.to_string(),
                &mut compared,
            );
            let pos_diag = pos.expanded_diagonal()?;
            let neg_diag = neg.expanded_diagonal()?;
            let primes = relevant_primes(
                pos.entries.keys().cloned().chain(neg.entries.keys().cloned()),
            )?;
            for p in primes {
                equal &= push(
                    &format!("hasse_{p}"),
                    hasse_invariant(&pos_diag, p).to_string(),
                    hasse_invariant(&neg_diag, p).to_string(),
                    &mut compared,
                );
            }
            Ok(EqualityCertificate { field, equal, compared })
        }
        FieldId::PrimeField(_) => {
            let i1 = invariants(q1)?;
            let i2 = invariants(q2)?;
            let mut equal = true;
            equal &= push("rank", i1.rank.to_string(), i2.rank.to_string(), &mut compared);
            equal &= push(
                "discriminant",
                i1.determinant.to_string(),
                i2.determinant.to_string(),
                &mut compared,
            );
            Ok(EqualityCertificate { field, equal, compared })
        }
        other => Err(Error::UnsupportedField(other)),
    }
}

// ---------------------------------------------------------------------------
// JSON

/// Serializes a class with its defined invariants into the stable JSON shape
/// consumed by the CLI and the acceptance tests.
pub fn gw_to_json(q: &GWClass) -> Result<serde_json::Value> {
    let mut obj = serde_json::Map::new();
    obj.insert("field".into(), serde_json::Value::String(q.field().to_string()));
    let entries: Vec<serde_json::Value> = q
        .entries
        .iter()
        .map(|(c, m)| {
            serde_json::json!({ "class": c.representative().to_string(), "mult": m })
        })
        .collect();
    obj.insert("entries".into(), serde_json::Value::Array(entries));
    obj.insert("hyperbolic".into(), serde_json::json!(q.hyperbolic));
    obj.insert("rank".into(), serde_json::json!(q.rank()));
    if matches!(q.field(), FieldId::Rationals | FieldId::PrimeField(_)) {
        let inv = invariants(q)?;
        if let Some(s) = inv.signature {
            obj.insert("signature".into(), serde_json::json!(s));
        }
        obj.insert(
            "disc".into(),
            serde_json::Value::String(inv.signed_discriminant.to_string()),
        );
        if let Some(h) = inv.hasse_positive {
            let map: serde_json::Map<String, serde_json::Value> =
                h.iter().map(|(p, s)| (p.to_string(), serde_json::json!(s))).collect();
            obj.insert("hasse".into(), serde_json::Value::Object(map));
        }
        if let Some(h) = inv.hasse_negative {
            let map: serde_json::Map<String, serde_json::Value> =
                h.iter().map(|(p, s)| (p.to_string(), serde_json::json!(s))).collect();
            obj.insert("hasse_negative".into(), serde_json::Value::Object(map));
        }
    }
    Ok(serde_json::Value::Object(obj))
}

/// Parses a class back from its JSON form (field, entries, hyperbolic).
pub fn gw_from_json(v: &serde_json::Value) -> Result<GWClass> {
    let obj = v.as_object().ok_or_else(|| Error::InvalidInput("expected object".into()))?;
    let field_str = obj
        .get("field")
        .and_then(|f| f.as_str())
        .ok_or_else(|| Error::InvalidInput("missing field".into()))?;
    let field = parse_field_id(field_str)?;
    let mut q = GWClass::zero(field);
    let entries = obj
        .get("entries")
        .and_then(|e| e.as_array())
        .ok_or_else(|| Error::InvalidInput("missing entries".into()))?;
    for e in entries {
        let class_str = e
            .get("class")
            .and_then(|c| c.as_str())
            .ok_or_else(|| Error::InvalidInput("missing class".into()))?;
        let mult = e
            .get("mult")
            .and_then(|m| m.as_i64())
            .ok_or_else(|| Error::InvalidInput("missing mult".into()))?;
        let scalar = crate::parse::parse_scalar(class_str, field)?;
        if scalar.is_zero() {
            return Err(Error::ZeroEntry);
        }
        *q.entries.entry(square_class(&scalar)?).or_insert(0) += mult;
    }
    q.hyperbolic = obj.get("hyperbolic").and_then(|h| h.as_i64()).unwrap_or(0);
    q.canonicalize();
    Ok(q)
}

/// Parses a field tag: `Q`, `Fp:<p>` or `Qt`.
pub fn parse_field_id(s: &str) -> Result<FieldId> {
    if s == "Q" {
        Ok(FieldId::Rationals)
    } else if s == "Qt" {
        Ok(FieldId::RationalFunctions)
    } else if let Some(p) = s.strip_prefix("Fp:") {
        if let Some(pt) = p.strip_suffix("(t)") {
            let p: u64 = pt.parse().map_err(|_| Error::InvalidInput(format!("bad prime {pt}")))?;
            Ok(FieldId::prime_field(p)?.function_field()?)
        } else {
            let p: u64 = p.parse().map_err(|_| Error::InvalidInput(format!("bad prime {p}")))?;
            FieldId::prime_field(p)
        }
    } else {
        Err(Error::InvalidInput(format!("unknown field `{s}`")))
    }
}
