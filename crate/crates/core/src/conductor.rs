//! Both sides of the quadratic conductor formulas for cone degenerations
//! F_t = F - t X_{n+1}^e, plus the relative-dimension-zero (ramification)
//! case.
//!
//! The two sides share nothing beyond scalar, polynomial and GW primitives:
//! the left-hand side runs through the Jacobian ring of F_t over k(t), the
//! specialization map and the cone formula; the right-hand side through the
//! affine Milnor algebra of F over k. The comparison is only evidence
//! because the routes are independent.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gw::{gw_equal, gw_to_json, GWClass};
use crate::hyper::HypersurfaceData;
use crate::jacobian::JacobianRing;
use crate::poly::{Poly, WeightedRing};
use crate::scalars::{FieldId, Scalar};

/// The degeneration of a smooth hypersurface in P(a_*, 1) to the cone over
/// {F = 0} in P(a_*). `F` lives in variables X_0..X_n of weights a_0..a_n;
/// the family is F_t = F - t X_{n+1}^e over k(t).
#[derive(Debug)]
pub struct ConeFamily {
    /// The special hyperplane section {F = 0} in P(a_*), dimension n - 1.
    base: HypersurfaceData,
    /// Relative dimension of the family (= #variables of F).
    n: i64,
}

impl ConeFamily {
    pub fn new(f: &Poly) -> Result<ConeFamily> {
        match f.ring().field() {
            FieldId::Rationals | FieldId::PrimeField(_) => {}
            other => return Err(Error::UnsupportedField(other)),
        }
        let base = HypersurfaceData::new(f)?;
        let n = f.ring().num_vars() as i64 - 1;
        Ok(ConeFamily { base, n })
    }

    pub fn base(&self) -> &HypersurfaceData {
        &self.base
    }

    /// Fiber dimension n of the family.
    pub fn fiber_dim(&self) -> i64 {
        self.n
    }

    pub fn field(&self) -> FieldId {
        self.base.jacobian().ring().field()
    }

    pub fn degree(&self) -> i64 {
        self.base.degree()
    }

    /// The affine Milnor algebra k[X_0..X_n]/(dF) of the cone point; by the
    /// Euler relation this is the Jacobian ring of F itself.
    pub fn milnor_algebra(&self) -> &JacobianRing {
        self.base.jacobian()
    }

    /// The generic fiber {F - t X_{n+1}^e = 0} in P(a_*, 1) over k(t).
    pub fn generic_fiber(&self) -> Result<HypersurfaceData> {
        let ring = self.base.jacobian().ring();
        let fun_field = ring.field().function_field()?;
        let name = fresh_variable(ring.variables());
        let ring_t = ring.with_field(fun_field).extended(&name, 1)?;
        let lifted = lift_poly(self.base.jacobian().polynomial(), &ring_t)?;
        let mut exps = vec![0u32; ring_t.num_vars()];
        exps[ring_t.num_vars() - 1] = self.degree() as u32;
        let t = Scalar::t(fun_field)?;
        let cone_term = Poly::from_term(
            &ring_t,
            crate::poly::Monomial::new(exps),
            -&t,
        );
        let f_t = lifted.add(&cone_term);
        HypersurfaceData::new(&f_t).map_err(|e| match e {
            Error::NotSmooth(_) => Error::NotSmoothGenericFiber,
            other => other,
        })
    }

    /// sp_t chi_c(X_t/K) - chi_c(X_0/k), computed from the generic fiber
    /// over k(t) and the cone formula; independent of the right-hand side.
    pub fn delta_lhs(&self) -> Result<GWClass> {
        let fiber = self.generic_fiber()?;
        let chi_generic = fiber.chi_smooth()?;
        let specialized = chi_generic.specialize()?;
        let chi_c_special = self.base.chi_c_cone()?;
        specialized.sub(&chi_c_special)
    }

    /// The closed form <e prod a_i> - <1> + (-<e>)^n [q_{J_F}] with q_{J_F}
    /// the Scheja-Storch form on the affine Milnor algebra.
    pub fn delta_rhs(&self) -> Result<GWClass> {
        let field = self.field();
        let ring = self.base.jacobian().ring();
        let e_a = Scalar::from_int(self.degree() * ring.weight_product(), field);
        let milnor_form = self.milnor_algebra().jacobian_form_full()?;
        let e = Scalar::from_int(self.degree(), field);
        GWClass::rank_one(&e_a)?
            .sub(&GWClass::rank_one(&Scalar::one(field))?)?
            .add(&milnor_form.sign_power(&e, self.n)?)
    }
}

fn fresh_variable(used: &[String]) -> String {
    for cand in ["w", "v", "u", "s"] {
        if !used.iter().any(|v| v == cand) {
            return cand.to_string();
        }
    }
    (0..).map(|k| format!("w{k}")).find(|c| !used.iter().any(|v| v == c)).unwrap()
}

fn lift_poly(f: &Poly, target: &WeightedRing) -> Result<Poly> {
    let field = target.field();
    let mut out = Poly::zero(target);
    for (m, c) in f.terms() {
        let mut exps = m.exponents().to_vec();
        exps.resize(target.num_vars(), 0);
        let lifted = match c {
            Scalar::Rat(q) => Scalar::from_rational(q.clone(), field)?,
            Scalar::Fp { value, .. } => Scalar::from_int(*value as i64, field),
            Scalar::Fun(_) => return Err(Error::UnsupportedField(c.field())),
        };
        out = out.add(&Poly::from_term(target, crate::poly::Monomial::new(exps), lifted));
    }
    Ok(out)
}

/// The full conductor comparison for one family.
#[derive(Debug)]
pub struct ConductorReport {
    pub field: FieldId,
    pub polynomial: String,
    pub weights: Vec<u32>,
    pub degree: i64,
    pub lhs: GWClass,
    pub rhs: GWClass,
    pub equal: bool,
    pub certificate: crate::gw::EqualityCertificate,
    /// rnk Delta = (-1)^n dim_k J_F.
    pub rank_identity: bool,
    pub milnor_dimension: usize,
    pub fiber_dim: i64,
    /// Set over F_p, where GW equality by rank and discriminant is coarser
    /// than over Q.
    pub partial_evidence: bool,
    pub elapsed_ms: u128,
}

/// Runs both sides and the rank identity for a cone family.
pub fn conductor_check(fam: &ConeFamily) -> Result<ConductorReport> {
    let start = Instant::now();
    let lhs = fam.delta_lhs()?;
    let rhs = fam.delta_rhs()?;
    let certificate = gw_equal(&lhs, &rhs)?;
    let milnor_dimension = fam.milnor_algebra().total_dimension();
    let sign = if fam.fiber_dim() % 2 == 0 { 1 } else { -1 };
    let rank_identity = lhs.rank() == sign * milnor_dimension as i64;
    Ok(ConductorReport {
        field: fam.field(),
        polynomial: fam.milnor_algebra().polynomial().to_string(),
        weights: fam.milnor_algebra().ring().weights().to_vec(),
        degree: fam.degree(),
        equal: certificate.equal,
        rank_identity,
        milnor_dimension,
        fiber_dim: fam.fiber_dim(),
        partial_evidence: matches!(fam.field(), FieldId::PrimeField(_)),
        elapsed_ms: start.elapsed().as_millis(),
        lhs,
        rhs,
        certificate,
    })
}

impl ConductorReport {
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let compared: Vec<serde_json::Value> = self
            .certificate
            .compared
            .iter()
            .map(|c| {
                serde_json::json!({
                    "invariant": c.name,
                    "lhs": c.lhs,
                    "rhs": c.rhs,
                    "equal": c.equal,
                })
            })
            .collect();
        Ok(serde_json::json!({
            "field": self.field.to_string(),
            "poly": self.polynomial,
            "weights": self.weights,
            "degree": self.degree,
            "lhs": gw_to_json(&self.lhs)?,
            "rhs": gw_to_json(&self.rhs)?,
            "equal": self.equal,
            "invariants_compared": compared,
            "rank_identity": self.rank_identity,
            "milnor_dimension": self.milnor_dimension,
            "fiber_dim": self.fiber_dim,
            "partial_evidence": self.partial_evidence,
            "elapsed_ms": self.elapsed_ms,
        }))
    }
}

/// Relative dimension zero: A = k[[s]] over O = k[[t]] with s^e = a t.
#[derive(Debug, Clone)]
pub struct Dim0Family {
    pub e: i64,
    pub a: BigRational,
}

impl Dim0Family {
    pub fn new(e: i64, a: BigRational) -> Result<Dim0Family> {
        if e < 2 {
            return Err(Error::InvalidInput(format!("ramification index {e} must be >= 2")));
        }
        if a.is_zero() {
            return Err(Error::ZeroScalar);
        }
        Ok(Dim0Family { e, a })
    }

    /// The trace form of K[s]/(s^e - a t) over K = Q(t): Gram entries
    /// Tr(s^{i+j}) with Tr(s^m) = e (a t)^{m/e} when e | m, else 0.
    pub fn trace_form(&self) -> Result<GWClass> {
        let k = FieldId::RationalFunctions;
        let e = self.e as usize;
        let at = Scalar::t(k)?.checked_mul(&Scalar::from_rational(self.a.clone(), k)?)?;
        let es = Scalar::from_int(self.e, k);
        let trace = |m: usize| -> Result<Scalar> {
            if m.is_multiple_of(e) {
                let mut acc = es.clone();
                for _ in 0..m / e {
                    acc = acc.checked_mul(&at)?;
                }
                Ok(acc)
            } else {
                Ok(Scalar::zero(k))
            }
        };
        let mut gram = vec![vec![Scalar::zero(k); e]; e];
        for i in 0..e {
            for j in 0..e {
                gram[i][j] = trace(i + j)?;
            }
        }
        let (class, _, _) = crate::gw::diagonalize(k, &gram)?;
        Ok(class)
    }

    /// The local Euler class e_0(Omega^1, dt): (e-1)/2 H for odd e,
    /// <e a> + (e-2)/2 H for even e.
    pub fn euler_class(&self) -> Result<GWClass> {
        let field = FieldId::Rationals;
        if self.e % 2 == 1 {
            Ok(GWClass::hyperbolic(field, (self.e - 1) / 2))
        } else {
            let ea = Scalar::from_rational(
                BigRational::from_integer(self.e.into()) * &self.a,
                field,
            )?;
            GWClass::rank_one(&ea)?.add(&GWClass::hyperbolic(field, (self.e - 2) / 2))
        }
    }

    /// Left side sp_t q_{A_K/K} - <1> versus right side <e> - <1> + euler
    /// class, with the gw_equal verdict.
    pub fn delta_check(&self) -> Result<(GWClass, GWClass, bool)> {
        let field = FieldId::Rationals;
        let one = GWClass::rank_one(&Scalar::one(field))?;
        let lhs = self.trace_form()?.specialize()?.sub(&one)?;
        let e_class = GWClass::rank_one(&Scalar::from_int(self.e, field))?;
        let rhs = e_class.sub(&one)?.add(&self.euler_class()?)?;
        let equal = gw_equal(&lhs, &rhs)?.equal;
        Ok((lhs, rhs, equal))
    }
}

// ---------------------------------------------------------------------------
// bundled corpus

/// One corpus entry: a cone family given by its defining data.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub field: String,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub poly: String,
}

impl CorpusEntry {
    pub fn parse_line(line: &str) -> Result<CorpusEntry> {
        let v: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| Error::InvalidInput(format!("bad corpus line: {e}")))?;
        let field = v["field"].as_str().unwrap_or("Q").to_string();
        let vars: Vec<String> = v["vars"]
            .as_array()
            .ok_or_else(|| Error::InvalidInput("corpus entry needs vars".into()))?
            .iter()
            .filter_map(|x| x.as_str().map(|s| s.to_string()))
            .collect();
        let weights: Vec<u32> = v["weights"]
            .as_array()
            .ok_or_else(|| Error::InvalidInput("corpus entry needs weights".into()))?
            .iter()
            .filter_map(|x| x.as_u64().map(|w| w as u32))
            .collect();
        let poly = v["poly"]
            .as_str()
            .ok_or_else(|| Error::InvalidInput("corpus entry needs poly".into()))?
            .to_string();
        Ok(CorpusEntry { field, vars, weights, poly })
    }

    pub fn family(&self) -> Result<ConeFamily> {
        let field = crate::gw::parse_field_id(&self.field)?;
        let ring = WeightedRing::new(field, self.vars.clone(), self.weights.clone())?;
        let f = crate::parse::parse_poly(&self.poly, &ring)?;
        ConeFamily::new(&f)
    }
}

/// The built-in conductor corpus: Fermat families of degree 2..5 in 2..4
/// base variables, one non-Fermat smooth example per (e, n), and the
/// weighted families (1,1,2)/e=4, (1,1,3)/e=6 and (1,2)/e=4.
pub fn bundled_corpus() -> Vec<CorpusEntry> {
    const RAW: &str = include_str!("../data/conductor_corpus.jsonl");
    RAW.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| CorpusEntry::parse_line(l).expect("bundled corpus is well-formed"))
        .collect()
}
