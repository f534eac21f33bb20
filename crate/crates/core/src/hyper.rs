//! Closed-form quadratic Euler characteristics of smooth hypersurfaces in
//! projective and weighted projective space, and of projective cones via
//! chi_c of the blow-up square.

use crate::error::{Error, Result};
use crate::gw::GWClass;
use crate::jacobian::{hilbert_series_ci, JacobianRing};
use crate::linalg::dense_rank;
use crate::poly::Poly;
use crate::scalars::Scalar;

/// A validated smooth (quotient) hypersurface Y = {F = 0} in P(a_*), with
/// its Jacobian ring. `dim` is the hypersurface dimension: #variables - 2.
#[derive(Debug)]
pub struct HypersurfaceData {
    jacobian: JacobianRing,
    dim: i64,
    warnings: Vec<String>,
}

impl HypersurfaceData {
    /// Validates grading hypotheses and the smooth-quotient condition.
    ///
    /// For genuinely weighted input, smoothness of Y itself (not only of the
    /// quotient) is the caller's responsibility; the constructor checks the
    /// usual sufficient conditions and records warnings where they fail.
    pub fn new(f: &Poly) -> Result<HypersurfaceData> {
        let ring = f.ring();
        if ring.num_vars() < 2 {
            return Err(Error::WeightsInvalid("a hypersurface needs >= 2 variables".into()));
        }
        let weights = ring.weights();
        let gcd = weights.iter().fold(0u32, |g, &w| num_integer::gcd(g, w));
        if gcd != 1 {
            return Err(Error::WeightsInvalid(format!("gcd of weights is {gcd}, not 1")));
        }
        let jacobian = JacobianRing::build(f)?;
        let e = jacobian.degree();
        let lcm = weights.iter().fold(1i64, |l, &w| num_integer::lcm(l, w as i64));
        if e % lcm != 0 {
            return Err(Error::WeightsInvalid(format!(
                "degree {e} is not divisible by lcm of weights {lcm}"
            )));
        }
        if !jacobian.is_smooth_quotient() {
            return Err(Error::NotSmooth(
                "Jacobian ideal is not irrelevant-primary (singular hypersurface)".into(),
            ));
        }
        let dim = ring.num_vars() as i64 - 2;

        // Heuristics for smoothness of Y itself in the weighted case: the
        // singular points of P(a_*) are the vertices with weight > 1; a pure
        // power Y_i^{e/a_i} keeps the vertex off the hypersurface.
        let mut warnings = Vec::new();
        for (i, &a) in weights.iter().enumerate() {
            if a == 1 {
                continue;
            }
            if e % (a as i64) != 0 {
                warnings.push(format!(
                    "weight {a} of {} does not divide the degree; vertex {i} needs a separate smoothness check",
                    ring.variables()[i]
                ));
                continue;
            }
            let power = (e / a as i64) as u32;
            let has_pure_power = f.terms().any(|(m, _)| {
                m.exponents().iter().enumerate().all(|(j, &ex)| {
                    if j == i {
                        ex == power
                    } else {
                        ex == 0
                    }
                })
            });
            if !has_pure_power {
                warnings.push(format!(
                    "no pure power {}^{} term: the singular vertex {i} of the ambient may lie on Y",
                    ring.variables()[i],
                    power
                ));
            }
        }
        if dim >= 3 {
            for i in 0..weights.len() {
                for j in i + 1..weights.len() {
                    if num_integer::gcd(weights[i], weights[j]) != 1 {
                        warnings.push(format!(
                            "weights {} and {} are not coprime; for n >= 3 smoothness of Y itself requires pairwise coprime weights",
                            weights[i], weights[j]
                        ));
                    }
                }
            }
        }
        Ok(HypersurfaceData { jacobian, dim, warnings })
    }

    pub fn jacobian(&self) -> &JacobianRing {
        &self.jacobian
    }

    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn degree(&self) -> i64 {
        self.jacobian.degree()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn field(&self) -> crate::scalars::FieldId {
        self.jacobian.ring().field()
    }

    /// e * prod(a_i) as a scalar.
    fn e_times_weight_product(&self) -> Scalar {
        Scalar::from_int(
            self.degree() * self.jacobian.ring().weight_product(),
            self.field(),
        )
    }

    /// The quadratic Euler characteristic chi(Y/k) in GW(k).
    ///
    /// For even n = 2m this is <e prod a_i> + m H + <-e> q_prim with q_prim
    /// the Jacobian form on the primitive degrees. For odd n the middle
    /// cohomology pairs distinct degrees, so the class is an integer multiple
    /// of H determined by rank bookkeeping: ((n+1) - rank q_prim)/2.
    pub fn chi_smooth(&self) -> Result<GWClass> {
        let field = self.field();
        let n = self.dim;
        let e = Scalar::from_int(self.degree(), field);
        if n % 2 == 0 {
            let q_prim = self.jacobian.jacobian_form_primitive(n)?;
            let lead = GWClass::rank_one(&self.e_times_weight_product())?;
            let off_middle = GWClass::hyperbolic(field, n / 2);
            lead.add(&off_middle)?.add(&q_prim.scale(&(-&e))?)
        } else {
            // primitive pieces pair complementary degrees d_q + d_{n-q} = N
            let degrees = self.jacobian.primitive_degrees(n);
            let mut rank = 0i64;
            for &d in &degrees {
                let partner = self.jacobian.socle_degree() - d;
                let dim_d = self.jacobian.dim_in_degree(d);
                let dim_p = if partner >= 0 { self.jacobian.dim_in_degree(partner) } else { 0 };
                if dim_d != dim_p {
                    return Err(Error::OddRankPrimitive(format!(
                        "dim J_{d} = {dim_d} but dim J_{partner} = {dim_p}"
                    )));
                }
                if d < partner && dim_d > 0 {
                    let gram = self.jacobian.gram_matrix(&[d, partner])?;
                    if dense_rank(&gram) != 2 * dim_d {
                        return Err(Error::OddRankPrimitive(format!(
                            "pairing between degrees {d} and {partner} is degenerate"
                        )));
                    }
                }
                rank += dim_d as i64;
            }
            if rank % 2 != 0 {
                return Err(Error::OddRankPrimitive(format!("odd primitive rank {rank}")));
            }
            Ok(GWClass::hyperbolic(field, (n + 1 - rank) / 2))
        }
    }

    /// chi_c of the projective cone over this hypersurface:
    /// <1> + <-1> chi(Y/k), from the blow-up square of the vertex.
    pub fn chi_c_cone(&self) -> Result<GWClass> {
        let field = self.field();
        let chi = self.chi_smooth()?;
        let minus_one = Scalar::from_int(-1, field);
        GWClass::rank_one(&Scalar::one(field))?.add(&chi.scale(&minus_one)?)
    }

    /// Rank of chi(Y/k) predicted purely by the closed-form Hilbert series
    /// prod (1-T^{e-a_i})/(1-T^{a_i}): (n+1) + (-1)^n sum of primitive dims.
    /// Never touches the linear algebra or GW code.
    pub fn hodge_rank_oracle(&self) -> i64 {
        let ring = self.jacobian.ring();
        let e = self.degree();
        let n = self.dim;
        let socle = ring.num_vars() as i64 * e - 2 * ring.weight_sum();
        let series = hilbert_series_ci(ring.weights(), e, socle.max(0));
        let mut prim = 0i64;
        for q in 0..=n {
            let d = (q + 1) * e - ring.weight_sum();
            if (0..=socle).contains(&d) {
                prim += series[d as usize];
            }
        }
        let sign = if n % 2 == 0 { 1 } else { -1 };
        (n + 1) + sign * prim
    }

    /// JSON report: input echo, Hilbert data, primitive degrees and dims,
    /// chi as a GW class, warnings.
    pub fn report_json(&self) -> Result<serde_json::Value> {
        let chi = self.chi_smooth()?;
        let degrees = self.jacobian.primitive_degrees(self.dim);
        let dims: Vec<usize> = degrees.iter().map(|&d| self.jacobian.dim_in_degree(d)).collect();
        Ok(serde_json::json!({
            "field": self.field().to_string(),
            "variables": self.jacobian.ring().variables(),
            "weights": self.jacobian.ring().weights(),
            "polynomial": self.jacobian.polynomial().to_string(),
            "degree": self.degree(),
            "dim": self.dim,
            "socle_degree": self.jacobian.socle_degree(),
            "hilbert_function": self.jacobian.hilbert_function(self.jacobian.socle_degree()),
            "primitive_degrees": degrees,
            "primitive_dims": dims,
            "chi": crate::gw::gw_to_json(&chi)?,
            "hodge_rank_oracle": self.hodge_rank_oracle(),
            "warnings": self.warnings,
        }))
    }
}
