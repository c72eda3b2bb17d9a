//! Closed-form constants feeding the angle bound `ε_n`.

use serde::{Deserialize, Serialize};

use crate::dense::{self, DenseMatrix};
use crate::error::{invalid, Result};
use crate::mps::transfer::{self, spin_dot_spin, AkltTransfer};

/// Boundary Gram operators for the AKLT patch.
#[derive(Clone, Debug)]
pub struct QMatrices {
    /// `Q_L = E_L(1)`.
    pub q_left: DenseMatrix,
    /// `Q_R = E_R^t(ρ)`.
    pub q_right: DenseMatrix,
    pub q_l: f64,
    pub q_r: f64,
    /// `‖E_L‖ = ‖Q_L‖` (completely positive maps attain their norm at 1).
    pub norm_el: f64,
    /// `‖E_R‖ = ‖E_L^t‖ = ‖E_L‖`.
    pub norm_er: f64,
    /// Largest entrywise gap between the composed `Q_L` and
    /// `1 + 4·3^{−(2n+1)} S·S`.
    pub closed_form_defect: f64,
}

/// `1 + 4·3^{−(2n+1)} S·S`.
pub fn aklt_q_left_closed_form(n: u32) -> DenseMatrix {
    let c = 4.0 * 3f64.powi(-(2 * n as i32 + 1));
    dense::add(&dense::identity(4), &dense::scale(dense::re(c), &spin_dot_spin()))
}

pub fn q_matrices(n: u32) -> Result<QMatrices> {
    let t = AkltTransfer::new(n)?;
    q_matrices_from(&t)
}

pub fn q_matrices_from(t: &AkltTransfer) -> Result<QMatrices> {
    let rho = transfer::fixed_point(&t.bulk)?.rho;
    let q_left = dense::hermitian_part(&t.left.apply(&dense::identity(2))?);
    let q_right = dense::hermitian_part(&t.right.transpose().apply(&rho)?);
    let left_spec = dense::hermitian_eigenvalues(&q_left)?;
    let right_spec = dense::hermitian_eigenvalues(&q_right)?;
    let norm_el = *left_spec.last().expect("4x4");
    Ok(QMatrices {
        closed_form_defect: dense::max_abs_diff(&q_left, &aklt_q_left_closed_form(t.n)),
        q_l: left_spec[0],
        q_r: right_spec[0],
        norm_el,
        norm_er: norm_el,
        q_left,
        q_right,
    })
}

/// Model data entering the bounds. `d` is the chain bond dimension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub a_n: f64,
    pub d: usize,
    pub rho_min: f64,
    pub trace_rho_inv: f64,
    pub q_l: f64,
    pub q_r: f64,
    pub norm_el: f64,
    pub norm_er: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSuite {
    pub n: u32,
    pub a_n: f64,
    pub b_n: f64,
    pub q_l: f64,
    pub q_r: f64,
    pub rho_min: f64,
    pub norm_el: f64,
    pub norm_er: f64,
    pub b_l: f64,
    pub b_r: f64,
    pub b_g: f64,
    pub b_lr: f64,
    /// `b(n)/√(1 − b_LR(n))`; for the AKLT model this is `A_n`.
    pub delta: f64,
    pub eps_bound: f64,
    pub valid: bool,
    pub invalid_reason: Option<String>,
}

impl BoundSuite {
    /// Generic entry point: any model with the stated constants.
    pub fn from_inputs(n: u32, x: &BoundInputs) -> Result<Self> {
        let positive = [("rho_min", x.rho_min), ("q_L", x.q_l), ("q_R", x.q_r)];
        if let Some((name, v)) = positive.iter().find(|(_, v)| !(*v > 0.0)) {
            return invalid(format!("{name} must be positive, got {v}"));
        }
        let d2 = (x.d * x.d) as f64;
        let b_n = x.a_n * x.trace_rho_inv;
        let b_l = x.a_n * d2 * x.norm_el / (x.rho_min * x.q_l);
        let b_r = x.a_n * d2 * x.norm_er / x.q_r;
        let b_g = x.a_n * d2 * x.norm_el * x.norm_er / (x.q_l * x.q_r);
        let b_lr = b_l + b_r - b_l * b_r;
        let (delta, eps_bound, invalid_reason) = if b_l >= 1.0 || b_r >= 1.0 {
            (
                f64::NAN,
                f64::NAN,
                Some(format!(
                    "norm-equivalence constants b_L = {b_l:.6}, b_R = {b_r:.6} are not below 1; \
                     the bound needs n >= 3 (n = {n})"
                )),
            )
        } else {
            let delta = b_n / (1.0 - b_lr).sqrt();
            let eps = delta + delta * delta * (1.0 + b_g);
            let reason = (eps >= 1.0 / 3.0).then(|| {
                format!("epsilon bound {eps:.6} is not below 1/3; the bound needs n >= 3 (n = {n})")
            });
            (delta, eps, reason)
        };
        Ok(Self {
            n,
            a_n: x.a_n,
            b_n,
            q_l: x.q_l,
            q_r: x.q_r,
            rho_min: x.rho_min,
            norm_el: x.norm_el,
            norm_er: x.norm_er,
            b_l,
            b_r,
            b_g,
            b_lr,
            delta,
            eps_bound,
            valid: invalid_reason.is_none(),
            invalid_reason,
        })
    }

    /// Suite for the decorated AKLT model, every constant computed from the
    /// tensors (a(n) by singular values, ρ by the fixed-point solver, Q by
    /// composing the boundary maps).
    pub fn aklt(n: u32) -> Result<Self> {
        let t = AkltTransfer::new(n)?;
        let fp = transfer::fixed_point(&t.bulk)?;
        let rho_spec = dense::hermitian_eigenvalues(&fp.rho)?;
        let q = q_matrices_from(&t)?;
        let inputs = BoundInputs {
            a_n: transfer::a_of_n(&t.bulk, &fp.rho, n)?,
            d: 2,
            rho_min: rho_spec[0],
            trace_rho_inv: rho_spec.iter().map(|x| 1.0 / x).sum(),
            q_l: q.q_l,
            q_r: q.q_r,
            norm_el: q.norm_el,
            norm_er: q.norm_er,
        };
        Self::from_inputs(n, &inputs)
    }

    /// The same suite from the closed forms alone (`a = 3^{−n}`,
    /// `q_L = 1 − 3^{−2n}`, `‖E_L‖ = 1 + 3^{−2n−1}`, `ρ = 1/2`).
    pub fn aklt_closed_form(n: u32) -> Result<Self> {
        let ni = n as i32;
        let q_l = 1.0 - 3f64.powi(-2 * ni);
        let norm = 1.0 + 3f64.powi(-2 * ni - 1);
        let inputs = BoundInputs {
            a_n: 3f64.powi(-ni),
            d: 2,
            rho_min: 0.5,
            trace_rho_inv: 4.0,
            q_l,
            q_r: q_l / 2.0,
            norm_el: norm,
            norm_er: norm,
        };
        Self::from_inputs(n, &inputs)
    }
}

/// Result of the closed-form angle bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonBound {
    pub n: u32,
    /// `A_n`; NaN when its denominator is not positive.
    pub a_big: f64,
    pub eps: f64,
    pub valid: bool,
    pub reason: Option<String>,
}

/// `A_n = 4 / (3^n (1 − 8(1+3^{−2n−1}) / (3^n (1−3^{−2n}))))` and
/// `ε ≤ A_n + A_n² (1 + 8(1+3^{−2n−1})² / (3^n (1−3^{−2n})²))`.
pub fn epsilon_bound(n: u32) -> Result<EpsilonBound> {
    if n == 0 {
        return invalid("decoration number n must be at least 1");
    }
    let ni = n as i32;
    let p = 3f64.powi(ni);
    let up = 1.0 + 3f64.powi(-2 * ni - 1);
    let down = 1.0 - 3f64.powi(-2 * ni);
    let one_minus_bl = 1.0 - 8.0 * up / (p * down);
    if one_minus_bl <= 0.0 {
        return Ok(EpsilonBound {
            n,
            a_big: f64::NAN,
            eps: f64::NAN,
            valid: false,
            reason: Some(format!(
                "1 - b_L(n) = {one_minus_bl:.6} is not positive; the bound needs n >= 3 (n = {n})"
            )),
        });
    }
    let a_big = 4.0 / (p * one_minus_bl);
    let eps = a_big + a_big * a_big * (1.0 + 8.0 * up * up / (p * down * down));

    // Same number through the general route 4a/√(1 − b_LR), b_L = b_R.
    let suite = BoundSuite::aklt_closed_form(n)?;
    let delta = 4.0 * 3f64.powi(-ni) / (1.0 - suite.b_lr).sqrt();
    debug_assert!((delta - a_big).abs() <= 1e-12 * a_big.max(1.0));

    let reason = (eps >= 1.0 / 3.0).then(|| {
        format!("epsilon bound {eps:.6} is not below 1/3; the bound needs n >= 3 (n = {n})")
    });
    Ok(EpsilonBound { n, a_big, eps, valid: reason.is_none(), reason })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_constants() {
        let x = BoundInputs {
            a_n: 0.1,
            d: 2,
            rho_min: 0.0,
            trace_rho_inv: 4.0,
            q_l: 1.0,
            q_r: 1.0,
            norm_el: 1.0,
            norm_er: 1.0,
        };
        assert!(BoundSuite::from_inputs(1, &x).is_err());
    }

    #[test]
    fn n_one_denominator_is_negative() {
        let e = epsilon_bound(1).unwrap();
        assert!(!e.valid);
        assert!(e.reason.unwrap().contains("n >= 3"));
    }
}
