//! The gap certificate `gap(H) ≥ ½ γ_Y (1 − 3 ε_n)` and its reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::ed::angles::{epsilon_exact, HUB_KERNEL_DIM};
use crate::ed::eigen::EigenOptions;
use crate::ed::hub::gamma_y_with;
use crate::error::{invalid, Result};
use crate::mps::bounds::{epsilon_bound, BoundSuite};

pub const SCHEMA: &str = "gapcert/1";
/// Significant digits of every scalar in the json report.
pub const SIG_DIGITS: usize = 12;
/// Above this `n` the bound constants come from their closed forms: `a(n)`
/// sinks below the round-off of the transfer-operator route.
pub const NUMERIC_SUITE_MAX_N: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GammaMode {
    Compute,
    Supplied(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaSource {
    Computed,
    UserSupplied,
}

impl GammaSource {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Computed => "computed",
            Self::UserSupplied => "user-supplied",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub seed: u64,
    /// Also compute `ε_n` exactly (n ≤ 2, or n = 3 with `allow_large_n`).
    pub exact_epsilon: bool,
    pub allow_large_n: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { seed: crate::DEFAULT_SEED, exact_epsilon: false, allow_large_n: false }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapCertificate {
    pub n: u32,
    pub a_n: f64,
    pub b_n: f64,
    pub bound_suite: BoundSuite,
    pub a_big: f64,
    pub eps_bound: f64,
    pub eps_exact: Option<f64>,
    pub eps_exact_method: Option<String>,
    pub gamma_y: f64,
    pub gamma_y_source: GammaSource,
    pub gamma_y_kernel_dim: usize,
    /// `½ γ_Y (1 − 3 ε)` before clamping; NaN when the bound is undefined.
    pub gap_raw: f64,
    /// `max(0, gap_raw)`.
    pub gap_lower_bound: f64,
    pub valid: bool,
    pub invalid_reason: Option<String>,
    pub seed: u64,
    pub provenance: BTreeMap<String, String>,
}

pub fn certify(n: u32, mode: GammaMode) -> Result<GapCertificate> {
    certify_with(n, mode, &CertifyOptions::default())
}

pub fn certify_with(n: u32, mode: GammaMode, opts: &CertifyOptions) -> Result<GapCertificate> {
    if n == 0 {
        return invalid("decoration number n must be at least 1");
    }
    let mut prov = BTreeMap::new();
    let mut note = |k: &str, v: String| {
        prov.insert(k.to_string(), v);
    };

    let suite = if n <= NUMERIC_SUITE_MAX_N {
        note("bound_suite", "transfer operators of the AKLT tensors (a(n) from ‖E^n − |1><ρ|‖, ρ by fixed point, Q_L/Q_R by composition)".into());
        BoundSuite::aklt(n)?
    } else {
        note("bound_suite", format!("closed forms a = 3^-n, q_L = 1 - 3^-2n, ‖E_L‖ = 1 + 3^-(2n+1) (n > {NUMERIC_SUITE_MAX_N})"));
        BoundSuite::aklt_closed_form(n)?
    };
    let bound = epsilon_bound(n)?;
    note("a_n", "a(n) = ‖E^n − |1><ρ|‖".into());
    note("b_n", "b(n) = a(n) Tr ρ^-1".into());
    note("A_n", "A_n = 4 / (3^n (1 − 8(1+3^-(2n+1)) / (3^n (1−3^-2n))))".into());
    note("eps_bound", "ε_n ≤ A_n + A_n² (1 + 8(1+3^-(2n+1))² / (3^n (1−3^-2n)²))".into());

    let (gamma, source, kernel_dim) = match mode {
        GammaMode::Compute => {
            let eig = EigenOptions { seed: opts.seed, ..EigenOptions::default() };
            let g = gamma_y_with(n as usize, &eig)?;
            note(
                "gamma_Y",
                format!("gap_above_kernel(hamiltonian(Y-graph n={n}), 8) at dimension {}", g.hilbert_dim),
            );
            note("gamma_Y_kernel_dim", "counted: eigenvalues below 1e-8, next above 1e-4".into());
            (g.gamma, GammaSource::Computed, g.kernel_dim)
        }
        GammaMode::Supplied(v) => {
            if !v.is_finite() {
                return invalid(format!("supplied gamma_Y must be finite, got {v}"));
            }
            note("gamma_Y", "supplied by the user".into());
            note("gamma_Y_kernel_dim", "model value, not recomputed with a supplied gamma_Y".into());
            (v, GammaSource::UserSupplied, HUB_KERNEL_DIM)
        }
    };

    let (eps_exact, eps_exact_method) = if opts.exact_epsilon {
        let e = epsilon_exact(n as usize, opts.allow_large_n)?;
        note("eps_exact", "largest principal-angle cosine below the intersection cluster".into());
        (Some(e.eps), Some(e.method.tag().to_string()))
    } else {
        (None, None)
    };

    let gap_raw = 0.5 * gamma * (1.0 - 3.0 * bound.eps);
    note("gap_lower_bound", "max(0, ½ γ_Y (1 − 3 ε_bound))".into());
    let gap_lower_bound = if gap_raw.is_nan() { 0.0 } else { gap_raw.max(0.0) };

    let mut reasons = Vec::new();
    if !bound.valid {
        reasons.push(bound.reason.clone().unwrap_or_else(|| "epsilon bound invalid".into()));
    }
    if !(gamma > 0.0) {
        reasons.push(format!("gamma_Y = {gamma} is not positive"));
    }
    if kernel_dim != HUB_KERNEL_DIM {
        reasons.push(format!("kernel dimension {kernel_dim} differs from {HUB_KERNEL_DIM}"));
    }
    if let (Some(e), true) = (eps_exact, bound.valid) {
        if e > bound.eps + 1e-9 {
            reasons.push(format!("exact epsilon {e} exceeds the bound {}", bound.eps));
        }
    }
    let valid = reasons.is_empty();

    Ok(GapCertificate {
        n,
        a_n: suite.a_n,
        b_n: suite.b_n,
        a_big: bound.a_big,
        eps_bound: bound.eps,
        bound_suite: suite,
        eps_exact,
        eps_exact_method,
        gamma_y: gamma,
        gamma_y_source: source,
        gamma_y_kernel_dim: kernel_dim,
        gap_raw,
        gap_lower_bound,
        valid,
        invalid_reason: (!valid).then(|| reasons.join("; ")),
        seed: opts.seed,
        provenance: prov,
    })
}

/// `x` rounded to `SIG_DIGITS` significant digits; non-finite values become
/// `null`.
pub fn round_sig(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{:.*e}", SIG_DIGITS - 1, x);
    let y: f64 = text.parse().expect("formatted float parses");
    json!(y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

impl GapCertificate {
    pub fn to_json_value(&self) -> Value {
        let s = &self.bound_suite;
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("n".into(), json!(self.n));
        m.insert("a_n".into(), round_sig(self.a_n));
        m.insert("b_n".into(), round_sig(self.b_n));
        m.insert("b_L".into(), round_sig(s.b_l));
        m.insert("b_R".into(), round_sig(s.b_r));
        m.insert("b_G".into(), round_sig(s.b_g));
        m.insert("b_LR".into(), round_sig(s.b_lr));
        m.insert("A_n".into(), round_sig(self.a_big));
        m.insert("eps_bound".into(), round_sig(self.eps_bound));
        if let Some(e) = self.eps_exact {
            m.insert("eps_exact".into(), round_sig(e));
        }
        if let Some(method) = &self.eps_exact_method {
            m.insert("eps_exact_method".into(), json!(method));
        }
        m.insert("gamma_Y".into(), round_sig(self.gamma_y));
        m.insert("gamma_Y_source".into(), json!(self.gamma_y_source.as_str()));
        m.insert("gamma_Y_kernel_dim".into(), json!(self.gamma_y_kernel_dim));
        m.insert("gap_lower_bound".into(), round_sig(self.gap_lower_bound));
        m.insert("valid".into(), json!(self.valid));
        if let Some(r) = &self.invalid_reason {
            m.insert("invalid_reason".into(), json!(r));
        }
        m.insert("seed".into(), json!(self.seed));
        m.insert("versions".into(), json!({ "gapcert": env!("CARGO_PKG_VERSION") }));
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("json values serialize")
    }

    pub fn to_text(&self) -> String {
        let f = |x: f64| if x.is_finite() { format!("{x:.12}") } else { "undefined".to_string() };
        let s = &self.bound_suite;
        let mut t = String::new();
        let _ = writeln!(t, "gap certificate ({SCHEMA}), decoration number n = {}", self.n);
        let _ = writeln!(t);
        let _ = writeln!(t, "1. comparable model: 1/2 gamma_Y Htilde <= H <= |h_Y| Htilde");
        let _ = writeln!(
            t,
            "   gamma_Y = {} ({}, ker h_v of dimension {})",
            f(self.gamma_y),
            self.gamma_y_source.as_str(),
            self.gamma_y_kernel_dim
        );
        let _ = writeln!(t, "2. projector inequality: EF + FE >= -|EF - E^F| (E + F), with |EF - E^F| = epsilon_n");
        let _ = writeln!(t, "3. angle bound from the transfer operators:");
        let _ = writeln!(t, "   a(n)  = {}", f(self.a_n));
        let _ = writeln!(t, "   b(n)  = {}", f(self.b_n));
        let _ = writeln!(t, "   b_L   = {}   b_R = {}", f(s.b_l), f(s.b_r));
        let _ = writeln!(t, "   b_G   = {}   b_LR = {}", f(s.b_g), f(s.b_lr));
        let _ = writeln!(t, "   A_n   = {}", f(self.a_big));
        let _ = writeln!(t, "   epsilon_n <= {}", f(self.eps_bound));
        if let (Some(e), Some(m)) = (self.eps_exact, &self.eps_exact_method) {
            let _ = writeln!(t, "   epsilon_n (exact, {m}) = {}", f(e));
        }
        let holds = self.eps_bound < 1.0 / 3.0;
        let _ = writeln!(
            t,
            "   epsilon < 1/3: {} < {} {}",
            f(self.eps_bound),
            f(1.0 / 3.0),
            if holds { "holds" } else { "FAILS" }
        );
        let _ = writeln!(t, "4. gap(H) >= 1/2 gamma_Y (1 - 3 epsilon_n)");
        let _ = writeln!(t, "   raw value       = {}", f(self.gap_raw));
        let _ = writeln!(t, "   gap_lower_bound = {}", f(self.gap_lower_bound));
        let _ = writeln!(t);
        if self.valid {
            let status = match self.gamma_y_source {
                GammaSource::Computed => "VALID (rigorous modulo gamma_Y numerics)",
                GammaSource::UserSupplied => "VALID (conditional on the supplied gamma_Y)",
            };
            let _ = writeln!(t, "status: {status}");
        } else {
            let _ = writeln!(t, "status: INVALID: {}", self.invalid_reason.as_deref().unwrap_or(""));
        }
        let _ = writeln!(t, "seed: {}", self.seed);
        let _ = writeln!(t, "provenance:");
        for (k, v) in &self.provenance {
            let _ = writeln!(t, "   {k}: {v}");
        }
        t
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Text => self.to_text(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(0.123456789012345), json!(0.123456789012));
        assert_eq!(round_sig(f64::NAN), Value::Null);
    }

    #[test]
    fn supplied_gamma_at_n_one_is_invalid() {
        let c = certify(1, GammaMode::Supplied(0.2966)).unwrap();
        assert!(!c.valid);
        assert!(c.invalid_reason.unwrap().contains("n >= 3"));
        assert_eq!(c.gap_lower_bound, 0.0);
    }
}
