//! Structured output documents for the `idemfac` command line.
//!
//! A document is self-contained: it embeds the algebra, the input in its
//! text form, and the factor list in application order, so a certificate
//! can be re-parsed and re-verified in isolation. Field order is fixed;
//! identical invocations serialize to identical bytes.

use serde::Serialize;

use idemfac::factorization::FactorizationReport;
use idemfac::{
    format_endo, verify_factorization, AlgebraDescriptor, CertificateChecks, Endomorphism,
    Reachability,
};

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraDoc {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

impl From<AlgebraDescriptor> for AlgebraDoc {
    fn from(alg: AlgebraDescriptor) -> Self {
        match alg {
            AlgebraDescriptor::FiniteSet { n } => {
                AlgebraDoc { kind: "set".into(), n: Some(n), p: None, dim: None }
            }
            AlgebraDescriptor::VectorSpace { p, d } => {
                AlgebraDoc { kind: "vec".into(), n: None, p: Some(p), dim: Some(d) }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChecksDoc {
    pub product_matches: bool,
    pub all_idempotent: bool,
    pub ranks_equal: bool,
    pub factor_bound_ok: bool,
}

impl From<CertificateChecks> for ChecksDoc {
    fn from(c: CertificateChecks) -> Self {
        ChecksDoc {
            product_matches: c.product_matches,
            all_idempotent: c.all_idempotent,
            ranks_equal: c.ranks_equal,
            factor_bound_ok: c.factor_bound_ok,
        }
    }
}

/// Pipeline statistics. `chain_length` and `transposition_count` are null
/// when the factors were supplied externally rather than produced here.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StatsDoc {
    pub chain_length: Option<usize>,
    pub transposition_count: Option<usize>,
    pub factor_count: usize,
}

/// Serializes as `true`, `false` or `"indeterminate"`.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(untagged)]
pub enum ReachableDoc {
    Known(bool),
    Status(&'static str),
}

impl From<Reachability> for ReachableDoc {
    fn from(r: Reachability) -> Self {
        match r {
            Reachability::Reachable => ReachableDoc::Known(true),
            Reachability::Unreachable => ReachableDoc::Known(false),
            Reachability::Indeterminate => ReachableDoc::Status("indeterminate"),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OracleDoc {
    pub reachable: ReachableDoc,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputDocument {
    pub algebra: AlgebraDoc,
    pub input: String,
    pub rank: usize,
    /// Factor texts in application (left-to-right) order.
    pub factors: Vec<String>,
    pub checks: Option<ChecksDoc>,
    pub stats: StatsDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleDoc>,
}

impl OutputDocument {
    pub fn from_report(report: &FactorizationReport) -> Self {
        OutputDocument {
            algebra: report.input.algebra().into(),
            input: format_endo(&report.input),
            rank: report.rank,
            factors: report.factors.iter().map(format_endo).collect(),
            checks: Some(report.checks.into()),
            stats: StatsDoc {
                chain_length: Some(report.chain_length),
                transposition_count: Some(report.transposition_count),
                factor_count: report.factors.len(),
            },
            oracle: None,
        }
    }

    pub fn from_verification(
        input: &Endomorphism,
        factors: &[Endomorphism],
        checks: CertificateChecks,
    ) -> Self {
        OutputDocument {
            algebra: input.algebra().into(),
            input: format_endo(input),
            rank: input.rank(),
            factors: factors.iter().map(format_endo).collect(),
            checks: Some(checks.into()),
            stats: StatsDoc {
                chain_length: None,
                transposition_count: None,
                factor_count: factors.len(),
            },
            oracle: None,
        }
    }

    pub fn from_oracle(input: &Endomorphism, outcome: Reachability) -> Self {
        OutputDocument {
            algebra: input.algebra().into(),
            input: format_endo(input),
            rank: input.rank(),
            factors: Vec::new(),
            checks: None,
            stats: StatsDoc { chain_length: None, transposition_count: None, factor_count: 0 },
            oracle: Some(OracleDoc { reachable: outcome.into() }),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    /// One `name=value` line per check, or the oracle verdict.
    pub fn checks_summary(&self) -> String {
        let mut out = String::new();
        if let Some(c) = &self.checks {
            out.push_str(&format!("product_matches={}\n", c.product_matches));
            out.push_str(&format!("all_idempotent={}\n", c.all_idempotent));
            out.push_str(&format!("ranks_equal={}\n", c.ranks_equal));
            out.push_str(&format!("factor_bound_ok={}\n", c.factor_bound_ok));
        }
        if let Some(o) = &self.oracle {
            let verdict = match o.reachable {
                ReachableDoc::Known(b) => b.to_string(),
                ReachableDoc::Status(s) => s.to_string(),
            };
            out.push_str(&format!("reachable={verdict}\n"));
        }
        out
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let alg = &self.algebra;
        match alg.kind.as_str() {
            "set" => out.push_str(&format!("algebra: set n={}\n", alg.n.unwrap_or(0))),
            _ => out.push_str(&format!(
                "algebra: vec p={} dim={}\n",
                alg.p.unwrap_or(0),
                alg.dim.unwrap_or(0)
            )),
        }
        out.push_str(&format!("input: {}\n", self.input));
        out.push_str(&format!("rank: {}\n", self.rank));
        if !self.factors.is_empty() {
            out.push_str(&format!("factors ({}):\n", self.factors.len()));
            for (i, f) in self.factors.iter().enumerate() {
                out.push_str(&format!("  {}: {}\n", i + 1, f));
            }
        }
        if let Some(stats) = self.stats_line() {
            out.push_str(&stats);
        }
        out.push_str(&self.checks_summary());
        out
    }

    fn stats_line(&self) -> Option<String> {
        let chain = self.stats.chain_length?;
        let transpositions = self.stats.transposition_count?;
        Some(format!(
            "stats: chain_length={} transpositions={} factor_count={}\n",
            chain, transpositions, self.stats.factor_count
        ))
    }

    /// Exit code under the stable contract: 0 all checks true, 4 any check
    /// failed (or the oracle answered no), 5 oracle indeterminate.
    pub fn exit_code(&self) -> i32 {
        if let Some(o) = &self.oracle {
            return match o.reachable {
                ReachableDoc::Known(true) => 0,
                ReachableDoc::Known(false) => 4,
                ReachableDoc::Status(_) => 5,
            };
        }
        match &self.checks {
            Some(c) if c.product_matches && c.all_idempotent && c.ranks_equal && c.factor_bound_ok => 0,
            _ => 4,
        }
    }
}

/// Names the first failing check, for the exit-4 diagnostic.
pub fn first_failing_check(checks: &CertificateChecks) -> Option<&'static str> {
    if !checks.product_matches {
        Some("product_matches")
    } else if !checks.all_idempotent {
        Some("all_idempotent")
    } else if !checks.ranks_equal {
        Some("ranks_equal")
    } else if !checks.factor_bound_ok {
        Some("factor_bound_ok")
    } else {
        None
    }
}

/// Re-verifies the factors of a document against its own input; used to
/// confirm that emitted certificates are self-contained.
pub fn reverify_document(doc: &OutputDocument) -> Result<CertificateChecks, idemfac::Error> {
    let alg = match doc.algebra.kind.as_str() {
        "set" => AlgebraDescriptor::finite_set(doc.algebra.n.unwrap_or(0))?,
        _ => AlgebraDescriptor::vector_space(
            doc.algebra.p.unwrap_or(0),
            doc.algebra.dim.unwrap_or(0),
        )?,
    };
    let input = idemfac::parse_endo(alg, &doc.input)?;
    let factors = doc
        .factors
        .iter()
        .map(|f| idemfac::parse_endo(alg, f))
        .collect::<Result<Vec<_>, _>>()?;
    verify_factorization(&input, &factors)
}
