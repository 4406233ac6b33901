//! The desk-scale verification report: one row per result, each backed by
//! exhaustive suites over the default corpus.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::lofs::{is_order_embedding, Lofs};
use crate::monad::{Monad, MonadKind};
use crate::presheaf::{check_saturated, BimoduleTable, Class, Limits, Phi, SomewhereUnit};
use crate::quantale::{Elem, QuantaleSpec, QuantaleTables};
use crate::report::{LawReport, Status};
use crate::vrel::{check_algebra, Scan};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub quantales: Vec<QuantaleSpec>,
    pub monads: Vec<MonadKind>,
    /// Largest carrier over the boolean quantale.
    pub max_size_boolean: usize,
    /// Largest carrier over every other quantale.
    pub max_size_other: usize,
    pub limits: Limits,
    /// Test hook: replace one tensor entry `a ⊗ b := c` of the named builtin
    /// before the quantale suite runs.
    pub corrupt: Option<(QuantaleSpec, [u16; 3])>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            quantales: vec![
                QuantaleSpec::boolean(),
                QuantaleSpec::truncated_chain(2),
                QuantaleSpec::lukasiewicz_chain(2),
                QuantaleSpec::powerset_frame(2),
            ],
            monads: vec![MonadKind::Identity, MonadKind::FiniteUltrafilter],
            max_size_boolean: 3,
            max_size_other: 2,
            limits: Limits::default(),
            corrupt: None,
        }
    }
}

impl VerifyConfig {
    /// Caps every carrier at `n`.
    pub fn with_max_size(mut self, n: usize) -> Self {
        self.max_size_boolean = self.max_size_boolean.min(n);
        self.max_size_other = self.max_size_other.min(n);
        self
    }

    fn describe(&self) -> String {
        let qs: Vec<String> = self.quantales.iter().map(spec_label).collect();
        let ms: Vec<&str> = self.monads.iter().map(|m| m.name()).collect();
        format!(
            "quantales {}; monads {} (finite_ultrafilter over boolean only); carriers ≤ {} (boolean), ≤ {} (others); presheaf spaces ≤ {}",
            qs.join(", "),
            ms.join(", "),
            self.max_size_boolean,
            self.max_size_other,
            self.limits.max_space
        )
    }
}

fn spec_label(s: &QuantaleSpec) -> String {
    match s {
        QuantaleSpec::Builtin { builtin, n: Some(n) } => format!("{builtin}({n})"),
        QuantaleSpec::Builtin { builtin, n: None } => builtin.clone(),
        QuantaleSpec::Explicit { name, .. } => name.clone().unwrap_or_else(|| "explicit".into()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub result: String,
    pub status: Status,
    pub checks: usize,
    pub scanned: u64,
    pub skipped: usize,
    /// Print every check with its bound, not only the failures.
    #[serde(skip)]
    pub verbose: bool,
    pub detail: Vec<LawReport>,
}

impl Row {
    fn new(result: &str, detail: Vec<LawReport>) -> Self {
        let checks = detail.iter().map(|r| r.checks.len()).sum();
        let scanned = detail.iter().flat_map(|r| &r.checks).map(|c| c.scanned).sum();
        let skipped = detail.iter().map(LawReport::skipped).sum();
        let status = if detail.iter().all(LawReport::passed) { Status::Pass } else { Status::Fail };
        Row { result: result.to_string(), status, checks, scanned, skipped, verbose: false, detail }
    }

    fn verbose(mut self) -> Self {
        self.verbose = true;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: String,
    pub rows: Vec<Row>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status == Status::Pass)
    }

    pub fn row(&self, result: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.result == result)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify-paper: {}", self.config)?;
        for r in &self.rows {
            let tag = if r.status == Status::Pass { "PASS" } else { "FAIL" };
            write!(f, "[{tag}] {}: {} checks over {} cases", r.result, r.checks, r.scanned)?;
            if r.skipped > 0 {
                write!(f, ", {} skipped at the size cap", r.skipped)?;
            }
            writeln!(f)?;
            for d in &r.detail {
                let bad: Vec<_> = d.checks.iter().filter(|c| r.verbose || c.status != Status::Pass).collect();
                let n: u64 = d.checks.iter().map(|c| c.scanned).sum();
                writeln!(f, "    {}: {} checks, {} cases", d.subject, d.checks.len(), n)?;
                for c in bad {
                    let tag = match c.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Skipped => "SKIP",
                    };
                    write!(f, "      [{tag}] {} ({})", c.name, c.bound())?;
                    if let Some(w) = &c.witness {
                        write!(f, " witness: {w}")?;
                    }
                    writeln!(f)?;
                }
            }
        }
        let pass = self.rows.iter().filter(|r| r.status == Status::Pass).count();
        writeln!(f, "summary: {} rows, {} pass, {} fail", self.rows.len(), pass, self.rows.len() - pass)
    }
}

/// Mutating any single tensor entry of `t` must be caught by the law suite.
pub fn check_mutations(t: &QuantaleTables) -> LawReport {
    let mut rep = LawReport::new(format!("single-entry tensor mutations of {}", t.name));
    let n = t.len();
    let mut w = None;
    let mut count = 0u64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (a, b, c) = (Elem(a as u16), Elem(b as u16), Elem(c as u16));
                if t.tensor[a.idx() * n + b.idx()] == c {
                    continue;
                }
                count += 1;
                let m = t.clone().with_tensor_entry(a, b, c);
                if w.is_none() && m.check_laws().passed() {
                    w = Some(m.name.clone());
                }
            }
        }
    }
    rep.record("every mutation violates some law", w, count, "mutations");
    rep
}

struct Instance {
    corpus: Corpus,
}

fn instances(cfg: &VerifyConfig) -> crate::Result<Vec<Instance>> {
    let mut out = Vec::new();
    for spec in &cfg.quantales {
        let q = Arc::new(spec.build()?);
        let boolean = q.name() == "boolean";
        for &kind in &cfg.monads {
            if kind == MonadKind::FiniteUltrafilter && !boolean {
                continue;
            }
            let max = if boolean { cfg.max_size_boolean } else { cfg.max_size_other };
            let corpus = Corpus::build(Arc::new(Monad::instantiate(kind, q.clone())), max)?;
            out.push(Instance { corpus });
        }
    }
    Ok(out)
}

fn engines(limits: Limits, classes: &[Class]) -> Vec<Lofs> {
    classes.iter().map(|&c| Lofs::new(Phi::builtin(c, limits))).collect()
}

fn failed(subject: &str, e: crate::Error) -> LawReport {
    let mut r = LawReport::new(subject);
    r.fail("construction", e.to_string(), 0, "objects");
    r
}

/// Runs every suite over the configured corpus; rows come in a fixed order.
pub fn verify_paper(cfg: &VerifyConfig) -> VerifyReport {
    let config = cfg.describe();
    let insts = match instances(cfg) {
        Ok(i) => i,
        Err(e) => {
            return VerifyReport { config, rows: vec![Row::new("corpus construction", vec![failed("corpus", e)])] };
        }
    };
    let limits = cfg.limits;
    let mut rows = Vec::new();

    // quantale laws
    let mut detail = Vec::new();
    for spec in &cfg.quantales {
        let tables = match spec.to_tables() {
            Ok(t) => t,
            Err(e) => {
                detail.push(failed(&spec_label(spec), e));
                continue;
            }
        };
        let tables = match &cfg.corrupt {
            Some((s, [a, b, c])) if s == spec => tables.with_tensor_entry(Elem(*a), Elem(*b), Elem(*c)),
            _ => tables,
        };
        detail.push(tables.check_laws());
        if tables.name == "boolean" {
            detail.push(check_mutations(&tables));
        }
    }
    rows.push(Row::new("quantale laws", detail));

    // V-relation algebra
    let mut detail = Vec::new();
    for spec in &cfg.quantales {
        match spec.build() {
            Ok(q) => {
                let q = Arc::new(q);
                let scan = if q.name() == "boolean" {
                    Scan::Exhaustive { max_set: 2 }
                } else {
                    Scan::Random { cases: 1000, seed: 0x5eed, max_set: 2 }
                };
                detail.push(check_algebra(&q, scan));
            }
            Err(e) => detail.push(failed(&spec_label(spec), e)),
        }
    }
    rows.push(Row::new("V-relation algebra", detail));

    // monads
    let mut detail = Vec::new();
    for inst in &insts {
        let m = &inst.corpus.monad;
        detail.push(m.check_laws(3));
        if m.kind() == MonadKind::FiniteUltrafilter {
            detail.push(m.check_transport_to_identity(3));
        }
    }
    rows.push(Row::new("monad laws, condition C and (BC)", detail));

    rows.push(Row::new("category and bimodule calculus", insts.iter().map(|i| i.corpus.check_calculus()).collect()));

    let phis: Vec<Phi> = Class::BUILTIN.iter().map(|&c| Phi::builtin(c, limits)).collect();

    // Yoneda lemma
    let mut detail = Vec::new();
    for inst in &insts {
        for phi in &phis {
            let reps = crate::par::map(&inst.corpus.objects, |x| match phi.space(x) {
                Ok(s) => s.check_yoneda_lemma(),
                Err(e) => failed(x.name(), e),
            });
            detail.push(LawReport::merge(format!("Yoneda lemma ({}, {})", phi.name(), inst.corpus.label()), reps));
        }
    }
    rows.push(Row::new("Yoneda lemma", detail));

    // presheaf monad
    let mut detail = Vec::new();
    for inst in &insts {
        for phi in &phis {
            let reps = crate::par::map(&inst.corpus.objects, |x| phi.check_monad_at(x));
            detail.push(LawReport::merge(format!("{} monad ({})", phi.name(), inst.corpus.label()), reps));
            let reps = crate::par::map(&inst.corpus.functors, |f| phi.check_naturality(f, None));
            detail.push(LawReport::merge(format!("{} naturality ({})", phi.name(), inst.corpus.label()), reps));
        }
        if inst.corpus.is_ord() {
            for phi in phis.iter().filter(|p| p.name() != Class::All.as_str()) {
                let mut r = LawReport::new(format!("{} units on {}", phi.name(), inst.corpus.label()));
                let w = inst.corpus.objects.iter().find(|x| !phi.space(x).and_then(|s| s.unit_is_iso()).unwrap_or(false));
                r.record("y_X is an isomorphism", w.map(|x| x.name().to_string()), inst.corpus.objects.len() as u64, "objects");
                detail.push(r);
            }
        }
    }
    rows.push(Row::new("presheaf monad laws and lax idempotency", detail));

    let all = engines(limits, &[Class::All]);
    let subs = engines(limits, &[Class::Representable, Class::RightAdjoint]);

    let mut detail = Vec::new();
    for inst in &insts {
        for l in &all {
            detail.push(l.check_simplicity(&inst.corpus));
        }
    }
    rows.push(Row::new("simplicity of the presheaf monad", detail));

    // saturation
    let mut detail = Vec::new();
    for inst in &insts {
        match BimoduleTable::build(&inst.corpus.objects, &limits) {
            Ok(table) => {
                for c in Class::BUILTIN {
                    let mut r = check_saturated(&c, &table, &inst.corpus.functors, &limits);
                    r.subject = format!("{} on {}", r.subject, inst.corpus.label());
                    detail.push(r);
                }
                if inst.corpus.is_ord() {
                    let broken = check_saturated(&SomewhereUnit, &table, &inst.corpus.functors, &limits);
                    let mut r = LawReport::new(format!("control: {} on {}", broken.subject, inst.corpus.label()));
                    match broken.first_failure() {
                        Some(c) => r.pass(
                            format!("rejected: {} fails, witness {}", c.name, c.witness.as_deref().unwrap_or("-")),
                            broken.checks.iter().map(|c| c.scanned).sum(),
                            "bimodules",
                        ),
                        None => r.fail("rejected", "all of (S1)-(S3) hold", 0, "bimodules"),
                    }
                    detail.push(r);
                }
            }
            Err(e) => detail.push(failed(&inst.corpus.label(), e)),
        }
    }
    rows.push(Row::new("saturation (S1)-(S3)", detail).verbose());

    let mut detail = Vec::new();
    for inst in &insts {
        for l in &subs {
            detail.push(l.check_simplicity(&inst.corpus));
            let reps = crate::par::map(&inst.corpus.functors, |f| l.phi().check_density_lemma(f));
            detail.push(LawReport::merge(format!("density ({}, {})", l.phi().name(), inst.corpus.label()), reps));
        }
    }
    rows.push(Row::new("simplicity of saturated submonads", detail));

    let engines_all: Vec<&Lofs> = all.iter().chain(&subs).collect();

    // factorisation
    let mut detail = Vec::new();
    for inst in &insts {
        for l in &engines_all {
            let reps = crate::par::map(&inst.corpus.functors, |f| {
                let mut r = LawReport::new(f.describe());
                match l.factorise(f) {
                    Ok(fa) => {
                        r.absorb("", fa.report().clone());
                        r.absorb("", l.check_r_algebra_at(f));
                    }
                    Err(e @ crate::Error::SizeCap { .. }) => r.skip("factorisation", e.to_string()),
                    Err(e) => r.fail("factorisation", e.to_string(), 0, "morphisms"),
                }
                r
            });
            detail.push(LawReport::merge(format!("factorisation ({}, {})", l.phi().name(), inst.corpus.label()), reps));
        }
    }
    rows.push(Row::new("comma factorisation", detail));

    // L-class
    let mut detail = Vec::new();
    for inst in &insts {
        for l in &engines_all {
            let reps = crate::par::map(&inst.corpus.functors, |f| {
                let mut r = l.check_lari_at(f);
                match l.l_membership(f) {
                    Ok(m) => r.record(
                        "f ∈ L iff f has a coalgebra structure",
                        (m.member() != m.section.is_some()).then(|| f.describe()),
                        1,
                        "morphisms",
                    ),
                    Err(e) => r.fail("f ∈ L iff f has a coalgebra structure", e.to_string(), 0, "morphisms"),
                }
                r
            });
            detail.push(LawReport::merge(format!("L-class ({}, {})", l.phi().name(), inst.corpus.label()), reps));
        }
    }
    rows.push(Row::new("characterisation of the L-class", detail));

    let mut detail = Vec::new();
    for inst in &insts {
        for l in &engines_all {
            detail.push(l.check_awfs(&inst.corpus));
        }
    }
    rows.push(Row::new("AWFS laws and distributivity", detail));

    // KZ and WFS share the classification
    let mut kz = Vec::new();
    let mut wfs = Vec::new();
    for inst in &insts {
        for l in &engines_all {
            let cls = match l.classify(&inst.corpus) {
                Ok(c) => c,
                Err(e) => {
                    kz.push(failed(&format!("classification ({}, {})", l.phi().name(), inst.corpus.label()), e));
                    continue;
                }
            };
            let mut r = l.check_kz_minimality(&inst.corpus, &cls);
            r.subject = format!("{} on {}", r.subject, inst.corpus.label());
            kz.push(r);
            if inst.corpus.is_ord() && l.phi().name() == Class::All.as_str() {
                let mut r = l.wfs_cross_check(&inst.corpus, &cls);
                let fs = &inst.corpus.functors;
                let w = (0..fs.len()).find(|&i| cls.l[i] != is_order_embedding(&fs[i])).map(|i| fs[i].describe());
                r.record("L = order-embeddings", w, fs.len() as u64, "morphisms");
                wfs.push(r);
            }
        }
    }
    rows.push(Row::new("KZ filler minimality", kz));
    rows.push(Row::new("WFS cross-check", wfs).verbose());

    VerifyReport { config, rows }
}
