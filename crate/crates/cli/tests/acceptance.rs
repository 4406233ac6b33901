//! Acceptance criteria over the default corpus, one line per criterion.
//!
//! Runs without the libtest harness so that the table is always printed:
//! `cargo test -p lofs-cli --test acceptance`.

use std::process::{Command, Output, Stdio};
use std::time::Instant;

use lofs_core::verify::{verify_paper, VerifyReport, Row, VerifyConfig};
use lofs_core::{QuantaleSpec, Status};

struct Criterion {
    id: usize,
    title: &'static str,
    outcome: Result<String, String>,
}

fn row<'a>(rep: &'a VerifyReport, name: &str) -> Result<&'a Row, String> {
    rep.row(name).ok_or_else(|| format!("no row `{name}`"))
}

/// The row passed, nothing was skipped, and every named check occurs in it.
fn row_with(rep: &VerifyReport, name: &str, checks: &[&str]) -> Result<String, String> {
    let r = row(rep, name)?;
    if r.status != Status::Pass {
        let c = r.detail.iter().flat_map(|d| d.failures().map(move |c| (d, c))).next();
        return Err(match c {
            Some((d, c)) => format!("{}: {} witness {}", d.subject, c.name, c.witness.as_deref().unwrap_or("-")),
            None => "row failed".into(),
        });
    }
    if r.skipped > 0 {
        return Err(format!("{} checks skipped at the size cap", r.skipped));
    }
    for c in checks {
        let n = r.detail.iter().filter(|d| d.check(c).is_some()).count();
        if n == 0 {
            return Err(format!("check `{c}` never ran"));
        }
    }
    Ok(format!("{} checks over {} cases", r.checks, r.scanned))
}

fn subjects(r: &Row, needle: &str) -> usize {
    r.detail.iter().filter(|d| d.subject.contains(needle)).count()
}

fn criteria(rep: &VerifyReport) -> Vec<Criterion> {
    let mut out = Vec::new();
    let mut push = |id, title, outcome| out.push(Criterion { id, title, outcome });

    push(1, "quantale laws and single-entry mutations", {
        row_with(rep, "quantale laws", &["associativity", "join-distributivity", "every mutation violates some law"]).and_then(|s| {
            let r = row(rep, "quantale laws")?;
            // boolean: 2^3 triples (a, b, c) minus the 4 that are the current entries
            let m = r.detail.iter().find_map(|d| d.check("every mutation violates some law")).map(|c| c.scanned);
            match m {
                Some(4) => Ok(format!("{s}; all 4 mutations caught")),
                other => Err(format!("expected 4 boolean mutations, scanned {other:?}")),
            }
        })
    });

    push(2, "V-relation algebra", {
        row_with(rep, "V-relation algebra", &["composition is associative", "s·r ≤ t ⟺ s ≤ t ⟜ r", "s·r ≤ t ⟺ r ≤ s ⤙ t"]).and_then(|s| {
            let r = row(rep, "V-relation algebra")?;
            let full = subjects(r, "boolean (all relations on sets ≤ 2)");
            let random = subjects(r, "1000 random cases on sets ≤ 2");
            if full == 1 && random == 3 {
                Ok(s)
            } else {
                Err(format!("{full} exhaustive and {random} random scans"))
            }
        })
    });

    push(
        3,
        "monad laws, ξ, condition C and (BC); ultrafilter transport",
        row_with(
            rep,
            "monad laws, condition C and (BC)",
            &[
                "monad unit laws",
                "monad associativity",
                "ξ is a T-algebra",
                "condition C diagrams",
                "condition C inequality",
                "(BC) T preserves weak pullbacks",
                "(BC) naturality squares of m are weak pullbacks",
                "T_ξ and T agree with the identity instance after transport",
            ],
        ),
    );

    push(4, "Yoneda lemma for every corpus and built-in Φ", {
        row_with(rep, "Yoneda lemma", &["â(Ty(𝔵), ψ) = ψ(𝔵)"]).and_then(|s| {
            // 5 corpora times 3 classes
            let n = row(rep, "Yoneda lemma")?.detail.len();
            if n == 15 {
                Ok(s)
            } else {
                Err(format!("{n} corpus/class pairs"))
            }
        })
    });

    push(
        5,
        "presheaf monad laws, lax idempotency, unit isos on Ord",
        row_with(
            rep,
            "presheaf monad laws and lax idempotency",
            &["⋔·y_ΦX = 1", "⋔·Φy_X = 1", "⋔·Φ⋔ = ⋔·⋔_ΦX", "Φy_X ≤ y_ΦX", "⋔ ⊣ y_ΦX", "Φy_X ⊣ ⋔", "y_X is an isomorphism"],
        )
        .and_then(|s| {
            let r = row(rep, "presheaf monad laws and lax idempotency")?;
            let n = subjects(r, "representable units") + subjects(r, "right_adjoint units");
            if n == 2 {
                Ok(s)
            } else {
                Err(format!("{n} unit-iso reports"))
            }
        }),
    );

    push(6, "simplicity: (Lf)_* = q_f^*∘(y_X)_* and the adjunction", {
        let checks = [
            "(Lf)_* = q_f^*∘(y_X)_*",
            "ΦLf ⊣ ⋔·Φq_f: a ≤ (Lf)^*∘q_f^*∘(y_X)_*",
            "ΦLf ⊣ ⋔·Φq_f: q_f^*∘(y_X)_*∘(Lf)^* ≤ c",
        ];
        row_with(rep, "simplicity of the presheaf monad", &checks)
            .and_then(|a| row_with(rep, "simplicity of saturated submonads", &checks).map(|b| format!("{a}; submonads {b}")))
    });

    push(
        7,
        "factorisation: R·L = f, L ff and dense, R an algebra",
        row_with(rep, "comma factorisation", &["R·L = f", "L fully faithful", "L Φ-dense", "π_f·L_Rf = 1", "R_f·π_f = R_Rf"]),
    );

    push(
        8,
        "AWFS comonad, monad and both distributivity squares",
        row_with(
            rep,
            "AWFS laws and distributivity",
            &[
                "comonad: R_Lf·σ_f = 1",
                "comonad: σ_Lf·σ_f = K(1, σ_f)·σ_f",
                "monad: π_f·L_Rf = 1",
                "monad: π_f·K(π_f, 1) = π_f·π_Rf",
                "distributivity square ΠL·RΔ·ΔR = Δ·LΠ",
                "distributivity square RΣ·Δ = ΔL·LΔ·ΣR",
            ],
        ),
    );

    push(9, "KZ: canonical filler is the least filler", row_with(rep, "KZ filler minimality", &["canonical filler is the least filler"]));

    push(10, "WFS cross-check on Ord, Φ = all", {
        let checks = ["L = order-embeddings", "every f ∈ L lifts against every g ∈ R", "no f ∉ L lifts against all of R (no counterexample found at this scale)"];
        row_with(rep, "WFS cross-check", &checks).and_then(|_| {
            let r = row(rep, "WFS cross-check")?;
            let d = r.detail.iter().find(|d| d.subject.contains("carriers ≤ 3")).ok_or("no report at carriers ≤ 3")?;
            let bounds: Vec<String> = checks.iter().filter_map(|c| d.check(c)).map(|c| c.bound()).collect();
            let text = rep.to_string();
            if bounds.len() == 3 && bounds.iter().all(|b| text.contains(b.as_str())) {
                Ok(bounds.join("; "))
            } else {
                Err("bounds missing from the report".into())
            }
        })
    });

    push(11, "saturation (S1)-(S3); broken class rejected", {
        row_with(rep, "saturation (S1)-(S3)", &["(S1) closed under composition", "(S2) contains every f^*", "(S3) detected by y^*∘(−)"]).and_then(
            |s| {
                let r = row(rep, "saturation (S1)-(S3)")?;
                let classes = ["all", "representable", "right_adjoint"].iter().map(|c| subjects(r, &format!("saturation of {c} on"))).min();
                let rejected = r.detail.iter().flat_map(|d| &d.checks).find(|c| c.name.starts_with("rejected:") && c.name.contains("witness"));
                match (classes, rejected) {
                    (Some(5), Some(c)) => Ok(format!("{s}; {}", c.name)),
                    (n, c) => Err(format!("class reports {n:?}, control {:?}", c.map(|c| &c.name))),
                }
            },
        )
    });
    out
}

fn verify_paper_bin(args: &[&str]) -> std::io::Result<std::process::Child> {
    Command::new(env!("CARGO_BIN_EXE_tvcat")).arg("verify-paper").args(args).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn()
}

fn criterion_12(a: std::io::Result<Output>, b: std::io::Result<Output>) -> Result<String, String> {
    let (a, b) = (a.map_err(|e| e.to_string())?, b.map_err(|e| e.to_string())?);
    for o in [&a, &b] {
        if o.status.code() != Some(0) {
            return Err(format!("exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)));
        }
    }
    if a.stdout != b.stdout {
        return Err("reports differ between runs".into());
    }

    // corrupted builtin: only the quantale row fails
    let small = VerifyConfig::default().with_max_size(1);
    let clean = verify_paper(&small);
    let corrupt = verify_paper(&VerifyConfig { corrupt: Some((QuantaleSpec::boolean(), [1, 1, 0])), ..small.clone() });
    let failing: Vec<&str> = corrupt.rows.iter().filter(|r| r.status != Status::Pass).map(|r| r.result.as_str()).collect();
    if failing != ["quantale laws"] {
        return Err(format!("corrupted boolean fails rows {failing:?}"));
    }
    let same = clean.rows.iter().zip(&corrupt.rows).skip(1).all(|(x, y)| (x.status, x.checks, x.scanned) == (y.status, y.checks, y.scanned));
    if !same {
        return Err("corruption changed another row".into());
    }
    if !clean.passed() {
        return Err("rows fail at --max-size 1".into());
    }
    Ok(format!("exit 0 twice, {} identical bytes; corruption confined to its row; --max-size 1 passes", a.stdout.len()))
}

fn main() {
    let start = Instant::now();
    // the two CLI runs go first so that they overlap with the in-process suite
    let first = verify_paper_bin(&[]);
    let second = verify_paper_bin(&[]);
    let rep = verify_paper(&VerifyConfig::default());
    let first = first.and_then(|c| c.wait_with_output());
    let second = second.and_then(|c| c.wait_with_output());

    let mut all = criteria(&rep);
    all.push(Criterion { id: 12, title: "verify-paper exits 0 and is reproducible", outcome: criterion_12(first, second) });

    let mut failed = 0;
    for c in &all {
        match &c.outcome {
            Ok(info) => println!("criterion {:>2} PASS  {}  ({info})", c.id, c.title),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {}  ({why})", c.id, c.title);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass in {:.0?}", all.len() - failed, all.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
