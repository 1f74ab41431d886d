//! Acceptance matrix: the end-to-end checks this crate promises, one
//! printed line per criterion. Every criterion is exact (rational
//! equality or a certified bound); the conjectural valuation scan is
//! reported but does not gate.

use clnode_core::census::{
    census_mutually_annihilating, census_nilpotent_mutually_annihilating, AnnihilatingMode,
    CensusOptions, NilpotentPairMode,
};
use clnode_core::report::{Certificate, CheckStatus};
use clnode_core::verify::{
    run_suite, suite_euler_identities, suite_partition_bijections, suite_smooth_products,
    suite_special_values, suite_thma, suite_thmb, VerifyConfig,
};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Gate {
        Gate {
            failures: Vec::new(),
        }
    }

    fn check(&mut self, id: &str, description: &str, ok: bool) {
        println!(
            "acceptance {id}: {} - {description}",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            self.failures.push(format!("{id}: {description}"));
        }
    }

    fn report_conjectural(&mut self, id: &str, description: &str, ok: bool) {
        println!(
            "acceptance {id}: {} - {description} (conjectural, not gating)",
            if ok { "PASS" } else { "FAIL" }
        );
    }

    fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "acceptance failures:\n{}",
            self.failures.join("\n")
        );
    }
}

fn find<'a>(cert: &'a Certificate, id: &str) -> &'a clnode_core::report::CheckRecord {
    cert.checks
        .iter()
        .find(|c| c.id == id)
        .unwrap_or_else(|| panic!("missing check {id} in suite {}", cert.suite))
}

fn workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get().min(4))
        .unwrap_or(1)
}

fn config() -> VerifyConfig {
    VerifyConfig {
        q: None,
        x_order: 12,
        t_order: 40,
        precision: 256,
        census: CensusOptions {
            budget: 1 << 34,
            workers: workers(),
        },
    }
}

#[test]
fn acceptance_suite() {
    let cfg = config();
    let mut gate = Gate::new();

    // --- censuses against the factorized generating function -------------
    let thmb = suite_thmb(&cfg).expect("thmB suite must run");
    let numeric2 = find(&thmb, "thmb.numeric.q2");
    let numeric3 = find(&thmb, "thmb.numeric.q3");
    let coverage_ok = numeric2
        .detail
        .as_deref()
        .is_some_and(|d| d.contains("naive n <= 2") && d.contains("stratified n <= 5"))
        && numeric3
            .detail
            .as_deref()
            .is_some_and(|d| d.contains("naive n <= 2") && d.contains("stratified n <= 3"));
    gate.check(
        "01",
        "mutually annihilating census / |GL_n| equals the x^n coefficient of (x;t)_inf^-2 H, \
         exactly (naive n<=2 for q in {2,3}; stratified n<=5 at q=2, n<=3 at q=3)",
        numeric2.passed() && numeric3.passed() && coverage_ok,
    );

    let symbolic = find(&thmb, "thmb.symbolic");
    gate.check(
        "02",
        "double sum over Gaussian binomials equals (x;t)_inf^-2 H(x;t) mod (x^13, t^41)",
        symbolic.passed() && symbolic.coefficients.len() == 13,
    );

    // --- nilpotent pairs ---------------------------------------------------
    let thma = suite_thma(&cfg).expect("thmA suite must run");
    let nilp2 = find(&thma, "thma.nilpotent.q2");
    let nilp3 = find(&thma, "thma.nilpotent.q3");
    let naive_structured = find(&thma, "thma.nilpotent.naive-vs-structured");
    gate.check(
        "03",
        "nilpotent-pair census matches (xt;t)_inf^-2 H coefficients (n<=3 at q=2, n<=2 at q=3); \
         the fully naive n=2,q=2 enumeration agrees with the structured one",
        nilp2.passed()
            && nilp2.coefficients.len() == 4
            && nilp3.passed()
            && nilp3.coefficients.len() == 3
            && naive_structured.passed(),
    );

    // --- special values along both routes ----------------------------------
    let z1 = find(&thma, "thma.zhat-at-one");
    let zm1 = find(&thma, "thma.zhat-at-minus-one");
    let guard = find(&thma, "thma.valuation-guard-probe");
    let special = suite_special_values(&cfg).expect("special-values suite must run");
    let z1_num = find(&special, "special.zhat-at-one");
    let zm1_num = find(&special, "special.zhat-at-minus-one");
    gate.check(
        "04",
        "local series at x=1 equals 1/(t;t)_inf^2 and at x=-1 equals 1/(-t^2;t^2)_inf, \
         t-adically mod t^41 under the valuation guard, and numerically within 1e-10 at t=0.5",
        z1.passed() && zm1.passed() && guard.passed() && z1_num.passed() && zm1_num.passed(),
    );

    // --- pole structure and the Euler quotient ------------------------------
    let poles = find(&thma, "thma.pole-positivity");
    let quotient = find(&thma, "thma.euler-quotient");
    gate.check(
        "05",
        "t^(i^2) H(t^-i;t) has positive leading coefficient for i<=5 (exact), and the global \
         series equals (1/(1-x))^2 times the local one to (N,T) = (12,40)",
        poles.passed() && quotient.passed() && quotient.coefficients.len() == 13,
    );

    // --- partition generating functions and bijections ----------------------
    let partitions = suite_partition_bijections(&cfg).expect("partition suite must run");
    gate.check(
        "06",
        "partition generating functions match closed forms (k<=5, t^20, x^10) and both Durfee \
         bijections are exact inverses on their exhaustive desk-scale domains",
        partitions.all_passed(true),
    );

    // --- the classical identities -------------------------------------------
    let euler_cfg = VerifyConfig {
        t_order: 100,
        ..cfg.clone()
    };
    let euler = suite_euler_identities(&euler_cfg).expect("euler suite must run");
    gate.check(
        "07",
        "the two Euler identities, the geometric q-expansion and the Pochhammer square law hold \
         to t^100 (x^12 where bivariate), exactly",
        euler.all_passed(true),
    );

    // --- smooth curve and surface products ----------------------------------
    let smooth = suite_smooth_products(&cfg).expect("smooth suite must run");
    let a1 = find(&smooth, "smooth.curve.a1");
    let a1p = find(&smooth, "smooth.curve.a1-minus-point");
    let a2 = find(&smooth, "smooth.surface.a2");
    let punctured2 = find(&smooth, "smooth.punctured-line.q2");
    let punctured3 = find(&smooth, "smooth.punctured-line.q3");
    gate.check(
        "08",
        "matrix-count series for the line equals the curve product of zeta factors to x^6; the \
         invertible-pair census gives 1/(1-x) (n<=3, q in {2,3}); the commuting-pair census \
         matches the surface product (n<=3, q=2)",
        a1.passed()
            && a1.coefficients.len() == 7
            && a1p.passed()
            && a2.passed()
            && a2.coefficients.len() >= 4
            && punctured2.passed()
            && punctured3.passed(),
    );

    // --- stratification engine ----------------------------------------------
    let partner = find(&thmb, "thmb.partner-count");
    let strata = find(&thmb, "thmb.nullity-strata");
    gate.check(
        "09",
        "for every A with n<=3 over F_2 the exhaustive partner count is q^(nullity^2); nullity \
         strata sum to q^(n^2) for n<=5, q in {2,3,5}",
        partner.passed() && strata.passed() && strata.coefficients.len() == 18,
    );

    // --- certified analytic checks -------------------------------------------
    let maclaurin = find(&special, "special.maclaurin");
    let theta = find(&special, "special.theta-functional-equation");
    gate.check(
        "10",
        "analytic evaluation agrees with the exact order-40 Maclaurin polynomial within combined \
         certified bounds at 20 samples with |x|<=3; the partial theta functional equation \
         residual stays below 1e-20 at 100 samples (256-bit)",
        maclaurin.passed() && theta.passed(),
    );

    // --- conjectural valuation pattern (reported, not gating) -----------------
    let valuations = find(&special, "special.valuation-pattern");
    assert!(valuations.conjectural, "valuation scan must carry the conjectural flag");
    assert_eq!(
        valuations.coefficients.len(),
        21,
        "valuation scan reports every n <= 20"
    );
    for row in &valuations.coefficients {
        println!(
            "  valuation scan {}: {}",
            row.label,
            if row.equal { "matches" } else { "MISMATCH" }
        );
    }
    gate.report_conjectural(
        "11",
        "x^n coefficient of H has valuation ceil(n^2/4) and sign (-1)^n for all n<=20 (T=101)",
        valuations.status == CheckStatus::Pass,
    );

    gate.finish();
}

#[test]
fn verify_all_runs_every_suite_green() {
    let cfg = VerifyConfig {
        x_order: 8,
        t_order: 24,
        precision: 192,
        census: CensusOptions {
            budget: 1 << 20,
            workers: workers(),
        },
        ..VerifyConfig::default()
    };
    let certs = run_suite("all", &cfg).expect("all suites run");
    assert_eq!(certs.len(), 6);
    for cert in &certs {
        assert!(
            cert.all_passed(false),
            "suite {} failed:\n{}",
            cert.suite,
            clnode_core::serialize::certificate_json(cert)
        );
    }
}

#[test]
fn census_modes_cross_check_in_parallel() {
    // worker-split determinism on the largest in-gate census
    let opts_serial = CensusOptions {
        budget: 1 << 26,
        workers: 1,
    };
    let opts_parallel = CensusOptions {
        budget: 1 << 26,
        workers: 4,
    };
    for (n, q) in [(3usize, 2u8), (2, 3)] {
        let serial =
            census_mutually_annihilating(n, q, AnnihilatingMode::Stratified, &opts_serial)
                .unwrap();
        let parallel =
            census_mutually_annihilating(n, q, AnnihilatingMode::Stratified, &opts_parallel)
                .unwrap();
        assert_eq!(serial, parallel, "n={n}, q={q}");
    }
    let a = census_nilpotent_mutually_annihilating(2, 3, NilpotentPairMode::Naive, &opts_serial)
        .unwrap();
    let b = census_nilpotent_mutually_annihilating(
        2,
        3,
        NilpotentPairMode::Structured,
        &opts_parallel,
    )
    .unwrap();
    assert_eq!(a, b);
}
