use blowdown::par::Execution;
use blowdown::scenario::corpus::{run_corpus, BUNDLED};
use blowdown::scenario::{parse_scenario, run_scenario};

#[test]
fn every_bundled_scenario_passes() {
    let reports = run_corpus(Execution::default());
    assert_eq!(reports.len(), BUNDLED.len());
    let failing: Vec<String> = reports.iter().filter(|r| !r.all_passed()).map(|r| r.to_string()).collect();
    assert!(failing.is_empty(), "{}", failing.join("\n"));
}

#[test]
fn reports_are_ordered_by_name() {
    let names: Vec<String> = run_corpus(Execution::Sequential).into_iter().map(|r| r.scenario).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn corpus_runs_are_byte_identical() {
    let text = |exec| run_corpus(exec).iter().map(|r| r.to_string()).collect::<String>();
    let first = text(Execution::Parallel);
    assert_eq!(first, text(Execution::Parallel));
    assert_eq!(first, text(Execution::Sequential));
}

#[test]
fn parse_print_parse_is_stable() {
    for (file, text) in BUNDLED {
        let s = parse_scenario(text).unwrap_or_else(|e| panic!("{file}: {e}"));
        let printed = s.to_string();
        let again = parse_scenario(&printed).unwrap_or_else(|e| panic!("{file} reprinted: {e}"));
        assert_eq!(s, again, "{file}");
        assert_eq!(printed, again.to_string(), "{file}");
    }
}

#[test]
fn xn_has_more_than_thirty_steps() {
    let s = parse_scenario(blowdown::scenario::corpus::source("xn.plm").unwrap()).unwrap();
    assert!(s.step_count() > 30, "{}", s.step_count());
}

#[test]
fn deliberate_chain_mismatch_fails_one_assertion() {
    let text = blowdown::scenario::corpus::source("qn.plm")
        .unwrap()
        .replace("assert chain qchain = (-9,-2,-2,-2,-2,-2)", "assert chain qchain = (-9,-2,-2,-2,-2,-3)");
    let report = run_scenario(&parse_scenario(&text).unwrap());
    assert_eq!(report.failed, 1);
    assert!(!report.all_passed());
    let bad = report.assertions.iter().find(|a| !a.passed).unwrap();
    assert_eq!(bad.expected, "(-9,-2,-2,-2,-2,-3)");
    assert_eq!(bad.actual, "(-9,-2,-2,-2,-2,-2)");
}
