//! Every corpus group reproduces its recorded order, class count, degrees, solvability and
//! per-prime Sylow, block and character counts.

use std::path::Path;

use blockscope::verify::{corpus_run, CorpusOptions};

#[test]
fn corpus_matches_recorded_invariants() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus");
    let opts = CorpusOptions {
        scenes_per_group: 0,
        ..CorpusOptions::default()
    };
    let report = corpus_run(&dir, &opts).expect("corpus run");
    let s = &report.summary;
    assert!(s.items >= 1000, "only {} corpus items", s.items);
    let problems: Vec<String> = report
        .items
        .iter()
        .flat_map(|i| {
            i.error
                .iter()
                .map(move |e| format!("{}: {e}", i.name))
                .chain(i.pin_mismatches.iter().map(move |m| format!("{}: {m}", i.name)))
        })
        .collect();
    assert!(problems.is_empty(), "{problems:#?}");
    assert_eq!(s.fails(), 0, "{:#?}", s.by_target);
}
