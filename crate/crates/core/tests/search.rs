use pqdist::search::classify::report_from_run;
use pqdist::search::{classify, inspect_cell, run_cell, ClassifyOptions, SearchError};

fn report_with_threads(threads: usize, p: usize, q: usize) -> String {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    pool.install(|| {
        classify(p, q, &ClassifyOptions::default())
            .unwrap()
            .to_json_deterministic()
    })
}

#[test]
fn two_two_report_is_independent_of_worker_count() {
    assert_eq!(report_with_threads(1, 2, 2), report_with_threads(8, 2, 2));
}

#[test]
fn three_one_report_is_independent_of_worker_count() {
    assert_eq!(report_with_threads(1, 3, 1), report_with_threads(4, 3, 1));
}

#[test]
fn resumed_run_matches_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let opts = ClassifyOptions {
        checkpoint_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let fresh = report_from_run(&run_cell(3, 1, &ClassifyOptions::default()).unwrap()).unwrap();
    let first = report_from_run(&run_cell(3, 1, &opts).unwrap()).unwrap();
    let cp = inspect_cell(dir.path(), 3, 1).unwrap();
    assert!(cp.finished());
    let resumed = report_from_run(
        &run_cell(
            3,
            1,
            &ClassifyOptions {
                resume: true,
                ..opts
            },
        )
        .unwrap(),
    )
    .unwrap();
    assert_eq!(first.to_json_deterministic(), fresh.to_json_deterministic());
    assert_eq!(
        resumed.to_json_deterministic(),
        fresh.to_json_deterministic()
    );
}

#[test]
fn truncated_checkpoint_resumes_to_full_answer() {
    let dir = tempfile::tempdir().unwrap();
    let partial = ClassifyOptions {
        checkpoint_dir: Some(dir.path().to_path_buf()),
        max_order: Some(8),
        ..Default::default()
    };
    let cut = run_cell(4, 0, &partial).unwrap();
    assert!(cut.truncated);
    let resume = ClassifyOptions {
        checkpoint_dir: Some(dir.path().to_path_buf()),
        resume: true,
        ..Default::default()
    };
    let full = report_from_run(&run_cell(4, 0, &resume).unwrap()).unwrap();
    assert_eq!(full.cell, "10_1");
}

#[test]
fn corrupt_level_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let opts = ClassifyOptions {
        checkpoint_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    run_cell(3, 1, &opts).unwrap();
    let level = walk(dir.path())
        .into_iter()
        .find(|p| p.extension().is_some_and(|e| e == "g6"))
        .unwrap();
    std::fs::write(&level, "not a graph\n").unwrap();
    let err = inspect_cell(dir.path(), 3, 1).unwrap_err();
    assert!(
        matches!(
            err,
            SearchError::CorruptCheckpoint { .. } | SearchError::CheckpointMismatch(_)
        ),
        "{err}"
    );
}

#[test]
fn oversized_cell_is_refused() {
    assert!(matches!(
        run_cell(5, 3, &ClassifyOptions::default()),
        Err(SearchError::TierExceeded { order: 11, .. })
    ));
}

fn walk(p: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(p).unwrap() {
        let path = e.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out.sort();
    out
}
