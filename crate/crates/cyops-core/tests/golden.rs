//! Table output against checked-in golden files. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;

use cyops::catalog::{emit_table, TableFormat, TABLE_IDS};

fn golden_path(id: &str, ext: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{id}.{ext}"))
}

#[test]
fn tables_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for id in TABLE_IDS {
        for (format, ext) in [(TableFormat::Markdown, "md"), (TableFormat::Json, "json"), (TableFormat::Csv, "csv")] {
            let text = emit_table(id, format).unwrap();
            assert_eq!(text, emit_table(id, format).unwrap(), "{id}.{ext} is not deterministic");
            let path = golden_path(id, ext);
            if update {
                std::fs::write(&path, &text).unwrap();
            } else {
                let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                assert_eq!(text, want, "{id}.{ext}");
            }
        }
    }
}

#[test]
fn table_shapes() {
    let rows = |id: &str| {
        let v: serde_json::Value = serde_json::from_str(&emit_table(id, TableFormat::Json).unwrap()).unwrap();
        v["rows"].as_array().unwrap().len()
    };
    assert_eq!(rows("twist_params"), 4);
    assert_eq!(rows("VHS"), 14);
    assert_eq!(rows("VHS5"), 16);
    assert_eq!(rows("VHS4"), 16);
    assert_eq!(rows("VHS_YYPB"), 14);
    assert_eq!(rows("3ExtRatHg"), 4);
    let vhs: serde_json::Value = serde_json::from_str(&emit_table("VHS", TableFormat::Json).unwrap()).unwrap();
    assert!(vhs["rows"].as_array().unwrap().iter().all(|r| !r["cells"].as_array().unwrap().is_empty()));
}
