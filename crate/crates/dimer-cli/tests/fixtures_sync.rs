//! The checked-in `fixtures/*.dimer` documents must stay bit-identical to
//! the built-in catalogue's canonical emission, so files and code cannot
//! drift apart.

use std::path::PathBuf;

use dimer::{doc, fixtures, validate};

fn workspace_root() -> PathBuf {
    // crates/dimer-cli -> workspace root
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .ancestors()
        .nth(2)
        .expect("workspace root")
        .to_path_buf()
}

#[test]
fn fixture_documents_match_the_catalogue() {
    for &name in fixtures::names() {
        let path = workspace_root().join("fixtures").join(format!("{name}.dimer"));
        let text = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let q = fixtures::by_name(name).unwrap();
        assert_eq!(text, doc::emit(&q), "{name}: document drifted from the catalogue");
        let parsed = doc::parse(&text).unwrap_or_else(|e| panic!("{name}: {e:?}"));
        assert_eq!(parsed.quiver, q, "{name}: parse(emit) is not the identity");
        assert!(validate(&parsed.quiver).unwrap().pass(), "{name}");
    }
}
