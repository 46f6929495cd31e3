//! Writes the example input files: `cargo run --example write_corpus -- corpus`.
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use ntype::corpus;
use ntype::scomplex::format::{SMapSpec, SSetRef};
use ntype::scomplex::{sset_to_json, SMap};
use ntype::sgpd::{nerve, nerve_map, FiniteGroupoid, Functor};
use ntype::Budget;

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).expect("writable corpus directory");
}

fn write_map(dir: &Path, name: &str, f: &SMap, source: &str, target: &str) {
    let spec = SMapSpec {
        source: SSetRef::Path(source.into()),
        target: SSetRef::Path(target.into()),
        assignment: f.labelled().into_iter().collect(),
    };
    write(dir, name, &serde_json::to_string_pretty(&spec).unwrap());
}

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "corpus".into());
    let dir = Path::new(&dir);
    fs::create_dir_all(dir).unwrap();
    for e in corpus::objects(4) {
        write(dir, &format!("{}.sset", e.name), &sset_to_json(&e.sset));
    }
    let b = Budget::default();
    let (z2, z4) = (FiniteGroupoid::cyclic(2), FiniteGroupoid::cyclic(4));
    let (n2, n4) = (nerve(&z2, 4, &b).unwrap(), nerve(&z4, 4, &b).unwrap());
    write(dir, "nerve_z4.sset", &sset_to_json(&n4.sset));
    let q = Functor::by_names(&z4, &z2, &[("e", "e"), ("g", "g"), ("g2", "e"), ("g3", "g")]).unwrap();
    write_map(dir, "z4_to_z2.smap", &nerve_map(&q, &n4, &n2).unwrap(), "nerve_z4.sset", "nerve_z2.sset");
    let pt = corpus::get("point", 4).unwrap().sset;
    let to_point = SMap::to_point(n2.sset.clone(), pt.clone()).unwrap();
    write_map(dir, "z2_to_point.smap", &to_point, "nerve_z2.sset", "point.sset");
    write_map(dir, "id_circle.smap", &SMap::identity(Arc::new(ntype::scomplex::circle())), "circle.sset", "circle.sset");

    write(dir, "z2.sgpd", "name Z/2\nconstant\ne g\ng e\n");
    write(dir, "z3.sgpd", "name Z/3\nobjects: x\narrow g: x -> x\nrel g g g\n");
    write(dir, "trivial.sgpd", "name 1\nobjects: x\n");
    write(dir, "loop_circle.sgpd", "name GS1\nloop circle.sset\n");

    write(dir, "point.site", r#"{"name": "pt", "objects": ["U"], "arrows": [], "compose": {}}"#);
    write(
        dir,
        "arrow.site",
        r#"{"name": "V→U", "objects": ["U", "V"], "arrows": [{"name": "a", "src": "V", "tgt": "U"}], "compose": {}}"#,
    );
    let mut sections = BTreeMap::new();
    sections.insert("U".to_string(), "nerve_z4.sset".to_string());
    sections.insert("V".to_string(), "nerve_z2.sset".to_string());
    let mut restrictions = BTreeMap::new();
    restrictions.insert("a".to_string(), "z4_to_z2.smap".to_string());
    let spec = ntype::site::PresheafSpec {
        name: "Q".into(),
        site: "arrow.site".into(),
        sections,
        restrictions,
    };
    write(dir, "quotient.presheaf", &serde_json::to_string_pretty(&spec).unwrap());
}
