//! Reading and writing the JSON map format.

use maxpres::analysis::closure;
use maxpres::mpmatrix::{MapFile, MpMap};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/three_node.json");
    let a: MpMap = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    println!("{a}");

    let star = closure(&a).unwrap();
    println!("{}", serde_json::to_string_pretty(&star).unwrap());

    let bad = r#"{"n":1,"entries":[[{"kind":"pwl","points":[["0","0"],["1","2"],["2","1"]],"final_slope":"0"}]]}"#;
    let file: MapFile = serde_json::from_str(bad).unwrap();
    println!("rejected: {}", file.to_map().unwrap_err());
}
