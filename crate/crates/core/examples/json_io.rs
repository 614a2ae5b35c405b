//! Classify a matrix read from JSON and print the record.

use cuspidal::io::{parse_matrix, record_to_json};
use cuspidal::orbits::{classify, orbit_of};

fn main() -> cuspidal::Result<()> {
    let text = r#"{"ring":{"kind":"equal","p":2,"f":1,"r":2},"n":2,"entries":[[0,1],[[0,1],0]]}"#;
    let parsed = parse_matrix(text)?;
    let ring = parsed.ring.as_ref().expect("ring given").build()?;
    let m = parsed.to_mat(&ring)?;
    let o = orbit_of(&ring, &m, 4, cuspidal::DEFAULT_GUARD)?;
    let rec = classify(&ring, &o, cuspidal::DEFAULT_GUARD)?;
    println!("{}", record_to_json(&ring, &o, &rec));
    Ok(())
}
