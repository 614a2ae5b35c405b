//! Brute-force oracles against the fast paths.

use cuspidal::orbits::{detect_piform, enumerate_classes, LevelData, Orbit};
use cuspidal::oracle::{brute_conjugacy_partition, brute_coset_intersect};
use cuspidal::ring::Ring;

fn main() -> cuspidal::Result<()> {
    let g = cuspidal::DEFAULT_GUARD;
    let ring = Ring::equal(3, 1, 1)?;
    let fast = enumerate_classes(&ring, 2, 1, 2, g)?;
    let brute = brute_conjugacy_partition(&ring, 2, 1)?;
    println!("M_2(F_3): {} classes by BFS, {} by full conjugation", fast.len(), brute.len());
    let level = LevelData::new(2)?;
    for block in &brute {
        let o = Orbit { level, rep: ring.mat_from_code(2, 1, block[0]), size: block.len() as u64 };
        let d = detect_piform(&ring, &o, 1, g)?;
        let b = brute_coset_intersect(&ring, block, 2, 1, 1)?;
        if d || b {
            println!("class {:>4} (size {:>2}): detector {d}, coset search {b}", block[0], block.len());
        }
    }
    Ok(())
}
