use quadchi_core::conductor::{bundled_corpus, conductor_check};
fn main() {
    let start = std::time::Instant::now();
    for entry in bundled_corpus() {
        let fam = entry.family().unwrap();
        let t = std::time::Instant::now();
        let report = conductor_check(&fam).unwrap();
        assert!(report.equal && report.rank_identity, "{} failed", entry.poly);
        println!("{:55} rank {:6} {:?}", entry.poly, report.lhs.rank(), t.elapsed());
    }
    println!("total: {:?}", start.elapsed());
}
