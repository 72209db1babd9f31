//! Seeded descent certificates for the three Lyapunov candidates.

use maxpres::instances::three_node_example;
use maxpres::spectral::{build_descent_certificate, CertificateMode};

fn main() {
    let a = three_node_example();
    for mode in [
        CertificateMode::LeftSum,
        CertificateMode::LeftMax,
        CertificateMode::MaxSeparable,
    ] {
        let cert = build_descent_certificate(&a, mode, 100, 7).unwrap();
        let strict = cert.samples.iter().filter(|s| s.after < s.before).count();
        println!(
            "{mode:?}: {strict}/100 strict, all_strict = {}",
            cert.all_strict
        );
    }
    let small = build_descent_certificate(&a, CertificateMode::LeftSum, 2, 7).unwrap();
    println!("{}", serde_json::to_string_pretty(&small).unwrap());
}
