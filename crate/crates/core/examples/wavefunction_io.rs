//! Writing and reading wavefunction files, then running an experiment spec
//! that refers to one.

use lct_uncertainty::harness::{ExperimentSpec, Measurement, Relation, StateSource};
use lct_uncertainty::lct::{io, lct_apply, GridSpec};
use lct_uncertainty::states::fock_wavefunction;
use lct_uncertainty::symplectic::rotation;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("lct-wavefunction-io");
    std::fs::create_dir_all(&dir)?;

    let psi = lct_apply(&fock_wavefunction(&[2], &GridSpec::symmetric(1, 256, 10.0)?)?, &rotation(0.4))?;
    let array = dir.join("fock2_array.json");
    let packed = dir.join("fock2_base64.json");
    io::write(&array, &psi, io::Encoding::Array)?;
    io::write(&packed, &psi, io::Encoding::Base64)?;
    println!(
        "array file {} bytes, base64 file {} bytes",
        std::fs::metadata(&array)?.len(),
        std::fs::metadata(&packed)?.len()
    );
    println!("base64 round trip exact: {}", io::read(&packed)? == psi);

    let csv = dir.join("fock2.csv");
    io::write_csv(std::fs::File::create(&csv)?, &psi)?;
    println!("csv written to {}", csv.display());

    let mut spec = ExperimentSpec::new(Relation::Theorem1, StateSource::File { path: packed });
    spec.a = Some(Measurement::Rotation { theta: 0.0 });
    spec.b = Some(Measurement::Rotation { theta: 1.2 });
    println!("{}", serde_json::to_string_pretty(&spec)?);
    let report = spec.run()?;
    println!("status {}, slack {:.6}", report.status, report.slack_f64());
    Ok(())
}
