//! Sweeps the angle between two rotated quadratures and the squeezing of a
//! Rényi experiment, writing CSV to stdout.

use lct_uncertainty::entropy::RenyiOrderPair;
use lct_uncertainty::harness::{linspace, sweep, write_sweep_csv, ExperimentSpec, Relation, StateSource, SweepAxis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut spec = ExperimentSpec::new(Relation::Guanlei, StateSource::Vacuum { modes: 1 });
    spec.phi = Some(0.0);
    let rows = sweep(&spec, SweepAxis::AngleGap, &linspace(0.1, 3.0, 12));
    write_sweep_csv(std::io::stdout().lock(), SweepAxis::AngleGap, &rows)?;

    println!();
    let mut spec = ExperimentSpec::new(Relation::Theorem2, StateSource::Vacuum { modes: 2 });
    spec.orders = Some(RenyiOrderPair::conjugate(2.0)?);
    let rows = sweep(&spec, SweepAxis::Squeeze, &linspace(-1.0, 1.0, 5));
    write_sweep_csv(std::io::stdout().lock(), SweepAxis::Squeeze, &rows)?;
    Ok(())
}
