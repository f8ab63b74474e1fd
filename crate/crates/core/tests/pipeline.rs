use std::path::Path;

use spikecs::bench::{read_records, read_records_csv, run_experiment, write_records, ExperimentConfig, ExperimentKind};
use spikecs::dictionaries::{self, BasisKind, DictionaryOptions};
use spikecs::metrics::snr_db;
use spikecs::sensing::{measure, SensingKind, SensingMatrix};
use spikecs::signal::{generate_spike, load_signal, save_signal, segment, SampleFormat, SpikeTemplateParams};
use spikecs::solvers::{reconstruct, SolverConfig, SolverKind};

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for kind in ExperimentKind::ALL {
        let cfg = ExperimentConfig::from_path(&dir.join(format!("{}.toml", kind.name()))).unwrap();
        assert_eq!(cfg, ExperimentConfig::with_defaults(kind));
    }
}

#[test]
fn file_round_trip_then_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let x = generate_spike(
        512,
        &SpikeTemplateParams {
            seed: 9,
            ..Default::default()
        },
    )
    .unwrap();
    for format in SampleFormat::ALL {
        let path = dir.path().join(format!("x.{}", format.name()));
        save_signal(&x, &path, format).unwrap();
        let back = load_signal(&path, format, 15_000.0).unwrap();
        assert_eq!(back.len(), 512);
    }
    let loaded = load_signal(&dir.path().join("x.f64le"), SampleFormat::F64le, 15_000.0).unwrap();
    let seg = segment(&loaded, 256, 128).unwrap();
    let a = SensingMatrix::build(SensingKind::SparseBinary, 128, 256, 4, 3).unwrap();
    let d = dictionaries::build(BasisKind::FftReal, 256, &DictionaryOptions::default()).unwrap();
    let y = measure(&a, &seg).unwrap();
    let r = reconstruct(&y, &a, &d, &SolverConfig::default_for(SolverKind::BsblBo)).unwrap();
    assert!(snr_db(seg.samples(), r.signal_hat.as_slice()).unwrap() > 5.0);
}

#[test]
fn every_basis_reconstructs_at_half_rate() {
    let x = generate_spike(
        256,
        &SpikeTemplateParams {
            seed: 4,
            ..Default::default()
        },
    )
    .unwrap();
    let a = SensingMatrix::build(SensingKind::Gaussian, 128, 256, 0, 8).unwrap();
    let y = measure(&a, &x).unwrap();
    let cfg = SolverConfig::default_for(SolverKind::BsblBo);
    for kind in BasisKind::ALL {
        let d = dictionaries::build(kind, 256, &DictionaryOptions::default()).unwrap();
        let r = reconstruct(&y, &a, &d, &cfg).unwrap();
        let snr = snr_db(x.samples(), r.signal_hat.as_slice()).unwrap();
        assert!(snr.is_finite() && snr > 0.0, "{kind}: {snr}");
    }
}

#[test]
fn records_survive_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::with_defaults(ExperimentKind::SolverCompare);
    cfg.trials = 1;
    cfg.m_values = vec![96, 256];
    let records = run_experiment(&cfg).unwrap();
    assert_eq!(records.len(), 2 * 2);
    let path = dir.path().join("out.jsonl");
    write_records(&records, &path).unwrap();
    assert_eq!(read_records(&path).unwrap(), records);
    assert_eq!(read_records_csv(&path.with_extension("csv")).unwrap(), records);
    for r in &records {
        assert_eq!(r.cr, r.m as f64 / r.n as f64);
    }
    // Full-rate anchor: both solvers nearly lossless.
    for r in records.iter().filter(|r| r.m == 256) {
        assert!(r.snr_db > 60.0, "{} {}", r.solver, r.snr_db);
    }
}
