//! The five CLI commands as library functions: prepare, resample, train,
//! evaluate, benchmark. Every command with equal config and inputs produces
//! byte-identical outputs; timestamps never enter files.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::data::{
    load_csv, load_dataset, numeric_schema, rain_australia_schema, save_dataset, Dataset,
};
use crate::error::{Error, Result};
use crate::eval::{
    self, confusion, metrics, ExperimentPlan, ExperimentReport,
};
use crate::models::FittedModel;
use crate::preprocess::FittedPipeline;
use crate::samplers::{ResampleResult, RowProvenance};

fn out_path(cfg: &RunConfig, name: &str) -> PathBuf {
    cfg.out_dir.join(name)
}

fn ensure_out_dir(cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    Ok(())
}

fn load_raw(cfg: &RunConfig) -> Result<Dataset> {
    let path = cfg
        .dataset
        .as_ref()
        .ok_or_else(|| Error::Config("dataset path is required".into()))?;
    match cfg.schema.as_str() {
        "rain" => load_csv(path, &rain_australia_schema()),
        "numeric" => {
            let file = std::fs::File::open(path).map_err(|e| {
                Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
            })?;
            let mut reader = csv::Reader::from_reader(file);
            let names: Vec<String> =
                reader.headers()?.iter().map(|h| h.to_string()).collect();
            drop(reader);
            load_csv(path, &numeric_schema(&names, cfg.target.as_deref()))
        }
        other => Err(Error::Config(format!("unknown schema {other:?}"))),
    }
}

fn load_processed(cfg: &RunConfig, default_name: &str) -> Result<Dataset> {
    let path = cfg
        .input
        .clone()
        .unwrap_or_else(|| out_path(cfg, default_name));
    load_dataset(&path)
}

fn write_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut writer = std::io::BufWriter::new(file);
    serde_json::to_writer_pretty(&mut writer, value)?;
    writer.write_all(b"\n")?;
    writer.flush()?;
    Ok(())
}

/// Apply the configured pipeline to the raw CSV; write the processed dataset
/// and the fitted pipeline statistics.
pub fn cmd_prepare(cfg: &RunConfig) -> Result<()> {
    ensure_out_dir(cfg)?;
    let ds = load_raw(cfg)?;
    let spec = cfg.pipeline_spec()?;
    let (fitted, x, y) = FittedPipeline::fit_transform_all(&spec, &ds)?;

    let mut processed = Dataset::from_matrix(&x, None, Some(fitted.output_names()))?;
    if let (Some(target), Some(labels)) = (ds.target_name(), y) {
        processed.set_labels(target, labels)?;
    }
    let ds_path = out_path(cfg, "processed.ds");
    save_dataset(&processed, &ds_path)?;
    write_json(&fitted, &out_path(cfg, "pipeline.json"))?;
    println!(
        "prepared {} rows x {} features -> {}",
        processed.n_rows(),
        fitted.output_width(),
        ds_path.display()
    );
    Ok(())
}

fn provenance_csv(rr: &ResampleResult) -> String {
    use std::fmt::Write as _;
    let mut out = String::from("row,tag,source,neighbor\n");
    for (row, p) in rr.provenance.iter().enumerate() {
        match p {
            RowProvenance::Original { source } => {
                writeln!(out, "{row},original,{source},").expect("write")
            }
            RowProvenance::Duplicated { source } => {
                writeln!(out, "{row},duplicated,{source},").expect("write")
            }
            RowProvenance::Synthetic { base, neighbor } => {
                writeln!(out, "{row},synthetic,{base},{neighbor}").expect("write")
            }
        }
    }
    out.push_str("# removed\n");
    for r in &rr.removed {
        writeln!(out, "{r}").expect("write");
    }
    out
}

/// Resample a processed dataset file; write the resampled dataset and a
/// provenance sidecar.
pub fn cmd_resample(cfg: &RunConfig) -> Result<()> {
    ensure_out_dir(cfg)?;
    let ds = load_processed(cfg, "processed.ds")?;
    let x = ds.to_matrix()?;
    let y = ds
        .labels()
        .cloned()
        .ok_or_else(|| Error::Schema("resample requires a labeled dataset".into()))?;
    let sampler = cfg.sampler_config()?;
    let before = crate::data::class_counts(&y);
    let rr = sampler.resample(&x, &y)?;
    for w in &rr.warnings {
        eprintln!("warning: {w}");
    }

    let mut resampled = Dataset::from_matrix(&rr.x, None, Some(ds.feature_names()))?;
    resampled.set_labels(ds.target_name().unwrap_or("label"), rr.y.clone())?;
    let ds_path = out_path(cfg, "resampled.ds");
    save_dataset(&resampled, &ds_path)?;
    std::fs::write(out_path(cfg, "provenance.csv"), provenance_csv(&rr))?;

    let after = rr.class_counts();
    println!(
        "{}: ({}, {}) -> ({}, {}) rows, {} removed -> {}",
        sampler.kind.as_str(),
        before.0,
        before.1,
        after.0,
        after.1,
        rr.removed.len(),
        ds_path.display()
    );
    Ok(())
}

/// Fit the configured model on a processed dataset file.
pub fn cmd_train(cfg: &RunConfig) -> Result<()> {
    ensure_out_dir(cfg)?;
    let ds = load_processed(cfg, "processed.ds")?;
    let x = ds.to_matrix()?;
    let y = ds
        .labels()
        .cloned()
        .ok_or_else(|| Error::Schema("train requires a labeled dataset".into()))?;
    let spec = cfg.single_model()?;
    let model = crate::models::fit(&spec, &x, &y)?;
    let path = out_path(cfg, "model.json");
    write_json(&model, &path)?;
    println!("trained {} on {} rows -> {}", spec.name(), x.n_rows(), path.display());
    Ok(())
}

/// Score a stored model against a dataset file; print metrics and write an
/// evaluation report.
pub fn cmd_evaluate(cfg: &RunConfig) -> Result<()> {
    ensure_out_dir(cfg)?;
    let model_path = cfg
        .model_file
        .clone()
        .unwrap_or_else(|| out_path(cfg, "model.json"));
    let text = std::fs::read_to_string(&model_path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", model_path.display())))
    })?;
    let model: FittedModel = serde_json::from_str(&text)?;

    let ds = match &cfg.test_input {
        Some(path) => load_dataset(path)?,
        None => load_processed(cfg, "processed.ds")?,
    };
    let x = ds.to_matrix()?;
    let y = ds
        .labels()
        .cloned()
        .ok_or_else(|| Error::Schema("evaluate requires a labeled dataset".into()))?;
    let pred = model.predict(&x)?;
    let cm = confusion(&y, &pred)?;
    let m = metrics(&cm);
    println!("f1={} precision={} recall={}", m.f1, m.precision, m.recall);

    #[derive(serde::Serialize)]
    struct EvalReport {
        confusion: eval::ConfusionMatrix,
        metrics: eval::Metrics,
        rows: usize,
    }
    write_json(
        &EvalReport { confusion: cm, metrics: m, rows: x.n_rows() },
        &out_path(cfg, "eval.json"),
    )?;
    Ok(())
}

/// Run the configured sampler x model grid; stream per-fold rows to the
/// report CSV as each cell completes, then write the summary block and the
/// structured JSON report.
pub fn cmd_benchmark(cfg: &RunConfig) -> Result<()> {
    ensure_out_dir(cfg)?;
    let ds = load_raw(cfg)?;
    let pipeline = cfg.pipeline_spec()?;
    let models_list = cfg.model_list()?;
    let samplers_list = cfg.sampler_list()?;

    let plan = ExperimentPlan::prepare(&pipeline, &ds, cfg.kfold, cfg.test_fraction, cfg.seed)?;
    let csv_path = out_path(cfg, "report.csv");
    let mut csv_file = std::io::BufWriter::new(std::fs::File::create(&csv_path)?);
    writeln!(csv_file, "{}", eval::CSV_HEADER)?;
    csv_file.flush()?;

    let mut cells = Vec::with_capacity(models_list.len() * samplers_list.len());
    for model_spec in &models_list {
        for sampler in &samplers_list {
            let cell = plan.run_cell(model_spec, sampler, cfg.eval_on_train)?;
            csv_file.write_all(eval::csv_fold_rows(&cell).as_bytes())?;
            csv_file.flush()?;
            for w in &cell.warnings {
                eprintln!("warning: {} x {}: {w}", cell.model, cell.sampler);
            }
            println!(
                "{} x {}: cv_mean_f1={} test_f1={}",
                cell.model, cell.sampler, cell.cv_mean_f1, cell.test.f1
            );
            cells.push(cell);
        }
    }

    writeln!(csv_file, "{}", eval::CSV_SUMMARY_MARKER)?;
    writeln!(csv_file, "{}", eval::CSV_SUMMARY_HEADER)?;
    for cell in &cells {
        csv_file.write_all(eval::csv_summary_row(cell).as_bytes())?;
    }
    csv_file.flush()?;

    let report = ExperimentReport {
        pipeline: pipeline.describe(),
        seed: cfg.seed,
        k: cfg.kfold,
        test_fraction: cfg.test_fraction,
        n_rows: ds.n_rows(),
        n_features: plan.n_features(),
        cells,
    };
    write_json(&report, &out_path(cfg, "report.json"))?;
    println!("report -> {}", csv_path.display());
    Ok(())
}
