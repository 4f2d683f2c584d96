//! Subcommand implementations.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use rootcheck_ldpc::analysis::{
    fer_csv_row, fer_point, outage_csv_row, outage_probability, SimOptions, StopRule,
    FER_CSV_HEADER, OUTAGE_CSV_HEADER,
};
use rootcheck_ldpc::codec::CodeMetadata;
use rootcheck_ldpc::construction::{build_code_with, degree_histogram, girth, verify_root_check};
use rootcheck_ldpc::gf2::BitMatrix;
use rootcheck_ldpc::LinearCode;

use crate::config::RunConfig;
use crate::manifest::Manifest;
use crate::CliError;

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

fn build_from_config(config: &RunConfig) -> Result<LinearCode, CliError> {
    let family = config.code_family()?;
    let opts = config.scaffold_options()?;
    build_code_with(&family, &opts).map_err(CliError::from)
}

fn out_paths(config: &RunConfig, stem: &str) -> (PathBuf, PathBuf) {
    let alist = config
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{stem}.alist")));
    let meta = config
        .meta_file
        .clone()
        .unwrap_or_else(|| alist.with_extension("toml"));
    (alist, meta)
}

/// Manifest location: explicit setting, or `<out>.manifest.toml`.
fn manifest_path_for(config: &RunConfig, out: &Path) -> PathBuf {
    config.manifest.clone().unwrap_or_else(|| {
        let mut name = out.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.toml");
        out.with_file_name(name)
    })
}

fn export_code(code: &LinearCode, config: &RunConfig, command: &str) -> Result<PathBuf, CliError> {
    let stem = code.family().kind.name().to_string();
    let (alist_path, meta_path) = out_paths(config, &stem);
    write_file(&alist_path, &code.h().to_alist())?;
    let meta = CodeMetadata::of(code);
    let meta_text = toml::to_string_pretty(&meta)
        .map_err(|e| CliError::internal(format!("metadata serialization: {e}")))?;
    write_file(&meta_path, &meta_text)?;
    let mut manifest = Manifest::new(command, config);
    manifest.add_artifact(&alist_path)?;
    manifest.add_artifact(&meta_path)?;
    manifest.write(&manifest_path_for(config, &alist_path))?;
    println!("wrote {} and {}", alist_path.display(), meta_path.display());
    Ok(alist_path)
}

pub fn cmd_construct(config: &RunConfig) -> Result<(), CliError> {
    let code = build_from_config(config)?;
    export_code(&code, config, "construct")?;
    print_report(&code);
    Ok(())
}

/// Same artifacts as `construct` without the analysis pass.
pub fn cmd_export(config: &RunConfig) -> Result<(), CliError> {
    let code = build_from_config(config)?;
    export_code(&code, config, "export")?;
    Ok(())
}

fn print_report(code: &LinearCode) {
    let h = code.h();
    println!("family        {}", code.family().kind.name());
    println!(
        "size          {} x {} (k = {}, transmitted {})",
        h.n_rows(),
        h.n_cols(),
        code.k(),
        code.n_tx()
    );
    println!("rate          {}/{}", code.k(), code.n_tx());
    println!("rank          {}", h.rank());
    match girth(h) {
        Some(g) => println!("girth         {g}"),
        None => println!("girth         inf (no cycles)"),
    }
    let report = verify_root_check(code);
    println!(
        "root-check    {} ({}/{} systematic columns)",
        if report.pass() { "pass" } else { "fail" },
        report.passed_columns(),
        code.k()
    );
    let hist = degree_histogram(h);
    let hist: Vec<String> = hist.iter().map(|(w, n)| format!("{w}:{n}")).collect();
    println!("col weights   {}", hist.join(" "));
    if code.puncture_cols().is_empty() {
        println!("puncturing    none");
    } else {
        println!(
            "puncturing    {} columns ({}..{})",
            code.puncture_cols().len(),
            code.puncture_cols()[0],
            code.puncture_cols().last().unwrap()
        );
    }
}

pub fn load_code(alist_path: &Path, meta_path: Option<&Path>) -> Result<(BitMatrix, Option<LinearCode>), CliError> {
    let text = std::fs::read_to_string(alist_path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", alist_path.display())))?;
    let h = BitMatrix::from_alist(&text)?;
    let code = match meta_path {
        Some(meta_path) => {
            let meta_text = std::fs::read_to_string(meta_path)
                .map_err(|e| CliError::io(format!("cannot read {}: {e}", meta_path.display())))?;
            let meta: CodeMetadata = toml::from_str(&meta_text)
                .map_err(|e| CliError::validation(format!("{}: {e}", meta_path.display())))?;
            Some(meta.into_code(h.clone())?)
        }
        None => None,
    };
    Ok((h, code))
}

pub fn cmd_analyze(alist_path: &Path, meta_path: Option<&Path>) -> Result<(), CliError> {
    let (h, code) = load_code(alist_path, meta_path)?;
    println!("file          {}", alist_path.display());
    println!("size          {} x {}", h.n_rows(), h.n_cols());
    println!("rank          {}", h.rank());
    match girth(&h) {
        Some(g) => println!("girth         {g}"),
        None => println!("girth         inf (no cycles)"),
    }
    let hist = degree_histogram(&h);
    let hist: Vec<String> = hist.iter().map(|(w, n)| format!("{w}:{n}")).collect();
    println!("col weights   {}", hist.join(" "));
    match code {
        Some(code) => {
            println!("family        {}", code.family().kind.name());
            println!("k             {}", code.k());
            println!("transmitted   {}", code.n_tx());
            let fadings: Vec<String> = CodeMetadata::of(&code)
                .fading_runs
                .iter()
                .map(|(f, len)| format!("{f}x{len}"))
                .collect();
            println!("fading map    {}", fadings.join(" "));
            if code.puncture_cols().is_empty() {
                println!("puncturing    none");
            } else {
                println!("puncturing    {} columns", code.puncture_cols().len());
            }
            let report = verify_root_check(&code);
            println!(
                "root-check    {} ({}/{} systematic columns)",
                if report.pass() { "pass" } else { "fail" },
                report.passed_columns(),
                code.k()
            );
        }
        None => println!("no metadata; skipping fading and root-check analysis"),
    }
    Ok(())
}

pub fn cmd_fer(config: &RunConfig) -> Result<(), CliError> {
    // the code comes from a file pair when given, otherwise from the family
    let code = match (&config.code_file, &config.meta_file) {
        (Some(alist), Some(meta)) => {
            let (_, code) = load_code(alist, Some(meta))?;
            let mut code = code.expect("metadata provided");
            code.attach_generator()?;
            code
        }
        (Some(_), None) => {
            return Err(CliError::validation(
                "fer needs `meta_file` alongside `code_file` (fading map and puncturing)",
            ))
        }
        _ => build_from_config(config)?,
    };
    let snrs = config
        .snr_db
        .clone()
        .ok_or_else(|| CliError::validation("missing `snr_db` list"))?;
    if snrs.is_empty() {
        return Err(CliError::validation("`snr_db` must not be empty"));
    }
    let regime = config.regime_for(code.family().fading_blocks)?;
    let opts = SimOptions {
        stop: StopRule {
            min_frame_errors: config.min_frame_errors.unwrap_or(100),
            max_frames: config.max_frames.unwrap_or(1_000_000),
        },
        max_iter: config.max_iter.unwrap_or(20),
        master_seed: config.master_seed.unwrap_or(0),
        workers: config.resolve_workers(),
    };
    let out = config
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("fer.csv"));
    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    let mut file = std::fs::File::create(&out)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", out.display())))?;
    writeln!(file, "{FER_CSV_HEADER}").map_err(|e| CliError::io(e.to_string()))?;
    file.flush().map_err(|e| CliError::io(e.to_string()))?;
    for &db in &snrs {
        let point = fer_point(&code, regime, db, &opts);
        // one row per completed point so an interrupted sweep keeps its data
        writeln!(file, "{}", fer_csv_row(&point, code.k()))
            .map_err(|e| CliError::io(e.to_string()))?;
        file.flush().map_err(|e| CliError::io(e.to_string()))?;
        eprintln!(
            "{db} dB: fer {:.4e} ({} frames, {} errors)",
            point.fer(),
            point.frames,
            point.frame_errors
        );
    }
    drop(file);
    let mut manifest = Manifest::new("fer", config);
    manifest.add_artifact(&out)?;
    if let Some(alist) = &config.code_file {
        manifest.add_artifact(alist)?;
    }
    manifest.write(&manifest_path_for(config, &out))?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn cmd_outage(config: &RunConfig) -> Result<(), CliError> {
    let f = config
        .fading_blocks
        .ok_or_else(|| CliError::validation("missing `fading_blocks`"))?;
    if f == 0 {
        return Err(CliError::validation("`fading_blocks` must be positive"));
    }
    let rate = config
        .rate
        .ok_or_else(|| CliError::validation("missing `rate`"))?;
    if !(0.0..=1.0).contains(&rate) {
        return Err(CliError::validation("`rate` must lie in [0, 1]"));
    }
    let snrs = config
        .snr_db
        .clone()
        .ok_or_else(|| CliError::validation("missing `snr_db` list"))?;
    let samples = config.samples.unwrap_or(1_000_000);
    let seed = config.master_seed.unwrap_or(0);
    let out = config
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("outage.csv"));
    let mut lines = vec![OUTAGE_CSV_HEADER.to_string()];
    for &db in &snrs {
        let point = outage_probability(f, rate, db, samples, seed);
        lines.push(outage_csv_row(&point));
        eprintln!("{db} dB: outage {:.4e}", point.estimate());
    }
    write_file(&out, &(lines.join("\n") + "\n"))?;
    let mut manifest = Manifest::new("outage", config);
    manifest.add_artifact(&out)?;
    manifest.write(&manifest_path_for(config, &out))?;
    println!("wrote {}", out.display());
    Ok(())
}
