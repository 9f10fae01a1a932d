mod args;
mod cache;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::Result;
use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use args::{CacheAction, Cli, Command, Global};
use cache::{sha256_hex, Cache, Entry, Lookup, ENGINE};
use commands::Usage;
use ramseylab::par::{with_threads, SearchOptions};

const EXIT_VALIDATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let start = Instant::now();
    let threads = cli.global.threads;
    let code = with_threads(threads, || match run(&cli) {
        Ok(()) => 0,
        Err(e) => report_error(&e),
    });
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}

fn report_error(e: &anyhow::Error) -> u8 {
    if let Some(u) = e.downcast_ref::<Usage>() {
        eprintln!("usage error: {u}");
        return EXIT_USAGE;
    }
    let (code, detail) = match e.downcast_ref::<ramseylab::Error>() {
        Some(err @ ramseylab::Error::Budget { .. }) => (EXIT_BUDGET, json!({"kind": "budget", "message": err.to_string()})),
        Some(ramseylab::Error::Law(v)) => (EXIT_VALIDATION, json!({"kind": "law", "law": v.law, "message": v.message, "witnesses": v.witnesses})),
        Some(err) => (EXIT_VALIDATION, json!({"kind": "invalid", "message": err.to_string()})),
        None => (EXIT_VALIDATION, json!({"kind": "invalid", "message": format!("{e:#}")})),
    };
    print!("{}", report::canonical(&json!({"error": detail})));
    eprintln!("error: {}", detail["message"].as_str().unwrap_or_default());
    code
}

fn cache_dir(global: &Global) -> Option<PathBuf> {
    if global.no_cache {
        return None;
    }
    global
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("RAMSEYLAB_CACHE").map(PathBuf::from))
}

fn options(budget_bell: u128) -> SearchOptions {
    SearchOptions {
        budget_bell,
        ..SearchOptions::default()
    }
}

/// The part of the invocation that can change a result.
fn echo(cmd: &Command, budget_bell: u128) -> Result<Value> {
    Ok(json!({"command": cmd, "budget_bell": budget_bell.to_string()}))
}

fn cache_key(echo: &Value, cmd: &Command) -> Result<String> {
    let mut material = format!("{ENGINE}\n{}", report::canonical(echo));
    for path in commands::inputs(cmd)? {
        let bytes = std::fs::read(&path)?;
        material.push_str(&format!("{}\t{}\n", path.display(), sha256_hex(&bytes)));
    }
    Ok(sha256_hex(material.as_bytes()))
}

fn compute(cmd: &Command, budget_bell: u128) -> Result<String> {
    let out = commands::execute(cmd, &options(budget_bell))?;
    Ok(report::canonical(&json!({
        "command": echo(cmd, budget_bell)?,
        "engine": ENGINE,
        "provenance": out.provenance,
        "result": out.result,
    })))
}

fn emit(cli: &Cli, body: &str) -> Result<()> {
    if cli.global.tsv {
        let value: Value = serde_json::from_str(body)?;
        match commands::tsv(&cli.command, &value["result"]) {
            Some(table) => print!("{table}"),
            None => return Err(commands::no_tsv(&cli.command)),
        }
    } else {
        print!("{body}");
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    if let Command::Cache { action } = &cli.command {
        return cache_command(g, action);
    }
    if g.tsv && !commands::supports_tsv(&cli.command) {
        return Err(commands::no_tsv(&cli.command));
    }
    let cache = cache_dir(g).map(|d| Cache::open(&d)).transpose()?;
    let Some(cache) = cache else {
        let body = compute(&cli.command, g.budget_bell)?;
        return emit(cli, &body);
    };
    let echo = echo(&cli.command, g.budget_bell)?;
    let key = cache_key(&echo, &cli.command)?;
    match cache.get(&key) {
        Lookup::Hit(body) => {
            eprintln!("cache: hit {key}");
            return emit(cli, &body);
        }
        Lookup::Corrupt(why) => log::warn!("cache entry {key} is corrupt ({why}); recomputing"),
        Lookup::Miss => {}
    }
    let body = compute(&cli.command, g.budget_bell)?;
    let entry = Entry {
        engine: ENGINE.into(),
        key: key.clone(),
        command: echo,
        budget_bell: g.budget_bell,
        body_sha256: sha256_hex(body.as_bytes()),
        body: body.clone(),
    };
    if let Err(e) = cache.put(&entry) {
        log::warn!("could not store cache entry {key}: {e:#}");
    } else {
        eprintln!("cache: stored {key}");
    }
    emit(cli, &body)
}

fn cache_command(g: &Global, action: &CacheAction) -> Result<()> {
    let dir = cache_dir(g).ok_or_else(|| Usage("no cache directory: pass --cache-dir or set RAMSEYLAB_CACHE".into()))?;
    let cache = Cache::open(&dir)?;
    let result = match action {
        CacheAction::Stats => {
            let entries = cache.entries()?;
            let bytes: u64 = entries.iter().map(|(_, m)| m.len()).sum();
            json!({"entries": entries.len(), "bytes": bytes, "engine": ENGINE})
        }
        CacheAction::Gc { max_mb, max_age_days } => {
            let (removed, kept, bytes) = cache.gc(
                max_mb.map(|mb| mb * 1024 * 1024),
                max_age_days.map(|d| Duration::from_secs(d * 86_400)),
            )?;
            json!({"removed": removed, "kept": kept, "bytes": bytes})
        }
        CacheAction::Verify { sample } => verify(&cache, *sample)?,
        CacheAction::Clear => json!({"removed": cache.clear()?}),
    };
    print!("{}", report::canonical(&json!({"cache": dir.display().to_string(), "result": result})));
    Ok(())
}

/// Recomputes up to `sample` entries, in key order, and compares bodies.
fn verify(cache: &Cache, sample: usize) -> Result<Value> {
    let mut identical = Vec::new();
    let mut mismatched = Vec::new();
    let mut stale = Vec::new();
    for (path, _) in cache.entries()?.into_iter().take(sample) {
        let Some(entry) = Cache::read_entry(&path) else {
            stale.push(path.display().to_string());
            continue;
        };
        let cmd: Command = match serde_json::from_value(entry.command["command"].clone()) {
            Ok(c) => c,
            Err(_) => {
                stale.push(entry.key);
                continue;
            }
        };
        let still_valid = entry.engine == ENGINE
            && cache_key(&entry.command, &cmd).is_ok_and(|k| k == entry.key);
        if !still_valid {
            stale.push(entry.key);
            continue;
        }
        if compute(&cmd, entry.budget_bell)? == entry.body {
            identical.push(entry.key);
        } else {
            mismatched.push(entry.key);
        }
    }
    Ok(json!({"identical": identical, "mismatched": mismatched, "stale": stale}))
}
