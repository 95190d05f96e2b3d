//! Benchmark harness: runs an instance x method matrix, one CSV row per
//! cell, with per-cell timeouts and cross-method count validation.

use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::{load_projected, run_method, CmdError, Method};

pub const CSV_HEADER: &str = "instance,method,count,T,D,R,S,status";

struct BenchRow {
    instance: String,
    method: &'static str,
    count: Option<String>,
    t: f64,
    d: Option<u64>,
    r: Option<f64>,
    s: Option<usize>,
    status: &'static str,
}

impl BenchRow {
    fn render(&self) -> String {
        let opt = |s: Option<String>| s.unwrap_or_default();
        format!(
            "{},{},{},{:.3},{},{},{},{}",
            self.instance,
            self.method,
            opt(self.count.clone()),
            self.t,
            opt(self.d.map(|d| d.to_string())),
            opt(self.r.map(|r| format!("{r:.2}"))),
            opt(self.s.map(|s| s.to_string())),
            self.status,
        )
    }
}

fn run_cell(instance: &str, method: Method, limit: Duration) -> BenchRow {
    let start = Instant::now();
    let result = load_projected(Path::new(instance), None)
        .and_then(|pf| run_method(&pf, method, Some(limit), false));
    let t = start.elapsed().as_secs_f64();
    match result {
        Ok(outcome) => BenchRow {
            instance: instance.to_string(),
            method: method.name(),
            count: Some(outcome.count.to_string()),
            t,
            d: Some(outcome.decisions),
            r: outcome.r_stat,
            s: outcome.s_bytes,
            status: "ok",
        },
        Err(e) => BenchRow {
            instance: instance.to_string(),
            method: method.name(),
            count: None,
            t,
            d: None,
            r: None,
            s: None,
            status: match e {
                CmdError::Limit(_) => "timeout",
                CmdError::Input(_) => "parse-error",
                CmdError::Internal(_) => "error",
            },
        },
    }
}

pub fn cmd_bench(
    manifest: &Path,
    methods: &[Method],
    time_limit: f64,
    jobs: usize,
) -> Result<(), CmdError> {
    let text = fs::read_to_string(manifest)
        .map_err(|e| CmdError::Input(format!("cannot read {}: {e}", manifest.display())))?;
    let instances: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect();

    let tasks: Vec<(String, Method)> = instances
        .iter()
        .flat_map(|inst| methods.iter().map(move |&m| (inst.clone(), m)))
        .collect();
    let limit = Duration::from_secs_f64(time_limit);

    let results: Mutex<Vec<Option<BenchRow>>> =
        Mutex::new((0..tasks.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = jobs.max(1).min(tasks.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let (instance, method) = &tasks[i];
                let row = run_cell(instance, *method, limit);
                results.lock().expect("bench worker poisoned")[i] = Some(row);
            });
        }
    });

    let mut rows: Vec<BenchRow> = results
        .into_inner()
        .expect("bench workers finished")
        .into_iter()
        .map(|r| r.expect("every cell ran"))
        .collect();

    // Completed methods must agree per instance; mismatches are flagged.
    for inst in &instances {
        let counts: Vec<&String> = rows
            .iter()
            .filter(|r| &r.instance == inst && r.status == "ok")
            .filter_map(|r| r.count.as_ref())
            .collect();
        let disagreement = counts.windows(2).any(|w| w[0] != w[1]);
        if disagreement {
            for row in rows.iter_mut().filter(|r| &r.instance == inst && r.status == "ok") {
                row.status = "FAIL";
            }
        }
    }

    println!("{CSV_HEADER}");
    for row in &rows {
        println!("{}", row.render());
    }
    Ok(())
}
