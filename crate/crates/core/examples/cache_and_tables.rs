// Solve a range, keep the results in a cache file and print them in all
// three table formats.
//
// $ cargo run --release --example cache_and_tables

use grouptest::records::{
    append_cache, read_cache, render_table, CacheRecord, Source, TableFormat,
};
use grouptest::{exact_value, Instance, SolveConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("grouptest-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("values.csv");
    let _ = std::fs::remove_file(&path);

    for n in 3..=8 {
        let inst = Instance::fixed(n, 2, 2)?;
        let start = std::time::Instant::now();
        let value = exact_value(&inst, &SolveConfig::default())?;
        let rec = CacheRecord::new(
            &inst,
            value,
            Source::Solver,
            start.elapsed().as_millis() as u64,
        );
        append_cache(&path, &[rec])?;
    }

    let rows = read_cache(&path)?;
    println!("cache at {}", path.display());
    for format in [TableFormat::Plain, TableFormat::Csv, TableFormat::Latex] {
        println!("{}", render_table(&rows, format));
    }
    Ok(())
}
