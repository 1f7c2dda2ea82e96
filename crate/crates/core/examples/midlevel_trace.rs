//! Mid-level features from a time-stamped CSV, evaluated at window midpoints.
//!
//!     cargo run --example midlevel_trace

use emotrace::midlevel::{
    save_midlevel_trace, MidLevelProvider, MidLevelTrace, MidLevelVector, TraceProvider,
    MIDLEVEL_NAMES,
};

fn main() -> anyhow::Result<()> {
    let times = vec![0.0, 10.0, 20.0, 30.0];
    let vectors = [0.2, 0.8, 0.4, 0.6]
        .into_iter()
        .map(|m| MidLevelVector::new([m, 1.0 - m, 0.5, m, 0.3, 0.6, 1.0 - m]))
        .collect::<Result<Vec<_>, _>>()?;
    let path = std::env::temp_dir().join("midlevel_trace.csv");
    save_midlevel_trace(&MidLevelTrace::new(times, vectors)?, &path)?;
    println!("{}", std::fs::read_to_string(&path)?);

    let provider = TraceProvider::from_file(&path)?;
    println!("{}", provider.describe());
    for t_end in [5.0, 10.0, 17.0, 30.0] {
        let v = provider.window_features(t_end - 5.0, t_end)?;
        let named: Vec<String> = MIDLEVEL_NAMES
            .iter()
            .zip(v.values())
            .map(|(n, x)| format!("{n}={x:.3}"))
            .collect();
        println!("[{:>4}, {:>4}) {}", t_end - 5.0, t_end, named.join(" "));
    }
    Ok(())
}
