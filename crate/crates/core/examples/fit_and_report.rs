//! Fit arousal/valence models on a synthetic dataset, compare the three
//! standard feature sets, and export the T-statistic importance chart.
//!
//!     cargo run --example fit_and_report

use emotrace::midlevel::MIDLEVEL_NAMES;
use emotrace::regression::{
    fit_emotion_model, fit_report, importance_report, Dataset, DatasetRow, FeatureSubset,
    FeatureVector,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};

fn main() -> anyhow::Result<()> {
    let mut rng = StdRng::seed_from_u64(7);
    let normal = Normal::new(0.0, 1.0)?;
    // arousal leans on speed and dynamics, valence on minorness and tonal stability
    let wa = [0.1, 0.3, 0.1, 0.0, 0.1, 0.0, 0.0, 0.5, 0.4];
    let wv = [0.2, 0.0, 0.0, 0.1, -0.2, 0.3, -0.5, 0.1, 0.0];
    let rows = (0..288)
        .map(|i| {
            let x: [f64; 9] = std::array::from_fn(|_| normal.sample(&mut rng));
            let dot = |w: &[f64; 9]| w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
            DatasetRow {
                clip_id: format!("clip{i:03}"),
                features: FeatureVector(x),
                arousal: dot(&wa) + 0.3 * rng.random_range(-1.0..1.0),
                valence: dot(&wv) + 0.3 * rng.random_range(-1.0..1.0),
            }
        })
        .collect();
    let dataset = Dataset::new(rows)?;

    let models = [
        fit_emotion_model(&dataset, &FeatureSubset::all())?,
        fit_emotion_model(&dataset, &FeatureSubset::midlevel7())?,
        fit_emotion_model(&dataset, &FeatureSubset::new2())?,
    ];
    print!("{}", fit_report(&models.iter().collect::<Vec<_>>()));

    let report = importance_report(&models[0]);
    println!("\n{}", report.to_table());
    println!("mid-level inputs: {}", MIDLEVEL_NAMES.join(", "));

    let out = std::env::temp_dir().join("importance.svg");
    std::fs::write(&out, report.to_svg())?;
    println!("chart written to {}", out.display());
    Ok(())
}
