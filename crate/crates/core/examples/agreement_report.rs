//! Agreement statistics between markerless values and a reference device.

use markerless::agreement::{agreement_report, Pair, PairedMeasurements, TrrEstimator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let truth = [
        [0.31, 0.33, 0.32],
        [0.42, 0.40, 0.41],
        [0.25, 0.27, 0.26],
        [0.36, 0.35, 0.37],
    ];
    let mut pairs = Vec::new();
    for (p, reps) in truth.iter().enumerate() {
        for (r, &t) in reps.iter().enumerate() {
            let noise = ((p * 3 + r) as f64 * 1.7).sin() * 0.01;
            pairs.push(Pair {
                participant_id: format!("P{:02}", p + 1),
                rep_index: r + 1,
                mmc: t * 1.03 + noise,
                truth: t,
            });
        }
    }
    let data = PairedMeasurements::new(pairs, "m")?;
    let rep = agreement_report(&data, TrrEstimator::Icc21)?;
    println!("n      {}", rep.n);
    println!("MAE    {:.4} m", rep.mae);
    println!("bias   {:+.4} m", rep.bias);
    println!("LoA    [{:+.4}, {:+.4}] m", rep.loa_low, rep.loa_high);
    println!("ICC    {:.3} ({:?})", rep.icc, rep.icc_label);
    match rep.trr {
        Some(t) => println!("TRR    {t:.3}"),
        None => println!("TRR    n/a"),
    }
    Ok(())
}
