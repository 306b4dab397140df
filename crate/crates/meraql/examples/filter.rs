//! The compactly supported spectral filter behind the continuation
//! generator: sampled g̃ and F̃ profiles plus the stretched-exponential
//! decay rate of the time-domain kernel.

use meraql::qa::{time_decay_exponent, FilterFunction};

fn main() {
    let filter = FilterFunction::build(256, 4097).unwrap();

    println!("{:>6} {:>10} {:>10}", "omega", "g_tilde", "f_tilde");
    for i in 0..=12 {
        let w = -1.5 + 0.25 * i as f64;
        println!("{w:6.2} {:10.6} {:10.6}", filter.g_tilde(w), filter.f_tilde(w));
    }
    println!();
    println!("g_tilde(0) = {:.12} (unit value)", filter.g_tilde(0.0));
    println!("g_tilde(1.0) = {:.3e} (compact support)", filter.g_tilde(1.0));
    println!(
        "f_tilde(2.0) + 1/2 = {:.3e} (exactly -1/omega outside the gap)",
        filter.f_tilde(2.0) + 0.5
    );

    let slope = time_decay_exponent(&filter, 10.0, 200.0, 40);
    println!();
    println!("time-kernel envelope: log(-log|g|) vs log y slope = {slope:.3}");
    println!("(a slope near 1 means almost-exponential decay in time)");
}
