//! Quasiparticle bands of the chiral pairing model along the Brillouin-zone
//! diagonal, for the uniform single layer and for both endpoints of the
//! coarse-graining interpolation.

use meraql::bdg::{block_energies, interp_block, single_layer_block, PipParams};
use meraql::lattice::Dir;

fn main() {
    let p = PipParams::default();
    println!("(t, delta, mu, mu') = ({}, {}, {}, {})", p.t, p.delta, p.mu, p.mu_prime);
    println!();
    println!("{:>8} {:>22} {:>34}", "k", "single layer", "interpolated cell (x), lambda 0 / 1");
    let n = 16;
    for i in 0..=n {
        let k = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        let single = block_energies(&single_layer_block(&p, k, k));
        let start = block_energies(&interp_block(&p, Dir::X, 0.0, k, k));
        let end = block_energies(&interp_block(&p, Dir::X, 1.0, k, k));
        println!(
            "{:8.4} {:>10.4} {:>10.4}   {:>7.3} {:>7.3} {:>7.3} {:>7.3} / {:>5.1} {:>5.1} {:>5.1} {:>5.1}",
            k, single[0], single[1], start[0], start[1], start[2], start[3],
            end[0], end[1], end[2], end[3],
        );
    }
    println!();
    println!("At the endpoint the removed sublattice sits at flat bands ±{}.", -p.mu_prime);
}
