//! S^p norms, best approximation by a fixed index set, and greedy n-term selection.

use num_complex::Complex64;
use sp_approx::spectrum::{self, Spectrum};

fn main() -> sp_approx::Result<()> {
    let f = Spectrum::lattice(
        2,
        [
            (vec![0, 0], Complex64::new(1.0, 0.0)),
            (vec![1, -1], Complex64::new(0.5, 0.5)),
            (vec![2, 3], Complex64::new(-0.25, 0.0)),
            (vec![-4, 1], Complex64::new(0.0, 0.125)),
        ],
    )?;
    for p in [0.5, 1.0, 2.0, 4.0] {
        println!("p = {p:<4} ||f||_p = {:.6}", spectrum::sp_norm(&f, p)?);
    }

    let box1 = |k: &spectrum::Frequency| k.as_lattice().is_some_and(|k| k.iter().all(|c| c.abs() <= 1));
    println!("E_[-1,1]^2(f)_2 = {:.6}", spectrum::best_tail_approx(&f, box1, 2.0)?);

    for n in 0..=f.len() {
        let g = spectrum::greedy_select(&f, n, 1.0)?;
        println!("sigma_{n}(f)_1 = {:.6}  kept {:?}", g.value, g.selected);
    }
    println!("round trip: {}", Spectrum::from_json_str(&f.to_json_string())? == f);
    Ok(())
}
