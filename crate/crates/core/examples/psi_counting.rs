//! Counting and streaming [y, z]-smooth numbers.

use dioph_smooth::sieve::{enumerate_smooth, psi_count, psi_recursive, SmoothnessWindow};

fn main() -> dioph_smooth::Result<()> {
    let w = SmoothnessWindow::new(2, 5)?;
    let first: Vec<u64> = enumerate_smooth(100, w, false)?.take(12).collect();
    println!("5-smooth numbers: {first:?} ...");
    println!("Psi(100; 2, 5)  = {}", psi_count(100, w, false)?);
    println!("Psi*(50; 3, 7)  = {}", psi_count(50, SmoothnessWindow::new(3, 7)?, true)?);

    let x = 10_000_000;
    let w = SmoothnessWindow::new(11, 215)?;
    let streamed = psi_count(x, w, false)?;
    let recursive = psi_recursive(x, w, false)?;
    println!("Psi(10^7; 11, 215): stream {streamed}, recursion {recursive}");
    Ok(())
}
