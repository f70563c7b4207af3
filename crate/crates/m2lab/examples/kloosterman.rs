//! Kloosterman sums K(a, b) = sum over x != 0 of e(Tr(ax + b/x)) and the
//! |K(a, b)| <= 2 sqrt(q) bound for ab != 0, including an extension field.

use m2lab::{Fe, Field};

fn main() -> m2lab::Result<()> {
    let f7 = Field::new(7)?;
    println!("K(a, b) over F_7:");
    print!("      ");
    for b in 0..7 {
        print!("{b:>8}");
    }
    println!();
    for a in 0..7u8 {
        print!("a = {a} ");
        for b in 0..7u8 {
            print!("{:>8.3}", f7.kloosterman(Fe(a), Fe(b)));
        }
        println!();
    }

    for q in [3u32, 5, 7, 9] {
        let f = Field::new(q)?;
        let bound = 2.0 * (q as f64).sqrt();
        let mut worst = 0.0f64;
        for a in 1..q {
            for b in 1..q {
                worst = worst.max(f.kloosterman(Fe(a as u8), Fe(b as u8)).abs());
            }
        }
        println!("q = {q:>2}: max |K(a,b)| over ab != 0 is {worst:.6} <= 2 sqrt(q) = {bound:.6}");
        assert!(worst <= bound + 1e-9);
    }
    Ok(())
}
