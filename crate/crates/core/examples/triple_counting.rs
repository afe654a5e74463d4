//! Counting monochromatic solutions of a·x = y - z in Z/NZ with the FFT.
//!
//! Run with `cargo run --release --example triple_counting`.

use partreg::fourier::{count_monochromatic_triples, CountMethod};
use partreg::{Colouring, Ground};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> partreg::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 4099;
    let colours: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let colouring = Colouring::new(Ground::ZMod(n), colours, 3)?;
    for a in [1, 2, 5] {
        let fft = count_monochromatic_triples(&colouring, a, CountMethod::Convolution)?;
        println!("N = {n}, a = {a}: {} monochromatic triples, per class {:?}", fft.total, fft.per_class);
    }
    let small = Colouring::new(Ground::ZMod(65), (0..65).map(|x| (x % 3) as usize).collect(), 3)?;
    let brute = count_monochromatic_triples(&small, 2, CountMethod::Brute)?;
    let fft = count_monochromatic_triples(&small, 2, CountMethod::Convolution)?;
    println!("N = 65 residue colouring: direct {} vs FFT {}", brute.total, fft.total);

    // 0 forms its own class: x = y = z = 0 is the only solution it contributes.
    let mut split = vec![0usize; 11];
    for (x, c) in split.iter_mut().enumerate().skip(1) {
        *c = 1 + (x % 2);
    }
    let c = Colouring::new(Ground::ZMod(11), split, 3)?;
    let r = count_monochromatic_triples(&c, 2, CountMethod::Brute)?;
    println!("N = 11, a = 2 with 0 isolated: per class {:?}", r.per_class);
    Ok(())
}
