//! Why |A||B||C| >> q^11 is needed for x(y+z) to fill M2: taking A as the
//! singular matrices and B = C = M2 keeps the image inside the singular
//! matrices, exactly q^3 + q^2 - q of them.

use m2lab::expand::sharpness_check;
use m2lab::tables::GroupTable;
use m2lab::Field;

fn main() -> m2lab::Result<()> {
    for q in [2u32, 3, 5] {
        let t = GroupTable::enumerate(Field::new(q)?)?;
        let rep = sharpness_check(&t)?;
        println!(
            "q = {q}: |x(y+z) image| with A = D0, B = C = M2 is {} (expected {}), subset of D0: {}",
            rep.image, rep.expected, rep.subset_of_d0
        );
        assert!(rep.exact && rep.subset_of_d0);
    }
    Ok(())
}
