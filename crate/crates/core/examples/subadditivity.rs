use hrbounds::shape::{subadditivity_constant, ShapeFunction};

fn main() -> hrbounds::Result<()> {
    for nu in [1.0, 1.5, 2.0, 3.0] {
        let cert = subadditivity_constant(&ShapeFunction::AbsPower { nu })?;
        println!("nu={nu:<4} K={:<6} grid max ratio={:.9}", cert.k, cert.checked_grid_max_ratio);
    }
    Ok(())
}
