//! Determinant route: closed forms, the numeric cross-check, and the
//! generic determinant used for higher orders.

use gme::mixture::MixtureConfig;
use gme::series_det::{
    build_p, build_q, det_closed_form, det_numeric, entropy_det, generic_determinant, z1, z2,
    DetForm,
};

fn main() -> gme::Result<()> {
    let (q, mu) = (5, 0.01);
    let p = build_p(q, mu)?;
    let q1 = build_q(q, mu, 1)?;
    let closed = det_closed_form(DetForm::IPQ { ell: 1 }, q, mu)?;
    let numeric = det_numeric(&[(1.0, &p), (1.0, &q1)], None)?;
    println!("det(I + P + Q_1): closed {closed:.15}, LU {numeric:.15}");

    // A third-order term, det(I + P + 2 Q_1 + Q_3), has no closed form here.
    println!(
        "det(I + P + 2Q_1 + Q_3) = {:.12}",
        generic_determinant(q, mu, 1.0, &[(1, 2.0), (3, 1.0)])?
    );

    let n = 3;
    println!("z1 = {:.6e}, z2 = {:.6e}", z1(n, q, mu)?, z2(n, q, mu)?);
    let h = entropy_det(&MixtureConfig::new(n, q, 1.0, mu)?)?;
    println!("entropy via determinants {:.9}", h.value);
    // Outside the region where every determinant stays above 1/2 it refuses.
    println!(
        "mu = 0.3: {:?}",
        entropy_det(&MixtureConfig::new(n, q, 1.0, 0.3)?).err()
    );
    Ok(())
}
