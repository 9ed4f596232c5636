//! Closed-form eigenbasis of the coupling matrix and the identities behind it.

use gme::spectral::{eigenbasis, eigenvalues, identity_residuals, mixing_matrix};

fn main() -> gme::Result<()> {
    let (q, mu) = (4, 0.1);
    let ev = eigenvalues(q, mu)?;
    println!("lambda1 = {:.9}, lambda2 = {:.9}", ev.lambda1, ev.lambda2);
    println!("m1 = {:.9}, m2 = {:.9}", ev.m1, ev.m2);

    let d = eigenbasis(q, mu)?;
    println!(
        "basis orthogonality residual {:.1e}",
        d.orthogonality_residual()
    );
    println!("diagonalization residual {:.1e}", d.m_residual());
    println!(
        "identity residuals {:?}",
        identity_residuals(q, mu)?.map(|r| format!("{r:.1e}"))
    );

    let w = mixing_matrix(q, mu)?;
    println!(
        "mixing matrix det {:+.12}, orthogonality residual {:.1e}",
        w.det(),
        w.orthogonality_residual()
    );
    Ok(())
}
