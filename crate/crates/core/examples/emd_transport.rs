//! Exact earth mover's distance with the dual certificate.

use digraph_ot::ot::emd_solve;
use digraph_ot::Marginal;
use nalgebra::DMatrix;

fn main() -> digraph_ot::Result<()> {
    let mu = Marginal::normalized(&[3.0, 1.0, 2.0])?;
    let nu = Marginal::normalized(&[1.0, 1.0, 1.0, 3.0])?;
    let cost = DMatrix::from_fn(3, 4, |i, j| (i as f64 - j as f64).abs());

    let sol = emd_solve(&mu, &nu, &cost)?;
    println!("plan:{}", sol.plan.gamma);
    println!("primal {:.12}", sol.plan.objective);
    println!("dual   {:.12}", sol.dual_objective(&mu, &nu));
    println!("dual infeasibility {:.1e}, pivots {}", sol.dual_infeasibility(&cost), sol.pivots);
    Ok(())
}
