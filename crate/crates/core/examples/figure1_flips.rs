//! A ring of directed cycles with one local and one global edge flipped.
//! Both flips are invisible to the Frobenius norm and to the undirected
//! view; the directed OT distances tell them apart.

use digraph_ot::cli::{figure1_table, render_figure1, RunConfig};

fn main() -> digraph_ot::Result<()> {
    let (triple, table) = figure1_table(4, 4, &RunConfig::default())?;
    println!(
        "{} nodes, {} edges each",
        triple.original.n(),
        triple.original.edge_count()
    );
    print!("{}", render_figure1(&table));
    Ok(())
}
