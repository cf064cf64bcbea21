//! Edge lists, manifests and labeled matrices on disk.

use digraph_ot::io::{load_labeled_matrix, read_edge_list, save_labeled_matrix, write_edge_list, Manifest, ManifestEntry};
use digraph_ot::synth::cycle_of_cycles;

fn main() -> digraph_ot::Result<()> {
    let dir = std::env::temp_dir().join("digraph-ot-formats");
    let g = cycle_of_cycles(2, 3)?;

    let mut buf = Vec::new();
    write_edge_list(&g, &mut buf)?;
    println!("edge list:\n{}", String::from_utf8_lossy(&buf));
    assert_eq!(read_edge_list(buf.as_slice())?, g);

    let path = dir.join("ring.csv");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(&path, &buf)?;
    let m = Manifest {
        graphs: vec![ManifestEntry { id: "ring".into(), path: "ring.csv".into(), label: Some("demo".into()) }],
    };
    m.save(&dir.join("manifest.json"))?;
    println!("manifest:\n{}", std::fs::read_to_string(dir.join("manifest.json"))?);

    let d = nalgebra::DMatrix::from_row_slice(2, 2, &[0.0, 0.25, 0.25, 0.0]);
    let labels = vec!["x".to_string(), "y".to_string()];
    save_labeled_matrix(&labels, &d, &dir.join("d.csv"))?;
    println!("distance matrix:\n{}", std::fs::read_to_string(dir.join("d.csv"))?);
    assert_eq!(load_labeled_matrix(&dir.join("d.csv"))?, (labels, d));
    Ok(())
}
