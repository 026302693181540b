//! Renders a mutation network in Graphviz DOT format. Pass a sequence file,
//! or nothing for the A2 loop.

use cluster_nz::catalog;
use cluster_nz::io::read_sequence;
use cluster_nz::network::build_network;

fn main() -> cluster_nz::Result<()> {
    let gamma = match std::env::args().nth(1) {
        Some(path) => read_sequence(path.as_ref())?,
        None => catalog::a2_loop(),
    };
    print!("{}", build_network(&gamma)?.to_dot());
    Ok(())
}
