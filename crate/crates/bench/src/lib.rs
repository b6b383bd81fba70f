//! Benchmark fixtures shared by the criterion targets.

use specbound_core::mesh::{assemble_operators, icosphere};
use specbound_core::{MeshGeometry, SparseOperatorPair};

/// Icosphere of the given level with its assembled operators.
pub fn sphere_fixture(level: usize) -> (MeshGeometry, SparseOperatorPair) {
    let mesh = icosphere(level).expect("bundled level");
    let ops = assemble_operators(&mesh);
    (mesh, ops)
}
