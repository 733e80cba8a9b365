//! Shared inputs for the benchmarks.

use chatnet::MentionGraph;

/// Preferential-attachment graph at roughly edge-to-node ratio 4, the
/// density of a busy support channel.
pub fn channel_graph(nodes: usize) -> MentionGraph {
    let links = 3 * (nodes - 4) + 6;
    let edges = links + links * 3 / 10;
    chatnet::synthetic::preferential_attachment(nodes, 3, edges, 42).expect("valid generator parameters")
}
