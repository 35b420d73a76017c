#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace pepslab {

// One lattice site of the construction: a cluster of `coordination` qubits
// (its ports, numbered 0..coordination-1), an Ising interaction graph on
// those ports, and a flag for boundary sites, which carry a single port and
// no interaction graph.
struct SiteSpec {
  int coordination = 0;
  std::vector<std::pair<int, int>> intra_edges;
  bool boundary = false;
};

// A bond joins port `port_a` of site `site_a` to port `port_b` of site
// `site_b`.  Ports pair one-to-one: each (site, port) appears in exactly one
// bond.  Two sites may share several bonds (small periodic lattices wrap
// onto the same neighbour), but the ports involved are always distinct.
struct Bond {
  int site_a = 0;
  int port_a = 0;
  int site_b = 0;
  int port_b = 0;
};

struct GraphSpec {
  std::string name;
  std::vector<SiteSpec> sites;
  std::vector<Bond> bonds;
  // Sites with full coordination, used to normalise per-site quantities on
  // fixed-boundary lattices ("N_S" in reports).  Builders fill this in; for
  // loaded documents it defaults to the non-boundary site count.
  std::size_t interior_count = 0;

  std::size_t n_sites() const { return sites.size(); }
  std::size_t n_qubits() const;
  std::vector<int> logical_sites() const;  // indices of non-boundary sites
};

// Global qubit numbering: site-major, ports in order within each site.
class QubitIndexMap {
 public:
  QubitIndexMap() = default;
  explicit QubitIndexMap(const GraphSpec& spec);

  std::size_t total() const { return total_; }
  std::size_t index(int site, int port) const;
  std::pair<int, int> site_port(std::size_t qubit) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<int> coordination_;
  std::size_t total_ = 0;
};

// Partner qubit across the unique bond at each port; indexed by global qubit.
std::vector<std::size_t> bond_partner_table(const GraphSpec& spec,
                                            const QubitIndexMap& map);

// Default intra-site interaction graph for a given coordination number:
// c=1 none, c=2 a single edge, c=3 a triangle, c=4 a 4-cycle,
// c=6 an octahedron, anything else a c-cycle.
std::vector<std::pair<int, int>> default_intra_edges(int coordination);

enum class BoundaryKind { kPeriodic, kFixed };

// Built-in lattices:
//   "ring"  dims {N}         periodic chain, c=2
//   "line"  dims {N}         fixed chain: N-2 interior sites (c=2) capped by
//                            two single-qubit boundary sites
//   "hex"   dims {nx, ny}    periodic honeycomb, 2 sites per cell, c=3
//   "square" dims {nx, ny}   c=4; fixed boundary gives corner (c=2) and
//                            edge (c=3) sites with reduced interaction graphs
//   "cubic" dims {nx, ny, nz} periodic, c=6
// Intra-site graphs are the defaults for each site's coordination.
GraphSpec build_named(const std::string& kind, const std::vector<int>& dims,
                      BoundaryKind boundary = BoundaryKind::kPeriodic);

// Reads a graph document:
// {
//   "name": "petersen",
//   "sites": [{"id": 0, "coordination": 3,
//              "intra_edges": [[0,1],[1,2],[2,0]],   // optional, defaulted
//              "boundary": false}, ...],             // optional, default false
//   "bonds": [[site_id, port, site_id, port], ...]
// }
// Sites keep their declaration order for qubit numbering.  Malformed
// documents and graphs with validation violations are rejected with
// messages naming the offending element.
GraphSpec load_graph(const std::string& text);
GraphSpec load_graph_file(const std::string& path);

// Semantic checks; returns human-readable violations (empty when valid):
// ports pair exactly one-to-one across bonds, no self-bonds, intra edges in
// range and distinct, non-boundary interaction graphs connected (so each
// site contributes exactly one logical qubit), boundary sites single-port.
std::vector<std::string> validate(const GraphSpec& spec);

BoundaryKind parse_boundary(const std::string& text);

}  // namespace pepslab
