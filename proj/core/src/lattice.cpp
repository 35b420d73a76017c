#include "pepslab/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pepslab {

std::size_t GraphSpec::n_qubits() const {
  std::size_t total = 0;
  for (const SiteSpec& s : sites) total += static_cast<std::size_t>(s.coordination);
  return total;
}

std::vector<int> GraphSpec::logical_sites() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (!sites[i].boundary) out.push_back(static_cast<int>(i));
  }
  return out;
}

QubitIndexMap::QubitIndexMap(const GraphSpec& spec) {
  offsets_.reserve(spec.sites.size());
  coordination_.reserve(spec.sites.size());
  for (const SiteSpec& s : spec.sites) {
    offsets_.push_back(total_);
    coordination_.push_back(s.coordination);
    total_ += static_cast<std::size_t>(s.coordination);
  }
}

std::size_t QubitIndexMap::index(int site, int port) const {
  if (site < 0 || static_cast<std::size_t>(site) >= offsets_.size()) {
    throw std::out_of_range("QubitIndexMap: site out of range");
  }
  if (port < 0 || port >= coordination_[static_cast<std::size_t>(site)]) {
    throw std::out_of_range("QubitIndexMap: port out of range");
  }
  return offsets_[static_cast<std::size_t>(site)] + static_cast<std::size_t>(port);
}

std::pair<int, int> QubitIndexMap::site_port(std::size_t qubit) const {
  if (qubit >= total_) throw std::out_of_range("QubitIndexMap: qubit out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), qubit);
  int site = static_cast<int>(std::distance(offsets_.begin(), it)) - 1;
  return {site, static_cast<int>(qubit - offsets_[static_cast<std::size_t>(site)])};
}

std::vector<std::size_t> bond_partner_table(const GraphSpec& spec,
                                            const QubitIndexMap& map) {
  std::vector<std::size_t> partner(map.total(), map.total());
  for (const Bond& b : spec.bonds) {
    std::size_t qa = map.index(b.site_a, b.port_a);
    std::size_t qb = map.index(b.site_b, b.port_b);
    partner[qa] = qb;
    partner[qb] = qa;
  }
  return partner;
}

std::vector<std::pair<int, int>> default_intra_edges(int coordination) {
  std::vector<std::pair<int, int>> edges;
  switch (coordination) {
    case 1:
      break;
    case 2:
      edges = {{0, 1}};
      break;
    case 3:
      edges = {{0, 1}, {1, 2}, {2, 0}};
      break;
    case 4:
      edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
      break;
    case 6:
      // Octahedron: every pair of ports is an edge except the three
      // antipodal pairs (0,3), (1,4), (2,5).
      for (int a = 0; a < 6; ++a) {
        for (int b = a + 1; b < 6; ++b) {
          if (b - a != 3) edges.emplace_back(a, b);
        }
      }
      break;
    default:
      for (int p = 0; p < coordination; ++p) {
        edges.emplace_back(p, (p + 1) % coordination);
      }
      break;
  }
  return edges;
}

namespace {

SiteSpec make_site(int coordination, bool boundary = false) {
  SiteSpec s;
  s.coordination = coordination;
  s.boundary = boundary;
  if (!boundary) s.intra_edges = default_intra_edges(coordination);
  return s;
}

void require_rank(const std::string& kind, const std::vector<int>& dims,
                  std::size_t rank) {
  if (dims.size() != rank) {
    std::ostringstream os;
    os << "build_named: lattice '" << kind << "' expects " << rank
       << " dimension(s), got " << dims.size();
    throw std::invalid_argument(os.str());
  }
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("build_named: dimensions must be positive");
  }
}

std::string dims_tag(const std::vector<int>& dims) {
  std::string tag;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) tag += "x";
    tag += std::to_string(dims[i]);
  }
  return tag;
}

GraphSpec build_ring(int n) {
  if (n < 2) {
    throw std::invalid_argument(
        "build_named: periodic chain needs at least 2 sites");
  }
  GraphSpec g;
  g.name = "ring" + std::to_string(n);
  for (int i = 0; i < n; ++i) g.sites.push_back(make_site(2));
  for (int i = 0; i < n; ++i) {
    g.bonds.push_back({i, 0, (i + 1) % n, 1});
  }
  g.interior_count = static_cast<std::size_t>(n);
  return g;
}

GraphSpec build_line_fixed(int n) {
  if (n < 3) {
    throw std::invalid_argument(
        "build_named: fixed chain needs at least 3 sites (1 interior)");
  }
  GraphSpec g;
  g.name = "line" + std::to_string(n) + "-fixed";
  g.sites.push_back(make_site(1, /*boundary=*/true));
  for (int i = 1; i < n - 1; ++i) g.sites.push_back(make_site(2));
  g.sites.push_back(make_site(1, /*boundary=*/true));
  // Interior port 0 points right (toward higher site index), port 1 left.
  g.bonds.push_back({0, 0, 1, 1});
  for (int i = 1; i < n - 2; ++i) g.bonds.push_back({i, 0, i + 1, 1});
  g.bonds.push_back({n - 2, 0, n - 1, 0});
  g.interior_count = static_cast<std::size_t>(n - 2);
  return g;
}

GraphSpec build_hex(int nx, int ny) {
  GraphSpec g;
  g.name = "hex" + dims_tag({nx, ny});
  int cells = nx * ny;
  for (int i = 0; i < 2 * cells; ++i) g.sites.push_back(make_site(3));
  auto idx = [&](int x, int y, int s) { return 2 * (y * nx + x) + s; };
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      int a = idx(x, y, 0);
      g.bonds.push_back({a, 0, idx(x, y, 1), 0});
      g.bonds.push_back({a, 1, idx((x + nx - 1) % nx, y, 1), 1});
      g.bonds.push_back({a, 2, idx(x, (y + ny - 1) % ny, 1), 2});
    }
  }
  g.interior_count = static_cast<std::size_t>(2 * cells);
  return g;
}

GraphSpec build_square_periodic(int nx, int ny) {
  if (nx < 2 || ny < 2) {
    throw std::invalid_argument(
        "build_named: periodic square needs both dimensions >= 2 "
        "(size-1 wrap would self-bond)");
  }
  GraphSpec g;
  g.name = "square" + dims_tag({nx, ny});
  for (int i = 0; i < nx * ny; ++i) g.sites.push_back(make_site(4));
  auto idx = [&](int x, int y) { return y * nx + x; };
  // Ports: 0 = +x, 1 = -x, 2 = +y, 3 = -y.
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      g.bonds.push_back({idx(x, y), 0, idx((x + 1) % nx, y), 1});
      g.bonds.push_back({idx(x, y), 2, idx(x, (y + 1) % ny), 3});
    }
  }
  g.interior_count = static_cast<std::size_t>(nx * ny);
  return g;
}

GraphSpec build_square_fixed(int lx, int ly) {
  if (lx < 3 || ly < 3) {
    throw std::invalid_argument(
        "build_named: fixed square needs both dimensions >= 3 "
        "(at least one interior site)");
  }
  GraphSpec g;
  g.name = "square" + dims_tag({lx, ly}) + "-fixed";
  auto idx = [&](int x, int y) { return y * lx + x; };
  // Directions in fixed order +x, -x, +y, -y; a site's ports are the
  // directions that exist at its position, numbered in that order.
  auto port_of = [&](int x, int y, int dir) {
    bool exists[4] = {x + 1 < lx, x > 0, y + 1 < ly, y > 0};
    int port = 0;
    for (int d = 0; d < dir; ++d) port += exists[d] ? 1 : 0;
    return port;
  };
  for (int y = 0; y < ly; ++y) {
    for (int x = 0; x < lx; ++x) {
      int c = (x + 1 < lx) + (x > 0) + (y + 1 < ly) + (y > 0);
      g.sites.push_back(make_site(c));
    }
  }
  for (int y = 0; y < ly; ++y) {
    for (int x = 0; x < lx; ++x) {
      if (x + 1 < lx) {
        g.bonds.push_back({idx(x, y), port_of(x, y, 0), idx(x + 1, y), port_of(x + 1, y, 1)});
      }
      if (y + 1 < ly) {
        g.bonds.push_back({idx(x, y), port_of(x, y, 2), idx(x, y + 1), port_of(x, y + 1, 3)});
      }
    }
  }
  g.interior_count = static_cast<std::size_t>((lx - 2) * (ly - 2));
  return g;
}

GraphSpec build_cubic(int nx, int ny, int nz) {
  if (nx < 2 || ny < 2 || nz < 2) {
    throw std::invalid_argument(
        "build_named: periodic cubic needs all dimensions >= 2 "
        "(size-1 wrap would self-bond)");
  }
  GraphSpec g;
  g.name = "cubic" + dims_tag({nx, ny, nz});
  for (int i = 0; i < nx * ny * nz; ++i) g.sites.push_back(make_site(6));
  auto idx = [&](int x, int y, int z) { return (z * ny + y) * nx + x; };
  // Ports: 0/1 = +/-x, 2/3 = +/-y, 4/5 = +/-z.
  for (int z = 0; z < nz; ++z) {
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        g.bonds.push_back({idx(x, y, z), 0, idx((x + 1) % nx, y, z), 1});
        g.bonds.push_back({idx(x, y, z), 2, idx(x, (y + 1) % ny, z), 3});
        g.bonds.push_back({idx(x, y, z), 4, idx(x, y, (z + 1) % nz), 5});
      }
    }
  }
  g.interior_count = static_cast<std::size_t>(nx * ny * nz);
  return g;
}

}  // namespace

GraphSpec build_named(const std::string& kind, const std::vector<int>& dims,
                      BoundaryKind boundary) {
  bool fixed = boundary == BoundaryKind::kFixed;
  if (kind == "ring" || kind == "line") {
    require_rank(kind, dims, 1);
    if (kind == "ring" && fixed) {
      throw std::invalid_argument("build_named: ring is periodic; use 'line' with fixed boundary");
    }
    return fixed ? build_line_fixed(dims[0]) : build_ring(dims[0]);
  }
  if (kind == "hex") {
    require_rank(kind, dims, 2);
    if (fixed) throw std::invalid_argument("build_named: fixed-boundary hex is not supported");
    return build_hex(dims[0], dims[1]);
  }
  if (kind == "square") {
    require_rank(kind, dims, 2);
    return fixed ? build_square_fixed(dims[0], dims[1])
                 : build_square_periodic(dims[0], dims[1]);
  }
  if (kind == "cubic") {
    require_rank(kind, dims, 3);
    if (fixed) throw std::invalid_argument("build_named: fixed-boundary cubic is not supported");
    return build_cubic(dims[0], dims[1], dims[2]);
  }
  throw std::invalid_argument("build_named: unknown lattice kind '" + kind + "'");
}

GraphSpec load_graph(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("load_graph: parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("sites") || !doc["sites"].is_array() ||
      !doc.contains("bonds") || !doc["bonds"].is_array()) {
    throw std::runtime_error("load_graph: document needs 'sites' and 'bonds' arrays");
  }

  GraphSpec g;
  g.name = doc.value("name", std::string("custom"));

  std::map<long long, int> id_to_index;
  for (const auto& js : doc["sites"]) {
    if (!js.is_object() || !js.contains("id") || !js.contains("coordination")) {
      throw std::runtime_error("load_graph: each site needs 'id' and 'coordination'");
    }
    long long id = js["id"].get<long long>();
    if (id_to_index.count(id)) {
      throw std::runtime_error("load_graph: duplicate site id " + std::to_string(id));
    }
    id_to_index[id] = static_cast<int>(g.sites.size());

    SiteSpec s;
    s.coordination = js["coordination"].get<int>();
    s.boundary = js.value("boundary", s.coordination == 1);
    if (js.contains("intra_edges")) {
      for (const auto& je : js["intra_edges"]) {
        if (!je.is_array() || je.size() != 2) {
          throw std::runtime_error("load_graph: intra edge of site " + std::to_string(id) +
                                   " must be a [port, port] pair");
        }
        s.intra_edges.emplace_back(je[0].get<int>(), je[1].get<int>());
      }
    } else if (!s.boundary) {
      s.intra_edges = default_intra_edges(s.coordination);
    }
    g.sites.push_back(std::move(s));
  }

  for (const auto& jb : doc["bonds"]) {
    if (!jb.is_array() || jb.size() != 4) {
      throw std::runtime_error("load_graph: each bond must be [site, port, site, port]");
    }
    Bond b;
    long long ida = jb[0].get<long long>();
    long long idb = jb[2].get<long long>();
    auto ita = id_to_index.find(ida);
    auto itb = id_to_index.find(idb);
    if (ita == id_to_index.end()) {
      throw std::runtime_error("load_graph: bond references unknown site id " + std::to_string(ida));
    }
    if (itb == id_to_index.end()) {
      throw std::runtime_error("load_graph: bond references unknown site id " + std::to_string(idb));
    }
    b.site_a = ita->second;
    b.port_a = jb[1].get<int>();
    b.site_b = itb->second;
    b.port_b = jb[3].get<int>();
    g.bonds.push_back(b);
  }

  g.interior_count = g.logical_sites().size();

  std::vector<std::string> violations = validate(g);
  if (!violations.empty()) {
    std::string msg = "load_graph: invalid graph:";
    for (const std::string& v : violations) msg += "\n  " + v;
    throw std::runtime_error(msg);
  }
  return g;
}

GraphSpec load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_graph_file: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str());
}

namespace {

// Union-find over a site's ports, for intra-graph connectivity.
int uf_find(std::vector<int>& parent, int a) {
  while (parent[a] != a) {
    parent[a] = parent[parent[a]];
    a = parent[a];
  }
  return a;
}

}  // namespace

std::vector<std::string> validate(const GraphSpec& spec) {
  std::vector<std::string> out;
  auto complain = [&out](const std::string& msg) { out.push_back(msg); };

  if (spec.sites.empty()) {
    complain("graph has no sites");
    return out;
  }

  for (std::size_t i = 0; i < spec.sites.size(); ++i) {
    const SiteSpec& s = spec.sites[i];
    std::string tag = "site " + std::to_string(i);
    if (s.coordination < 1) {
      complain(tag + ": coordination must be >= 1");
      continue;
    }
    if (s.boundary) {
      if (s.coordination != 1) complain(tag + ": boundary sites must have coordination 1");
      if (!s.intra_edges.empty()) complain(tag + ": boundary sites carry no intra edges");
      continue;
    }
    if (s.coordination == 1) {
      complain(tag + ": coordination-1 sites must be flagged boundary");
      continue;
    }
    std::set<std::pair<int, int>> seen;
    std::vector<int> parent(static_cast<std::size_t>(s.coordination));
    std::iota(parent.begin(), parent.end(), 0);
    bool edges_ok = true;
    for (const auto& [a, b] : s.intra_edges) {
      if (a < 0 || b < 0 || a >= s.coordination || b >= s.coordination) {
        complain(tag + ": intra edge (" + std::to_string(a) + "," + std::to_string(b) +
                 ") out of port range");
        edges_ok = false;
        continue;
      }
      if (a == b) {
        complain(tag + ": intra edge (" + std::to_string(a) + "," + std::to_string(b) +
                 ") is a self-loop");
        edges_ok = false;
        continue;
      }
      auto key = std::minmax(a, b);
      if (!seen.insert(key).second) {
        complain(tag + ": duplicate intra edge (" + std::to_string(a) + "," +
                 std::to_string(b) + ")");
        edges_ok = false;
        continue;
      }
      parent[static_cast<std::size_t>(uf_find(parent, a))] =
          uf_find(parent, b);
    }
    if (edges_ok) {
      int root = uf_find(parent, 0);
      for (int p = 1; p < s.coordination; ++p) {
        if (uf_find(parent, p) != root) {
          complain(tag + ": intra graph is disconnected, site ground space is "
                         "larger than one logical qubit");
          break;
        }
      }
    }
  }

  // Ports must pair exactly one-to-one across bonds.
  QubitIndexMap map(spec);
  std::vector<int> uses(map.total(), 0);
  for (std::size_t k = 0; k < spec.bonds.size(); ++k) {
    const Bond& b = spec.bonds[k];
    std::string tag = "bond " + std::to_string(k);
    if (b.site_a < 0 || static_cast<std::size_t>(b.site_a) >= spec.sites.size() ||
        b.site_b < 0 || static_cast<std::size_t>(b.site_b) >= spec.sites.size()) {
      complain(tag + ": site index out of range");
      continue;
    }
    if (b.site_a == b.site_b) {
      complain(tag + ": joins a site to itself");
      continue;
    }
    if (b.port_a < 0 || b.port_a >= spec.sites[static_cast<std::size_t>(b.site_a)].coordination ||
        b.port_b < 0 || b.port_b >= spec.sites[static_cast<std::size_t>(b.site_b)].coordination) {
      complain(tag + ": port index out of range");
      continue;
    }
    ++uses[map.index(b.site_a, b.port_a)];
    ++uses[map.index(b.site_b, b.port_b)];
  }
  for (std::size_t q = 0; q < uses.size(); ++q) {
    auto [site, port] = map.site_port(q);
    if (uses[q] == 0) {
      complain("site " + std::to_string(site) + " port " + std::to_string(port) +
               ": dangling (no bond)");
    } else if (uses[q] > 1) {
      complain("site " + std::to_string(site) + " port " + std::to_string(port) +
               ": used by " + std::to_string(uses[q]) + " bonds");
    }
  }

  return out;
}

BoundaryKind parse_boundary(const std::string& text) {
  if (text == "periodic") return BoundaryKind::kPeriodic;
  if (text == "fixed") return BoundaryKind::kFixed;
  throw std::invalid_argument("boundary must be 'periodic' or 'fixed', got '" + text + "'");
}

}  // namespace pepslab
