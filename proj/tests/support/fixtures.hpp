#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "curveprobe/graph.hpp"

namespace curveprobe::testing {

inline Graph make_graph(std::size_t n, std::vector<std::pair<NodeId, NodeId>> pairs,
                        std::string id = "g") {
  GraphData d;
  d.graph_id = std::move(id);
  d.num_nodes = n;
  for (auto [a, b] : pairs) d.edges.push_back(Edge::canonical(a, b));
  return Graph(std::move(d));
}

inline Graph complete_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_graph(n, e, "K" + std::to_string(n));
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i) e.emplace_back(i, static_cast<NodeId>((i + 1) % n));
  return make_graph(n, e, "C" + std::to_string(n));
}

inline Graph path_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return make_graph(n, e, "P" + std::to_string(n));
}

inline Graph erdos_renyi(std::size_t n, double p, std::mt19937_64& rng, std::string id = "er") {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return make_graph(n, e, std::move(id));
}

// Uniform labelled tree via a Pruefer sequence.
inline Graph random_tree(std::size_t n, std::mt19937_64& rng, std::string id = "tree") {
  if (n < 2) return make_graph(n, {}, std::move(id));
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  std::vector<NodeId> seq(n - 2);
  for (auto& s : seq) s = pick(rng);
  std::vector<std::size_t> deg(n, 1);
  for (NodeId s : seq) ++deg[s];
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId s : seq) {
    NodeId leaf = 0;
    while (deg[leaf] != 1) ++leaf;
    e.emplace_back(leaf, s);
    --deg[leaf];
    --deg[s];
  }
  std::vector<NodeId> rest;
  for (NodeId i = 0; i < n; ++i)
    if (deg[i] == 1) rest.push_back(i);
  e.emplace_back(rest[0], rest[1]);
  return make_graph(n, e, std::move(id));
}

// Cyclic Jacobi rotations on a dense symmetric matrix; ascending eigenvalues.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline std::vector<std::vector<double>> normalized_laplacian(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
  for (NodeId i = 0; i < n; ++i)
    if (g.degree(i) > 0) l[i][i] = 1.0;
  for (const Edge& e : g.edges()) {
    const double w = -1.0 / std::sqrt(double(g.degree(e.u)) * double(g.degree(e.v)));
    l[e.u][e.v] = w;
    l[e.v][e.u] = w;
  }
  return l;
}

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("curveprobe-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace curveprobe::testing
