#include "curveprobe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "curveprobe/errors.hpp"

namespace curveprobe {

std::vector<double> laplacian_spectrum(std::span<const Edge> edges, std::size_t num_nodes,
                                       const SpectralOptions& options) {
  if (edges.empty()) throw ValidationError("spectral gap of an empty edge set is undefined");
  for (const auto& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes || e.u == e.v) {
      std::ostringstream os;
      os << "spectral gap: invalid edge (" << e.u << ", " << e.v << ") for " << num_nodes << " nodes";
      throw ValidationError(os.str());
    }
  }

  std::vector<bool> keep(num_nodes, false);
  for (const auto& e : edges) keep[e.u] = keep[e.v] = true;
  if (options.largest_component) {
    const auto label = connected_components(num_nodes, edges);
    std::vector<std::size_t> size(num_nodes, 0);
    for (std::size_t i = 0; i < num_nodes; ++i)
      if (keep[i]) ++size[label[i]];
    const auto best = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());
    for (std::size_t i = 0; i < num_nodes; ++i) keep[i] = keep[i] && label[i] == best;
  }

  std::vector<std::ptrdiff_t> local(num_nodes, -1);
  std::ptrdiff_t n = 0;
  for (std::size_t i = 0; i < num_nodes; ++i)
    if (keep[i]) local[i] = n++;
  if (static_cast<std::size_t>(n) > options.max_nodes) {
    std::ostringstream os;
    os << "spectral gap: " << n << " nodes exceed the dense eigensolver bound of " << options.max_nodes;
    throw CapabilityError(os.str());
  }

  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    const auto a = local[e.u], b = local[e.v];
    if (a < 0 || b < 0) continue;
    adj(a, b) = adj(b, a) = 1.0;
  }
  const Eigen::VectorXd deg = adj.rowwise().sum();
  Eigen::MatrixXd lap;
  if (options.laplacian == LaplacianKind::Normalized) {
    const Eigen::VectorXd inv_sqrt = deg.array().rsqrt();
    lap = Eigen::MatrixXd::Identity(n, n) - inv_sqrt.asDiagonal() * adj * inv_sqrt.asDiagonal();
  } else {
    lap = Eigen::MatrixXd(deg.asDiagonal()) - adj;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw CapabilityError("spectral gap: eigensolver did not converge");
  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(values.begin(), values.end());
  return values;
}

double spectral_gap(std::span<const Edge> edges, std::size_t num_nodes, const SpectralOptions& options) {
  const auto values = laplacian_spectrum(edges, num_nodes, options);
  return values.size() < 2 ? 0.0 : std::max(values[1], 0.0);
}

}  // namespace curveprobe
