#include "oscloc/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "oscloc/error.hpp"

namespace oscloc {

BusIds ReducedModel::bus_ids() const {
  BusIds ids = gen_ids;
  ids.insert(ids.end(), load_ids.begin(), load_ids.end());
  return ids;
}

bool ReducedModel::is_generator(BusId id) const {
  return std::find(gen_ids.begin(), gen_ids.end(), id) != gen_ids.end();
}

Index ReducedModel::column_of(BusId id) const {
  auto g = std::find(gen_ids.begin(), gen_ids.end(), id);
  if (g != gen_ids.end()) return static_cast<Index>(g - gen_ids.begin());
  auto l = std::find(load_ids.begin(), load_ids.end(), id);
  if (l != load_ids.end()) return num_generators() + static_cast<Index>(l - load_ids.begin());
  throw ValidationError("unknown bus id " + std::to_string(id));
}

Matrix ReducedModel::effective_forcing_map() const {
  return -gamma.rightCols(static_cast<Index>(load_ids.size()));
}

ReducedModel kron_reduce(const LaplacianBlocks& blocks) {
  ReducedModel m;
  m.gen_ids = blocks.gen_ids;
  m.load_ids = blocks.load_ids;
  const Index ng = blocks.num_generators();
  const Index nl = blocks.num_loads();

  m.gamma = Matrix::Zero(ng, ng + nl);
  m.gamma.leftCols(ng).setIdentity();

  if (nl == 0) {
    m.l_reduced = blocks.gg;
    m.sigma_shape = Matrix::Identity(ng, ng);
    m.p_reduced = Vector::Zero(ng);
    return m;
  }

  Eigen::LLT<Matrix> llt(blocks.ll);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("load island: L^ll is singular (a load component has no generator)");
  }
  // Y = (L^ll)^-1 L^lg = W^T.
  const Matrix y = llt.solve(blocks.lg);
  m.l_reduced = blocks.gg - blocks.gl * y;
  m.l_reduced = 0.5 * (m.l_reduced + m.l_reduced.transpose()).eval();
  m.sigma_shape = Matrix::Identity(ng, ng) + y.transpose() * y;
  m.gamma.rightCols(nl) = y.transpose();
  m.p_reduced = -y.transpose() * blocks.power.tail(nl);
  return m;
}

Matrix noise_covariance(const ReducedModel& model, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  return sigma * sigma * model.sigma_shape;
}

Vector forcing_gain(const ReducedModel& model, BusId source) {
  return model.gamma.col(model.column_of(source));
}

double forcing_sign(const ReducedModel& model, BusId source) {
  model.column_of(source);
  return model.is_generator(source) ? 1.0 : -1.0;
}

std::vector<BusIds> degeneracy_groups(const ReducedModel& model, double tol) {
  const BusIds ids = model.bus_ids();
  const std::size_t n = ids.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  for (std::size_t a = 0; a < n; ++a) {
    const auto ga = model.gamma.col(static_cast<Index>(a));
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto gb = model.gamma.col(static_cast<Index>(b));
      const double same = (ga - gb).lpNorm<Eigen::Infinity>();
      const double flipped = (ga + gb).lpNorm<Eigen::Infinity>();
      if (same <= tol || flipped <= tol) parent[find(a)] = find(b);
    }
  }

  std::vector<BusIds> groups;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::ptrdiff_t>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(ids[i]);
  }
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(),
            [](const BusIds& x, const BusIds& y) { return x.front() < y.front(); });
  return groups;
}

std::vector<double> natural_modes(const ReducedModel& model, const DynParams& params) {
  params.validate();
  if (params.size() != model.num_generators()) {
    throw ValidationError("params size does not match the number of generators");
  }
  // M^-1 L^r is similar to the symmetric M^-1/2 L^r M^-1/2.
  const Vector s = params.inertia.cwiseSqrt().cwiseInverse();
  const Matrix sym = s.asDiagonal() * model.l_reduced * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const Vector& lambda = eig.eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  std::vector<double> modes;
  if (scale == 0.0) return modes;
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > 1e-9 * scale) {
      modes.push_back(std::sqrt(lambda(i)) / (2.0 * std::numbers::pi));
    }
  }
  std::sort(modes.begin(), modes.end());
  return modes;
}

namespace {

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

nlohmann::json to_json(const ReducedModel& model) {
  nlohmann::json j;
  j["gen_ids"] = model.gen_ids;
  j["load_ids"] = model.load_ids;
  j["l_reduced"] = matrix_json(model.l_reduced);
  j["sigma_shape"] = matrix_json(model.sigma_shape);
  j["gamma"] = matrix_json(model.gamma);
  j["p_reduced"] = std::vector<double>(model.p_reduced.data(),
                                       model.p_reduced.data() + model.p_reduced.size());
  return j;
}

}  // namespace oscloc
