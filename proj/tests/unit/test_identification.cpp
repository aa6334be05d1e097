#include <doctest.h>

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "fixtures.hpp"

using namespace oscloc;
using fixtures::window;

namespace {

Matrix companion(const Matrix& l, const Vector& m, const Vector& d) {
  const Index g = l.rows();
  Matrix a = Matrix::Zero(2 * g, 2 * g);
  a.topRightCorner(g, g) = Matrix::Identity(g, g);
  a.bottomLeftCorner(g, g) = -(m.cwiseInverse().asDiagonal() * l);
  a.bottomRightCorner(g, g) = Matrix((-m.cwiseInverse().cwiseProduct(d)).asDiagonal());
  return a;
}

// Noise-free Euler recursion X_{i+1} = (I + tau A) X_i.
Trajectory recursion(const Matrix& a, const Vector& x0, double tau, Index n, const BusIds& ids) {
  const Index g = a.rows() / 2;
  Trajectory tr;
  tr.dt = tau;
  tr.gen_ids = ids;
  tr.theta.resize(n, g);
  tr.omega.resize(n, g);
  Vector x = x0;
  const Matrix step = Matrix::Identity(2 * g, 2 * g) + tau * a;
  for (Index i = 0; i < n; ++i) {
    tr.theta.row(i) = x.head(g).transpose();
    tr.omega.row(i) = x.tail(g).transpose();
    x = step * x;
  }
  return tr;
}

double max_rel_error(const DynParams& est, const DynParams& truth) {
  const Vector em = (est.inertia - truth.inertia).cwiseQuotient(truth.inertia).cwiseAbs();
  const Vector ed = (est.damping - truth.damping).cwiseQuotient(truth.damping).cwiseAbs();
  return std::max(em.maxCoeff(), ed.maxCoeff());
}

}  // namespace

TEST_CASE("moments of an exact linear recursion recover A") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd;
  for (Index g : {1, 2, 3}) {
    // A random stable-ish oscillator with a rich initial state.
    Matrix l = Matrix::Zero(g, g);
    for (Index i = 0; i < g; ++i) {
      for (Index j = 0; j < g; ++j) l(i, j) = 0.3 * nd(rng);
    }
    l = l * l.transpose() + Matrix::Identity(g, g);
    Vector m(g), d(g), x0(2 * g);
    for (Index i = 0; i < g; ++i) {
      m(i) = 1.0 + std::abs(nd(rng));
      d(i) = 0.2 + 0.1 * std::abs(nd(rng));
    }
    for (Index i = 0; i < 2 * g; ++i) x0(i) = nd(rng);
    const Matrix a = companion(l, m, d);
    BusIds ids;
    for (Index i = 0; i < g; ++i) ids.push_back(static_cast<BusId>(i + 1));
    const MomentEstimates mom = empirical_moments(recursion(a, x0, 0.02, 3000, ids));
    CHECK(mom.n_used == 2999);
    CHECK((mom.a_hat - a).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("exact moments give exact parameters") {
  const GridCase g = load_case(fixtures::case_path("ieee57"));
  const ReducedModel rm = fixtures::reduce(g);
  const DynParams truth = true_params(g, 0.0);
  const Matrix a = companion(rm.l_reduced, truth.inertia, truth.damping);
  Vector x0(14);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (Index i = 0; i < 14; ++i) x0(i) = nd(rng);
  const MomentEstimates mom = empirical_moments(recursion(a, x0, 0.02, 4000, rm.gen_ids));
  const DynParams est = extract_params(mom, rm);
  CHECK((est.inertia - truth.inertia).cwiseAbs().maxCoeff() <= 1e-10 * 4.0);
  CHECK((est.damping - truth.damping).cwiseAbs().maxCoeff() <= 1e-10 * 4.0);
  CHECK(est.sigma <= 1e-6);
}

TEST_CASE("a constant trajectory is rejected as insufficient excitation") {
  Trajectory tr;
  tr.dt = 0.02;
  tr.gen_ids = {1, 5};
  tr.theta = Matrix::Zero(100, 2);
  tr.omega = Matrix::Zero(100, 2);
  CHECK_THROWS_WITH_AS(empirical_moments(tr), doctest::Contains("insufficient excitation"),
                       NumericalError);
  tr.theta = Matrix::Zero(4, 2);
  tr.omega = Matrix::Zero(4, 2);
  CHECK_THROWS_AS(empirical_moments(tr), ValidationError);
}

TEST_CASE("toy ambient data: moment structure and parameter estimates") {
  const GridCase g = load_case(fixtures::case_path("line5"));
  const ReducedModel rm = fixtures::reduce(g);
  const DynParams truth = true_params(g, 0.2);
  const Trajectory tr = simulate_reduced(rm, truth, std::nullopt, window(600, 50, 1));
  const MomentEstimates mom = empirical_moments(tr);

  CHECK(mom.n_used == tr.n_samples() - 1);
  CHECK((mom.s0 - mom.s0.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * mom.s0.cwiseAbs().maxCoeff());
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(mom.s0).eigenvalues()(0) > 0.0);
  // Top blocks of the companion matrix are [0, I].
  CHECK(mom.a_hat.topLeftCorner(2, 2).cwiseAbs().maxCoeff() <= 0.05);
  CHECK((mom.a_hat.topRightCorner(2, 2) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 0.05);

  const DynParams est = extract_params(mom, rm);
  CHECK(est.sigma == doctest::Approx(0.2).epsilon(0.03));
  // Inertias are well determined at this length; dampings carry ~10% spread.
  for (Index i = 0; i < 2; ++i) {
    CHECK(est.inertia(i) == doctest::Approx(truth.inertia(i)).epsilon(0.05));
    CHECK(est.damping(i) == doctest::Approx(truth.damping(i)).epsilon(0.35));
  }

  const nlohmann::json doc = params_report(est, mom, rm.gen_ids);
  CHECK(doc.at("inertia").at("1").get<double>() == est.inertia(0));
  CHECK(doc.at("damping").at("5").get<double>() == est.damping(1));
  CHECK(doc.at("diagnostics").at("n_used") == mom.n_used);
  CHECK(doc.at("diagnostics").at("condition_number").get<double>() == mom.condition_number);
  const DynParams back = params_from_json(doc, rm.gen_ids);
  CHECK(back.inertia == est.inertia);
  CHECK(back.damping == est.damping);
  CHECK(back.sigma == est.sigma);
}

TEST_CASE("estimation error shrinks with observation length") {
  const GridCase g = load_case(fixtures::case_path("line5"));
  const ReducedModel rm = fixtures::reduce(g);
  const DynParams truth = true_params(g, 0.2);
  auto median_error = [&](double minutes) {
    std::vector<double> errs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Trajectory tr = simulate_reduced(rm, truth, std::nullopt, window(60 * minutes, 50, seed));
      errs.push_back(max_rel_error(extract_params(empirical_moments(tr), rm), truth));
    }
    std::nth_element(errs.begin(), errs.begin() + 5, errs.end());
    return errs[5];
  };
  const double e10 = median_error(10);
  const double e40 = median_error(40);
  CAPTURE(e10);
  CAPTURE(e40);
  CHECK(e40 < e10);
}

TEST_CASE("relabeling generators permutes the estimates") {
  const GridCase g = load_case(fixtures::case_path("line5"));
  const ReducedModel rm = fixtures::reduce(g);
  const Trajectory tr = simulate_reduced(rm, true_params(g, 0.2), std::nullopt, window(300, 50, 8));
  const DynParams est = extract_params(empirical_moments(tr), rm);

  // Swap the generator labels: old 1 becomes 9, so the canonical order flips.
  GridCase relabeled = g;
  for (auto& b : relabeled.buses) {
    if (b.id == 1) b.id = 9;
  }
  for (auto& l : relabeled.lines) {
    if (l.from == 1) l.from = 9;
    if (l.to == 1) l.to = 9;
  }
  const ReducedModel rm2 = fixtures::reduce(relabeled);
  REQUIRE(rm2.gen_ids == BusIds{5, 9});
  Trajectory tr2 = tr;
  tr2.gen_ids = {5, 9};
  tr2.theta.col(0) = tr.theta.col(1);
  tr2.theta.col(1) = tr.theta.col(0);
  tr2.omega.col(0) = tr.omega.col(1);
  tr2.omega.col(1) = tr.omega.col(0);
  const DynParams est2 = extract_params(empirical_moments(tr2), rm2);
  CHECK(est2.inertia(0) == doctest::Approx(est.inertia(1)).epsilon(1e-9));
  CHECK(est2.inertia(1) == doctest::Approx(est.inertia(0)).epsilon(1e-9));
  CHECK(est2.damping(0) == doctest::Approx(est.damping(1)).epsilon(1e-9));
  CHECK(est2.damping(1) == doctest::Approx(est.damping(0)).epsilon(1e-9));
  CHECK(est2.sigma == doctest::Approx(est.sigma).epsilon(1e-9));
}

TEST_CASE("non-physical estimates name the offending bus") {
  const GridCase g = load_case(fixtures::case_path("line5"));
  const ReducedModel rm = fixtures::reduce(g);
  const Trajectory tr = simulate_reduced(rm, true_params(g, 0.2), std::nullopt, window(60, 50, 2));
  MomentEstimates mom = empirical_moments(tr);

  MomentEstimates flipped = mom;
  flipped.a_hat.row(3) *= -1.0;  // omega row of generator 5
  try {
    extract_params(flipped, rm);
    FAIL("expected IdentificationError");
  } catch (const IdentificationError& e) {
    CHECK(e.bus_id() == 5);
    CHECK(std::string(e.what()).find("bus 5") != std::string::npos);
  }

  MomentEstimates undamped = mom;
  undamped.a_hat(2, 2) = 0.1;  // positive self-feedback on omega_1
  try {
    extract_params(undamped, rm);
    FAIL("expected IdentificationError");
  } catch (const IdentificationError& e) {
    CHECK(e.bus_id() == 1);
    CHECK(std::string(e.what()).find("damping") != std::string::npos);
  }
}

TEST_CASE("params JSON errors") {
  const BusIds ids{1, 5};
  nlohmann::json j = {{"inertia", {{"1", 2.0}, {"5", 1.5}}}, {"damping", {{"1", 0.5}, {"5", 0.8}}}, {"sigma", 0.2}};
  CHECK(params_from_json(j, ids).damping(1) == 0.8);
  nlohmann::json missing = j;
  missing["inertia"].erase("5");
  CHECK_THROWS_WITH_AS(params_from_json(missing, ids), doctest::Contains("5"), ParseError);
  nlohmann::json negative = j;
  negative["damping"]["1"] = -1.0;
  CHECK_THROWS_AS(params_from_json(negative, ids), ValidationError);
}
