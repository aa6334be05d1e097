#pragma once

// Reference computations written directly from the defining formulas. They are
// deliberately naive and share no code path with the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "oscloc/oscloc.hpp"

namespace oracles {

using oscloc::ComplexVector;
using oscloc::Index;
using oscloc::Matrix;
using oscloc::Vector;
using cd = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Equivalent susceptance of lines in series: 1 / sum(1 / b).
inline double series_coupling(const std::vector<double>& b) {
  double r = 0.0;
  for (double x : b) r += 1.0 / x;
  return 1.0 / r;
}

// Eliminates the trailing `count` nodes one at a time (Gaussian elimination on
// a single pivot), the textbook form of Kron reduction.
inline Matrix sequential_kron(Matrix l, Index count) {
  for (Index step = 0; step < count; ++step) {
    const Index p = l.rows() - 1;
    Matrix next(p, p);
    for (Index i = 0; i < p; ++i) {
      for (Index j = 0; j < p; ++j) next(i, j) = l(i, j) - l(i, p) * l(p, j) / l(p, p);
    }
    l = next;
  }
  return l;
}

// X~(k) = n^{-1/2} sum_i exp(+2 pi j k i / n) x_i, column-wise, by direct summation.
inline ComplexVector direct_dft(const Matrix& series, Index k) {
  const Index n = series.rows();
  ComplexVector out = ComplexVector::Zero(series.cols());
  for (Index i = 0; i < n; ++i) {
    const double a = kTwoPi * static_cast<double>(k) * static_cast<double>(i) / static_cast<double>(n);
    const cd w(std::cos(a), std::sin(a));
    for (Index c = 0; c < series.cols(); ++c) out(c) += w * series(i, c);
  }
  return out / std::sqrt(static_cast<double>(n));
}

// Steady-state omega amplitude per generator of
//   M theta'' + D theta' + L theta = u cos(2 pi f t).
inline Vector frequency_response(const Matrix& l, const Vector& m, const Vector& d, const Vector& u,
                                 double f) {
  const double w = kTwoPi * f;
  const Index g = l.rows();
  Eigen::MatrixXcd z(g, g);
  for (Index i = 0; i < g; ++i) {
    for (Index j = 0; j < g; ++j) {
      cd v = l(i, j);
      if (i == j) v += -w * w * m(i) + cd(0.0, w * d(i));
      z(i, j) = v;
    }
  }
  const Eigen::VectorXcd theta = z.fullPivLu().solve(u.cast<cd>());
  return theta.cwiseAbs() * w;
}

// Time-domain forced-oscillation likelihood
//   L(gamma, phi) = -(1/n) sum_{i<n} v_i^T Sigma^-1 v_i,
//   v_i = [Delta_i - A X_i]_omega - M^-1 s gamma Gamma_l cos(2 pi (f t_i + phi)),
// with n = N - 1 aligned samples, f = k / (n dt) and t_i = t0 + i dt.
class TimeDomainLikelihood {
 public:
  TimeDomainLikelihood(const oscloc::Trajectory& traj, const oscloc::ReducedModel& model,
                       const oscloc::DynParams& p, Index column, Index k)
      : n_(traj.n_samples() - 1), k_(k), dt_(traj.dt), t0_(traj.t0) {
    const Index g = traj.num_generators();
    const Matrix sigma = p.sigma * p.sigma * model.sigma_shape;
    sigma_inv_ = sigma.inverse();
    Matrix minv = Matrix::Zero(g, g);
    for (Index i = 0; i < g; ++i) minv(i, i) = 1.0 / p.inertia(i);
    const double sign = column < g ? 1.0 : -1.0;
    dir_ = sign * minv * model.gamma.col(column);
    resid_.resize(n_, g);
    for (Index i = 0; i < n_; ++i) {
      for (Index a = 0; a < g; ++a) {
        double r = (traj.omega(i + 1, a) - traj.omega(i, a)) / dt_;
        double drift = p.damping(a) * traj.omega(i, a);
        for (Index b = 0; b < g; ++b) drift += model.l_reduced(a, b) * traj.theta(i, b);
        resid_(i, a) = r + drift / p.inertia(a);
      }
    }
  }

  double operator()(double gamma, double phi) const {
    const double f = static_cast<double>(k_) / (static_cast<double>(n_) * dt_);
    double acc = 0.0;
    for (Index i = 0; i < n_; ++i) {
      const double t = t0_ + static_cast<double>(i) * dt_;
      const Vector v = resid_.row(i).transpose() - gamma * std::cos(kTwoPi * (f * t + phi)) * dir_;
      acc += v.dot(sigma_inv_ * v);
    }
    return -acc / static_cast<double>(n_);
  }

  // L(gamma, phi) - L(0, .), the same sample sum with the gamma-free term
  // cancelled analytically so small gains are not lost to rounding.
  double gain(double gamma, double phi) const {
    const double f = static_cast<double>(k_) / (static_cast<double>(n_) * dt_);
    const Vector proj = sigma_inv_ * dir_;
    const double q = dir_.dot(proj);
    double acc = 0.0;
    for (Index i = 0; i < n_; ++i) {
      const double t = t0_ + static_cast<double>(i) * dt_;
      const double c = std::cos(kTwoPi * (f * t + phi));
      acc += 2.0 * gamma * c * resid_.row(i).dot(proj) - gamma * gamma * c * c * q;
    }
    return acc / static_cast<double>(n_);
  }

  // Rigorous bound on the maximizing amplitude (Cauchy-Schwarz plus Parseval).
  double gamma_cap() const {
    double energy = 0.0;
    for (Index i = 0; i < n_; ++i) energy += resid_.row(i) * sigma_inv_ * resid_.row(i).transpose();
    const double q = dir_.dot(sigma_inv_ * dir_);
    return 2.0 * std::sqrt(energy / (static_cast<double>(n_) * q)) * 1.05;
  }

 private:
  Index n_, k_;
  double dt_, t0_;
  Matrix sigma_inv_;
  Vector dir_;
  Matrix resid_;
};

struct GridOptimum {
  double loglik = 0.0;
  double gamma = 0.0;
  double phi = 0.0;
};

template <typename F>
double golden_max(F&& f, double lo, double hi, int iters = 90) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Exhaustive grid over (gamma, phi) followed by alternating golden-section
// refinement around the best grid cell.
inline GridOptimum maximize(const TimeDomainLikelihood& lik, int gamma_steps = 60,
                            int phi_steps = 120) {
  const double cap = lik.gamma_cap();
  GridOptimum best{-1e300, 0.0, 0.0};
  for (int a = 0; a <= gamma_steps; ++a) {
    const double g = cap * a / gamma_steps;
    for (int b = 0; b < phi_steps; ++b) {
      const double p = static_cast<double>(b) / phi_steps;
      const double v = lik.gain(g, p);
      if (v > best.loglik) best = {v, g, p};
    }
  }
  double dg = cap / gamma_steps, dp = 1.0 / phi_steps;
  for (int round = 0; round < 40; ++round) {
    best.gamma = golden_max([&](double g) { return lik.gain(g, best.phi); },
                            std::max(0.0, best.gamma - dg), best.gamma + dg);
    best.phi = golden_max([&](double p) { return lik.gain(best.gamma, p); }, best.phi - dp, best.phi + dp);
    dg *= 0.5;
    dp *= 0.5;
  }
  best.phi -= std::floor(best.phi);
  best.loglik = lik(best.gamma, best.phi);
  return best;
}

// Distance between two phases in cycles, accounting for wrap-around.
inline double phase_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 1.0);
  return std::min(d, 1.0 - d);
}

}  // namespace oracles
