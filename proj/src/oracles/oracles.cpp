#include "bcsgp/oracles/oracles.hpp"
#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bcsgp::oracles {

namespace {
constexpr double pi = std::numbers::pi;
} // namespace

std::optional<double> square_well_oracle(double depth, double radius) {
  if (!(depth > 0.0 && radius > 0.0))
    throw std::invalid_argument("square_well_oracle: depth and radius must be positive");
  if (depth * radius * radius <= pi * pi / 4.0)
    return std::nullopt;
  // Ground state has kR in (pi/2, min(pi, sqrt(V0) R)); F(k) = k cot(kR) + kappa
  // runs from +kappa to -inf there.
  auto F = [&](double k) {
    const double kappa = std::sqrt(std::max(depth - k * k, 0.0));
    return k * std::cos(k * radius) / std::sin(k * radius) + kappa;
  };
  double lo = 0.5 * pi / radius;
  double hi = pi / radius;
  if (std::sqrt(depth) < hi) {
    hi = std::sqrt(depth);
    if (F(hi) > 0.0)
      return std::nullopt;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) > 0.0 ? lo : hi) = mid;
  }
  const double k = 0.5 * (lo + hi);
  return depth - k * k;
}

double square_well_state(double depth, double radius, double E0, double r) {
  const double k = std::sqrt(depth - E0);
  const double kappa = std::sqrt(E0);
  const double sR = std::sin(k * radius);
  const double inner = 0.5 * radius - std::sin(2.0 * k * radius) / (4.0 * k);
  const double outer = sR * sR / (2.0 * kappa);
  const double A = 1.0 / std::sqrt(4.0 * pi * (inner + outer));
  const double u = r < radius ? A * std::sin(k * r)
                              : A * sR * std::exp(-kappa * (r - radius));
  if (r == 0.0)
    return A * k;
  return u / r;
}

HarmonicOracle harmonic_oracle(double kinetic_factor, double coefficient) {
  if (!(kinetic_factor > 0.0 && coefficient > 0.0))
    throw std::invalid_argument("harmonic_oracle: a and b must be positive");
  return {3.0 * std::sqrt(kinetic_factor * coefficient),
          0.5 * std::sqrt(coefficient / kinetic_factor)};
}

GaussianCase GaussianCase::normalized() const {
  GaussianCase c = *this;
  if (c.A == 0.0)
    c.A = std::pow(2.0 * c.a / pi, 0.75);
  if (c.B == 0.0)
    c.B = std::pow(2.0 * c.b / pi, 0.75);
  return c;
}

double GaussianOracle::l2_norm_sq(double A, double a) {
  return A * A * std::pow(pi / (2.0 * a), 1.5);
}

double GaussianOracle::l4_norm4(double A, double a) {
  return std::pow(A, 4) * std::pow(pi / (4.0 * a), 1.5);
}

double GaussianOracle::second_moment(double A, double a) {
  return A * A * (3.0 / (4.0 * a)) * std::pow(pi / (2.0 * a), 1.5);
}

double GaussianOracle::grad_norm_sq(double A, double a) {
  return 4.0 * a * a * second_moment(A, a);
}

double GaussianOracle::trap_expectation(const GaussianCase &c) {
  return c.w * second_moment(c.A, c.a);
}

double GaussianOracle::hs_norm_sq(const GaussianCase &c) {
  return l2_norm_sq(c.A, c.a) * l2_norm_sq(c.B, c.b) / c.h;
}

MehlerSpectrum mehler_spectrum(double c1, double c2) {
  const double gamma = std::sqrt(c1 * c1 - c2 * c2);
  return {std::sqrt(pi / (c1 + gamma)), c2 / (c1 + gamma)};
}

namespace {
MehlerSpectrum pair_kernel_spectrum(const GaussianCase &c) {
  const double c1 = c.a / 4.0 + c.b / (c.h * c.h);
  const double c2 = c.b / (c.h * c.h) - c.a / 4.0;
  return mehler_spectrum(c1, c2);
}
} // namespace

double GaussianOracle::top_singular(const GaussianCase &c) {
  const auto m = pair_kernel_spectrum(c);
  return std::abs(c.A * c.B) / (c.h * c.h) * std::pow(m.lambda0, 3);
}

double GaussianOracle::schatten(const GaussianCase &c, int n) {
  const auto m = pair_kernel_spectrum(c);
  const double pre = std::pow(std::abs(c.A * c.B) / (c.h * c.h), n);
  const double per_dim = std::pow(m.lambda0, n) / (1.0 - std::pow(std::abs(m.rho), n));
  return pre * std::pow(per_dim, 3);
}

double GaussianOracle::w_term(const GaussianCase &c) {
  return c.h * c.w * second_moment(c.A, c.a) +
         std::pow(c.h, 3) / 4.0 * c.w * l2_norm_sq(c.A, c.a) *
             second_moment(c.B, c.b);
}

double GaussianOracle::g_bcs(double B, double b, double E0) {
  // alpha0^(p) = B (2b)^{-3/2} exp(-p^2/(4b)).
  const double amp4 = std::pow(B, 4) * std::pow(2.0 * b, -6.0);
  return std::pow(2.0 * pi, 3) * amp4 * std::pow(pi * b, 1.5) * (E0 + 1.5 * b);
}

namespace {
struct QuarticForm {
  Eigen::Matrix4d M;
  Eigen::Vector4d sigma, tau;
  std::array<Eigen::Vector4d, 4> positions; // x_k - X in units of the variables
  Eigen::Vector4d lap_point;                // X - h s
};

QuarticForm quartic_form(const GaussianCase &c) {
  QuarticForm q;
  q.sigma << 0.0, 0.25, 0.5, 0.25;
  q.tau << 0.0, -0.25, 0.0, 0.25;
  Eigen::Vector4d eX(1.0, 0.0, 0.0, 0.0);
  Eigen::Matrix4d Mb = Eigen::Matrix4d::Zero();
  Eigen::Vector4d ones(0.0, 1.0, 1.0, 1.0);
  for (int i = 1; i < 4; ++i)
    Mb(i, i) = 1.0;
  Mb += ones * ones.transpose();
  q.M = 4.0 * c.a * eX * eX.transpose() +
        2.0 * c.a * c.h * c.h *
            (q.sigma * q.sigma.transpose() + q.tau * q.tau.transpose()) +
        c.b * Mb;
  Eigen::Vector4d x1 = eX - c.h * Eigen::Vector4d(0.0, 0.75, 0.5, 0.25);
  q.positions[0] = x1;
  for (int k = 1; k < 4; ++k) {
    Eigen::Vector4d step = Eigen::Vector4d::Zero();
    step(k) = c.h;
    q.positions[k] = q.positions[k - 1] + step;
  }
  q.lap_point = eX - c.h * q.sigma;
  return q;
}

// Assemble the traces from the per-component normalization I0 and the
// per-component covariance Sigma = E[z z^T].
QuarticTraces assemble(const GaussianCase &c, const QuarticForm &q, double I0,
                       const Eigen::Matrix4d &Sigma) {
  const double G = std::pow(I0, 3);
  const double pre = c.h * std::pow(c.A * c.B, 4) * G;
  auto e2 = [&](const Eigen::Vector4d &v) { return 3.0 * v.dot(Sigma * v); };
  QuarticTraces t;
  t.plain = pre;
  const double main = pre * (6.0 * c.b + c.E0 -
                             4.0 * c.b * c.b * e2(Eigen::Vector4d(0, 1, 0, 0)));
  const double lap =
      pre * (-0.25 * c.h * c.h) * (4.0 * c.a * c.a * e2(q.lap_point) - 6.0 * c.a);
  t.kinetic = main + lap;
  double wsum = 0.0;
  for (const auto &v : q.positions)
    wsum += e2(v);
  t.trap = pre * c.w * 0.25 * wsum;
  t.hbar = t.kinetic + c.h * c.h * t.trap - c.D * c.h * c.h * t.plain;
  return t;
}
} // namespace

QuarticTraces GaussianOracle::quartic(const GaussianCase &c) {
  const auto q = quartic_form(c);
  const double I0 = pi * pi / std::sqrt(q.M.determinant());
  const Eigen::Matrix4d Sigma = 0.5 * q.M.inverse();
  return assemble(c, q, I0, Sigma);
}

QuarticTraces gaussian_quartic_by_quadrature(const GaussianCase &c,
                                             int points_per_dim) {
  const auto q = quartic_form(c);
  // Box half-widths from the marginal variances (8 standard deviations).
  const Eigen::Matrix4d cov = 0.5 * q.M.inverse();
  std::array<double, 4> L, dz;
  for (int i = 0; i < 4; ++i) {
    L[i] = 8.0 * std::sqrt(cov(i, i));
    dz[i] = 2.0 * L[i] / (points_per_dim - 1);
  }
  double I0 = 0.0;
  Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
  Eigen::Vector4d z;
  for (int i0 = 0; i0 < points_per_dim; ++i0) {
    z(0) = -L[0] + i0 * dz[0];
    for (int i1 = 0; i1 < points_per_dim; ++i1) {
      z(1) = -L[1] + i1 * dz[1];
      for (int i2 = 0; i2 < points_per_dim; ++i2) {
        z(2) = -L[2] + i2 * dz[2];
        for (int i3 = 0; i3 < points_per_dim; ++i3) {
          z(3) = -L[3] + i3 * dz[3];
          const double e = std::exp(-z.dot(q.M * z));
          I0 += e;
          S += e * z * z.transpose();
        }
      }
    }
  }
  const double vol = dz[0] * dz[1] * dz[2] * dz[3];
  I0 *= vol;
  S *= vol;
  return assemble(c, q, I0, S / I0);
}

double GaussianOracle::gp_energy(const GaussianCase &c, double g) {
  return 0.25 * grad_norm_sq(c.A, c.a) + trap_expectation(c) -
         c.D * l2_norm_sq(c.A, c.a) + g * l4_norm4(c.A, c.a);
}

std::vector<OracleCase> oracle_cases() {
  std::vector<OracleCase> out;
  const auto ho = harmonic_oracle(0.25, 1.0);
  out.push_back({"harmonic_trap_energy", "E = 3 sqrt(a b)", "closed form",
                 ho.energy, 1e-6, {{"kinetic_factor", 0.25}, {"coefficient", 1.0}}});
  out.push_back({"harmonic_trap_width", "gamma = sqrt(b/a)/2", "closed form",
                 ho.gamma, 1e-12, {{"kinetic_factor", 0.25}, {"coefficient", 1.0}}});
  out.push_back({"square_well_E0", "k cot(kR) = -kappa, k^2 = V0 - E0",
                 "bisection to 1e-12", *square_well_oracle(4.0, 1.0), 1e-6,
                 {{"depth", 4.0}, {"radius", 1.0}}});
  out.push_back({"square_well_threshold", "V0 R^2 = pi^2/4", "closed form",
                 pi * pi / 4.0, 1e-12, {{"radius", 1.0}}});
  out.push_back({"g_bcs_gaussian", "8 (pi/2)^{3/2} (E0 + 3/4)",
                 "Gaussian integrals", GaussianOracle::g_bcs(std::pow(pi, -0.75), 0.5, 0.5), 1e-3,
                 {{"gamma", 0.5}, {"E0", 0.5}}});
  out.push_back({"psi_W_L4_4", "pi^{-3/2}", "Gaussian integral",
                 GaussianOracle::l4_norm4(std::pow(2.0 / pi, 0.75), 1.0), 1e-10,
                 {{"gamma", 1.0}}});

  GaussianCase gc;
  gc.h = 0.5;
  gc = gc.normalized();
  out.push_back({"gaussian_hs_norm_sq", "h^-1 ||psi||^2 ||alpha0||^2",
                 "Gaussian integral", GaussianOracle::hs_norm_sq(gc), 1e-8,
                 {{"a", gc.a}, {"b", gc.b}, {"h", gc.h}}});
  out.push_back({"gaussian_top_singular", "h^-2 A B lambda0^3 (Mehler)",
                 "Mehler kernel spectrum", GaussianOracle::top_singular(gc), 1e-3,
                 {{"a", gc.a}, {"b", gc.b}, {"h", gc.h}}});
  out.push_back({"gaussian_schatten4", "(h^-2 A B)^4 (lambda0^4/(1-rho^4))^3",
                 "Mehler kernel spectrum", GaussianOracle::schatten(gc, 4), 1e-3,
                 {{"a", gc.a}, {"b", gc.b}, {"h", gc.h}}});
  out.push_back({"gaussian_schatten6", "(h^-2 A B)^6 (lambda0^6/(1-rho^6))^3",
                 "Mehler kernel spectrum", GaussianOracle::schatten(gc, 6), 1e-3,
                 {{"a", gc.a}, {"b", gc.b}, {"h", gc.h}}});

  GaussianCase wc;
  wc.h = 0.3;
  wc = wc.normalized();
  out.push_back({"gaussian_w_term", "h int W|psi|^2 + h^3/4 ||psi||^2 || |.| alpha0||^2",
                 "parity cancellation of the cross term", GaussianOracle::w_term(wc), 1e-6,
                 {{"a", wc.a}, {"b", wc.b}, {"h", wc.h}, {"w", wc.w}}});

  GaussianCase qc;
  qc.h = 0.4;
  qc.D = 1.6;
  qc = qc.normalized();
  const auto t = GaussianOracle::quartic(qc);
  const std::vector<std::pair<std::string, double>> qin = {
      {"a", qc.a}, {"b", qc.b}, {"h", qc.h}, {"E0", qc.E0}, {"w", qc.w}, {"D", qc.D}};
  out.push_back({"gaussian_quartic_kinetic", "tr (-h^2 Delta + E0)(alpha alpha*)^2",
                 "4x4 Gaussian moment calculus", t.kinetic, 1e-2, qin});
  out.push_back({"gaussian_quartic_trap", "tr W (alpha alpha*)^2",
                 "4x4 Gaussian moment calculus", t.trap, 1e-2, qin});
  out.push_back({"gaussian_quartic_plain", "tr (alpha alpha*)^2",
                 "4x4 Gaussian moment calculus", t.plain, 1e-2, qin});
  out.push_back({"gaussian_quartic_hbar", "tr hbar (alpha alpha*)^2",
                 "4x4 Gaussian moment calculus", t.hbar, 1e-2, qin});
  return out;
}

nlohmann::json oracle_table_json() {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto &c : oracle_cases()) {
    nlohmann::json in = nlohmann::json::object();
    for (const auto &[k, v] : c.inputs)
      in[k] = v;
    cases.push_back({{"name", c.name},
                     {"formula", c.formula},
                     {"derivation", c.derivation},
                     {"expected", c.expected},
                     {"tolerance", c.tolerance},
                     {"inputs", in}});
  }
  return {{"version", k_oracle_table_version}, {"cases", cases}};
}

} // namespace bcsgp::oracles
