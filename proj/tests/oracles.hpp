#pragma once

// Reference computations for the tests. Nothing here is used by the library;
// each oracle recomputes a quantity by a route that shares no formula with the
// code under test (finite differences of lower-order data, brute-force sums).

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "warpsol/ambient.hpp"
#include "warpsol/catalogue.hpp"
#include "warpsol/hypersurface.hpp"
#include "warpsol/linalg.hpp"

namespace oracle {

using warpsol::Mat;
using warpsol::Vec;

/// Riemann tensor of the ambient chart metric from central differences of the
/// Christoffel symbols; returns R(X,Y)Z with R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb.
inline Vec curvature_from_christoffels(const warpsol::WarpedProduct& w, const warpsol::AmbientPoint& p, const Vec& x,
                                       const Vec& y, const Vec& z, double step = 1e-4) {
  const std::size_t dim = w.dim();
  const auto gamma = warpsol::ambient_christoffels(w, p);
  std::vector<warpsol::Christoffels> dgamma;
  for (std::size_t c = 0; c < dim; ++c) {
    warpsol::AmbientPoint plus = p, minus = p;
    if (c == 0) {
      plus.t += step;
      minus.t -= step;
    } else {
      plus.x[c - 1] += step;
      minus.x[c - 1] -= step;
    }
    const auto gp = warpsol::ambient_christoffels(w, plus), gm = warpsol::ambient_christoffels(w, minus);
    warpsol::Christoffels d(dim);
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b)
        for (std::size_t e = 0; e < dim; ++e) d(a, b, e) = (gp(a, b, e) - gm(a, b, e)) / (2.0 * step);
    dgamma.push_back(d);
  }
  Vec out = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < dim; ++b)
      for (std::size_t c = 0; c < dim; ++c)
        for (std::size_t d = 0; d < dim; ++d) {
          double r = dgamma[c](a, d, b) - dgamma[d](a, c, b);
          for (std::size_t e = 0; e < dim; ++e) r += gamma(a, c, e) * gamma(e, d, b) - gamma(a, d, e) * gamma(e, c, b);
          s += r * z[static_cast<Eigen::Index>(b)] * x[static_cast<Eigen::Index>(c)] * y[static_cast<Eigen::Index>(d)];
        }
    out[static_cast<Eigen::Index>(a)] = s;
  }
  return out;
}

/// Scalar curvature of the induced metric from finite differences of g alone
/// (five-point second differences, four-point mixed differences).
inline double scalar_curvature_fd(const warpsol::Immersion& imm, const std::vector<double>& p, double step = 1e-3) {
  const auto& box = imm.chart();
  if (!box.is_interior(p, 3.0 * step)) throw warpsol::BoundaryTooClose("oracle stencil leaves the chart box");
  const std::size_t n = box.dim();
  auto metric = [&](std::vector<double> q) { return warpsol::shape_data(imm, q).g; };
  auto shifted = [&](std::size_t i, double di, std::size_t j, double dj) {
    std::vector<double> q = p;
    q[i] += di;
    q[j] += dj;
    return metric(q);
  };
  const Mat g = metric(p);
  const Mat gi = g.inverse();
  std::vector<Mat> dg(n);
  std::vector<std::vector<Mat>> ddg(n, std::vector<Mat>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Mat p1 = shifted(i, step, i, 0), m1 = shifted(i, -step, i, 0);
    const Mat p2 = shifted(i, 2 * step, i, 0), m2 = shifted(i, -2 * step, i, 0);
    dg[i] = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * step);
    ddg[i][i] = (-p2 + 16.0 * p1 - 30.0 * g + 16.0 * m1 - m2) / (12.0 * step * step);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      ddg[i][j] = (shifted(i, step, j, step) - shifted(i, step, j, -step) - shifted(i, -step, j, step) +
                   shifted(i, -step, j, -step)) /
                  (4.0 * step * step);
      ddg[j][i] = ddg[i][j];
    }
  // Gamma_{e,db} and its derivatives
  auto lower = [&](std::size_t e, std::size_t d, std::size_t b) {
    return 0.5 * (dg[d](e, b) + dg[b](e, d) - dg[e](d, b));
  };
  auto dlower = [&](std::size_t c, std::size_t e, std::size_t d, std::size_t b) {
    return 0.5 * (ddg[c][d](e, b) + ddg[c][b](e, d) - ddg[c][e](d, b));
  };
  auto Gamma = [&](std::size_t a, std::size_t d, std::size_t b) {
    double s = 0.0;
    for (std::size_t e = 0; e < n; ++e) s += gi(a, e) * lower(e, d, b);
    return s;
  };
  auto dGamma = [&](std::size_t c, std::size_t a, std::size_t d, std::size_t b) {
    const Mat dgi = -gi * dg[c] * gi;
    double s = 0.0;
    for (std::size_t e = 0; e < n; ++e) s += dgi(a, e) * lower(e, d, b) + gi(a, e) * dlower(c, e, d, b);
    return s;
  };
  // Ric_bd = R^a_bad
  double scal = 0.0;
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t d = 0; d < n; ++d) {
      double ric = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        double r = dGamma(a, a, d, b) - dGamma(d, a, a, b);
        for (std::size_t e = 0; e < n; ++e) r += Gamma(a, a, e) * Gamma(e, d, b) - Gamma(a, d, e) * Gamma(e, a, b);
        ric += r;
      }
      scal += gi(b, d) * ric;
    }
  return scal;
}

/// Random smooth expression in the given variables, safe to evaluate everywhere
/// (no division, log or sqrt of non-positive values).
inline std::string random_expression(std::mt19937& rng, const std::vector<std::string>& vars, int depth = 3) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_int_distribution<std::size_t> var(0, vars.size() - 1);
  auto leaf = [&] {
    if (pick(rng) < 3) return "(" + warpsol::detail::format_number(std::round(coeff(rng) * 100) / 100) + ")";
    return vars[var(rng)];
  };
  if (depth == 0) return leaf();
  const std::string a = random_expression(rng, vars, depth - 1), b = random_expression(rng, vars, depth - 1);
  switch (pick(rng)) {
    case 0: return "(" + a + " + " + b + ")";
    case 1: return "(" + a + " - " + b + ")";
    case 2: return "(" + a + " * " + b + ")";
    case 3: return "sin(" + a + ")";
    case 4: return "cos(" + a + ")";
    case 5: return "exp(" + a + "/4)";
    case 6: return "(" + a + ")^2";
    case 7: return "(" + a + ") / (2 + sin(" + b + "))";
    case 8: return "sqrt(1 + (" + a + ")^2)";
    default: return "log(2 + cos(" + a + "))";
  }
}

/// The text-defined catalogue immersion `base` with every component jittered by
/// a small smooth bump centred somewhere inside the chart box.
inline warpsol::Immersion perturbed(const warpsol::Immersion& base, std::mt19937& rng, double amplitude = 0.02) {
  const auto& box = base.chart();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<warpsol::Expression> comps;
  for (const auto& text : base.component_text()) {
    std::string bump = "exp(-(";
    for (std::size_t i = 0; i < box.dim(); ++i) {
      const double c = box.lo[i] + (box.hi[i] - box.lo[i]) * (0.25 + 0.5 * unit(rng));
      const double w = 0.3 * (box.hi[i] - box.lo[i]);
      bump += (i ? " + " : "") + ("((" + box.names[i] + ") - (" + warpsol::detail::format_number(c) + "))^2/" +
                                  warpsol::detail::format_number(w * w));
    }
    bump += "))";
    const double a = amplitude * (2.0 * unit(rng) - 1.0);
    const double k = 1.0 + 2.0 * unit(rng);
    const std::string jitter = warpsol::detail::format_number(a) + "*" + bump + "*cos(" +
                               warpsol::detail::format_number(k) + "*" + box.names[0] + ")";
    comps.push_back(warpsol::Expression::parse(text + " + " + jitter, box.names));
  }
  return warpsol::Immersion(base.ambient(), box, std::move(comps));
}

}  // namespace oracle
