#include "htq_cli/presets.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "htq/error.hpp"

namespace htq::cli {
namespace {

double parse_real(std::string_view text, std::string_view what) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument("rhs preset: bad " + std::string(what) + " '" + s + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_real(text.substr(start, comma - start), "coefficient"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

RhsPreset constant_one(OdeKind kind, double mu) {
  RhsPreset r;
  r.problem.f = [](double) { return 1.0; };
  r.has_exact = true;
  r.description = "f = 1";
  if (kind == OdeKind::parabolic) {
    if (mu == 0.0) {
      r.problem.u_exact = [](double t) { return t; };
      r.problem.du_exact = [](double) { return 1.0; };
    } else {
      r.problem.u_exact = [mu](double t) { return -std::expm1(-mu * t) / mu; };
      r.problem.du_exact = [mu](double t) { return std::exp(-mu * t); };
    }
  } else {
    if (mu == 0.0) {
      r.problem.u_exact = [](double t) { return 0.5 * t * t; };
      r.problem.du_exact = [](double t) { return t; };
    } else {
      const double w = std::sqrt(mu);
      r.problem.u_exact = [mu, w](double t) {
        const double s = std::sin(0.5 * w * t);
        return 2.0 * s * s / mu;
      };
      r.problem.du_exact = [w](double t) { return std::sin(w * t) / w; };
    }
  }
  return r;
}

RhsPreset polynomial(std::vector<double> c, OdeKind kind, double mu) {
  RhsPreset r;
  r.problem.f = [c](double t) { return horner(c, t); };
  r.description = "f = polynomial of degree " + std::to_string(c.size() - 1);
  if (mu != 0.0) return r;
  r.has_exact = true;
  // antiderivatives vanishing at 0
  std::vector<double> u1(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) u1[k + 1] = c[k] / static_cast<double>(k + 1);
  if (kind == OdeKind::parabolic) {
    r.problem.u_exact = [u1](double t) { return horner(u1, t); };
    r.problem.du_exact = [c](double t) { return horner(c, t); };
  } else {
    std::vector<double> u2(u1.size() + 1, 0.0);
    for (std::size_t k = 0; k < u1.size(); ++k) u2[k + 1] = u1[k] / static_cast<double>(k + 1);
    r.problem.u_exact = [u2](double t) { return horner(u2, t); };
    r.problem.du_exact = [u1](double t) { return horner(u1, t); };
  }
  return r;
}

RhsPreset power(double alpha, OdeKind kind, double mu) {
  const double bound = kind == OdeKind::parabolic ? 0.5 : 1.5;
  if (!(alpha > bound)) {
    throw InvalidArgument(std::string("rhs preset: tpow needs alpha > ") +
                          (kind == OdeKind::parabolic ? "1/2" : "3/2") + " for " + std::string(to_string(kind)) +
                          " problems");
  }
  RhsPreset r;
  r.has_exact = true;
  r.description = "u = t^alpha";
  r.problem.u_exact = [alpha](double t) { return t > 0.0 ? std::pow(t, alpha) : 0.0; };
  r.problem.du_exact = [alpha](double t) { return t > 0.0 ? alpha * std::pow(t, alpha - 1.0) : 0.0; };
  if (kind == OdeKind::parabolic) {
    r.problem.f = [alpha, mu](double t) {
      return t > 0.0 ? alpha * std::pow(t, alpha - 1.0) + mu * std::pow(t, alpha) : 0.0;
    };
  } else {
    r.problem.f = [alpha, mu](double t) {
      return t > 0.0 ? alpha * (alpha - 1.0) * std::pow(t, alpha - 2.0) + mu * std::pow(t, alpha) : 0.0;
    };
  }
  return r;
}

}  // namespace

RhsPreset make_preset(std::string_view text, OdeKind kind, double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("rhs preset: mu must be finite and >= 0");
  RhsPreset r;
  if (text == "one") {
    r = constant_one(kind, mu);
  } else if (text.starts_with("poly:")) {
    r = polynomial(parse_list(text.substr(5)), kind, mu);
  } else if (text.starts_with("tpow:")) {
    r = power(parse_real(text.substr(5), "exponent"), kind, mu);
  } else {
    throw InvalidArgument("rhs preset: unknown '" + std::string(text) + "' (one | poly:c0,c1,... | tpow:alpha)");
  }
  r.problem.kind = kind;
  r.problem.mu = mu;
  if (!r.has_exact) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.problem.u_exact = [nan](double) { return nan; };
    r.problem.du_exact = [nan](double) { return nan; };
  }
  return r;
}

}  // namespace htq::cli
