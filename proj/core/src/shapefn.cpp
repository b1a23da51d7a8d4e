#include "htq/shapefn.hpp"

#include <array>
#include <string>

#include "htq/error.hpp"

namespace htq::lobatto {

namespace {

constexpr double kDomainSlack = 1e-12;

void check_degree(int p) {
  if (p < 1 || p > kMaxDegree) {
    throw InvalidArgument("lobatto: degree " + std::to_string(p) + " outside [1, " +
                          std::to_string(kMaxDegree) + "]");
  }
}

void check_point(double xi) {
  if (!(xi >= -kDomainSlack && xi <= 1.0 + kDomainSlack)) {
    throw InvalidArgument("lobatto: evaluation point outside [0,1]");
  }
}

void check_mode(int p, int m) {
  if (m < 0 || m > p) {
    throw InvalidArgument("lobatto: mode " + std::to_string(m) + " outside [0, " + std::to_string(p) + "]");
  }
}

// P_0..P_n and P'_0..P'_n at x in [-1,1].
struct LegendreTable {
  std::array<double, kMaxDegree + 2> value{};
  std::array<double, kMaxDegree + 2> slope{};

  LegendreTable(int n, double x) {
    value[0] = 1.0;
    slope[0] = 0.0;
    if (n >= 1) {
      value[1] = x;
      slope[1] = 1.0;
    }
    for (int k = 1; k < n; ++k) {
      value[k + 1] = ((2 * k + 1) * x * value[k] - k * value[k - 1]) / (k + 1);
      slope[k + 1] = slope[k - 1] + (2 * k + 1) * value[k];
    }
  }
};

}  // namespace

double legendre(int n, double xi) {
  if (n < 0 || n > kMaxDegree + 1) throw InvalidArgument("lobatto: Legendre index out of range");
  LegendreTable table(n, 2.0 * xi - 1.0);
  return table.value[static_cast<std::size_t>(n)];
}

void eval_all(int p, double xi, std::span<double> values, std::span<double> first,
              std::span<double> second) {
  check_degree(p);
  check_point(xi);
  const auto n = static_cast<std::size_t>(p) + 1;
  if ((!values.empty() && values.size() < n) || (!first.empty() && first.size() < n) ||
      (!second.empty() && second.size() < n)) {
    throw InvalidArgument("lobatto: output span too small");
  }
  LegendreTable table(p, 2.0 * xi - 1.0);
  if (!values.empty()) {
    values[0] = 1.0 - xi;
    values[1] = xi;
    for (std::size_t m = 2; m < n; ++m) {
      values[m] = (table.value[m] - table.value[m - 2]) / (2.0 * (2.0 * static_cast<double>(m) - 1.0));
    }
  }
  if (!first.empty()) {
    first[0] = -1.0;
    first[1] = 1.0;
    for (std::size_t m = 2; m < n; ++m) first[m] = table.value[m - 1];
  }
  if (!second.empty()) {
    second[0] = 0.0;
    second[1] = 0.0;
    // chain rule: d/dxi = 2 d/dx
    for (std::size_t m = 2; m < n; ++m) second[m] = 2.0 * table.slope[m - 1];
  }
}

double psi(int p, int m, double xi) {
  check_degree(p);
  check_mode(p, m);
  std::array<double, kMaxDegree + 1> v{};
  eval_all(m < 2 ? 1 : m, xi, std::span(v).first(static_cast<std::size_t>(m < 2 ? 2 : m + 1)), {}, {});
  return v[static_cast<std::size_t>(m)];
}

double dpsi(int p, int m, double xi) {
  check_degree(p);
  check_mode(p, m);
  std::array<double, kMaxDegree + 1> v{};
  eval_all(m < 2 ? 1 : m, xi, {}, std::span(v).first(static_cast<std::size_t>(m < 2 ? 2 : m + 1)), {});
  return v[static_cast<std::size_t>(m)];
}

double d2psi(int p, int m, double xi) {
  check_degree(p);
  check_mode(p, m);
  std::array<double, kMaxDegree + 1> v{};
  eval_all(m < 2 ? 1 : m, xi, {}, {}, std::span(v).first(static_cast<std::size_t>(m < 2 ? 2 : m + 1)));
  return v[static_cast<std::size_t>(m)];
}

}  // namespace htq::lobatto
