#include "htq/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "htq/error.hpp"

namespace htq {

namespace {

void check_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("mesh: horizon T must be positive and finite");
  }
}

double parse_double(std::string_view s, std::string_view what) {
  double value = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw InvalidArgument("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  }
  return value;
}

int parse_int(std::string_view s, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

TemporalMesh::TemporalMesh(std::vector<double> breakpoints) : points_(std::move(breakpoints)) {
  if (points_.size() < 2) throw InvalidArgument("mesh: need at least two breakpoints");
  if (points_.front() != 0.0) throw InvalidArgument("mesh: first breakpoint must be 0");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1]) || !std::isfinite(points_[i])) {
      throw InvalidArgument("mesh: breakpoints must be finite and strictly increasing");
    }
  }
}

TemporalMesh TemporalMesh::uniform(int num_elements, double horizon) {
  if (num_elements < 1) throw InvalidArgument("mesh: uniform mesh needs N >= 1");
  check_horizon(horizon);
  std::vector<double> t(static_cast<std::size_t>(num_elements) + 1);
  for (int l = 0; l <= num_elements; ++l) t[static_cast<std::size_t>(l)] = horizon * l / num_elements;
  t.back() = horizon;
  return TemporalMesh(std::move(t));
}

TemporalMesh TemporalMesh::geometric(int num_elements, double horizon, double sigma) {
  if (num_elements < 2) throw InvalidArgument("mesh: geometric mesh needs N >= 2");
  if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("mesh: grading sigma must lie in (0,1)");
  check_horizon(horizon);
  std::vector<double> t(static_cast<std::size_t>(num_elements) + 1, 0.0);
  for (int l = 1; l <= num_elements; ++l) {
    t[static_cast<std::size_t>(l)] = horizon * std::pow(sigma, num_elements - l);
  }
  return TemporalMesh(std::move(t));
}

TemporalMesh TemporalMesh::dyadic(int num_elements, double horizon) {
  if (num_elements < 1) throw InvalidArgument("mesh: dyadic mesh needs N >= 1");
  check_horizon(horizon);
  std::vector<double> t(static_cast<std::size_t>(num_elements) + 1, 0.0);
  for (int l = 1; l <= num_elements; ++l) {
    t[static_cast<std::size_t>(l)] = std::ldexp(horizon, l - num_elements);
  }
  return TemporalMesh(std::move(t));
}

double TemporalMesh::max_size() const {
  double h = 0.0;
  for (int e = 0; e < num_elements(); ++e) h = std::max(h, size(e));
  return h;
}

TemporalMesh TemporalMesh::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("mesh: scale factor must be positive");
  std::vector<double> t(points_);
  for (auto& x : t) x *= factor;
  return TemporalMesh(std::move(t));
}

DegreeVector::DegreeVector(std::vector<int> degrees) : p_(std::move(degrees)) {
  if (p_.empty()) throw InvalidArgument("degrees: empty degree vector");
  for (int p : p_) {
    if (p < 1) throw InvalidArgument("degrees: every polynomial degree must be >= 1");
  }
}

DegreeVector DegreeVector::uniform(int num_elements, int p) {
  if (num_elements < 1) throw InvalidArgument("degrees: need at least one element");
  return DegreeVector(std::vector<int>(static_cast<std::size_t>(num_elements), p));
}

DegreeVector DegreeVector::linear_ramp(int num_elements) {
  if (num_elements < 1) throw InvalidArgument("degrees: need at least one element");
  std::vector<int> p(static_cast<std::size_t>(num_elements));
  std::iota(p.begin(), p.end(), 1);
  return DegreeVector(std::move(p));
}

int DegreeVector::max() const { return *std::max_element(p_.begin(), p_.end()); }

int DegreeVector::sum() const { return std::accumulate(p_.begin(), p_.end(), 0); }

DofMap::DofMap(const TemporalMesh& mesh, const DegreeVector& degrees)
    : degrees_(degrees.values().begin(), degrees.values().end()) {
  const int n = mesh.num_elements();
  if (degrees.size() != n) {
    throw InvalidArgument("dofmap: degree vector length " + std::to_string(degrees.size()) +
                          " does not match element count " + std::to_string(n));
  }
  offsets_.resize(static_cast<std::size_t>(n));
  int next = n + 1;
  for (int e = 0; e < n; ++e) {
    offsets_[static_cast<std::size_t>(e)] = next;
    next += degrees[e] - 1;
  }
  num_dofs_ = next;
}

int DofMap::global(int m, int e) const {
  if (e < 0 || e >= num_elements()) throw InvalidArgument("dofmap: element index out of range");
  if (m < 0 || m > degree(e)) throw InvalidArgument("dofmap: local mode index out of range");
  if (m == 0) return e;
  if (m == 1) return e + 1;
  return offsets_[static_cast<std::size_t>(e)] + (m - 2);
}

TemporalMesh MeshSpec::build() const {
  switch (kind) {
    case Kind::uniform:
      return TemporalMesh::uniform(num_elements, horizon);
    case Kind::geometric:
      if (!sigma) throw InvalidArgument("mesh: geometric mesh requires sigma");
      return TemporalMesh::geometric(num_elements, horizon, *sigma);
    case Kind::dyadic:
      return TemporalMesh::dyadic(num_elements, horizon);
    case Kind::explicit_points:
      return TemporalMesh(breakpoints);
  }
  throw InvalidArgument("mesh: unknown kind");
}

std::string MeshSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << htq::to_string(kind);
  switch (kind) {
    case Kind::uniform:
    case Kind::dyadic:
      os << ':' << num_elements;
      break;
    case Kind::geometric:
      os << ':' << num_elements << ':' << sigma.value_or(0.0);
      break;
    case Kind::explicit_points:
      os << ':';
      for (std::size_t i = 0; i < breakpoints.size(); ++i) os << (i ? "," : "") << breakpoints[i];
      break;
  }
  return os.str();
}

std::string_view to_string(MeshSpec::Kind kind) {
  switch (kind) {
    case MeshSpec::Kind::uniform: return "uniform";
    case MeshSpec::Kind::geometric: return "geometric";
    case MeshSpec::Kind::dyadic: return "dyadic";
    case MeshSpec::Kind::explicit_points: return "explicit";
  }
  return "unknown";
}

MeshSpec::Kind mesh_kind_from_string(std::string_view text) {
  if (text == "uniform") return MeshSpec::Kind::uniform;
  if (text == "geometric") return MeshSpec::Kind::geometric;
  if (text == "dyadic") return MeshSpec::Kind::dyadic;
  if (text == "explicit") return MeshSpec::Kind::explicit_points;
  throw InvalidArgument("unknown mesh kind '" + std::string(text) + "'");
}

MeshSpec parse_mesh_spec(std::string_view text, double horizon) {
  auto parts = split(text, ':');
  MeshSpec spec;
  spec.kind = mesh_kind_from_string(parts[0]);
  spec.horizon = horizon;
  switch (spec.kind) {
    case MeshSpec::Kind::uniform:
    case MeshSpec::Kind::dyadic:
      if (parts.size() != 2) throw InvalidArgument("mesh spec '" + std::string(text) + "' expects kind:N");
      spec.num_elements = parse_int(parts[1], "element count");
      break;
    case MeshSpec::Kind::geometric:
      if (parts.size() != 3) {
        throw InvalidArgument("mesh spec '" + std::string(text) + "' expects geometric:N:sigma");
      }
      spec.num_elements = parse_int(parts[1], "element count");
      spec.sigma = parse_double(parts[2], "sigma");
      break;
    case MeshSpec::Kind::explicit_points: {
      if (parts.size() != 2) throw InvalidArgument("mesh spec expects explicit:t0,t1,...");
      for (auto tok : split(parts[1], ',')) spec.breakpoints.push_back(parse_double(tok, "breakpoint"));
      if (spec.breakpoints.size() < 2) throw InvalidArgument("explicit mesh needs two breakpoints");
      spec.num_elements = static_cast<int>(spec.breakpoints.size()) - 1;
      spec.horizon = spec.breakpoints.back();
      break;
    }
  }
  return spec;
}

DegreeVector parse_degree_spec(std::string_view text, int num_elements) {
  if (text.starts_with("uniform:")) {
    return DegreeVector::uniform(num_elements, parse_int(text.substr(8), "degree"));
  }
  if (text == "ramp") return DegreeVector::linear_ramp(num_elements);
  std::vector<int> p;
  for (auto tok : split(text, ',')) p.push_back(parse_int(tok, "degree"));
  if (static_cast<int>(p.size()) != num_elements) {
    throw InvalidArgument("degree list has " + std::to_string(p.size()) + " entries, mesh has " +
                          std::to_string(num_elements) + " elements");
  }
  return DegreeVector(std::move(p));
}

}  // namespace htq
