#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace htq {

/// Partition 0 = t_0 < t_1 < ... < t_N = T of the time interval.
///
/// Elements are indexed 0..N-1; element e spans [t_e, t_{e+1}].
class TemporalMesh {
 public:
  /// Validates the breakpoints: first is 0, strictly increasing, last positive.
  explicit TemporalMesh(std::vector<double> breakpoints);

  static TemporalMesh uniform(int num_elements, double horizon);
  /// t_0 = 0, t_l = T * sigma^(N - l) for l = 1..N.
  static TemporalMesh geometric(int num_elements, double horizon, double sigma);
  /// t_0 = 0, t_l = 2^(l - N) T.
  static TemporalMesh dyadic(int num_elements, double horizon);

  [[nodiscard]] int num_elements() const { return static_cast<int>(points_.size()) - 1; }
  [[nodiscard]] double horizon() const { return points_.back(); }
  [[nodiscard]] double node(int l) const { return points_[static_cast<std::size_t>(l)]; }
  [[nodiscard]] double left(int e) const { return node(e); }
  [[nodiscard]] double right(int e) const { return node(e + 1); }
  [[nodiscard]] double size(int e) const { return node(e + 1) - node(e); }
  [[nodiscard]] double max_size() const;
  [[nodiscard]] std::span<const double> breakpoints() const { return points_; }

  /// max_l h_l <= T/2, the assumption of the exponential-convergence result.
  /// Assembly still runs when this is false.
  [[nodiscard]] bool theorem41_ok() const { return max_size() <= 0.5 * horizon(); }

  /// Same mesh with all breakpoints multiplied by `factor` > 0.
  [[nodiscard]] TemporalMesh scaled(double factor) const;

 private:
  std::vector<double> points_;
};

/// Per-element polynomial degrees p_e >= 1.
class DegreeVector {
 public:
  explicit DegreeVector(std::vector<int> degrees);
  static DegreeVector uniform(int num_elements, int p);
  /// p_e = e + 1, the hp distribution.
  static DegreeVector linear_ramp(int num_elements);

  [[nodiscard]] int size() const { return static_cast<int>(p_.size()); }
  [[nodiscard]] int operator[](int e) const { return p_[static_cast<std::size_t>(e)]; }
  [[nodiscard]] int max() const;
  [[nodiscard]] int sum() const;
  [[nodiscard]] std::span<const int> values() const { return p_; }

 private:
  std::vector<int> p_;
};

/// Local-to-global degree-of-freedom numbering.
///
/// Vertices come first (vertex l has global index l, so index 0 is the only
/// basis function not vanishing at t = 0), then element bubbles element by
/// element and mode by mode. Local mode 0 is the left vertex function, mode 1
/// the right one, modes 2..p the bubbles.
class DofMap {
 public:
  DofMap(const TemporalMesh& mesh, const DegreeVector& degrees);

  [[nodiscard]] int num_dofs() const { return num_dofs_; }
  [[nodiscard]] int num_elements() const { return static_cast<int>(offsets_.size()); }
  [[nodiscard]] int local_size(int e) const { return degrees_[static_cast<std::size_t>(e)] + 1; }
  [[nodiscard]] int degree(int e) const { return degrees_[static_cast<std::size_t>(e)]; }
  [[nodiscard]] int global(int m, int e) const;

 private:
  int num_dofs_ = 0;
  std::vector<int> degrees_;
  std::vector<int> offsets_;  // first bubble index per element
};

/// Textual/config description of a mesh: {kind, N, T, sigma?, breakpoints?}.
struct MeshSpec {
  enum class Kind { uniform, geometric, dyadic, explicit_points };
  Kind kind = Kind::uniform;
  int num_elements = 1;
  double horizon = 1.0;
  std::optional<double> sigma;
  std::vector<double> breakpoints;

  [[nodiscard]] TemporalMesh build() const;
  /// Compact form used on the command line, e.g. "geometric:10:0.17".
  [[nodiscard]] std::string to_string() const;
};

/// Parses "uniform:N", "geometric:N:sigma", "dyadic:N" or "explicit:t0,t1,...".
/// The horizon of non-explicit kinds is taken from `horizon`.
MeshSpec parse_mesh_spec(std::string_view text, double horizon);

/// Parses "uniform:p", "ramp" (p_e = e + 1) or a comma list "2,3,4".
DegreeVector parse_degree_spec(std::string_view text, int num_elements);

std::string_view to_string(MeshSpec::Kind kind);
MeshSpec::Kind mesh_kind_from_string(std::string_view text);

}  // namespace htq
