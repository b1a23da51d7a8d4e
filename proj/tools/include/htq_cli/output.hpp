#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace htq::cli {

/// File-system failure; maps to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// printf %.{digits}g, with "nan"/"inf" spelled the same on every platform.
std::string format_number(double value, int digits = 17);

/// One row per matrix row, comma separated, 17 significant digits.
std::string matrix_csv(const Eigen::MatrixXd& matrix);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& values, int digits = 17);
  /// Integers are written without exponent.
  void add_row(const std::vector<std::string>& cells);
  [[nodiscard]] std::string str() const;
  [[nodiscard]] std::size_t rows() const { return rows_.size(); }

 private:
  std::size_t width_;
  std::string header_;
  std::vector<std::string> rows_;
};

/// Sidecar next to a data file: "run.csv" -> "run.json".
std::filesystem::path default_sidecar(const std::filesystem::path& data);

/// Collects output files and writes them all or none.
///
/// check() probes every target directory before any computation; commit()
/// writes each file to a temporary sibling first and renames only after all
/// temporaries were written.
class OutputSet {
 public:
  void add(std::filesystem::path path, std::string content);
  /// IoError if a target directory is missing or not writable.
  static void check(const std::vector<std::filesystem::path>& paths);
  void commit() const;

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

}  // namespace htq::cli
