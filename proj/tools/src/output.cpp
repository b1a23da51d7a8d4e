#include "htq_cli/output.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

namespace htq::cli {

namespace fs = std::filesystem;

std::string format_number(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::string matrix_csv(const Eigen::MatrixXd& matrix) {
  std::string out;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_number(matrix(i, j));
    }
    out += '\n';
  }
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) header_ += ',';
    header_ += header[i];
  }
}

void CsvTable::add_row(const std::vector<double>& values, int digits) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v, digits));
  add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("CsvTable: row width mismatch");
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) row += ',';
    row += cells[i];
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out = header_ + '\n';
  for (const auto& r : rows_) out += r + '\n';
  return out;
}

fs::path default_sidecar(const fs::path& data) {
  fs::path meta = data;
  meta.replace_extension(".json");
  if (meta == data) meta += ".meta.json";
  return meta;
}

namespace {

fs::path parent_or_cwd(const fs::path& p) {
  const fs::path parent = p.parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

fs::path temp_sibling(const fs::path& p) {
  fs::path tmp = p;
  tmp += ".tmp." + std::to_string(::getpid());
  return tmp;
}

}  // namespace

void OutputSet::add(fs::path path, std::string content) { files_.emplace_back(std::move(path), std::move(content)); }

void OutputSet::check(const std::vector<fs::path>& paths) {
  for (const auto& p : paths) {
    if (p.empty()) throw IoError("output path is empty");
    const fs::path dir = parent_or_cwd(p);
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("output directory '" + dir.string() + "' does not exist");
    if (fs::is_directory(p, ec)) throw IoError("output path '" + p.string() + "' is a directory");
    if (::access(dir.c_str(), W_OK) != 0) throw IoError("output directory '" + dir.string() + "' is not writable");
  }
}

void OutputSet::commit() const {
  std::vector<fs::path> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, content] : files_) {
    const fs::path tmp = temp_sibling(path);
    temps.push_back(tmp);
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (os) os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (os) os.close();
    if (!os) {
      cleanup();
      throw IoError("cannot write '" + path.string() + "'");
    }
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files_[i].first, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot write '" + files_[i].first.string() + "': " + ec.message());
    }
  }
}

}  // namespace htq::cli
