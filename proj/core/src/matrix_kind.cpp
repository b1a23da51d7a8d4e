#include "htq/matrix_kind.hpp"

#include <string>

#include "htq/error.hpp"

namespace htq {

std::string_view to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::M: return "M";
    case MatrixKind::A: return "A";
    case MatrixKind::B: return "B";
  }
  return "?";
}

MatrixKind matrix_kind_from_string(std::string_view text) {
  if (text == "M" || text == "m") return MatrixKind::M;
  if (text == "A" || text == "a") return MatrixKind::A;
  if (text == "B" || text == "b") return MatrixKind::B;
  throw InvalidArgument("unknown matrix kind '" + std::string(text) + "' (expected M, A or B)");
}

}  // namespace htq
