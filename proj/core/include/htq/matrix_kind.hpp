#pragma once

#include <string_view>

namespace htq {

/// M: <phi_j, H_T phi_i>, A: <phi_j', H_T phi_i>, B: <phi_j', H_T phi_i'>.
enum class MatrixKind { M, A, B };

std::string_view to_string(MatrixKind kind);
/// Accepts "M", "A", "B" (case-insensitive).
MatrixKind matrix_kind_from_string(std::string_view text);

}  // namespace htq
