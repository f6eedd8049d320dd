#pragma once

#include "levylab/ou.hpp"

#include <ostream>

namespace levylab {

/// Coefficient table schema version (columns t, X1..XN).
inline constexpr int kFieldCoeffsSchema = 1;
/// Jump ledger schema version (columns component, time, size, left_limit).
inline constexpr int kJumpLedgerSchema = 1;

void write_field_coefficients(std::ostream& out, const FieldPath& path);
/// Components are written 1-based, matching the X1..XN column names.
void write_jump_ledger(std::ostream& out, const FieldPath& path);

}  // namespace levylab
