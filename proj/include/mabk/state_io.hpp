#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mabk/linalg.hpp"

namespace mabk {

/// Thrown on malformed StateFile/CurveCsv content (maps to exit code 2).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// QSTATE format: header "QSTATE 1 <dim>", then dim rows of dim "re,im"
/// tokens, then optional '#' comment lines.
ComplexMatrix read_state_file(std::istream& in);
ComplexMatrix read_state_file(const std::string& path);
void write_state_file(std::ostream& out, const ComplexMatrix& m, const std::string& comment = "");

/// Shortest decimal that round-trips the value, capped at 12 significant digits.
std::string format_sig12(double v);

/// One row of the sweep CSV; unset optionals emit empty cells.
struct CurveRow {
    double m = 0.0;
    std::optional<double> F;
    std::optional<double> G;
    std::optional<double> numeric_hxe;
    std::optional<double> numeric_hxy;
    std::string thm2_note;
};

extern const char* const kCurveCsvHeader;  // "m,F,G,numeric_HXE,numeric_HXY,thm2_note"

std::string emit_curve_csv(const std::vector<CurveRow>& rows);
std::vector<CurveRow> parse_curve_csv(const std::string& text);

}  // namespace mabk
