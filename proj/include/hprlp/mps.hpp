#ifndef HPRLP_MPS_HPP
#define HPRLP_MPS_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hprlp/lp_model.hpp"

namespace hprlp {

enum class MpsErrorKind {
  unknown_section,
  undeclared_row,
  undeclared_column,
  malformed_number,
  duplicate_row,
  malformed_line,
  missing_objective,
  ranges_on_objective,
  bad_bound_type,
  infeasible_bounds,
  io,
};

std::string_view to_string(MpsErrorKind kind);

class MpsError : public std::runtime_error {
 public:
  MpsError(MpsErrorKind kind, long line, const std::string& message);
  MpsErrorKind kind() const { return kind_; }
  long line() const { return line_; }  // 0 when not tied to a line

 private:
  MpsErrorKind kind_;
  long line_;
};

enum class RowType : char { N = 'N', L = 'L', G = 'G', E = 'E' };

struct MpsRow {
  std::string name;
  RowType type = RowType::N;
};

struct MpsEntry {
  std::string row;  // row name (objective row included)
  std::string col;
  double value = 0.0;
  long line = 0;
};

struct MpsBound {
  std::string type;  // UP LO FX FR MI PL BV LI UI
  std::string col;
  double value = 0.0;
  long line = 0;
};

struct MpsWarning {
  long line = 0;
  std::string message;
};

/// Parsed file, before any interpretation of bounds or ranges.
struct MpsDocument {
  std::string name;
  ObjSense obj_sense = ObjSense::minimize;
  std::vector<MpsRow> rows;
  std::vector<std::string> columns;  // declaration order
  std::vector<bool> integer;         // per column, from MARKER INTORG/INTEND
  std::vector<MpsEntry> entries;
  std::vector<MpsEntry> rhs;     // col field unused
  std::vector<MpsEntry> ranges;  // col field unused
  std::vector<MpsBound> bounds;
  std::vector<MpsWarning> warnings;
  bool saw_endata = false;
};

/// Accepts free format (whitespace separated) and fixed format (field
/// columns 2-3, 5-12, 15-22, 25-36, 40-47, 50-61, needed only when names
/// contain blanks).
MpsDocument parse_mps(std::istream& in);
MpsDocument parse_mps_string(std::string_view text);

/// Reads a file; names ending in .gz are decompressed.
MpsDocument read_mps_file(const std::filesystem::path& path);

struct BuildReport {
  std::vector<MpsWarning> warnings;
};

/// Interprets a document as a general-form LP. Warnings (dropped free rows,
/// summed duplicates, negative upper bounds) are appended to `report`.
LpProblem build_problem(const MpsDocument& doc, BuildReport* report = nullptr);

/// read_mps_file + build_problem
LpProblem load_mps(const std::filesystem::path& path, BuildReport* report = nullptr);

}  // namespace hprlp

#endif  // HPRLP_MPS_HPP
