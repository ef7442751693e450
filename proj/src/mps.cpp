#include "hprlp/mps.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace hprlp {

std::string_view to_string(MpsErrorKind kind) {
  switch (kind) {
    case MpsErrorKind::unknown_section: return "unknown section";
    case MpsErrorKind::undeclared_row: return "undeclared row";
    case MpsErrorKind::undeclared_column: return "undeclared column";
    case MpsErrorKind::malformed_number: return "malformed number";
    case MpsErrorKind::duplicate_row: return "duplicate row";
    case MpsErrorKind::malformed_line: return "malformed line";
    case MpsErrorKind::missing_objective: return "missing objective row";
    case MpsErrorKind::ranges_on_objective: return "RANGES on objective row";
    case MpsErrorKind::bad_bound_type: return "bad bound type";
    case MpsErrorKind::infeasible_bounds: return "infeasible bounds";
    case MpsErrorKind::io: return "i/o error";
  }
  return "?";
}

MpsError::MpsError(MpsErrorKind kind, long line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                        std::string(to_string(kind)) + ": " + message
                                  : std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      line_(line) {}

namespace {

// Magnitudes at or above this are read as infinite bounds.
constexpr double kMpsInfinity = 1e30;

enum class Section { none, name, objsense, rows, columns, rhs, ranges, bounds, endata };

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// 1-based inclusive column range of a fixed-format field.
std::string field(std::string_view line, std::size_t first, std::size_t last) {
  if (line.size() < first) return {};
  return trim(line.substr(first - 1, std::min(last, line.size()) - first + 1));
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

double parse_number(const std::string& tok, long line) {
  double v = 0.0;
  const char* b = tok.data();
  const char* e = tok.data() + tok.size();
  if (!tok.empty() && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || std::isnan(v))
    throw MpsError(MpsErrorKind::malformed_number, line, "'" + tok + "'");
  return v;
}

double to_extended(double v) {
  if (v >= kMpsInfinity) return kInf;
  if (v <= -kMpsInfinity) return -kInf;
  return v;
}

struct FixedFields {
  std::string f1, f2, f3, f4, f5, f6;
};

FixedFields fixed_fields(std::string_view line) {
  return {field(line, 2, 3),   field(line, 5, 12),  field(line, 15, 22),
          field(line, 25, 36), field(line, 40, 47), field(line, 50, 61)};
}

bool bound_takes_value(const std::string& type) {
  return type == "UP" || type == "LO" || type == "FX" || type == "LI" || type == "UI";
}

class Parser {
 public:
  MpsDocument run(std::istream& in) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      if (raw.empty() || raw[0] == '*') continue;
      if (trim(raw).empty()) continue;
      if (raw[0] != ' ' && raw[0] != '\t') {
        header(raw);
        if (section_ == Section::endata) break;
        continue;
      }
      data(raw);
    }
    if (!doc_.saw_endata) doc_.warnings.push_back({line_, "missing ENDATA"});
    return std::move(doc_);
  }

 private:
  void header(const std::string& raw) {
    const auto tok = split_ws(raw);
    const std::string key = upper(tok[0]);
    if (key == "NAME") {
      section_ = Section::name;
      doc_.name = tok.size() > 1 ? trim(std::string_view(raw).substr(4)) : "";
    } else if (key == "OBJSENSE") {
      section_ = Section::objsense;
      if (tok.size() > 1) set_sense(tok[1]);
    } else if (key == "ROWS") {
      section_ = Section::rows;
    } else if (key == "COLUMNS") {
      section_ = Section::columns;
    } else if (key == "RHS") {
      section_ = Section::rhs;
    } else if (key == "RANGES") {
      section_ = Section::ranges;
    } else if (key == "BOUNDS") {
      section_ = Section::bounds;
    } else if (key == "ENDATA") {
      section_ = Section::endata;
      doc_.saw_endata = true;
    } else {
      throw MpsError(MpsErrorKind::unknown_section, line_, "'" + tok[0] + "'");
    }
  }

  void set_sense(const std::string& tok) {
    const std::string s = upper(tok);
    if (s == "MAX" || s == "MAXIMIZE") doc_.obj_sense = ObjSense::maximize;
    else if (s == "MIN" || s == "MINIMIZE") doc_.obj_sense = ObjSense::minimize;
    else throw MpsError(MpsErrorKind::malformed_line, line_, "bad OBJSENSE '" + tok + "'");
  }

  void data(const std::string& raw) {
    auto tok = split_ws(raw);
    switch (section_) {
      case Section::objsense: set_sense(tok[0]); return;
      case Section::rows: rows(raw, tok); return;
      case Section::columns: columns(raw, tok); return;
      case Section::rhs: rhs_like(raw, tok, doc_.rhs); return;
      case Section::ranges: rhs_like(raw, tok, doc_.ranges); return;
      case Section::bounds: bounds(raw, tok); return;
      case Section::name: break;
      case Section::none:
      case Section::endata: break;
    }
    throw MpsError(MpsErrorKind::malformed_line, line_, "data outside of a section");
  }

  void rows(const std::string& raw, const std::vector<std::string>& tok) {
    std::string type, name;
    if (tok.size() == 2) {
      type = tok[0];
      name = tok[1];
    } else {
      const auto f = fixed_fields(raw);
      type = f.f1;
      name = f.f2;
    }
    type = upper(type);
    if (name.empty() || type.size() != 1 || std::string("NLGE").find(type[0]) == std::string::npos)
      throw MpsError(MpsErrorKind::malformed_line, line_, "bad ROWS entry");
    if (!row_index_.emplace(name, doc_.rows.size()).second)
      throw MpsError(MpsErrorKind::duplicate_row, line_, "'" + name + "'");
    doc_.rows.push_back({name, static_cast<RowType>(type[0])});
  }

  bool declared_rows(const std::vector<std::pair<std::string, std::string>>& pairs) const {
    return std::all_of(pairs.begin(), pairs.end(),
                       [&](const auto& p) { return row_index_.count(p.first) > 0; });
  }

  [[noreturn]] void undeclared_row(const std::vector<std::pair<std::string, std::string>>& pairs) const {
    for (const auto& p : pairs)
      if (!row_index_.count(p.first))
        throw MpsError(MpsErrorKind::undeclared_row, line_, "'" + p.first + "'");
    throw MpsError(MpsErrorKind::malformed_line, line_, "bad entry");
  }

  using Pairs = std::vector<std::pair<std::string, std::string>>;

  // Fixed-format reading of fields 3-6.
  static Pairs fixed_pairs(const FixedFields& f) {
    Pairs out;
    if (!f.f3.empty() || !f.f4.empty()) out.emplace_back(f.f3, f.f4);
    if (!f.f5.empty() || !f.f6.empty()) out.emplace_back(f.f5, f.f6);
    return out;
  }

  void columns(const std::string& raw, const std::vector<std::string>& tok) {
    if (tok.size() >= 3 && (tok[1] == "'MARKER'" || tok[1] == "MARKER")) {
      const std::string kind = upper(tok[2]);
      if (kind.find("INTORG") != std::string::npos) in_integer_block_ = true;
      else if (kind.find("INTEND") != std::string::npos) in_integer_block_ = false;
      else throw MpsError(MpsErrorKind::malformed_line, line_, "unknown MARKER '" + tok[2] + "'");
      return;
    }
    // Whitespace splitting first; fixed columns when that names unknown rows.
    Pairs pairs;
    std::string col;
    if (tok.size() == 3 || tok.size() == 5) {
      col = tok[0];
      pairs.emplace_back(tok[1], tok[2]);
      if (tok.size() == 5) pairs.emplace_back(tok[3], tok[4]);
    }
    if (pairs.empty() || !declared_rows(pairs)) {
      const auto f = fixed_fields(raw);
      Pairs fp = fixed_pairs(f);
      if (!f.f2.empty() && !fp.empty() && declared_rows(fp)) {
        col = f.f2;
        pairs = std::move(fp);
      } else if (pairs.empty()) {
        if (f.f2.empty() || fp.empty())
          throw MpsError(MpsErrorKind::malformed_line, line_, "bad COLUMNS entry");
        undeclared_row(fp);
      } else {
        undeclared_row(pairs);
      }
    }
    auto [it, inserted] = col_index_.emplace(col, doc_.columns.size());
    if (inserted) {
      doc_.columns.push_back(col);
      doc_.integer.push_back(in_integer_block_);
    }
    for (auto& [row, val] : pairs) doc_.entries.push_back({row, col, parse_number(val, line_), line_});
  }

  void rhs_like(const std::string& raw, const std::vector<std::string>& tok,
                std::vector<MpsEntry>& out) {
    Pairs pairs;
    if (tok.size() == 2 || tok.size() == 4) {
      pairs.emplace_back(tok[0], tok[1]);
      if (tok.size() == 4) pairs.emplace_back(tok[2], tok[3]);
    } else if (tok.size() == 3 || tok.size() == 5) {
      pairs.emplace_back(tok[1], tok[2]);
      if (tok.size() == 5) pairs.emplace_back(tok[3], tok[4]);
    }
    if (pairs.empty() || !declared_rows(pairs)) {
      Pairs fp = fixed_pairs(fixed_fields(raw));
      if (!fp.empty() && declared_rows(fp)) pairs = std::move(fp);
      else if (pairs.empty() && fp.empty())
        throw MpsError(MpsErrorKind::malformed_line, line_, "bad RHS/RANGES entry");
      else undeclared_row(pairs.empty() ? fp : pairs);
    }
    for (auto& [row, val] : pairs) out.push_back({row, "", parse_number(val, line_), line_});
  }

  void bounds(const std::string& raw, const std::vector<std::string>& tok) {
    if (tok.empty()) return;
    const std::string type = upper(tok[0]);
    static const char* known[] = {"UP", "LO", "FX", "FR", "MI", "PL", "BV", "LI", "UI"};
    if (std::find(std::begin(known), std::end(known), type) == std::end(known))
      throw MpsError(MpsErrorKind::bad_bound_type, line_, "'" + tok[0] + "'");
    const bool valued = bound_takes_value(type);
    std::string col, val;
    if (valued && (tok.size() == 3 || tok.size() == 4)) {
      col = tok[tok.size() - 2];
      val = tok.back();
    } else if (!valued && (tok.size() == 2 || tok.size() == 3)) {
      col = tok.back();
    } else if (!valued && tok.size() == 4) {
      col = tok[2];  // e.g. "BV BND x 1"
    }
    if (col.empty() || !col_index_.count(col)) {
      const auto f = fixed_fields(raw);
      if (!f.f3.empty() && col_index_.count(f.f3) && (!valued || !f.f4.empty())) {
        col = f.f3;
        val = f.f4;
      } else if (col.empty()) {
        throw MpsError(MpsErrorKind::malformed_line, line_, "bad BOUNDS entry");
      } else {
        throw MpsError(MpsErrorKind::undeclared_column, line_, "'" + col + "'");
      }
    }
    doc_.bounds.push_back({type, col, valued ? parse_number(val, line_) : 0.0, line_});
  }

  MpsDocument doc_;
  Section section_ = Section::none;
  long line_ = 0;
  bool in_integer_block_ = false;
  std::unordered_map<std::string, std::size_t> row_index_;
  std::unordered_map<std::string, std::size_t> col_index_;
};

}  // namespace

MpsDocument parse_mps(std::istream& in) { return Parser().run(in); }

MpsDocument parse_mps_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_mps(in);
}

MpsDocument read_mps_file(const std::filesystem::path& path) {
  if (path.extension() == ".gz") {
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (f == nullptr) throw MpsError(MpsErrorKind::io, 0, "cannot open " + path.string());
    std::string text;
    char buf[1 << 16];
    int got = 0;
    while ((got = gzread(f, buf, sizeof buf)) > 0) text.append(buf, static_cast<std::size_t>(got));
    const bool failed = got < 0;
    gzclose(f);
    if (failed) throw MpsError(MpsErrorKind::io, 0, "gzip read failed for " + path.string());
    return parse_mps_string(text);
  }
  std::ifstream in(path);
  if (!in) throw MpsError(MpsErrorKind::io, 0, "cannot open " + path.string());
  return parse_mps(in);
}

LpProblem build_problem(const MpsDocument& doc, BuildReport* report) {
  auto warn = [&](long line, std::string msg) {
    if (report) report->warnings.push_back({line, std::move(msg)});
  };

  // Objective is the first N row; remaining N rows are dropped.
  std::unordered_map<std::string, int> row_of;  // constraint rows only
  std::string objective;
  std::vector<const MpsRow*> cons;
  std::unordered_map<std::string, bool> is_free_row;
  for (const auto& r : doc.rows) {
    if (r.type == RowType::N) {
      if (objective.empty()) objective = r.name;
      else warn(0, "free row '" + r.name + "' dropped");
      is_free_row[r.name] = true;
      continue;
    }
    row_of.emplace(r.name, static_cast<int>(cons.size()));
    cons.push_back(&r);
  }
  if (objective.empty()) throw MpsError(MpsErrorKind::missing_objective, 0, "no N row");

  std::unordered_map<std::string, int> col_of;
  for (std::size_t j = 0; j < doc.columns.size(); ++j) col_of.emplace(doc.columns[j], static_cast<int>(j));

  const auto m = cons.size();
  const auto n = doc.columns.size();
  Vector c(n, 0.0);
  std::vector<Triplet> trip;
  std::map<std::pair<int, int>, long> seen;  // (row, col) -> line; row -1 is the objective
  for (const auto& e : doc.entries) {
    const int j = col_of.at(e.col);
    int i = -2;
    if (e.row == objective) i = -1;
    else if (auto it = row_of.find(e.row); it != row_of.end()) i = it->second;
    if (i == -2) continue;  // dropped free row
    if (!seen.emplace(std::pair{i, j}, e.line).second)
      warn(e.line, "duplicate coefficient (" + e.row + ", " + e.col + ") summed");
    if (i == -1) c[static_cast<std::size_t>(j)] += e.value;
    else trip.push_back({i, j, e.value});
  }

  Vector rhs(m, 0.0);
  double obj_constant = 0.0;
  for (const auto& e : doc.rhs) {
    if (e.row == objective) {
      obj_constant = -e.value;
    } else if (auto it = row_of.find(e.row); it != row_of.end()) {
      rhs[static_cast<std::size_t>(it->second)] = e.value;
    } else {
      warn(e.line, "RHS on dropped free row '" + e.row + "' ignored");
    }
  }

  Vector lo(m), hi(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double b = to_extended(rhs[i]);
    switch (cons[i]->type) {
      case RowType::L: lo[i] = -kInf; hi[i] = b; break;
      case RowType::G: lo[i] = b; hi[i] = kInf; break;
      case RowType::E: lo[i] = b; hi[i] = b; break;
      case RowType::N: break;
    }
  }

  for (const auto& e : doc.ranges) {
    if (is_free_row.count(e.row))
      throw MpsError(MpsErrorKind::ranges_on_objective, e.line, "'" + e.row + "'");
    const auto i = static_cast<std::size_t>(row_of.at(e.row));
    const double r = rhs[i];
    const double R = e.value;
    switch (cons[i]->type) {
      case RowType::L: lo[i] = r - std::abs(R); hi[i] = r; break;
      case RowType::G: lo[i] = r; hi[i] = r + std::abs(R); break;
      case RowType::E:
        if (R >= 0.0) { lo[i] = r; hi[i] = r + R; }
        else { lo[i] = r + R; hi[i] = r; }
        break;
      case RowType::N: break;
    }
    lo[i] = to_extended(lo[i]);
    hi[i] = to_extended(hi[i]);
  }

  Vector cl(n, 0.0), cu(n, kInf);
  std::vector<bool> lower_set(n, false);
  for (const auto& b : doc.bounds) {
    const auto j = static_cast<std::size_t>(col_of.at(b.col));
    const double v = to_extended(b.value);
    const std::string& t = b.type;
    if (t == "UP" || t == "UI") {
      cu[j] = v;
      if (v < 0.0 && !lower_set[j] && cl[j] == 0.0) {
        cl[j] = -kInf;
        warn(b.line, "negative upper bound on '" + b.col + "' without lower bound; lower set to -inf");
      }
    } else if (t == "LO" || t == "LI") {
      cl[j] = v;
      lower_set[j] = true;
    } else if (t == "FX") {
      cl[j] = v;
      cu[j] = v;
      lower_set[j] = true;
    } else if (t == "FR") {
      cl[j] = -kInf;
      cu[j] = kInf;
      lower_set[j] = true;
    } else if (t == "MI") {
      cl[j] = -kInf;
      lower_set[j] = true;
    } else if (t == "PL") {
      cu[j] = kInf;
    } else if (t == "BV") {
      cl[j] = 0.0;
      cu[j] = 1.0;
      lower_set[j] = true;
    }
  }

  for (std::size_t i = 0; i < m; ++i)
    if (!(lo[i] <= hi[i]) || lo[i] == kInf || hi[i] == -kInf)
      throw MpsError(MpsErrorKind::infeasible_bounds, 0, "row '" + cons[i]->name + "'");
  for (std::size_t j = 0; j < n; ++j)
    if (!(cl[j] <= cu[j]) || cl[j] == kInf || cu[j] == -kInf)
      throw MpsError(MpsErrorKind::infeasible_bounds, 0, "column '" + doc.columns[j] + "'");

  SparseMatrix a(static_cast<int>(m), static_cast<int>(n), trip);
  return make_problem(std::move(c), std::move(a), std::move(lo), std::move(hi), std::move(cl),
                      std::move(cu), obj_constant, doc.obj_sense);
}

LpProblem load_mps(const std::filesystem::path& path, BuildReport* report) {
  const MpsDocument doc = read_mps_file(path);
  if (report) report->warnings.insert(report->warnings.end(), doc.warnings.begin(), doc.warnings.end());
  return build_problem(doc, report);
}

}  // namespace hprlp
