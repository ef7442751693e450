#ifndef HPRLP_BENCH_HPP
#define HPRLP_BENCH_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hprlp/solver.hpp"

namespace hprlp {

/// Shifted geometric mean (prod (t_i + shift))^(1/n) - shift, in log space.
double sgm10(std::span<const double> times, double shift = 10.0);

struct BenchRow {
  std::string name;
  Mode mode = Mode::hpr;
  std::string status;  // a SolveStatus name, or "error"
  long iterations = 0;
  double seconds = 0.0;
  double primal_obj = 0.0;
  std::string note;

  bool solved() const { return status == "optimal"; }
};

struct BenchReport {
  double time_limit = 0.0;
  std::vector<BenchRow> rows;  // sorted by (name, mode)
  std::map<std::string, double> sgm10_by_mode;
  std::map<std::string, int> solved_by_mode;
  std::map<std::string, int> total_by_mode;
};

/// Rebuilds the per-mode summaries from `rows`. Unsolved instances are
/// charged report.time_limit.
void summarize(BenchReport& report);

/// Every .mps / .mps.gz file in `dir` under each mode. Worker count is
/// min(HPRLP_THREADS, hardware threads, jobs); HPRLP_THREADS defaults to 1.
BenchReport run_bench(const std::filesystem::path& dir, const std::vector<Mode>& modes,
                      const SolverConfig& base);

std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir);

void write_bench_csv(std::ostream& out, const BenchReport& report);
void write_bench_table(std::ostream& out, const BenchReport& report);

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kTraceHeader = "k,r,t,sigma,rel_gap,rel_primal,rel_dual,merit,seconds";

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);
std::vector<TraceRecord> read_trace_csv(std::istream& in);

struct LabeledTrace {
  std::string label;  // empty for a single unlabeled trace
  std::vector<TraceRecord> records;
};

/// Long format "k,series,value" with one series per residual, the merit and
/// sigma. With a label the series is "label:name". Empty traces are rejected.
void write_plotdata(std::ostream& out, std::span<const LabeledTrace> traces);

std::string solve_result_to_json(const SolveResult& result, int indent = 2);
SolveResult solve_result_from_json(std::string_view text);

}  // namespace hprlp

#endif  // HPRLP_BENCH_HPP
