#include "hprlp/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hprlp/mps.hpp"

namespace hprlp {

double sgm10(std::span<const double> times, double shift) {
  if (times.empty()) throw std::invalid_argument("sgm10: empty list");
  double acc = 0.0;
  for (double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("sgm10: times must be >= 0");
    acc += std::log(t + shift);
  }
  return std::exp(acc / static_cast<double>(times.size())) - shift;
}

void summarize(BenchReport& report) {
  report.sgm10_by_mode.clear();
  report.solved_by_mode.clear();
  report.total_by_mode.clear();
  std::map<std::string, std::vector<double>> times;
  for (const auto& row : report.rows) {
    const std::string mode(to_string(row.mode));
    times[mode].push_back(row.solved() ? row.seconds : report.time_limit);
    report.solved_by_mode[mode] += row.solved() ? 1 : 0;
    report.total_by_mode[mode] += 1;
  }
  for (const auto& [mode, ts] : times) report.sgm10_by_mode[mode] = sgm10(ts);
}

std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    auto ends_with = [&](std::string_view s) {
      return name.size() >= s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0;
    };
    if (ends_with(".mps") || ends_with(".mps.gz") || ends_with(".MPS") || ends_with(".MPS.gz"))
      out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

int worker_cap() {
  int cap = 1;
  if (const char* env = std::getenv("HPRLP_THREADS")) {
    int v = 0;
    const std::string_view s(env);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size() && v > 0) cap = v;
  }
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::min(cap, hw);
}

std::string instance_name(const std::filesystem::path& p) {
  std::string name = p.filename().string();
  for (std::string_view ext : {".gz", ".mps", ".MPS"})
    if (name.size() > ext.size() && name.compare(name.size() - ext.size(), ext.size(), ext) == 0)
      name.erase(name.size() - ext.size());
  return name;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

BenchReport run_bench(const std::filesystem::path& dir, const std::vector<Mode>& modes,
                      const SolverConfig& base) {
  const auto files = list_instances(dir);
  if (files.empty()) throw std::runtime_error("run_bench: no .mps files in " + dir.string());
  if (modes.empty()) throw std::invalid_argument("run_bench: no modes requested");

  struct Job {
    std::filesystem::path path;
    Mode mode;
  };
  std::vector<Job> jobs;
  for (const auto& f : files)
    for (Mode m : modes) jobs.push_back({f, m});

  BenchReport report;
  report.time_limit = base.time_limit;
  report.rows.resize(jobs.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      BenchRow row;
      row.name = instance_name(jobs[i].path);
      row.mode = jobs[i].mode;
      try {
        const LpProblem prob = load_mps(jobs[i].path);
        SolverConfig cfg = base;
        cfg.engine.mode = jobs[i].mode;
        cfg.record_trace = false;
        const SolveResult res = solve(prob, cfg);
        row.status = std::string(to_string(res.status));
        row.iterations = res.iterations;
        row.seconds = res.seconds;
        row.primal_obj = res.primal_obj;
        row.note = res.note;
      } catch (const std::exception& e) {
        row.status = "error";
        row.note = e.what();
      }
      report.rows[i] = std::move(row);
    }
  };

  const int workers = std::min<int>(worker_cap(), static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::sort(report.rows.begin(), report.rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::pair{a.name, static_cast<int>(a.mode)} < std::pair{b.name, static_cast<int>(b.mode)};
  });
  summarize(report);
  return report;
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "name,mode,status,iterations,seconds,primal_obj\n";
  for (const auto& r : report.rows)
    out << r.name << ',' << to_string(r.mode) << ',' << r.status << ',' << r.iterations << ','
        << fmt(r.seconds) << ',' << fmt(r.primal_obj) << '\n';
}

void write_bench_table(std::ostream& out, const BenchReport& report) {
  out << std::left << std::setw(24) << "instance" << std::setw(8) << "mode" << std::setw(16)
      << "status" << std::right << std::setw(10) << "iters" << std::setw(12) << "seconds" << '\n';
  for (const auto& r : report.rows)
    out << std::left << std::setw(24) << r.name << std::setw(8) << to_string(r.mode)
        << std::setw(16) << r.status << std::right << std::setw(10) << r.iterations
        << std::setw(12) << std::fixed << std::setprecision(3) << r.seconds << '\n';
  out << '\n' << std::left << std::setw(8) << "mode" << std::right << std::setw(10) << "solved"
      << std::setw(12) << "SGM10" << '\n';
  for (const auto& [mode, s] : report.sgm10_by_mode)
    out << std::left << std::setw(8) << mode << std::right << std::setw(10)
        << (std::to_string(report.solved_by_mode.at(mode)) + "/" +
            std::to_string(report.total_by_mode.at(mode)))
        << std::setw(12) << std::fixed << std::setprecision(3) << s << '\n';
  out.unsetf(std::ios::floatfield);
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << kTraceHeader << '\n';
  for (const auto& t : trace)
    out << t.k << ',' << t.r << ',' << t.t << ',' << fmt(t.sigma) << ',' << fmt(t.rel_gap) << ','
        << fmt(t.rel_primal) << ',' << fmt(t.rel_dual) << ',' << fmt(t.merit) << ','
        << fmt(t.seconds) << '\n';
}

namespace {

template <class T>
T parse_field(std::string_view s, long line) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw TraceFormatError("trace line " + std::to_string(line) + ": bad field '" +
                           std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw TraceFormatError("trace: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw TraceFormatError("trace: unexpected header '" + line + "'");
  std::vector<TraceRecord> out;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 9)
      throw TraceFormatError("trace line " + std::to_string(lineno) + ": expected 9 fields");
    TraceRecord t;
    t.k = parse_field<long>(f[0], lineno);
    t.r = parse_field<long>(f[1], lineno);
    t.t = parse_field<long>(f[2], lineno);
    t.sigma = parse_field<double>(f[3], lineno);
    t.rel_gap = parse_field<double>(f[4], lineno);
    t.rel_primal = parse_field<double>(f[5], lineno);
    t.rel_dual = parse_field<double>(f[6], lineno);
    t.merit = parse_field<double>(f[7], lineno);
    t.seconds = parse_field<double>(f[8], lineno);
    out.push_back(t);
  }
  return out;
}

void write_plotdata(std::ostream& out, std::span<const LabeledTrace> traces) {
  if (traces.empty()) throw TraceFormatError("plotdata: no traces");
  for (const auto& tr : traces)
    if (tr.records.empty())
      throw TraceFormatError("plotdata: empty trace" + (tr.label.empty() ? "" : " '" + tr.label + "'"));
  out << "k,series,value\n";
  for (const auto& tr : traces) {
    const std::string prefix = tr.label.empty() ? "" : tr.label + ":";
    for (const auto& t : tr.records) {
      const std::pair<const char*, double> series[] = {{"rel_gap", t.rel_gap},
                                                       {"rel_primal", t.rel_primal},
                                                       {"rel_dual", t.rel_dual},
                                                       {"merit", t.merit},
                                                       {"sigma", t.sigma}};
      for (const auto& [name, v] : series) out << t.k << ',' << prefix << name << ',' << fmt(v) << '\n';
    }
  }
}

namespace {

using nlohmann::json;

json num(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

double num_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan") return std::nan("");
  throw std::invalid_argument("json: bad number '" + s + "'");
}

json vec(const Vector& v) {
  json a = json::array();
  for (double e : v) a.push_back(num(e));
  return a;
}

Vector vec_from(const json& j) {
  Vector v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(num_from(e));
  return v;
}

}  // namespace

std::string solve_result_to_json(const SolveResult& r, int indent) {
  json j;
  j["status"] = std::string(to_string(r.status));
  j["mode"] = std::string(to_string(r.mode));
  j["primal_obj"] = num(r.primal_obj);
  j["dual_obj"] = num(r.dual_obj);
  j["residuals"] = {{"gap", num(r.residuals.gap)},
                    {"primal", num(r.residuals.primal)},
                    {"dual", num(r.residuals.dual)}};
  j["iterations"] = r.iterations;
  j["restarts"] = r.restarts;
  j["sigma"] = num(r.sigma);
  j["lambda_a"] = num(r.lambda_a);
  j["seconds"] = num(r.seconds);
  j["note"] = r.note;
  j["x"] = vec(r.x);
  j["y"] = vec(r.y);
  j["z"] = vec(r.z);
  json trace = json::array();
  for (const auto& t : r.trace)
    trace.push_back({{"k", t.k}, {"r", t.r}, {"t", t.t}, {"sigma", num(t.sigma)},
                     {"rel_gap", num(t.rel_gap)}, {"rel_primal", num(t.rel_primal)},
                     {"rel_dual", num(t.rel_dual)}, {"merit", num(t.merit)},
                     {"seconds", num(t.seconds)}});
  j["trace"] = std::move(trace);
  json events = json::array();
  for (const auto& e : r.events)
    events.push_back({{"k", e.k}, {"r", e.r}, {"t", e.t},
                      {"reason", std::string(to_string(e.reason))},
                      {"sigma_before", num(e.sigma_before)}, {"sigma_after", num(e.sigma_after)},
                      {"merit", num(e.merit)}});
  j["events"] = std::move(events);
  return j.dump(indent);
}

SolveResult solve_result_from_json(std::string_view text) {
  const json j = json::parse(text);
  SolveResult r;
  const auto status = parse_status(j.at("status").get<std::string>());
  const auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!status || !mode) throw std::invalid_argument("json: bad status or mode");
  r.status = *status;
  r.mode = *mode;
  r.primal_obj = num_from(j.at("primal_obj"));
  r.dual_obj = num_from(j.at("dual_obj"));
  r.residuals.gap = num_from(j.at("residuals").at("gap"));
  r.residuals.primal = num_from(j.at("residuals").at("primal"));
  r.residuals.dual = num_from(j.at("residuals").at("dual"));
  r.iterations = j.at("iterations").get<long>();
  r.restarts = j.at("restarts").get<long>();
  r.sigma = num_from(j.at("sigma"));
  r.lambda_a = num_from(j.at("lambda_a"));
  r.seconds = num_from(j.at("seconds"));
  r.note = j.at("note").get<std::string>();
  r.x = vec_from(j.at("x"));
  r.y = vec_from(j.at("y"));
  r.z = vec_from(j.at("z"));
  for (const auto& t : j.at("trace"))
    r.trace.push_back(TraceRecord{t.at("k").get<long>(), t.at("r").get<long>(),
                                  t.at("t").get<long>(), num_from(t.at("sigma")),
                                  num_from(t.at("rel_gap")), num_from(t.at("rel_primal")),
                                  num_from(t.at("rel_dual")), num_from(t.at("merit")),
                                  num_from(t.at("seconds"))});
  for (const auto& e : j.at("events")) {
    RestartEvent ev;
    ev.k = e.at("k").get<long>();
    ev.r = e.at("r").get<long>();
    ev.t = e.at("t").get<long>();
    const std::string reason = e.at("reason").get<std::string>();
    for (auto rr : {RestartReason::none, RestartReason::sufficient,
                    RestartReason::necessary_no_progress, RestartReason::long_loop,
                    RestartReason::fixed})
      if (to_string(rr) == reason) ev.reason = rr;
    ev.sigma_before = num_from(e.at("sigma_before"));
    ev.sigma_after = num_from(e.at("sigma_after"));
    ev.merit = num_from(e.at("merit"));
    r.events.push_back(ev);
  }
  return r;
}

}  // namespace hprlp
