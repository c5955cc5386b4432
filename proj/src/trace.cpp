#include "idrem/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace idrem {

std::string csv_header(int n, int m) {
  std::string h = "t";
  for (int i = 0; i < n; ++i) h += fmt::format(",theta_true{}", i);
  for (int i = 0; i < n; ++i) h += fmt::format(",theta_hat{}", i);
  for (int i = 0; i < n; ++i) h += fmt::format(",omega{}", i);
  if (m == 1) {
    h += ",y";
  } else {
    for (int i = 0; i < m; ++i) h += fmt::format(",y{}", i);
  }
  h += ",Omega,branch,err_inst,interval";
  return h;
}

void write_csv(const Trace& trace, std::ostream& out) {
  out << csv_header(trace.n, trace.m) << '\n';
  std::string line;
  for (const TraceRow& r : trace.rows) {
    line.clear();
    auto put = [&line](double v) { fmt::format_to(std::back_inserter(line), ",{:.17g}", v); };
    fmt::format_to(std::back_inserter(line), "{:.17g}", r.t);
    for (double v : r.theta_true) put(v);
    for (double v : r.theta_hat) put(v);
    for (double v : r.omega) put(v);
    for (double v : r.y) put(v);
    put(r.Omega);
    fmt::format_to(std::back_inserter(line), ",{}", r.branch == Branch::Drem ? 1 : 0);
    put(r.err_inst);
    fmt::format_to(std::back_inserter(line), ",{}\n", r.interval);
    out << line;
  }
}

void write_csv(const Trace& trace, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  write_csv(trace, f);
  f.flush();
  if (!f) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

namespace {

template <class T>
T parse_field(std::string_view s, std::size_t line_no) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(fmt::format("csv line {}: bad field '{}'", line_no, s));
  }
  return v;
}

}  // namespace

Trace read_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("csv: missing header");
  int n = 0;
  int m = 0;
  std::stringstream hs(header);
  for (std::string col; std::getline(hs, col, ',');) {
    if (col.rfind("theta_true", 0) == 0) ++n;
    if (col == "y" || (col.size() > 1 && col[0] == 'y' && std::isdigit(static_cast<unsigned char>(col[1])))) ++m;
  }
  if (n == 0 || m == 0 || header != csv_header(n, m)) throw ConfigError("csv: unrecognised header");

  Trace trace{n, m, {}};
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    f.push_back(rest);
    if (f.size() != static_cast<std::size_t>(1 + 3 * n + m + 4)) {
      throw ConfigError(fmt::format("csv line {}: expected {} fields", line_no, 1 + 3 * n + m + 4));
    }
    TraceRow r;
    std::size_t k = 0;
    r.t = parse_field<double>(f[k++], line_no);
    r.theta_true.resize(n);
    r.theta_hat.resize(n);
    r.omega.resize(n);
    r.y.resize(m);
    for (int i = 0; i < n; ++i) r.theta_true[i] = parse_field<double>(f[k++], line_no);
    for (int i = 0; i < n; ++i) r.theta_hat[i] = parse_field<double>(f[k++], line_no);
    for (int i = 0; i < n; ++i) r.omega[i] = parse_field<double>(f[k++], line_no);
    for (int i = 0; i < m; ++i) r.y[i] = parse_field<double>(f[k++], line_no);
    r.Omega = parse_field<double>(f[k++], line_no);
    r.branch = parse_field<int>(f[k++], line_no) == 1 ? Branch::Drem : Branch::SigmaMod;
    r.err_inst = parse_field<double>(f[k++], line_no);
    r.interval = parse_field<std::int64_t>(f[k++], line_no);
    trace.rows.push_back(std::move(r));
  }
  return trace;
}

}  // namespace idrem
