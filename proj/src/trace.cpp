#include "hybridproj/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hybridproj {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan" || s == "-nan") return std::nan("");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("read_csv: bad numeric field '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_csv(const RunTrace& trace, std::ostream& os) {
  os << "# config: " << trace.config_echo << "\n";
  os << "# stop_reason: " << trace.stop_reason << "\n";
  os << "n";
  for (int i = 0; i < trace.dim; ++i) os << ",x" << i;
  os << ",res_T,res_Tn,anchor_dist,fixed_dist,hull_count,proj_iters,"
        "vi_residual,dn_violation,fixed_hull_dist\n";
  for (const auto& r : trace.rows) {
    os << r.n;
    for (int i = 0; i < trace.dim; ++i) os << "," << fmt(r.x[i]);
    os << "," << fmt(r.res_T) << "," << fmt(r.res_Tn) << ","
       << fmt(r.anchor_dist) << "," << fmt(r.fixed_dist) << "," << r.hull_count
       << "," << r.proj_iters << "," << fmt(r.vi_residual) << ","
       << fmt(r.dn_violation) << "," << fmt(r.fixed_hull_dist) << "\n";
  }
}

std::string to_csv(const RunTrace& trace) {
  std::ostringstream os;
  write_csv(trace, os);
  return os.str();
}

void write_csv_file(const RunTrace& trace, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_csv_file: cannot open " + path);
  write_csv(trace, os);
}

RunTrace read_csv(std::istream& is) {
  RunTrace trace;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# config: ", 0) == 0) {
      trace.config_echo = line.substr(10);
      continue;
    }
    if (line.rfind("# stop_reason: ", 0) == 0) {
      trace.stop_reason = line.substr(15);
      continue;
    }
    if (line[0] == '#') continue;
    const auto fields = split(line, ',');
    if (!have_header) {
      // columns: n, x0..x{d-1}, then 10 trailing fields
      trace.dim = static_cast<int>(fields.size()) - 11;
      if (trace.dim < 1) throw std::runtime_error("read_csv: bad header");
      have_header = true;
      continue;
    }
    TraceRow r;
    size_t f = 0;
    r.n = static_cast<int>(parse_double(fields[f++]));
    r.x.resize(trace.dim);
    for (int i = 0; i < trace.dim; ++i) r.x[i] = parse_double(fields[f++]);
    r.res_T = parse_double(fields[f++]);
    r.res_Tn = parse_double(fields[f++]);
    r.anchor_dist = parse_double(fields[f++]);
    r.fixed_dist = parse_double(fields[f++]);
    r.hull_count = static_cast<int>(parse_double(fields[f++]));
    r.proj_iters = static_cast<int>(parse_double(fields[f++]));
    r.vi_residual = parse_double(fields[f++]);
    r.dn_violation = parse_double(fields[f++]);
    r.fixed_hull_dist = parse_double(fields[f++]);
    trace.rows.push_back(std::move(r));
  }
  return trace;
}

RunTrace read_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_csv_file: cannot open " + path);
  return read_csv(is);
}

}  // namespace hybridproj
