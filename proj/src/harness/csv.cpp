#include <fmt/format.h>

#include <charconv>
#include <sstream>

#include "baglab/errors.hpp"
#include "baglab/harness.hpp"

namespace baglab::harness {

namespace {

const char* const kColumns =
    "gamma,theta,scheme,B,n,reps,emp_bias,emp_var,emp_risk,emp_se,th_bias,th_var,th_risk,"
    "near_threshold,extra";

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InvalidArgument("bad number '" + s + "'");
  return v;
}

std::optional<double> opt_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return to_double(s);
}

}  // namespace

void ResultRow::add_extra(const std::string& key, double value) {
  extra.emplace_back(key, format_number(value));
}

void ResultRow::add_extra(const std::string& key, const std::string& value) {
  extra.emplace_back(key, value);
}

std::optional<double> ResultRow::extra_value(const std::string& key) const {
  for (const auto& [k, v] : extra)
    if (k == key) return v.empty() ? std::nullopt : std::optional<double>(to_double(v));
  return std::nullopt;
}

std::string format_number(double v) { return fmt::format("{:.12g}", v); }

void write_csv(const Table& table, std::ostream& os) {
  os << "# schema=" << kSchemaVersion << '\n';
  if (!table.meta.empty()) {
    os << '#';
    for (const auto& m : table.meta) os << ' ' << m;
    os << '\n';
  }
  os << kColumns << '\n';
  for (const auto& r : table.rows) {
    std::string extra;
    for (const auto& [k, v] : r.extra) {
      if (!extra.empty()) extra += ';';
      extra += k + '=' + v;
    }
    os << format_number(r.gamma) << ',' << format_number(r.theta) << ',' << r.scheme << ',' << r.B
       << ',' << r.n << ',' << r.reps << ',' << cell(r.emp_bias) << ',' << cell(r.emp_var) << ','
       << cell(r.emp_risk) << ',' << cell(r.emp_se) << ',' << cell(r.th_bias) << ','
       << cell(r.th_var) << ',' << cell(r.th_risk) << ',' << (r.near_threshold ? 1 : 0) << ','
       << extra << '\n';
  }
}

std::string to_csv(const Table& table) {
  std::ostringstream os;
  write_csv(table, os);
  return os.str();
}

Table parse_csv(const std::string& text) {
  Table table;
  std::istringstream is(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# schema=", 0) != 0) {
        for (const auto& m : split(line.substr(1), ' '))
          if (!m.empty()) table.meta.push_back(m);
      }
      continue;
    }
    if (!header_seen) {
      if (line != kColumns) throw InvalidArgument("unexpected CSV header: " + line);
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 15) throw InvalidArgument("CSV row has " + std::to_string(f.size()) + " fields");
    ResultRow r;
    r.gamma = to_double(f[0]);
    r.theta = to_double(f[1]);
    r.scheme = f[2];
    r.B = static_cast<int>(to_double(f[3]));
    r.n = static_cast<Index>(to_double(f[4]));
    r.reps = static_cast<int>(to_double(f[5]));
    r.emp_bias = opt_double(f[6]);
    r.emp_var = opt_double(f[7]);
    r.emp_risk = opt_double(f[8]);
    r.emp_se = opt_double(f[9]);
    r.th_bias = opt_double(f[10]);
    r.th_var = opt_double(f[11]);
    r.th_risk = opt_double(f[12]);
    r.near_threshold = f[13] == "1";
    if (!f[14].empty())
      for (const auto& kv : split(f[14], ';')) {
        const auto eq = kv.find('=');
        r.extra.emplace_back(kv.substr(0, eq), eq == std::string::npos ? "" : kv.substr(eq + 1));
      }
    table.rows.push_back(std::move(r));
  }
  return table;
}

}  // namespace baglab::harness
