#include "lrd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "lrd/error.hpp"

namespace lrd {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\"");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\"");
  return s.substr(b, e - b + 1);
}

// Finite decimal number, or nullopt.
std::optional<double> parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  const char* first = s.data();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string line_list(const std::vector<std::size_t>& lines) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(lines.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) out += (i ? ", " : "") + std::to_string(lines[i]);
  if (lines.size() > shown) out += ", ... (" + std::to_string(lines.size()) + " total)";
  return out;
}

}  // namespace

std::vector<double> parse_csv_column(std::istream& in, const std::optional<std::string>& column) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw DataError("input is empty");

  std::size_t first_data = 0;
  std::size_t col = 0;
  const std::vector<std::string> head = split_fields(lines.front());
  bool has_header = false;
  for (const auto& f : head)
    if (!parse_number(f)) has_header = true;

  if (column) {
    if (!has_header) throw DataError("--column given but the input has no header row", {1});
    bool found = false;
    for (std::size_t c = 0; c < head.size(); ++c)
      if (trim(head[c]) == *column) { col = c; found = true; }
    if (!found) throw DataError("column '" + *column + "' not found in header", {1});
  } else if (head.size() != 1) {
    throw DataError("input has " + std::to_string(head.size()) +
                        " columns; select one with --column",
                    {1});
  }
  if (has_header) first_data = 1;

  std::vector<double> values;
  std::vector<std::size_t> bad;
  for (std::size_t i = first_data; i < lines.size(); ++i) {
    const std::vector<std::string> fields = split_fields(lines[i]);
    std::optional<double> v;
    if (col < fields.size()) v = parse_number(fields[col]);
    if (v) values.push_back(*v);
    else bad.push_back(i + 1);
  }
  if (!bad.empty())
    throw DataError("non-numeric or non-finite values on line(s) " + line_list(bad), bad);
  if (values.empty()) throw DataError("input has no data rows");
  return values;
}

std::vector<double> read_csv_column(const std::string& path, const std::optional<std::string>& column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_csv_column(in, column);
}

Transform parse_transform(const std::string& name) {
  if (name == "none") return Transform::none;
  if (name == "log_return") return Transform::log_return;
  if (name == "square") return Transform::square;
  if (name == "square_log_return") return Transform::square_log_return;
  throw ConfigError("unknown transform '" + name +
                    "' (none, log_return, square, square_log_return)");
}

std::string to_string(Transform t) {
  switch (t) {
    case Transform::none: return "none";
    case Transform::log_return: return "log_return";
    case Transform::square: return "square";
    case Transform::square_log_return: return "square_log_return";
  }
  return "none";
}

std::vector<double> apply_transform(const std::vector<double>& x, Transform t) {
  std::vector<double> out;
  if (t == Transform::none) return x;
  if (t == Transform::square) {
    out.reserve(x.size());
    for (double v : x) out.push_back(v * v);
    return out;
  }
  if (x.size() < 2) throw DataError("log returns need at least two observations");
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > 0.0)) bad.push_back(i + 1);
  if (!bad.empty())
    throw DataError("log returns need positive values; offending observation(s) " + line_list(bad),
                    bad);
  out.reserve(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double r = std::log(x[i]) - std::log(x[i - 1]);
    out.push_back(t == Transform::square_log_return ? r * r : r);
  }
  return out;
}

std::string report_json(const TestReport& r) {
  nlohmann::ordered_json j;
  j["T"] = r.T;
  j["N"] = r.N;
  j["M"] = r.M;
  j["k"] = r.k;
  j["L"] = r.L;
  j["F_hat"] = r.F_hat;
  j["W_hat"] = r.W_hat;
  j["variance_mode"] = to_string(r.variance_mode);
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["alpha"] = r.alpha;
  j["reject"] = r.reject;
  j["d_profile"] = nlohmann::ordered_json::array();
  for (const auto& p : r.d_profile) j["d_profile"].push_back({{"j", p.j}, {"u", p.u}, {"d", p.d}});
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string report_tsv(const TestReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "T\tN\tM\tk\tL\tF_hat\tW_hat\tvariance_mode\tstatistic\tp_value\talpha\treject\n";
  os << r.T << '\t' << r.N << '\t' << r.M << '\t' << r.k << '\t' << r.L << '\t' << r.F_hat << '\t'
     << r.W_hat << '\t' << to_string(r.variance_mode) << '\t' << r.statistic << '\t' << r.p_value
     << '\t' << r.alpha << '\t' << (r.reject ? "true" : "false") << "\n\n";
  os << "j\tu\td\n";
  for (const auto& p : r.d_profile) os << p.j << '\t' << p.u << '\t' << p.d << '\n';
  return os.str();
}

}  // namespace lrd
