#include "hbl/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hbl/error.hpp"

namespace hbl {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    out.push_back(trim(std::string_view(line).substr(begin, comma - begin)));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

bool parse_double(const std::string& text, double& value) {
  if (text == "inf" || text == "+inf") {
    value = HUGE_VAL;
    return true;
  }
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ec == std::errc() ? ptr : buf.data());
}

std::vector<SurvivalRecord> parse_survival_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<SurvivalRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty()) continue;
    if (!header_seen) {
      const auto cols = split_commas(body);
      if (cols.size() != 2 || cols[0] != "time" || cols[1] != "status") {
        throw ParseError(line_no, "expected header 'time,status'");
      }
      header_seen = true;
      continue;
    }
    const auto cols = split_commas(body);
    if (cols.size() != 2) throw ParseError(line_no, "expected two columns");
    double time = 0.0;
    if (!parse_double(cols[0], time) || !std::isfinite(time)) {
      throw ParseError(line_no, "invalid time '" + cols[0] + "'");
    }
    if (time <= 0.0) throw ParseError(line_no, "time must be positive");
    if (cols[1] != "0" && cols[1] != "1") {
      throw ParseError(line_no, "status must be 0 or 1, got '" + cols[1] + "'");
    }
    records.push_back({time, cols[1] == "1" ? Status::event : Status::censored});
  }
  if (!header_seen) throw InvalidInput("survival data file is empty");
  if (records.empty()) throw InvalidInput("survival data file has no records");
  return records;
}

std::vector<SurvivalRecord> read_survival_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return parse_survival_csv(in);
}

const std::string* BandExport::find(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

BandExport make_band_export(const ConfidenceBand& band, const EstimatePair& estimate,
                            std::uint64_t seed) {
  BandExport out;
  out.metadata.emplace_back("method", std::string(to_string(band.method)));
  out.metadata.emplace_back("theta", format_real(band.theta));
  out.metadata.emplace_back("s_start", format_real(band.s.start));
  out.metadata.emplace_back("s_end", format_real(band.s.end));
  out.metadata.emplace_back("seed", std::to_string(seed));
  const auto& cv = band.critical;
  const std::pair<const char*, const std::optional<double>*> named[] = {
      {"t1", &cv.t1}, {"t2", &cv.t2}, {"t3", &cv.t3}, {"k", &cv.k}, {"c1", &cv.c1}, {"c2", &cv.c2}};
  for (const auto& [name, value] : named) {
    if (value->has_value()) out.metadata.emplace_back(name, format_real(**value));
  }

  std::vector<double> xs{band.s.start};
  for (const auto* edge : {&band.lower, &band.upper}) {
    for (double b : edge->breakpoints()) xs.push_back(b);
  }
  xs.push_back(band.s.end);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (double x : xs) out.rows.push_back({x, estimate.a_hat(x), band.lower(x), band.upper(x)});
  return out;
}

void write_band_csv(std::ostream& out, const BandExport& band) {
  for (const auto& [k, v] : band.metadata) out << "# " << k << '=' << v << '\n';
  out << "x,a_hat,lower,upper\n";
  for (const auto& r : band.rows) {
    out << format_real(r.x) << ',' << format_real(r.a_hat) << ',' << format_real(r.lower) << ','
        << format_real(r.upper) << '\n';
  }
}

BandExport parse_band_csv(std::istream& in) {
  BandExport out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      const std::string meta = trim(std::string_view(body).substr(1));
      const auto eq = meta.find('=');
      if (eq == std::string::npos) throw ParseError(line_no, "metadata needs key=value");
      out.metadata.emplace_back(meta.substr(0, eq), meta.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      if (body != "x,a_hat,lower,upper") throw ParseError(line_no, "expected band header");
      header_seen = true;
      continue;
    }
    const auto cols = split_commas(body);
    if (cols.size() != 4) throw ParseError(line_no, "expected four columns");
    BandRow row{};
    double* fields[] = {&row.x, &row.a_hat, &row.lower, &row.upper};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!parse_double(cols[i], *fields[i])) throw ParseError(line_no, "invalid number");
    }
    if (!out.rows.empty() && !(row.x > out.rows.back().x)) {
      throw ParseError(line_no, "x must be strictly increasing");
    }
    out.rows.push_back(row);
  }
  if (out.rows.size() < 2) throw InvalidInput("band export needs at least two rows");
  return out;
}

std::pair<StepFunction, StepFunction> band_edges(const BandExport& band) {
  const TimeInterval s(band.rows.front().x, band.rows.back().x);
  std::vector<double> xs;
  std::vector<double> lows;
  std::vector<double> highs;
  for (std::size_t i = 1; i < band.rows.size(); ++i) {
    xs.push_back(band.rows[i].x);
    lows.push_back(band.rows[i].lower);
    highs.push_back(band.rows[i].upper);
  }
  StepFunction lower(s, band.rows.front().lower, xs, std::move(lows));
  StepFunction upper(s, band.rows.front().upper, std::move(xs), std::move(highs));
  return {std::move(lower), std::move(upper)};
}

void write_coverage_csv(std::ostream& out, const CoverageTable& table,
                        const ExperimentConfig& config) {
  out << "# seed=" << config.master_seed << '\n';
  out << "# iterations=" << config.iterations << '\n';
  out << "# resamples=" << config.b_resamples << '\n';
  out << "# studentize="
      << (config.studentization == Studentization::replicate ? "replicate" : "original") << '\n';
  out << "# theta=" << format_real(config.theta) << '\n';
  out << "# s_start=" << format_real(config.s.start) << '\n';
  out << "# s_end=" << format_real(config.s.end) << '\n';
  out << "# termination_mean=" << format_real(config.termination_mean) << '\n';
  out << "# bridge_paths=" << config.bridge_paths << '\n';
  out << "# bridge_cells=" << config.bridge_cells << '\n';
  out << "alpha,y0,method,left_pct,right_pct,coverage_pct,degenerate_pct\n";
  char buf[160];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%s,%.2f,%.2f,%.2f,%.2f\n",
                  std::string(to_string(row.alpha)).c_str(), row.y0,
                  std::string(to_string(row.method)).c_str(), row.left_pct(), row.right_pct(),
                  row.coverage_pct(), row.degenerate_pct());
    out << buf;
  }
}

}  // namespace hbl
