#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hbl/bands.hpp"
#include "hbl/process.hpp"
#include "hbl/simulation.hpp"

namespace hbl {

/// Reads `time,status` CSV (status 1 = event, 0 = censored).
std::vector<SurvivalRecord> parse_survival_csv(std::istream& in);
std::vector<SurvivalRecord> read_survival_csv(const std::filesystem::path& path);

struct BandRow {
  double x;
  double a_hat;
  double lower;
  double upper;
};

struct BandExport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<BandRow> rows;

  const std::string* find(const std::string& key) const;
};

/// Rows at S.start, every band breakpoint, and S.end.
BandExport make_band_export(const ConfidenceBand& band, const EstimatePair& estimate,
                            std::uint64_t seed);

void write_band_csv(std::ostream& out, const BandExport& band);
BandExport parse_band_csv(std::istream& in);

/// Rebuilds lower and upper edges from an export.
std::pair<StepFunction, StepFunction> band_edges(const BandExport& band);

void write_coverage_csv(std::ostream& out, const CoverageTable& table,
                        const ExperimentConfig& config);

/// Shortest decimal representation that round-trips exactly.
std::string format_real(double value);

}  // namespace hbl
