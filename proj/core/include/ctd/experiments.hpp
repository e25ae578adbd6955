#pragma once

#include "ctd/config.hpp"
#include "ctd/verify.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ctd {

struct ResultRow {
  std::string experiment;
  std::string surface;
  std::string profile;
  std::optional<double> eps;
  std::string quantity;
  double value = 0.0;
};

struct RunResult {
  RunConfig config;
  std::vector<ResultRow> rows;
  std::vector<ResidualReport> reports;
  bool pass = false;
  std::vector<std::string> failures;
};

RunResult run_experiment(const RunConfig& cfg);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::string results_csv(const RunResult& result);
std::string summary_json(const RunResult& result);

// Writes results.csv and summary.json into dir, creating it if needed.
void write_outputs(const RunResult& result, const std::string& dir);

// Every quantity name the experiments can emit.
std::vector<std::string> quantity_names();

} // namespace ctd
