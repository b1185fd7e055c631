// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdrae::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Invalid flags or flag combinations. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  unsigned M = 8;
  unsigned m = 1;
  unsigned n = 7;
  // Set when the flag was given explicitly (bler checks them against the model).
  bool shape_given = false;
  double trained_ebn0_db = 0.0;
  std::vector<double> trained_ebn0_list = {-20.0, 0.0, 20.0};
  int epochs = 150;
  std::size_t batch_size = 45;
  double learning_rate = 1e-3;
  std::size_t train_samples = 20000;
  std::uint64_t blocks_per_point = 100000;
  double ebn0_min = -4.0;
  double ebn0_max = 8.0;
  double ebn0_step = 1.0;
  std::optional<double> sigma2;
  std::uint64_t seed = 1;
  std::filesystem::path model_path;
  std::filesystem::path out_dir = ".";
  bool energy_normalization = false;
  bool identity_map = false;
  std::vector<double> x = {0.0};
  std::uint64_t moment_samples = 1000000;
  unsigned jobs = 1;
};

// Each command validates the whole configuration (throwing UsageError) before
// doing any work, and writes its outputs atomically into config.out_dir.
void cmd_train(const RunConfig& config, std::ostream& out);
void cmd_bler(const RunConfig& config, std::ostream& out);
void cmd_capacity(const RunConfig& config, std::ostream& out);
void cmd_snr_study(const RunConfig& config, std::ostream& out);
void cmd_params(const RunConfig& config, std::ostream& out);
void cmd_snr_moments(const RunConfig& config, std::ostream& out);

// Parses `args` (without the program name) and runs the subcommand. Returns
// the process exit code; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gdrae::cli
