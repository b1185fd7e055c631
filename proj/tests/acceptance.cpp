// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gdrae/analysis.hpp"
#include "gdrae/cli.hpp"
#include "gdrae/csv.hpp"
#include "gdrae/gdr_codec.hpp"
#include "grad_check.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace gdrae;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

fs::path work_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gdrae_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string run_cli_checked(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  if (code != 0) {
    std::string joined;
    for (const auto& a : args) joined += " " + a;
    throw std::runtime_error("gdrae" + joined + " exited " + std::to_string(code) + ": " +
                             err.str());
  }
  return out.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(path));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream row(line);
    for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

// ebn0_db -> (blocks, errors) from a bler.csv.
std::map<double, std::pair<std::uint64_t, std::uint64_t>> bler_rows(const fs::path& csv) {
  std::map<double, std::pair<std::uint64_t, std::uint64_t>> result;
  for (const auto& f : read_csv(csv))
    result[std::stod(f.at(0))] = {std::stoull(f.at(1)), std::stoull(f.at(2))};
  return result;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Outcome parameter_counts() {
  const std::map<unsigned, std::string> expected = {
      {8, "135,14,64,72,285"}, {16, "391,14,128,272,805"}, {64, "4615,14,512,4160,9301"}};
  for (const auto& [M, row] : expected) {
    const std::string out = run_cli_checked({"params", "--M", std::to_string(M), "--n", "7"});
    const std::string got = out.substr(out.find('\n') + 1);
    if (got != row + "\n") return {false, "M=" + std::to_string(M) + " printed " + got};
  }
  return {true, "M=8,16,64 match"};
}

Outcome matched_rate() {
  for (auto [M, m] : {std::pair{64u, 1u}, {16u, 2u}, {8u, 4u}}) {
    const RateFraction r = GdrCodec(M, m, 7).data_rate_exact();
    if (r.numerator * 7 != r.denominator * 6)
      return {false, "(" + std::to_string(M) + "," + std::to_string(m) + ") rate " +
                         std::to_string(r.numerator) + "/" + std::to_string(r.denominator)};
  }
  return {true, "all three codecs carry 6 bits in 7 uses"};
}

Outcome capacity_curves() {
  const fs::path a = work_dir("capacity_16_1");
  const fs::path b = work_dir("capacity_8_2");
  run_cli_checked({"capacity", "--M", "16", "--m", "1", "--out-dir", a.string()});
  run_cli_checked({"capacity", "--M", "8", "--m", "2", "--out-dir", b.string()});
  if (read_file(a / "capacity.csv") != read_file(b / "capacity.csv"))
    return {false, "(16,1) and (8,2) tables differ"};
  double prev = 0.0;
  for (unsigned m = 1; m <= 4; ++m) {
    const fs::path dir = work_dir("capacity_8_" + std::to_string(m) + "_0dB");
    run_cli_checked({"capacity", "--M", "8", "--m", std::to_string(m), "--ebn0-min", "0",
                     "--ebn0-max", "0", "--out-dir", dir.string()});
    const double c = std::stod(read_csv(dir / "capacity.csv").at(0).at(1));
    const double k = static_cast<double>(m + 2);
    const double ref = std::log2(1.0 + 2.0 * k / 7.0);
    if (std::abs(c - ref) > 1e-12 || c <= prev)
      return {false, "m=" + std::to_string(m) + " capacity " + fmt(c)};
    prev = c;
  }
  return {true, "tables identical; 0 dB values increase and match to 1e-12"};
}

Outcome gradient_check() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GdrCodec codec(4, 1, 3);
    const ModelParams model = testkit::random_model(4, 3, seed);
    RngStream rng(seed, 77);
    const Matrix s = testkit::random_targets(codec, 5, rng);
    Matrix noise(5, 3);
    for (double& v : noise.data()) v = 0.5 * rng.normal();
    const auto g = testkit::check_gradients(model, s, noise);
    if (g.checked != count_params(model).total) return {false, "not every parameter checked"};
    worst = std::max(worst, g.worst_relative);
  }
  return {worst < 1e-5, "worst relative error " + fmt(worst)};
}

Outcome codec_bijection() {
  std::uint64_t checked = 0;
  for (unsigned M = 2; M <= 16; ++M) {
    for (unsigned m = 1; m <= M / 2; ++m) {
      const auto subsets = oracle::all_subsets(M, m);
      for (std::uint64_t r = 0; r < subsets.size(); ++r) {
        const auto s = unrank_subset(r, M, m);
        if (s != subsets[r] || rank_subset(s, M, m) != r) return {false, "rank/unrank mismatch"};
      }
      const GdrCodec codec(M, m, 7);
      for (MessageIndex k = 0; k < codec.num_messages(); ++k, ++checked) {
        const auto v = codec.encode(k);
        if (codec.decode(v) != k) return {false, "decode(encode) mismatch"};
      }
    }
  }
  return {true, std::to_string(checked) + " messages round-tripped"};
}

// Trains the default (8,1) model and sweeps 10^5 blocks per point.
void bler_reproduction_run(const fs::path& dir) {
  run_cli_checked({"train", "--M", "8", "--m", "1", "--n", "7", "--out-dir", dir.string()});
  run_cli_checked({"bler", "--model", (dir / "model.gdrae").string(), "--blocks", "100000",
                   "--out-dir", dir.string()});
}

Outcome bler_reproduction(const fs::path& dir) {
  bler_reproduction_run(dir);
  const auto rows = bler_rows(dir / "bler.csv");
  const auto at = [&](double db) {
    const auto& [blocks, errors] = rows.at(db);
    return static_cast<double>(errors) / static_cast<double>(blocks);
  };
  const double b0 = at(0.0), b4 = at(4.0);
  return {b4 <= 1e-2 && b0 <= 1e-1, "BLER " + fmt(b0) + " at 0 dB, " + fmt(b4) + " at 4 dB"};
}

Outcome ordering_at_matched_rate() {
  std::map<std::string, std::map<double, std::pair<std::uint64_t, std::uint64_t>>> results;
  for (auto [M, m] : {std::pair{8u, 4u}, {64u, 1u}}) {
    const std::string tag = std::to_string(M) + "_" + std::to_string(m);
    const fs::path dir = work_dir("ordering_" + tag);
    run_cli_checked({"train", "--M", std::to_string(M), "--m", std::to_string(m), "--n", "7",
                     "--out-dir", dir.string()});
    run_cli_checked({"bler", "--model", (dir / "model.gdrae").string(), "--ebn0-min", "2",
                     "--ebn0-max", "4", "--ebn0-step", "2", "--blocks", "100000", "--out-dir",
                     dir.string()});
    results[tag] = bler_rows(dir / "bler.csv");
  }
  bool pass = true;
  std::string detail;
  for (double db : {2.0, 4.0}) {
    const auto [gb, ge] = results["8_4"].at(db);
    const auto [ob, oe] = results["64_1"].at(db);
    const double gdr = static_cast<double>(ge) / static_cast<double>(gb);
    const double one_hot = static_cast<double>(oe) / static_cast<double>(ob);
    const bool ok = gdr <= one_hot ||
                    wilson_interval95(ge, gb).first <= wilson_interval95(oe, ob).second;
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += fmt(db) + " dB: (8,4) " + fmt(gdr) + " vs (64,1) " + fmt(one_hot);
  }
  return {pass, detail};
}

void trend_run(const fs::path& dir) {
  run_cli_checked({"snr-study", "--M", "8", "--m", "1", "--n", "7", "--trained-ebn0", "-20",
                   "--trained-ebn0", "0", "--trained-ebn0", "20", "--out-dir", dir.string()});
}

Outcome trained_snr_trend(const fs::path& dir) {
  trend_run(dir);
  const auto rows = read_csv(dir / "summary.csv");
  if (rows.size() != 3) return {false, "summary has " + std::to_string(rows.size()) + " rows"};
  const double a = std::stod(rows[0][1]), b = std::stod(rows[1][1]), c = std::stod(rows[2][1]);
  return {a > b && b > c, "final losses " + fmt(a) + ", " + fmt(b) + ", " + fmt(c)};
}

Outcome moment_analysis() {
  Matrix a(1, 7);
  a(0, 0) = 1.0;
  RngStream rng(1, streams::kMomentSampling);
  const auto r = snr_moments_mc({a}, std::vector<double>(7, 0.0), 1.0, 1000000, rng);
  const auto& e = r.elements.at(0);
  const double mean_err = std::abs(*e.emp_e_exp / e.e_exp - 1.0);
  const double var_err = std::abs(*e.emp_d_exp / e.d_exp - 1.0);
  const bool closed = std::abs(e.e_exp - 1.64872) < 5e-6 && std::abs(e.d_exp - 4.67077) < 5e-6;
  return {closed && mean_err < 0.01 && var_err < 0.10,
          "mean off by " + fmt(100 * mean_err) + "%, variance off by " + fmt(100 * var_err) + "%"};
}

Outcome determinism(const fs::path& bler_dir, const fs::path& trend_dir) {
  const fs::path bler_again = work_dir("bler_reproduction_repeat");
  const fs::path trend_again = work_dir("trend_repeat");
  bler_reproduction_run(bler_again);
  trend_run(trend_again);
  for (const auto& [first, second] : {std::pair{bler_dir, bler_again}, {trend_dir, trend_again}}) {
    for (const auto& entry : fs::directory_iterator(first)) {
      if (entry.path().extension() != ".csv") continue;
      const fs::path twin = second / entry.path().filename();
      if (!fs::exists(twin) || read_file(entry.path()) != read_file(twin))
        return {false, entry.path().filename().string() + " differs between runs"};
    }
  }
  return {true, "repeated runs are byte-identical"};
}

}  // namespace

int main() {
  const fs::path bler_dir = work_dir("bler_reproduction");
  const fs::path trend_dir = work_dir("trend");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"parameter counts", parameter_counts},
      {"matched data rate", matched_rate},
      {"capacity curves", capacity_curves},
      {"gradient correctness", gradient_check},
      {"codec bijection", codec_bijection},
      {"BLER reproduction", [&] { return bler_reproduction(bler_dir); }},
      {"GDR vs one-hot ordering", ordering_at_matched_rate},
      {"trained-SNR trend", [&] { return trained_snr_trend(trend_dir); }},
      {"moment analysis", moment_analysis},
      {"determinism", [&] { return determinism(bler_dir, trend_dir); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << " (" << criteria[k].first
              << "): " << o.detail << " [" << fmt(seconds) << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
