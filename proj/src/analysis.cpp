// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#include "gdrae/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "gdrae/channel.hpp"
#include "gdrae/error.hpp"

namespace gdrae {

namespace {

constexpr std::uint64_t kBlerChunk = 4096;

// Runs task(k) for k in [0, count) on up to `jobs` threads. The first
// exception thrown by any task is rethrown here.
template <typename Task>
void run_indexed(std::size_t count, unsigned jobs, Task task) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (jobs <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          task(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

bool model_finite(const ModelParams& m) {
  auto finite = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return m.tx_dense1.weights.all_finite() && finite(m.tx_dense1.bias) &&
         m.tx_dense2.weights.all_finite() && finite(m.tx_dense2.bias) && finite(m.norm.gamma) &&
         finite(m.norm.beta) && finite(m.norm.running_mean) && finite(m.norm.running_var) &&
         m.rx_dense.weights.all_finite() && finite(m.rx_dense.bias) &&
         m.rx_out.weights.all_finite() && finite(m.rx_out.bias);
}

BlerRecord simulate_point(const ModelParams& model, const GdrCodec& codec, double ebn0_db,
                          double sigma2, std::uint64_t blocks, RngStream& rng) {
  BlerRecord rec;
  rec.ebn0_db = ebn0_db;
  rec.blocks_sent = blocks;
  std::vector<MessageIndex> sent;
  for (std::uint64_t done = 0; done < blocks;) {
    const std::uint64_t rows = std::min(kBlerChunk, blocks - done);
    Matrix messages(rows, codec.vector_size());
    sent.resize(rows);
    for (std::uint64_t r = 0; r < rows; ++r) {
      sent[r] = rng.uniform_index(codec.num_messages());
      codec.encode_into(sent[r], messages.row(r));
    }
    Matrix signal = transmit(model, messages);
    add_awgn(signal, sigma2, rng);
    const Matrix probs = receive(model, signal);
    for (std::uint64_t r = 0; r < rows; ++r) {
      if (codec.decode(probs.row(r)) != sent[r]) ++rec.block_errors;
    }
    done += rows;
  }
  rec.bler = static_cast<double>(rec.block_errors) / static_cast<double>(rec.blocks_sent);
  return rec;
}

}  // namespace

std::vector<double> db_grid(double min_db, double max_db, double step_db) {
  if (!(step_db > 0.0)) throw DomainError("grid step must be positive");
  std::vector<double> grid;
  if (min_db > max_db) return grid;
  const double span = (max_db - min_db) / step_db;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  grid.reserve(count);
  for (std::size_t k = 0; k < count; ++k) grid.push_back(min_db + static_cast<double>(k) * step_db);
  return grid;
}

std::vector<BlerRecord> bler_sweep(const ModelParams& model, const GdrCodec& codec,
                                   std::span<const double> ebn0_grid_db,
                                   std::uint64_t blocks_per_point, std::uint64_t seed,
                                   const BlerOptions& options) {
  if (blocks_per_point < 1000) {
    throw DomainError("bler_sweep: blocks per point must be >= 1000, got " +
                      std::to_string(blocks_per_point));
  }
  if (codec.vector_size() != model.meta.M || codec.channel_uses() != model.meta.n) {
    throw ShapeError("bler_sweep: model (M=" + std::to_string(model.meta.M) +
                     ", n=" + std::to_string(model.meta.n) + ") does not match codec (M=" +
                     std::to_string(codec.vector_size()) +
                     ", n=" + std::to_string(codec.channel_uses()) + ")");
  }
  if (!model_finite(model)) throw StateError("bler_sweep: model has non-finite parameters");
  if (options.sigma2_override && !(*options.sigma2_override >= 0.0)) {
    throw DomainError("bler_sweep: sigma2 override must be >= 0");
  }

  std::vector<BlerRecord> records(ebn0_grid_db.size());
  run_indexed(records.size(), options.jobs, [&](std::size_t k) {
    const double sigma2 = options.sigma2_override
                              ? *options.sigma2_override
                              : noise_variance(codec.data_rate(), ebn0_grid_db[k]);
    RngStream rng(seed, streams::kBlerPointBase + k);
    records[k] = simulate_point(model, codec, ebn0_grid_db[k], sigma2, blocks_per_point, rng);
  });
  return records;
}

std::pair<double, double> wilson_interval95(std::uint64_t errors, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double centre = (p + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<LossHistory> trained_snr_study(unsigned M, unsigned m, unsigned n,
                                           std::span<const double> trained_ebn0_db,
                                           const TrainingConfig& config, unsigned jobs) {
  if (trained_ebn0_db.empty()) throw DomainError("trained_snr_study: empty Eb/N0 list");
  config.validate();
  const GdrCodec codec(M, m, n);
  std::vector<LossHistory> histories(trained_ebn0_db.size());
  run_indexed(histories.size(), jobs, [&](std::size_t k) {
    ModelParams model = build_model(M, n, config.seed);
    TrainingConfig cell = config;
    cell.trained_ebn0_db = trained_ebn0_db[k];
    histories[k] = train(model, codec, cell);
  });
  return histories;
}

std::vector<CapacityPoint> capacity_table(const GdrCodec& codec,
                                          std::span<const double> ebn0_grid_db) {
  if (ebn0_grid_db.empty()) throw DomainError("capacity_table: empty grid");
  std::vector<CapacityPoint> table;
  table.reserve(ebn0_grid_db.size());
  for (double db : ebn0_grid_db) table.push_back({db, capacity(codec, db_to_linear(db))});
  return table;
}

LinearReceiverMap receiver_linear_map(const ModelParams& model) {
  return {model.rx_dense.weights};
}

MomentReport snr_moments(const LinearReceiverMap& map, std::span<const double> x,
                         double sigma2) {
  if (x.size() != map.A.cols()) {
    throw ShapeError("snr_moments: x has length " + std::to_string(x.size()) + ", map is " +
                     map.A.shape_string());
  }
  if (!(sigma2 >= 0.0)) throw DomainError("snr_moments: sigma2 must be >= 0");
  MomentReport report;
  report.elements.resize(map.A.rows());
  for (std::size_t i = 0; i < map.A.rows(); ++i) {
    const auto a = map.A.row(i);
    double ax = 0.0;
    double aa = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      ax += a[j] * x[j];
      aa += a[j] * a[j];
    }
    const double var = sigma2 * aa;
    auto& e = report.elements[i];
    e.e_u = ax;
    e.d_u = var;
    e.e_exp = std::exp(ax + var / 2.0);
    e.d_exp = std::expm1(var) * std::exp(2.0 * ax + var);
  }
  return report;
}

MomentReport snr_moments_mc(const LinearReceiverMap& map, std::span<const double> x,
                            double sigma2, std::uint64_t samples, RngStream& rng) {
  if (samples < 10000) {
    throw DomainError("snr_moments_mc: need at least 10^4 samples, got " +
                      std::to_string(samples));
  }
  MomentReport report = snr_moments(map, x, sigma2);
  report.samples = samples;

  const std::size_t rows = map.A.rows();
  const std::size_t dims = map.A.cols();
  const double sigma = std::sqrt(sigma2);
  // Welford accumulators per element.
  std::vector<std::uint64_t> count(rows, 0);
  std::vector<double> mean(rows, 0.0);
  std::vector<double> m2(rows, 0.0);
  std::vector<double> received(dims);
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < dims; ++j) {
      received[j] = sigma2 == 0.0 ? x[j] : x[j] + sigma * rng.normal();
    }
    for (std::size_t i = 0; i < rows; ++i) {
      const auto a = map.A.row(i);
      double u = 0.0;
      for (std::size_t j = 0; j < dims; ++j) u += a[j] * received[j];
      const double v = std::exp(u);
      if (!std::isfinite(v)) {
        ++report.elements[i].overflowed;
        continue;
      }
      const double delta = v - mean[i];
      mean[i] += delta / static_cast<double>(++count[i]);
      m2[i] += delta * (v - mean[i]);
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    auto& e = report.elements[i];
    if (count[i] == 0) {
      e.emp_e_exp = std::nan("");
      e.emp_d_exp = std::nan("");
      continue;
    }
    e.emp_e_exp = mean[i];
    e.emp_d_exp = count[i] > 1 ? m2[i] / static_cast<double>(count[i] - 1) : 0.0;
  }
  return report;
}

}  // namespace gdrae
