// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#include "gdrae/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "gdrae/analysis.hpp"
#include "gdrae/autoencoder.hpp"
#include "gdrae/channel.hpp"
#include "gdrae/csv.hpp"
#include "gdrae/error.hpp"
#include "gdrae/gdr_codec.hpp"
#include "gdrae/model_io.hpp"

namespace gdrae::cli {

namespace {

namespace fs = std::filesystem;

GdrCodec validated_codec(unsigned M, unsigned m, unsigned n) {
  if (M < 2) throw UsageError("--M must be >= 2, got " + std::to_string(M));
  if (n < 1) throw UsageError("--n must be >= 1, got " + std::to_string(n));
  if (m < 1 || m > M / 2) {
    throw UsageError("invalid order --m " + std::to_string(m) +
                     ": the m-hot representation requires 1 <= m <= floor(M/2), which is " +
                     std::to_string(M / 2) + " for M=" + std::to_string(M));
  }
  try {
    return GdrCodec(M, m, n);
  } catch (const OverflowError& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> validated_grid(const RunConfig& c) {
  if (!(c.ebn0_step > 0.0)) throw UsageError("--ebn0-step must be positive");
  auto grid = db_grid(c.ebn0_min, c.ebn0_max, c.ebn0_step);
  if (grid.empty()) {
    throw UsageError("empty Eb/N0 grid: --ebn0-min " + format_shortest(c.ebn0_min) +
                     " exceeds --ebn0-max " + format_shortest(c.ebn0_max));
  }
  return grid;
}

TrainingConfig training_config(const RunConfig& c, double trained_ebn0_db) {
  TrainingConfig t;
  t.epochs = c.epochs;
  t.batch_size = c.batch_size;
  t.train_samples = c.train_samples;
  t.trained_ebn0_db = trained_ebn0_db;
  t.learning_rate = c.learning_rate;
  t.seed = c.seed;
  try {
    t.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return t;
}

// Creates the directory if needed and proves it accepts files.
void ensure_writable_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  const fs::path probe = dir / ".gdrae-write-probe";
  {
    std::ofstream out(probe);
    if (!out) throw std::runtime_error("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

std::string loss_csv(const LossHistory& h) {
  std::string s = "epoch,loss\n";
  for (std::size_t e = 0; e < h.epoch_loss.size(); ++e) {
    s += std::to_string(e + 1) + "," + format_shortest(h.epoch_loss[e]) + "\n";
  }
  return s;
}

std::string codec_label(unsigned M, unsigned m) {
  return "M=" + std::to_string(M) + ", m=" + std::to_string(m);
}

std::string plot_script(const std::string& csv, const std::string& xlabel,
                        const std::string& ylabel, bool logy,
                        const std::vector<std::pair<std::string, std::string>>& series) {
  std::ostringstream gp;
  gp << "set datafile separator ','\n";
  gp << "set key autotitle columnhead\n";
  gp << "set grid\n";
  if (logy) gp << "set logscale y\n";
  gp << "set xlabel '" << xlabel << "'\n";
  gp << "set ylabel '" << ylabel << "'\n";
  gp << "plot ";
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (k > 0) gp << ", \\\n     ";
    gp << "'" << (series[k].first.empty() ? csv : series[k].first) << "' using "
       << series[k].second;
  }
  gp << "\n";
  return gp.str();
}

std::string study_file_name(double ebn0_db) {
  return "loss_" + format_shortest(ebn0_db) + "dB.csv";
}

}  // namespace

void cmd_train(const RunConfig& c, std::ostream& out) {
  const GdrCodec codec = validated_codec(c.M, c.m, c.n);
  const TrainingConfig config = training_config(c, c.trained_ebn0_db);
  const fs::path model_path = c.model_path.empty() ? c.out_dir / "model.gdrae" : c.model_path;
  ensure_writable_dir(c.out_dir);
  if (model_path.has_parent_path()) ensure_writable_dir(model_path.parent_path());

  ModelParams model = build_model(c.M, c.n, c.seed);
  model.meta.energy_normalization = c.energy_normalization;
  const LossHistory history = train(model, codec, config);

  save_model(model, model_path);
  write_file_atomic(c.out_dir / "loss.csv", loss_csv(history));
  write_file_atomic(c.out_dir / "loss.gp",
                    plot_script("loss.csv", "epoch", "loss", true,
                                {{"", "1:2 with lines title '" + codec_label(c.M, c.m) + "'"}}));
  out << "trained " << codec_label(c.M, c.m) << ", n=" << c.n << " at "
      << format_shortest(c.trained_ebn0_db) << " dB: final loss "
      << format_shortest(history.epoch_loss.back()) << "\n";
  out << "model written to " << model_path.string() << "\n";
}

void cmd_bler(const RunConfig& c, std::ostream& out) {
  if (c.model_path.empty()) throw UsageError("bler needs --model");
  const auto grid = validated_grid(c);
  if (c.blocks_per_point < 1000) throw UsageError("--blocks must be >= 1000");
  if (c.sigma2 && !(*c.sigma2 >= 0.0)) throw UsageError("--sigma2 must be >= 0");
  if (c.shape_given) validated_codec(c.M, c.m, c.n);

  const ModelParams model = load_model(c.model_path);
  if (c.shape_given &&
      (model.meta.M != c.M || model.meta.n != c.n || model.meta.m != c.m)) {
    throw std::runtime_error("model/codec mismatch: model has M=" + std::to_string(model.meta.M) +
                             ", n=" + std::to_string(model.meta.n) +
                             ", m=" + std::to_string(model.meta.m) + " but the codec is M=" +
                             std::to_string(c.M) + ", n=" + std::to_string(c.n) +
                             ", m=" + std::to_string(c.m));
  }
  const GdrCodec codec(model.meta.M, model.meta.m, model.meta.n);
  ensure_writable_dir(c.out_dir);

  BlerOptions options;
  options.sigma2_override = c.sigma2;
  options.jobs = c.jobs;
  const auto records = bler_sweep(model, codec, grid, c.blocks_per_point, c.seed, options);

  std::string csv = "ebn0_db,blocks,errors,bler\n";
  for (const auto& r : records) {
    csv += format_shortest(r.ebn0_db) + "," + std::to_string(r.blocks_sent) + "," +
           std::to_string(r.block_errors) + "," + format_significant(r.bler, 6) + "\n";
  }
  write_file_atomic(c.out_dir / "bler.csv", csv);
  write_file_atomic(c.out_dir / "bler.gp",
                    plot_script("bler.csv", "Eb/N0 (dB)", "BLER", true,
                                {{"", "1:4 with linespoints title '" +
                                          codec_label(codec.vector_size(), codec.order()) +
                                          "'"}}));
  out << "wrote " << records.size() << " BLER points to " << (c.out_dir / "bler.csv").string()
      << "\n";
}

void cmd_capacity(const RunConfig& c, std::ostream& out) {
  const GdrCodec codec = validated_codec(c.M, c.m, c.n);
  const auto grid = validated_grid(c);
  ensure_writable_dir(c.out_dir);
  std::string csv = "ebn0_db,capacity_bits\n";
  for (const auto& p : capacity_table(codec, grid)) {
    csv += format_shortest(p.ebn0_db) + "," + format_shortest(p.capacity) + "\n";
  }
  write_file_atomic(c.out_dir / "capacity.csv", csv);
  write_file_atomic(c.out_dir / "capacity.gp",
                    plot_script("capacity.csv", "Eb/N0 (dB)", "capacity (bits/s/Hz)", false,
                                {{"", "1:2 with lines title '" + codec_label(c.M, c.m) + "'"}}));
  out << "wrote " << grid.size() << " capacity points to "
      << (c.out_dir / "capacity.csv").string() << "\n";
}

void cmd_snr_study(const RunConfig& c, std::ostream& out) {
  validated_codec(c.M, c.m, c.n);
  if (c.trained_ebn0_list.empty()) throw UsageError("snr-study needs at least one --trained-ebn0");
  std::set<std::string> names;
  for (double db : c.trained_ebn0_list) {
    if (!std::isfinite(db)) throw UsageError("--trained-ebn0 values must be finite");
    if (!names.insert(study_file_name(db)).second) {
      throw UsageError("duplicate --trained-ebn0 " + format_shortest(db));
    }
  }
  const TrainingConfig config = training_config(c, 0.0);
  ensure_writable_dir(c.out_dir);

  const auto histories = trained_snr_study(c.M, c.m, c.n, c.trained_ebn0_list, config, c.jobs);

  std::string summary = "trained_ebn0_db,final_loss\n";
  std::vector<std::pair<std::string, std::string>> series;
  for (std::size_t k = 0; k < histories.size(); ++k) {
    const std::string name = study_file_name(c.trained_ebn0_list[k]);
    write_file_atomic(c.out_dir / name, loss_csv(histories[k]));
    summary += format_shortest(c.trained_ebn0_list[k]) + "," +
               format_shortest(histories[k].epoch_loss.back()) + "\n";
    series.emplace_back(name, "1:2 with lines title 'trained at " +
                                  format_shortest(c.trained_ebn0_list[k]) + " dB'");
  }
  write_file_atomic(c.out_dir / "summary.csv", summary);
  write_file_atomic(c.out_dir / "snr_study.gp",
                    plot_script("", "epoch", "loss", true, series));
  out << "trained " << histories.size() << " models; summary written to "
      << (c.out_dir / "summary.csv").string() << "\n";
}

void cmd_params(const RunConfig& c, std::ostream& out) {
  if (c.M < 2) throw UsageError("--M must be >= 2, got " + std::to_string(c.M));
  if (c.n < 1) throw UsageError("--n must be >= 1, got " + std::to_string(c.n));
  const ParamCounts p = count_params(build_model(c.M, c.n, c.seed));
  out << "dense_block,normalization,relu_layer,softmax_layer,total\n";
  out << p.dense_block << "," << p.normalization << "," << p.relu_layer << ","
      << p.softmax_layer << "," << p.total << "\n";
}

void cmd_snr_moments(const RunConfig& c, std::ostream& out) {
  if (!c.identity_map && c.model_path.empty()) {
    throw UsageError("snr-moments needs --model or --identity-map");
  }
  if (c.identity_map && !c.model_path.empty()) {
    throw UsageError("--model and --identity-map are mutually exclusive");
  }
  const double sigma2 = c.sigma2.value_or(1.0);
  if (!(sigma2 >= 0.0)) throw UsageError("--sigma2 must be >= 0");
  if (c.moment_samples < 10000) throw UsageError("--samples must be >= 10000");

  std::size_t expected = c.n;
  LinearReceiverMap map;
  if (c.identity_map) {
    if (c.n < 1) throw UsageError("--n must be >= 1");
    map.A = Matrix::identity(c.n);
  } else {
    const ModelParams model = load_model(c.model_path);
    map = receiver_linear_map(model);
    expected = model.meta.n;
  }
  std::vector<double> x = c.x;
  if (x.size() == 1) x.assign(expected, c.x.front());
  if (x.size() != expected) {
    throw UsageError("--x has " + std::to_string(c.x.size()) + " values, expected n=" +
                     std::to_string(expected) + " (or a single value to broadcast)");
  }
  ensure_writable_dir(c.out_dir);

  RngStream rng(c.seed, streams::kMomentSampling);
  const MomentReport report = snr_moments_mc(map, x, sigma2, c.moment_samples, rng);
  std::string csv = "i,e_u,d_u,e_exp,d_exp,emp_e_exp,emp_d_exp,n_samples\n";
  for (std::size_t i = 0; i < report.elements.size(); ++i) {
    const auto& e = report.elements[i];
    csv += std::to_string(i) + "," + format_shortest(e.e_u) + "," + format_shortest(e.d_u) +
           "," + format_shortest(e.e_exp) + "," + format_shortest(e.d_exp) + "," +
           format_shortest(e.emp_e_exp.value_or(std::nan(""))) + "," +
           format_shortest(e.emp_d_exp.value_or(std::nan(""))) + "," +
           std::to_string(report.samples - e.overflowed) + "\n";
  }
  write_file_atomic(c.out_dir / "moments.csv", csv);
  write_file_atomic(c.out_dir / "moments.gp",
                    plot_script("moments.csv", "element i", "E e^{u_i}", false,
                                {{"", "1:4 with points title 'closed form'"},
                                 {"moments.csv", "1:6 with points title 'Monte Carlo'"}}));
  out << "wrote " << report.elements.size() << " elements to "
      << (c.out_dir / "moments.csv").string() << "\n";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"End-to-end autoencoder communication simulator with m-hot message codec",
               "gdrae"};
  app.require_subcommand(1);

  auto add_shape = [&c](CLI::App* sub, bool with_m) {
    sub->add_option("--M", c.M, "vector size M")->capture_default_str();
    if (with_m) sub->add_option("--m", c.m, "order m (active entries)")->capture_default_str();
    sub->add_option("--n", c.n, "channel uses per block")->capture_default_str();
  };
  auto add_seed = [&c](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  };
  auto add_out = [&c](CLI::App* sub) {
    sub->add_option("--out-dir", c.out_dir, "output directory")->capture_default_str();
  };
  auto add_training = [&c](CLI::App* sub) {
    sub->add_option("--epochs", c.epochs, "training epochs")->capture_default_str();
    sub->add_option("--batch-size", c.batch_size, "mini-batch size")->capture_default_str();
    sub->add_option("--lr", c.learning_rate, "Adam learning rate")->capture_default_str();
    sub->add_option("--train-samples", c.train_samples, "training messages per epoch")
        ->capture_default_str();
  };
  auto add_grid = [&c](CLI::App* sub) {
    sub->add_option("--ebn0-min", c.ebn0_min, "first Eb/N0 grid point (dB)")
        ->capture_default_str();
    sub->add_option("--ebn0-max", c.ebn0_max, "last Eb/N0 grid point (dB)")
        ->capture_default_str();
    sub->add_option("--ebn0-step", c.ebn0_step, "grid step (dB)")->capture_default_str();
  };

  auto* train = app.add_subcommand("train", "train an autoencoder; writes model and loss.csv");
  add_shape(train, true);
  train->add_option("--trained-ebn0", c.trained_ebn0_db, "training Eb/N0 (dB)")
      ->capture_default_str();
  add_training(train);
  add_seed(train);
  train->add_option("--model", c.model_path, "model output path (default <out-dir>/model.gdrae)");
  train->add_flag("--energy-norm", c.energy_normalization,
                  "scale each transmitted block to energy n after batch normalization");
  add_out(train);

  auto* bler = app.add_subcommand("bler", "Monte Carlo BLER sweep; writes bler.csv");
  CLI::Option* opt_M = bler->add_option("--M", c.M, "expected vector size (checked against model)");
  CLI::Option* opt_m = bler->add_option("--m", c.m, "expected order (checked against model)");
  CLI::Option* opt_n = bler->add_option("--n", c.n, "expected channel uses (checked against model)");
  bler->add_option("--model", c.model_path, "trained model file")->required();
  add_grid(bler);
  bler->add_option("--blocks,--test-samples", c.blocks_per_point, "blocks per grid point")
      ->capture_default_str();
  bler->add_option("--sigma2", c.sigma2, "override the noise variance at every point");
  bler->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
  add_seed(bler);
  add_out(bler);

  auto* cap = app.add_subcommand("capacity", "capacity curve; writes capacity.csv");
  add_shape(cap, true);
  add_grid(cap);
  add_out(cap);

  auto* study = app.add_subcommand("snr-study", "train at several Eb/N0; writes loss_<snr>dB.csv");
  add_shape(study, true);
  study->add_option("--trained-ebn0", c.trained_ebn0_list, "training Eb/N0 (dB), repeatable")
      ->delimiter(',')
      ->capture_default_str();
  add_training(study);
  add_seed(study);
  study->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
  add_out(study);

  auto* params = app.add_subcommand("params", "print trainable parameter counts");
  add_shape(params, false);

  auto* moments = app.add_subcommand("snr-moments",
                                     "receiver moments of u = A(x+n) and e^u; writes moments.csv");
  moments->add_option("--model", c.model_path, "model whose receiver weights form A");
  moments->add_flag("--identity-map", c.identity_map, "use A = I_n");
  moments->add_option("--n", c.n, "dimension for --identity-map")->capture_default_str();
  moments->add_option("--x", c.x, "transmitted vector, comma-separated or one value to broadcast")
      ->delimiter(',')
      ->capture_default_str();
  moments->add_option("--sigma2", c.sigma2, "noise variance (default 1)");
  moments->add_option("--samples", c.moment_samples, "Monte Carlo samples")->capture_default_str();
  add_seed(moments);
  add_out(moments);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help arrives as CallForHelp from the subcommand parser.
    if (e.get_exit_code() == 0) {
      for (auto* sub : app.get_subcommands()) out << sub->help();
      if (app.get_subcommands().empty()) out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  c.shape_given = opt_M->count() + opt_m->count() + opt_n->count() > 0;
  try {
    if (train->parsed()) {
      c.subcommand = "train";
      cmd_train(c, out);
    } else if (bler->parsed()) {
      c.subcommand = "bler";
      cmd_bler(c, out);
    } else if (cap->parsed()) {
      c.subcommand = "capacity";
      cmd_capacity(c, out);
    } else if (study->parsed()) {
      c.subcommand = "snr-study";
      cmd_snr_study(c, out);
    } else if (params->parsed()) {
      c.subcommand = "params";
      cmd_params(c, out);
    } else if (moments->parsed()) {
      c.subcommand = "snr-moments";
      cmd_snr_moments(c, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace gdrae::cli
