// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#include "gdrae/model_io.hpp"

#include <charconv>
#include <sstream>
#include <string_view>
#include <vector>

#include "gdrae/csv.hpp"
#include "gdrae/error.hpp"

namespace gdrae {

namespace {

constexpr std::string_view kMagic = "GDRAE1";

void write_values(std::ostringstream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ' ';
    out << format_significant(values[i], 17);
  }
  out << '\n';
}

void write_dense(std::ostringstream& out, std::string_view name, const DenseLayer& layer) {
  out << "layer " << name << " dense " << to_string(layer.activation) << '\n';
  out << "weights " << layer.weights.rows() << ' ' << layer.weights.cols() << '\n';
  for (std::size_t r = 0; r < layer.weights.rows(); ++r) write_values(out, layer.weights.row(r));
  out << "bias " << layer.bias.size() << '\n';
  write_values(out, layer.bias);
}

void write_vector(std::ostringstream& out, std::string_view name,
                  const std::vector<double>& v, bool trainable) {
  out << name << ' ' << v.size();
  if (!trainable) out << " non-trainable";
  out << '\n';
  write_values(out, v);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

class Reader {
 public:
  explicit Reader(const std::string& text) {
    std::string_view rest = text;
    while (!rest.empty()) {
      const auto nl = rest.find('\n');
      lines_.push_back(rest.substr(0, nl));
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }

  int line_number() const { return static_cast<int>(pos_); }

  std::string_view next() {
    if (pos_ >= lines_.size()) {
      throw ParseError(static_cast<int>(lines_.size()) + 1, "unexpected end of file");
    }
    return lines_[pos_++];
  }

  std::string_view peek() const { return pos_ < lines_.size() ? lines_[pos_] : std::string_view{}; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_number(), what); }

  std::string header_value(std::string_view key) {
    const std::string_view line = next();
    const std::string prefix = std::string(key) + "=";
    if (line.substr(0, prefix.size()) != prefix) fail("expected '" + prefix + "'");
    return std::string(line.substr(prefix.size()));
  }

  template <typename T>
  T parse_number(std::string_view token) {
    T value{};
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) fail("invalid number '" + std::string(token) + "'");
    return value;
  }

  std::vector<double> values_line(std::size_t expected, std::string_view layer) {
    const auto tokens = split(next());
    std::vector<double> out;
    out.reserve(tokens.size());
    for (auto t : tokens) out.push_back(parse_number<double>(t));
    if (out.size() != expected) {
      throw FormatError("layer " + std::string(layer) + ": line " +
                        std::to_string(line_number()) + " has " + std::to_string(out.size()) +
                        " values, expected " + std::to_string(expected));
    }
    return out;
  }

 private:
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
};

DenseLayer read_dense(Reader& in, std::string_view name, std::size_t rows, std::size_t cols) {
  auto head = split(in.next());
  if (head.size() != 4 || head[0] != "layer" || head[2] != "dense") {
    in.fail("expected 'layer " + std::string(name) + " dense <activation>'");
  }
  if (head[1] != name) {
    in.fail("expected layer '" + std::string(name) + "', found '" + std::string(head[1]) + "'");
  }
  Activation act;
  try {
    act = activation_from_string(head[3]);
  } catch (const DomainError& e) {
    in.fail(e.what());
  }

  auto shape = split(in.next());
  if (shape.size() != 3 || shape[0] != "weights") in.fail("expected 'weights <rows> <cols>'");
  const auto r = in.parse_number<std::size_t>(shape[1]);
  const auto c = in.parse_number<std::size_t>(shape[2]);
  if (r != rows || c != cols) {
    throw FormatError("layer " + std::string(name) + ": weights shape " + std::to_string(r) +
                      "x" + std::to_string(c) + " does not match header (expected " +
                      std::to_string(rows) + "x" + std::to_string(cols) + ")");
  }
  DenseLayer layer(cols, rows, act);
  for (std::size_t k = 0; k < rows; ++k) {
    const auto row = in.values_line(cols, name);
    std::copy(row.begin(), row.end(), layer.weights.row(k).begin());
  }

  auto bias = split(in.next());
  if (bias.size() != 2 || bias[0] != "bias") in.fail("expected 'bias <length>'");
  const auto len = in.parse_number<std::size_t>(bias[1]);
  if (len != rows) {
    throw FormatError("layer " + std::string(name) + ": bias length " + std::to_string(len) +
                      " does not match header (expected " + std::to_string(rows) + ")");
  }
  layer.bias = in.values_line(rows, name);
  return layer;
}

std::vector<double> read_norm_vector(Reader& in, std::string_view key, std::size_t n,
                                     bool trainable) {
  auto head = split(in.next());
  const std::size_t want = trainable ? 2 : 3;
  if (head.size() != want || head[0] != key || (!trainable && head[2] != "non-trainable")) {
    in.fail("expected '" + std::string(key) + " <length>" +
            (trainable ? "'" : " non-trainable'"));
  }
  const auto len = in.parse_number<std::size_t>(head[1]);
  if (len != n) {
    throw FormatError("layer norm: " + std::string(key) + " length " + std::to_string(len) +
                      " does not match header (expected " + std::to_string(n) + ")");
  }
  return in.values_line(n, "norm");
}

double read_norm_scalar(Reader& in, std::string_view key) {
  auto head = split(in.next());
  if (head.size() != 2 || head[0] != key) in.fail("expected '" + std::string(key) + " <value>'");
  return in.parse_number<double>(head[1]);
}

}  // namespace

std::string serialize_model(const ModelParams& model) {
  std::ostringstream out;
  out << kMagic << '\n';
  out << "M=" << model.meta.M << '\n';
  out << "n=" << model.meta.n << '\n';
  out << "m=" << model.meta.m << '\n';
  out << "trained_ebn0_db=" << format_shortest(model.meta.trained_ebn0_db) << '\n';
  out << "seed=" << model.meta.seed << '\n';
  if (model.meta.energy_normalization) out << "normalization=energy\n";
  write_dense(out, "tx_dense1", model.tx_dense1);
  write_dense(out, "tx_dense2", model.tx_dense2);
  out << "layer norm batchnorm\n";
  out << "momentum " << format_significant(model.norm.momentum, 17) << '\n';
  out << "epsilon " << format_significant(model.norm.epsilon, 17) << '\n';
  write_vector(out, "gamma", model.norm.gamma, true);
  write_vector(out, "beta", model.norm.beta, true);
  write_vector(out, "running_mean", model.norm.running_mean, false);
  write_vector(out, "running_var", model.norm.running_var, false);
  write_dense(out, "rx_dense", model.rx_dense);
  write_dense(out, "rx_out", model.rx_out);
  out << "end\n";
  return out.str();
}

ModelParams parse_model(const std::string& text) {
  Reader in(text);
  if (in.next() != kMagic) in.fail("bad magic, expected '" + std::string(kMagic) + "'");

  ModelParams model;
  model.meta.M = in.parse_number<unsigned>(in.header_value("M"));
  model.meta.n = in.parse_number<unsigned>(in.header_value("n"));
  model.meta.m = in.parse_number<unsigned>(in.header_value("m"));
  model.meta.trained_ebn0_db = in.parse_number<double>(in.header_value("trained_ebn0_db"));
  model.meta.seed = in.parse_number<std::uint64_t>(in.header_value("seed"));
  const std::size_t M = model.meta.M;
  const std::size_t n = model.meta.n;
  if (M < 2 || n < 1) in.fail("header needs M >= 2 and n >= 1");

  if (in.peek().substr(0, 14) == "normalization=") {
    const std::string_view maybe = in.next();
    if (maybe != "normalization=energy") in.fail("unknown normalization '" +
                                                 std::string(maybe.substr(14)) + "'");
    model.meta.energy_normalization = true;
  }

  model.tx_dense1 = read_dense(in, "tx_dense1", M, M);
  model.tx_dense2 = read_dense(in, "tx_dense2", n, M);

  auto head = split(in.next());
  if (head.size() != 3 || head[0] != "layer" || head[1] != "norm" || head[2] != "batchnorm") {
    in.fail("expected 'layer norm batchnorm'");
  }
  model.norm.momentum = read_norm_scalar(in, "momentum");
  model.norm.epsilon = read_norm_scalar(in, "epsilon");
  model.norm.gamma = read_norm_vector(in, "gamma", n, true);
  model.norm.beta = read_norm_vector(in, "beta", n, true);
  model.norm.running_mean = read_norm_vector(in, "running_mean", n, false);
  model.norm.running_var = read_norm_vector(in, "running_var", n, false);

  model.rx_dense = read_dense(in, "rx_dense", M, n);
  model.rx_out = read_dense(in, "rx_out", M, M);
  if (split(in.next()) != std::vector<std::string_view>{"end"}) in.fail("expected 'end'");
  return model;
}

void save_model(const ModelParams& model, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(model));
}

ModelParams load_model(const std::filesystem::path& path) {
  return parse_model(read_file(path));
}

}  // namespace gdrae
