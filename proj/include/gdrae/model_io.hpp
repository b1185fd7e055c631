// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gdrae/autoencoder.hpp"

namespace gdrae {

// Line-oriented text model file:
//
//   GDRAE1
//   M=8
//   n=7
//   m=1
//   trained_ebn0_db=0
//   seed=1
//   layer tx_dense1 dense relu
//   weights 8 8
//   <8 rows of 8 values>
//   bias 8
//   <8 values>
//   ...
//   layer norm batchnorm
//   momentum <v>
//   epsilon <v>
//   gamma 7 / beta 7 / running_mean 7 non-trainable / running_var 7 non-trainable
//   ...
//   end
//
// Parameter values use 17 significant digits and reload bit-identically.
// A model with energy normalization adds `normalization=energy` after seed.
std::string serialize_model(const ModelParams& model);

// Throws ParseError (with line number) on malformed text and FormatError when
// a tensor shape disagrees with the header. Nothing is returned on failure.
ModelParams parse_model(const std::string& text);

void save_model(const ModelParams& model, const std::filesystem::path& path);
ModelParams load_model(const std::filesystem::path& path);

}  // namespace gdrae
