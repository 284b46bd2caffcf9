// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "json.hpp"
#include "nlsp/functionals.hpp"
#include "nlsp/grid.hpp"

namespace nlsp {

using njson = nlohmann::json;

/// Text field format: header "r,re,im", one row per grid node, full double
/// precision. The grid is implied by the r column (uniform spacing, first
/// node at h, last at r_max).
void write_field_csv(const std::string& path, const RadialField& f);
RadialField read_field_csv(const std::string& path);

/// Binary field format, little endian:
///   u64 n_points, f64 r_max, then n_points (re, im) f64 pairs.
void write_field_bin(const std::string& path, const RadialField& f);
RadialField read_field_bin(const std::string& path);

njson bare_record(const BareFunctionals& b);
njson frame_record(const FrameFunctionals& f);

void write_json_file(const std::string& path, const njson& j);
njson read_json_file(const std::string& path);

/// Run manifest next to each CLI output: what ran, with which parameters,
/// and which files it produced.
njson make_manifest(const std::string& command, const njson& params,
                    const std::vector<std::string>& outputs);

}  // namespace nlsp
