// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfatom/tfr.hpp"
#include "tfatom/types.hpp"

namespace tfatom::io {

using json = nlohmann::ordered_json;

// Raw signal container: little-endian float64 pairs (re, im), plus a JSON
// sidecar at <path>.json describing length / sample_rate / generator.
void write_signal(const std::filesystem::path& path, const Signal& f,
                  const json& generator = json::object());
Signal read_raw_signal(const std::filesystem::path& path);

// RIFF/WAVE reader restricted to 16-bit PCM mono; anything else throws
// std::runtime_error with a reason. Samples are scaled to [-1, 1).
Signal read_wav(const std::filesystem::path& path);

// Dispatch on extension (.wav) / RIFF magic, otherwise raw float64 pairs.
Signal read_signal(const std::filesystem::path& path);

// Analysis result document: method name, echo of the provenance metadata,
// and the sparse atom list. Field order in the file is fixed.
struct SolutionFile {
    std::string method;
    json signal_meta;
    json frame_meta;
    json solver_meta;
    SparseTF tf;
};

void write_solution(const std::filesystem::path& path, const SolutionFile& sol);
SolutionFile read_solution(const std::filesystem::path& path);

// 8-bit binary PGM (P5, maxval 255). `img_db` is the rasterize() output:
// row 0 = frequency 0; the file is written bottom-up so low frequencies end
// up at the bottom of the image. Values are mapped linearly from
// [db_floor, 0] dB onto [0, 255].
void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& img_db,
               double db_floor = -80.0);

// Matrix as RFC-4180 CSV (LF line endings, no header).
void write_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

// Aligned per-method curves: header "index,<name>,..." then one row per
// index. Shorter curves pad with zeros.
void write_curves_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& names,
                      const std::vector<Eigen::VectorXd>& curves);

} // namespace tfatom::io
