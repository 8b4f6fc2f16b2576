// Copyright 2026 The Anyplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANYPLAY_REPORT_H_
#define ANYPLAY_REPORT_H_

#include <filesystem>
#include <string>

#include "anyplay/xplay.h"

namespace anyplay {

// All emitters produce byte-deterministic text: doubles are printed with
// std::to_chars (shortest round-trip) or fixed printf precision, and rows
// follow the pool/matrix order.

// Header row/column of run ids, cells = mean (or standard error).
std::string MatrixCsv(const CrossPlayMatrix& matrix, bool std_err);

// Self-contained SVG heatmap: linear color scale from the matrix minimum to
// maximum mean, one annotated rect per cell.
std::string HeatmapSvg(const CrossPlayMatrix& matrix,
                       const std::string& title);

// Plain-text score table, one row per algorithm label, N/A where a score is
// not defined for the pool.
std::string ScoreReportText(const ScoreReport& report);

// 4x4 Pearson matrix over the score vectors; NA where undefined.
std::string PearsonCsv(const ScoreReport& report);

// Writes bytes as-is (LF endings preserved).
void WriteTextFile(const std::filesystem::path& path,
                   const std::string& text);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace anyplay

#endif  // ANYPLAY_REPORT_H_
