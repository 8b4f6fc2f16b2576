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

#include "anyplay/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace anyplay {

namespace {

std::string Fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

// Dark-blue to yellow gradient, interpolated piecewise-linearly.
struct Color {
  int r, g, b;
};

Color HeatColor(double t) {
  static constexpr Color kStops[] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98},
      {253, 231, 37}};
  constexpr int kSegments = 4;
  t = std::min(1.0, std::max(0.0, t));
  const double scaled = t * kSegments;
  int low = static_cast<int>(scaled);
  if (low >= kSegments) low = kSegments - 1;
  const double frac = scaled - low;
  const Color& a = kStops[low];
  const Color& b = kStops[low + 1];
  auto mix = [&](int x, int y) {
    return static_cast<int>(x + (y - x) * frac + 0.5);
  };
  return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

std::string EscapeXml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string EntryText(const std::optional<ScoreEntry>& entry) {
  if (!entry.has_value()) return "N/A";
  return Fixed(entry->mean, 3) + " +/- " + Fixed(entry->std_err, 3);
}

}  // namespace

std::string MatrixCsv(const CrossPlayMatrix& matrix, bool std_err) {
  std::ostringstream out;
  out << "run_id";
  for (const std::string& id : matrix.run_ids) out << "," << id;
  out << "\n";
  for (int i = 0; i < matrix.size(); ++i) {
    out << matrix.run_ids[static_cast<size_t>(i)];
    for (int j = 0; j < matrix.size(); ++j) {
      const PairingResult& cell = matrix.At(i, j);
      out << "," << FormatDouble(std_err ? cell.std_err : cell.mean);
    }
    out << "\n";
  }
  return out.str();
}

std::string HeatmapSvg(const CrossPlayMatrix& matrix,
                       const std::string& title) {
  const int n = matrix.size();
  const int cell = 46;
  const int margin_left = 90;
  const int margin_top = 60;
  const int width = margin_left + n * cell + 20;
  const int height = margin_top + n * cell + 20;

  double lo = 0.0;
  double hi = 0.0;
  if (n > 0) {
    lo = hi = matrix.At(0, 0).mean;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        lo = std::min(lo, matrix.At(i, j).mean);
        hi = std::max(hi, matrix.At(i, j).mean);
      }
    }
  }
  const double span = hi - lo;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<text x=\"" << margin_left << "\" y=\"20\" font-family=\"monospace\""
      << " font-size=\"14\">" << EscapeXml(title) << "</text>\n";
  for (int j = 0; j < n; ++j) {
    out << "<text x=\"" << margin_left + j * cell + cell / 2 << "\" y=\""
        << margin_top - 8 << "\" font-family=\"monospace\" font-size=\"9\""
        << " text-anchor=\"middle\">"
        << EscapeXml(matrix.run_ids[static_cast<size_t>(j)]) << "</text>\n";
  }
  for (int i = 0; i < n; ++i) {
    out << "<text x=\"" << margin_left - 6 << "\" y=\""
        << margin_top + i * cell + cell / 2 + 3
        << "\" font-family=\"monospace\" font-size=\"9\""
        << " text-anchor=\"end\">"
        << EscapeXml(matrix.run_ids[static_cast<size_t>(i)]) << "</text>\n";
    for (int j = 0; j < n; ++j) {
      const double mean = matrix.At(i, j).mean;
      const double t = span > 0.0 ? (mean - lo) / span : 0.5;
      const Color color = HeatColor(t);
      char fill[8];
      std::snprintf(fill, sizeof(fill), "#%02x%02x%02x", color.r, color.g,
                    color.b);
      const int x = margin_left + j * cell;
      const int y = margin_top + i * cell;
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << fill << "\"/>\n";
      const char* text_color = t > 0.55 ? "#000000" : "#ffffff";
      out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 3
          << "\" font-family=\"monospace\" font-size=\"10\""
          << " text-anchor=\"middle\" fill=\"" << text_color << "\">"
          << Fixed(mean, 1) << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

std::string ScoreReportText(const ScoreReport& report) {
  std::ostringstream out;
  size_t label_width = std::string("algorithm").size();
  for (const std::string& label : report.labels) {
    label_width = std::max(label_width, label.size());
  }
  auto pad = [&](const std::string& text, size_t width) {
    std::string padded = text;
    padded.resize(std::max(width, text.size()), ' ');
    return padded;
  };
  const size_t col = 18;
  out << pad("algorithm", label_width) << "  " << pad("self_play", col)
      << pad("intra_xp", col) << pad("inter_xp", col) << "one_szsc_xp\n";
  for (const std::string& label : report.labels) {
    const ScoreRow& row = report.rows.at(label);
    out << pad(label, label_width) << "  " << pad(EntryText(row.self_play), col)
        << pad(EntryText(row.intra_xp), col)
        << pad(EntryText(row.inter_xp), col) << EntryText(row.one_szsc_xp)
        << "\n";
  }
  return out.str();
}

std::string PearsonCsv(const ScoreReport& report) {
  std::ostringstream out;
  out << "score";
  for (const char* name : kScoreNames) out << "," << name;
  out << "\n";
  for (size_t a = 0; a < 4; ++a) {
    out << kScoreNames[a];
    for (size_t b = 0; b < 4; ++b) {
      out << ",";
      if (report.pearson[a][b].has_value()) {
        out << FormatDouble(*report.pearson[a][b]);
      } else {
        out << "NA";
      }
    }
    out << "\n";
  }
  return out.str();
}

void WriteTextFile(const std::filesystem::path& path,
                   const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error("failed writing '" + path.string() + "'");
  }
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace anyplay
