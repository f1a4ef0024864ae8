// Copyright 2026 The fdlyap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fdlyap/trajectory_io.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "fdlyap/errors.hpp"

namespace fdlyap {

namespace {

bool has_bloch(const TrajectoryLog& log) {
  if (log.rows.empty()) {
    return false;
  }
  for (const auto& r : log.rows) {
    if (!r.bloch) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string format_fixed_width(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::scientific, 16);
  return std::string(buf.data(), res.ptr);
}

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string trajectory_csv_header(const TrajectoryLog& log) {
  std::string h = "n,t,V_measured,V_exact";
  for (std::size_t k = 1; k <= log.channels; ++k) {
    h += ",u_" + std::to_string(k);
  }
  for (std::size_t k = 1; k <= log.channels; ++k) {
    h += ",kappa_" + std::to_string(k);
  }
  if (has_bloch(log)) {
    h += ",x,y,z";
  }
  return h;
}

std::string trajectory_csv(const TrajectoryLog& log) {
  const bool bloch = has_bloch(log);
  std::string out = trajectory_csv_header(log);
  out += '\n';
  out.reserve(out.size() + log.rows.size() * (4 + 2 * log.channels + 3) * 24);
  for (const auto& r : log.rows) {
    out += std::to_string(r.n);
    auto field = [&out](double v) {
      out += ',';
      out += format_fixed_width(v);
    };
    field(r.t);
    field(r.V_measured);
    field(r.V_exact);
    for (std::size_t k = 0; k < log.channels; ++k) {
      field(r.u[k]);
    }
    for (std::size_t k = 0; k < log.channels; ++k) {
      field(r.gains[k]);
    }
    if (bloch) {
      field(r.bloch->x);
      field(r.bloch->y);
      field(r.bloch->z);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!f) {
    throw Error("failed writing " + path.string());
  }
}

}  // namespace fdlyap
