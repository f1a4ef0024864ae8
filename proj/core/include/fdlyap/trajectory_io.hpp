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

// CSV emission for logged trajectories. Numbers are written with
// std::to_chars, so the output never depends on the process locale.

#pragma once

#include <filesystem>
#include <string>

#include "fdlyap/loop.hpp"

namespace fdlyap {

/// Scientific notation with 17 significant digits; round-trips exactly.
std::string format_fixed_width(double value);

/// Shortest representation that round-trips.
std::string format_shortest(double value);

/// `n,t,V_measured,V_exact,u_1..u_m,kappa_1..kappa_m[,x,y,z]`, Bloch columns
/// only when every row carries a Bloch vector.
std::string trajectory_csv_header(const TrajectoryLog& log);

/// Header plus one line per sampling instant, '\n' terminated.
std::string trajectory_csv(const TrajectoryLog& log);

/// Throws Error if the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace fdlyap
