// Copyright 2026 The pnrd Authors
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

#ifndef PNRD_CSV_HPP
#define PNRD_CSV_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pnrd::csv {

/// Shortest decimal string that parses back to exactly `value`.
std::string format(double value);

/// Empty field for std::nullopt.
std::string format(const std::optional<double> &value);

std::string join(const std::vector<std::string> &fields);

/// Writes `contents` to `path`, throwing std::runtime_error on I/O failure.
void write_file(const std::string &path, std::string_view contents);

}  // namespace pnrd::csv

#endif  // PNRD_CSV_HPP
