// Copyright 2026 The hqr Authors
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

#ifndef HQR_CLI_HPP
#define HQR_CLI_HPP

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace hqr {

/// Entry point of the `hqr` tool. `args` excludes the program name.
/// Returns the process exit code; diagnostics go to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Parses a key=value config file: one pair per line, '#' starts a comment,
/// blank lines ignored. Throws std::runtime_error on unreadable files or
/// malformed lines.
std::map<std::string, std::string> read_config_file(const std::string &path);

}  // namespace hqr

#endif  // HQR_CLI_HPP
