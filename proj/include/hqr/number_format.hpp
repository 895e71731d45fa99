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

#ifndef HQR_NUMBER_FORMAT_HPP
#define HQR_NUMBER_FORMAT_HPP

#include <string>

namespace hqr {

/// Shortest "%.Ng" rendering with N >= 12 that parses back to exactly `value`.
/// Non-finite values print as "inf", "-inf" or "nan".
std::string format_number(double value);

}  // namespace hqr

#endif  // HQR_NUMBER_FORMAT_HPP
