// Copyright 2026 The incore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INCORE_RATIONAL_H_
#define INCORE_RATIONAL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace incore {

// Exact cycle counts. Occupancies in model files are short decimals or
// fractions, so 64-bit numerators and denominators are plenty.
using Rational = boost::rational<std::int64_t>;

// Parses "3", "2.5", "-0.125" or "1/3". Returns nullopt on malformed text.
std::optional<Rational> ParseRational(std::string_view text);

double ToDouble(const Rational& r);

// "5/2" style, or "3" for integers. Round-trips through ParseRational.
std::string ToString(const Rational& r);

// Shortest decimal with `digits` significant digits ("%.*g").
std::string FormatSig(double value, int digits = 6);

}  // namespace incore

#endif  // INCORE_RATIONAL_H_
