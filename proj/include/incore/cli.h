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

#ifndef INCORE_CLI_H_
#define INCORE_CLI_H_

#include <iosfwd>

namespace incore {

// Exit codes: 0 success, 1 input or usage error, 2 internal invariant failure.
int CliMain(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace incore

#endif  // INCORE_CLI_H_
