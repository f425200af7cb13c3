// Copyright 2026 The ESS Games Authors.
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

#ifndef ESS_HASH_HPP_
#define ESS_HASH_HPP_

#include <string>
#include <string_view>

namespace ess {

// Hex SHA-1 of "blob <size>\0<content>", the object id git would assign.
std::string GitBlobHash(std::string_view content);

}  // namespace ess

#endif  // ESS_HASH_HPP_
