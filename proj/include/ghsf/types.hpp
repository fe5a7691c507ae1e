/*
Copyright (c) 2026 The ghsf authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#ifndef GHSF_TYPES_HPP
#define GHSF_TYPES_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace ghsf {

using VertexId = std::uint32_t;  // global vertex identifier, fits 32 bits
using WorkerId = std::int32_t;
using EdgeIdx = std::uint32_t;  // index into a worker's local edge arrays

inline constexpr EdgeIdx kNoEdge = std::numeric_limits<EdgeIdx>::max();

// Bad user input: CLI arguments, generator parameters, sizing rules.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A message violating the wire contract (unknown kind code, truncated
// block, delivery on a non-existent edge, reply without a pending
// request). Always fatal: it indicates an engine bug, not bad input.
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A violated runtime invariant, e.g. a cycle among Branch edges or a
// fragment level that decreased.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ghsf

#endif  // GHSF_TYPES_HPP
