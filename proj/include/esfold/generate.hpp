/*
 * Copyright 2026 The esfold Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "esfold/core.hpp"
#include "esfold/structures.hpp"

namespace esfold {

struct GenParams {
  std::size_t event_count = 6;
  std::size_t label_count = 3;
  double causality_density = 0.3;
  double conflict_density = 0.3;
  std::uint64_t seed = 1;
};

namespace detail {

/// mt19937_64 output is fixed by the standard; the conversions below are
/// spelled out so that samples agree across standard libraries.
class PortableRandom {
 public:
  explicit PortableRandom(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

inline std::string label_name(std::size_t i) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + i % 26));
    i /= 26;
  } while (i-- > 0);
  return s;
}

}  // namespace detail

/// Random valid PES: causality is a random DAG over the index order, and
/// each sampled conflict is added together with everything it forces by
/// heredity unless that would make some event conflict with itself.
inline Pes generate_random_pes(const GenParams& p) {
  if (p.event_count > kMaxEvents) throw Error("generate: event count exceeds " + std::to_string(kMaxEvents));
  if (p.label_count == 0 && p.event_count > 0) throw Error("generate: label count must be positive");
  if (p.causality_density < 0 || p.causality_density > 1 || p.conflict_density < 0 || p.conflict_density > 1) {
    throw Error("generate: densities must lie in [0, 1]");
  }
  const std::size_t n = p.event_count;
  detail::PortableRandom rng(p.seed);
  std::vector<Event> events;
  for (std::size_t i = 0; i < n; ++i) {
    events.push_back({"e" + std::to_string(i), detail::label_name(rng.below(p.label_count))});
  }
  Relation edges(n);
  for (EventIndex a = 0; a < n; ++a) {
    for (EventIndex b = a + 1; b < n; ++b) {
      if (rng.chance(p.causality_density)) edges.add(a, b);
    }
  }
  const Relation lt = edges.transitive_closure();
  Relation conflict(n);
  for (EventIndex a = 0; a < n; ++a) {
    for (EventIndex b = a + 1; b < n; ++b) {
      if (!rng.chance(p.conflict_density) || conflict.holds(a, b)) continue;
      const EventSet above_a = lt.successors(a).with(a);
      const EventSet above_b = lt.successors(b).with(b);
      if (above_a.intersects(above_b)) continue;
      for (EventIndex x : above_a) {
        for (EventIndex y : above_b) {
          conflict.add(x, y);
          conflict.add(y, x);
        }
      }
    }
  }
  return Pes(EventTable(std::move(events)), lt, std::move(conflict));
}

}  // namespace esfold
