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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "esfold/core.hpp"
#include "esfold/structures.hpp"

namespace esfold {

/// Maps every event index of the first structure to one of the second.
using EventBijection = std::vector<EventIndex>;

inline std::array<const Relation*, 2> relations_of(const Pes& p) { return {&p.causality(), &p.conflict()}; }
inline std::array<const Relation*, 2> relations_of(const Aes& a) { return {&a.causality(), &a.aconflict()}; }
inline std::array<const Relation*, 2> relations_of(const Fes& f) { return {&f.flow(), &f.conflict()}; }

namespace detail {

inline std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFFU;
    h *= 0x100000001b3ULL;
  }
  return h;
}
inline std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fnv1a(h, s.size());
}
inline constexpr std::uint64_t kFnvBasis = 0xcbf29ce484222325ULL;

/// Colour refinement over labels and both relations (in and out edges).
/// Colours are isomorphism-invariant and comparable across structures.
template <typename S>
std::vector<std::uint64_t> refined_colours(const S& s) {
  const std::size_t n = s.size();
  const auto rels = relations_of(s);
  std::vector<std::uint64_t> colour(n);
  for (EventIndex e = 0; e < n; ++e) {
    std::uint64_t h = fnv1a(kFnvBasis, s.events().label(e));
    for (std::size_t r = 0; r < rels.size(); ++r) h = fnv1a(h, rels[r]->holds(e, e) ? r + 1 : 0);
    colour[e] = h;
  }
  for (std::size_t round = 0; round < n; ++round) {
    std::vector<std::uint64_t> next(n);
    for (EventIndex e = 0; e < n; ++e) {
      std::vector<std::uint64_t> around;
      for (std::size_t r = 0; r < rels.size(); ++r) {
        for (EventIndex o : rels[r]->successors(e)) around.push_back(fnv1a(fnv1a(kFnvBasis, 2 * r), colour[o]));
        for (EventIndex o : rels[r]->predecessors(e)) {
          around.push_back(fnv1a(fnv1a(kFnvBasis, 2 * r + 1), colour[o]));
        }
      }
      std::sort(around.begin(), around.end());
      std::uint64_t h = fnv1a(kFnvBasis, colour[e]);
      for (std::uint64_t a : around) h = fnv1a(h, a);
      next[e] = h;
    }
    colour = std::move(next);
  }
  return colour;
}

}  // namespace detail

/// Isomorphism-invariant hash; equal structures up to renaming hash equally.
template <typename S>
std::uint64_t structure_hash(const S& s) {
  auto colours = detail::refined_colours(s);
  std::sort(colours.begin(), colours.end());
  std::uint64_t h = detail::fnv1a(detail::kFnvBasis, static_cast<std::uint64_t>(S::kind));
  h = detail::fnv1a(h, s.size());
  for (std::uint64_t c : colours) h = detail::fnv1a(h, c);
  return h;
}

/// Checks that `map` is a label-preserving bijection preserving and
/// reflecting every relation.
template <typename S>
bool is_isomorphism(const S& x, const S& y, const EventBijection& map) {
  const std::size_t n = x.size();
  if (y.size() != n || map.size() != n) return false;
  EventSet image;
  for (EventIndex e = 0; e < n; ++e) {
    if (map[e] >= n || image.contains(map[e])) return false;
    image.insert(map[e]);
    if (x.events().label(e) != y.events().label(map[e])) return false;
  }
  const auto rx = relations_of(x);
  const auto ry = relations_of(y);
  for (std::size_t r = 0; r < rx.size(); ++r) {
    for (EventIndex a = 0; a < n; ++a) {
      for (EventIndex b = 0; b < n; ++b) {
        if (rx[r]->holds(a, b) != ry[r]->holds(map[a], map[b])) return false;
      }
    }
  }
  return true;
}

/// First isomorphism in canonical search order (x events by index, y
/// candidates by index), or nothing.
template <typename S>
std::optional<EventBijection> isomorphic(const S& x, const S& y) {
  const std::size_t n = x.size();
  if (y.size() != n) return std::nullopt;
  const auto cx = detail::refined_colours(x);
  const auto cy = detail::refined_colours(y);
  {
    auto sx = cx;
    auto sy = cy;
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    if (sx != sy) return std::nullopt;
  }
  const auto rx = relations_of(x);
  const auto ry = relations_of(y);
  EventBijection map(n, n);
  EventSet used;

  auto consistent = [&](EventIndex a, EventIndex b) {
    for (std::size_t r = 0; r < rx.size(); ++r) {
      if (rx[r]->holds(a, a) != ry[r]->holds(b, b)) return false;
      for (EventIndex prev = 0; prev < a; ++prev) {
        const EventIndex img = map[prev];
        if (rx[r]->holds(a, prev) != ry[r]->holds(b, img)) return false;
        if (rx[r]->holds(prev, a) != ry[r]->holds(img, b)) return false;
      }
    }
    return true;
  };
  auto search = [&](auto&& self, EventIndex a) -> bool {
    if (a == n) return true;
    for (EventIndex b = 0; b < n; ++b) {
      if (used.contains(b) || cx[a] != cy[b]) continue;
      if (!consistent(a, b)) continue;
      map[a] = b;
      used.insert(b);
      if (self(self, a + 1)) return true;
      used.erase(b);
      map[a] = n;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return map;
}

inline std::optional<EventBijection> isomorphic(const EventStructure& x, const EventStructure& y) {
  if (x.index() != y.index()) {
    throw Error(std::string("isomorphic: kind mismatch (") + kind_name(kind_of(x)) + " vs " +
                kind_name(kind_of(y)) + ")");
  }
  return std::visit(
      [&y](const auto& xs) -> std::optional<EventBijection> {
        using T = std::decay_t<decltype(xs)>;
        return isomorphic(xs, std::get<T>(y));
      },
      x);
}

inline std::uint64_t structure_hash(const EventStructure& s) {
  return std::visit([](const auto& x) { return structure_hash(x); }, s);
}

}  // namespace esfold
