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

// Graphviz rendering. Direct causality is a solid arrow, asymmetric
// conflict between causally unrelated events a dashed arrow, symmetric
// conflict a dotted line and flow a double-headed arrow.

#pragma once

#include <string>

#include "esfold/structures.hpp"

namespace esfold {

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline void dot_edge(std::string& out, const EventTable& ev, EventIndex a, EventIndex b, const char* attrs) {
  out += "  " + dot_quote(ev.id(a)) + " -> " + dot_quote(ev.id(b)) + " [" + attrs + "];\n";
}

inline void dot_conflicts(std::string& out, const EventTable& ev, const Relation& r) {
  for (const auto& [a, b] : r.pairs()) {
    if (a < b) dot_edge(out, ev, a, b, "style=dotted, dir=none");
  }
}

}  // namespace detail

inline std::string to_dot(const EventStructure& s) {
  const EventTable& ev = events_of(s);
  std::string out = "digraph " + std::string(kind_name(kind_of(s))) + " {\n";
  for (EventIndex e = 0; e < ev.size(); ++e) {
    out += "  " + detail::dot_quote(ev.id(e)) + " [label=" + detail::dot_quote(ev.id(e) + ":" + ev.label(e)) + "];\n";
  }
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Fes>) {
          for (const auto& [a, b] : x.flow().pairs()) detail::dot_edge(out, ev, a, b, "dir=both");
          detail::dot_conflicts(out, ev, x.conflict());
        } else {
          for (const auto& [a, b] : x.causality().transitive_reduction().pairs()) {
            detail::dot_edge(out, ev, a, b, "style=solid");
          }
          if constexpr (std::is_same_v<T, Pes>) {
            detail::dot_conflicts(out, ev, x.conflict());
          } else {
            Relation mutual(ev.size());
            for (const auto& [a, b] : x.aconflict().pairs()) {
              if (x.aconf(b, a)) {
                mutual.add(a, b);
              } else if (!x.lt(a, b)) {
                detail::dot_edge(out, ev, a, b, "style=dashed");
              }
            }
            detail::dot_conflicts(out, ev, mutual);
          }
        }
      },
      s);
  return out + "}\n";
}

}  // namespace esfold
