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

// Pieces shared by the AES and FES foldings: the folding map, the layout
// of the folded event table and the configuration-level checks.

#pragma once

#include <string>
#include <vector>

#include "esfold/core.hpp"
#include "esfold/hp_bisim.hpp"
#include "esfold/semantics.hpp"

namespace esfold {

/// Total map from the events of a structure onto the events of its folding.
struct FoldingMap {
  std::vector<EventIndex> mapping;
  EventIndex merged = 0;  // index of e_X in the folded structure

  EventIndex operator()(EventIndex e) const { return mapping[e]; }
  EventSet image(EventSet s) const {
    EventSet out;
    for (EventIndex e : s) out.insert(mapping[e]);
    return out;
  }
};

namespace detail {

/// Event table and index map for E ∖ X ∪ {e_X}; e_X takes the place of the
/// first member of X. Its id joins the member ids with '+'.
struct FoldLayout {
  EventTable events;
  FoldingMap map;
};

inline std::string merged_id(const EventTable& events, EventSet xs) {
  std::string id;
  for (EventIndex x : xs) {
    if (!id.empty()) id += '+';
    id += events.id(x);
  }
  while (events.contains(id) && !(xs.size() == 1 && events.id(xs.first()) == id)) id += '\'';
  return id;
}

inline FoldLayout fold_layout(const EventTable& events, EventSet xs) {
  if (xs.empty()) throw Error("fold: empty event set");
  std::vector<Event> out;
  FoldingMap map;
  map.mapping.resize(events.size());
  const EventIndex first = xs.first();
  for (EventIndex e = 0; e < events.size(); ++e) {
    if (e == first) {
      map.merged = out.size();
      out.push_back({merged_id(events, xs), events.label(first)});
    }
    if (xs.contains(e)) {
      map.mapping[e] = map.merged;
    } else {
      map.mapping[e] = out.size();
      out.push_back(events[e]);
    }
  }
  return {EventTable(std::move(out)), std::move(map)};
}

}  // namespace detail

/// For every C ∈ Conf(S): f(C) ∈ Conf(S_/X) and f|C is an iso of local orders.
template <typename S>
std::vector<std::string> check_configuration_preservation(const S& original, const S& folded, const FoldingMap& f,
                                                          std::size_t cap = capacity_cap()) {
  std::vector<std::string> out;
  for (EventSet c : configuration_sets(original, cap)) {
    const EventSet image = f.image(c);
    if (image.size() != c.size() || !is_configuration(folded, image)) {
      out.push_back("image of " + original.events().format(c) + " is not a configuration");
      continue;
    }
    PomsetIso iso;
    for (EventIndex e : c) iso.mapping.emplace_back(e, f(e));
    const Configuration c1{c, local_order(original, c)};
    const Configuration c2{image, local_order(folded, image)};
    if (!is_pomset_iso(original, c1, folded, c2, iso)) {
      out.push_back("local order of " + original.events().format(c) + " not preserved");
    }
  }
  return out;
}

/// R = {(C, f|C, f(C)) | C ∈ Conf(S)} as explicit triples.
template <typename S>
std::vector<HpTriple> folding_relation(const S& original, const FoldingMap& f, std::size_t cap = capacity_cap()) {
  std::vector<HpTriple> out;
  for (EventSet c : configuration_sets(original, cap)) {
    HpTriple t{c, {}, f.image(c)};
    for (EventIndex e : c) t.iso.mapping.emplace_back(e, f(e));
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace esfold
