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

// Folding of flow event structures.

#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "esfold/core.hpp"
#include "esfold/folding.hpp"
#include "esfold/semantics.hpp"
#include "esfold/structures.hpp"

namespace esfold {

/// #(e) = {e' | e' # e}.
inline EventSet conflict_set(const Fes& f, EventIndex e) {
  if (e >= f.size()) throw StructuralError("conflict_set: unknown event");
  return f.conflict_set(e);
}

inline EventSet conflict_set(const Fes& f, const std::string& id) { return conflict_set(f, f.events().index_of(id)); }

/// X # e: e is in conflict with every member of X.
inline bool conflicts_all(const Fes& f, EventSet xs, EventIndex e) {
  return xs.subset_of(f.conflict().predecessors(e));
}

struct FesFoldingPlan {
  EventSet x;
  // First failing tuple per condition, empty when the condition holds:
  //   1: (x, x')        labels differ or ¬(x # x')
  //   2: (x, x', e)     x #_μ e but ¬(x' # e)
  //   3: (x, x', e)     x ≺ e but neither x' ≺ e nor x' # e
  //   4: (e, x, x')     e ≺ x, and pre(x') = ∅ or the disjunct fails
  //   5: (x, e, e')     the mcons clause fails for `condition5_y`
  std::array<std::vector<EventIndex>, 5> failures;
  std::optional<EventSet> condition5_y;
  std::string merged_id;

  bool holds(int condition) const { return failures.at(condition - 1).empty(); }
  bool combinable() const {
    if (x.size() < 2) return false;
    for (const auto& f : failures) {
      if (!f.empty()) return false;
    }
    return true;
  }
};

inline FesFoldingPlan is_combinable_fes(const Fes& f, EventSet xs) {
  if (xs.empty()) throw Error("is_combinable_fes: empty event set");
  FesFoldingPlan plan;
  plan.x = xs;
  plan.merged_id = detail::merged_id(f.events(), xs);
  const EventSet outside = f.events().all() - xs;
  auto& fail = plan.failures;

  for (EventIndex x : xs) {
    for (EventIndex x1 : xs) {
      if (x != x1 && fail[0].empty() && (f.events().label(x) != f.events().label(x1) || !f.in_conflict(x, x1))) {
        fail[0] = {x, x1};
      }
      for (EventIndex e : outside) {
        if (fail[1].empty() && !f.in_conflict(x1, e) && f.in_conflict(x, e) && direct_conflict_fes(f, x, e)) {
          fail[1] = {x, x1, e};
        }
        if (fail[2].empty() && f.precedes(x, e) && !f.precedes(x1, e) && !f.in_conflict(x1, e)) {
          fail[2] = {x, x1, e};
        }
        if (fail[3].empty() && f.precedes(e, x)) {
          bool ok = !f.pre(x1).empty();
          if (ok && !f.precedes(e, x1)) {
            for (EventIndex e1 : f.pre(x1) - f.pre(x)) ok = ok && f.in_conflict(e, e1);
          }
          if (!ok) fail[3] = {e, x, x1};
        }
      }
    }
  }

  for (EventIndex x : xs) {
    for (EventIndex e : outside) {
      if (!fail[4].empty()) break;
      const EventSet pre = f.pre(e);
      if (!pre.contains(x)) continue;
      for (EventIndex e1 : pre & outside & f.conflict_set(x)) {
        if (conflicts_all(f, xs, e1)) continue;
        for (EventSet y : mcons(f, pre)) {
          bool ok = true;
          if (y.contains(x)) ok = (y.without(x) & f.conflict_set(e1)).size() > 0;
          if (ok && !y.intersects(xs)) {
            bool found = false;
            for (EventIndex e2 : y) found = found || conflicts_all(f, xs, e2);
            ok = found;
          }
          if (!ok) {
            fail[4] = {x, e, e1};
            plan.condition5_y = y;
            break;
          }
        }
        if (!fail[4].empty()) break;
      }
    }
  }
  return plan;
}

inline std::string format_plan(const Fes& f, const FesFoldingPlan& plan) {
  const EventTable& ev = f.events();
  std::string out = "X = " + ev.format(plan.x) + (plan.combinable() ? ": combinable" : ": not combinable") + "\n";
  for (int c = 1; c <= 5; ++c) {
    const auto& t = plan.failures[c - 1];
    out += "  condition " + std::to_string(c) + ": ";
    if (t.empty()) {
      out += "holds\n";
      continue;
    }
    out += "fails at (";
    for (std::size_t i = 0; i < t.size(); ++i) out += (i ? ", " : "") + ev.id(t[i]);
    out += ")";
    if (c == 5 && plan.condition5_y) out += " with Y = " + ev.format(*plan.condition5_y);
    out += "\n";
  }
  return out;
}

struct FesFold {
  Fes structure;
  FoldingMap map;
};

inline FesFold fold_fes(const Fes& f, const FesFoldingPlan& plan, bool force = false) {
  if (!force && !plan.combinable()) {
    throw Error("fold_fes: " + f.events().format(plan.x) + " is not combinable");
  }
  const EventSet xs = plan.x;
  auto [events, map] = detail::fold_layout(f.events(), xs);
  const std::size_t n = events.size();
  const EventIndex ex = map.merged;
  const EventSet rest = f.events().all() - xs;

  Relation flow(n);
  Relation conflict(n);
  for (EventIndex u : rest) {
    for (EventIndex v : f.flow().successors(u) & rest) flow.add(map(u), map(v));
    for (EventIndex v : f.conflict().successors(u) & rest) conflict.add(map(u), map(v));
    if (conflicts_all(f, xs, u)) {
      conflict.add(map(u), ex);
      conflict.add(ex, map(u));
    }
    if (f.flow().successors(u).intersects(xs)) flow.add(map(u), ex);
    if (f.flow().predecessors(u).intersects(xs)) flow.add(ex, map(u));
  }
  return {Fes(std::move(events), std::move(flow), std::move(conflict)), std::move(map)};
}

inline FesFold fold_fes(const Fes& f, EventSet xs, bool force = false) {
  return fold_fes(f, is_combinable_fes(f, xs), force);
}

struct MconsLemmaCheck {
  std::optional<EventSet> cover;  // consistent Y ⊆ pre(X) inside no pre(x)
  std::optional<EventSet> mcons;  // Y in exactly one of mcons(pre(X)), ⋃ mcons(pre(x))
  bool ok() const { return !cover && !mcons; }
};

/// (a) every consistent Y ⊆ pre(X) satisfies Y ⊆ pre(x) for some x ∈ X;
/// (b) Y ∈ mcons(pre(X)) iff Y ∈ mcons(pre(x)) for some x ∈ X.
/// Reports the first counterexample of each statement.
inline MconsLemmaCheck check_mcons_lemma(const Fes& f, EventSet xs) {
  MconsLemmaCheck out;
  const EventSet all_pre = f.pre(xs);
  const std::vector<EventIndex> p(all_pre.begin(), all_pre.end());
  const std::uint64_t count = std::uint64_t{1} << p.size();
  for (std::uint64_t local = 0; local < count && !out.cover; ++local) {
    EventSet y;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if ((local >> i) & 1U) y.insert(p[i]);
    }
    if (f.conflict().image(y).intersects(y)) continue;
    bool covered = false;
    for (EventIndex x : xs) covered = covered || y.subset_of(f.pre(x));
    if (!covered) out.cover = y;
  }
  std::vector<EventSet> joined;
  for (EventIndex x : xs) {
    for (EventSet y : mcons(f, f.pre(x))) joined.push_back(y);
  }
  std::sort(joined.begin(), joined.end());
  joined.erase(std::unique(joined.begin(), joined.end()), joined.end());
  const std::vector<EventSet> whole = mcons(f, all_pre);
  for (EventSet y : whole) {
    if (!out.mcons && !std::binary_search(joined.begin(), joined.end(), y)) out.mcons = y;
  }
  for (EventSet y : joined) {
    if (!out.mcons && !std::binary_search(whole.begin(), whole.end(), y)) out.mcons = y;
  }
  return out;
}

/// f(e) #_/X f(e') ⇒ e # e';  e ≺ e' ⇒ f(e) ≺_/X f(e');
/// f(e) ≺_/X f(e') ⇒ e ≺ e' ∨ e # e';  f(e) = f(e') ⇒ e = e' ∨ e # e'.
/// Pairs collapsed onto e_X are exempt from the two flow clauses.
inline std::vector<std::string> check_folding_map_fes(const Fes& f, const FesFold& fold) {
  std::vector<std::string> out;
  const Fes& g = fold.structure;
  const FoldingMap& m = fold.map;
  const EventTable& ev = f.events();
  for (EventIndex e = 0; e < f.size(); ++e) {
    for (EventIndex e1 = 0; e1 < f.size(); ++e1) {
      const std::string pair = "(" + ev.id(e) + ", " + ev.id(e1) + ")";
      if (g.in_conflict(m(e), m(e1)) && !f.in_conflict(e, e1)) out.push_back("map conflict reflection fails for " + pair);
      if (m(e) == m(e1)) {
        if (e != e1 && !f.in_conflict(e, e1)) out.push_back("map injectivity up to conflict fails for " + pair);
        continue;
      }
      if (f.precedes(e, e1) && !g.precedes(m(e), m(e1))) out.push_back("map flow preservation fails for " + pair);
      if (g.precedes(m(e), m(e1)) && !f.precedes(e, e1) && !f.in_conflict(e, e1)) {
        out.push_back("map flow reflection fails for " + pair);
      }
    }
  }
  return out;
}

}  // namespace esfold
