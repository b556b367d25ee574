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

// Folding of asymmetric event structures: a combinable set X of
// same-labelled, pairwise conflicting events is replaced by one event e_X
// without changing the behaviour up to hp-bisimilarity.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "esfold/core.hpp"
#include "esfold/folding.hpp"
#include "esfold/hp_bisim.hpp"
#include "esfold/semantics.hpp"
#include "esfold/structures.hpp"

namespace esfold {

/// Which form of the history requirement the combinability check uses:
/// h⁻ ⊆ S(X) ∪ ⌊Y⌋, or the stricter h⁻ = S(X) ∪ ⌊Y⌋.
enum class HistoryMatch { subset, equal };

/// S(X) = {e' | e' < e for every e ∈ X}.
inline EventSet strict_causes(const Aes& a, EventSet xs) {
  if (xs.empty()) throw Error("strict_causes: empty event set");
  EventSet s = a.events().all();
  for (EventIndex x : xs) s &= a.causality().predecessors(x);
  return s;
}

/// W(X) = {e'' | ∃ e, e' ∈ X. e'' ↗ e ∧ ¬(e' ↗ e'')} ∖ (S(X) ∪ X).
inline EventSet weak_predecessors(const Aes& a, EventSet xs) {
  if (xs.empty()) throw Error("weak_predecessors: empty event set");
  EventSet w;
  for (EventIndex e : xs) {
    for (EventIndex pred : a.aconflict().predecessors(e)) {
      for (EventIndex other : xs) {
        if (!a.aconf(other, pred)) {
          w.insert(pred);
          break;
        }
      }
    }
  }
  return w - strict_causes(a, xs) - xs;
}

struct SimilarityVerdict {
  // Per condition, the first failing tuple (empty when the condition holds):
  //   1: (e, e')        labels differ or not in mutual conflict
  //   2: (e, e', e'')   e ↗ e'' but neither e' ↗ e'' nor e'' ↗ e
  //   3: (e'', e, e')   e'' ↗_μ e but not e'' ↗ e'
  std::vector<EventIndex> condition1;
  std::vector<EventIndex> condition2;
  std::vector<EventIndex> condition3;

  bool holds(int condition) const {
    switch (condition) {
      case 1: return condition1.empty();
      case 2: return condition2.empty();
      case 3: return condition3.empty();
      default: return false;
    }
  }
  bool ok() const { return holds(1) && holds(2) && holds(3); }
};

/// Similarity, quantified over distinct e, e' ∈ X and e'' ∉ X.
inline SimilarityVerdict is_similar(const Aes& a, EventSet xs) {
  if (xs.empty()) throw Error("is_similar: empty event set");
  SimilarityVerdict v;
  const Relation direct = direct_relations_aes(a).direct_aconf;
  const EventSet outside = a.events().all() - xs;
  for (EventIndex e : xs) {
    for (EventIndex e1 : xs) {
      if (e == e1) continue;
      if (v.condition1.empty() &&
          (a.events().label(e) != a.events().label(e1) || !binary_conflict_aes(a, e, e1))) {
        v.condition1 = {e, e1};
      }
      if (v.condition2.empty()) {
        for (EventIndex e2 : a.aconflict().successors(e) & outside) {
          if (!a.aconf(e1, e2) && !a.aconf(e2, e)) {
            v.condition2 = {e, e1, e2};
            break;
          }
        }
      }
      if (v.condition3.empty()) {
        for (EventIndex e2 : direct.predecessors(e) & outside) {
          if (!a.aconf(e2, e1)) {
            v.condition3 = {e2, e, e1};
            break;
          }
        }
      }
    }
  }
  return v;
}

/// Outcome of the history requirement for one consistent Y ⊆ W(X).
struct SubsetCheck {
  EventSet y;
  std::optional<EventIndex> event;  // e ∈ X with ¬(e ↗ y) for all y ∈ Y
  std::optional<EventSet> history;  // the matching h_e
};

struct AesFoldingPlan {
  EventSet x;
  EventSet strict_causes;
  EventSet weak_preds;
  SimilarityVerdict similarity;
  std::vector<SubsetCheck> subsets;  // every consistent Y ⊆ W(X), in bit order
  std::optional<EventSet> failing_subset;
  HistoryMatch mode = HistoryMatch::subset;
  std::string merged_id;

  bool similar() const { return similarity.ok(); }
  bool combinable() const { return x.size() >= 2 && similar() && !failing_subset.has_value(); }
};

/// Combinability of X. When X is not similar the history check is skipped.
inline AesFoldingPlan is_combinable_aes(const Aes& a, EventSet xs, HistoryMatch mode = HistoryMatch::subset,
                                        std::size_t cap = capacity_cap()) {
  AesFoldingPlan plan;
  plan.x = xs;
  plan.mode = mode;
  plan.strict_causes = strict_causes(a, xs);
  plan.weak_preds = weak_predecessors(a, xs);
  plan.similarity = is_similar(a, xs);
  plan.merged_id = detail::merged_id(a.events(), xs);
  if (!plan.similar()) return plan;

  std::vector<std::pair<EventIndex, std::vector<History>>> hists;
  for (EventIndex x : xs) hists.emplace_back(x, histories(a, x, cap));

  const std::vector<EventIndex> w(plan.weak_preds.begin(), plan.weak_preds.end());
  const std::uint64_t count = std::uint64_t{1} << w.size();
  for (std::uint64_t local = 0; local < count; ++local) {
    EventSet y;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if ((local >> i) & 1U) y.insert(w[i]);
    }
    if (!is_consistent_aes(a, y)) continue;
    const EventSet allowed = plan.strict_causes | a.causal_closure(y);
    SubsetCheck check{y, std::nullopt, std::nullopt};
    for (const auto& [x, hs] : hists) {
      if (a.aconflict().successors(x).intersects(y)) continue;
      for (const History& h : hs) {
        const bool match = mode == HistoryMatch::subset ? h.minus().subset_of(allowed) : h.minus() == allowed;
        if (match) {
          check.event = x;
          check.history = h.events;
          break;
        }
      }
      if (check.event) break;
    }
    if (!check.event && !plan.failing_subset) plan.failing_subset = y;
    plan.subsets.push_back(check);
  }
  return plan;
}

/// Per-condition diagnostic report for one plan.
inline std::string format_plan(const Aes& a, const AesFoldingPlan& plan) {
  const EventTable& ev = a.events();
  auto ids = [&ev](const std::vector<EventIndex>& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + ev.id(t[i]);
    return s + ")";
  };
  std::string out = "X = " + ev.format(plan.x) + (plan.combinable() ? ": combinable" : ": not combinable") + "\n";
  out += "  S(X) = " + ev.format(plan.strict_causes) + "\n";
  out += "  W(X) = " + ev.format(plan.weak_preds) + "\n";
  for (int c = 1; c <= 3; ++c) {
    const auto& t = c == 1 ? plan.similarity.condition1 : c == 2 ? plan.similarity.condition2 : plan.similarity.condition3;
    out += "  similar condition " + std::to_string(c) + ": " + (t.empty() ? "holds" : "fails at " + ids(t)) + "\n";
  }
  if (plan.similar()) {
    out += std::string("  history match: ") + (plan.mode == HistoryMatch::subset ? "subset" : "equal") + "\n";
    for (const auto& s : plan.subsets) {
      out += "  Y = " + ev.format(s.y) + ": ";
      if (s.event) {
        out += "witnessed by " + ev.id(*s.event) + " with history " + ev.format(*s.history) + "\n";
      } else {
        out += "no witness\n";
      }
    }
  }
  return out;
}

struct AesFold {
  Aes structure;
  FoldingMap map;
};

/// A_/X. Refuses non-combinable plans unless `force` is set.
inline AesFold fold_aes(const Aes& a, const AesFoldingPlan& plan, bool force = false) {
  if (!force && !plan.combinable()) {
    throw Error("fold_aes: " + a.events().format(plan.x) + " is not combinable");
  }
  const EventSet xs = plan.x;
  auto [events, map] = detail::fold_layout(a.events(), xs);
  const std::size_t n = events.size();
  const EventIndex ex = map.merged;
  const EventSet s = strict_causes(a, xs);
  const EventSet rest = a.events().all() - xs;

  Relation lt(n);
  Relation aconf(n);
  for (EventIndex u : rest) {
    for (EventIndex v : a.causality().successors(u) & rest) lt.add(map(u), map(v));
    for (EventIndex v : a.aconflict().successors(u) & rest) aconf.add(map(u), map(v));
  }
  for (EventIndex u : s) lt.add(map(u), ex);
  for (EventIndex v : a.causality().image(xs) & rest) lt.add(ex, map(v));
  for (EventIndex u : rest) {
    if (xs.subset_of(a.aconflict().successors(u))) aconf.add(map(u), ex);
    bool all_before = true;
    for (EventIndex x : xs) all_before = all_before && a.aconf(x, u);
    if (all_before) aconf.add(ex, map(u));
  }
  return {Aes(std::move(events), std::move(lt), std::move(aconf)), std::move(map)};
}

inline AesFold fold_aes(const Aes& a, EventSet xs, bool force = false, HistoryMatch mode = HistoryMatch::subset) {
  return fold_aes(a, is_combinable_aes(a, xs, mode), force);
}

// ---------------------------------------------------------------------------
// Executable forms of the folding lemmas. Each returns human-readable
// violations; an empty result means the property holds on this instance.

/// (1) x <_/X f(e) ⇒ ∃ e' < e with f(e') = x
/// (2) f(e) ↗_/X f(e') ⇒ e ↗ e'
/// (3) e ↗_μ e' ⇒ f(e) ↗_/X f(e') ∨ e # e'
inline std::vector<std::string> check_folding_map_aes(const Aes& a, const AesFold& fold) {
  std::vector<std::string> out;
  const Aes& b = fold.structure;
  const FoldingMap& f = fold.map;
  const EventTable& ev = a.events();
  for (EventIndex e = 0; e < a.size(); ++e) {
    for (EventIndex x : b.causality().predecessors(f(e))) {
      bool found = false;
      for (EventIndex e1 : a.causality().predecessors(e)) found = found || f(e1) == x;
      if (!found) out.push_back("map property 1 fails for " + b.events().id(x) + " < f(" + ev.id(e) + ")");
    }
  }
  const Relation direct = direct_relations_aes(a).direct_aconf;
  for (EventIndex e = 0; e < a.size(); ++e) {
    for (EventIndex e1 = 0; e1 < a.size(); ++e1) {
      if (b.aconf(f(e), f(e1)) && !a.aconf(e, e1)) {
        out.push_back("map property 2 fails for (" + ev.id(e) + ", " + ev.id(e1) + ")");
      }
      if (direct.holds(e, e1) && !b.aconf(f(e), f(e1)) && !binary_conflict_aes(a, e, e1)) {
        out.push_back("map property 3 fails for (" + ev.id(e) + ", " + ev.id(e1) + ")");
      }
    }
  }
  return out;
}

}  // namespace esfold
