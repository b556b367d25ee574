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

// Iterated folding: candidate search, greedy minimisation and the
// exhaustive exploration of every irreducible folding.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esfold/aes_fold.hpp"
#include "esfold/fes_fold.hpp"
#include "esfold/hp_bisim.hpp"
#include "esfold/isomorphism.hpp"

namespace esfold {

inline AesFoldingPlan plan_for(const Aes& a, EventSet xs) { return is_combinable_aes(a, xs); }
inline FesFoldingPlan plan_for(const Fes& f, EventSet xs) { return is_combinable_fes(f, xs); }
inline Aes fold_with(const Aes& a, const AesFoldingPlan& p) { return fold_aes(a, p).structure; }
inline Fes fold_with(const Fes& f, const FesFoldingPlan& p) { return fold_fes(f, p).structure; }

template <typename S>
using PlanOf = decltype(plan_for(std::declval<const S&>(), EventSet{}));

template <typename S>
struct Candidate {
  EventSet set;
  PlanOf<S> plan;
  bool combinable() const { return plan.combinable(); }
};

inline std::size_t largest_label_class(const EventTable& events) {
  std::map<std::string, std::size_t> count;
  std::size_t best = 0;
  for (const Event& e : events.events()) best = std::max(best, ++count[e.label]);
  return best;
}

/// Same-label, pairwise conflicting sets of size 2..k with their plans, by
/// label and then by lexicographic id order. k = 0 means the size of the
/// largest label class.
template <typename S>
std::vector<Candidate<S>> enumerate_candidates(const S& s, std::size_t k = 0, std::size_t cap = capacity_cap()) {
  check_capacity(s.size(), cap, "enumerate_candidates");
  const EventTable& ev = s.events();
  if (k == 0) k = largest_label_class(ev);
  auto conflicting = [&s](EventIndex a, EventIndex b) {
    if constexpr (std::is_same_v<S, Aes>) {
      return binary_conflict_aes(s, a, b);
    } else {
      return s.in_conflict(a, b);
    }
  };

  std::map<std::string, std::vector<EventIndex>> classes;
  for (EventIndex e = 0; e < ev.size(); ++e) classes[ev.label(e)].push_back(e);

  std::vector<std::pair<std::vector<std::string>, EventSet>> sets;
  for (auto& [label, members] : classes) {
    std::sort(members.begin(), members.end(), [&ev](EventIndex a, EventIndex b) { return ev.id(a) < ev.id(b); });
    std::vector<EventIndex> chosen;
    auto grow = [&](auto&& self, std::size_t from) -> void {
      if (chosen.size() >= 2) {
        std::vector<std::string> key{label};
        for (EventIndex e : chosen) key.push_back(ev.id(e));
        sets.emplace_back(std::move(key), EventSet::of(chosen));
      }
      if (chosen.size() == k) return;
      for (std::size_t i = from; i < members.size(); ++i) {
        bool ok = true;
        for (EventIndex c : chosen) ok = ok && conflicting(c, members[i]);
        if (!ok) continue;
        chosen.push_back(members[i]);
        self(self, i + 1);
        chosen.pop_back();
      }
    };
    grow(grow, 0);
  }
  std::sort(sets.begin(), sets.end());
  std::vector<Candidate<S>> out;
  for (auto& [key, set] : sets) out.push_back({set, plan_for(s, set)});
  return out;
}

template <typename S>
std::vector<Candidate<S>> combinable_candidates(const S& s, std::size_t k = 0, std::size_t cap = capacity_cap()) {
  auto all = enumerate_candidates(s, k, cap);
  std::erase_if(all, [](const Candidate<S>& c) { return !c.combinable(); });
  return all;
}

enum class Strategy { first, smallest_result, exhaustive };

struct ReductionStep {
  std::vector<std::string> folded;  // ids in the structure before the step
  std::string merged_id;
  std::size_t events_after = 0;
  std::uint64_t hash_after = 0;
};

template <typename S>
struct ReductionTrace {
  S initial;
  S final;
  std::vector<ReductionStep> steps;
};

namespace detail {

template <typename S>
std::size_t relation_size(const S& s) {
  std::size_t n = 0;
  for (const Relation* r : relations_of(s)) n += r->pair_count();
  return n;
}

template <typename S>
ReductionStep step_record(const S& before, EventSet set, const std::string& merged, const S& after) {
  ReductionStep step;
  for (EventIndex e : set) step.folded.push_back(before.events().id(e));
  step.merged_id = merged;
  step.events_after = after.size();
  step.hash_after = structure_hash(after);
  return step;
}

}  // namespace detail

template <typename S>
struct MinimalClass {
  S structure;
  std::vector<ReductionStep> trace;
  bool hp_equivalent = false;
};

template <typename S>
struct MinimalForms {
  std::vector<MinimalClass<S>> classes;
  std::size_t explored = 0;
  bool partial = false;
};

/// Explores every fold sequence breadth first, identifying isomorphic
/// intermediate structures. `budget` bounds the number of distinct
/// structures expanded; exceeding it flags the result as partial.
template <typename S>
MinimalForms<S> all_minimal_forms(const S& s, std::size_t budget = 10000, std::size_t cap = capacity_cap()) {
  struct Node {
    S structure;
    std::vector<ReductionStep> trace;
  };
  MinimalForms<S> out;
  std::map<std::uint64_t, std::vector<S>> seen;
  auto fresh = [&seen](const S& x) {
    auto& bucket = seen[structure_hash(x)];
    for (const S& y : bucket) {
      if (isomorphic(x, y)) return false;
    }
    bucket.push_back(x);
    return true;
  };
  std::map<std::uint64_t, std::vector<std::size_t>> class_index;

  std::deque<Node> queue;
  fresh(s);
  queue.push_back({s, {}});
  while (!queue.empty()) {
    if (out.explored >= budget) {
      out.partial = true;
      break;
    }
    Node node = std::move(queue.front());
    queue.pop_front();
    ++out.explored;
    const auto cands = combinable_candidates(node.structure, 0, cap);
    if (cands.empty()) {
      MinimalClass<S> cls{node.structure, node.trace, false};
      cls.hp_equivalent = hp_bisimilar(s, cls.structure, cap).equivalent();
      out.classes.push_back(std::move(cls));
      continue;
    }
    for (const auto& c : cands) {
      S next = fold_with(node.structure, c.plan);
      if (!fresh(next)) continue;
      Node child{next, node.trace};
      child.trace.push_back(detail::step_record(node.structure, c.set, c.plan.merged_id, next));
      queue.push_back(std::move(child));
    }
  }
  return out;
}

template <typename S>
ReductionTrace<S> minimize(const S& s, Strategy strategy = Strategy::first, std::size_t cap = capacity_cap()) {
  if (strategy == Strategy::exhaustive) {
    auto forms = all_minimal_forms(s, 10000, cap);
    if (forms.classes.empty()) throw Error("minimize: exhaustive search budget exhausted");
    const auto best = std::min_element(forms.classes.begin(), forms.classes.end(),
                                       [](const auto& a, const auto& b) { return a.structure.size() < b.structure.size(); });
    return {s, best->structure, best->trace};
  }
  ReductionTrace<S> trace{s, s, {}};
  for (;;) {
    const auto cands = combinable_candidates(trace.final, 0, cap);
    if (cands.empty()) break;
    std::optional<S> chosen;
    const Candidate<S>* pick = nullptr;
    for (const auto& c : cands) {
      S next = fold_with(trace.final, c.plan);
      if (!chosen || detail::relation_size(next) < detail::relation_size(*chosen)) {
        chosen = std::move(next);
        pick = &c;
      }
      if (strategy == Strategy::first) break;
    }
    trace.steps.push_back(detail::step_record(trace.final, pick->set, pick->plan.merged_id, *chosen));
    trace.final = std::move(*chosen);
  }
  return trace;
}

template <typename S>
std::string format_trace(const ReductionTrace<S>& t) {
  std::string out = "initial: " + std::to_string(t.initial.size()) + " events\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& st = t.steps[i];
    out += "step " + std::to_string(i + 1) + ": fold {";
    for (std::size_t j = 0; j < st.folded.size(); ++j) out += (j ? ", " : "") + st.folded[j];
    out += "} -> " + st.merged_id + " (" + std::to_string(st.events_after) + " events)\n";
  }
  out += "final: " + std::to_string(t.final.size()) + " events\n";
  return out;
}

}  // namespace esfold
