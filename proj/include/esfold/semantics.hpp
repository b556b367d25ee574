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

// Configurations, extension orders, histories and derived conflict notions
// for the three event structure variants.

#pragma once

#include <algorithm>
#include <unordered_set>
#include <vector>

#include "esfold/core.hpp"
#include "esfold/structures.hpp"

namespace esfold {

/// A configuration with its induced strict local order.
///   PES: `<` restricted to the set
///   AES: (↗|C)+
///   FES: (≺|C)+
struct Configuration {
  EventSet events;
  Relation order;

  bool operator==(const Configuration&) const = default;
};

// ---------------------------------------------------------------------------
// Configuration predicates

inline bool is_configuration(const Pes& p, EventSet c) {
  for (EventIndex e : c) {
    if (!p.causes(e).subset_of(c)) return false;
    if (p.conflict().successors(e).intersects(c)) return false;
  }
  return true;
}

inline bool is_configuration(const Aes& a, EventSet c) {
  for (EventIndex e : c) {
    if (!a.causes(e).subset_of(c)) return false;
  }
  return a.aconflict().is_acyclic_on(c);
}

inline bool is_configuration(const Fes& f, EventSet c) {
  for (EventIndex e : c) {
    if (f.conflict().successors(e).intersects(c)) return false;
  }
  if (!f.flow().is_acyclic_on(c)) return false;
  for (EventIndex e : c) {
    // Every predecessor left out must be excluded by a conflicting predecessor inside.
    const EventSet pre = f.pre(e);
    const EventSet pre_inside = pre & c;
    for (EventIndex missing : pre - c) {
      if (!f.conflict().successors(missing).intersects(pre_inside)) return false;
    }
  }
  return true;
}

/// One step C → C ∪ {e} admitted by the variant's extension order.
/// Assumes `c` is a configuration and `e` ∉ c.
inline bool can_step(const Pes& p, EventSet c, EventIndex e) { return is_configuration(p, c.with(e)); }

inline bool can_step(const Aes& a, EventSet c, EventIndex e) {
  if (!(a.causes(e).without(e)).subset_of(c)) return false;
  // C ⊑ C ∪ {e} forbids e ↗ e' for any e' already in C; with that, no cycle can appear.
  return !a.aconflict().successors(e).intersects(c) && !a.aconf(e, e);
}

inline bool can_step(const Fes& f, EventSet c, EventIndex e) { return is_configuration(f, c.with(e)); }

// ---------------------------------------------------------------------------
// Local orders and extension

inline Relation local_order(const Pes& p, EventSet c) { return p.causality().restricted_to(c); }
inline Relation local_order(const Aes& a, EventSet c) {
  return a.aconflict().restricted_to(c).transitive_closure();
}
inline Relation local_order(const Fes& f, EventSet c) { return f.flow().restricted_to(c).transitive_closure(); }

inline bool extends(const Pes&, EventSet c1, EventSet c2) { return c1.subset_of(c2); }
inline bool extends(const Fes&, EventSet c1, EventSet c2) { return c1.subset_of(c2); }
/// C1 ⊑ C2: inclusion, and nothing added is disabled by C1.
inline bool extends(const Aes& a, EventSet c1, EventSet c2) {
  if (!c1.subset_of(c2)) return false;
  for (EventIndex added : c2 - c1) {
    if (a.aconflict().successors(added).intersects(c1)) return false;
  }
  return true;
}

template <typename S>
bool extends(const S& s, const Configuration& c1, const Configuration& c2) {
  return extends(s, c1.events, c2.events);
}

// ---------------------------------------------------------------------------
// Enumeration

/// Events e ∉ c with c → c ∪ {e} a valid step.
template <typename S>
EventSet enabled(const S& s, EventSet c) {
  EventSet out;
  for (EventIndex e : s.events().all() - c) {
    if (can_step(s, c, e)) out.insert(e);
  }
  return out;
}

/// Every configuration as a bare event set (including ∅), sorted by size then bits.
/// Ordered DFS over one-event extensions with a visited set.
template <typename S>
std::vector<EventSet> configuration_sets(const S& s, std::size_t cap = capacity_cap()) {
  check_capacity(s.size(), cap, "configuration enumeration");
  std::unordered_set<std::uint64_t> visited;
  std::vector<EventSet> out;
  std::vector<EventSet> stack{EventSet{}};
  visited.insert(0);
  while (!stack.empty()) {
    const EventSet c = stack.back();
    stack.pop_back();
    out.push_back(c);
    const EventSet en = enabled(s, c);
    for (auto it = en.begin(); it != en.end(); ++it) {
      const EventSet next = c.with(*it);
      if (visited.insert(next.bits()).second) stack.push_back(next);
    }
  }
  std::sort(out.begin(), out.end(), size_then_bits);
  return out;
}

template <typename S>
std::vector<Configuration> configurations(const S& s, std::size_t cap = capacity_cap()) {
  std::vector<Configuration> out;
  for (EventSet c : configuration_sets(s, cap)) out.push_back({c, local_order(s, c)});
  return out;
}

inline std::vector<Configuration> configurations(const EventStructure& s, std::size_t cap = capacity_cap()) {
  return std::visit([cap](const auto& x) { return configurations(x, cap); }, s);
}

/// ⊆-maximal members of a family, in the family's order.
inline std::vector<EventSet> maximal_sets(const std::vector<EventSet>& family) {
  std::vector<EventSet> out;
  for (EventSet c : family) {
    const bool dominated = std::any_of(family.begin(), family.end(), [c](EventSet d) {
      return c != d && c.subset_of(d);
    });
    if (!dominated) out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// AES: histories, direct relations, conflict

struct History {
  EventIndex owner = 0;
  EventSet events;

  /// h⁻ = h ∖ {owner}.
  EventSet minus() const { return events.without(owner); }
  bool operator==(const History&) const = default;
};

/// C⟦e⟦ = {e' ∈ C | e' (↗|C)* e}.
inline EventSet history_in(const Aes& a, EventSet c, EventIndex e) {
  const Relation order = local_order(a, c);
  return order.predecessors(e).with(e);
}

/// Hist(e): every history of e over all configurations containing e.
inline std::vector<History> histories(const Aes& a, EventIndex e, std::size_t cap = capacity_cap()) {
  if (e >= a.size()) throw StructuralError("unknown event index " + std::to_string(e));
  std::vector<EventSet> found;
  for (EventSet c : configuration_sets(a, cap)) {
    if (!c.contains(e)) continue;
    const EventSet h = history_in(a, c, e);
    if (std::find(found.begin(), found.end(), h) == found.end()) found.push_back(h);
  }
  std::sort(found.begin(), found.end(), size_then_bits);
  std::vector<History> out;
  for (EventSet h : found) out.push_back({e, h});
  return out;
}

/// ⋃ Hist(X): every event occurring in some history of some member of X.
inline EventSet history_union(const Aes& a, EventSet xs, std::size_t cap = capacity_cap()) {
  EventSet out;
  for (EventIndex x : xs) {
    for (const History& h : histories(a, x, cap)) out |= h.events;
  }
  return out;
}

struct DirectRelations {
  Relation immediate_cause;  // <_μ
  Relation direct_aconf;     // ↗_μ (AES) ; unused for FES
  Relation direct_conflict;  // #_μ
};

inline DirectRelations direct_relations_aes(const Aes& a) {
  const std::size_t n = a.size();
  DirectRelations d{Relation(n), Relation(n), Relation(n)};
  d.immediate_cause = a.causality().transitive_reduction();
  for (EventIndex e = 0; e < n; ++e) {
    for (EventIndex e2 : a.aconflict().successors(e)) {
      // Not direct when e ↗ e' < e2 for some e'.
      bool inherited = false;
      for (EventIndex mid : a.aconflict().successors(e)) {
        if (a.lt(mid, e2)) {
          inherited = true;
          break;
        }
      }
      if (!inherited) d.direct_aconf.add(e, e2);
    }
  }
  for (EventIndex e = 0; e < n; ++e) {
    for (EventIndex e2 : d.direct_aconf.successors(e)) {
      if (d.direct_aconf.holds(e2, e)) d.direct_conflict.add(e, e2);
    }
  }
  return d;
}

/// e # e2 in an AES: asymmetric conflict both ways.
inline bool binary_conflict_aes(const Aes& a, EventIndex e, EventIndex e2) {
  return a.aconf(e, e2) && a.aconf(e2, e);
}

/// A set is consistent iff its causal closure carries no ↗ cycle, i.e. it
/// lies inside some configuration.
inline bool is_consistent_aes(const Aes& a, EventSet ys) {
  return a.aconflict().is_acyclic_on(a.causal_closure(ys));
}

/// #xs: xs holds a subset derivable by the cycle rule followed by upward
/// causal lifting. Computed as a least fixed point over subsets of ⌊xs⌋.
inline bool set_conflict_aes(const Aes& a, EventSet xs, std::size_t cap = capacity_cap()) {
  if (xs.empty()) throw Error("set_conflict_aes: empty event set");
  const EventSet universe = a.causal_closure(xs);
  check_capacity(universe.size(), cap, "set conflict");
  std::vector<EventIndex> members(universe.begin(), universe.end());
  const std::size_t k = members.size();
  auto expand = [&](std::uint64_t local) {
    EventSet s;
    for (std::size_t i = 0; i < k; ++i) {
      if ((local >> i) & 1U) s.insert(members[i]);
    }
    return s;
  };
  const std::uint64_t count = std::uint64_t{1} << k;
  std::vector<char> derived(count, 0);
  std::vector<std::uint64_t> work;
  // Cycle rule: Z is the vertex set of a closed ↗ walk, i.e. ↗|Z is strongly
  // connected and has at least one edge.
  for (std::uint64_t local = 1; local < count; ++local) {
    const EventSet z = expand(local);
    const Relation closed = a.aconflict().restricted_to(z).transitive_closure();
    bool strongly_connected = true;
    for (EventIndex u : z) {
      if (!z.subset_of(closed.successors(u))) {
        strongly_connected = false;
        break;
      }
    }
    if (strongly_connected) {
      derived[local] = 1;
      work.push_back(local);
    }
  }
  // Lifting rule: #(X ∪ {e}) and e ≤ e' give #(X ∪ {e'}), for either reading
  // of whether e stays in X.
  while (!work.empty()) {
    const std::uint64_t local = work.back();
    work.pop_back();
    for (std::size_t i = 0; i < k; ++i) {
      if (!((local >> i) & 1U)) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j || !a.lt(members[i], members[j])) continue;
        const std::uint64_t keep = local | (std::uint64_t{1} << j);
        const std::uint64_t replace = keep & ~(std::uint64_t{1} << i);
        for (std::uint64_t next : {keep, replace}) {
          if (!derived[next]) {
            derived[next] = 1;
            work.push_back(next);
          }
        }
      }
    }
  }
  for (std::uint64_t local = 1; local < count; ++local) {
    if (derived[local] && expand(local).subset_of(xs)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// FES: semantic conflict, direct conflict, maximal consistent subsets

/// e #s e' iff no configuration contains both; includes (e, e) for dead events.
inline Relation semantic_conflict_fes(const Fes& f, std::size_t cap = capacity_cap()) {
  const std::size_t n = f.size();
  Relation together(n);
  for (EventSet c : configuration_sets(f, cap)) {
    for (EventIndex e : c) {
      for (EventIndex e2 : c) together.add(e, e2);
    }
  }
  Relation out(n);
  for (EventIndex e = 0; e < n; ++e) {
    for (EventIndex e2 = 0; e2 < n; ++e2) {
      if (!together.holds(e, e2)) out.add(e, e2);
    }
  }
  return out;
}

/// Faithfulness (# = #s on distinct pairs) and fullness (no dead event,
/// irreflexive #), on top of the structural checks.
inline ValidationReport validate_fes_semantic(const Fes& f, std::size_t cap = capacity_cap()) {
  ValidationReport report = validate_fes(f);
  const Relation semantic = semantic_conflict_fes(f, cap);
  for (EventIndex e = 0; e < f.size(); ++e) {
    for (EventIndex e2 = e + 1; e2 < f.size(); ++e2) {
      if (semantic.holds(e, e2) != f.in_conflict(e, e2)) report.add(clause::kFesFaithful, {e, e2});
    }
  }
  for (EventIndex e = 0; e < f.size(); ++e) {
    if (semantic.holds(e, e)) report.add(clause::kFesFull, {e});
  }
  return report;
}

/// mcons(Z): the ⊆-maximal conflict-free subsets of zs, sorted by bits.
inline std::vector<EventSet> mcons(const Fes& f, EventSet zs) {
  // Self-conflicting events can never be part of a consistent set.
  EventSet usable;
  for (EventIndex z : zs) {
    if (!f.in_conflict(z, z)) usable.insert(z);
  }
  std::vector<EventSet> out;
  // Bron–Kerbosch over the compatibility graph.
  auto compatible = [&](EventIndex v) { return usable - f.conflict_set(v) - EventSet::single(v); };
  auto rec = [&](auto&& self, EventSet r, EventSet p, EventSet x) -> void {
    if (p.empty() && x.empty()) {
      out.push_back(r);
      return;
    }
    for (EventIndex v : p) {
      const EventSet nv = compatible(v);
      self(self, r.with(v), p & nv, x & nv);
      p.erase(v);
      x.insert(v);
    }
  };
  rec(rec, EventSet{}, usable, EventSet{});
  std::sort(out.begin(), out.end());
  return out;
}

/// e #_μ e2: e # e2 and some maximal consistent predecessor set of e avoids #(e2).
inline bool direct_conflict_fes(const Fes& f, EventIndex e, EventIndex e2) {
  if (!f.in_conflict(e, e2)) return false;
  const EventSet enemies = f.conflict_set(e2);
  for (EventSet y : mcons(f, f.pre(e))) {
    if (!y.intersects(enemies)) return true;
  }
  return false;
}

inline Relation direct_conflict_fes(const Fes& f) {
  Relation out(f.size());
  for (EventIndex e = 0; e < f.size(); ++e) {
    for (EventIndex e2 : f.conflict().successors(e)) {
      if (direct_conflict_fes(f, e, e2)) out.add(e, e2);
    }
  }
  return out;
}

}  // namespace esfold
