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

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "esfold/core.hpp"

namespace esfold {

enum class Kind { pes, aes, fes };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::pes: return "pes";
    case Kind::aes: return "aes";
    case Kind::fes: return "fes";
  }
  return "?";
}

inline void check_relation_size(const EventTable& events, const Relation& r, const char* name) {
  if (r.size() != events.size()) {
    throw StructuralError(std::string(name) + " relation has " + std::to_string(r.size()) +
                          " rows for " + std::to_string(events.size()) + " events");
  }
}

/// Prime event structure. Causality is stored as its strict part `<`;
/// `le` adds reflexivity.
class Pes {
 public:
  static constexpr Kind kind = Kind::pes;

  Pes() = default;
  Pes(EventTable events, Relation causality, Relation conflict)
      : events_(std::move(events)), lt_(std::move(causality)), conflict_(std::move(conflict)) {
    check_relation_size(events_, lt_, "causality");
    check_relation_size(events_, conflict_, "conflict");
  }

  const EventTable& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  const Relation& causality() const { return lt_; }
  const Relation& conflict() const { return conflict_; }

  bool lt(EventIndex a, EventIndex b) const { return lt_.holds(a, b); }
  bool le(EventIndex a, EventIndex b) const { return a == b || lt_.holds(a, b); }
  bool in_conflict(EventIndex a, EventIndex b) const { return conflict_.holds(a, b); }
  /// ⌊e⌋, including e itself.
  EventSet causes(EventIndex e) const { return lt_.predecessors(e).with(e); }

  bool operator==(const Pes&) const = default;

 private:
  EventTable events_;
  Relation lt_;
  Relation conflict_;
};

/// Asymmetric event structure: strict causality `<` and asymmetric conflict ↗.
class Aes {
 public:
  static constexpr Kind kind = Kind::aes;

  Aes() = default;
  Aes(EventTable events, Relation causality, Relation aconflict)
      : events_(std::move(events)), lt_(std::move(causality)), aconf_(std::move(aconflict)) {
    check_relation_size(events_, lt_, "causality");
    check_relation_size(events_, aconf_, "asymmetric conflict");
  }

  const EventTable& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  const Relation& causality() const { return lt_; }
  const Relation& aconflict() const { return aconf_; }

  bool lt(EventIndex a, EventIndex b) const { return lt_.holds(a, b); }
  bool le(EventIndex a, EventIndex b) const { return a == b || lt_.holds(a, b); }
  /// a ↗ b: b disables a, or a precedes b whenever both occur.
  bool aconf(EventIndex a, EventIndex b) const { return aconf_.holds(a, b); }
  EventSet causes(EventIndex e) const { return lt_.predecessors(e).with(e); }
  /// ⌊X⌋: downward causal closure of a set.
  EventSet causal_closure(EventSet xs) const { return lt_.preimage(xs) | xs; }

  bool operator==(const Aes&) const = default;

 private:
  EventTable events_;
  Relation lt_;
  Relation aconf_;
};

/// Flow event structure: irreflexive flow ≺ and symmetric conflict #.
class Fes {
 public:
  static constexpr Kind kind = Kind::fes;

  Fes() = default;
  Fes(EventTable events, Relation flow, Relation conflict)
      : events_(std::move(events)), flow_(std::move(flow)), conflict_(std::move(conflict)) {
    check_relation_size(events_, flow_, "flow");
    check_relation_size(events_, conflict_, "conflict");
  }

  const EventTable& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  const Relation& flow() const { return flow_; }
  const Relation& conflict() const { return conflict_; }

  bool precedes(EventIndex a, EventIndex b) const { return flow_.holds(a, b); }
  bool in_conflict(EventIndex a, EventIndex b) const { return conflict_.holds(a, b); }
  /// pre(e) = {e' | e' ≺ e}.
  EventSet pre(EventIndex e) const { return flow_.predecessors(e); }
  EventSet pre(EventSet xs) const { return flow_.preimage(xs); }
  /// #(e) = {e' | e' # e}.
  EventSet conflict_set(EventIndex e) const { return conflict_.predecessors(e); }

  bool operator==(const Fes&) const = default;

 private:
  EventTable events_;
  Relation flow_;
  Relation conflict_;
};

using EventStructure = std::variant<Pes, Aes, Fes>;

inline Kind kind_of(const EventStructure& s) {
  return std::visit([](const auto& x) { return std::decay_t<decltype(x)>::kind; }, s);
}
inline const EventTable& events_of(const EventStructure& s) {
  return std::visit([](const auto& x) -> const EventTable& { return x.events(); }, s);
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string clause;
  std::vector<EventIndex> witness;

  bool operator==(const Violation&) const = default;
};

/// Every violated clause with its witnessing events; empty iff well-formed.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view clause) const {
    for (const auto& v : violations) {
      if (v.clause == clause) return true;
    }
    return false;
  }
  void add(std::string clause, std::vector<EventIndex> witness) {
    violations.push_back({std::move(clause), std::move(witness)});
  }
  void append(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }

  std::string format(const EventTable& events) const {
    if (ok()) return "valid\n";
    std::string out;
    for (const auto& v : violations) {
      out += v.clause + ":";
      for (EventIndex e : v.witness) out += " " + events.id(e);
      out += "\n";
    }
    return out;
  }
};

namespace clause {
inline constexpr const char* kCausalityIrreflexive = "causality-irreflexive";
inline constexpr const char* kCausalityAntisymmetric = "causality-antisymmetric";
inline constexpr const char* kCausalityTransitive = "causality-transitive";
inline constexpr const char* kConflictIrreflexive = "conflict-irreflexive";
inline constexpr const char* kConflictSymmetric = "conflict-symmetric";
inline constexpr const char* kConflictHeredity = "conflict-heredity";
inline constexpr const char* kAesCondition1 = "aes-condition-1";
inline constexpr const char* kAesCondition2 = "aes-condition-2";
inline constexpr const char* kAesCondition3 = "aes-condition-3";
inline constexpr const char* kAesCondition4 = "aes-condition-4";
inline constexpr const char* kFlowIrreflexive = "flow-irreflexive";
inline constexpr const char* kFesFaithful = "fes-faithfulness";
inline constexpr const char* kFesFull = "fes-fullness";
}  // namespace clause

namespace detail {

// Strict causality must be irreflexive, acyclic and transitive.
inline void check_strict_order(const Relation& lt, ValidationReport& report) {
  const std::size_t n = lt.size();
  for (EventIndex a = 0; a < n; ++a) {
    if (lt.holds(a, a)) report.add(clause::kCausalityIrreflexive, {a});
  }
  for (EventIndex a = 0; a < n; ++a) {
    for (EventIndex b : lt.successors(a)) {
      if (a < b && lt.holds(b, a)) report.add(clause::kCausalityAntisymmetric, {a, b});
    }
  }
  for (EventIndex a = 0; a < n; ++a) {
    for (EventIndex b : lt.successors(a)) {
      for (EventIndex c : lt.successors(b)) {
        if (!lt.holds(a, c) && a != c) report.add(clause::kCausalityTransitive, {a, b, c});
      }
    }
  }
}

inline void check_symmetric_irreflexive(const Relation& conflict, ValidationReport& report) {
  const std::size_t n = conflict.size();
  for (EventIndex a = 0; a < n; ++a) {
    if (conflict.holds(a, a)) report.add(clause::kConflictIrreflexive, {a});
    for (EventIndex b : conflict.successors(a)) {
      if (!conflict.holds(b, a)) report.add(clause::kConflictSymmetric, {a, b});
    }
  }
}

}  // namespace detail

inline ValidationReport validate_pes(const Pes& p) {
  ValidationReport report;
  detail::check_strict_order(p.causality(), report);
  detail::check_symmetric_irreflexive(p.conflict(), report);
  // e # e' ≤ e'' implies e # e''.
  for (EventIndex e = 0; e < p.size(); ++e) {
    for (EventIndex e1 : p.conflict().successors(e)) {
      for (EventIndex e2 : p.causality().successors(e1)) {
        if (!p.in_conflict(e, e2)) report.add(clause::kConflictHeredity, {e, e1, e2});
      }
    }
  }
  return report;
}

inline ValidationReport validate_aes(const Aes& a) {
  ValidationReport report;
  detail::check_strict_order(a.causality(), report);
  const std::size_t n = a.size();
  // 1. e < e' implies e ↗ e'.
  for (EventIndex e = 0; e < n; ++e) {
    for (EventIndex e1 : a.causality().successors(e)) {
      if (!a.aconf(e, e1)) report.add(clause::kAesCondition1, {e, e1});
    }
  }
  // 2. e ↗ e' and e' < e'' implies e ↗ e''.
  for (EventIndex e = 0; e < n; ++e) {
    for (EventIndex e1 : a.aconflict().successors(e)) {
      for (EventIndex e2 : a.causality().successors(e1)) {
        if (!a.aconf(e, e2)) report.add(clause::kAesCondition2, {e, e1, e2});
      }
    }
  }
  // 3. ↗ restricted to ⌊e⌋ is acyclic.
  for (EventIndex e = 0; e < n; ++e) {
    if (!a.aconflict().is_acyclic_on(a.causes(e))) report.add(clause::kAesCondition3, {e});
  }
  // 4. ↗ cyclic on ⌊e⌋ ∪ ⌊e'⌋ implies e ↗ e'.
  for (EventIndex e = 0; e < n; ++e) {
    for (EventIndex e1 = 0; e1 < n; ++e1) {
      if (e == e1 || a.aconf(e, e1)) continue;
      if (!a.aconflict().is_acyclic_on(a.causes(e) | a.causes(e1))) {
        report.add(clause::kAesCondition4, {e, e1});
      }
    }
  }
  return report;
}

/// Structural FES checks only; faithfulness and fullness need the
/// configuration family (see `validate_fes_semantic` in semantics.hpp).
inline ValidationReport validate_fes(const Fes& f) {
  ValidationReport report;
  for (EventIndex e = 0; e < f.size(); ++e) {
    if (f.precedes(e, e)) report.add(clause::kFlowIrreflexive, {e});
  }
  detail::check_symmetric_irreflexive(f.conflict(), report);
  return report;
}

inline ValidationReport validate(const EventStructure& s) {
  return std::visit(
      [](const auto& x) -> ValidationReport {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Pes>) {
          return validate_pes(x);
        } else if constexpr (std::is_same_v<T, Aes>) {
          return validate_aes(x);
        } else {
          return validate_fes(x);
        }
      },
      s);
}

// ---------------------------------------------------------------------------
// Construction helpers

/// Closes a causality relation given by (possibly only direct) edges and
/// rejects cycles.
inline Relation close_causality(const Relation& edges) {
  Relation closed = edges.transitive_closure();
  for (EventIndex e = 0; e < closed.size(); ++e) {
    if (closed.holds(e, e)) throw StructuralError("causality relation is cyclic");
  }
  return closed;
}

// ---------------------------------------------------------------------------
// Embeddings

inline Aes pes_to_aes(const Pes& p) {
  if (const auto report = validate_pes(p); !report.ok()) {
    throw StructuralError("pes_to_aes: invalid PES\n" + report.format(p.events()));
  }
  Relation aconf = p.causality();
  for (const auto& [a, b] : p.conflict().pairs()) {
    aconf.add(a, b);
    aconf.add(b, a);
  }
  return Aes(p.events(), p.causality(), std::move(aconf));
}

inline Fes pes_to_fes(const Pes& p) {
  if (const auto report = validate_pes(p); !report.ok()) {
    throw StructuralError("pes_to_fes: invalid PES\n" + report.format(p.events()));
  }
  return Fes(p.events(), p.causality().transitive_reduction(), p.conflict());
}

}  // namespace esfold
