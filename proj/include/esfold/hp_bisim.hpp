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

// History-preserving bisimilarity between finite event structures of any
// variant. Steps follow each variant's extension order; the pomset of a
// configuration is its local order (see semantics.hpp).

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "esfold/core.hpp"
#include "esfold/semantics.hpp"
#include "esfold/structures.hpp"

namespace esfold {

/// Event bijection between two configurations, as (left, right) pairs
/// sorted by the left event.
struct PomsetIso {
  std::vector<std::pair<EventIndex, EventIndex>> mapping;

  EventSet domain() const {
    EventSet s;
    for (const auto& [a, b] : mapping) s.insert(a);
    return s;
  }
  EventSet range() const {
    EventSet s;
    for (const auto& [a, b] : mapping) s.insert(b);
    return s;
  }
  std::optional<EventIndex> operator()(EventIndex a) const {
    for (const auto& [l, r] : mapping) {
      if (l == a) return r;
    }
    return std::nullopt;
  }
  PomsetIso inverse() const {
    PomsetIso inv;
    for (const auto& [a, b] : mapping) inv.mapping.emplace_back(b, a);
    std::sort(inv.mapping.begin(), inv.mapping.end());
    return inv;
  }
  PomsetIso extended(EventIndex a, EventIndex b) const {
    PomsetIso out = *this;
    out.mapping.emplace_back(a, b);
    std::sort(out.mapping.begin(), out.mapping.end());
    return out;
  }
  bool operator==(const PomsetIso&) const = default;
  auto operator<=>(const PomsetIso&) const = default;
};

/// Label-preserving, order-preserving and order-reflecting check.
template <typename X, typename Y>
bool is_pomset_iso(const X& x, const Configuration& c1, const Y& y, const Configuration& c2, const PomsetIso& f) {
  if (f.domain() != c1.events || f.range() != c2.events || f.mapping.size() != c1.events.size()) return false;
  for (const auto& [a, b] : f.mapping) {
    if (x.events().label(a) != y.events().label(b)) return false;
  }
  for (const auto& [a, fa] : f.mapping) {
    for (const auto& [b, fb] : f.mapping) {
      if (c1.order.holds(a, b) != c2.order.holds(fa, fb)) return false;
    }
  }
  return true;
}

/// All isomorphisms between the two labelled local orders.
template <typename X, typename Y>
std::vector<PomsetIso> pomset_isos(const X& x, const Configuration& c1, const Y& y, const Configuration& c2) {
  std::vector<PomsetIso> out;
  if (c1.events.size() != c2.events.size()) return out;
  const std::vector<EventIndex> left(c1.events.begin(), c1.events.end());
  std::vector<EventIndex> image(left.size());
  EventSet used;
  auto search = [&](auto&& self, std::size_t i) -> void {
    if (i == left.size()) {
      PomsetIso f;
      for (std::size_t k = 0; k < left.size(); ++k) f.mapping.emplace_back(left[k], image[k]);
      out.push_back(std::move(f));
      return;
    }
    const EventIndex a = left[i];
    for (EventIndex b : c2.events - used) {
      if (x.events().label(a) != y.events().label(b)) continue;
      if (c1.order.holds(a, a) != c2.order.holds(b, b)) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        ok = c1.order.holds(a, left[k]) == c2.order.holds(b, image[k]) &&
             c1.order.holds(left[k], a) == c2.order.holds(image[k], b);
      }
      if (!ok) continue;
      image[i] = b;
      used.insert(b);
      self(self, i + 1);
      used.erase(b);
    }
  };
  search(search, 0);
  return out;
}

enum class Verdict { equivalent, distinguished };

struct HpTriple {
  EventSet left;
  PomsetIso iso;
  EventSet right;

  bool operator==(const HpTriple&) const = default;
};

struct HpMove {
  int side = 1;  // 1: left structure moves, 2: right structure moves
  EventIndex event = 0;
  std::optional<EventIndex> answer;  // matching event on the other side, if any
};

/// A run of matched moves ending in a move that the other side cannot answer.
struct DistinguishingCertificate {
  int side = 1;
  EventSet configuration;  // on `side`, after the unanswered move
  EventSet other;          // configuration of the other side at that point
  std::string label;
  std::vector<HpMove> trace;
};

struct HpWitness {
  Verdict verdict = Verdict::distinguished;
  std::vector<HpTriple> triples;  // surviving triples reachable from (∅, ∅, ∅)
  std::optional<DistinguishingCertificate> distinguishing;
  std::size_t explored = 0;  // candidate triples examined

  bool equivalent() const { return verdict == Verdict::equivalent; }
};

namespace detail {

template <typename S>
class OrderCache {
 public:
  explicit OrderCache(const S& s) : s_(s) {}
  const Relation& operator()(EventSet c) {
    auto it = cache_.find(c.bits());
    if (it == cache_.end()) it = cache_.emplace(c.bits(), local_order(s_, c)).first;
    return it->second;
  }

 private:
  const S& s_;
  std::unordered_map<std::uint64_t, Relation> cache_;
};

}  // namespace detail

/// Largest hp-bisimulation over the triples reachable from (∅, ∅, ∅),
/// computed as a greatest fixed point. A step pairs C1 → C1 ∪ {e1} with
/// C2 → C2 ∪ {e2} and extends the iso by e1 ↦ e2.
template <typename X, typename Y>
HpWitness hp_bisimilar(const X& x, const Y& y, std::size_t cap = capacity_cap()) {
  check_capacity(x.size(), cap, "hp-bisimilarity");
  check_capacity(y.size(), cap, "hp-bisimilarity");

  struct Node {
    EventSet left;
    EventSet right;
    std::vector<std::pair<EventIndex, EventIndex>> map;  // sorted by left event
    std::vector<std::pair<EventIndex, std::vector<std::size_t>>> left_moves;
    std::vector<std::pair<EventIndex, std::vector<std::size_t>>> right_moves;
  };
  std::vector<Node> nodes;
  std::map<std::pair<std::uint64_t, std::vector<std::pair<EventIndex, EventIndex>>>, std::size_t> index;
  detail::OrderCache<X> order_x(x);
  detail::OrderCache<Y> order_y(y);

  auto intern = [&](EventSet l, EventSet r, std::vector<std::pair<EventIndex, EventIndex>> map) {
    auto key = std::make_pair(l.bits(), map);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const std::size_t id = nodes.size();
    index.emplace(std::move(key), id);
    nodes.push_back({l, r, std::move(map), {}, {}});
    return id;
  };

  intern(EventSet{}, EventSet{}, {});
  std::size_t explored = 1;
  for (std::size_t cur = 0; cur < nodes.size(); ++cur) {
    const EventSet l = nodes[cur].left;
    const EventSet r = nodes[cur].right;
    const EventSet en_l = enabled(x, l);
    const EventSet en_r = enabled(y, r);
    std::vector<std::pair<EventIndex, std::vector<std::size_t>>> left_moves;
    std::map<EventIndex, std::vector<std::size_t>> right_succ;
    for (EventIndex e2 : en_r) right_succ[e2];
    for (EventIndex e1 : en_l) {
      std::vector<std::size_t> succ;
      const EventSet l2 = l.with(e1);
      for (EventIndex e2 : en_r) {
        if (x.events().label(e1) != y.events().label(e2)) continue;
        ++explored;
        const EventSet r2 = r.with(e2);
        auto map = nodes[cur].map;
        map.emplace_back(e1, e2);
        std::sort(map.begin(), map.end());
        const Relation& o1 = order_x(l2);
        const Relation& o2 = order_y(r2);
        bool iso = true;
        for (const auto& [a, fa] : map) {
          for (const auto& [b, fb] : map) {
            if (o1.holds(a, b) != o2.holds(fa, fb)) {
              iso = false;
              break;
            }
          }
          if (!iso) break;
        }
        if (!iso) continue;
        const std::size_t id = intern(l2, r2, std::move(map));
        succ.push_back(id);
        right_succ[e2].push_back(id);
      }
      left_moves.emplace_back(e1, std::move(succ));
    }
    nodes[cur].left_moves = std::move(left_moves);
    for (auto& [e2, succ] : right_succ) nodes[cur].right_moves.emplace_back(e2, std::move(succ));
  }

  // Greatest fixed point: drop triples with an unanswerable move.
  std::vector<char> alive(nodes.size(), 1);
  std::vector<std::optional<std::pair<int, std::size_t>>> reason(nodes.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      if (!alive[id]) continue;
      auto check = [&](const auto& moves, int side) {
        for (std::size_t m = 0; m < moves.size(); ++m) {
          const auto& succ = moves[m].second;
          if (std::none_of(succ.begin(), succ.end(), [&](std::size_t s) { return alive[s] != 0; })) {
            reason[id] = std::make_pair(side, m);
            return false;
          }
        }
        return true;
      };
      if (!check(nodes[id].left_moves, 1) || !check(nodes[id].right_moves, 2)) {
        alive[id] = 0;
        changed = true;
      }
    }
  }

  HpWitness w;
  w.explored = explored;
  w.verdict = alive[0] ? Verdict::equivalent : Verdict::distinguished;
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    if (!alive[id]) continue;
    HpTriple t{nodes[id].left, {}, nodes[id].right};
    t.iso.mapping = nodes[id].map;
    w.triples.push_back(std::move(t));
  }
  if (!alive[0]) {
    DistinguishingCertificate cert;
    std::size_t cur = 0;
    for (;;) {
      const auto [side, m] = *reason[cur];
      const auto& move = side == 1 ? nodes[cur].left_moves[m] : nodes[cur].right_moves[m];
      const auto& succ = move.second;
      if (succ.empty()) {
        cert.side = side;
        cert.trace.push_back({side, move.first, std::nullopt});
        const EventSet mine = side == 1 ? nodes[cur].left : nodes[cur].right;
        cert.configuration = mine.with(move.first);
        cert.other = side == 1 ? nodes[cur].right : nodes[cur].left;
        cert.label = side == 1 ? x.events().label(move.first) : y.events().label(move.first);
        break;
      }
      const std::size_t next = succ.front();
      const EventSet moved = side == 1 ? nodes[next].right - nodes[cur].right : nodes[next].left - nodes[cur].left;
      cert.trace.push_back({side, move.first, moved.first()});
      cur = next;
    }
    w.distinguishing = std::move(cert);
  }
  return w;
}

inline HpWitness hp_bisimilar(const EventStructure& x, const EventStructure& y, std::size_t cap = capacity_cap()) {
  return std::visit([cap](const auto& a, const auto& b) { return hp_bisimilar(a, b, cap); }, x, y);
}

/// Independent check that a given set of triples is an hp-bisimulation:
/// contains (∅, ∅, ∅), every iso is a pomset iso, and every step on either
/// side is answered inside the set.
template <typename X, typename Y>
bool is_hp_bisimulation(const X& x, const Y& y, const std::vector<HpTriple>& triples) {
  std::map<std::pair<std::uint64_t, PomsetIso>, bool> members;
  for (const auto& t : triples) members[{t.left.bits(), t.iso}] = true;
  if (!members.count({0, PomsetIso{}})) return false;
  for (const auto& t : triples) {
    const Configuration c1{t.left, local_order(x, t.left)};
    const Configuration c2{t.right, local_order(y, t.right)};
    if (!is_pomset_iso(x, c1, y, c2, t.iso)) return false;
    for (EventIndex e1 : enabled(x, t.left)) {
      bool answered = false;
      for (EventIndex e2 : enabled(y, t.right)) {
        if (x.events().label(e1) == y.events().label(e2) &&
            members.count({t.left.with(e1).bits(), t.iso.extended(e1, e2)})) {
          answered = true;
          break;
        }
      }
      if (!answered) return false;
    }
    for (EventIndex e2 : enabled(y, t.right)) {
      bool answered = false;
      for (EventIndex e1 : enabled(x, t.left)) {
        if (x.events().label(e1) == y.events().label(e2) &&
            members.count({t.left.with(e1).bits(), t.iso.extended(e1, e2)})) {
          answered = true;
          break;
        }
      }
      if (!answered) return false;
    }
  }
  return true;
}

/// Textual report: verdict, certificate, and the triples when few enough.
template <typename X, typename Y>
std::string format_witness(const X& x, const Y& y, const HpWitness& w, std::size_t max_triples = 32) {
  std::string out = w.equivalent() ? "hp-equivalent\n" : "not hp-equivalent\n";
  if (w.distinguishing) {
    const auto& c = *w.distinguishing;
    const EventTable& mine = c.side == 1 ? x.events() : y.events();
    const EventTable& other = c.side == 1 ? y.events() : x.events();
    out += "certificate: " + std::string(c.side == 1 ? "left" : "right") + " reaches " +
           mine.format(c.configuration) + " by a '" + c.label + "' step that " + other.format(c.other) +
           " cannot answer\n";
    out += "trace:";
    for (const auto& m : c.trace) {
      const EventTable& mover = m.side == 1 ? x.events() : y.events();
      const EventTable& answerer = m.side == 1 ? y.events() : x.events();
      out += std::string(" ") + (m.side == 1 ? "L:" : "R:") + mover.id(m.event);
      out += m.answer ? "/" + answerer.id(*m.answer) : "/-";
    }
    out += "\n";
  }
  out += "triples: " + std::to_string(w.triples.size()) + "\n";
  if (w.triples.size() <= max_triples) {
    for (const auto& t : w.triples) {
      out += "  (" + x.events().format(t.left) + ", [";
      bool first = true;
      for (const auto& [a, b] : t.iso.mapping) {
        if (!first) out += ", ";
        out += x.events().id(a) + "->" + y.events().id(b);
        first = false;
      }
      out += "], " + y.events().format(t.right) + ")\n";
    }
  }
  return out;
}

}  // namespace esfold
