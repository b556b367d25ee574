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

#include <algorithm>
#include <iostream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace esfold;

namespace {

struct Outcome {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::vector<EventSet> sets(const EventTable& t, const std::vector<std::vector<std::string>>& ids) {
  std::vector<EventSet> out;
  for (const auto& s : ids) out.push_back(t.set_of(s));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EventSet> sorted(std::vector<EventSet> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Outcome fixture_gate() {
  Outcome o;
  const Aes a0 = oracle::fixture<Aes>("a0.json");
  const auto& t = a0.events();
  o.require(sorted(maximal_sets(configuration_sets(a0))) == sets(t, {{"c0"}, {"d", "c1"}, {"d", "e", "c2"}}),
            "maximal configurations of A0");
  o.require(strict_causes(a0, t.set_of({"c0", "c1"})).empty(), "S({c0,c1}) = {}");
  o.require(weak_predecessors(a0, t.set_of({"c0", "c1"})) == t.set_of({"d"}), "W({c0,c1}) = {d}");
  o.require(strict_causes(a0, t.set_of({"c1", "c2"})) == t.set_of({"d"}), "S({c1,c2}) = {d}");
  o.require(weak_predecessors(a0, t.set_of({"c1", "c2"})) == t.set_of({"e"}), "W({c1,c2}) = {e}");
  return o;
}

Outcome aes_fold_pipeline() {
  Outcome o;
  const Aes a0 = oracle::fixture<Aes>("a0.json");
  const Aes a1 = oracle::fixture<Aes>("a1.json");
  const Aes a2 = oracle::fixture<Aes>("a2.json");
  const auto fold = fold_aes(a0, a0.events().set_of({"c0", "c1"}));
  o.require(isomorphic(fold.structure, a1).has_value(), "fold(A0, {c0,c1}) isomorphic to A1");
  const Aes& f = fold.structure;
  std::vector<std::string> dashed;
  for (const auto& [x, y] : f.aconflict().pairs()) {
    if (!f.aconf(y, x) && !f.lt(x, y)) dashed.push_back(f.events().id(x) + "->" + f.events().id(y));
  }
  o.require(dashed == std::vector<std::string>{"d->c0+c1"}, "single asymmetric conflict d -> c0+c1");
  o.require(hp_bisimilar(a0, a1).equivalent(), "A0 and A1 hp-equivalent");
  o.require(!hp_bisimilar(a0, a2).equivalent(), "A0 and forced A2 distinguished");
  return o;
}

Outcome forced_histories() {
  Outcome o;
  const Aes a2 = oracle::fixture<Aes>("a2.json");
  const auto& t = a2.events();
  std::vector<EventSet> got;
  for (const auto& h : histories(a2, t.index_of("c0+c2"))) got.push_back(h.events);
  o.require(sorted(got) == sets(t, {{"c0+c2"}, {"d", "c0+c2"}, {"e", "c0+c2"}, {"d", "e", "c0+c2"}}),
            "four histories of c0+c2");
  return o;
}

Outcome minimal_forms() {
  Outcome o;
  const auto forms = all_minimal_forms(oracle::fixture<Aes>("a0.json"));
  o.require(!forms.partial, "exploration complete");
  o.require(forms.classes.size() == 2, "two classes, got " + std::to_string(forms.classes.size()));
  return o;
}

Outcome fes_pipeline() {
  Outcome o;
  const Fes f0 = oracle::fixture<Fes>("f0.json");
  const auto& t = f0.events();
  const auto plan = is_combinable_fes(f0, t.set_of({"c1", "c2"}));
  o.require(plan.combinable(), "{c1,c2} combinable");
  if (!plan.combinable()) return o;
  const auto fold = fold_fes(f0, plan);
  const Fes& f1 = fold.structure;
  const auto& u = f1.events();
  o.require(isomorphic(f1, oracle::fixture<Fes>("f1.json")).has_value(), "fold isomorphic to F1");
  o.require(sorted(mcons(f1, f1.pre(fold.map.merged))) == sets(u, {{"b"}, {"d", "e"}}),
            "mcons(pre(c1+c2)) = {{b},{d,e}}");
  o.require(!is_combinable_fes(f0, t.set_of({"c0", "c1"})).combinable(), "{c0,c1} rejected");
  o.require(hp_bisimilar(f0, f1).equivalent(), "F0 and F1 hp-equivalent");
  return o;
}

Outcome condition_five() {
  Outcome o;
  const Fes f2 = oracle::fixture<Fes>("f2.json");
  const auto x = f2.events().set_of({"ax", "ax'"});
  const auto plan = is_combinable_fes(f2, x);
  o.require(!plan.combinable() && !plan.holds(5), "F2 pair fails condition 5");
  const Fes f3 = fold_fes(f2, plan, true).structure;
  const auto report = validate_fes_semantic(f3);
  o.require(report.has(clause::kFesFull), "forced fold has a dead event");
  bool c_dead = false;
  for (const auto& v : report.violations) {
    c_dead = c_dead || (v.clause == std::string(clause::kFesFull) && f3.events().id(v.witness.front()) == "c");
  }
  o.require(c_dead, "c is dead after the forced fold");
  for (EventSet c : configuration_sets(f3)) o.require(!c.contains(f3.events().index_of("c")), "c never fires");

  const Fes f4 = oracle::fixture<Fes>("f4.json");
  const auto& t = f4.events();
  const EventIndex e = t.index_of("e");
  const EventIndex a1 = t.index_of("a1");
  o.require(direct_conflict_fes(f4, e, a1), "e #mu a1");
  o.require(!direct_conflict_fes(f4, a1, e), "not a1 #mu e");
  const auto p4 = is_combinable_fes(f4, t.set_of({"a0", "a1"}));
  o.require(p4.combinable(), "F4 pair accepted");
  if (!p4.combinable()) return o;
  const Fes f5 = fold_fes(f4, p4).structure;
  const auto& u = f5.events();
  o.require(sorted(mcons(f5, f5.pre(u.index_of("c")))) == sets(u, {{"a0+a1", "f"}, {"a0+a1", "b"}}),
            "predecessor sets {a0+a1,f} and {a0+a1,b}");
  o.require(hp_bisimilar(f4, f5).equivalent(), "F4 and its fold hp-equivalent");
  return o;
}

struct PropertyCount {
  std::size_t folds = 0;
  std::size_t invalid = 0;
  std::size_t unpreserved = 0;
  std::size_t inequivalent = 0;
  std::string first;
};

template <typename S, typename Validate>
void check_folds(const S& s, std::uint64_t seed, Validate validate, PropertyCount& pc) {
  for (const auto& c : combinable_candidates(s)) {
    ++pc.folds;
    const S folded = fold_with(s, c.plan);
    const auto map = [&] {
      if constexpr (std::is_same_v<S, Aes>) {
        return fold_aes(s, c.plan).map;
      } else {
        return fold_fes(s, c.plan).map;
      }
    }();
    const bool valid = validate(folded);
    const bool preserved = check_configuration_preservation(s, folded, map).empty();
    const bool equivalent = hp_bisimilar(s, folded).equivalent();
    pc.invalid += !valid;
    pc.unpreserved += !preserved;
    pc.inequivalent += !equivalent;
    if ((!valid || !preserved || !equivalent) && pc.first.empty()) {
      pc.first = "seed " + std::to_string(seed) + " X = " + s.events().format(c.set);
    }
  }
}

Outcome property_suite() {
  Outcome o;
  constexpr std::uint64_t kSamples = 250;
  PropertyCount aes;
  PropertyCount fes;
  std::size_t divergent = 0;
  std::size_t subset_combinable = 0;
  for (std::uint64_t seed = 1; seed <= kSamples; ++seed) {
    const Pes p = generate_random_pes({8, 3, 0.25, 0.3, seed});
    const Aes a = pes_to_aes(p);
    const Fes f = pes_to_fes(p);
    check_folds(a, seed, [](const Aes& x) { return validate_aes(x).ok(); }, aes);
    check_folds(f, seed, [](const Fes& x) { return validate_fes_semantic(x).ok(); }, fes);
    for (const auto& c : combinable_candidates(a)) {
      ++subset_combinable;
      divergent += !is_combinable_aes(a, c.set, HistoryMatch::equal).combinable();
    }
  }
  auto report = [&o](const char* kind, const PropertyCount& pc) {
    o.notes.push_back(std::string(kind) + ": " + std::to_string(pc.folds) + " folds, " + std::to_string(pc.invalid) +
                      " invalid, " + std::to_string(pc.unpreserved) + " not configuration-preserving, " +
                      std::to_string(pc.inequivalent) + " not hp-equivalent" +
                      (pc.first.empty() ? "" : " (first: " + pc.first + ")"));
    o.require(pc.folds > 0, std::string(kind) + ": no combinable sets found");
    o.require(pc.invalid == 0, std::string(kind) + ": folded structure fails its validator");
    o.require(pc.unpreserved == 0, std::string(kind) + ": configuration not preserved");
    o.require(pc.inequivalent == 0, std::string(kind) + ": fold not hp-equivalent");
  };
  report("aes", aes);
  report("fes", fes);
  o.notes.push_back("aes history match: " + std::to_string(divergent) + " of " + std::to_string(subset_combinable) +
                    " subset-combinable sets rejected under equality");
  return o;
}

Outcome oracle_equivalences() {
  Outcome o;
  std::size_t aes_checked = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto a = oracle::random_aes(seed, 8, 0.3);
    if (!a) continue;
    ++aes_checked;
    const auto confs = oracle::configurations(*a);
    for (EventIndex e = 0; e < a->size(); ++e) {
      for (EventIndex e2 = 0; e2 < a->size(); ++e2) {
        if (e == e2) continue;
        bool together = false;
        for (EventSet c : confs) together = together || (c.contains(e) && c.contains(e2));
        o.require(binary_conflict_aes(*a, e, e2) == !together, "aes binary conflict, seed " + std::to_string(seed));
      }
    }
  }
  o.require(aes_checked >= 100, "too few valid random AESs");
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Fes f = oracle::random_fes(seed, 8, 0.2, 0.2);
    const auto confs = oracle::configurations(f);
    const Relation semantic = semantic_conflict_fes(f);
    for (EventIndex e = 0; e < f.size(); ++e) {
      for (EventIndex e2 = 0; e2 < f.size(); ++e2) {
        bool together = false;
        for (EventSet c : confs) together = together || (c.contains(e) && c.contains(e2));
        o.require(semantic.holds(e, e2) == !together, "fes semantic conflict, seed " + std::to_string(seed));
      }
    }
  }
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Aes a = pes_to_aes(generate_random_pes({8, 3, 0.25, 0.3, seed}));
    const Aes b = pes_to_aes(generate_random_pes({8, 3, 0.25, 0.3, seed + 1000}));
    std::vector<std::size_t> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    const bool v = hp_bisimilar(a, b).equivalent();
    o.require(hp_bisimilar(oracle::permuted(a, perm), b).equivalent() == v, "renaming invariance, seed " + std::to_string(seed));
    o.require(hp_bisimilar(a, oracle::permuted(a, perm)).equivalent(), "renamed copy equivalent, seed " + std::to_string(seed));
    const Fes f = pes_to_fes(generate_random_pes({8, 3, 0.25, 0.3, seed}));
    o.require(hp_bisimilar(f, oracle::permuted(f, perm)).equivalent(), "renamed fes equivalent, seed " + std::to_string(seed));
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria = {
      {"fixture reconstruction", fixture_gate},
      {"aes fold pipeline", aes_fold_pipeline},
      {"histories of the forced fold", forced_histories},
      {"minimal forms of A0", minimal_forms},
      {"fes fold pipeline", fes_pipeline},
      {"condition five", condition_five},
      {"random property suite", property_suite},
      {"oracle equivalences", oracle_equivalences},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = o.failures.empty();
    failed += !ok;
    std::cout << "criterion " << i + 1 << " [" << criteria[i].name << "]: " << (ok ? "PASS" : "FAIL") << "\n";
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    std::vector<std::string> shown = o.failures;
    shown.erase(std::unique(shown.begin(), shown.end()), shown.end());
    for (std::size_t k = 0; k < shown.size() && k < 10; ++k) std::cout << "    - " << shown[k] << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
