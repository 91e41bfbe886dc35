#include "specbundle/system.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

namespace specbundle {

void FinSystem::validate() const {
  if (n_states < 1) throw InvalidInput("system needs at least one state");
  if (static_cast<int>(transition.size()) != n_states)
    throw InvalidInput("transition table length != n_states");
  for (int i = 0; i < n_states; ++i)
    if (transition[i] < 0 || transition[i] >= n_states)
      throw InvalidInput("transition entry out of range at state " +
                         std::to_string(i));
}

void FinBundle::validate() const {
  system.validate();
  auto report = validate_bundle(system, n_base, proj);
  if (!report.valid) {
    if (!report.missing_bases.empty())
      throw InvalidInput("projection not surjective: base point " +
                         std::to_string(report.missing_bases.front()) +
                         " has empty fiber");
    auto [state, fiber] = report.fiber_violations.front();
    throw InvalidInput("fiber not invariant: state " + std::to_string(state) +
                       " in fiber " + std::to_string(fiber) +
                       " maps out of it");
  }
}

BundleValidationReport validate_bundle(const FinSystem& system, int n_base,
                                       const std::vector<int>& proj) {
  BundleValidationReport report;
  if (n_base < 1 || static_cast<int>(proj.size()) != system.n_states)
    throw InvalidInput("projection table length != n_states or empty base");
  for (int i = 0; i < system.n_states; ++i)
    if (proj[i] < 0 || proj[i] >= n_base)
      throw InvalidInput("projection entry out of range at state " +
                         std::to_string(i));

  std::vector<bool> hit(n_base, false);
  for (int i = 0; i < system.n_states; ++i) hit[proj[i]] = true;
  for (int b = 0; b < n_base; ++b)
    if (!hit[b]) report.missing_bases.push_back(b);

  for (int i = 0; i < system.n_states; ++i)
    if (proj[system.transition[i]] != proj[i])
      report.fiber_violations.emplace_back(i, proj[i]);

  report.valid = report.missing_bases.empty() && report.fiber_violations.empty();
  return report;
}

bool has_discrete_spectrum(const FinSystem& s) {
  std::vector<bool> seen(s.n_states, false);
  for (int image : s.transition) {
    if (seen[image]) return false;
    seen[image] = true;
  }
  return true;
}

bool is_minimal(const FinSystem& s) {
  int x = 0;
  for (int step = 0; step < s.n_states; ++step) {
    x = s.transition[x];
    if (x == 0) return step + 1 == s.n_states;
  }
  return false;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int i, int j) {
    int pi = find(i), pj = find(j);
    if (pi != pj) parent[std::max(pi, pj)] = std::min(pi, pj);
  }
};

}  // namespace

FinBundle maximal_trivial_factor(const FinSystem& s) {
  UnionFind uf(s.n_states);
  for (int i = 0; i < s.n_states; ++i) uf.unite(i, s.transition[i]);

  // Roots are component minima; label them by ascending root.
  std::map<int, int> label_of_root;
  for (int i = 0; i < s.n_states; ++i) {
    int root = uf.find(i);
    label_of_root.emplace(root, 0);
  }
  int next = 0;
  for (auto& [root, label] : label_of_root) label = next++;

  std::vector<int> proj(s.n_states);
  for (int i = 0; i < s.n_states; ++i) proj[i] = label_of_root[uf.find(i)];
  return FinBundle(s, next, std::move(proj));
}

FiberSubsystem fiber_subsystem(const FinBundle& b, int l) {
  if (l < 0 || l >= b.n_base) throw InvalidInput("base index out of range");
  FiberSubsystem out;
  std::vector<int> local(b.system.n_states, -1);
  for (int i = 0; i < b.system.n_states; ++i)
    if (b.proj[i] == l) {
      local[i] = static_cast<int>(out.original_state.size());
      out.original_state.push_back(i);
    }
  std::vector<int> map(out.original_state.size());
  for (std::size_t j = 0; j < out.original_state.size(); ++j)
    map[j] = local[b.system.transition[out.original_state[j]]];
  const int n_fiber = static_cast<int>(map.size());
  out.system = FinSystem(n_fiber, std::move(map));
  return out;
}

bool fibers_minimal_check(const FinBundle& b) {
  if (!has_discrete_spectrum(b.system)) throw DiscreteSpectrumRequired();
  for (int l = 0; l < b.n_base; ++l) {
    auto fiber = fiber_subsystem(b, l);
    if (!is_minimal(fiber.system) || !has_discrete_spectrum(fiber.system))
      return false;
  }
  return true;
}

Section canonical_section(const FinBundle& b) {
  Section s;
  s.choice.assign(b.n_base, -1);
  for (int i = b.system.n_states - 1; i >= 0; --i) s.choice[b.proj[i]] = i;
  return s;
}

FinBundle factor_from_partition(const FinSystem& s,
                                const std::vector<int>& block_of_state) {
  if (block_of_state.size() != static_cast<std::size_t>(s.n_states))
    throw InvalidInput("block labeling length != n_states");
  int n_blocks = 0;
  for (int label : block_of_state) {
    if (label < 0) throw InvalidInput("negative block label");
    n_blocks = std::max(n_blocks, label + 1);
  }
  // Deterministic error: name the crossing edge with the largest source.
  for (int i = s.n_states - 1; i >= 0; --i)
    if (block_of_state[s.transition[i]] != block_of_state[i])
      throw InvalidInput("partition refines across edge " + std::to_string(i) +
                         " -> " + std::to_string(s.transition[i]));
  return FinBundle(s, n_blocks, block_of_state);
}

PullbackResult pullback(const FinBundle& b, const std::vector<int>& r) {
  std::vector<bool> hit(b.n_base, false);
  for (int image : r) {
    if (image < 0 || image >= b.n_base)
      throw InvalidInput("base map entry out of range");
    hit[image] = true;
  }
  for (int base = 0; base < b.n_base; ++base)
    if (!hit[base])
      throw InvalidInput("base map not surjective: base point " +
                         std::to_string(base) + " missed");

  const int n_new_base = static_cast<int>(r.size());
  PullbackResult out;
  std::vector<std::vector<int>> index_of(n_new_base,
                                         std::vector<int>(b.system.n_states, -1));
  std::vector<int> proj;
  for (int m = 0; m < n_new_base; ++m)
    for (int k = 0; k < b.system.n_states; ++k)
      if (r[m] == b.proj[k]) {
        index_of[m][k] = static_cast<int>(out.pi_base.size());
        out.pi_base.push_back(m);
        out.pi_total.push_back(k);
        proj.push_back(m);
      }

  std::vector<int> map(out.pi_base.size());
  for (std::size_t i = 0; i < map.size(); ++i)
    map[i] = index_of[out.pi_base[i]][b.system.transition[out.pi_total[i]]];

  const int n_total = static_cast<int>(map.size());
  out.bundle = FinBundle(FinSystem(n_total, std::move(map)),
                         n_new_base, std::move(proj));
  return out;
}

}  // namespace specbundle
