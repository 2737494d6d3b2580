#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rgroups/certificate.hpp"
#include "rgroups/errors.hpp"
#include "rgroups/parallel.hpp"
#include "rgroups/rational.hpp"
#include "rgroups/words.hpp"

// Triviality pipeline for a concrete presentation:
//   1. find two relators whose tails agree from position k+1 on; their
//      length-k prefixes give a trivial word w of length 2k;
//   2-3. keep the first two letters of every relator, cut the rest into blocks
//      of (2k+2)(2m-1)^(2k) letters and delete one d w d^-1 per block;
//   4. relators (reduced or not) that agree after their first letter prove
//      equalities between first letters.
// The group is reported trivial only when those equalities connect all 2m
// letters; each equality ships with a replayable certificate.

namespace rgroups {

/// k = max(1, round(log(ell)/2 - log log(ell))), logs base 2m-1, capped at ell.
inline int choose_k(int m, int ell) {
  if (m < 2 || m > kMaxGenerators) throw DomainError("m must lie in [2, 26]");
  if (ell < 2) throw DomainError("choose_k needs ell >= 2");
  const long double base = std::log(static_cast<long double>(2 * m - 1));
  const long double log_ell = std::log(static_cast<long double>(ell)) / base;
  const long double value = 0.5L * log_ell - std::log(log_ell) / base;
  const long long k = std::llround(value);
  return static_cast<int>(std::clamp<long long>(k, 1, ell));
}

/// (2k+2)(2m-1)^(2k), saturating at UINT64_MAX.
inline std::uint64_t reduction_block_size(int m, int k) {
  std::uint64_t size = static_cast<std::uint64_t>(2 * k + 2);
  const auto base = static_cast<std::uint64_t>(2 * m - 1);
  for (int i = 0; i < 2 * k; ++i) {
    if (size > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    size *= base;
  }
  return size;
}

/// Number of full blocks after the two reserved letters.
inline std::uint64_t reduction_block_count(std::size_t length, std::uint64_t block_size) {
  return length >= 2 ? (length - 2) / block_size : 0;
}

struct TrivializerConfig {
  static constexpr std::size_t kReservedPrefix = 2;

  int k = 1;
  std::uint64_t block_size = 36;
  /// Rounds beyond the first reuse further tail collisions as extra w's.
  int max_rounds = 1;
  int threads = 1;

  static TrivializerConfig make(int m, int ell, std::optional<int> k_override = std::nullopt, int max_rounds = 1,
                                int threads = 1) {
    TrivializerConfig cfg;
    cfg.k = k_override ? *k_override : choose_k(m, std::max(ell, 2));
    if (cfg.k < 1 || cfg.k > ell) throw DomainError("k must satisfy 1 <= k <= ell");
    if (max_rounds < 1) throw DomainError("max_rounds must be >= 1");
    cfg.block_size = reduction_block_size(m, cfg.k);
    cfg.max_rounds = max_rounds;
    cfg.threads = threads;
    return cfg;
  }
};

struct TailCollision {
  std::size_t first = 0;
  std::size_t second = 0;
  int split = 0;
  /// (first[1:k])^-1 second[1:k], freely reduced, length 2k.
  Word w;
};

/// Restricts collisions to relators starting with `first_prefix` (left side)
/// and `second_prefix` (right side).
struct PrefixFilter {
  Word first_prefix;
  Word second_prefix;
};

namespace detail {

struct KeyedEntry {
  Hash128 key;
  std::uint32_t length = 0;
  std::uint8_t side = 0;
  std::size_t index = 0;

  friend bool operator<(const KeyedEntry& a, const KeyedEntry& b) {
    if (a.length != b.length) return a.length < b.length;
    if (a.key != b.key) return a.key < b.key;
    return a.index < b.index;
  }
  bool same_bucket(const KeyedEntry& o) const { return length == o.length && key == o.key; }
};

inline bool starts_with(const Word& r, const Word& prefix) {
  return r.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), r.begin());
}

inline bool tails_equal(const Word& a, const Word& b, std::size_t from) {
  return a.size() == b.size() && std::equal(a.begin() + static_cast<std::ptrdiff_t>(from - 1), a.end(),
                                            b.begin() + static_cast<std::ptrdiff_t>(from - 1));
}

/// Buckets of entries sharing (length, hash) of the slice [from:], in sorted order.
template <typename WordAt>
std::vector<KeyedEntry> keyed_entries(std::size_t count, std::size_t from, int threads, WordAt&& word_at,
                                      std::vector<std::uint8_t> const* sides = nullptr) {
  std::vector<KeyedEntry> entries(count);
  constexpr std::size_t kChunk = 1U << 14;
  parallel_chunks((count + kChunk - 1) / kChunk, threads, [&](std::size_t c) {
    for (std::size_t i = c * kChunk; i < std::min(count, (c + 1) * kChunk); ++i) {
      const Word& w = word_at(i);
      auto& e = entries[i];
      e.index = i;
      e.length = static_cast<std::uint32_t>(w.size());
      e.side = sides ? (*sides)[i] : 0;
      e.key = w.size() + 1 >= from ? hash_letters(slice_view(w, from, w.size())) : Hash128{};
    }
  });
  std::sort(entries.begin(), entries.end());
  return entries;
}

}  // namespace detail

/// All pairs of relators with equal tails from position k+1 that differ at
/// position k and in their first letter. Without a filter, pairs are (i, j)
/// with i < j; with one, `first` starts with filter.first_prefix and `second`
/// with filter.second_prefix. Sorted by (first, second). Tails are bucketed by a
/// 128-bit hash and compared exactly.
inline std::vector<TailCollision> find_tail_collisions(const Presentation& R, int k,
                                                       const std::optional<PrefixFilter>& filter = std::nullopt,
                                                       int threads = 1) {
  if (k < 1) throw DomainError("k must be >= 1");
  const std::size_t split = static_cast<std::size_t>(k);
  std::vector<std::uint8_t> sides(R.relators.size(), 0);
  if (filter) {
    const auto& p1 = filter->first_prefix;
    const auto& p2 = filter->second_prefix;
    if (p1.empty() || p2.empty() || p1[0] == p2[0]) {
      throw DomainError("prefix filter needs nonempty prefixes with distinct first letters");
    }
    for (std::size_t i = 0; i < R.relators.size(); ++i) {
      sides[i] = detail::starts_with(R.relators[i], p1) ? 1 : detail::starts_with(R.relators[i], p2) ? 2 : 0;
    }
  } else {
    std::fill(sides.begin(), sides.end(), 3);
  }
  const auto entries =
      detail::keyed_entries(R.relators.size(), split + 1, threads, [&](std::size_t i) -> const Word& { return R.relators[i]; }, &sides);

  std::vector<TailCollision> out;
  for (std::size_t lo = 0; lo < entries.size();) {
    std::size_t hi = lo + 1;
    while (hi < entries.size() && entries[hi].same_bucket(entries[lo])) ++hi;
    for (std::size_t a = lo; a < hi; ++a) {
      for (std::size_t b = lo; b < hi; ++b) {
        const auto& ea = entries[a];
        const auto& eb = entries[b];
        if (ea.side == 0 || eb.side == 0 || ea.length < split) continue;
        if (filter ? !(ea.side == 1 && eb.side == 2) : !(ea.index < eb.index)) continue;
        const Word& r1 = R.relators[ea.index];
        const Word& r2 = R.relators[eb.index];
        if (r1[0] == r2[0] || r1.at(split) == r2.at(split)) continue;
        if (!detail::tails_equal(r1, r2, split + 1)) continue;
        out.push_back({ea.index, eb.index, k, concat_reduce(invert(slice(r1, 1, split)), slice(r2, 1, split))});
      }
    }
    lo = hi;
  }
  std::sort(out.begin(), out.end(),
            [](const TailCollision& a, const TailCollision& b) { return std::tie(a.first, a.second) < std::tie(b.first, b.second); });
  return out;
}

struct WReductionEvent {
  /// Deleted span d w d^-1, one-based inclusive, in the word before deletion.
  std::size_t start = 0;
  std::size_t end = 0;
  Word conjugator;
  Letter s;
  Letter t;
};

/// Finds the leftmost occurrence of w inside [search_from, search_to] (0 means
/// |r|) that extends to s d w d^-1 t with s != t^-1, all inside the range. d is
/// grown greedily outward while the letters on both sides cancel; once that
/// stops, the flanking letters are s and t. Returns r with d w d^-1 deleted.
inline std::optional<std::pair<Word, WReductionEvent>> w_reduce_once(const Word& r, const Word& w,
                                                                     std::size_t search_from, std::size_t search_to = 0) {
  if (w.size() < 2) throw DomainError("w must have length >= 2");
  if (search_from < 1) throw DomainError("search positions are one-based");
  if (search_to == 0 || search_to > r.size()) search_to = r.size();
  if (search_to < search_from || search_to - search_from + 1 < w.size() + 2) return std::nullopt;

  for (std::size_t p = search_from + 1; p + w.size() <= search_to; ++p) {
    if (!std::equal(w.begin(), w.end(), r.begin() + static_cast<std::ptrdiff_t>(p - 1))) continue;
    std::size_t left = p;
    std::size_t right = p + w.size() - 1;
    while (left - 1 >= search_from && right + 1 <= search_to && cancels(r.at(left - 1), r.at(right + 1))) {
      --left;
      ++right;
      if (left == 1) break;
    }
    if (left - 1 < search_from || left == 1 || right + 1 > search_to) continue;
    WReductionEvent event;
    event.start = left;
    event.end = right;
    event.conjugator = slice(r, left, p - 1);
    event.s = r.at(left - 1);
    event.t = r.at(right + 1);
    std::vector<Letter> rest(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(left - 1));
    rest.insert(rest.end(), r.begin() + static_cast<std::ptrdiff_t>(right), r.end());
    return std::make_pair(Word::from_reduced(std::move(rest)), std::move(event));
  }
  return std::nullopt;
}

struct ReducedRelator {
  Word word;
  /// Events in application order; each event's positions refer to the word
  /// produced by the previous event.
  std::vector<WReductionEvent> events;
};

/// Applies at most one w-reduction per block. Blocks start at the third letter
/// and have cfg.block_size letters; with b = floor((|r|-2)/block_size) >= 1 full
/// blocks, any leftover letters form one shorter final block. b = 0 leaves r
/// untouched.
inline ReducedRelator reduce_relator(const Word& r, const Word& w, const TrivializerConfig& cfg) {
  ReducedRelator out{r, {}};
  const std::uint64_t full = reduction_block_count(r.size(), cfg.block_size);
  if (full == 0) return out;
  const std::size_t body = r.size() - TrivializerConfig::kReservedPrefix;
  const std::uint64_t blocks = full + (body % cfg.block_size != 0 ? 1 : 0);
  std::size_t removed = 0;
  for (std::uint64_t i = 0; i < blocks; ++i) {
    const std::size_t lo = TrivializerConfig::kReservedPrefix + 1 + i * cfg.block_size;
    const std::size_t hi = std::min<std::size_t>(lo + cfg.block_size - 1, r.size());
    if (auto hit = w_reduce_once(out.word, w, lo - removed, hi - removed)) {
      removed += hit->second.end - hit->second.start + 1;
      out.word = std::move(hit->first);
      out.events.push_back(std::move(hit->second));
    }
  }
  return out;
}

enum class AbelianizationVerdict { PossiblyTrivial, CertainlyNontrivial };

inline const char* to_string(AbelianizationVerdict v) {
  return v == AbelianizationVerdict::PossiblyTrivial ? "possibly-trivial" : "certainly-nontrivial";
}

/// Rank over Q of the |R| x m matrix of exponent sums.
inline std::size_t exponent_sum_rank(const Presentation& R) {
  const auto m = static_cast<std::size_t>(R.m);
  std::set<std::vector<long long>> rows;
  for (const auto& r : R.relators) {
    std::vector<long long> row(m, 0);
    for (Letter x : r) row[static_cast<std::size_t>(x.generator_index() - 1)] += x.inverted() ? -1 : 1;
    if (std::any_of(row.begin(), row.end(), [](long long v) { return v != 0; })) rows.insert(std::move(row));
  }
  // Echelon basis kept sorted by pivot column; fraction-free elimination.
  std::vector<std::pair<std::size_t, std::vector<BigInt>>> basis;
  for (const auto& raw : rows) {
    std::vector<BigInt> v(raw.begin(), raw.end());
    for (const auto& [pivot, b] : basis) {
      if (v[pivot] == 0) continue;
      const BigInt scale_v = b[pivot];
      const BigInt scale_b = v[pivot];
      BigInt g = 0;
      for (std::size_t j = 0; j < m; ++j) {
        v[j] = v[j] * scale_v - b[j] * scale_b;
        g = boost::multiprecision::gcd(g, v[j]);
      }
      if (g > 1) {
        for (auto& e : v) e /= g;
      }
    }
    const auto nz = std::find_if(v.begin(), v.end(), [](const BigInt& e) { return e != 0; });
    if (nz == v.end()) continue;
    const auto pivot = static_cast<std::size_t>(nz - v.begin());
    basis.insert(std::upper_bound(basis.begin(), basis.end(), pivot,
                                  [](std::size_t p, const auto& entry) { return p < entry.first; }),
                 {pivot, std::move(v)});
    if (basis.size() == m) break;
  }
  return basis.size();
}

/// Rank below m means the abelianization is infinite, so the group is not trivial.
inline AbelianizationVerdict abelianization_guard(const Presentation& R) {
  return exponent_sum_rank(R) < static_cast<std::size_t>(R.m) ? AbelianizationVerdict::CertainlyNontrivial
                                                               : AbelianizationVerdict::PossiblyTrivial;
}

enum class Outcome { Trivial, Unknown };

inline const char* to_string(Outcome o) { return o == Outcome::Trivial ? "trivial" : "unknown"; }

struct TrivializerStats {
  std::size_t relators = 0;
  std::size_t collisions_found = 0;
  std::size_t reductions_applied = 0;
  std::size_t reduced_relators = 0;
  /// Reduced relators of length at most ell - b k / 2.
  std::size_t short_relators = 0;
  std::size_t candidate_edges = 0;
  int rounds = 0;
  double ell_prime = 0.0;
};

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  int k = 1;
  std::uint64_t block_size = 0;
  std::uint64_t blocks = 0;
  /// The w of each round that had one.
  std::vector<Word> reducers;
  /// One certificate per accepted equality; together with x = y => x^-1 = y^-1
  /// they connect all 2m letters exactly when outcome is Trivial.
  std::vector<Certificate> certificates;
  TrivializerStats stats;
};

namespace detail {

/// Union-find over the 2m letters closed under x = y => x^-1 = y^-1.
class LetterClasses {
 public:
  explicit LetterClasses(int m) : parent_(static_cast<std::size_t>(2 * m)), components_(2 * m) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  bool merge(Letter x, Letter y) {
    const bool a = unite(x.index(), y.index());
    const bool b = unite(x.inverse().index(), y.inverse().index());
    return a || b;
  }
  bool connected() const { return components_ == 1; }

 private:
  int find(int i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    --components_;
    return true;
  }
  std::vector<int> parent_;
  int components_;
};

/// Derivation DAG shared by all certificates of one run. Node ids grow in
/// creation order, so every node cites only smaller ids.
class DerivationGraph {
 public:
  explicit DerivationGraph(const Presentation& R) : R_(R) {}

  std::size_t relator(std::size_t i) {
    if (auto it = relator_node_.find(i); it != relator_node_.end()) return it->second;
    const std::size_t id = add(RelatorStep{i, R_.relators[i]});
    relator_node_.emplace(i, id);
    return id;
  }

  std::size_t add(DerivationStep step) {
    nodes_.push_back(std::move(step));
    return nodes_.size() - 1;
  }

  const Word& word(std::size_t id) const { return step_word(nodes_[id]); }

  Certificate extract(Letter x, Letter y, std::size_t conclusion) const {
    std::vector<char> keep(conclusion + 1, 0);
    std::vector<std::size_t> stack{conclusion};
    while (!stack.empty()) {
      const std::size_t id = stack.back();
      stack.pop_back();
      if (keep[id]) continue;
      keep[id] = 1;
      for (std::size_t dep : dependencies(nodes_[id])) stack.push_back(dep);
    }
    std::vector<std::size_t> remap(conclusion + 1, 0);
    Certificate cert{x, y, {}};
    for (std::size_t id = 0; id <= conclusion; ++id) {
      if (!keep[id]) continue;
      remap[id] = cert.steps.size();
      DerivationStep step = nodes_[id];
      std::visit(
          [&](auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TailCollisionStep> || std::is_same_v<T, TailMatchStep>) {
              s.left = remap[s.left];
              s.right = remap[s.right];
            } else if constexpr (std::is_same_v<T, WReductionStep>) {
              s.host = remap[s.host];
              s.reducer = remap[s.reducer];
            }
          },
          step);
      cert.steps.push_back(std::move(step));
    }
    return cert;
  }

 private:
  static std::vector<std::size_t> dependencies(const DerivationStep& step) {
    return std::visit(
        [](const auto& s) -> std::vector<std::size_t> {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, TailCollisionStep> || std::is_same_v<T, TailMatchStep>) return {s.left, s.right};
          else if constexpr (std::is_same_v<T, WReductionStep>) return {s.host, s.reducer};
          else return {};
        },
        step);
  }

  const Presentation& R_;
  std::vector<DerivationStep> nodes_;
  std::unordered_map<std::size_t, std::size_t> relator_node_;
};

}  // namespace detail

/// Runs the pipeline. Never claims nontriviality: a stalled run is Unknown.
/// Deterministic for fixed input and config, independent of cfg.threads.
inline Verdict trivialize(const Presentation& R, const TrivializerConfig& cfg) {
  if (R.m < 2 || R.m > kMaxGenerators) throw DomainError("m must lie in [2, 26]");
  if (cfg.k < 1 || cfg.max_rounds < 1 || cfg.block_size < 1) throw DomainError("invalid trivializer config");
  const std::size_t n = R.relators.size();
  std::size_t ell = 0;
  for (const auto& r : R.relators) ell = std::max(ell, r.size());

  Verdict verdict;
  verdict.k = cfg.k;
  verdict.block_size = cfg.block_size;
  verdict.blocks = reduction_block_count(ell, cfg.block_size);
  verdict.stats.relators = n;
  verdict.stats.ell_prime = static_cast<double>(ell) - static_cast<double>(verdict.blocks) * cfg.k / 2.0;

  detail::DerivationGraph graph(R);
  detail::LetterClasses classes(R.m);

  // Distinct w's in (first, second) order; round r uses the r-th.
  const auto collisions = find_tail_collisions(R, cfg.k, std::nullopt, cfg.threads);
  verdict.stats.collisions_found = collisions.size();
  std::vector<const TailCollision*> reducers;
  {
    std::set<Word> seen;
    for (const auto& c : collisions) {
      if (static_cast<int>(reducers.size()) == cfg.max_rounds) break;
      if (seen.insert(c.w).second) reducers.push_back(&c);
    }
  }

  // Current reduced form of each relator, with its (reducer node, event) history.
  std::vector<Word> reduced(n);
  std::vector<std::vector<std::pair<std::size_t, WReductionEvent>>> history(n);

  auto node_for = [&](std::size_t id) -> std::size_t {
    if (id < n) return graph.relator(id);
    const std::size_t i = id - n;
    std::size_t node = graph.relator(i);
    for (const auto& [reducer, e] : history[i]) {
      std::vector<Letter> rest(graph.word(node).begin(), graph.word(node).begin() + static_cast<std::ptrdiff_t>(e.start - 1));
      rest.insert(rest.end(), graph.word(node).begin() + static_cast<std::ptrdiff_t>(e.end), graph.word(node).end());
      node = graph.add(WReductionStep{node, reducer, e.start, e.end, e.conjugator, e.s, e.t, Word::from_reduced(std::move(rest))});
    }
    return node;
  };

  for (int round = 1; round <= cfg.max_rounds; ++round) {
    const bool have_reducer = static_cast<std::size_t>(round) <= reducers.size();
    if (round > 1 && !have_reducer) break;
    verdict.stats.rounds = round;

    if (have_reducer && verdict.blocks > 0) {
      const TailCollision& c = *reducers[static_cast<std::size_t>(round - 1)];
      const std::size_t w_node = graph.add(TailCollisionStep{graph.relator(c.first), graph.relator(c.second),
                                                             static_cast<std::size_t>(c.split), c.w});
      verdict.reducers.push_back(c.w);
      constexpr std::size_t kChunk = 1U << 12;
      parallel_chunks((n + kChunk - 1) / kChunk, cfg.threads, [&](std::size_t chunk) {
        for (std::size_t i = chunk * kChunk; i < std::min(n, (chunk + 1) * kChunk); ++i) {
          const Word& current = history[i].empty() ? R.relators[i] : reduced[i];
          auto result = reduce_relator(current, c.w, cfg);
          if (result.events.empty()) continue;
          reduced[i] = std::move(result.word);
          for (auto& e : result.events) history[i].emplace_back(w_node, std::move(e));
        }
      });
    } else if (have_reducer) {
      verdict.reducers.push_back(reducers[static_cast<std::size_t>(round - 1)]->w);
    }

    // Pool = original relators (ids < n) and reduced ones (ids n + i).
    std::vector<std::size_t> pool_ids;
    pool_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pool_ids.push_back(i);
    for (std::size_t i = 0; i < n; ++i) {
      if (!history[i].empty()) pool_ids.push_back(n + i);
    }
    auto pool_word = [&](std::size_t slot) -> const Word& {
      const std::size_t id = pool_ids[slot];
      return id < n ? R.relators[id] : reduced[id - n];
    };
    const auto entries = detail::keyed_entries(pool_ids.size(), 2, cfg.threads, pool_word);

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t lo = 0; lo < entries.size();) {
      std::size_t hi = lo + 1;
      while (hi < entries.size() && entries[hi].same_bucket(entries[lo])) ++hi;
      if (hi - lo > 1 && entries[lo].length >= 1) {
        // Exact classes inside the bucket; per class keep the first word for
        // each first letter and link it to the class's first word.
        std::vector<char> done(hi - lo, 0);
        for (std::size_t a = lo; a < hi; ++a) {
          if (done[a - lo]) continue;
          const Word& head = pool_word(entries[a].index);
          std::vector<std::size_t> firsts{entries[a].index};
          std::vector<Letter> letters{head[0]};
          for (std::size_t b = a + 1; b < hi; ++b) {
            if (done[b - lo]) continue;
            const Word& other = pool_word(entries[b].index);
            if (!detail::tails_equal(head, other, 2)) continue;
            done[b - lo] = 1;
            if (std::find(letters.begin(), letters.end(), other[0]) == letters.end()) {
              letters.push_back(other[0]);
              firsts.push_back(entries[b].index);
            }
          }
          for (std::size_t j = 1; j < firsts.size(); ++j) {
            edges.emplace_back(pool_ids[firsts[0]], pool_ids[firsts[j]]);
          }
        }
      }
      lo = hi;
    }
    std::sort(edges.begin(), edges.end());
    verdict.stats.candidate_edges = edges.size();

    for (const auto& [u, v] : edges) {
      if (classes.connected()) break;
      const Word& wu = u < n ? R.relators[u] : reduced[u - n];
      const Word& wv = v < n ? R.relators[v] : reduced[v - n];
      const Letter x = wu[0];
      const Letter y = wv[0];
      if (!classes.merge(x, y)) continue;
      const std::size_t left = node_for(u);
      const std::size_t right = node_for(v);
      const std::size_t conclusion =
          graph.add(TailMatchStep{left, right, Word::from_reduced({x.inverse(), y})});
      verdict.certificates.push_back(graph.extract(x, y, conclusion));
    }
    if (classes.connected()) break;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (history[i].empty()) continue;
    ++verdict.stats.reduced_relators;
    verdict.stats.reductions_applied += history[i].size();
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = history[i].empty() ? R.relators[i].size() : reduced[i].size();
    if (static_cast<double>(len) <= verdict.stats.ell_prime) ++verdict.stats.short_relators;
  }
  verdict.outcome = classes.connected() ? Outcome::Trivial : Outcome::Unknown;
  return verdict;
}

/// Checks every certificate and that their equalities, closed under inversion,
/// connect all 2m letters when the verdict says Trivial.
inline bool check_verdict(const Presentation& R, const Verdict& v) {
  detail::LetterClasses classes(R.m);
  for (const auto& cert : v.certificates) {
    if (!check_certificate(R, cert)) return false;
    classes.merge(cert.x, cert.y);
  }
  return v.outcome != Outcome::Trivial || classes.connected();
}

}  // namespace rgroups
