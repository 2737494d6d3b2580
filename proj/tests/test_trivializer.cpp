#include <gtest/gtest.h>

#include "rgroups/serialize.hpp"
#include "rgroups/trivializer.hpp"

using namespace rgroups;

namespace {

Word w(const char* text, int m = 2) { return parse_word(text, m); }

Presentation pres(int m, std::initializer_list<const char*> words) {
  Presentation p{m, {}};
  for (const char* t : words) p.relators.push_back(w(t, m));
  return p;
}

// Quadratic reference for unfiltered collisions.
std::vector<std::pair<std::size_t, std::size_t>> naive_collisions(const Presentation& R, int k) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto K = static_cast<std::size_t>(k);
  for (std::size_t i = 0; i < R.relators.size(); ++i) {
    for (std::size_t j = i + 1; j < R.relators.size(); ++j) {
      const Word& a = R.relators[i];
      const Word& b = R.relators[j];
      if (a.size() != b.size() || a.size() < K) continue;
      if (a[0] == b[0] || a.at(K) == b.at(K)) continue;
      if (slice(a, K + 1, a.size()) != slice(b, K + 1, b.size())) continue;
      out.emplace_back(i, j);
    }
  }
  return out;
}

// Rank over Q by Rational elimination, for comparison with the fraction-free code.
std::size_t rational_rank(const Presentation& R) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& r : R.relators) {
    std::vector<Rational> row(R.m, Rational(0));
    for (Letter x : r) row[x.generator_index() - 1] += x.inverted() ? -1 : 1;
    rows.push_back(row);
  }
  std::size_t rank = 0;
  for (int col = 0; col < R.m && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      const Rational f = rows[i][col] / rows[rank][col];
      for (int j = 0; j < R.m; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST(ChooseK, Examples) {
  EXPECT_EQ(choose_k(2, 81), 1);
  EXPECT_EQ(choose_k(2, 59049), 3);
  EXPECT_EQ(choose_k(2, 2), 1);
  EXPECT_EQ(choose_k(2, 10), 1);
  EXPECT_THROW(choose_k(2, 1), DomainError);
}

TEST(Config, BlockArithmetic) {
  EXPECT_EQ(reduction_block_size(2, 1), 36u);
  EXPECT_EQ(reduction_block_size(2, 2), 486u);
  EXPECT_EQ(reduction_block_size(3, 1), 100u);
  EXPECT_EQ(reduction_block_size(26, 40), std::numeric_limits<std::uint64_t>::max());
  EXPECT_EQ(reduction_block_count(38, 36), 1u);
  EXPECT_EQ(reduction_block_count(37, 36), 0u);
  const auto cfg = TrivializerConfig::make(2, 20, 3);
  EXPECT_EQ(cfg.k, 3);
  EXPECT_EQ(cfg.block_size, 8u * 729u);
  EXPECT_THROW(TrivializerConfig::make(2, 5, 6), DomainError);
  EXPECT_THROW(TrivializerConfig::make(2, 5, 0), DomainError);
  EXPECT_THROW(TrivializerConfig::make(2, 5, std::nullopt, 0), DomainError);
}

TEST(TailCollisions, FilteredExample) {
  const auto R = pres(2, {"abab", "baab"});
  const auto hits = find_tail_collisions(R, 2, PrefixFilter{w("ab"), w("ba")});
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].first, 0u);
  EXPECT_EQ(hits[0].second, 1u);
  EXPECT_EQ(hits[0].w, w("BAba"));
  EXPECT_EQ(hits[0].w.size(), 4u);
}

TEST(TailCollisions, NoneWithinOnePrefixClassOrWithoutMatches) {
  EXPECT_TRUE(find_tail_collisions(pres(2, {"abab", "abab"}), 2).empty());
  EXPECT_TRUE(find_tail_collisions(pres(2, {"abab", "abab"}), 2, PrefixFilter{w("ab"), w("ba")}).empty());
  EXPECT_TRUE(find_tail_collisions(pres(2, {"abab", "baba", "aaaa"}), 2).empty());
  EXPECT_THROW(find_tail_collisions(pres(2, {"ab"}), 1, PrefixFilter{w("ab"), w("aB")}), DomainError);
}

TEST(TailCollisions, MatchesQuadraticReference) {
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + trial % 3;
    const auto R = sample_presentation(ModelParams{2, 5 + trial % 3, 400}, rng.split(trial));
    const auto hits = find_tail_collisions(R, k, std::nullopt, 1 + trial % 3);
    const auto ref = naive_collisions(R, k);
    ASSERT_EQ(hits.size(), ref.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
      EXPECT_EQ(std::make_pair(hits[i].first, hits[i].second), ref[i]);
      EXPECT_EQ(hits[i].w.size(), static_cast<std::size_t>(2 * k));
      EXPECT_EQ(free_reduce(hits[i].w.letters()), hits[i].w);
    }
  }
}

TEST(WReduce, ConjugatedOccurrence) {
  const auto hit = w_reduce_once(w("baabAb"), w("ab"), 1);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->first, w("bb"));
  EXPECT_EQ(hit->second.conjugator, w("a"));
  EXPECT_EQ(hit->second.s, Letter::generator(2));
  EXPECT_EQ(hit->second.t, Letter::generator(2));
  EXPECT_EQ(hit->second.start, 2u);
  EXPECT_EQ(hit->second.end, 5u);
}

TEST(WReduce, BareOccurrenceDeletesExactlyW) {
  const auto hit = w_reduce_once(w("aabAbba"), w("bA"), 1);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->first, w("aabba"));
  EXPECT_TRUE(hit->second.conjugator.empty());
}

TEST(WReduce, OccurrenceWithoutLeftFlankIsSkipped) {
  // From position 3, a bA A is d w d^-1 flush with the region start; the
  // later occurrence at 9..10 is used instead.
  const Word r = w("bbabAAbbbAb");
  const auto hit = w_reduce_once(r, w("bA"), 3);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->second.start, 9u);
  EXPECT_EQ(hit->first, w("bbabAAbbb"));
  EXPECT_FALSE(w_reduce_once(w("bbabAAbb"), w("bA"), 3));
  EXPECT_FALSE(w_reduce_once(w("abbb"), w("ab"), 1));
  EXPECT_THROW(w_reduce_once(r, w("b"), 1), DomainError);
}

TEST(WReduce, OutputReducedAndShorter) {
  Rng rng(3);
  int applied = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const Word r = sample_word(2, 30, rng);
    const Word u = sample_word(2, 2, rng);
    if (auto hit = w_reduce_once(r, u, 3)) {
      ++applied;
      EXPECT_EQ(free_reduce(hit->first.letters()), hit->first);
      EXPECT_LE(hit->first.size() + u.size(), r.size());
      EXPECT_NE(hit->second.s, hit->second.t.inverse());
      EXPECT_GE(hit->second.start, 3u);
    }
  }
  EXPECT_GT(applied, 1000);
}

TEST(ReduceRelator, Blocks) {
  TrivializerConfig cfg;
  cfg.k = 1;
  cfg.block_size = 36;
  const Word shortr = w("abababab");
  EXPECT_EQ(reduce_relator(shortr, w("ab"), cfg).word, shortr);
  EXPECT_TRUE(reduce_relator(shortr, w("ab"), cfg).events.empty());

  cfg.block_size = 6;
  // Prefix "aa", then one block "aBAbba" containing s w t = a BA b.
  const auto one = reduce_relator(w("aaaBAbbb"), w("BA"), cfg);
  ASSERT_EQ(one.events.size(), 1u);
  EXPECT_EQ(one.word.size(), 6u);

  // Three blocks each holding a clean occurrence of w = Ab.
  const Word three = w("bb" "bAbaaa" "bAbaaa" "bAbaaa");
  const auto res = reduce_relator(three, w("Ab"), cfg);
  EXPECT_EQ(res.events.size(), 3u);
  EXPECT_EQ(res.word.size(), three.size() - 6);
}

TEST(ReduceRelator, ShorterFinalBlock) {
  TrivializerConfig cfg;
  cfg.k = 1;
  cfg.block_size = 6;
  // Two reserved letters, one full block without w, then a 4-letter remainder holding a w.
  const auto res = reduce_relator(w("bb" "aaaaaa" "bAbb"), w("Ab"), cfg);
  ASSERT_EQ(res.events.size(), 1u);
  EXPECT_EQ(res.word, w("bbaaaaaabb"));
}

TEST(Abelianization, Examples) {
  EXPECT_EQ(abelianization_guard(pres(2, {"ab", "aB"})), AbelianizationVerdict::PossiblyTrivial);
  EXPECT_EQ(abelianization_guard(pres(2, {"abab"})), AbelianizationVerdict::CertainlyNontrivial);
  EXPECT_EQ(abelianization_guard(Presentation{2, {}}), AbelianizationVerdict::CertainlyNontrivial);
  EXPECT_EQ(abelianization_guard(pres(3, {"ab", "bc", "ca"})), AbelianizationVerdict::PossiblyTrivial);
  EXPECT_EQ(abelianization_guard(pres(3, {"ab", "bc", "aC"})), AbelianizationVerdict::CertainlyNontrivial);
}

TEST(Abelianization, RankMatchesRationalElimination) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + trial % 4;
    const auto R = sample_presentation(ModelParams{m, 1 + trial % 7, 1 + static_cast<std::uint64_t>(trial % 6)}, rng.split(trial));
    EXPECT_EQ(exponent_sum_rank(R), rational_rank(R));
  }
}

TEST(Trivialize, SharedTailGivesEquality) {
  const auto R = pres(2, {"abb", "bbb"});
  const auto v = trivialize(R, TrivializerConfig::make(2, 3));
  ASSERT_EQ(v.certificates.size(), 1u);
  EXPECT_EQ(v.outcome, Outcome::Unknown);
  EXPECT_TRUE(check_certificate(R, v.certificates[0]));
  const auto& c = v.certificates[0];
  EXPECT_EQ(std::set<Letter>({c.x, c.y}), std::set<Letter>({Letter::generator(1), Letter::generator(2)}));
}

TEST(Trivialize, ConnectedLettersGiveTrivial) {
  const auto R = pres(2, {"abb", "bbb", "Abb"});
  const auto v = trivialize(R, TrivializerConfig::make(2, 3));
  EXPECT_EQ(v.outcome, Outcome::Trivial);
  EXPECT_TRUE(check_verdict(R, v));
  EXPECT_EQ(abelianization_guard(R), AbelianizationVerdict::PossiblyTrivial);
}

TEST(Trivialize, LoneRelatorIsUnknown) {
  const auto R = pres(2, {"abab"});
  const auto v = trivialize(R, TrivializerConfig::make(2, 4));
  EXPECT_EQ(v.outcome, Outcome::Unknown);
  EXPECT_TRUE(v.certificates.empty());
  EXPECT_EQ(abelianization_guard(R), AbelianizationVerdict::CertainlyNontrivial);
}

TEST(Trivialize, SoundOnSampledPresentations) {
  int trivial = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int m = 2 + static_cast<int>(seed % 2);
    const int ell = 6 + static_cast<int>(seed % 9);
    const Rational density = Rational(45 + 5 * static_cast<int>(seed % 3), 100);
    const auto R = sample_presentation(params_from_density(m, ell, density), Rng(seed));
    const auto v = trivialize(R, TrivializerConfig::make(m, ell));
    EXPECT_TRUE(check_verdict(R, v)) << seed;
    if (v.outcome == Outcome::Trivial) {
      ++trivial;
      EXPECT_EQ(abelianization_guard(R), AbelianizationVerdict::PossiblyTrivial);
    }
  }
  EXPECT_GT(trivial, 0);
}

TEST(Trivialize, ReductionCertificatesReplay) {
  // Small blocks force w-reductions so certificates exercise every rule.
  int with_reduction = 0;
  for (std::uint64_t seed = 0; seed < 40 && with_reduction < 3; ++seed) {
    const auto R = sample_presentation(ModelParams{2, 14, 3000}, Rng(1000 + seed));
    auto cfg = TrivializerConfig::make(2, 14, 1, 3);
    cfg.block_size = 4;
    const auto v = trivialize(R, cfg);
    ASSERT_TRUE(check_verdict(R, v));
    for (const auto& c : v.certificates) {
      const bool has = std::any_of(c.steps.begin(), c.steps.end(),
                                   [](const DerivationStep& s) { return std::holds_alternative<WReductionStep>(s); });
      if (!has) continue;
      ++with_reduction;
      for (std::size_t i = 0; i < c.steps.size(); ++i) {
        if (!std::holds_alternative<WReductionStep>(c.steps[i])) continue;
        Certificate bad = c;
        auto& step = std::get<WReductionStep>(bad.steps[i]);
        step.t = step.t == Letter::generator(1) ? Letter::generator(2) : Letter::generator(1);
        EXPECT_FALSE(check_certificate(R, bad));
      }
    }
  }
  EXPECT_GT(with_reduction, 0);
}

TEST(Trivialize, ThreadCountDoesNotChangeVerdict) {
  const auto R = sample_presentation(params_from_density(2, 16, Rational(11, 20)), Rng(5));
  const auto a = trivialize(R, TrivializerConfig::make(2, 16, std::nullopt, 1, 1));
  const auto b = trivialize(R, TrivializerConfig::make(2, 16, std::nullopt, 1, 4));
  EXPECT_EQ(verdict_to_json(a).dump(), verdict_to_json(b).dump());
}

TEST(Certificate, MutationAndMalformedInput) {
  const auto R = pres(2, {"abb", "bbb"});
  const auto v = trivialize(R, TrivializerConfig::make(2, 3));
  ASSERT_EQ(v.certificates.size(), 1u);
  const Certificate good = v.certificates[0];
  ASSERT_TRUE(check_certificate(R, good));

  Certificate wrong_word = good;
  std::get<TailMatchStep>(wrong_word.steps.back()).word = w("ab");
  EXPECT_FALSE(check_certificate(R, wrong_word));

  Certificate missing = good;
  std::get<RelatorStep>(missing.steps[0]).relator = 7;
  EXPECT_THROW(check_certificate(R, missing), CertificateError);

  Certificate forward = good;
  std::get<TailMatchStep>(forward.steps.back()).left = forward.steps.size();
  EXPECT_THROW(check_certificate(R, forward), CertificateError);

  EXPECT_THROW(check_certificate(R, Certificate{Letter::generator(1), Letter::generator(2), {}}), CertificateError);
  EXPECT_THROW(check_certificate(R, Certificate{Letter::generator(3), Letter::generator(2), good.steps}), CertificateError);
}

TEST(Certificate, TailCollisionStepReplays) {
  const auto R = pres(2, {"abab", "baab"});
  Certificate cert{Letter::generator(1), Letter::generator(1),
                   {RelatorStep{0, R.relators[0]}, RelatorStep{1, R.relators[1]}, TailCollisionStep{0, 1, 2, w("BAba")}}};
  // The conclusion a = a is the empty word, which the collision does not produce.
  EXPECT_FALSE(check_certificate(R, cert));
  std::get<TailCollisionStep>(cert.steps[2]).word = w("BAbb");
  EXPECT_FALSE(check_certificate(R, cert));
}

TEST(Serialize, CertificateRoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto R = sample_presentation(ModelParams{2, 12, 3000}, Rng(seed));
    auto cfg = TrivializerConfig::make(2, 12, 1, 2);
    cfg.block_size = 5;
    const auto v = trivialize(R, cfg);
    for (const auto& c : v.certificates) {
      const Json j = certificate_to_json(c);
      const Certificate back = certificate_from_json(Json::parse(j.dump()), 2);
      EXPECT_EQ(certificate_to_json(back), j);
      EXPECT_TRUE(check_certificate(R, back));
    }
  }
}

TEST(Serialize, MalformedCertificateJson) {
  EXPECT_THROW(certificate_from_json(Json::parse(R"({"x":"a"})"), 2), CertificateError);
  EXPECT_THROW(certificate_from_json(Json::parse(R"({"x":"a","y":"b","steps":[{"rule":"magic","word":"a"}]})"), 2),
               CertificateError);
  EXPECT_THROW(certificate_from_json(Json::parse(R"({"x":"a","y":"c","steps":[]})"), 2), CertificateError);
  EXPECT_THROW(certificate_from_json(Json::parse(R"({"x":"a","y":"b","steps":[{"rule":"relator","relator":0,"word":"aA"}]})"), 2),
               CertificateError);
  EXPECT_THROW(certificate_from_json(Json::parse(R"({"x":"a","y":"b","steps":[{"rule":"relator","relator":-1,"word":"a"}]})"), 2),
               CertificateError);
}
