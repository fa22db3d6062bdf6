#include <gtest/gtest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "test_util.hpp"
#include "yall/europarl.hpp"
#include "yall/fixture.hpp"
#include "yall/random.hpp"

namespace {

using testing_util::TempDir;
using testing_util::write_file;

const yall::EsPronounLexicon& lex() {
  static const auto l = yall::EsPronounLexicon::defaults();
  return l;
}

yall::ParallelPair pair(std::size_t line, std::string en, std::string es) {
  return {line, std::move(en), std::move(es)};
}

TEST(LoadParallel, TwoLines) {
  TempDir dir;
  write_file(dir.file("a.en"), "Can you hear me?\nYes.\n");
  write_file(dir.file("a.es"), "\xC2\xBFMe oye usted?\nS\xC3\xAD.\n");
  const auto pairs = yall::load_parallel(dir.file("a.en"), dir.file("a.es"));
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].line_number, 1u);
  EXPECT_EQ(pairs[1].line_number, 2u);
  EXPECT_EQ(pairs[1].english, "Yes.");
}

TEST(LoadParallel, LengthMismatchNamesBothCounts) {
  TempDir dir;
  write_file(dir.file("a.en"), "a\nb\nc\n");
  write_file(dir.file("a.es"), "a\nb\nc\nd\n");
  try {
    yall::load_parallel(dir.file("a.en"), dir.file("a.es"));
    FAIL() << "expected AlignmentError";
  } catch (const yall::AlignmentError& e) {
    EXPECT_EQ(e.english_lines(), 3u);
    EXPECT_EQ(e.spanish_lines(), 4u);
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos);
  }
}

TEST(LoadParallel, BadBytesReportLine) {
  TempDir dir;
  write_file(dir.file("a.en"), "one\ntwo\nthree\n");
  write_file(dir.file("a.es"), "uno\ndos\ntr\xFFs\n");
  try {
    yall::load_parallel(dir.file("a.en"), dir.file("a.es"));
    FAIL() << "expected EncodingError";
  } catch (const yall::EncodingError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadParallel, BlankPairsSkippedButNumbered) {
  TempDir dir;
  write_file(dir.file("a.en"), "one\n\r\nthree\n");
  write_file(dir.file("a.es"), "uno\ndos\ntres\n");
  yall::ParallelLoadStats stats;
  const auto pairs = yall::load_parallel(dir.file("a.en"), dir.file("a.es"), &stats);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[1].line_number, 3u);
  EXPECT_EQ(stats.lines, 3u);
  EXPECT_EQ(stats.blank, 1u);
}

TEST(PronounProfile, Examples) {
  EXPECT_EQ(yall::pronoun_profile("Ustedes saben la verdad", lex()), (yall::PronounProfile{1, 0}));
  EXPECT_EQ(yall::pronoun_profile("tu casa es bonita", lex()), (yall::PronounProfile{0, 0}));
  EXPECT_EQ(yall::pronoun_profile("T\xC3\x9A lo sabes y usted tambi\xC3\xA9n", lex()),
            (yall::PronounProfile{0, 2}));
  EXPECT_EQ(yall::english_you_count("I did not see you asking to speak."), 1u);
  EXPECT_EQ(yall::english_you_count("If you agree, you should vote."), 2u);
  EXPECT_EQ(yall::english_you_count("Your answer, yours truly."), 0u);
}

TEST(EsLexicon, RejectsOverlapAndEmpty) {
  EXPECT_THROW(yall::EsPronounLexicon({"ustedes"}, {"Ustedes"}), yall::ConfigError);
  EXPECT_THROW(yall::EsPronounLexicon({}, {"usted"}), yall::ConfigError);
  EXPECT_THROW(yall::EsPronounLexicon::from_json(yall::Json::parse(R"({"plural": ["vous"]})")),
               yall::ConfigError);
  const auto fr = yall::EsPronounLexicon::from_json(
      yall::Json::parse(R"({"plural": ["vous"], "singular": ["tu", "toi"]})"));
  EXPECT_EQ(yall::pronoun_profile("Vous savez", fr), (yall::PronounProfile{1, 0}));
}

TEST(ExtractEuroparl, TableRow) {
  const auto r = yall::extract_europarl(
      {pair(1, "I did not see you asking to speak.", "No los vi a ustedes pedir la palabra.")}, lex());
  ASSERT_EQ(r.plural.size(), 1u);
  EXPECT_TRUE(r.singular.empty());
  const auto& i = r.plural[0];
  EXPECT_EQ(i.label, yall::Label::Plural);
  EXPECT_EQ(i.domain, yall::Domain::Europarl);
  EXPECT_EQ(i.target_token_index, 4u);
  EXPECT_EQ(i.provenance.source_id, "1");
  EXPECT_EQ(i.provenance.aligned_foreign_sentence, "No los vi a ustedes pedir la palabra.");
}

TEST(ExtractEuroparl, DropRules) {
  const auto r = yall::extract_europarl(
      {pair(1, "As you know, we agree.", "Como ustedes saben y usted sabe, estamos de acuerdo."),
       pair(2, "As you know, we agree.", "Ustedes y vosotros lo saben."),
       pair(3, "If you agree, you should vote.", "Si ustedes est\xC3\xA1n de acuerdo, voten."),
       pair(4, "Thank you for your answer.", "Gracias por tu respuesta."),
       pair(5, "Can you tell us?", "\xC2\xBFPuede usted decirnos?")},
      lex());
  EXPECT_TRUE(r.plural.empty());
  ASSERT_EQ(r.singular.size(), 1u);
  EXPECT_EQ(r.singular[0].provenance.source_id, "5");
  EXPECT_EQ(r.stats.mixed_spanish, 1u);
  EXPECT_EQ(r.stats.multiple_spanish, 1u);
  EXPECT_EQ(r.stats.english_you_mismatch, 1u);
  EXPECT_EQ(r.stats.no_spanish_pronoun, 1u);
}

TEST(ExtractEuroparl, MatchesOracleOnThousandPairs) {
  const auto fx = yall::generate_bitext_fixture(99, 1000);
  const auto r = yall::extract_europarl(fx.pairs, lex());
  std::string why;
  EXPECT_TRUE(oracle::equivalent(oracle::europarl(fx.pairs), r.plural, r.singular, &why)) << why;
  EXPECT_GT(r.plural.size(), 100u);
  EXPECT_GT(r.singular.size(), 100u);
}

TEST(ExtractEuroparl, InvariantsHold) {
  const auto fx = yall::generate_bitext_fixture(5, 600);
  const auto r = yall::extract_europarl(fx.pairs, lex());
  std::set<std::string> plural_ids;
  for (const auto& i : r.plural) {
    EXPECT_EQ(yall::english_you_count(i.text), 1u);
    EXPECT_TRUE(yall::target_is_you(i));
    plural_ids.insert(i.provenance.source_id);
  }
  for (const auto& i : r.singular) {
    EXPECT_EQ(yall::english_you_count(i.text), 1u);
    EXPECT_TRUE(yall::target_is_you(i));
    EXPECT_FALSE(plural_ids.contains(i.provenance.source_id));
  }
}

// Extracting from a subset gives exactly the full run's instances from that subset.
TEST(ExtractEuroparl, RestrictionProperty) {
  const auto fx = yall::generate_bitext_fixture(17, 500);
  const auto full = yall::extract_europarl(fx.pairs, lex());
  yall::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<yall::ParallelPair> subset;
    std::set<std::string> kept;
    for (const auto& p : fx.pairs) {
      if (rng.below(3) == 0) {
        subset.push_back(p);
        kept.insert(std::to_string(p.line_number));
      }
    }
    const auto part = yall::extract_europarl(subset, lex());
    auto restrict = [&](const std::vector<yall::LabeledInstance>& v) {
      std::vector<yall::LabeledInstance> out;
      for (const auto& i : v) {
        if (kept.contains(i.provenance.source_id)) out.push_back(i);
      }
      return out;
    };
    EXPECT_EQ(part.plural, restrict(full.plural));
    EXPECT_EQ(part.singular, restrict(full.singular));
  }
}

TEST(ExtractEuroparl, StreamingMatchesBatch) {
  const auto fx = yall::generate_bitext_fixture(8, 200);
  yall::EuroparlExtractor ex(lex());
  for (const auto& p : fx.pairs) ex.add(p);
  const auto batch = yall::extract_europarl(fx.pairs, lex());
  EXPECT_EQ(ex.result().plural, batch.plural);
  EXPECT_EQ(ex.result().singular, batch.singular);
}

}  // namespace
