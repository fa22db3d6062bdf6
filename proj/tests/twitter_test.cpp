#include <gtest/gtest.h>

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "yall/fixture.hpp"
#include "yall/random.hpp"
#include "yall/twitter.hpp"

namespace {

const yall::PluralFormLexicon& lex() {
  static const auto l = yall::PluralFormLexicon::defaults();
  return l;
}

yall::Utterance tweet(std::string id, std::string author, std::string text) {
  yall::Utterance u;
  u.id = std::move(id);
  u.author_id = std::move(author);
  u.text = std::move(text);
  return u;
}

TEST(MatchPluralForms, TableExample) {
  const std::string s = "I love y'all! Including @user.";
  const auto m = yall::match_plural_forms(s, lex());
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].canonical_form, "y'all");
  EXPECT_EQ(m[0].token_begin, 2u);
  EXPECT_EQ(m[0].token_end, 3u);
  EXPECT_EQ(s.substr(m[0].char_begin, m[0].char_end - m[0].char_begin), "y'all");
}

TEST(MatchPluralForms, NoFormNoMatch) {
  EXPECT_TRUE(yall::match_plural_forms("I love you.", lex()).empty());
  EXPECT_TRUE(yall::match_plural_forms("", lex()).empty());
  EXPECT_TRUE(yall::match_plural_forms("I see you all the time", lex()).empty());
}

TEST(MatchPluralForms, TwoFormsAgreeWithBruteForce) {
  const std::string s = "yall ready? you guys coming?";
  const auto m = yall::match_plural_forms(s, lex());
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].canonical_form, "y'all");
  EXPECT_EQ(m[0].original_surface, "yall");
  EXPECT_EQ(m[1].canonical_form, "you guys");
  EXPECT_EQ(m[1].original_surface, "you guys");

  const auto hits = oracle::plural_hits(oracle::words(s));
  ASSERT_EQ(hits.size(), m.size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    EXPECT_EQ(hits[i].start, m[i].token_begin);
    EXPECT_EQ(hits[i].start + hits[i].len, m[i].token_end);
    EXPECT_EQ(hits[i].canonical, m[i].canonical_form);
  }
}

TEST(MatchPluralForms, LongestWinsAtSamePosition) {
  const auto m = yall::match_plural_forms("Love all y'all", lex());
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].original_surface, "all y'all");
  EXPECT_EQ(m[0].token_begin, 1u);
}

TEST(MatchPluralForms, CurlyApostropheAndVariants) {
  const auto m = yall::match_plural_forms("Y\xE2\x80\x99" "ALL and youns", lex());
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].canonical_form, "y'all");
  EXPECT_EQ(m[0].original_surface, "Y\xE2\x80\x99" "ALL");
  EXPECT_EQ(m[1].canonical_form, "you-uns");
}

TEST(MatchPluralForms, CaseSensitivePolicy) {
  auto strict = yall::PluralFormLexicon::from_json(
      yall::Json::parse(R"({"y'all": ["y'all"]})"), yall::MatchPolicy{false, true});
  EXPECT_TRUE(yall::match_plural_forms("Y'ALL", strict).empty());
  EXPECT_EQ(yall::match_plural_forms("y'all", strict).size(), 1u);
}

// Case permutations of the input never change which spans match.
TEST(MatchPluralForms, CasePermutationInvariance) {
  const std::vector<std::string> inputs{
      "yall ready? you guys coming?", "Love all y'all and you lot", "youse and yinz and youns",
      "I love you", "you-uns said you guys were here"};
  yall::Rng rng(11);
  for (const auto& s : inputs) {
    const auto base = yall::match_plural_forms(s, lex());
    for (int trial = 0; trial < 50; ++trial) {
      std::string p = s;
      for (char& c : p) {
        if (rng.below(2) == 0) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      }
      const auto m = yall::match_plural_forms(p, lex());
      ASSERT_EQ(m.size(), base.size()) << p;
      for (std::size_t i = 0; i < m.size(); ++i) {
        EXPECT_EQ(m[i].token_begin, base[i].token_begin);
        EXPECT_EQ(m[i].token_end, base[i].token_end);
        EXPECT_EQ(m[i].canonical_form, base[i].canonical_form);
      }
    }
  }
}

TEST(Lexicon, FromJsonRejectsBadShapes) {
  EXPECT_THROW(yall::PluralFormLexicon::from_json(yall::Json::parse("[]")), yall::ConfigError);
  EXPECT_THROW(yall::PluralFormLexicon::from_json(yall::Json::parse("{}")), yall::ConfigError);
  EXPECT_THROW(yall::PluralFormLexicon::from_json(yall::Json::parse(R"({"a": "b"})")),
               yall::ConfigError);
  EXPECT_THROW(
      yall::PluralFormLexicon::from_json(yall::Json::parse(R"({"a": ["one two three four"]})")),
      yall::ConfigError);
}

TEST(Lexicon, CanonicalOf) {
  EXPECT_EQ(lex().canonical_of("Yall"), "y'all");
  EXPECT_EQ(lex().canonical_of("You Guys"), "you guys");
  EXPECT_FALSE(lex().canonical_of("you"));
}

TEST(QualifyUsers, Examples) {
  EXPECT_EQ(yall::qualify_users({tweet("1", "A", "I love y'all"), tweet("2", "B", "I love you")}, lex()),
            (std::set<std::string>{"A"}));
  EXPECT_TRUE(yall::qualify_users({}, lex()).empty());
  EXPECT_EQ(yall::qualify_users({tweet("1", "C", "hello"), tweet("2", "C", "you guys rock"),
                                 tweet("3", "C", "bye")},
                                lex()),
            (std::set<std::string>{"C"}));
}

yall::MaskResult mask_first(const std::string& s) {
  const auto m = yall::match_plural_forms(s, lex());
  return yall::mask_plural(s, m.at(0));
}

TEST(MaskPlural, Examples) {
  auto r = mask_first("I love y'all! Including @user.");
  EXPECT_EQ(r.masked_text, "I love you! Including @user.");
  EXPECT_EQ(r.target_token_index, 2u);
  EXPECT_EQ(r.original_surface, "y'all");

  r = mask_first("Y'all ready?");
  EXPECT_EQ(r.masked_text, "You ready?");
  EXPECT_EQ(r.target_token_index, 0u);

  r = mask_first("thanks you guys so much");
  EXPECT_EQ(r.masked_text, "thanks you so much");
  EXPECT_EQ(r.target_token_index, 1u);
  EXPECT_EQ(r.original_surface, "you guys");
}

TEST(MaskPlural, OutOfBoundsSpan) {
  const std::string s = "I love y'all";
  auto m = yall::match_plural_forms(s, lex()).at(0);
  m.char_end = 100;
  EXPECT_THROW(yall::mask_plural(s, m), yall::InvalidMatch);
  m = yall::match_plural_forms(s, lex()).at(0);
  m.char_begin = 0;
  EXPECT_THROW(yall::mask_plural(s, m), yall::InvalidMatch);
}

// Ten tweets classified by hand: A, B and C qualify, D does not.
std::vector<yall::Utterance> ten_tweets() {
  return {
      tweet("1", "A", "I love y'all! Including @user."),  // plural
      tweet("2", "A", "Thank you for the follow"),        // singular
      tweet("3", "B", "Yall ready for the game?"),        // plural
      tweet("4", "B", "Did you see that?"),               // singular
      tweet("5", "C", "you guys are the best"),           // plural
      tweet("6", "C", "I miss you so much"),              // singular
      tweet("7", "C", "honestly you make my day"),        // singular
      tweet("8", "A", "Thank you y'all"),                 // mixed
      tweet("9", "B", "you know you want it"),            // two bare "you"
      tweet("10", "D", "see you soon"),                   // unqualified author
  };
}

TEST(ExtractTwitter, HandClassifiedFixture) {
  const auto r = yall::extract_twitter(ten_tweets(), lex());
  ASSERT_EQ(r.plural.size(), 3u);
  ASSERT_EQ(r.singular.size(), 4u);
  EXPECT_EQ(r.plural[0].text, "I love you! Including @user.");
  EXPECT_EQ(r.plural[1].text, "You ready for the game?");
  EXPECT_EQ(r.plural[2].text, "you are the best");
  EXPECT_EQ(r.plural[2].provenance.canonical_form, "you guys");
  EXPECT_EQ(r.singular[3].provenance.source_id, "7");
  EXPECT_EQ(r.singular[3].target_token_index, 1u);
  EXPECT_EQ(r.stats.qualifying_users, 3u);
  EXPECT_EQ(r.stats.mixed, 1u);
  EXPECT_EQ(r.stats.multiple_targets, 1u);
  EXPECT_EQ(r.stats.unqualified_author, 1u);
  EXPECT_EQ(r.stats.dropped() + r.stats.plural + r.stats.singular, r.stats.tweets);

  std::string why;
  EXPECT_TRUE(oracle::equivalent(oracle::twitter(ten_tweets()), r.plural, r.singular, &why)) << why;
}

TEST(ExtractTwitter, NoQualifyingUsers) {
  const auto r = yall::extract_twitter({tweet("1", "A", "I love you"), tweet("2", "B", "hello")}, lex());
  EXPECT_TRUE(r.plural.empty());
  EXPECT_TRUE(r.singular.empty());
}

TEST(ExtractTwitter, MixedTweetIsExcluded) {
  const auto r = yall::extract_twitter({tweet("1", "A", "y'all know I love you")}, lex());
  EXPECT_TRUE(r.plural.empty());
  EXPECT_TRUE(r.singular.empty());
  EXPECT_EQ(r.stats.mixed, 1u);
}

TEST(ExtractTwitter, GeoAndAuthorCarried) {
  auto t = tweet("9", "A", "Good morning y'all");
  t.geo = yall::Geo{30.27, -97.74};
  const auto r = yall::extract_twitter({t}, lex());
  ASSERT_EQ(r.plural.size(), 1u);
  EXPECT_EQ(r.plural[0].provenance.geo, t.geo);
  EXPECT_EQ(r.plural[0].provenance.author_id, "A");
}

class GeneratedTweets : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(GeneratedTweets, MatchesOracle) {
  const auto fx = yall::generate_tweet_fixture(GetParam(), 60);
  const auto r = yall::extract_twitter(fx.tweets, lex());
  std::string why;
  EXPECT_TRUE(oracle::equivalent(oracle::twitter(fx.tweets), r.plural, r.singular, &why)) << why;
}

TEST_P(GeneratedTweets, Invariants) {
  const auto fx = yall::generate_tweet_fixture(GetParam(), 60);
  std::map<std::string, std::string> source;
  for (const auto& t : fx.tweets) source[t.id] = t.text;
  const auto r = yall::extract_twitter(fx.tweets, lex());
  for (const auto& i : r.plural) {
    EXPECT_FALSE(i.text.empty());
    EXPECT_TRUE(yall::target_is_you(i));
    const std::string original = yall::unmask(i);
    EXPECT_EQ(original, source.at(i.provenance.source_id));
    EXPECT_FALSE(yall::match_plural_forms(original, lex()).empty());
  }
  for (const auto& i : r.singular) {
    EXPECT_FALSE(i.text.empty());
    EXPECT_TRUE(yall::target_is_you(i));
    EXPECT_TRUE(yall::match_plural_forms(i.text, lex()).empty());
  }
}

TEST_P(GeneratedTweets, Deterministic) {
  const auto fx = yall::generate_tweet_fixture(GetParam(), 60);
  auto dump = [&] {
    const auto r = yall::extract_twitter(fx.tweets, lex());
    std::ostringstream out;
    yall::write_instances(out, r.plural);
    yall::write_instances(out, r.singular);
    return out.str();
  };
  EXPECT_EQ(dump(), dump());
}

INSTANTIATE_TEST_SUITE_P(Seeds, GeneratedTweets, ::testing::Values(1, 7, 42, 2024));

}  // namespace
