#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "yall/europarl.hpp"
#include "yall/instance.hpp"
#include "yall/random.hpp"

namespace yall {

// Synthetic corpora with a ground-truth ledger. Every template carries the
// hand-counted token index of its slot, so the expected extraction output
// is known without running the tokenizer or the extractors.

enum class Outcome { Plural, Singular, Dropped };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Plural: return "plural";
    case Outcome::Singular: return "singular";
    case Outcome::Dropped: return "dropped";
  }
  return "";
}

struct TweetTruth {
  std::string id;
  Outcome outcome = Outcome::Dropped;
  std::string expected_text;       // after masking; empty when dropped
  std::size_t target_index = 0;
  std::string canonical_form;      // plural only
  std::string original_surface;    // plural only
};

struct PairTruth {
  std::size_t line_number = 0;
  Outcome outcome = Outcome::Dropped;
  std::size_t target_index = 0;
};

struct TweetFixture {
  std::vector<Utterance> tweets;
  std::vector<TweetTruth> truth;  // parallel to tweets
};

struct BitextFixture {
  std::vector<ParallelPair> pairs;
  std::vector<PairTruth> truth;   // parallel to pairs
};

struct Fixture {
  TweetFixture twitter;
  BitextFixture bitext;
};

namespace fixture_detail {

// A template with one "{}" slot. `slot_token` is the token index at which
// the slot's first token lands.
struct Template {
  std::string_view text;
  std::size_t slot_token;
};

inline std::string fill(std::string_view tmpl, std::string_view value) {
  std::string out(tmpl);
  const auto pos = out.find("{}");
  out.replace(pos, 2, value);
  return out;
}

inline std::string capitalize_ascii(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 32);
  return s;
}

// Surfaces per canonical form.
struct Form {
  std::string_view canonical;
  std::vector<std::string_view> surfaces;
};

inline const std::vector<Form>& forms() {
  static const std::vector<Form> f{
      {"y'all", {"y'all", "yall", "ya'll", "y’all", "all y'all"}},
      {"you guys", {"you guys"}},
      {"youse", {"youse"}},
      {"yous", {"yous"}},
      {"yinz", {"yinz"}},
      {"you-uns", {"you-uns", "youns"}},
      {"you lot", {"you lot"}},
  };
  return f;
}

// Plural form slot, no other "you" in the sentence.
inline const std::vector<Template>& plural_templates() {
  static const std::vector<Template> t{
      {"{} are the best, thanks for coming tonight!", 0},
      {"I love {}! Including @friend.", 2},
      {"Can't wait to see {} this weekend", 4},
      {"Good morning {} :)", 2},
      {"{} ready for the game? #gameday", 0},
      {"Thank {} so much for the birthday wishes", 1},
      {"Miss {} already, come back soon", 1},
      {"what are {} doing later?", 2},
  };
  return t;
}

// Exactly one bare "you".
inline const std::vector<Template>& singular_templates() {
  static const std::vector<Template> t{
      {"Happy anniversary! Look how much {} have done!", 6},
      {"Thank {} for the follow", 1},
      {"{} are amazing, never change", 0},
      {"Did {} see the game last night?", 1},
      {"I miss {} so much", 2},
      {"Hope {} feel better soon @bestie", 1},
      {"honestly {} make my day every day", 1},
  };
  return t;
}

// Plural form slot plus a bare "you" elsewhere.
inline const std::vector<std::string_view>& mixed_templates() {
  static const std::vector<std::string_view> t{
      "Thank you {} for everything",
      "{} know I love you all the same",
      "Did you tell {} the news?",
  };
  return t;
}

// Two bare "you".
inline const std::vector<std::string_view>& double_you_templates() {
  static const std::vector<std::string_view> t{
      "you know you want to come out tonight",
      "Are you sure you locked the door?",
      "If you build it, will you share it?",
  };
  return t;
}

struct Place {
  double lat;
  double lon;
  bool south;
  bool pittsburgh;
};

// Points that fall in exactly one state box (TX, LA, GA, NY, CA, IL, PA, MA).
inline const std::vector<Place>& places() {
  static const std::vector<Place> p{
      {30.27, -97.74, true, false},  {29.95, -90.07, true, false},
      {33.75, -84.39, true, false},  {42.65, -73.75, false, false},
      {34.05, -118.24, false, false}, {41.88, -87.63, false, false},
      {40.44, -79.99, false, true},  {42.36, -71.06, false, false},
  };
  return p;
}

inline const Form& pick_form(Rng& rng, const Place* home) {
  const auto& f = forms();
  const double u = rng.uniform();
  if (home != nullptr && home->south) return u < 0.8 ? f[0] : f[1];
  if (home != nullptr && home->pittsburgh) return u < 0.6 ? f[4] : f[1];
  if (u < 0.35) return f[0];
  if (u < 0.75) return f[1];
  return f[2 + static_cast<std::size_t>(rng.below(f.size() - 2))];
}

inline std::string surface_for(Rng& rng, const Form& form, bool sentence_initial) {
  std::string s(form.surfaces[static_cast<std::size_t>(rng.below(form.surfaces.size()))]);
  return sentence_initial ? capitalize_ascii(s) : s;
}

}  // namespace fixture_detail

// Tweets: n_per_class tweets carrying a plural form (from qualifying users)
// and n_per_class tweets carrying a bare "you" (mostly from the same users,
// some from users who never use a plural form). A fixed share of each
// group is built to be dropped by the one-target rule.
inline TweetFixture generate_tweet_fixture(std::uint64_t seed, std::size_t n_per_class) {
  using namespace fixture_detail;
  Rng rng(seed);
  const std::size_t n_users = std::max<std::size_t>(1, n_per_class / 5);
  const std::size_t n_outsiders = std::max<std::size_t>(1, n_per_class / 10);

  struct User {
    std::string id;
    const Place* home;
  };
  std::vector<User> users;
  for (std::size_t u = 0; u < n_users; ++u) {
    const Place* home = rng.below(4) == 0 ? nullptr : &rng.pick(places());
    users.push_back({"user" + std::to_string(u), home});
  }

  std::vector<std::pair<Utterance, TweetTruth>> rows;
  auto emit = [&](const std::string& author, const Place* home, std::string text, TweetTruth t) {
    Utterance u;
    u.author_id = author;
    u.text = std::move(text);
    if (home != nullptr) u.geo = Geo{home->lat, home->lon};
    rows.emplace_back(std::move(u), std::move(t));
  };

  for (std::size_t i = 0; i < n_per_class; ++i) {
    const User& user = users[i % users.size()];
    TweetTruth truth;
    if (i % 7 == 5) {
      const auto tmpl = rng.pick(mixed_templates());
      const Form& form = pick_form(rng, user.home);
      emit(user.id, user.home, fill(tmpl, surface_for(rng, form, tmpl.starts_with("{}"))), truth);
    } else if (i % 7 == 6) {
      const Form& a = pick_form(rng, user.home);
      const Form& b = pick_form(rng, user.home);
      std::string text = capitalize_ascii(surface_for(rng, a, true)) + " and " +
                         surface_for(rng, b, false) + " should meet up";
      emit(user.id, user.home, std::move(text), truth);
    } else {
      const Template& tmpl = rng.pick(plural_templates());
      const Form& form = pick_form(rng, user.home);
      const bool initial = tmpl.slot_token == 0;
      const std::string surface = surface_for(rng, form, initial);
      truth.outcome = Outcome::Plural;
      truth.expected_text = fill(tmpl.text, initial ? "You" : "you");
      truth.target_index = tmpl.slot_token;
      truth.canonical_form = form.canonical;
      truth.original_surface = surface;
      emit(user.id, user.home, fill(tmpl.text, surface), truth);
    }
  }

  for (std::size_t i = 0; i < n_per_class; ++i) {
    TweetTruth truth;
    if (i % 7 == 6) {
      // Outsider: never uses a plural form, so never qualifies.
      const Template& tmpl = rng.pick(singular_templates());
      const std::string author = "outsider" + std::to_string(i % n_outsiders);
      emit(author, nullptr, fill(tmpl.text, tmpl.slot_token == 0 ? "You" : "you"), truth);
      continue;
    }
    const User& user = users[static_cast<std::size_t>(rng.below(users.size()))];
    if (i % 7 == 5) {
      emit(user.id, user.home, std::string(rng.pick(double_you_templates())), truth);
    } else {
      const Template& tmpl = rng.pick(singular_templates());
      std::string text = fill(tmpl.text, tmpl.slot_token == 0 ? "You" : "you");
      truth.outcome = Outcome::Singular;
      truth.expected_text = text;
      truth.target_index = tmpl.slot_token;
      emit(user.id, user.home, std::move(text), truth);
    }
  }

  rng.shuffle(rows);
  TweetFixture out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& [u, t] = rows[i];
    char id[32];
    std::snprintf(id, sizeof id, "t%05zu", i + 1);
    u.id = id;
    t.id = id;
    out.tweets.push_back(std::move(u));
    out.truth.push_back(std::move(t));
  }
  return out;
}

namespace fixture_detail {

struct EnglishTemplate {
  std::string_view text;
  std::size_t you_index;
  std::size_t topic;  // pairs with a Spanish template of the same topic
};

inline const std::vector<EnglishTemplate>& english_templates() {
  static const std::vector<EnglishTemplate> t{
      {"I did not see you asking to speak.", 4, 0},
      {"Can you tell us when the report will be ready?", 1, 1},
      {"As you know, the Council has not yet decided.", 1, 2},
      {"You have heard the Commissioner on this point.", 0, 3},
      {"I would ask you to support this amendment.", 3, 4},
  };
  return t;
}

// Spanish renderings per topic with a pronoun slot, plural then singular
// verb agreement.
struct SpanishTemplate {
  std::string_view plural;
  std::string_view singular;
};

inline const std::vector<SpanishTemplate>& spanish_templates() {
  static const std::vector<SpanishTemplate> t{
      {"No los vi a {} pedir la palabra.", "No le vi a {} pedir la palabra."},
      {"¿Pueden {} decirnos cuándo estará listo el informe?",
       "¿Puede {} decirnos cuándo estará listo el informe?"},
      {"Como {} saben, el Consejo aún no ha decidido.", "Como {} sabe, el Consejo aún no ha decidido."},
      {"{} han escuchado al Comisario sobre este punto.",
       "{} ha escuchado al Comisario sobre este punto."},
      {"Les pido a {} que apoyen esta enmienda.", "Le pido a {} que apoye esta enmienda."},
  };
  return t;
}

inline std::string spanish_pronoun(Rng& rng, bool plural, bool initial) {
  static const std::vector<std::string_view> pl{"ustedes", "vosotros", "vosotras", "USTEDES"};
  static const std::vector<std::string_view> sg{"tú", "usted"};
  std::string p(plural ? rng.pick(pl) : rng.pick(sg));
  if (initial) {
    if (p == "tú") return "Tú";
    return capitalize_ascii(p);
  }
  return p;
}

}  // namespace fixture_detail

// Bitext with planted Spanish pronouns. Roughly 60% of pairs are clean
// plural or singular instances; the rest exercise each drop rule.
inline BitextFixture generate_bitext_fixture(std::uint64_t seed, std::size_t n_pairs) {
  using namespace fixture_detail;
  Rng rng(seed);
  BitextFixture out;
  for (std::size_t line = 1; line <= n_pairs; ++line) {
    ParallelPair pair;
    pair.line_number = line;
    PairTruth truth;
    truth.line_number = line;
    const auto& en = rng.pick(english_templates());
    const auto& es = spanish_templates()[en.topic];
    const bool es_initial = en.topic == 3;
    const std::uint64_t kind = rng.below(20);
    if (kind < 6 || kind >= 18) {
      const bool plural = kind < 6 || kind == 18;
      pair.english = std::string(en.text);
      pair.spanish = fill(plural ? es.plural : es.singular, spanish_pronoun(rng, plural, es_initial));
      truth.outcome = plural ? Outcome::Plural : Outcome::Singular;
      truth.target_index = en.you_index;
    } else if (kind < 12) {
      pair.english = std::string(en.text);
      pair.spanish = fill(es.singular, spanish_pronoun(rng, false, es_initial));
      truth.outcome = Outcome::Singular;
      truth.target_index = en.you_index;
    } else if (kind == 12) {
      // Plural and singular pronoun together.
      pair.english = std::string(en.text);
      pair.spanish = "Como " + spanish_pronoun(rng, true, false) + " saben y " +
                     spanish_pronoun(rng, false, false) + " sabe, el debate continúa.";
    } else if (kind == 13) {
      pair.english = std::string(en.text);
      pair.spanish = capitalize_ascii(spanish_pronoun(rng, true, false)) + " y " +
                     spanish_pronoun(rng, true, false) + " lo saben bien.";
    } else if (kind == 14) {
      pair.english = "If you agree, you should vote for it.";
      pair.spanish = fill(es.plural, spanish_pronoun(rng, true, es_initial));
    } else if (kind == 15) {
      pair.english = "I thank the Commissioner for your answer.";
      pair.spanish = fill(es.singular, spanish_pronoun(rng, false, es_initial));
    } else if (kind == 16) {
      // Possessive "tu" carries no accent and is not a pronoun.
      pair.english = "Thank you for your answer.";
      pair.spanish = "Gracias por tu respuesta.";
    } else {
      pair.english = std::string(en.text);
      pair.spanish = "El Consejo aún no ha decidido.";
    }
    out.pairs.push_back(std::move(pair));
    out.truth.push_back(truth);
  }
  return out;
}

// Tweets with n_per_class of each cue group, plus bitext of 20 * n_per_class pairs.
inline Fixture generate_fixture(std::uint64_t seed, std::size_t n_per_class) {
  if (n_per_class < 1) throw ConfigError("n_per_class must be at least 1");
  Fixture f;
  f.twitter = generate_tweet_fixture(seed, n_per_class);
  f.bitext = generate_bitext_fixture(seed ^ 0x9e3779b97f4a7c15ULL, 20 * n_per_class);
  return f;
}

inline Json to_json(const TweetTruth& t) {
  Json j = Json::object();
  j["kind"] = "tweet";
  j["id"] = t.id;
  j["outcome"] = to_string(t.outcome);
  if (t.outcome != Outcome::Dropped) {
    j["expected_text"] = t.expected_text;
    j["target_index"] = t.target_index;
  }
  if (t.outcome == Outcome::Plural) {
    j["canonical_form"] = t.canonical_form;
    j["original_surface"] = t.original_surface;
  }
  return j;
}

inline Json to_json(const PairTruth& t) {
  Json j = Json::object();
  j["kind"] = "pair";
  j["line_number"] = t.line_number;
  j["outcome"] = to_string(t.outcome);
  if (t.outcome != Outcome::Dropped) j["target_index"] = t.target_index;
  return j;
}

// ---------------------------------------------------------------------------
// Planted-cue instances for classifier tests. A cue word next to "you"
// signals the label; each domain has its own cues and filler vocabulary,
// so a model trained on one domain has nothing to go on in the other.

struct PlantedOptions {
  std::size_t n_per_class = 500;
  double cue_noise = 0.0;  // probability the cue belongs to the other class
  std::uint64_t seed = 1;
};

inline std::vector<LabeledInstance> generate_planted_instances(Domain domain,
                                                               const PlantedOptions& opt) {
  static const std::vector<std::string_view> tw_filler{
      "lol", "omg", "tonight", "gonna", "so", "cant", "wait", "haha", "love", "this",
      "game", "party", "wow", "srsly", "fun", "later", "tmrw", "yay", "ok", "now"};
  static const std::vector<std::string_view> ep_filler{
      "the", "Commission", "report", "Council", "proposal", "amendment", "Parliament", "on",
      "directive", "budget", "vote", "policy", "Member", "States", "agreement", "of",
      "regulation", "debate", "committee", "framework"};
  static const std::vector<std::string_view> tw_plural{"everyone", "together", "both", "all"};
  static const std::vector<std::string_view> tw_singular{"bro", "babe", "girl", "dude"};
  static const std::vector<std::string_view> ep_plural{"colleagues", "ladies", "gentlemen", "members"};
  static const std::vector<std::string_view> ep_singular{"Commissioner", "rapporteur", "Minister", "Sir"};

  const bool tw = domain == Domain::Twitter;
  const auto& filler = tw ? tw_filler : ep_filler;
  Rng rng(opt.seed ^ (tw ? 0x5457ULL : 0x4550ULL));
  std::vector<LabeledInstance> out;
  for (std::size_t i = 0; i < 2 * opt.n_per_class; ++i) {
    const Label label = i % 2 == 0 ? Label::Plural : Label::Singular;
    const bool flip = rng.uniform() < opt.cue_noise;
    const bool plural_cue = (label == Label::Plural) != flip;
    const auto& cues = tw ? (plural_cue ? tw_plural : tw_singular) : (plural_cue ? ep_plural : ep_singular);

    const std::size_t len = 6 + static_cast<std::size_t>(rng.below(8));
    std::vector<std::string> words;
    for (std::size_t k = 0; k < len; ++k) words.emplace_back(rng.pick(filler));
    const std::size_t you = 1 + static_cast<std::size_t>(rng.below(len - 2));
    words[you] = "you";
    const std::size_t dist = 1 + static_cast<std::size_t>(rng.below(2));
    const bool right = rng.below(2) == 0 || you < dist;
    const std::size_t cue_at = right ? std::min(you + dist, len - 1) : you - dist;
    words[cue_at] = std::string(rng.pick(cues));

    LabeledInstance inst;
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (k > 0) inst.text += ' ';
      inst.text += words[k];
    }
    inst.target_token_index = you;
    inst.label = label;
    inst.domain = domain;
    inst.provenance.source_id = std::string(tw ? "tw" : "ep") + "-planted-" + std::to_string(i);
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace yall
