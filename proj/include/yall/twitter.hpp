#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "yall/error.hpp"
#include "yall/instance.hpp"
#include "yall/text.hpp"

namespace yall {

struct MatchPolicy {
  bool case_insensitive = true;
  bool apostrophe_normalization = true;
};

// Inventory of informal plural second-person forms. Variants are stored
// as token sequences so that multi-word forms ("you guys") match across
// whitespace.
class PluralFormLexicon {
 public:
  struct Entry {
    std::string canonical;
    std::vector<std::vector<std::string>> variants;  // keys, see key()
  };

  static constexpr std::size_t kMaxVariantTokens = 3;

  PluralFormLexicon() = default;

  explicit PluralFormLexicon(MatchPolicy policy) : policy_(policy) {}

  // y'all, you guys, youse, yous, yinz, you-uns, you lot. Bare "you all" is
  // left out on purpose: "I see you all the time".
  static PluralFormLexicon defaults() {
    PluralFormLexicon lex;
    lex.add("y'all", {"y'all", "yall", "ya'll", "all y'all"});
    lex.add("you guys", {"you guys"});
    lex.add("youse", {"youse"});
    lex.add("yous", {"yous"});
    lex.add("yinz", {"yinz"});
    lex.add("you-uns", {"you-uns", "youns"});
    lex.add("you lot", {"you lot"});
    return lex;
  }

  // {"canonical": ["variant", ...], ...}; entry order is preserved.
  static PluralFormLexicon from_json(const Json& j, MatchPolicy policy = {}) {
    if (!j.is_object()) throw ConfigError("lexicon must be a JSON object");
    PluralFormLexicon lex(policy);
    for (const auto& [canonical, variants] : j.items()) {
      if (!variants.is_array()) {
        throw ConfigError("lexicon entry '" + canonical + "' must be an array of strings");
      }
      std::vector<std::string> surfaces;
      for (const auto& v : variants) {
        if (!v.is_string()) throw ConfigError("lexicon variant for '" + canonical + "' not a string");
        surfaces.push_back(v.get<std::string>());
      }
      lex.add(canonical, surfaces);
    }
    if (lex.empty()) throw ConfigError("lexicon is empty");
    return lex;
  }

  static PluralFormLexicon load(const std::string& path, MatchPolicy policy = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open lexicon " + path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("lexicon " + path + " is not valid JSON");
    return from_json(j, policy);
  }

  void add(const std::string& canonical, const std::vector<std::string>& surfaces) {
    for (const auto& e : entries_) {
      if (e.canonical == canonical) throw ConfigError("duplicate canonical form '" + canonical + "'");
    }
    Entry entry{canonical, {}};
    for (const auto& surface : surfaces) {
      std::vector<std::string> seq;
      for (const auto& t : tokenize(surface)) seq.push_back(key(t.text));
      if (seq.empty() || seq.size() > kMaxVariantTokens) {
        throw ConfigError("variant '" + surface + "' of '" + canonical +
                          "' must have 1 to 3 tokens");
      }
      entry.variants.push_back(std::move(seq));
    }
    if (entry.variants.empty()) throw ConfigError("'" + canonical + "' has no variants");
    entries_.push_back(std::move(entry));
    max_len_ = std::max(max_len_, longest(entries_.back()));
  }

  std::string key(std::string_view token) const {
    std::string k = policy_.case_insensitive ? fold_case(token) : std::string(token);
    return policy_.apostrophe_normalization ? normalize_apostrophes(k) : k;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  const MatchPolicy& policy() const { return policy_; }
  bool empty() const { return entries_.empty(); }
  std::size_t max_variant_length() const { return max_len_; }

  // Canonical form of a single surface string, if it is a variant.
  std::optional<std::string> canonical_of(std::string_view surface) const {
    std::vector<std::string> seq;
    for (const auto& t : tokenize(surface)) seq.push_back(key(t.text));
    for (const auto& e : entries_) {
      for (const auto& v : e.variants) {
        if (v == seq) return e.canonical;
      }
    }
    return std::nullopt;
  }

 private:
  static std::size_t longest(const Entry& e) {
    std::size_t n = 0;
    for (const auto& v : e.variants) n = std::max(n, v.size());
    return n;
  }

  MatchPolicy policy_;
  std::vector<Entry> entries_;
  std::size_t max_len_ = 0;
};

struct PluralMatch {
  std::size_t token_begin = 0;  // token indices, [token_begin, token_end)
  std::size_t token_end = 0;
  std::size_t char_begin = 0;   // byte offsets, [char_begin, char_end)
  std::size_t char_end = 0;
  std::string canonical_form;
  std::string original_surface;

  friend bool operator==(const PluralMatch&, const PluralMatch&) = default;
};

// Leftmost, then longest, non-overlapping matches.
inline std::vector<PluralMatch> match_plural_forms(std::string_view text,
                                                   const std::vector<Token>& tokens,
                                                   const PluralFormLexicon& lexicon) {
  if (lexicon.empty()) throw ConfigError("plural-form lexicon is empty");
  std::vector<std::string> keys;
  keys.reserve(tokens.size());
  for (const auto& t : tokens) keys.push_back(lexicon.key(t.text));

  std::vector<PluralMatch> matches;
  std::size_t i = 0;
  while (i < keys.size()) {
    const PluralFormLexicon::Entry* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& entry : lexicon.entries()) {
      for (const auto& variant : entry.variants) {
        if (variant.size() <= best_len || i + variant.size() > keys.size()) continue;
        if (std::equal(variant.begin(), variant.end(), keys.begin() + static_cast<long>(i))) {
          best = &entry;
          best_len = variant.size();
        }
      }
    }
    if (best == nullptr) {
      ++i;
      continue;
    }
    PluralMatch m;
    m.token_begin = i;
    m.token_end = i + best_len;
    m.char_begin = tokens[i].begin;
    m.char_end = tokens[i + best_len - 1].end;
    m.canonical_form = best->canonical;
    m.original_surface = std::string(text.substr(m.char_begin, m.char_end - m.char_begin));
    matches.push_back(std::move(m));
    i += best_len;
  }
  return matches;
}

inline std::vector<PluralMatch> match_plural_forms(std::string_view text,
                                                   const PluralFormLexicon& lexicon) {
  return match_plural_forms(text, tokenize(text), lexicon);
}

// Authors with at least one tweet containing a plural form.
inline std::set<std::string> qualify_users(const std::vector<Utterance>& stream,
                                           const PluralFormLexicon& lexicon) {
  std::set<std::string> users;
  for (const auto& u : stream) {
    if (users.contains(u.author_id)) continue;
    if (!match_plural_forms(u.text, lexicon).empty()) users.insert(u.author_id);
  }
  return users;
}

struct MaskResult {
  std::string masked_text;
  std::size_t target_token_index = 0;
  std::string original_surface;
};

// Replaces the matched span with "you" ("You" when the surface started
// upper-case). Bytes outside the span are untouched.
inline MaskResult mask_plural(std::string_view text, const PluralMatch& match) {
  if (match.char_begin >= match.char_end || match.char_end > text.size() ||
      text.substr(match.char_begin, match.char_end - match.char_begin) != match.original_surface) {
    throw InvalidMatch("match span [" + std::to_string(match.char_begin) + ", " +
                       std::to_string(match.char_end) + ") does not address '" +
                       match.original_surface + "' in the text");
  }
  MaskResult r;
  r.original_surface = match.original_surface;
  r.masked_text.reserve(text.size());
  r.masked_text.append(text.substr(0, match.char_begin));
  r.masked_text.append(starts_with_upper(match.original_surface) ? "You" : "you");
  r.masked_text.append(text.substr(match.char_end));

  const auto tokens = tokenize(r.masked_text);
  auto it = std::find_if(tokens.begin(), tokens.end(),
                         [&](const Token& t) { return t.begin == match.char_begin; });
  if (it == tokens.end() || !is_you(it->text)) {
    throw InvalidMatch("masked span does not form a standalone token");
  }
  r.target_token_index = static_cast<std::size_t>(it - tokens.begin());
  return r;
}

// Inverse of mask_plural.
inline std::string unmask(const LabeledInstance& instance) {
  if (!instance.provenance.original_surface) return instance.text;
  const auto tokens = tokenize(instance.text);
  if (instance.target_token_index >= tokens.size()) {
    throw IndexError("target index " + std::to_string(instance.target_token_index) +
                     " out of range");
  }
  const Token& t = tokens[instance.target_token_index];
  std::string out = instance.text.substr(0, t.begin);
  out += *instance.provenance.original_surface;
  out += instance.text.substr(t.end);
  return out;
}

struct TwitterStats {
  std::size_t tweets = 0;
  std::size_t qualifying_users = 0;
  std::size_t unqualified_author = 0;  // tweets dropped because the author never used a plural form
  std::size_t plural = 0;
  std::size_t singular = 0;
  std::size_t mixed = 0;              // plural form and bare "you" together
  std::size_t multiple_targets = 0;   // several plural forms, or several bare "you"
  std::size_t no_target = 0;

  std::size_t dropped() const { return unqualified_author + mixed + multiple_targets + no_target; }
};

struct TwitterExtraction {
  std::vector<LabeledInstance> plural;
  std::vector<LabeledInstance> singular;
  TwitterStats stats;
};

// Two passes: find qualifying users, then keep their tweets that carry
// exactly one target (one plural form XOR one bare "you"). Output follows
// input order.
inline TwitterExtraction extract_twitter(const std::vector<Utterance>& stream,
                                         const PluralFormLexicon& lexicon) {
  TwitterExtraction out;
  const auto users = qualify_users(stream, lexicon);
  out.stats.tweets = stream.size();
  out.stats.qualifying_users = users.size();

  for (const auto& u : stream) {
    if (!users.contains(u.author_id)) {
      ++out.stats.unqualified_author;
      continue;
    }
    const auto tokens = tokenize(u.text);
    const auto matches = match_plural_forms(u.text, tokens, lexicon);

    std::size_t bare_you = 0;
    std::size_t bare_index = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      while (m < matches.size() && matches[m].token_end <= i) ++m;
      const bool inside = m < matches.size() && matches[m].token_begin <= i;
      if (!inside && is_you(tokens[i].text)) {
        ++bare_you;
        bare_index = i;
      }
    }

    if (matches.size() == 1 && bare_you == 0) {
      const MaskResult masked = mask_plural(u.text, matches.front());
      LabeledInstance inst;
      inst.text = masked.masked_text;
      inst.target_token_index = masked.target_token_index;
      inst.label = Label::Plural;
      inst.domain = Domain::Twitter;
      inst.provenance.source_id = u.id;
      inst.provenance.author_id = u.author_id;
      inst.provenance.original_surface = masked.original_surface;
      inst.provenance.canonical_form = matches.front().canonical_form;
      inst.provenance.geo = u.geo;
      out.plural.push_back(std::move(inst));
      ++out.stats.plural;
    } else if (matches.empty() && bare_you == 1) {
      LabeledInstance inst;
      inst.text = u.text;
      inst.target_token_index = bare_index;
      inst.label = Label::Singular;
      inst.domain = Domain::Twitter;
      inst.provenance.source_id = u.id;
      inst.provenance.author_id = u.author_id;
      inst.provenance.geo = u.geo;
      out.singular.push_back(std::move(inst));
      ++out.stats.singular;
    } else if (!matches.empty() && bare_you > 0) {
      ++out.stats.mixed;
    } else if (matches.size() > 1 || bare_you > 1) {
      ++out.stats.multiple_targets;
    } else {
      ++out.stats.no_target;
    }
  }
  return out;
}

}  // namespace yall
