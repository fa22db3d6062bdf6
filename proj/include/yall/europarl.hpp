#pragma once

#include <cstddef>
#include <fstream>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "yall/error.hpp"
#include "yall/instance.hpp"
#include "yall/text.hpp"

namespace yall {

struct ParallelPair {
  std::size_t line_number = 0;  // 1-based
  std::string english;
  std::string spanish;
};

// Spanish second-person pronouns, matched as whole tokens after case
// folding. Accents are significant: "tu" is the possessive, "tú" the pronoun.
class EsPronounLexicon {
 public:
  EsPronounLexicon(const std::vector<std::string>& plural, const std::vector<std::string>& singular) {
    for (const auto& p : plural) plural_.insert(fold_case(p));
    for (const auto& s : singular) singular_.insert(fold_case(s));
    if (plural_.empty() || singular_.empty()) {
      throw ConfigError("spanish pronoun lexicon needs non-empty plural and singular sets");
    }
    for (const auto& p : plural_) {
      if (singular_.contains(p)) throw ConfigError("'" + p + "' is both plural and singular");
    }
  }

  static EsPronounLexicon defaults() {
    return EsPronounLexicon({"ustedes", "vosotros", "vosotras"}, {"tú", "usted"});
  }

  // {"plural": [...], "singular": [...]}
  static EsPronounLexicon from_json(const Json& j) {
    auto list = [&](const char* key) {
      std::vector<std::string> out;
      auto it = j.find(key);
      if (it == j.end() || !it->is_array()) {
        throw ConfigError(std::string("spanish lexicon needs an array '") + key + "'");
      }
      for (const auto& v : *it) {
        if (!v.is_string()) throw ConfigError(std::string("non-string entry in '") + key + "'");
        out.push_back(v.get<std::string>());
      }
      return out;
    };
    if (!j.is_object()) throw ConfigError("spanish lexicon must be a JSON object");
    return EsPronounLexicon(list("plural"), list("singular"));
  }

  static EsPronounLexicon load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open spanish lexicon " + path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("spanish lexicon " + path + " is not valid JSON");
    return from_json(j);
  }

  bool is_plural(const std::string& folded) const { return plural_.contains(folded); }
  bool is_singular(const std::string& folded) const { return singular_.contains(folded); }
  const std::set<std::string>& plural_forms() const { return plural_; }
  const std::set<std::string>& singular_forms() const { return singular_; }

 private:
  std::set<std::string> plural_;
  std::set<std::string> singular_;
};

struct PronounProfile {
  std::size_t n_plural = 0;
  std::size_t n_singular = 0;

  friend bool operator==(const PronounProfile&, const PronounProfile&) = default;
};

inline PronounProfile pronoun_profile(std::string_view sentence, const EsPronounLexicon& lexicon) {
  PronounProfile p;
  for (const auto& t : tokenize(sentence)) {
    const std::string key = fold_case(t.text);
    if (lexicon.is_plural(key)) ++p.n_plural;
    else if (lexicon.is_singular(key)) ++p.n_singular;
  }
  return p;
}

inline std::size_t english_you_count(const std::vector<Token>& tokens) {
  std::size_t n = 0;
  for (const auto& t : tokens) n += is_you(t.text) ? 1 : 0;
  return n;
}

inline std::size_t english_you_count(std::string_view sentence) {
  return english_you_count(tokenize(sentence));
}

struct ParallelLoadStats {
  std::size_t lines = 0;
  std::size_t blank = 0;  // skipped: one side empty after trimming
};

namespace detail {

inline std::size_t count_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace detail

// Streams line-aligned bitext. Both files are counted first, so an
// alignment error is raised before any pair is delivered.
inline ParallelLoadStats for_each_parallel(const std::string& english_path,
                                           const std::string& spanish_path,
                                           const std::function<void(ParallelPair&&)>& fn) {
  const std::size_t en_lines = detail::count_lines(english_path);
  const std::size_t es_lines = detail::count_lines(spanish_path);
  if (en_lines != es_lines) throw AlignmentError(en_lines, es_lines);

  std::ifstream en(english_path, std::ios::binary);
  std::ifstream es(spanish_path, std::ios::binary);
  ParallelLoadStats stats;
  ParallelPair pair;
  while (std::getline(en, pair.english) && std::getline(es, pair.spanish)) {
    ++stats.lines;
    pair.line_number = stats.lines;
    if (!pair.english.empty() && pair.english.back() == '\r') pair.english.pop_back();
    if (!pair.spanish.empty() && pair.spanish.back() == '\r') pair.spanish.pop_back();
    if (!is_valid_utf8(pair.english)) throw EncodingError(english_path, pair.line_number);
    if (!is_valid_utf8(pair.spanish)) throw EncodingError(spanish_path, pair.line_number);
    if (is_blank(pair.english) || is_blank(pair.spanish)) {
      ++stats.blank;
      continue;
    }
    fn(std::move(pair));
    pair = ParallelPair{};
  }
  return stats;
}

inline std::vector<ParallelPair> load_parallel(const std::string& english_path,
                                               const std::string& spanish_path,
                                               ParallelLoadStats* stats = nullptr) {
  std::vector<ParallelPair> pairs;
  const auto s = for_each_parallel(english_path, spanish_path,
                                   [&](ParallelPair&& p) { pairs.push_back(std::move(p)); });
  if (stats != nullptr) *stats = s;
  return pairs;
}

struct EuroparlStats {
  std::size_t pairs = 0;
  std::size_t plural = 0;
  std::size_t singular = 0;
  std::size_t no_spanish_pronoun = 0;
  std::size_t mixed_spanish = 0;        // plural and singular pronouns together
  std::size_t multiple_spanish = 0;     // same-class pronoun more than once
  std::size_t english_you_mismatch = 0; // English side lacks exactly one "you"

  std::size_t dropped() const {
    return no_spanish_pronoun + mixed_spanish + multiple_spanish + english_you_mismatch;
  }
};

struct EuroparlExtraction {
  std::vector<LabeledInstance> plural;
  std::vector<LabeledInstance> singular;
  EuroparlStats stats;
};

// Incremental form of extract_europarl, for streaming large corpora.
class EuroparlExtractor {
 public:
  explicit EuroparlExtractor(EsPronounLexicon lexicon) : lexicon_(std::move(lexicon)) {}

  void add(const ParallelPair& pair) {
    ++result_.stats.pairs;
    const PronounProfile es = pronoun_profile(pair.spanish, lexicon_);
    Label label;
    if (es.n_plural == 1 && es.n_singular == 0) {
      label = Label::Plural;
    } else if (es.n_singular == 1 && es.n_plural == 0) {
      label = Label::Singular;
    } else {
      if (es.n_plural == 0 && es.n_singular == 0) ++result_.stats.no_spanish_pronoun;
      else if (es.n_plural > 0 && es.n_singular > 0) ++result_.stats.mixed_spanish;
      else ++result_.stats.multiple_spanish;
      return;
    }

    const auto tokens = tokenize(pair.english);
    std::size_t count = 0;
    std::size_t index = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (is_you(tokens[i].text)) {
        ++count;
        index = i;
      }
    }
    if (count != 1) {
      ++result_.stats.english_you_mismatch;
      return;
    }

    LabeledInstance inst;
    inst.text = pair.english;
    inst.target_token_index = index;
    inst.label = label;
    inst.domain = Domain::Europarl;
    inst.provenance.source_id = std::to_string(pair.line_number);
    inst.provenance.aligned_foreign_sentence = pair.spanish;
    if (label == Label::Plural) {
      ++result_.stats.plural;
      result_.plural.push_back(std::move(inst));
    } else {
      ++result_.stats.singular;
      result_.singular.push_back(std::move(inst));
    }
  }

  const EuroparlExtraction& result() const { return result_; }
  EuroparlExtraction take() { return std::move(result_); }

 private:
  EsPronounLexicon lexicon_;
  EuroparlExtraction result_;
};

// Labels an English sentence by the Spanish pronoun it aligns with; keeps
// pairs with exactly one Spanish second-person pronoun and exactly one
// English "you".
inline EuroparlExtraction extract_europarl(const std::vector<ParallelPair>& pairs,
                                           const EsPronounLexicon& lexicon) {
  EuroparlExtractor extractor(lexicon);
  for (const auto& p : pairs) extractor.add(p);
  return extractor.take();
}

}  // namespace yall
