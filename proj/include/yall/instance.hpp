#pragma once

#include <json.hpp>

#include <cstddef>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yall/error.hpp"
#include "yall/text.hpp"

namespace yall {

using Json = nlohmann::ordered_json;

enum class Label { Singular, Plural };
enum class Domain { Twitter, Europarl };

inline std::string_view to_string(Label label) {
  return label == Label::Plural ? "plural" : "singular";
}

inline std::string_view to_string(Domain domain) {
  return domain == Domain::Twitter ? "twitter" : "europarl";
}

inline std::optional<Label> parse_label(std::string_view s) {
  if (s == "plural") return Label::Plural;
  if (s == "singular") return Label::Singular;
  return std::nullopt;
}

inline std::optional<Domain> parse_domain(std::string_view s) {
  if (s == "twitter") return Domain::Twitter;
  if (s == "europarl") return Domain::Europarl;
  return std::nullopt;
}

struct Geo {
  double lat = 0.0;
  double lon = 0.0;

  bool valid() const { return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0; }
  friend bool operator==(const Geo&, const Geo&) = default;
};

// A raw tweet or sentence.
struct Utterance {
  std::string id;
  std::string author_id;
  std::string text;
  std::optional<Geo> geo;
  Domain domain = Domain::Twitter;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct Provenance {
  std::string source_id;
  std::optional<std::string> author_id;
  std::optional<std::string> original_surface;
  std::optional<std::string> canonical_form;
  std::optional<Geo> geo;
  std::optional<std::string> aligned_foreign_sentence;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// One "you" under judgment. The token at target_token_index of
// tokenize(text) is "you" up to case.
struct LabeledInstance {
  std::string text;
  std::size_t target_token_index = 0;
  Label label = Label::Singular;
  Domain domain = Domain::Twitter;
  Provenance provenance;

  friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

inline bool target_is_you(const LabeledInstance& instance) {
  const auto tokens = tokenize(instance.text);
  return instance.target_token_index < tokens.size() &&
         is_you(tokens[instance.target_token_index].text);
}

// ---------------------------------------------------------------------------
// JSONL schema. Keys are always written in the same order:
//   {"text", "target_token_index", "label", "domain", "provenance": {...}}
// Optional provenance members are omitted when unset.

inline Json to_json(const LabeledInstance& instance) {
  Json prov = Json::object();
  const Provenance& p = instance.provenance;
  prov["source_id"] = p.source_id;
  if (p.author_id) prov["author_id"] = *p.author_id;
  if (p.original_surface) prov["original_surface"] = *p.original_surface;
  if (p.canonical_form) prov["canonical_form"] = *p.canonical_form;
  if (p.geo) prov["geo"] = Json{{"lat", p.geo->lat}, {"lon", p.geo->lon}};
  if (p.aligned_foreign_sentence) prov["aligned_foreign_sentence"] = *p.aligned_foreign_sentence;

  Json j = Json::object();
  j["text"] = instance.text;
  j["target_token_index"] = instance.target_token_index;
  j["label"] = to_string(instance.label);
  j["domain"] = to_string(instance.domain);
  j["provenance"] = std::move(prov);
  return j;
}

namespace detail {

inline const Json& require(const Json& j, const char* field, const std::string& source,
                           std::size_t line) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) throw SchemaError(source, line, field);
  return *it;
}

inline std::string require_string(const Json& j, const char* field, const std::string& source,
                                  std::size_t line) {
  const Json& v = require(j, field, source, line);
  if (!v.is_string()) throw SchemaError(source, line, field, "expected string for");
  return v.get<std::string>();
}

inline std::optional<std::string> optional_string(const Json& j, const char* field,
                                                  const std::string& source, std::size_t line) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw SchemaError(source, line, field, "expected string for");
  return it->get<std::string>();
}

// Ids in the wild are either strings or integers.
inline std::string require_id(const Json& j, const char* field, const std::string& source,
                              std::size_t line) {
  const Json& v = require(j, field, source, line);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw SchemaError(source, line, field, "expected string or integer for");
}

inline std::optional<double> optional_number(const Json& j, const char* field,
                                             const std::string& source, std::size_t line) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw SchemaError(source, line, field, "expected number for");
  return it->get<double>();
}

}  // namespace detail

// `source` and `line` only feed error messages.
inline LabeledInstance instance_from_json(const Json& j, const std::string& source = "<json>",
                                          std::size_t line = 0) {
  if (!j.is_object()) throw ParseError(source, line, "expected a JSON object");
  LabeledInstance out;
  out.text = detail::require_string(j, "text", source, line);

  const Json& idx = detail::require(j, "target_token_index", source, line);
  if (!idx.is_number_integer() || idx.get<long long>() < 0) {
    throw SchemaError(source, line, "target_token_index", "expected non-negative integer for");
  }
  out.target_token_index = idx.get<std::size_t>();

  const auto label = parse_label(detail::require_string(j, "label", source, line));
  if (!label) throw SchemaError(source, line, "label", "expected singular|plural for");
  out.label = *label;

  const auto domain = parse_domain(detail::require_string(j, "domain", source, line));
  if (!domain) throw SchemaError(source, line, "domain", "expected twitter|europarl for");
  out.domain = *domain;

  const Json& prov = detail::require(j, "provenance", source, line);
  if (!prov.is_object()) throw SchemaError(source, line, "provenance", "expected object for");
  Provenance& p = out.provenance;
  p.source_id = detail::require_id(prov, "source_id", source, line);
  p.author_id = detail::optional_string(prov, "author_id", source, line);
  p.original_surface = detail::optional_string(prov, "original_surface", source, line);
  p.canonical_form = detail::optional_string(prov, "canonical_form", source, line);
  p.aligned_foreign_sentence =
      detail::optional_string(prov, "aligned_foreign_sentence", source, line);
  if (auto it = prov.find("geo"); it != prov.end() && !it->is_null()) {
    if (!it->is_object()) throw SchemaError(source, line, "geo", "expected object for");
    const auto lat = detail::optional_number(*it, "lat", source, line);
    const auto lon = detail::optional_number(*it, "lon", source, line);
    if (!lat || !lon) throw SchemaError(source, line, "geo");
    p.geo = Geo{*lat, *lon};
  }

  if (trim(out.text).empty()) throw SchemaError(source, line, "text", "empty");
  if (!target_is_you(out)) {
    throw SchemaError(source, line, "target_token_index", "token is not \"you\" at");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Line-oriented IO.

// Calls fn(line_text, line_number) for each line; strips a trailing '\r'.
inline void for_each_line(const std::string& path,
                          const std::function<void(std::string_view, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fn(line, n);
  }
}

inline std::vector<LabeledInstance> read_instances(const std::string& path) {
  std::vector<LabeledInstance> out;
  for_each_line(path, [&](std::string_view line, std::size_t n) {
    if (trim(line).empty()) return;
    if (!is_valid_utf8(line)) throw EncodingError(path, n);
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError(path, n, "malformed JSON");
    out.push_back(instance_from_json(j, path, n));
  });
  return out;
}

inline void write_instances(std::ostream& out, const std::vector<LabeledInstance>& instances) {
  for (const auto& instance : instances) out << to_json(instance).dump() << '\n';
}

inline void write_instances(const std::string& path,
                            const std::vector<LabeledInstance>& instances) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  write_instances(out, instances);
  if (!out) throw DataError("write failed: " + path);
}

// Tweet records: {"id", "author_id", "text", "lat"?, "lon"?}.
inline Utterance utterance_from_json(const Json& j, const std::string& source = "<json>",
                                     std::size_t line = 0) {
  if (!j.is_object()) throw ParseError(source, line, "expected a JSON object");
  Utterance u;
  u.id = detail::require_id(j, "id", source, line);
  u.author_id = detail::require_id(j, "author_id", source, line);
  u.text = detail::require_string(j, "text", source, line);
  if (is_blank(u.text)) throw SchemaError(source, line, "text", "empty");
  const auto lat = detail::optional_number(j, "lat", source, line);
  const auto lon = detail::optional_number(j, "lon", source, line);
  if (lat.has_value() != lon.has_value()) {
    throw SchemaError(source, line, lat ? "lon" : "lat", "coordinate pair incomplete, missing");
  }
  if (lat) {
    u.geo = Geo{*lat, *lon};
    if (!u.geo->valid()) throw SchemaError(source, line, "lat", "coordinates out of range in");
  }
  u.domain = Domain::Twitter;
  return u;
}

inline Json to_json(const Utterance& u) {
  Json j = Json::object();
  j["id"] = u.id;
  j["author_id"] = u.author_id;
  j["text"] = u.text;
  if (u.geo) {
    j["lat"] = u.geo->lat;
    j["lon"] = u.geo->lon;
  }
  return j;
}

inline std::vector<Utterance> read_utterances(const std::string& path) {
  std::vector<Utterance> out;
  for_each_line(path, [&](std::string_view line, std::size_t n) {
    if (trim(line).empty()) return;
    if (!is_valid_utf8(line)) throw EncodingError(path, n);
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError(path, n, "malformed JSON");
    out.push_back(utterance_from_json(j, path, n));
  });
  return out;
}

}  // namespace yall
