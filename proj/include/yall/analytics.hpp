#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "yall/error.hpp"
#include "yall/geo.hpp"
#include "yall/instance.hpp"
#include "yall/random.hpp"
#include "yall/twitter.hpp"

namespace yall {

// ---------------------------------------------------------------------------
// Plural-form histogram

struct FormHistogram {
  std::map<std::string, std::size_t> counts;
  std::size_t skipped_not_plural = 0;
  std::size_t skipped_no_surface = 0;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [form, c] : counts) n += c;
    return n;
  }
};

// Canonical form recorded at extraction time, else the lexicon's reading of
// the surface, else the case-folded surface itself.
inline std::optional<std::string> canonical_form_of(const LabeledInstance& instance,
                                                    const PluralFormLexicon& lexicon) {
  const Provenance& p = instance.provenance;
  if (!p.original_surface) return std::nullopt;
  if (p.canonical_form) return *p.canonical_form;
  if (auto c = lexicon.canonical_of(*p.original_surface)) return c;
  return token_key(*p.original_surface);
}

inline FormHistogram form_histogram(const std::vector<LabeledInstance>& instances,
                                    const PluralFormLexicon& lexicon = PluralFormLexicon::defaults()) {
  FormHistogram h;
  for (const auto& i : instances) {
    if (i.label != Label::Plural) {
      ++h.skipped_not_plural;
      continue;
    }
    auto form = canonical_form_of(i, lexicon);
    if (!form) {
      ++h.skipped_no_surface;
      continue;
    }
    ++h.counts[*form];
  }
  return h;
}

inline Json to_json(const FormHistogram& h) {
  Json counts = Json::object();
  for (const auto& [form, c] : h.counts) counts[form] = c;
  Json j = Json::object();
  j["counts"] = std::move(counts);
  j["total"] = h.total();
  j["skipped_not_plural"] = h.skipped_not_plural;
  j["skipped_no_surface"] = h.skipped_no_surface;
  return j;
}

// ---------------------------------------------------------------------------
// Per-state preferred form

struct StatePreferences {
  std::map<std::string, std::string> preferred;                        // state -> form
  std::map<std::string, std::map<std::string, std::size_t>> counts;    // state -> form -> n
  std::map<std::string, std::size_t> global;                           // over geolocated instances
  std::size_t located = 0;
  std::size_t outside = 0;  // geolocated but not inside any state box
};

// Modal form per state. Ties go to the form that is more frequent across
// all geolocated plural instances, then to the lexicographically smaller.
inline StatePreferences state_preference_map(
    const std::vector<LabeledInstance>& instances, const GeoStateIndex& index,
    const PluralFormLexicon& lexicon = PluralFormLexicon::defaults()) {
  StatePreferences out;
  for (const auto& i : instances) {
    if (i.label != Label::Plural || !i.provenance.geo) continue;
    auto form = canonical_form_of(i, lexicon);
    if (!form) continue;
    const Geo& g = *i.provenance.geo;
    auto state = locate_state(g.lat, g.lon, index);
    ++out.global[*form];
    if (!state) {
      ++out.outside;
      continue;
    }
    ++out.located;
    ++out.counts[*state][*form];
  }
  for (const auto& [state, forms] : out.counts) {
    const std::string* best = nullptr;
    std::size_t best_n = 0;
    for (const auto& [form, n] : forms) {
      if (best == nullptr || n > best_n ||
          (n == best_n && out.global[form] > out.global[*best])) {
        best = &form;
        best_n = n;
      }
    }
    out.preferred[state] = *best;
  }
  return out;
}

inline Json to_json(const StatePreferences& p) {
  Json states = Json::object();
  for (const auto& [state, form] : p.preferred) {
    Json forms = Json::object();
    for (const auto& [f, n] : p.counts.at(state)) forms[f] = n;
    states[state] = Json{{"preferred", form}, {"counts", std::move(forms)}};
  }
  Json j = Json::object();
  j["states"] = std::move(states);
  j["located"] = p.located;
  j["outside"] = p.outside;
  return j;
}

// ---------------------------------------------------------------------------
// SVG output

namespace detail {

inline constexpr const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                           "#66a61e", "#e6ab02", "#a6761d", "#666666"};

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

// Forms ordered by descending count, then name.
inline std::vector<std::string> ranked_forms(const std::map<std::string, std::size_t>& counts) {
  std::vector<std::string> forms;
  for (const auto& [f, n] : counts) forms.push_back(f);
  std::stable_sort(forms.begin(), forms.end(),
                   [&](const auto& a, const auto& b) { return counts.at(a) > counts.at(b); });
  return forms;
}

}  // namespace detail

inline std::string histogram_svg(const FormHistogram& h) {
  const auto forms = detail::ranked_forms(h.counts);
  const double bar_h = 24, gap = 8, left = 120, width = 640, top = 40;
  const double height = top + static_cast<double>(forms.size()) * (bar_h + gap) + 20;
  std::size_t max_n = 1;
  for (const auto& [f, n] : h.counts) max_n = std::max(max_n, n);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << detail::fmt(height) << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  svg << "<text x=\"10\" y=\"22\" font-size=\"15\">Informal plural forms (n=" << h.total()
      << ")</text>\n";
  double y = top;
  for (const auto& form : forms) {
    const std::size_t n = h.counts.at(form);
    const double w = (width - left - 80) * static_cast<double>(n) / static_cast<double>(max_n);
    svg << "<text x=\"" << left - 8 << "\" y=\"" << detail::fmt(y + 17)
        << "\" text-anchor=\"end\">" << detail::xml_escape(form) << "</text>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << detail::fmt(y) << "\" width=\"" << detail::fmt(w)
        << "\" height=\"" << bar_h << "\" fill=\"" << detail::kPalette[0] << "\"/>\n";
    svg << "<text x=\"" << detail::fmt(left + w + 6) << "\" y=\"" << detail::fmt(y + 17) << "\">"
        << n << "</text>\n";
    y += bar_h + gap;
  }
  svg << "</svg>\n";
  return svg.str();
}

// Choropleth-style map: each state drawn as its bounding boxes in an
// equirectangular projection, filled by preferred form.
inline std::string state_map_svg(const StatePreferences& prefs, const GeoStateIndex& index) {
  const double width = 960, height = 560, map_h = 480;
  const double lon0 = -125.0, lon1 = -66.5, lat0 = 24.0, lat1 = 49.5;
  auto px = [&](double lon) { return (lon - lon0) / (lon1 - lon0) * width; };
  auto py = [&](double lat) { return (lat1 - lat) / (lat1 - lat0) * map_h; };

  std::map<std::string, std::size_t> form_states;
  for (const auto& [state, form] : prefs.preferred) ++form_states[form];
  const auto forms = detail::ranked_forms(form_states);
  std::map<std::string, std::string> color;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    color[forms[i]] = detail::kPalette[std::min<std::size_t>(i + 1, std::size(detail::kPalette) - 1)];
  }

  struct Drawn {
    const GeoRegion* region;
    const GeoBox* box;
  };
  std::vector<Drawn> boxes;
  for (const auto& r : index.regions()) {
    for (const auto& b : r.boxes) boxes.push_back({&r, &b});
  }
  std::stable_sort(boxes.begin(), boxes.end(),
                   [](const Drawn& a, const Drawn& b) { return a.box->area() > b.box->area(); });

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (const auto& d : boxes) {
    auto it = prefs.preferred.find(d.region->code);
    const std::string fill = it == prefs.preferred.end() ? "#eeeeee" : color[it->second];
    const double x = px(d.box->lon_min), y = py(d.box->lat_max);
    const double w = px(d.box->lon_max) - x, h = py(d.box->lat_min) - y;
    svg << "<rect x=\"" << detail::fmt(x) << "\" y=\"" << detail::fmt(y) << "\" width=\""
        << detail::fmt(w) << "\" height=\"" << detail::fmt(h) << "\" fill=\"" << fill
        << "\" fill-opacity=\"0.85\" stroke=\"#ffffff\" stroke-width=\"1\"><title>"
        << d.region->code;
    if (it != prefs.preferred.end()) svg << ": " << detail::xml_escape(it->second);
    svg << "</title></rect>\n";
  }
  for (const auto& r : index.regions()) {
    const GeoBox& b = r.boxes.front();
    svg << "<text x=\"" << detail::fmt(px((b.lon_min + b.lon_max) / 2)) << "\" y=\""
        << detail::fmt(py((b.lat_min + b.lat_max) / 2)) << "\" text-anchor=\"middle\">" << r.code
        << "</text>\n";
  }
  double lx = 10;
  for (const auto& form : forms) {
    svg << "<rect x=\"" << detail::fmt(lx) << "\" y=\"" << map_h + 30 << "\" width=\"14\" height=\"14\" fill=\""
        << color[form] << "\"/>\n";
    svg << "<text x=\"" << detail::fmt(lx + 20) << "\" y=\"" << map_h + 42 << "\" font-size=\"13\">"
        << detail::xml_escape(form) << "</text>\n";
    lx += 40 + 8.0 * static_cast<double>(form.size());
  }
  svg << "</svg>\n";
  return svg.str();
}

// ---------------------------------------------------------------------------
// Quality estimation

enum class HumanLabel { Agree, Disagree, Ambiguous };

inline std::string_view to_string(HumanLabel h) {
  switch (h) {
    case HumanLabel::Agree: return "agree";
    case HumanLabel::Disagree: return "disagree";
    case HumanLabel::Ambiguous: return "ambiguous";
  }
  return "";
}

inline std::optional<HumanLabel> parse_human_label(std::string_view s) {
  if (s == "agree") return HumanLabel::Agree;
  if (s == "disagree") return HumanLabel::Disagree;
  if (s == "ambiguous") return HumanLabel::Ambiguous;
  return std::nullopt;
}

struct QualitySample {
  std::vector<LabeledInstance> instances;
  std::vector<HumanLabel> human_labels;  // empty until annotated
};

// Uniform sample without replacement, in draw order.
inline QualitySample sample_for_annotation(const std::vector<LabeledInstance>& corpus,
                                           std::size_t n, std::optional<Label> label_filter,
                                           std::uint64_t seed) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!label_filter || corpus[i].label == *label_filter) pool.push_back(i);
  }
  if (pool.size() < n) {
    throw TooSmallError("need " + std::to_string(n) + " matching instances to sample, have " +
                        std::to_string(pool.size()));
  }
  Rng rng(seed);
  QualitySample sample;
  sample.instances.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.below(pool.size() - k));
    std::swap(pool[k], pool[j]);
    sample.instances.push_back(corpus[pool[k]]);
  }
  return sample;
}

// Fraction of instances the annotator agreed with; ambiguous counts as
// not agreeing.
inline double compute_agreement(const QualitySample& sample) {
  if (sample.instances.empty()) throw DataError("cannot compute agreement on an empty sample");
  if (sample.human_labels.size() != sample.instances.size()) {
    throw DataError("sample has " + std::to_string(sample.instances.size()) + " instances but " +
                    std::to_string(sample.human_labels.size()) + " human labels");
  }
  const auto agree = std::count(sample.human_labels.begin(), sample.human_labels.end(),
                                HumanLabel::Agree);
  return static_cast<double>(agree) / static_cast<double>(sample.instances.size());
}

// Annotation exchange file: one instance per line with an extra
// "human_label" member, written empty and filled in offline.
inline void write_annotation_file(const std::string& path, const QualitySample& sample) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  for (std::size_t i = 0; i < sample.instances.size(); ++i) {
    Json j = to_json(sample.instances[i]);
    j["human_label"] =
        i < sample.human_labels.size() ? std::string(to_string(sample.human_labels[i])) : "";
    out << j.dump() << '\n';
  }
}

inline QualitySample read_annotation_file(const std::string& path) {
  QualitySample sample;
  for_each_line(path, [&](std::string_view line, std::size_t n) {
    if (trim(line).empty()) return;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError(path, n, "malformed JSON");
    sample.instances.push_back(instance_from_json(j, path, n));
    auto it = j.find("human_label");
    if (it == j.end() || !it->is_string()) throw SchemaError(path, n, "human_label");
    const auto label = parse_human_label(it->get<std::string>());
    if (!label) {
      throw SchemaError(path, n, "human_label", "expected agree|disagree|ambiguous for");
    }
    sample.human_labels.push_back(*label);
  });
  return sample;
}

}  // namespace yall
