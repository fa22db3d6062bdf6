#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "yall/error.hpp"
#include "yall/instance.hpp"

namespace yall {

// Approximate bounding boxes for the 48 contiguous states and DC.
// Kept in sync with resources/us_state_boxes.json (checked by a test).
inline constexpr std::string_view kUsStateBoxesJson = R"json({
  "version": 1,
  "description": "Approximate bounding boxes of the contiguous US states and DC; each box is [lat_min, lat_max, lon_min, lon_max] in degrees.",
  "states": [
    {"code": "AL", "boxes": [[30.14, 35.01, -88.47, -84.89]]},
    {"code": "AZ", "boxes": [[31.33, 37.00, -114.82, -109.05]]},
    {"code": "AR", "boxes": [[33.00, 36.50, -94.62, -89.64]]},
    {"code": "CA", "boxes": [[32.53, 42.01, -124.41, -114.13]]},
    {"code": "CO", "boxes": [[36.99, 41.00, -109.06, -102.04]]},
    {"code": "CT", "boxes": [[40.95, 42.05, -73.73, -71.79]]},
    {"code": "DE", "boxes": [[38.45, 39.84, -75.79, -75.05]]},
    {"code": "DC", "boxes": [[38.79, 38.995, -77.12, -76.91]]},
    {"code": "FL", "boxes": [[24.40, 31.00, -87.63, -80.03]]},
    {"code": "GA", "boxes": [[30.36, 35.00, -85.61, -80.84]]},
    {"code": "ID", "boxes": [[41.99, 49.00, -117.24, -111.04]]},
    {"code": "IL", "boxes": [[36.97, 42.51, -91.51, -87.02]]},
    {"code": "IN", "boxes": [[37.77, 41.76, -88.10, -84.78]]},
    {"code": "IA", "boxes": [[40.38, 43.50, -96.64, -90.14]]},
    {"code": "KS", "boxes": [[36.99, 40.00, -102.05, -94.59]]},
    {"code": "KY", "boxes": [[36.50, 39.15, -89.57, -81.96]]},
    {"code": "LA", "boxes": [[28.93, 33.02, -94.04, -88.82]]},
    {"code": "ME", "boxes": [[43.06, 47.46, -71.08, -66.95]]},
    {"code": "MD", "boxes": [[37.89, 39.72, -79.49, -75.05]]},
    {"code": "MA", "boxes": [[41.24, 42.89, -73.51, -69.93]]},
    {"code": "MI", "boxes": [[41.70, 45.82, -87.12, -82.41], [45.09, 48.31, -90.42, -83.35]]},
    {"code": "MN", "boxes": [[43.50, 49.38, -97.24, -89.49]]},
    {"code": "MS", "boxes": [[30.17, 35.00, -91.65, -88.10]]},
    {"code": "MO", "boxes": [[35.99, 40.61, -95.77, -89.10]]},
    {"code": "MT", "boxes": [[44.36, 49.00, -116.05, -104.04]]},
    {"code": "NE", "boxes": [[40.00, 43.00, -104.05, -95.31]]},
    {"code": "NV", "boxes": [[35.00, 42.00, -120.01, -114.04]]},
    {"code": "NH", "boxes": [[42.70, 45.31, -72.56, -70.61]]},
    {"code": "NJ", "boxes": [[38.93, 41.36, -75.56, -73.89]]},
    {"code": "NM", "boxes": [[31.33, 37.00, -109.05, -103.00]]},
    {"code": "NY", "boxes": [[40.50, 45.02, -79.76, -71.86]]},
    {"code": "NC", "boxes": [[33.84, 36.59, -84.32, -75.46]]},
    {"code": "ND", "boxes": [[45.94, 49.00, -104.05, -96.55]]},
    {"code": "OH", "boxes": [[38.40, 41.98, -84.82, -80.52]]},
    {"code": "OK", "boxes": [[33.62, 37.00, -103.00, -94.43]]},
    {"code": "OR", "boxes": [[41.99, 46.29, -124.57, -116.46]]},
    {"code": "PA", "boxes": [[39.72, 42.27, -80.52, -74.69]]},
    {"code": "RI", "boxes": [[41.15, 42.02, -71.91, -71.12]]},
    {"code": "SC", "boxes": [[32.03, 35.22, -83.35, -78.54]]},
    {"code": "SD", "boxes": [[42.48, 45.95, -104.06, -96.44]]},
    {"code": "TN", "boxes": [[34.98, 36.68, -90.31, -81.65]]},
    {"code": "TX", "boxes": [[25.84, 36.50, -106.65, -93.51]]},
    {"code": "UT", "boxes": [[37.00, 42.00, -114.05, -109.04]]},
    {"code": "VT", "boxes": [[42.73, 45.02, -73.44, -71.46]]},
    {"code": "VA", "boxes": [[36.54, 39.47, -83.68, -75.24]]},
    {"code": "WA", "boxes": [[45.54, 49.00, -124.85, -116.92]]},
    {"code": "WV", "boxes": [[37.20, 40.64, -82.64, -77.72]]},
    {"code": "WI", "boxes": [[42.49, 47.31, -92.89, -86.25]]},
    {"code": "WY", "boxes": [[40.99, 45.01, -111.06, -104.05]]}
  ]
}
)json";

struct GeoBox {
  double lat_min = 0, lat_max = 0, lon_min = 0, lon_max = 0;

  bool contains(double lat, double lon) const {
    return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
  }
  double area() const { return (lat_max - lat_min) * (lon_max - lon_min); }
};

struct GeoRegion {
  std::string code;
  std::vector<GeoBox> boxes;
};

class GeoStateIndex {
 public:
  static GeoStateIndex from_json(const Json& j) {
    if (!j.is_object() || !j.contains("states") || !j["states"].is_array()) {
      throw ConfigError("state index must be an object with a 'states' array");
    }
    GeoStateIndex index;
    std::set<std::string> seen;
    for (const auto& s : j["states"]) {
      GeoRegion region;
      if (!s.contains("code") || !s["code"].is_string()) throw ConfigError("state without code");
      region.code = s["code"].get<std::string>();
      if (!seen.insert(region.code).second) throw ConfigError("duplicate state " + region.code);
      if (!s.contains("boxes") || !s["boxes"].is_array()) {
        throw ConfigError("state " + region.code + " has no boxes");
      }
      for (const auto& b : s["boxes"]) {
        if (!b.is_array() || b.size() != 4) throw ConfigError("malformed box for " + region.code);
        GeoBox box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
        if (box.lat_min > box.lat_max || box.lon_min > box.lon_max) {
          throw ConfigError("inverted box for " + region.code);
        }
        region.boxes.push_back(box);
      }
      index.regions_.push_back(std::move(region));
    }
    if (j.contains("version") && j["version"].is_number_integer()) {
      index.version_ = j["version"].get<int>();
    }
    return index;
  }

  static GeoStateIndex us_states() { return from_json(Json::parse(kUsStateBoxesJson)); }

  static GeoStateIndex load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open state index " + path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("state index " + path + " is not valid JSON");
    return from_json(j);
  }

  const std::vector<GeoRegion>& regions() const { return regions_; }
  int version() const { return version_; }

 private:
  std::vector<GeoRegion> regions_;
  int version_ = 0;
};

// State whose box contains the point; the smallest box wins where boxes
// overlap.
inline std::optional<std::string> locate_state(double lat, double lon, const GeoStateIndex& index) {
  if (!(lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0)) {
    throw RangeError("coordinates out of range: (" + std::to_string(lat) + ", " +
                     std::to_string(lon) + ")");
  }
  const GeoRegion* best = nullptr;
  double best_area = 0;
  for (const auto& region : index.regions()) {
    for (const auto& box : region.boxes) {
      if (!box.contains(lat, lon)) continue;
      const double a = box.area();
      if (best == nullptr || a < best_area || (a == best_area && region.code < best->code)) {
        best = &region;
        best_area = a;
      }
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->code;
}

}  // namespace yall
