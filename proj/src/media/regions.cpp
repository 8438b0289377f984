#include "media/regions.hpp"

#include <json.hpp>

#include "common/errors.hpp"
#include "common/text.hpp"
#include "ingest/package.hpp"

namespace ddpdeid {
namespace {

using Json = nlohmann::ordered_json;

int int_field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    throw InputError("detections: " + where + ": field '" + key + "' must be an integer");
  }
  const auto v = obj[key].get<long long>();
  if (v < INT32_MIN || v > INT32_MAX) throw InputError("detections: " + where + ": '" + key + "' out of range");
  return static_cast<int>(v);
}

Region parse_region(const Json& r, const std::string& where) {
  if (!r.is_object()) throw InputError("detections: " + where + ": region is not an object");
  Region out;
  if (!r.contains("kind") || !r["kind"].is_string()) {
    throw InputError("detections: " + where + ": region needs a kind");
  }
  const std::string kind = r["kind"].get<std::string>();
  if (kind == "face") {
    out.kind = RegionKind::Face;
  } else if (kind == "text") {
    out.kind = RegionKind::Text;
  } else {
    throw InputError("detections: " + where + ": unknown region kind '" + kind + "'");
  }
  if (r.contains("frame") && !r["frame"].is_null()) {
    out.frame = int_field(r, "frame", where);
    if (*out.frame < 0) throw InputError("detections: " + where + ": negative frame");
  }
  out.x = int_field(r, "x", where);
  out.y = int_field(r, "y", where);
  out.w = int_field(r, "w", where);
  out.h = int_field(r, "h", where);
  if (out.w <= 0 || out.h <= 0) throw InputError("detections: " + where + ": w and h must be positive");
  if (r.contains("landmarks_visible") && !r["landmarks_visible"].is_null()) {
    const int lv = int_field(r, "landmarks_visible", where);
    if (lv < 0 || lv > 5) throw InputError("detections: " + where + ": landmarks_visible must be 0..5");
    out.landmarks_visible = lv;
  }
  return out;
}

}  // namespace

RegionSet parse_detections(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("detections: not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw InputError("detections: top level must be a list");
  RegionSet out;
  for (const Json& item : doc) {
    if (!item.is_object() || !item.contains("file") || !item["file"].is_string()) {
      throw InputError("detections: every item needs a string 'file'");
    }
    const std::string raw = item["file"].get<std::string>();
    const auto rel = sanitize_entry_path(raw);
    if (!rel) throw InputError("detections: path escapes the package: " + raw);
    if (!item.contains("regions") || !item["regions"].is_array()) {
      throw InputError("detections: " + raw + ": 'regions' must be a list");
    }
    auto [it, fresh] = out.try_emplace(*rel);
    if (!fresh) throw InputError("detections: file listed twice: " + raw);
    for (const Json& r : item["regions"]) it->second.push_back(parse_region(r, raw));
  }
  return out;
}

RegionSet load_detections(const std::filesystem::path& path) {
  return parse_detections(read_file(path));
}

std::string format_detections(const RegionSet& set) {
  Json doc = Json::array();
  for (const auto& [file, regions] : set) {
    Json item = Json::object();
    item["file"] = file;
    item["regions"] = Json::array();
    for (const Region& r : regions) {
      Json jr = Json::object();
      jr["kind"] = r.kind == RegionKind::Face ? "face" : "text";
      jr["frame"] = r.frame ? Json(*r.frame) : Json(nullptr);
      jr["x"] = r.x;
      jr["y"] = r.y;
      jr["w"] = r.w;
      jr["h"] = r.h;
      if (r.landmarks_visible) jr["landmarks_visible"] = *r.landmarks_visible;
      item["regions"].push_back(std::move(jr));
    }
    doc.push_back(std::move(item));
  }
  return doc.dump(1) + "\n";
}

void save_detections(const RegionSet& set, const std::filesystem::path& path) {
  write_file(path, format_detections(set));
}

}  // namespace ddpdeid
