#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "beltrami/errors.hpp"

namespace beltrami::cli {
namespace {

bool compatible(const Json& fallback, const Json& value) {
  if (fallback.is_null()) return value.is_string() || value.is_null();
  if (fallback.is_number_float()) return value.is_number();
  if (fallback.is_number_integer()) return value.is_number_integer();
  if (fallback.is_boolean()) return value.is_boolean();
  if (fallback.is_string()) return value.is_string();
  if (fallback.is_array()) return value.is_array();
  if (fallback.is_object()) return value.is_object();
  return false;
}

const char* type_name(const Json& fallback) {
  if (fallback.is_null() || fallback.is_string()) return "a string";
  if (fallback.is_number_float()) return "a number";
  if (fallback.is_number_integer()) return "an integer";
  if (fallback.is_boolean()) return "a boolean";
  if (fallback.is_array()) return "an array";
  return "an object";
}

void merge(Json& cfg, const Json& src, const char* origin) {
  if (!src.is_object()) throw InvalidInput(std::string(origin) + " must be a JSON object");
  for (const auto& [key, value] : src.items()) {
    auto it = cfg.find(key);
    if (it == cfg.end()) throw InvalidInput("unknown config key '" + key + "'");
    if (!compatible(*it, value)) {
      throw InvalidInput("config key '" + key + "' must be " + type_name(*it));
    }
    // Keep floats as floats so reports do not depend on how a number was typed.
    if (it->is_number_float()) {
      *it = value.get<double>();
    } else {
      *it = value;
    }
  }
}

Point to_point(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw InvalidInput(where + ": expected [r, z]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Polyline to_polyline(const Json& v, const std::string& where) {
  if (!v.is_array()) throw InvalidInput(where + ": expected a list of [r, z] points");
  Polyline out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(to_point(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Json polyline_json(const Polyline& p) {
  Json a = Json::array();
  for (const Point& q : p) a.push_back({q.r, q.z});
  return a;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // nlohmann counts bytes from 1; report the 0-based offset of the bad byte.
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(what + ": malformed JSON at byte offset " + std::to_string(offset), offset);
  }
}

Json resolve_config(const Json& defaults, const Json& file_config, const Json& overrides) {
  Json cfg = defaults;
  if (!file_config.is_null()) merge(cfg, file_config, "config file");
  if (!overrides.is_null()) merge(cfg, overrides, "overrides");
  return cfg;
}

CrossSection cross_section_from_json(const Json& doc) {
  if (!doc.is_object()) throw InvalidInput("cross-section must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "metric" && key != "outer" && key != "holes") {
      throw InvalidInput("unknown cross-section key '" + key + "'");
    }
  }
  MetricKind metric = MetricKind::euclidean;
  if (doc.contains("metric")) {
    const Json& m = doc["metric"];
    const auto kind = m.is_string() ? metric_kind_from_string(m.get<std::string>()) : std::nullopt;
    if (!kind) throw InvalidInput("metric must be one of euclidean, hyperbolic, spherical");
    metric = *kind;
  }
  if (!doc.contains("outer")) throw InvalidInput("cross-section needs an 'outer' curve");
  Polyline outer = to_polyline(doc["outer"], "outer");
  std::vector<Polyline> holes;
  if (doc.contains("holes")) {
    const Json& h = doc["holes"];
    if (!h.is_array()) throw InvalidInput("holes: expected a list of curves");
    for (std::size_t i = 0; i < h.size(); ++i) {
      holes.push_back(to_polyline(h[i], "holes[" + std::to_string(i) + "]"));
    }
  }
  return CrossSection::make(std::move(outer), std::move(holes), metric);
}

Json cross_section_to_json(const CrossSection& cs) {
  Json holes = Json::array();
  for (const Polyline& h : cs.holes()) holes.push_back(polyline_json(h));
  return {{"metric", to_string(cs.metric())}, {"outer", polyline_json(cs.outer())},
          {"holes", holes}};
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

unsigned threads_from_env() {
  const char* v = std::getenv("BELTRAMI_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) throw InvalidInput("BELTRAMI_THREADS must be a non-negative integer");
  return static_cast<unsigned>(n);
}

}  // namespace beltrami::cli
