#pragma once

#include "fquant/error.hpp"
#include "fquant/format.hpp"
#include "fquant/rifs.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace fquant {

namespace detail {

/// Maps JSON pointers ("/components/0/probs") to the line where the value starts.
/// Assumes the text is syntactically valid JSON.
class JsonLineIndex {
 public:
  explicit JsonLineIndex(const std::string& text) : text_(text) {
    skip();
    if (pos_ < text_.size()) value("");
  }

  int line_of(std::string path) const {
    for (;;) {
      if (auto it = lines_.find(path); it != lines_.end()) return it->second;
      if (path.empty()) return 1;
      path.erase(path.rfind('/'));
    }
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      if (pos_ < text_.size()) out.push_back(text_[pos_++]);
    }
    ++pos_;
    return out;
  }

  void value(const std::string& path) {
    skip();
    lines_[path] = line_;
    if (pos_ >= text_.size()) return;
    const char ch = text_[pos_];
    if (ch == '{') {
      ++pos_;
      skip();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = string_token();
        skip();
        ++pos_;  // colon
        value(path + "/" + key);
        skip();
        if (text_[pos_] == ',') ++pos_;
        skip();
      }
      ++pos_;
    } else if (ch == '[') {
      ++pos_;
      skip();
      for (int k = 0; pos_ < text_.size() && text_[pos_] != ']'; ++k) {
        value(path + "/" + std::to_string(k));
        skip();
        if (text_[pos_] == ',') ++pos_;
        skip();
      }
      ++pos_;
    } else if (ch == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && !std::strchr(",]} \t\r\n", text_[pos_])) ++pos_;
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;
};

/// A real number given either as a JSON number or as a string "a/b".
inline double real_value(const nlohmann::json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
      } else {
        const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        std::size_t ua = 0, ub = 0;
        const double num = std::stod(a, &ua), den = std::stod(b, &ub);
        if (ua == a.size() && ub == b.size() && den != 0) return num / den;
      }
    } catch (const std::exception&) {
    }
    throw SpecError("\"" + s + "\" is not a number or fraction", 0, path);
  }
  throw SpecError("expected a number", 0, path);
}

inline const nlohmann::json& field(const nlohmann::json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SpecError("expected an object", 0, path);
  auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(std::string("missing field \"") + key + "\"", 0, path);
  return *it;
}

inline std::vector<double> real_list(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw SpecError("expected an array of numbers", 0, path);
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(real_value(j[k], path + "/" + std::to_string(k)));
  return out;
}

inline Vector vector_of(const nlohmann::json& j, const std::string& path) {
  const auto v = real_list(j, path);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline RifsSpec spec_from_json(const nlohmann::json& doc) {
  RifsSpec spec;
  const auto& dim = field(doc, "dimension", "");
  if (!dim.is_number_integer()) throw SpecError("dimension must be an integer", 0, "/dimension");
  spec.dimension = dim.get<int>();
  if (spec.dimension < 1) throw SpecError("dimension must be a positive integer", 0, "/dimension");
  const int d = spec.dimension;
  const auto& amb = field(doc, "ambient", "");
  spec.ambient.lo = vector_of(field(amb, "lo", "/ambient"), "/ambient/lo");
  spec.ambient.hi = vector_of(field(amb, "hi", "/ambient"), "/ambient/hi");
  const auto& comps = field(doc, "components", "");
  if (!comps.is_array()) throw SpecError("components must be an array", 0, "/components");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string cp = "/components/" + std::to_string(i);
    Ifs ifs;
    const auto& maps = field(comps[i], "maps", cp);
    if (!maps.is_array()) throw SpecError("maps must be an array", 0, cp + "/maps");
    for (std::size_t j = 0; j < maps.size(); ++j) {
      const std::string mp = cp + "/maps/" + std::to_string(j);
      Similarity s;
      s.ratio = real_value(field(maps[j], "ratio", mp), mp + "/ratio");
      s.translation = vector_of(field(maps[j], "translation", mp), mp + "/translation");
      if (auto it = maps[j].find("orthogonal"); it != maps[j].end()) {
        const std::string op = mp + "/orthogonal";
        if (!it->is_array() || it->size() != static_cast<std::size_t>(d))
          throw SpecError("orthogonal must be a " + std::to_string(d) + "x" + std::to_string(d) + " matrix", 0, op);
        s.orthogonal.resize(d, d);
        for (int a = 0; a < d; ++a) {
          const auto row = real_list((*it)[static_cast<std::size_t>(a)], op + "/" + std::to_string(a));
          if (row.size() != static_cast<std::size_t>(d))
            throw SpecError("orthogonal row has wrong length", 0, op + "/" + std::to_string(a));
          for (int b = 0; b < d; ++b) s.orthogonal(a, b) = row[static_cast<std::size_t>(b)];
        }
      } else {
        s.orthogonal = Matrix::Identity(d, d);
      }
      ifs.maps.push_back(std::move(s));
    }
    ifs.probs = real_list(field(comps[i], "probs", cp), cp + "/probs");
    spec.components.push_back(std::move(ifs));
  }
  spec.zeta = real_list(field(doc, "zeta", ""), "/zeta");
  spec.r_default = real_value(field(doc, "r", ""), "/r");
  spec.origin = Vector::Zero(d);
  return spec;
}

}  // namespace detail

/// Parses, validates and normalizes a spec document. Errors carry the line number.
inline RifsSpec parse_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
    std::string what = e.what();
    if (auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw SpecError(what, line);
  }
  try {
    RifsSpec spec = detail::spec_from_json(doc);
    validate(spec);
    return normalized(std::move(spec));
  } catch (const SpecError& e) {
    if (e.line() > 0) throw;
    throw SpecError(e.message(), detail::JsonLineIndex(text).line_of(e.path()), e.path());
  }
}

inline RifsSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

/// Spec as JSON, in the internal (unit-diameter) coordinates.
inline nlohmann::ordered_json spec_to_json(const RifsSpec& spec) {
  auto vec = [](const Vector& v) {
    std::vector<double> out(v.data(), v.data() + v.size());
    return out;
  };
  nlohmann::ordered_json doc;
  doc["dimension"] = spec.dimension;
  doc["ambient"] = {{"lo", vec(spec.ambient.lo)}, {"hi", vec(spec.ambient.hi)}};
  doc["components"] = nlohmann::ordered_json::array();
  for (const auto& ifs : spec.components) {
    nlohmann::ordered_json c;
    c["maps"] = nlohmann::ordered_json::array();
    for (const auto& s : ifs.maps) {
      nlohmann::ordered_json m;
      m["ratio"] = s.ratio;
      m["translation"] = vec(s.translation);
      if (!s.orthogonal.isIdentity(0.0)) {
        m["orthogonal"] = nlohmann::ordered_json::array();
        for (Eigen::Index a = 0; a < s.orthogonal.rows(); ++a) m["orthogonal"].push_back(vec(s.orthogonal.row(a).transpose()));
      }
      c["maps"].push_back(m);
    }
    c["probs"] = ifs.probs;
    doc["components"].push_back(c);
  }
  doc["zeta"] = spec.zeta;
  doc["r"] = spec.r_default;
  return doc;
}

}  // namespace fquant
