// Copyright 2026 The SmartCrowd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Strict accessors over nlohmann::json used by the file readers.

#ifndef SMARTCROWD_SRC_JSON_UTIL_H_
#define SMARTCROWD_SRC_JSON_UTIL_H_

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"
#include "smartcrowd/io.h"

namespace smartcrowd::internal {

using Json = nlohmann::json;

inline void CheckKeys(const Json& obj, const std::string& where,
                      std::initializer_list<const char*> required,
                      std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const char* key : required) {
    if (!obj.contains(key)) {
      throw ParseError(where + ": missing field \"" + key + "\"");
    }
  }
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) throw ParseError(where + ": unknown field \"" + key + "\"");
  }
}

inline double GetNumber(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_number()) {
    throw ParseError(where + ": field \"" + key + "\" must be a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw ParseError(where + ": field \"" + key + "\" must be finite");
  }
  return x;
}

inline long long GetInt(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ParseError(where + ": field \"" + key + "\" must be an integer");
  }
  return v.get<long long>();
}

inline std::string GetString(const Json& obj, const char* key,
                             const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_string()) {
    throw ParseError(where + ": field \"" + key + "\" must be a string");
  }
  return v.get<std::string>();
}

inline const Json& GetArray(const Json& obj, const char* key,
                            const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_array()) {
    throw ParseError(where + ": field \"" + key + "\" must be an array");
  }
  return v;
}

inline std::vector<double> GetNumbers(const Json& obj, const char* key,
                                      const std::string& where) {
  std::vector<double> out;
  for (const Json& v : GetArray(obj, key, where)) {
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw ParseError(where + ": field \"" + key + "\" must hold numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

inline std::vector<int> GetInts(const Json& obj, const char* key,
                                const std::string& where) {
  std::vector<int> out;
  for (const Json& v : GetArray(obj, key, where)) {
    if (!v.is_number_integer()) {
      throw ParseError(where + ": field \"" + key + "\" must hold integers");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

inline Json ParseDocument(std::istream& in, const std::string& what) {
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

}  // namespace smartcrowd::internal

#endif  // SMARTCROWD_SRC_JSON_UTIL_H_
