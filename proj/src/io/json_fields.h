// Copyright 2026 The PaRCE Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Typed field access on parsed JSON with schema errors that name the field.

#ifndef PARCE_SRC_IO_JSON_FIELDS_H_
#define PARCE_SRC_IO_JSON_FIELDS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "parce/error.h"

namespace parce::io::internal {

using nlohmann::json;

inline const json& Field(const json& obj, const std::string& key,
                         const std::string& where) {
  Require(obj.is_object(), ErrorKind::kSchema, where + ": expected an object");
  auto it = obj.find(key);
  Require(it != obj.end(), ErrorKind::kSchema,
          where + ": missing field '" + key + "'");
  return *it;
}

inline const json* OptionalField(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

inline double AsNumber(const json& v, const std::string& name,
                       const std::string& where) {
  Require(v.is_number(), ErrorKind::kSchema,
          where + ": field '" + name + "' must be a number");
  return v.get<double>();
}

inline int64_t AsInteger(const json& v, const std::string& name,
                         const std::string& where) {
  Require(v.is_number_integer(), ErrorKind::kSchema,
          where + ": field '" + name + "' must be an integer");
  return v.get<int64_t>();
}

inline bool AsBool(const json& v, const std::string& name,
                   const std::string& where) {
  Require(v.is_boolean(), ErrorKind::kSchema,
          where + ": field '" + name + "' must be a boolean");
  return v.get<bool>();
}

inline std::string AsString(const json& v, const std::string& name,
                            const std::string& where) {
  Require(v.is_string(), ErrorKind::kSchema,
          where + ": field '" + name + "' must be a string");
  return v.get<std::string>();
}

inline std::vector<double> AsNumbers(const json& v, const std::string& name,
                                     const std::string& where) {
  Require(v.is_array(), ErrorKind::kSchema,
          where + ": field '" + name + "' must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    Require(e.is_number(), ErrorKind::kSchema,
            where + ": field '" + name + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline double NumberField(const json& obj, const std::string& key,
                          const std::string& where) {
  return AsNumber(Field(obj, key, where), key, where);
}

inline int64_t IntegerField(const json& obj, const std::string& key,
                            const std::string& where) {
  return AsInteger(Field(obj, key, where), key, where);
}

inline std::string StringField(const json& obj, const std::string& key,
                               const std::string& where) {
  return AsString(Field(obj, key, where), key, where);
}

}  // namespace parce::io::internal

#endif  // PARCE_SRC_IO_JSON_FIELDS_H_
