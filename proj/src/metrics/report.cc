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

#include "parce/metrics/report.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "parce/error.h"

namespace parce::metrics {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& Field(const json& obj, const char* key, const std::string& where) {
  Require(obj.is_object(), ErrorKind::kSchema, where + ": expected an object");
  auto it = obj.find(key);
  Require(it != obj.end(), ErrorKind::kSchema,
          where + ": missing field '" + key + "'");
  return *it;
}

double Number(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  Require(v.is_number(), ErrorKind::kSchema,
          where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

std::string String(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  Require(v.is_string(), ErrorKind::kSchema,
          where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

GroupPair PairFromJson(const json& v, const std::string& where) {
  Require(v.is_array() && v.size() == 2 && v[0].is_string() && v[1].is_string(),
          ErrorKind::kSchema, where + ": a pair must be [negative, positive]");
  return {v[0].get<std::string>(), v[1].get<std::string>()};
}

std::string Cell(const char* fmt, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

// Pairs that belong together in one printed table.
std::vector<std::vector<GroupPair>> PairFamilies(const EvalReport& report) {
  std::vector<std::vector<GroupPair>> known = {OverallPairs(),
                                               PerturbationPairs(),
                                               RegionalPairs()};
  std::vector<std::vector<GroupPair>> out(known.size() + 1);
  for (const auto& p : report.pairs) {
    size_t f = known.size();
    for (size_t i = 0; i < known.size(); ++i) {
      if (std::find(known[i].begin(), known[i].end(), p) != known[i].end()) {
        f = i;
      }
    }
    out[f].push_back(p);
  }
  std::erase_if(out, [](const auto& v) { return v.empty(); });
  return out;
}

}  // namespace

void EvalReport::AddRows(const std::string& method,
                         const std::vector<GroupPair>& new_pairs,
                         const std::vector<MetricRow>& new_rows) {
  Require(new_pairs.size() == new_rows.size(), ErrorKind::kInvalidArgument,
          "pairs and rows differ in length");
  if (std::find(methods.begin(), methods.end(), method) == methods.end()) {
    methods.push_back(method);
  }
  for (size_t i = 0; i < new_pairs.size(); ++i) {
    if (std::find(pairs.begin(), pairs.end(), new_pairs[i]) == pairs.end()) {
      pairs.push_back(new_pairs[i]);
    }
    rows.push_back({method, new_pairs[i], new_rows[i]});
  }
}

const ReportRow* EvalReport::Find(const std::string& method,
                                  const GroupPair& pair) const {
  for (const auto& r : rows) {
    if (r.method == method && r.pair == pair) return &r;
  }
  return nullptr;
}

ordered_json ReportToJson(const EvalReport& report) {
  ordered_json out;
  out["methods"] = report.methods;
  ordered_json pairs = ordered_json::array();
  for (const auto& p : report.pairs) pairs.push_back({p.first, p.second});
  out["pairs"] = std::move(pairs);
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json row;
    row["method"] = r.method;
    row["pair"] = {r.pair.first, r.pair.second};
    row["dist"] = r.metrics.dist;
    row["auroc"] = r.metrics.auroc;
    row["fpr95"] = r.metrics.fpr95;
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  return out;
}

ordered_json TimingToJson(const EvalReport& report) {
  ordered_json timing = ordered_json::array();
  for (const auto& t : report.timing) {
    ordered_json entry;
    entry["method"] = t.method;
    entry["sec_per_sample"] = t.sec_per_sample;
    timing.push_back(std::move(entry));
  }
  ordered_json out;
  out["timing"] = std::move(timing);
  return out;
}

EvalReport ReportFromJson(const json& doc, const json* timing) {
  EvalReport report;
  const json& methods = Field(doc, "methods", "report");
  Require(methods.is_array(), ErrorKind::kSchema,
          "report: field 'methods' must be an array");
  for (const auto& m : methods) {
    Require(m.is_string(), ErrorKind::kSchema,
            "report: method names must be strings");
    report.methods.push_back(m.get<std::string>());
  }
  const json& pairs = Field(doc, "pairs", "report");
  Require(pairs.is_array(), ErrorKind::kSchema,
          "report: field 'pairs' must be an array");
  for (const auto& p : pairs) report.pairs.push_back(PairFromJson(p, "report.pairs"));
  const json& rows = Field(doc, "rows", "report");
  Require(rows.is_array(), ErrorKind::kSchema,
          "report: field 'rows' must be an array");
  for (size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "report.rows[" + std::to_string(i) + "]";
    ReportRow row;
    row.method = String(rows[i], "method", where);
    row.pair = PairFromJson(Field(rows[i], "pair", where), where);
    row.metrics.dist = Number(rows[i], "dist", where);
    row.metrics.auroc = Number(rows[i], "auroc", where);
    row.metrics.fpr95 = Number(rows[i], "fpr95", where);
    report.rows.push_back(std::move(row));
  }
  if (timing != nullptr) {
    const json& entries = Field(*timing, "timing", "timing");
    Require(entries.is_array(), ErrorKind::kSchema,
            "timing: field 'timing' must be an array");
    for (size_t i = 0; i < entries.size(); ++i) {
      const std::string where = "timing[" + std::to_string(i) + "]";
      report.timing.push_back({String(entries[i], "method", where),
                               Number(entries[i], "sec_per_sample", where)});
    }
  }
  return report;
}

std::string FormatTable(const EvalReport& report) {
  std::ostringstream out;
  bool first_table = true;
  for (const auto& family : PairFamilies(report)) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> head = {"method"};
    for (const auto& p : family) {
      const std::string tag = p.first + "/" + p.second;
      head.push_back(tag + " dist");
      head.push_back("auroc");
      head.push_back("fpr95");
    }
    const bool with_time = first_table && !report.timing.empty();
    if (with_time) head.push_back("sec/sample");
    cells.push_back(head);

    for (const auto& m : report.methods) {
      std::vector<std::string> line = {m};
      bool any = false;
      for (const auto& p : family) {
        const ReportRow* r = report.Find(m, p);
        if (r == nullptr) {
          line.insert(line.end(), {"-", "-", "-"});
          continue;
        }
        any = true;
        line.push_back(Cell("%.3f", r->metrics.dist));
        line.push_back(Cell("%.3f", r->metrics.auroc));
        line.push_back(Cell("%.3f", r->metrics.fpr95));
      }
      if (!any) continue;
      if (with_time) {
        std::string t = "-";
        for (const auto& mt : report.timing) {
          if (mt.method == m) t = Cell("%.3e", mt.sec_per_sample);
        }
        line.push_back(t);
      }
      cells.push_back(std::move(line));
    }

    std::vector<size_t> width(head.size(), 0);
    for (const auto& line : cells) {
      for (size_t c = 0; c < line.size(); ++c) {
        width[c] = std::max(width[c], line[c].size());
      }
    }
    if (!first_table) out << "\n";
    for (const auto& line : cells) {
      for (size_t c = 0; c < line.size(); ++c) {
        if (c == 0) {
          out << line[c] << std::string(width[c] - line[c].size(), ' ');
        } else {
          out << "  " << std::string(width[c] - line[c].size(), ' ') << line[c];
        }
      }
      out << "\n";
    }
    first_table = false;
  }
  return out.str();
}

}  // namespace parce::metrics
