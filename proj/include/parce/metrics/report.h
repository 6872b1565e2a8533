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

#ifndef PARCE_METRICS_REPORT_H_
#define PARCE_METRICS_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "parce/metrics/metrics.h"

namespace parce::metrics {

struct ReportRow {
  std::string method;
  GroupPair pair;
  MetricRow metrics;
};

struct MethodTiming {
  std::string method;
  double sec_per_sample = 0.0;
};

struct EvalReport {
  std::vector<std::string> methods;
  std::vector<GroupPair> pairs;
  std::vector<ReportRow> rows;
  // Wall-clock measurements; kept out of the deterministic report file.
  std::vector<MethodTiming> timing;

  // Adds the rows of one method, registering method and pairs on first use.
  void AddRows(const std::string& method, const std::vector<GroupPair>& pairs,
               const std::vector<MetricRow>& rows);

  const ReportRow* Find(const std::string& method, const GroupPair& pair) const;
};

// {methods, pairs, rows}. Pairs are two-element arrays [negative, positive].
nlohmann::ordered_json ReportToJson(const EvalReport& report);
// {timing: [{method, sec_per_sample}]}.
nlohmann::ordered_json TimingToJson(const EvalReport& report);

// Inverse of ReportToJson, optionally merging a timing document. Throws
// kSchema naming the offending field.
EvalReport ReportFromJson(const nlohmann::json& report,
                          const nlohmann::json* timing = nullptr);

// Aligned text table: one line per method, three columns (dist, auroc,
// fpr95) per comparison pair, plus sec/sample when timing is known.
std::string FormatTable(const EvalReport& report);

}  // namespace parce::metrics

#endif  // PARCE_METRICS_REPORT_H_
