#pragma once

// Raw effort data and the indicators computed from it.

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evb/decimal.hpp"
#include "evb/model.hpp"

namespace evb {

inline constexpr std::string_view kMeasurementCsvHeader = "date,phase,role,effort_hours";

struct MeasurementRow {
  Date date;
  std::string phase;
  std::string role;
  Decimal effort_hours;

  bool operator==(const MeasurementRow&) const = default;
};

struct MeasurementDataset {
  std::string id;
  std::vector<MeasurementRow> rows;

  bool operator==(const MeasurementDataset&) const = default;
};

struct RowError {
  int line = 0;  // 1-based line in the input
  std::string message;
};

struct IngestResult {
  MeasurementDataset dataset;
  std::vector<RowError> errors;
};

// Reads the collection sheet. A wrong header throws Error{header_mismatch};
// bad rows are reported and skipped.
IngestResult ingest_csv(std::istream& in, std::string dataset_id);

// Canonical CSV (LF, header first) that ingest_csv reads back unchanged.
std::string to_csv(const MeasurementDataset& ds);

struct IndicatorRow {
  std::string key;
  double value = 0;
  // Exact value for sum-like kinds; absent for mean.
  std::optional<Decimal> exact;
  double percent = 0;
  double cumulative_percent = 0;
};

struct IndicatorResult {
  std::string indicator;
  IndicatorKind kind = IndicatorKind::distribution;
  std::vector<IndicatorRow> rows;
  double total = 0;
  std::optional<Decimal> exact_total;
};

// Group keys come from the metric named by group_by (phase, role or date);
// values from the effort column. For distribution kinds groups follow
// `order` when given (remaining keys follow, sorted), otherwise first
// appearance. Throws Error{empty_dataset}, Error{unknown_order_key} or
// Error{unmapped_metric}.
IndicatorResult compute_indicator(const IndicatorDef& ind, const MeasurementDataset& ds);

struct QuestionAnswer {
  std::string question;
  IndicatorResult result;
};

// Throws Error{invalid_model} if the model does not validate.
QuestionAnswer evaluate_question(const QualityModel& qm, const MeasurementDataset& ds);

}  // namespace evb
