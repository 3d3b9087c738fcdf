#include "evb/measurement.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "evb/errors.hpp"
#include "evb/strings.hpp"

namespace evb {

IngestResult ingest_csv(std::istream& in, std::string dataset_id) {
  IngestResult result;
  result.dataset.id = std::move(dataset_id);

  std::string line;
  const auto read_line = [&] {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!read_line() || line != kMeasurementCsvHeader) {
    throw Error(ErrorCode::header_mismatch,
                "first line must be exactly '" + std::string(kMeasurementCsvHeader) + "'");
  }

  int line_no = 1;
  while (read_line()) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto report = [&](std::string message) {
      result.errors.push_back(RowError{line_no, std::move(message)});
    };

    const auto fields = split(line, ',');
    if (fields.size() != 4) {
      report("expected 4 fields, found " + std::to_string(fields.size()));
      continue;
    }
    const auto date = parse_iso_date(trim(fields[0]));
    if (!date) {
      report("malformed date '" + fields[0] + "' (expected YYYY-MM-DD)");
      continue;
    }
    const auto phase = trim(fields[1]);
    if (phase.empty()) {
      report("phase must not be empty");
      continue;
    }
    const auto hours = Decimal::parse(trim(fields[3]));
    if (!hours) {
      report("malformed effort_hours '" + fields[3] + "' (at most two decimal places)");
      continue;
    }
    if (*hours < Decimal{}) {
      report("negative effort_hours " + hours->to_string());
      continue;
    }
    result.dataset.rows.push_back(
        MeasurementRow{*date, std::string(phase), std::string(trim(fields[2])), *hours});
  }
  return result;
}

std::string to_csv(const MeasurementDataset& ds) {
  std::string out(kMeasurementCsvHeader);
  out += '\n';
  for (const auto& row : ds.rows) {
    out += format_iso_date(row.date) + "," + row.phase + "," + row.role + "," +
           row.effort_hours.to_string() + "\n";
  }
  return out;
}

namespace {

enum class Column { phase, role, date, effort };

Column resolve(std::string_view metric) {
  if (metric == "phase") return Column::phase;
  if (metric == "role") return Column::role;
  if (metric == "date") return Column::date;
  if (metric == "effort" || metric == "effort_hours") return Column::effort;
  throw Error(ErrorCode::unmapped_metric,
              "metric '" + std::string(metric) +
                  "' does not map to a collection column (phase, role, date, effort)");
}

std::string key_of(const MeasurementRow& row, Column column) {
  switch (column) {
    case Column::phase: return row.phase;
    case Column::role: return row.role;
    case Column::date: return format_iso_date(row.date);
    case Column::effort: return row.effort_hours.to_string();
  }
  return {};
}

double percent_of(Decimal part, Decimal whole) {
  return static_cast<double>(part.hundredths()) / static_cast<double>(whole.hundredths()) * 100.0;
}

IndicatorResult distribution(const IndicatorDef& ind, const MeasurementDataset& ds,
                             Column group) {
  std::vector<std::string> first_seen;
  std::map<std::string, Decimal> sums;
  Decimal total;
  for (const auto& row : ds.rows) {
    auto key = key_of(row, group);
    auto [it, inserted] = sums.try_emplace(key);
    if (inserted) first_seen.push_back(key);
    it->second += row.effort_hours;
    total += row.effort_hours;
  }
  if (total.hundredths() == 0) {
    throw Error(ErrorCode::empty_dataset,
                "indicator " + ind.name + ": dataset " + ds.id + " has no effort to distribute");
  }

  std::vector<std::string> keys;
  if (ind.order) {
    std::vector<std::string> absent;
    for (const auto& key : *ind.order) {
      if (sums.count(key)) {
        keys.push_back(key);
      } else {
        absent.push_back(key);
      }
    }
    if (!absent.empty()) {
      throw Error(ErrorCode::unknown_order_key,
                  "indicator " + ind.name + ": order names keys absent from dataset " + ds.id +
                      ": " + join(absent, ", "));
    }
    const std::set<std::string> listed(ind.order->begin(), ind.order->end());
    for (const auto& [key, sum] : sums) {
      if (!listed.count(key)) keys.push_back(key);
    }
  } else {
    keys = std::move(first_seen);
  }

  IndicatorResult result;
  result.indicator = ind.name;
  result.kind = ind.kind;
  result.total = total.to_double();
  result.exact_total = total;
  Decimal running;
  for (const auto& key : keys) {
    const Decimal sum = sums.at(key);
    running += sum;
    result.rows.push_back(IndicatorRow{key, sum.to_double(), sum, percent_of(sum, total),
                                       percent_of(running, total)});
  }
  return result;
}

IndicatorResult single_row(const IndicatorDef& ind, const MeasurementDataset& ds) {
  Decimal total;
  for (const auto& row : ds.rows) total += row.effort_hours;

  IndicatorRow row;
  row.key = ind.name;
  switch (ind.kind) {
    case IndicatorKind::sum:
      row.value = total.to_double();
      row.exact = total;
      break;
    case IndicatorKind::count:
      row.value = static_cast<double>(ds.rows.size());
      row.exact = Decimal::from_integer(static_cast<std::int64_t>(ds.rows.size()));
      break;
    case IndicatorKind::mean:
      if (ds.rows.empty()) {
        throw Error(ErrorCode::empty_dataset,
                    "indicator " + ind.name + ": mean of empty dataset " + ds.id);
      }
      row.value = static_cast<double>(total.hundredths()) / 100.0 /
                  static_cast<double>(ds.rows.size());
      break;
    default:
      break;
  }
  row.percent = row.value > 0 ? 100.0 : 0.0;
  row.cumulative_percent = row.percent;

  IndicatorResult result;
  result.indicator = ind.name;
  result.kind = ind.kind;
  result.total = row.value;
  result.exact_total = row.exact;
  result.rows.push_back(std::move(row));
  return result;
}

}  // namespace

IndicatorResult compute_indicator(const IndicatorDef& ind, const MeasurementDataset& ds) {
  if (resolve(ind.value_metric) != Column::effort && ind.kind != IndicatorKind::count) {
    throw Error(ErrorCode::unmapped_metric, "indicator " + ind.name + ": value metric '" +
                                                ind.value_metric + "' is not numeric");
  }
  if (!is_distribution(ind.kind)) return single_row(ind, ds);
  if (!ind.group_by) {
    throw Error(ErrorCode::invalid_model,
                "indicator " + ind.name + ": " + std::string(to_string(ind.kind)) +
                    " requires group_by");
  }
  return distribution(ind, ds, resolve(*ind.group_by));
}

QuestionAnswer evaluate_question(const QualityModel& qm, const MeasurementDataset& ds) {
  if (const auto violations = validate_quality_model(qm); !violations.empty()) {
    throw Error(ErrorCode::invalid_model,
                "quality model " + qm.id + " is invalid: " + violations.front().message);
  }
  return QuestionAnswer{qm.question, compute_indicator(qm.indicator(), ds)};
}

}  // namespace evb
