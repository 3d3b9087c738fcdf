#pragma once

// Experience elements and the rules that make them valid.
//
// Every element carries a scope: the characterization vector (the context it
// is valid in) and a significance (how, and how often, it was validated).
// All types are plain values; every function here is pure.

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace evb {

using Date = std::chrono::year_month_day;

// Strict YYYY-MM-DD. Returns nullopt for anything else, including dates that
// do not exist on the calendar.
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_iso_date(const Date& date);

// Ids double as file names in the store and as `@id` references in documents,
// so they may not contain "..".
bool is_valid_id(std::string_view id);

struct Factor {
  std::string category;  // e.g. "Domain characteristics"
  std::string name;      // e.g. "Application type"
  std::string value;     // e.g. "Computation-intensive system"

  bool operator==(const Factor&) const = default;
};

struct CharacterizationVector {
  std::string id;
  std::vector<Factor> factors;

  bool operator==(const CharacterizationVector&) const = default;
};

// Declared weakest first so the enumerator value is the kind's rank.
enum class SignificanceKind { survey, case_study, formal_experiment };

std::string_view to_string(SignificanceKind kind);
std::optional<SignificanceKind> parse_significance_kind(std::string_view text);

struct Significance {
  SignificanceKind kind = SignificanceKind::case_study;
  int count = 1;

  bool operator==(const Significance&) const = default;
};

// Kind dominates, then count. Compare ranks with <=>.
struct SignificanceRank {
  int kind = 0;
  int count = 0;

  auto operator<=>(const SignificanceRank&) const = default;
};

SignificanceRank significance_rank(const Significance& s);

// Accumulates independent validations of the same kind.
// Throws Error{kind_mismatch} when the kinds differ.
Significance merge_significance(const Significance& a, const Significance& b);

// "1 case study", "3 formal experiments", "2 surveys".
std::string describe(const Significance& s);

struct TechnologyRef {
  std::string name;
  std::optional<std::string> version;

  bool operator==(const TechnologyRef&) const = default;
};

struct GqmGoal {
  std::string object;
  std::string purpose;
  std::string quality_focus;
  std::string viewpoint;
  std::string context;  // CharacterizationVector id
  // Set when quality_focus was filled in from the model sub-kind rather than
  // given explicitly.
  bool quality_focus_derived = false;

  bool operator==(const GqmGoal&) const = default;
};

enum class Scale { category, hours, count, ratio, text };

std::string_view to_string(Scale scale);
std::optional<Scale> parse_scale(std::string_view text);

struct MetricDef {
  std::string name;
  Scale scale = Scale::category;

  bool operator==(const MetricDef&) const = default;
};

enum class IndicatorKind { distribution, cumulative_distribution, sum, mean, count };

std::string_view to_string(IndicatorKind kind);
std::optional<IndicatorKind> parse_indicator_kind(std::string_view text);
bool is_distribution(IndicatorKind kind);

struct IndicatorDef {
  std::string name;
  IndicatorKind kind = IndicatorKind::distribution;
  std::string value_metric;
  std::optional<std::string> group_by;
  std::optional<std::vector<std::string>> order;

  bool operator==(const IndicatorDef&) const = default;
};

enum class ModelType { project_oriented, process_oriented, product_oriented };

std::string_view to_string(ModelType type);
std::optional<ModelType> parse_model_type(std::string_view text);

struct Period {
  Date start;
  Date end;

  bool operator==(const Period&) const = default;
};

// An observation ("O1"), interpretation ("I3 (O2)") or consequence
// ("C1 (I3)"). Observations cite nothing.
struct LabeledText {
  std::string label;
  std::vector<std::string> cites;
  std::string text;

  bool operator==(const LabeledText&) const = default;
};

struct QualityModel {
  std::string id;
  std::string name;
  ModelType type = ModelType::process_oriented;
  std::string sub_kind;  // free text, e.g. "effort model"
  Significance significance;
  Period period;
  GqmGoal goal;
  std::string question;
  std::vector<MetricDef> metrics;
  // Must hold exactly one entry; kept as a list so that documents declaring
  // more can be represented and rejected by validation.
  std::vector<IndicatorDef> indicators;
  std::vector<LabeledText> observations;
  std::vector<LabeledText> interpretations;
  std::vector<LabeledText> consequences;
  std::vector<std::string> references;  // element ids
  std::vector<std::string> additional_docs;

  bool operator==(const QualityModel&) const = default;

  // The single indicator. Throws Error{invalid_model} unless exactly one.
  const IndicatorDef& indicator() const;
  const MetricDef* find_metric(std::string_view metric_name) const;
};

// "effort model" -> "effort". Empty when nothing usable remains.
std::string derive_quality_focus(std::string_view sub_kind);

struct Observation {
  std::string text;

  bool operator==(const Observation&) const = default;
};

struct ProblemSolution {
  std::string problem;
  std::string cause;
  std::optional<std::string> solution_reactive;
  std::optional<std::string> solution_preventive;
  std::optional<std::string> log;

  bool operator==(const ProblemSolution&) const = default;
};

struct LessonLearned {
  std::string id;
  std::vector<std::string> topic;
  std::string situation;
  Significance significance;
  std::string context;  // CharacterizationVector id
  std::vector<std::string> references;
  std::vector<std::string> additional_docs;
  std::variant<Observation, ProblemSolution> body;

  bool operator==(const LessonLearned&) const = default;

  bool is_observation() const { return std::holds_alternative<Observation>(body); }
};

// Placeholder for a process model so that other elements can reference it.
struct ProcessModelStub {
  std::string id;
  std::string name;
  std::vector<std::string> phases;  // e.g. RP, DP, CP, IP, AP

  bool operator==(const ProcessModelStub&) const = default;
};

using Element = std::variant<CharacterizationVector, QualityModel, LessonLearned, ProcessModelStub>;

enum class ElementKind { context, quality_model, lesson, process_model };

ElementKind kind_of(const Element& element);
std::string_view to_string(ElementKind kind);
std::optional<ElementKind> parse_element_kind(std::string_view text);
const std::string& id_of(const Element& element);

// Context vector id an element is scoped by, if it has one.
std::optional<std::string> context_of(const Element& element);
std::optional<Significance> significance_of(const Element& element);

struct Violation {
  std::string field;
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_vector(const CharacterizationVector& cv);
std::vector<Violation> validate_quality_model(const QualityModel& qm);
std::vector<Violation> validate_lesson(const LessonLearned& ll);
std::vector<Violation> validate_process_model(const ProcessModelStub& pm);
std::vector<Violation> validate_element(const Element& element);

// The six steps of a GQM measurement programme, 1-based.
std::string_view program_step_name(int step);

// A measurement programme moves through the steps strictly in order. The only
// way to obtain one is begin(), and the only way to move it is
// advance_program(), so a skipped step is unrepresentable.
class MeasurementProgram {
 public:
  using Clock = std::chrono::system_clock;

  static constexpr int first_step = 1;
  static constexpr int last_step = 6;

  struct Transition {
    int step;
    Clock::time_point at;

    bool operator==(const Transition&) const = default;
  };

  static MeasurementProgram begin(std::string id, std::string plan, Clock::time_point at);

  const std::string& id() const { return id_; }
  const std::string& plan() const { return plan_; }
  int step() const { return step_; }
  const std::vector<Transition>& history() const { return history_; }

  bool operator==(const MeasurementProgram&) const = default;

 private:
  MeasurementProgram() = default;

  friend MeasurementProgram advance_program(const MeasurementProgram& program,
                                            Clock::time_point at);

  std::string id_;
  std::string plan_;
  int step_ = first_step;
  std::vector<Transition> history_;
};

// Throws Error{already_packaged} at step 6.
MeasurementProgram advance_program(const MeasurementProgram& program,
                                   MeasurementProgram::Clock::time_point at);

enum class EvidenceKind { technology_applied, process_followed, problem_solved };

std::string_view to_string(EvidenceKind kind);
std::optional<EvidenceKind> parse_evidence_kind(std::string_view text);

// A fact of the form "there is evidence with significance s that ... within
// the context c". Built and checked against a store by
// Store::make_evidence_statement.
struct EvidenceStatement {
  EvidenceKind kind = EvidenceKind::process_followed;
  // Element id of the process model or lesson; the technology name for
  // technology_applied.
  std::string subject;
  std::optional<TechnologyRef> technology;
  std::string context;
  std::optional<std::string> result;  // QualityModel id
  Significance significance;

  bool operator==(const EvidenceStatement&) const = default;
};

}  // namespace evb
