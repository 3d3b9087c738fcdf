#include "evb/model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <set>

#include "evb/errors.hpp"
#include "evb/strings.hpp"

namespace evb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kind_mismatch: return "KindMismatch";
    case ErrorCode::already_packaged: return "AlreadyPackaged";
    case ErrorCode::header_mismatch: return "HeaderMismatch";
    case ErrorCode::empty_dataset: return "EmptyDataset";
    case ErrorCode::unknown_order_key: return "UnknownOrderKey";
    case ErrorCode::unmapped_metric: return "UnmappedMetric";
    case ErrorCode::invalid_model: return "InvalidModel";
    case ErrorCode::duplicate_id: return "DuplicateId";
    case ErrorCode::validation_failed: return "ValidationFailed";
    case ErrorCode::not_found: return "NotFound";
    case ErrorCode::unresolved_context: return "UnresolvedContext";
    case ErrorCode::unresolved_subject: return "UnresolvedSubject";
    case ErrorCode::unresolved_result: return "UnresolvedResult";
    case ErrorCode::missing_result: return "MissingResult";
    case ErrorCode::unexpected_result: return "UnexpectedResult";
    case ErrorCode::subject_kind_mismatch: return "SubjectKindMismatch";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::parse_failed: return "ParseFailed";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Dates and ids

std::optional<Date> parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto number = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int value = 0;
    const auto* first = text.data() + pos;
    const auto* last = first + len;
    if (!std::all_of(first, last, [](char c) { return c >= '0' && c <= '9'; })) return std::nullopt;
    std::from_chars(first, last, value);
    return value;
  };
  const auto y = number(0, 4);
  const auto m = number(5, 2);
  const auto d = number(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_iso_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

bool is_valid_id(std::string_view id) {
  if (id.empty() || id.front() == '.' || id.front() == '-') return false;
  // ".." is the period range token.
  if (id.find("..") != std::string_view::npos) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  });
}

// ---------------------------------------------------------------------------
// Enumerations

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::pair<Enum, std::string_view>, N>& table,
                           std::string_view text) {
  for (const auto& [value, name] : table) {
    if (name == text) return value;
  }
  return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N>& table,
                         Enum value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::array<std::pair<SignificanceKind, std::string_view>, 3> kSignificanceKinds{{
    {SignificanceKind::formal_experiment, "formal_experiment"},
    {SignificanceKind::case_study, "case_study"},
    {SignificanceKind::survey, "survey"},
}};

constexpr std::array<std::pair<Scale, std::string_view>, 5> kScales{{
    {Scale::category, "category"},
    {Scale::hours, "hours"},
    {Scale::count, "count"},
    {Scale::ratio, "ratio"},
    {Scale::text, "text"},
}};

constexpr std::array<std::pair<IndicatorKind, std::string_view>, 5> kIndicatorKinds{{
    {IndicatorKind::distribution, "distribution"},
    {IndicatorKind::cumulative_distribution, "cumulative_distribution"},
    {IndicatorKind::sum, "sum"},
    {IndicatorKind::mean, "mean"},
    {IndicatorKind::count, "count"},
}};

constexpr std::array<std::pair<ModelType, std::string_view>, 3> kModelTypes{{
    {ModelType::project_oriented, "project_oriented"},
    {ModelType::process_oriented, "process_oriented"},
    {ModelType::product_oriented, "product_oriented"},
}};

constexpr std::array<std::pair<ElementKind, std::string_view>, 4> kElementKinds{{
    {ElementKind::context, "context"},
    {ElementKind::quality_model, "quality_model"},
    {ElementKind::lesson, "lesson"},
    {ElementKind::process_model, "process_model"},
}};

constexpr std::array<std::pair<EvidenceKind, std::string_view>, 3> kEvidenceKinds{{
    {EvidenceKind::technology_applied, "technology_applied"},
    {EvidenceKind::process_followed, "process_followed"},
    {EvidenceKind::problem_solved, "problem_solved"},
}};

}  // namespace

std::string_view to_string(SignificanceKind kind) { return name_of(kSignificanceKinds, kind); }
std::optional<SignificanceKind> parse_significance_kind(std::string_view text) {
  return lookup(kSignificanceKinds, text);
}
std::string_view to_string(Scale scale) { return name_of(kScales, scale); }
std::optional<Scale> parse_scale(std::string_view text) { return lookup(kScales, text); }
std::string_view to_string(IndicatorKind kind) { return name_of(kIndicatorKinds, kind); }
std::optional<IndicatorKind> parse_indicator_kind(std::string_view text) {
  return lookup(kIndicatorKinds, text);
}
std::string_view to_string(ModelType type) { return name_of(kModelTypes, type); }
std::optional<ModelType> parse_model_type(std::string_view text) {
  return lookup(kModelTypes, text);
}
std::string_view to_string(ElementKind kind) { return name_of(kElementKinds, kind); }
std::optional<ElementKind> parse_element_kind(std::string_view text) {
  return lookup(kElementKinds, text);
}
std::string_view to_string(EvidenceKind kind) { return name_of(kEvidenceKinds, kind); }
std::optional<EvidenceKind> parse_evidence_kind(std::string_view text) {
  return lookup(kEvidenceKinds, text);
}

bool is_distribution(IndicatorKind kind) {
  return kind == IndicatorKind::distribution || kind == IndicatorKind::cumulative_distribution;
}

// ---------------------------------------------------------------------------
// Significance

SignificanceRank significance_rank(const Significance& s) {
  return SignificanceRank{static_cast<int>(s.kind), s.count};
}

Significance merge_significance(const Significance& a, const Significance& b) {
  if (a.kind != b.kind) {
    throw Error(ErrorCode::kind_mismatch, "cannot merge " + std::string(to_string(a.kind)) +
                                              " with " + std::string(to_string(b.kind)));
  }
  return Significance{a.kind, a.count + b.count};
}

std::string describe(const Significance& s) {
  const bool plural = s.count != 1;
  std::string noun;
  switch (s.kind) {
    case SignificanceKind::formal_experiment:
      noun = plural ? "formal experiments" : "formal experiment";
      break;
    case SignificanceKind::case_study:
      noun = plural ? "case studies" : "case study";
      break;
    case SignificanceKind::survey:
      noun = plural ? "surveys" : "survey";
      break;
  }
  return std::to_string(s.count) + " " + noun;
}

// ---------------------------------------------------------------------------
// Quality models

const IndicatorDef& QualityModel::indicator() const {
  if (indicators.size() != 1) {
    throw Error(ErrorCode::invalid_model,
                "quality model " + id + " declares " + std::to_string(indicators.size()) +
                    " indicators, expected exactly one");
  }
  return indicators.front();
}

const MetricDef* QualityModel::find_metric(std::string_view metric_name) const {
  for (const auto& m : metrics) {
    if (m.name == metric_name) return &m;
  }
  return nullptr;
}

std::string derive_quality_focus(std::string_view sub_kind) {
  auto text = trim(sub_kind);
  constexpr std::string_view suffix = "model";
  if (text.size() >= suffix.size() &&
      to_lower_ascii(text.substr(text.size() - suffix.size())) == suffix) {
    const auto head = text.substr(0, text.size() - suffix.size());
    // Only strip a whole trailing word.
    if (head.empty() || head.back() == ' ' || head.back() == '\t') text = trim(head);
  }
  return std::string(text);
}

// ---------------------------------------------------------------------------
// Element access

ElementKind kind_of(const Element& element) {
  return static_cast<ElementKind>(element.index());
}

const std::string& id_of(const Element& element) {
  return std::visit([](const auto& e) -> const std::string& { return e.id; }, element);
}

std::optional<std::string> context_of(const Element& element) {
  if (const auto* qm = std::get_if<QualityModel>(&element)) return qm->goal.context;
  if (const auto* ll = std::get_if<LessonLearned>(&element)) return ll->context;
  if (const auto* cv = std::get_if<CharacterizationVector>(&element)) return cv->id;
  return std::nullopt;
}

std::optional<Significance> significance_of(const Element& element) {
  if (const auto* qm = std::get_if<QualityModel>(&element)) return qm->significance;
  if (const auto* ll = std::get_if<LessonLearned>(&element)) return ll->significance;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Checker {
 public:
  void require(bool ok, std::string field, std::string message) {
    if (!ok) out_.push_back(Violation{std::move(field), std::move(message)});
  }

  void non_blank(std::string_view value, const std::string& field) {
    require(!is_blank(value), field, field + " must not be empty");
  }

  void id(std::string_view value, const std::string& field) {
    require(is_valid_id(value), field,
            field + " '" + std::string(value) +
                "' is not a valid id (letters, digits, '_', '-', '.')");
  }

  void significance(const Significance& s) {
    require(s.count >= 1, "significance",
            "significance count " + std::to_string(s.count) + " must be at least 1");
  }

  void reference_list(const std::vector<std::string>& refs) {
    for (std::size_t i = 0; i < refs.size(); ++i) {
      id(refs[i], "references[" + std::to_string(i) + "]");
    }
  }

  void doc_list(const std::vector<std::string>& docs) {
    for (std::size_t i = 0; i < docs.size(); ++i) {
      non_blank(docs[i], "docs[" + std::to_string(i) + "]");
    }
  }

  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

void check_labeled(Checker& check, const std::vector<LabeledText>& items, std::string_view section,
                   const std::set<std::string>* citable, std::string_view citable_section,
                   std::set<std::string>& all_labels) {
  for (const auto& item : items) {
    const std::string field = std::string(section) + "[" + item.label + "]";
    check.id(item.label, std::string(section) + " label");
    check.non_blank(item.text, field);
    if (!is_blank(item.label)) {
      check.require(all_labels.insert(item.label).second, field,
                    "label " + item.label + " is used more than once");
    }
    if (citable == nullptr) {
      check.require(item.cites.empty(), field, std::string(section) + " " + item.label +
                                                   " must not cite other labels");
      continue;
    }
    check.require(!item.cites.empty(), field,
                  std::string(section) + " " + item.label + " must cite at least one " +
                      std::string(citable_section));
    for (const auto& cited : item.cites) {
      check.require(citable->count(cited) > 0, field,
                    std::string(section) + " " + item.label + " cites " + cited +
                        ", which is not among the " + std::string(citable_section) + "s");
    }
  }
}

std::set<std::string> labels_of(const std::vector<LabeledText>& items) {
  std::set<std::string> out;
  for (const auto& item : items) out.insert(item.label);
  return out;
}

}  // namespace

std::vector<Violation> validate_vector(const CharacterizationVector& cv) {
  Checker check;
  check.id(cv.id, "id");
  check.require(!cv.factors.empty(), "factors", "a characterization vector needs at least one factor");
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < cv.factors.size(); ++i) {
    const auto& f = cv.factors[i];
    const std::string field = "factors[" + std::to_string(i) + "]";
    check.non_blank(f.category, field + ".category");
    check.non_blank(f.name, field + ".name");
    check.non_blank(f.value, field + ".value");
    check.require(seen.emplace(f.category, f.name).second, field,
                  "factor \"" + f.category + "\" / \"" + f.name + "\" appears more than once");
  }
  return check.take();
}

std::vector<Violation> validate_quality_model(const QualityModel& qm) {
  Checker check;
  check.id(qm.id, "id");
  check.non_blank(qm.name, "name");
  check.significance(qm.significance);
  check.require(qm.period.start.ok(), "period", "period start is not a calendar date");
  check.require(qm.period.end.ok(), "period", "period end is not a calendar date");
  check.require(qm.period.start <= qm.period.end, "period", "period start after end");

  check.non_blank(qm.goal.object, "goal.object");
  check.non_blank(qm.goal.purpose, "goal.purpose");
  check.non_blank(qm.goal.quality_focus, "goal.quality_focus");
  check.non_blank(qm.goal.viewpoint, "goal.viewpoint");
  check.id(qm.goal.context, "goal.context");

  check.non_blank(qm.question, "question");

  std::set<std::string> metric_names;
  for (const auto& m : qm.metrics) {
    check.id(m.name, "metric");
    check.require(metric_names.insert(m.name).second, "metric[" + m.name + "]",
                  "metric " + m.name + " is declared more than once");
  }

  check.require(qm.indicators.size() == 1, "indicator",
                "indicator count " + std::to_string(qm.indicators.size()) + " ≠ 1");
  for (const auto& ind : qm.indicators) {
    const std::string field = "indicator[" + ind.name + "]";
    check.id(ind.name, "indicator");
    check.require(metric_names.count(ind.value_metric) > 0, field,
                  "indicator value metric " + ind.value_metric + " is not declared");
    if (ind.group_by) {
      check.require(metric_names.count(*ind.group_by) > 0, field,
                    "indicator group_by metric " + *ind.group_by + " is not declared");
    }
    check.require(!is_distribution(ind.kind) || ind.group_by.has_value(), field,
                  std::string(to_string(ind.kind)) + " indicator requires group_by");
    if (ind.order) {
      check.require(!ind.order->empty(), field, "explicit order must list at least one key");
      std::set<std::string> keys;
      for (const auto& key : *ind.order) {
        check.non_blank(key, field + ".order");
        check.require(keys.insert(key).second, field, "order key " + key + " repeats");
      }
    }
  }

  std::set<std::string> labels;
  const auto observation_labels = labels_of(qm.observations);
  const auto interpretation_labels = labels_of(qm.interpretations);
  check_labeled(check, qm.observations, "observation", nullptr, "", labels);
  check_labeled(check, qm.interpretations, "interpretation", &observation_labels, "observation",
                labels);
  check_labeled(check, qm.consequences, "consequence", &interpretation_labels, "interpretation",
                labels);

  check.reference_list(qm.references);
  check.doc_list(qm.additional_docs);
  return check.take();
}

std::vector<Violation> validate_lesson(const LessonLearned& ll) {
  Checker check;
  check.id(ll.id, "id");
  check.require(!ll.topic.empty(), "topic", "topic needs at least one keyword");
  for (std::size_t i = 0; i < ll.topic.size(); ++i) {
    check.non_blank(ll.topic[i], "topic[" + std::to_string(i) + "]");
  }
  check.non_blank(ll.situation, "situation");
  check.significance(ll.significance);
  check.id(ll.context, "context");
  if (const auto* obs = std::get_if<Observation>(&ll.body)) {
    check.non_blank(obs->text, "observation");
  } else {
    const auto& ps = std::get<ProblemSolution>(ll.body);
    check.non_blank(ps.problem, "problem");
    check.non_blank(ps.cause, "cause");
    check.require(ps.solution_reactive.has_value() || ps.solution_preventive.has_value(),
                  "solution", "a problem/solution pair needs a reactive or preventive solution");
    if (ps.solution_reactive) check.non_blank(*ps.solution_reactive, "solution_reactive");
    if (ps.solution_preventive) check.non_blank(*ps.solution_preventive, "solution_preventive");
    if (ps.log) check.non_blank(*ps.log, "log");
  }
  check.reference_list(ll.references);
  check.doc_list(ll.additional_docs);
  return check.take();
}

std::vector<Violation> validate_process_model(const ProcessModelStub& pm) {
  Checker check;
  check.id(pm.id, "id");
  check.non_blank(pm.name, "name");
  check.require(!pm.phases.empty(), "phases", "a process model needs at least one phase");
  std::set<std::string> seen;
  for (const auto& phase : pm.phases) {
    check.non_blank(phase, "phases");
    check.require(seen.insert(phase).second, "phases", "phase " + phase + " repeats");
  }
  return check.take();
}

std::vector<Violation> validate_element(const Element& element) {
  return std::visit(
      [](const auto& e) -> std::vector<Violation> {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, CharacterizationVector>) return validate_vector(e);
        if constexpr (std::is_same_v<T, QualityModel>) return validate_quality_model(e);
        if constexpr (std::is_same_v<T, LessonLearned>) return validate_lesson(e);
        if constexpr (std::is_same_v<T, ProcessModelStub>) return validate_process_model(e);
      },
      element);
}

// ---------------------------------------------------------------------------
// Measurement programmes

std::string_view program_step_name(int step) {
  static constexpr std::array<std::string_view, 6> names{
      "Characterize the environment",
      "Identify measurement goals and develop measurement plans",
      "Define data collection procedures",
      "Collect, analyze and interpret data",
      "Perform post-mortem analysis and interpret data",
      "Package experience",
  };
  if (step < MeasurementProgram::first_step || step > MeasurementProgram::last_step) return "";
  return names[static_cast<std::size_t>(step - 1)];
}

MeasurementProgram MeasurementProgram::begin(std::string id, std::string plan,
                                             Clock::time_point at) {
  MeasurementProgram p;
  p.id_ = std::move(id);
  p.plan_ = std::move(plan);
  p.step_ = first_step;
  p.history_.push_back(Transition{first_step, at});
  return p;
}

MeasurementProgram advance_program(const MeasurementProgram& program,
                                   MeasurementProgram::Clock::time_point at) {
  if (program.step_ >= MeasurementProgram::last_step) {
    throw Error(ErrorCode::already_packaged,
                "measurement program " + program.id_ + " is already packaged");
  }
  MeasurementProgram next = program;
  ++next.step_;
  next.history_.push_back(MeasurementProgram::Transition{next.step_, at});
  return next;
}

}  // namespace evb
