#include "evb/reporting.hpp"

#include "evb/strings.hpp"

namespace evb {

namespace {

// Table cells cannot hold raw pipes or line breaks.
std::string cell(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n') {
      out += "<br>";
    } else if (c != '\r') {
      out += c;
    }
  }
  return out;
}

std::string capitalize(std::string_view text) {
  std::string out(text);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  for (auto& c : out) {
    if (c == '_') c = ' ';
  }
  return out;
}

class Table {
 public:
  explicit Table(std::string title) : title_(std::move(title)) {}

  void row(std::string_view field, std::string_view value) {
    rows_ += "| " + std::string(field) + " | " + std::string(value) + " |\n";
  }

  Report finish() const {
    return Report{title_, "# " + cell(title_) + "\n\n| Field | Value |\n| --- | --- |\n" + rows_};
  }

 private:
  std::string title_;
  std::string rows_;
};

std::string joined_cells(const std::vector<std::string>& items, std::string_view sep) {
  std::vector<std::string> escaped;
  escaped.reserve(items.size());
  for (const auto& item : items) escaped.push_back(cell(item));
  return join(escaped, sep);
}

std::string labeled(const std::vector<LabeledText>& items) {
  if (items.empty()) return "none";
  std::vector<std::string> lines;
  for (const auto& item : items) {
    std::string head = item.label;
    if (!item.cites.empty()) head += " (" + join(item.cites, ", ") + ")";
    lines.push_back(head + ": " + cell(item.text));
  }
  return join(lines, "<br>");
}

std::string model_type(const QualityModel& qm) {
  std::string kind(to_string(qm.type));
  for (auto& c : kind) {
    if (c == '_') c = '-';
  }
  std::string out = "Quality model/" + kind;
  if (!qm.sub_kind.empty()) out += "/" + cell(qm.sub_kind);
  return out;
}

std::string metric_header(const QualityModel& qm, std::string_view metric) {
  std::string header = capitalize(metric);
  if (const auto* m = qm.find_metric(metric); m != nullptr && m->scale == Scale::hours) {
    header += " (h)";
  }
  return header;
}

std::string indicator_cell(const QualityModel& qm, const std::optional<IndicatorResult>& result) {
  std::string out = cell(qm.question);
  if (!result || qm.indicators.empty()) return out;
  const auto& ind = qm.indicators.front();
  const std::string key_header = ind.group_by ? capitalize(*ind.group_by) : "Indicator";
  out += "<br><table><tr><th>" + key_header + "</th><th>" + metric_header(qm, ind.value_metric) +
         "</th><th>Cumulated " + capitalize(ind.value_metric) + " (%)</th></tr>";
  for (const auto& row : result->rows) {
    out += "<tr><td>" + cell(row.key) + "</td><td>" + format_fixed2(row.value) + "</td><td>" +
           format_fixed2(row.cumulative_percent) + "</td></tr>";
  }
  out += "</table>";
  return out;
}

std::string list_or_none(const std::vector<std::string>& items, std::string_view sep) {
  return items.empty() ? "none" : joined_cells(items, sep);
}

}  // namespace

Report render_quality_model(const QualityModel& qm, const std::optional<IndicatorResult>& result) {
  Table t(qm.name);
  t.row("Model Id.", cell(qm.id));
  t.row("Model Name", cell(qm.name));
  t.row("Model Type", model_type(qm));
  t.row("Significance", describe(qm.significance));
  t.row("Measurement Period",
        format_iso_date(qm.period.start) + " – " + format_iso_date(qm.period.end));
  t.row("Object", cell(qm.goal.object));
  t.row("Purpose", cell(qm.goal.purpose));
  t.row("Quality Focus", cell(qm.goal.quality_focus) +
                             (qm.goal.quality_focus_derived ? " (derived from model type)" : ""));
  t.row("Viewpoint", cell(qm.goal.viewpoint));
  t.row("Characterization Vector/Context", cell(qm.goal.context));
  t.row("Indicator", indicator_cell(qm, result));
  t.row("Observations", labeled(qm.observations));
  t.row("Interpretations", labeled(qm.interpretations));
  t.row("Consequences", labeled(qm.consequences));
  t.row("References", list_or_none(qm.references, ", "));
  t.row("Additional Documentation", list_or_none(qm.additional_docs, "<br>"));
  return t.finish();
}

Report render_lesson(const LessonLearned& ll) {
  Table t("Lesson Learned " + ll.id);
  t.row("Topic", joined_cells(ll.topic, ", "));
  t.row("Situation", cell(ll.situation));
  t.row("Significance", describe(ll.significance));
  t.row("Characterization Vector / Context", cell(ll.context));
  if (const auto* obs = std::get_if<Observation>(&ll.body)) {
    t.row("Observation", cell(obs->text));
  } else {
    const auto& ps = std::get<ProblemSolution>(ll.body);
    t.row("Problem", cell(ps.problem));
    t.row("Cause", cell(ps.cause));
    if (ps.solution_reactive) t.row("Solution (reactive)", cell(*ps.solution_reactive));
    if (ps.solution_preventive) t.row("Solution (preventive)", cell(*ps.solution_preventive));
    if (ps.log) t.row("Log", cell(*ps.log));
  }
  if (!ll.references.empty()) t.row("References", joined_cells(ll.references, ", "));
  if (!ll.additional_docs.empty()) {
    t.row("Additional Documentation", joined_cells(ll.additional_docs, "<br>"));
  }
  return t.finish();
}

Report render_vector(const CharacterizationVector& cv) {
  Report report;
  report.title = "Characterization Vector " + cv.id;
  report.body = "# " + cell(report.title) +
                "\n\n| Customization factor | Characteristic | Value |\n| --- | --- | --- |\n";
  std::string previous;
  for (std::size_t i = 0; i < cv.factors.size(); ++i) {
    const auto& f = cv.factors[i];
    // Like the printed template, a category is named once per run.
    const bool repeat = i > 0 && f.category == previous;
    report.body += "| " + (repeat ? std::string() : cell(f.category)) + " | " + cell(f.name) +
                   " | " + cell(f.value) + " |\n";
    previous = f.category;
  }
  return report;
}

Report render_process_model(const ProcessModelStub& pm) {
  Table t(pm.name);
  t.row("Model Id.", cell(pm.id));
  t.row("Model Name", cell(pm.name));
  t.row("Phases", joined_cells(pm.phases, ", "));
  return t.finish();
}

std::string render_evidence_statement(const EvidenceStatement& es) {
  std::string out = "There is evidence with significance " + describe(es.significance) + " that ";
  switch (es.kind) {
    case EvidenceKind::technology_applied: {
      std::string tech = es.technology ? es.technology->name : es.subject;
      if (es.technology && es.technology->version) tech += " (" + *es.technology->version + ")";
      out += "technology " + tech + " was applied within context " + es.context;
      if (es.result) out += " with the result " + *es.result;
      break;
    }
    case EvidenceKind::process_followed:
      out += "process model " + es.subject + " was followed within context " + es.context;
      break;
    case EvidenceKind::problem_solved:
      out += "the problem " + es.subject + " arose and was solved within the context " +
             es.context;
      break;
  }
  return out;
}

const std::array<std::string_view, 4>& retrospective_questions() {
  static constexpr std::array<std::string_view, 4> questions{
      "What did we do well, which we might forget if we don't discuss it?",
      "What did we learn?",
      "What should we do differently next time?",
      "What still puzzles us?",
  };
  return questions;
}

}  // namespace evb
