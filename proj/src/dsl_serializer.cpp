#include <algorithm>
#include <cstdio>

#include "evb/dsl.hpp"
#include "evb/strings.hpp"

namespace evb::dsl {

namespace {

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (const char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

// Bare list items are written unquoted whenever the parser would read them
// back unchanged.
std::string list_item(std::string_view item) {
  const bool needs_quotes =
      item.empty() || trim(item).size() != item.size() || item.front() == '"' ||
      item.front() == '#' ||
      item.find_first_of(",[]{}\"\\") != std::string_view::npos ||
      std::any_of(item.begin(), item.end(),
                  [](char c) { return static_cast<unsigned char>(c) < 0x20; });
  return needs_quotes ? quote(item) : std::string(item);
}

template <typename Fn>
std::string bracketed(const std::vector<std::string>& items, Fn&& render) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += render(items[i]);
  }
  return out + "]";
}

std::string raw_list(const std::vector<std::string>& items) {
  return bracketed(items, [](const std::string& s) { return list_item(s); });
}

std::string ref_list(const std::vector<std::string>& items) {
  return bracketed(items, [](const std::string& s) { return "@" + s; });
}

std::string string_list(const std::vector<std::string>& items) {
  return bracketed(items, [](const std::string& s) { return quote(s); });
}

std::string significance(const Significance& s) {
  return std::string(to_string(s.kind)) + "(" + std::to_string(s.count) + ")";
}

class Writer {
 public:
  void line(int depth, std::string_view text) {
    out_.append(static_cast<std::size_t>(depth) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

  void optional_list(int depth, std::string_view key, const std::vector<std::string>& items,
                     std::string (*render)(const std::vector<std::string>&)) {
    if (!items.empty()) line(depth, std::string(key) + ": " + render(items));
  }

  void write(const CharacterizationVector& cv) {
    line(0, "context " + quote(cv.id) + " {");
    for (const auto& f : cv.factors) {
      line(1, quote(f.category) + " / " + quote(f.name) + ": " + quote(f.value));
    }
    line(0, "}");
  }

  void write(const QualityModel& qm) {
    line(0, "quality_model " + quote(qm.id) + " {");
    line(1, "name: " + quote(qm.name));
    std::string type = "type: " + std::string(to_string(qm.type));
    if (!qm.sub_kind.empty()) type += " " + quote(qm.sub_kind);
    line(1, type);
    line(1, "significance: " + significance(qm.significance));
    line(1, "period: " + format_iso_date(qm.period.start) + " .. " +
                format_iso_date(qm.period.end));
    line(1, "goal {");
    line(2, "object: " + quote(qm.goal.object));
    line(2, "purpose: " + quote(qm.goal.purpose));
    if (!qm.goal.quality_focus_derived) line(2, "quality_focus: " + quote(qm.goal.quality_focus));
    line(2, "viewpoint: " + quote(qm.goal.viewpoint));
    line(2, "context: @" + qm.goal.context);
    line(1, "}");
    line(1, "question " + quote(qm.question) + " {");
    for (const auto& m : qm.metrics) {
      line(2, "metric " + m.name + ": " + std::string(to_string(m.scale)));
    }
    for (const auto& ind : qm.indicators) {
      std::string text = "indicator " + ind.name + " = " + std::string(to_string(ind.kind)) + "(" +
                         ind.value_metric;
      if (ind.group_by) text += ", by: " + *ind.group_by;
      if (ind.order) text += ", order: " + raw_list(*ind.order);
      line(2, text + ")");
    }
    line(1, "}");
    for (const auto& o : qm.observations) line(1, "observation " + o.label + ": " + quote(o.text));
    const auto cited = [this](std::string_view keyword, const LabeledText& item) {
      line(1, std::string(keyword) + " " + item.label + " from " + join(item.cites, ", ") + ": " +
                  quote(item.text));
    };
    for (const auto& i : qm.interpretations) cited("interpretation", i);
    for (const auto& c : qm.consequences) cited("consequence", c);
    optional_list(1, "references", qm.references, ref_list);
    optional_list(1, "docs", qm.additional_docs, string_list);
    line(0, "}");
  }

  void write(const LessonLearned& ll) {
    line(0, "lesson " + quote(ll.id) + " {");
    line(1, "topic: " + raw_list(ll.topic));
    line(1, "situation: " + quote(ll.situation));
    line(1, "significance: " + significance(ll.significance));
    line(1, "context: @" + ll.context);
    if (const auto* obs = std::get_if<Observation>(&ll.body)) {
      line(1, "observation: " + quote(obs->text));
    } else {
      const auto& ps = std::get<ProblemSolution>(ll.body);
      line(1, "problem: " + quote(ps.problem));
      line(1, "cause: " + quote(ps.cause));
      if (ps.solution_reactive) line(1, "solution_reactive: " + quote(*ps.solution_reactive));
      if (ps.solution_preventive) line(1, "solution_preventive: " + quote(*ps.solution_preventive));
      if (ps.log) line(1, "log: " + quote(*ps.log));
    }
    optional_list(1, "references", ll.references, ref_list);
    optional_list(1, "docs", ll.additional_docs, string_list);
    line(0, "}");
  }

  void write(const ProcessModelStub& pm) {
    line(0, "process_model " + quote(pm.id) + " {");
    line(1, "name: " + quote(pm.name));
    line(1, "phases: " + raw_list(pm.phases));
    line(0, "}");
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

}  // namespace

std::string serialize(const Element& element) {
  Writer w;
  std::visit([&w](const auto& e) { w.write(e); }, element);
  return w.take();
}

std::string serialize(const Document& doc) {
  std::string out;
  for (std::size_t i = 0; i < doc.elements.size(); ++i) {
    if (i > 0) out += '\n';
    out += serialize(doc.elements[i]);
  }
  return out;
}

}  // namespace evb::dsl
