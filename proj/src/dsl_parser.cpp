#include <map>
#include <regex>
#include <set>

#include "evb/dsl.hpp"
#include "evb/strings.hpp"

namespace evb::dsl {

namespace {

enum class Tok { word, string, punct, dotdot, end };

struct Token {
  Tok type = Tok::end;
  std::string text;
  SourceSpan span;
};

struct Mark {
  std::size_t pos = 0;
  int line = 1;
  int column = 1;
};

// Thrown on the first syntax error inside an element; the document loop
// records it and resynchronises.
struct Failure {
  ParseError error;
};

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-' || c == '.' || c == '+';
}

std::string describe(const Token& t) {
  switch (t.type) {
    case Tok::word: return "'" + t.text + "'";
    case Tok::string: return "string";
    case Tok::punct: return "'" + t.text + "'";
    case Tok::dotdot: return "'..'";
    case Tok::end: return "end of input";
  }
  return "token";
}

void append_utf8(std::string& out, unsigned code) {
  if (code < 0x80) {
    out += static_cast<char>(code);
  } else if (code < 0x800) {
    out += static_cast<char>(0xC0 | (code >> 6));
    out += static_cast<char>(0x80 | (code & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (code >> 12));
    out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (code & 0x3F));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Mark mark() const { return mark_; }
  void reset(Mark m) { mark_ = m; }
  bool at_end() const { return mark_.pos >= src_.size(); }

  [[noreturn]] void fail(SourceSpan span, std::string message,
                         std::optional<std::string> expected = std::nullopt) const {
    throw Failure{ParseError{span, std::move(message), std::move(expected)}};
  }

  SourceSpan here(int length = 0) const { return SourceSpan{mark_.line, mark_.column, length}; }

  void skip_space() {
    while (!at_end()) {
      const char c = cur();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '#') {
        while (!at_end() && cur() != '\n') bump();
      } else {
        break;
      }
    }
  }

  Token next() {
    skip_space();
    const Mark start = mark_;
    Token t;
    if (at_end()) {
      t.type = Tok::end;
      t.span = span_from(start);
      return t;
    }
    const char c = cur();
    if (c == '"') {
      t.type = Tok::string;
      t.text = lex_string();
    } else if (c == '.' && peek(1) == '.') {
      bump();
      bump();
      t.type = Tok::dotdot;
      t.text = "..";
    } else if (is_word_char(c)) {
      t.type = Tok::word;
      while (!at_end() && is_word_char(cur()) && !(cur() == '.' && peek(1) == '.')) {
        t.text += cur();
        bump();
      }
    } else if (std::string_view("{}[]():,/=@").find(c) != std::string_view::npos) {
      t.type = Tok::punct;
      t.text = std::string(1, c);
      bump();
    } else {
      // One whole code point, for the message.
      std::string bad(1, c);
      bump();
      while (!at_end() && (static_cast<unsigned char>(cur()) & 0xC0) == 0x80) {
        bad += cur();
        bump();
      }
      fail(span_from(start), "unexpected character '" + bad + "'");
    }
    t.span = span_from(start);
    return t;
  }

  Token peek_token() {
    const Mark m = mark_;
    Token t = next();
    mark_ = m;
    return t;
  }

  // A bare list item: everything up to ',' ']' or end of line, trimmed. A
  // quoted string is taken verbatim.
  Token raw_item() {
    skip_space();
    const Mark start = mark_;
    Token t;
    if (!at_end() && cur() == '"') {
      t.type = Tok::string;
      t.text = lex_string();
      t.span = span_from(start);
      return t;
    }
    t.type = Tok::word;
    Mark last_non_space = mark_;
    while (!at_end() && cur() != ',' && cur() != ']' && cur() != '\n' && cur() != '\r') {
      t.text += cur();
      bump();
      if (t.text.back() != ' ' && t.text.back() != '\t') last_non_space = mark_;
    }
    t.text = std::string(trim(t.text));
    t.span = SourceSpan{start.line, start.column, last_non_space.column - start.column};
    if (t.text.empty()) fail(t.span, "empty list item", "list item");
    return t;
  }

  // Moves past the '}' matching an already consumed '{'. Strings and
  // comments are skipped so braces inside them do not count.
  void skip_block() {
    int depth = 1;
    while (!at_end() && depth > 0) {
      const char c = cur();
      if (c == '"') {
        bump();
        while (!at_end() && cur() != '"' && cur() != '\n') {
          if (cur() == '\\') bump();
          if (!at_end()) bump();
        }
        if (!at_end()) bump();
        continue;
      }
      if (c == '#') {
        while (!at_end() && cur() != '\n') bump();
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}') --depth;
      bump();
    }
  }

 private:
  char cur() const { return src_[mark_.pos]; }
  char peek(std::size_t ahead) const {
    return mark_.pos + ahead < src_.size() ? src_[mark_.pos + ahead] : '\0';
  }

  void bump() {
    const char c = src_[mark_.pos++];
    if (c == '\n') {
      ++mark_.line;
      mark_.column = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++mark_.column;
    }
  }

  SourceSpan span_from(Mark start) const {
    const int length = mark_.line == start.line ? mark_.column - start.column : 0;
    return SourceSpan{start.line, start.column, length};
  }

  std::string lex_string() {
    const Mark start = mark_;
    bump();  // opening quote
    std::string out;
    for (;;) {
      if (at_end() || cur() == '\n') {
        fail(span_from(start), "unterminated string", "'\"'");
      }
      const char c = cur();
      if (c == '"') {
        bump();
        return out;
      }
      if (c != '\\') {
        out += c;
        bump();
        continue;
      }
      const Mark escape = mark_;
      bump();
      if (at_end()) fail(span_from(start), "unterminated string", "'\"'");
      const char e = cur();
      bump();
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'u': {
          unsigned code = 0;
          for (int i = 0; i < 4; ++i) {
            const char h = at_end() ? '\0' : cur();
            unsigned digit = 0;
            if (h >= '0' && h <= '9') {
              digit = static_cast<unsigned>(h - '0');
            } else if (h >= 'a' && h <= 'f') {
              digit = static_cast<unsigned>(h - 'a' + 10);
            } else if (h >= 'A' && h <= 'F') {
              digit = static_cast<unsigned>(h - 'A' + 10);
            } else {
              fail(span_from(escape), "malformed \\u escape", "four hex digits");
            }
            code = code * 16 + digit;
            bump();
          }
          append_utf8(out, code);
          break;
        }
        default:
          fail(span_from(escape), std::string("unknown escape '\\") + e + "'");
      }
    }
  }

  std::string_view src_;
  Mark mark_;
};

// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  ParseResult run() {
    ParseResult result;
    std::map<std::string, SourceSpan> ids;
    for (;;) {
      lex_.skip_space();
      if (lex_.at_end()) break;
      std::optional<Mark> body;
      try {
        const Token kind = lex_.next();
        if (kind.type != Tok::word || !parse_element_kind(kind.text)) {
          lex_.fail(kind.span, "unknown keyword " + describe(kind),
                    "context, quality_model, lesson or process_model");
        }
        const Token id = lex_.next();
        if (id.type != Tok::string && id.type != Tok::word) {
          lex_.fail(id.span, "expected element id after '" + kind.text + "'", "string");
        }
        expect_punct("{");
        body = lex_.mark();
        header_ = id.span;
        spans_.clear();
        const auto before = errors_.size();
        auto element = parse_body(*parse_element_kind(kind.text), id.text);
        if (errors_.size() == before) {
          for (const auto& v : validate_element(element)) {
            errors_.push_back(ParseError{span_for(v.field), v.message, std::nullopt});
          }
        }
        if (auto [it, inserted] = ids.emplace(id.text, id.span); !inserted) {
          errors_.push_back(ParseError{id.span,
                                       "duplicate id " + id.text + " (first defined at line " +
                                           std::to_string(it->second.line) + ")",
                                       std::nullopt});
        }
        if (errors_.size() == before) result.document.elements.push_back(std::move(element));
      } catch (const Failure& f) {
        errors_.push_back(f.error);
        recover(body);
      }
    }
    result.errors = std::move(errors_);
    if (!result.errors.empty()) result.document.elements.clear();
    return result;
  }

 private:
  void recover(const std::optional<Mark>& body) {
    if (body) {
      lex_.reset(*body);
      lex_.skip_block();
      return;
    }
    // Failed before the element opened: drop tokens up to the next block
    // and skip it.
    for (;;) {
      lex_.skip_space();
      if (lex_.at_end()) return;
      Token t;
      try {
        t = lex_.next();
      } catch (const Failure&) {
        continue;
      }
      if (t.type == Tok::punct && t.text == "{") {
        lex_.skip_block();
        return;
      }
    }
  }

  SourceSpan span_for(const std::string& field) const {
    if (auto it = spans_.find(field); it != spans_.end()) return it->second;
    if (const auto dot = field.rfind('.'); dot != std::string::npos) {
      if (auto it = spans_.find(field.substr(0, dot)); it != spans_.end()) return it->second;
    }
    if (const auto bracket = field.find('['); bracket != std::string::npos) {
      if (auto it = spans_.find(field.substr(0, bracket)); it != spans_.end()) return it->second;
    }
    return header_;
  }

  Element parse_body(ElementKind kind, const std::string& id) {
    switch (kind) {
      case ElementKind::context: return parse_context(id);
      case ElementKind::quality_model: return parse_quality_model(id);
      case ElementKind::lesson: return parse_lesson(id);
      case ElementKind::process_model: return parse_process_model(id);
    }
    return ProcessModelStub{};
  }

  // --- token helpers -------------------------------------------------------

  bool peek_punct(std::string_view p) {
    const Token t = lex_.peek_token();
    return t.type == Tok::punct && t.text == p;
  }

  Token expect_punct(std::string_view p) {
    const Token t = lex_.next();
    if (t.type != Tok::punct || t.text != p) {
      lex_.fail(t.span, "expected '" + std::string(p) + "', found " + describe(t),
                "'" + std::string(p) + "'");
    }
    return t;
  }

  Token expect_word(std::string_view what) {
    const Token t = lex_.next();
    if (t.type != Tok::word) {
      lex_.fail(t.span, "expected " + std::string(what) + ", found " + describe(t),
                std::string(what));
    }
    return t;
  }

  std::string expect_string(std::string_view what) {
    const Token t = lex_.next();
    if (t.type != Tok::string) {
      lex_.fail(t.span, "expected quoted " + std::string(what) + ", found " + describe(t),
                "string");
    }
    return t.text;
  }

  void expect_keyword(std::string_view keyword) {
    const Token t = lex_.next();
    if (t.type != Tok::word || t.text != keyword) {
      lex_.fail(t.span, "expected '" + std::string(keyword) + "', found " + describe(t),
                "'" + std::string(keyword) + "'");
    }
  }

  std::string expect_ref() {
    expect_punct("@");
    return expect_word("element id").text;
  }

  // Records a single-valued field; a second occurrence is an error.
  void once(std::set<std::string>& seen, const Token& key, const std::string& field) {
    if (!seen.insert(field).second) lex_.fail(key.span, "duplicate field '" + field + "'");
    spans_[field] = key.span;
  }

  void missing(const std::set<std::string>& seen, std::initializer_list<std::string_view> fields,
               std::string_view element) {
    for (auto f : fields) {
      if (!seen.count(std::string(f))) {
        errors_.push_back(ParseError{header_,
                                     "missing required field '" + std::string(f) + "' in " +
                                         std::string(element),
                                     std::string(f)});
      }
    }
  }

  // --- value parsers -------------------------------------------------------

  Significance parse_significance() {
    const Token kind = expect_word("significance kind");
    const auto parsed = parse_significance_kind(kind.text);
    if (!parsed) {
      lex_.fail(kind.span, "malformed significance: unknown kind '" + kind.text + "'",
                "formal_experiment, case_study or survey");
    }
    const Token open = lex_.next();
    if (open.type != Tok::punct || open.text != "(") {
      lex_.fail(open.span, "malformed significance: expected '(' after " + kind.text, "'('");
    }
    const Token count = lex_.next();
    bool digits = count.type == Tok::word && !count.text.empty() && count.text.size() <= 9;
    for (char c : count.text) digits = digits && c >= '0' && c <= '9';
    if (!digits || std::stoi(count.text) < 1) {
      lex_.fail(count.span, "malformed significance: count must be a positive integer",
                "positive integer");
    }
    const Token close = lex_.next();
    if (close.type != Tok::punct || close.text != ")") {
      lex_.fail(close.span, "malformed significance: expected ')'", "')'");
    }
    return Significance{*parsed, std::stoi(count.text)};
  }

  Date parse_date() {
    const Token t = lex_.next();
    if (t.type == Tok::word) {
      if (auto d = parse_iso_date(t.text)) return *d;
      static const std::regex us_style(R"((\d{1,2})-(\d{1,2})-(\d{4}))");
      std::smatch m;
      if (std::regex_match(t.text, m, us_style)) {
        const auto pad = [](const std::string& s) { return s.size() == 1 ? "0" + s : s; };
        lex_.fail(t.span,
                  "malformed date '" + t.text + "': dates must be ISO 8601, write " +
                      m[3].str() + "-" + pad(m[1].str()) + "-" + pad(m[2].str()),
                  "YYYY-MM-DD");
      }
    }
    lex_.fail(t.span, "malformed date " + describe(t), "YYYY-MM-DD");
  }

  template <typename ItemFn>
  void parse_list(ItemFn&& item) {
    expect_punct("[");
    if (peek_punct("]")) {
      lex_.next();
      return;
    }
    for (;;) {
      item();
      const Token sep = lex_.next();
      if (sep.type == Tok::punct && sep.text == "]") return;
      if (sep.type != Tok::punct || sep.text != ",") {
        lex_.fail(sep.span, "expected ',' or ']' in list, found " + describe(sep), "',' or ']'");
      }
    }
  }

  std::vector<std::string> parse_raw_list() {
    std::vector<std::string> out;
    parse_list([&] { out.push_back(lex_.raw_item().text); });
    return out;
  }

  std::vector<std::string> parse_ref_list() {
    std::vector<std::string> out;
    parse_list([&] { out.push_back(expect_ref()); });
    return out;
  }

  std::vector<std::string> parse_string_list() {
    std::vector<std::string> out;
    parse_list([&] { out.push_back(expect_string("document")); });
    return out;
  }

  // --- elements ------------------------------------------------------------

  CharacterizationVector parse_context(const std::string& id) {
    CharacterizationVector cv;
    cv.id = id;
    while (!peek_punct("}")) {
      const Token start = lex_.peek_token();
      if (start.type != Tok::string) {
        lex_.fail(start.span, "expected factor \"category\" / \"name\": \"value\", found " +
                                  describe(start),
                  "string");
      }
      Factor f;
      f.category = expect_string("factor category");
      expect_punct("/");
      f.name = expect_string("factor name");
      expect_punct(":");
      f.value = expect_string("factor value");
      spans_["factors[" + std::to_string(cv.factors.size()) + "]"] = start.span;
      cv.factors.push_back(std::move(f));
    }
    expect_punct("}");
    return cv;
  }

  void parse_goal(GqmGoal& goal) {
    expect_punct("{");
    std::set<std::string> seen;
    while (!peek_punct("}")) {
      const Token key = expect_word("goal facet");
      const std::string field = "goal." + key.text;
      if (key.text == "object") {
        once(seen, key, field);
        expect_punct(":");
        goal.object = expect_string("object");
      } else if (key.text == "purpose") {
        once(seen, key, field);
        expect_punct(":");
        goal.purpose = expect_string("purpose");
      } else if (key.text == "quality_focus") {
        once(seen, key, field);
        expect_punct(":");
        goal.quality_focus = expect_string("quality focus");
      } else if (key.text == "viewpoint") {
        once(seen, key, field);
        expect_punct(":");
        goal.viewpoint = expect_string("viewpoint");
      } else if (key.text == "context") {
        once(seen, key, field);
        expect_punct(":");
        goal.context = expect_ref();
      } else {
        lex_.fail(key.span, "unknown keyword '" + key.text + "' in goal",
                  "object, purpose, quality_focus, viewpoint or context");
      }
    }
    expect_punct("}");
    missing(seen, {"goal.object", "goal.purpose", "goal.viewpoint", "goal.context"},
            "goal");
    if (!seen.count("goal.quality_focus")) goal.quality_focus_derived = true;
  }

  IndicatorDef parse_indicator() {
    IndicatorDef ind;
    ind.name = expect_word("indicator name").text;
    expect_punct("=");
    const Token kind = expect_word("indicator kind");
    const auto parsed = parse_indicator_kind(kind.text);
    if (!parsed) {
      lex_.fail(kind.span, "unknown indicator kind '" + kind.text + "'",
                "distribution, cumulative_distribution, sum, mean or count");
    }
    ind.kind = *parsed;
    expect_punct("(");
    ind.value_metric = expect_word("value metric").text;
    while (peek_punct(",")) {
      lex_.next();
      const Token arg = expect_word("'by' or 'order'");
      expect_punct(":");
      if (arg.text == "by" && !ind.group_by) {
        ind.group_by = expect_word("group-by metric").text;
      } else if (arg.text == "order" && !ind.order) {
        ind.order = parse_raw_list();
      } else if (arg.text == "by" || arg.text == "order") {
        lex_.fail(arg.span, "duplicate indicator argument '" + arg.text + "'");
      } else {
        lex_.fail(arg.span, "unknown indicator argument '" + arg.text + "'", "by or order");
      }
    }
    expect_punct(")");
    return ind;
  }

  void parse_question(QualityModel& qm) {
    qm.question = expect_string("question");
    expect_punct("{");
    while (!peek_punct("}")) {
      const Token key = expect_word("'metric' or 'indicator'");
      if (key.text == "metric") {
        MetricDef m;
        m.name = expect_word("metric name").text;
        expect_punct(":");
        const Token scale = expect_word("scale");
        const auto parsed = parse_scale(scale.text);
        if (!parsed) {
          lex_.fail(scale.span, "unknown scale '" + scale.text + "'",
                    "category, hours, count, ratio or text");
        }
        m.scale = *parsed;
        spans_.emplace("metric[" + m.name + "]", key.span);
        qm.metrics.push_back(std::move(m));
      } else if (key.text == "indicator") {
        auto ind = parse_indicator();
        spans_.emplace("indicator", key.span);
        spans_.emplace("indicator[" + ind.name + "]", key.span);
        qm.indicators.push_back(std::move(ind));
      } else {
        lex_.fail(key.span, "unknown keyword '" + key.text + "' in question",
                  "metric or indicator");
      }
    }
    expect_punct("}");
  }

  LabeledText parse_labeled(const Token& key, bool cites) {
    LabeledText item;
    item.label = expect_word("label").text;
    if (cites) {
      expect_keyword("from");
      item.cites.push_back(expect_word("cited label").text);
      while (peek_punct(",")) {
        lex_.next();
        item.cites.push_back(expect_word("cited label").text);
      }
    }
    expect_punct(":");
    item.text = expect_string(key.text);
    spans_.emplace(key.text + "[" + item.label + "]", key.span);
    return item;
  }

  QualityModel parse_quality_model(const std::string& id) {
    QualityModel qm;
    qm.id = id;
    std::set<std::string> seen;
    while (!peek_punct("}")) {
      const Token key = expect_word("field name");
      const auto& k = key.text;
      if (k == "name") {
        once(seen, key, k);
        expect_punct(":");
        qm.name = expect_string("name");
      } else if (k == "type") {
        once(seen, key, k);
        expect_punct(":");
        const Token type = expect_word("model type");
        const auto parsed = parse_model_type(type.text);
        if (!parsed) {
          lex_.fail(type.span, "unknown model type '" + type.text + "'",
                    "project_oriented, process_oriented or product_oriented");
        }
        qm.type = *parsed;
        if (lex_.peek_token().type == Tok::string) qm.sub_kind = lex_.next().text;
      } else if (k == "significance") {
        once(seen, key, k);
        expect_punct(":");
        qm.significance = parse_significance();
      } else if (k == "period") {
        once(seen, key, k);
        expect_punct(":");
        qm.period.start = parse_date();
        const Token dots = lex_.next();
        if (dots.type != Tok::dotdot) {
          lex_.fail(dots.span, "expected '..' between period dates", "'..'");
        }
        qm.period.end = parse_date();
      } else if (k == "goal") {
        once(seen, key, k);
        parse_goal(qm.goal);
      } else if (k == "question") {
        once(seen, key, k);
        parse_question(qm);
      } else if (k == "observation") {
        qm.observations.push_back(parse_labeled(key, false));
      } else if (k == "interpretation") {
        qm.interpretations.push_back(parse_labeled(key, true));
      } else if (k == "consequence") {
        qm.consequences.push_back(parse_labeled(key, true));
      } else if (k == "references") {
        once(seen, key, k);
        expect_punct(":");
        qm.references = parse_ref_list();
      } else if (k == "docs") {
        once(seen, key, k);
        expect_punct(":");
        qm.additional_docs = parse_string_list();
      } else {
        lex_.fail(key.span, "unknown keyword '" + k + "' in quality_model",
                  "name, type, significance, period, goal, question, observation, "
                  "interpretation, consequence, references or docs");
      }
    }
    expect_punct("}");
    missing(seen, {"name", "type", "significance", "period", "goal", "question"},
            "quality_model");
    if (qm.goal.quality_focus_derived) qm.goal.quality_focus = derive_quality_focus(qm.sub_kind);
    return qm;
  }

  LessonLearned parse_lesson(const std::string& id) {
    LessonLearned ll;
    ll.id = id;
    std::set<std::string> seen;
    std::optional<std::string> observation;
    ProblemSolution ps;
    std::optional<Token> first_problem_field;
    auto text_field = [&](const Token& key) {
      once(seen, key, key.text);
      expect_punct(":");
      return expect_string(key.text);
    };
    while (!peek_punct("}")) {
      const Token key = expect_word("field name");
      const auto& k = key.text;
      if (k == "topic") {
        once(seen, key, k);
        expect_punct(":");
        ll.topic = parse_raw_list();
      } else if (k == "situation") {
        ll.situation = text_field(key);
      } else if (k == "significance") {
        once(seen, key, k);
        expect_punct(":");
        ll.significance = parse_significance();
      } else if (k == "context") {
        once(seen, key, k);
        expect_punct(":");
        ll.context = expect_ref();
      } else if (k == "observation") {
        observation = text_field(key);
      } else if (k == "problem") {
        ps.problem = text_field(key);
        if (!first_problem_field) first_problem_field = key;
      } else if (k == "cause") {
        ps.cause = text_field(key);
        if (!first_problem_field) first_problem_field = key;
      } else if (k == "solution_reactive") {
        ps.solution_reactive = text_field(key);
        if (!first_problem_field) first_problem_field = key;
      } else if (k == "solution_preventive") {
        ps.solution_preventive = text_field(key);
        if (!first_problem_field) first_problem_field = key;
      } else if (k == "log") {
        ps.log = text_field(key);
        if (!first_problem_field) first_problem_field = key;
      } else if (k == "references") {
        once(seen, key, k);
        expect_punct(":");
        ll.references = parse_ref_list();
      } else if (k == "docs") {
        once(seen, key, k);
        expect_punct(":");
        ll.additional_docs = parse_string_list();
      } else {
        lex_.fail(key.span, "unknown keyword '" + k + "' in lesson",
                  "topic, situation, significance, context, observation, problem, cause, "
                  "solution_reactive, solution_preventive, log, references or docs");
      }
    }
    expect_punct("}");
    missing(seen, {"topic", "situation", "significance", "context"}, "lesson");
    if (observation && first_problem_field) {
      lex_.fail(first_problem_field->span,
                "a lesson is either an observation or a problem/solution pair, not both");
    }
    if (observation) {
      ll.body = Observation{*observation};
    } else if (first_problem_field) {
      missing(seen, {"problem", "cause"}, "problem/solution lesson");
      ll.body = std::move(ps);
    } else {
      errors_.push_back(ParseError{header_, "missing required field 'observation' or 'problem' in lesson",
                                   "observation or problem"});
    }
    return ll;
  }

  ProcessModelStub parse_process_model(const std::string& id) {
    ProcessModelStub pm;
    pm.id = id;
    std::set<std::string> seen;
    while (!peek_punct("}")) {
      const Token key = expect_word("field name");
      if (key.text == "name") {
        once(seen, key, key.text);
        expect_punct(":");
        pm.name = expect_string("name");
      } else if (key.text == "phases") {
        once(seen, key, key.text);
        expect_punct(":");
        pm.phases = parse_raw_list();
      } else {
        lex_.fail(key.span, "unknown keyword '" + key.text + "' in process_model",
                  "name or phases");
      }
    }
    expect_punct("}");
    missing(seen, {"name", "phases"}, "process_model");
    return pm;
  }

  Lexer lex_;
  std::vector<ParseError> errors_;
  std::map<std::string, SourceSpan> spans_;
  SourceSpan header_;
};

}  // namespace

ParseResult parse(std::string_view text) { return Parser(text).run(); }

std::string format_error(std::string_view path, const ParseError& error) {
  std::string out = std::string(path) + ":" + std::to_string(error.span.line) + ":" +
                    std::to_string(error.span.column) + ": " + error.message;
  if (error.expected) out += " (expected " + *error.expected + ")";
  return out;
}

}  // namespace evb::dsl
