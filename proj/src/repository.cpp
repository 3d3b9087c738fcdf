#include "evb/repository.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "evb/dsl.hpp"
#include "evb/errors.hpp"
#include "evb/strings.hpp"

namespace evb {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kDatasetDir = "dataset";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_atomically(const fs::path& path, const std::string& content) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + path.parent_path().string());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::io_error, "cannot move " + tmp.string() + " into place");
  }
}

// Distinct lessons sort by significance descending, then id ascending.
bool ranks_before(const std::optional<Significance>& a, const std::string& a_id,
                  const std::optional<Significance>& b, const std::string& b_id) {
  const auto rank = [](const std::optional<Significance>& s) {
    return s ? significance_rank(*s) : SignificanceRank{-1, 0};
  };
  if (const auto cmp = rank(a) <=> rank(b); cmp != 0) return cmp > 0;
  return a_id < b_id;
}

}  // namespace

bool keyword_matches(std::string_view query, std::string_view keyword) {
  const auto needle = lower_tokens(query);
  const auto hay = lower_tokens(keyword);
  if (needle.empty() || needle.size() > hay.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

Store Store::open(fs::path root) {
  Store store(std::move(root));
  std::error_code ec;
  if (!fs::exists(store.root_, ec)) return store;
  if (!fs::is_directory(store.root_, ec)) {
    throw Error(ErrorCode::io_error, store.root_.string() + " is not a directory");
  }

  std::vector<fs::path> files;
  for (const auto kind : {ElementKind::context, ElementKind::quality_model, ElementKind::lesson,
                          ElementKind::process_model}) {
    const auto dir = store.root_ / std::string(to_string(kind));
    if (!fs::is_directory(dir, ec)) continue;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".evb") {
        files.push_back(entry.path());
      }
    }
  }
  std::sort(files.begin(), files.end());

  for (const auto& path : files) {
    const auto parsed = dsl::parse(read_file(path));
    if (!parsed.ok()) {
      throw Error(ErrorCode::parse_failed, dsl::format_error(path.string(), parsed.errors.front()));
    }
    if (parsed.document.elements.size() != 1) {
      throw Error(ErrorCode::parse_failed,
                  path.string() + ": expected exactly one element, found " +
                      std::to_string(parsed.document.elements.size()));
    }
    const auto& element = parsed.document.elements.front();
    const auto expected_dir = std::string(to_string(kind_of(element)));
    if (path.stem().string() != id_of(element) ||
        path.parent_path().filename().string() != expected_dir) {
      throw Error(ErrorCode::parse_failed, path.string() + ": element " + expected_dir + " " +
                                               id_of(element) + " belongs at " +
                                               store.path_of(kind_of(element), id_of(element)).string());
    }
    if (store.elements_.count(id_of(element))) {
      throw Error(ErrorCode::parse_failed, path.string() + ": id " + id_of(element) +
                                               " is already used by another element");
    }
    store.index(element);
  }
  return store;
}

fs::path Store::path_of(ElementKind kind, std::string_view id) const {
  return root_ / std::string(to_string(kind)) / (std::string(id) + ".evb");
}

void Store::index(const Element& element) {
  const auto& id = id_of(element);
  if (const auto* ll = std::get_if<LessonLearned>(&element)) {
    for (const auto& keyword : ll->topic) {
      for (const auto& token : lower_tokens(keyword)) keyword_index_[token].insert(id);
    }
  }
  elements_.insert_or_assign(id, element);
}

void Store::unindex(const std::string& id) {
  for (auto it = keyword_index_.begin(); it != keyword_index_.end();) {
    it->second.erase(id);
    it = it->second.empty() ? keyword_index_.erase(it) : std::next(it);
  }
  elements_.erase(id);
}

std::string Store::put(const Element& element, bool overwrite) {
  const auto& id = id_of(element);
  if (const auto violations = validate_element(element); !violations.empty()) {
    std::string message = "element " + id + " failed validation:";
    for (const auto& v : violations) message += "\n  " + v.field + ": " + v.message;
    throw Error(ErrorCode::validation_failed, message);
  }
  if (const auto* existing = find(id)) {
    if (!overwrite) throw Error(ErrorCode::duplicate_id, "element " + id + " already exists");
    if (kind_of(*existing) != kind_of(element)) {
      throw Error(ErrorCode::duplicate_id,
                  "element " + id + " already exists as a " +
                      std::string(to_string(kind_of(*existing))));
    }
  }
  write_atomically(path_of(kind_of(element), id), dsl::serialize(element));
  unindex(id);
  index(element);
  return id;
}

const Element* Store::find(std::string_view id) const {
  const auto it = elements_.find(id);
  return it == elements_.end() ? nullptr : &it->second;
}

std::vector<std::string> Store::ids() const {
  std::vector<std::string> out;
  out.reserve(elements_.size());
  for (const auto& [id, element] : elements_) out.push_back(id);
  return out;
}

std::vector<KeywordHit> Store::find_by_keywords(const std::vector<std::string>& keywords) const {
  // Normalise so that case and repeats in the query do not matter.
  std::set<std::string> queries;
  for (const auto& k : keywords) {
    auto tokens = lower_tokens(k);
    if (!tokens.empty()) queries.insert(join(tokens, " "));
  }

  std::set<std::string> candidates;
  for (const auto& q : queries) {
    const auto first = lower_tokens(q).front();
    if (const auto it = keyword_index_.find(first); it != keyword_index_.end()) {
      candidates.insert(it->second.begin(), it->second.end());
    }
  }

  std::vector<KeywordHit> hits;
  for (const auto& id : candidates) {
    const auto& lesson = std::get<LessonLearned>(*find(id));
    int matched = 0;
    for (const auto& q : queries) {
      const bool hit = std::any_of(lesson.topic.begin(), lesson.topic.end(),
                                   [&](const std::string& k) { return keyword_matches(q, k); });
      matched += hit ? 1 : 0;
    }
    if (matched > 0) hits.push_back(KeywordHit{id, matched});
  }

  std::sort(hits.begin(), hits.end(), [this](const KeywordHit& a, const KeywordHit& b) {
    if (a.matched != b.matched) return a.matched > b.matched;
    return ranks_before(significance_of(*find(a.id)), a.id, significance_of(*find(b.id)), b.id);
  });
  return hits;
}

std::vector<MatchScore> Store::match_context(const CharacterizationVector& query,
                                             const std::vector<std::string>& candidates) const {
  const std::set<Factor, bool (*)(const Factor&, const Factor&)> wanted(
      query.factors.begin(), query.factors.end(), [](const Factor& a, const Factor& b) {
        return std::tie(a.category, a.name, a.value) < std::tie(b.category, b.name, b.value);
      });
  const int query_count = static_cast<int>(wanted.size());

  const std::set<std::string> unique(candidates.begin(), candidates.end());
  std::vector<MatchScore> scores;
  for (const auto& id : unique) {
    const Element* element = find(id);
    const auto context_id = element ? context_of(*element) : std::nullopt;
    const Element* context = context_id ? find(*context_id) : nullptr;
    const auto* cv = context ? std::get_if<CharacterizationVector>(context) : nullptr;
    if (cv == nullptr) {
      throw Error(ErrorCode::unresolved_context,
                  "candidate " + id + " has no resolvable context vector");
    }
    int matched = 0;
    for (const auto& f : cv->factors) matched += wanted.count(f) > 0 ? 1 : 0;
    const double score =
        query_count == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(query_count);
    scores.push_back(MatchScore{id, score, matched, query_count});
  }

  std::sort(scores.begin(), scores.end(), [this](const MatchScore& a, const MatchScore& b) {
    // Same denominator throughout, so the integer count orders exactly.
    if (a.matched != b.matched) return a.matched > b.matched;
    return ranks_before(significance_of(*find(a.id)), a.id, significance_of(*find(b.id)), b.id);
  });
  return scores;
}

std::vector<DanglingReference> Store::check_references() const {
  std::set<std::pair<std::string, std::string>> dangling;
  const auto check = [&](const std::string& source, const std::string& target) {
    if (!find(target)) dangling.emplace(source, target);
  };
  for (const auto& [id, element] : elements_) {
    if (const auto* qm = std::get_if<QualityModel>(&element)) {
      check(id, qm->goal.context);
      for (const auto& ref : qm->references) check(id, ref);
    } else if (const auto* ll = std::get_if<LessonLearned>(&element)) {
      check(id, ll->context);
      for (const auto& ref : ll->references) check(id, ref);
    }
  }
  std::vector<DanglingReference> out;
  for (const auto& [source, missing] : dangling) out.push_back(DanglingReference{source, missing});
  return out;
}

EvidenceStatement Store::make_evidence_statement(EvidenceKind kind, const std::string& subject,
                                                 const std::string& context,
                                                 const std::optional<std::string>& result,
                                                 const Significance& significance) const {
  if (significance.count < 1) {
    throw Error(ErrorCode::validation_failed, "significance count must be at least 1");
  }

  EvidenceStatement es;
  es.kind = kind;
  es.subject = subject;
  es.context = context;
  es.result = result;
  es.significance = significance;

  switch (kind) {
    case EvidenceKind::technology_applied:
      if (is_blank(subject)) {
        throw Error(ErrorCode::unresolved_subject, "technology name must not be empty");
      }
      es.technology = TechnologyRef{subject, std::nullopt};
      break;
    case EvidenceKind::process_followed:
    case EvidenceKind::problem_solved: {
      const Element* element = find(subject);
      if (element == nullptr) {
        throw Error(ErrorCode::unresolved_subject, "subject " + subject + " is not in the store");
      }
      const bool fits =
          kind == EvidenceKind::process_followed
              ? std::holds_alternative<ProcessModelStub>(*element)
              : std::holds_alternative<LessonLearned>(*element) &&
                    !std::get<LessonLearned>(*element).is_observation();
      if (!fits) {
        throw Error(ErrorCode::subject_kind_mismatch,
                    "subject " + subject + " is a " + std::string(to_string(kind_of(*element))) +
                        (kind == EvidenceKind::process_followed
                             ? ", expected a process model"
                             : ", expected a problem/solution lesson"));
      }
      break;
    }
  }

  const Element* cv = find(context);
  if (cv == nullptr || !std::holds_alternative<CharacterizationVector>(*cv)) {
    throw Error(ErrorCode::unresolved_context,
                "context " + context + " is not a stored characterization vector");
  }

  if (kind == EvidenceKind::technology_applied) {
    if (!result) {
      throw Error(ErrorCode::missing_result, "technology_applied evidence needs a result model");
    }
    const Element* qm = find(*result);
    if (qm == nullptr || !std::holds_alternative<QualityModel>(*qm)) {
      throw Error(ErrorCode::unresolved_result,
                  "result " + *result + " is not a stored quality model");
    }
  } else if (result) {
    throw Error(ErrorCode::unexpected_result,
                std::string(to_string(kind)) + " evidence takes no result");
  }
  return es;
}

void Store::put_dataset(const MeasurementDataset& ds, bool overwrite) {
  if (!is_valid_id(ds.id)) throw Error(ErrorCode::validation_failed, "invalid dataset id '" + ds.id + "'");
  const auto path = root_ / std::string(kDatasetDir) / (ds.id + ".csv");
  std::error_code ec;
  if (!overwrite && fs::exists(path, ec)) {
    throw Error(ErrorCode::duplicate_id, "dataset " + ds.id + " already exists");
  }
  write_atomically(path, to_csv(ds));
}

std::optional<MeasurementDataset> Store::dataset(std::string_view id) const {
  if (!is_valid_id(id)) return std::nullopt;
  const auto path = root_ / std::string(kDatasetDir) / (std::string(id) + ".csv");
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  std::istringstream in(read_file(path));
  auto ingested = ingest_csv(in, std::string(id));
  if (!ingested.errors.empty()) {
    throw Error(ErrorCode::parse_failed, path.string() + ":" +
                                             std::to_string(ingested.errors.front().line) + ": " +
                                             ingested.errors.front().message);
  }
  return std::move(ingested.dataset);
}

}  // namespace evb
