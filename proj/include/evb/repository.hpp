#pragma once

// On-disk experience base.
//
// Layout: one canonical `.evb` file per element at <root>/<kind>/<id>.evb and
// one canonical CSV per measurement dataset at <root>/dataset/<id>.csv.
// Indices live in memory and are rebuilt by scanning on open.
//
// Any number of readers may open the same root; writers must be serialised
// by the caller. Each write lands atomically (temporary file + rename).

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "evb/measurement.hpp"
#include "evb/model.hpp"

namespace evb {

struct KeywordHit {
  std::string id;
  int matched = 0;  // distinct query keywords found in the lesson's topic

  bool operator==(const KeywordHit&) const = default;
};

struct MatchScore {
  std::string id;
  double score = 0;  // matched / query_count, in [0, 1]
  int matched = 0;
  int query_count = 0;

  bool operator==(const MatchScore&) const = default;
};

struct DanglingReference {
  std::string source;
  std::string missing;

  bool operator==(const DanglingReference&) const = default;
};

// True when the whitespace-separated tokens of `query` occur as a contiguous
// run in `keyword`, ignoring ASCII case. "push" matches "Push technology";
// "UD" does not match "UDP".
bool keyword_matches(std::string_view query, std::string_view keyword);

class Store {
 public:
  // Scans `root`. A missing root is an empty store; it is created on the
  // first write. Throws Error{parse_failed} for a file that does not parse
  // or does not sit where its kind and id say it should.
  static Store open(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Throws Error{validation_failed} or Error{duplicate_id}; the store is
  // unchanged when it throws.
  std::string put(const Element& element, bool overwrite = false);

  const Element* find(std::string_view id) const;
  std::vector<std::string> ids() const;
  std::size_t size() const { return elements_.size(); }
  std::filesystem::path path_of(ElementKind kind, std::string_view id) const;

  // Lessons whose topic matches at least one keyword, ranked by matched
  // count, then significance, then id.
  std::vector<KeywordHit> find_by_keywords(const std::vector<std::string>& keywords) const;

  // Shared (category, name, value) triples over query triples. Candidates
  // are scored through their context vector; a vector scores itself.
  // Throws Error{unresolved_context}.
  std::vector<MatchScore> match_context(const CharacterizationVector& query,
                                        const std::vector<std::string>& candidates) const;

  // Every context or `@id` reference that names no stored element, sorted.
  std::vector<DanglingReference> check_references() const;

  // For technology_applied the subject is the technology name and a result
  // quality model is required; otherwise the subject is a stored process
  // model (process_followed) or problem/solution lesson (problem_solved)
  // and no result may be given.
  EvidenceStatement make_evidence_statement(EvidenceKind kind, const std::string& subject,
                                            const std::string& context,
                                            const std::optional<std::string>& result,
                                            const Significance& significance) const;

  void put_dataset(const MeasurementDataset& ds, bool overwrite = false);
  std::optional<MeasurementDataset> dataset(std::string_view id) const;

 private:
  explicit Store(std::filesystem::path root) : root_(std::move(root)) {}

  void index(const Element& element);
  void unindex(const std::string& id);

  std::filesystem::path root_;
  std::map<std::string, Element, std::less<>> elements_;
  // Lowercased keyword tokens -> lesson ids.
  std::map<std::string, std::set<std::string>, std::less<>> keyword_index_;
};

}  // namespace evb
