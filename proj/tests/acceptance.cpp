// Acceptance run: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <type_traits>

#include "evb/dsl.hpp"
#include "evb/errors.hpp"
#include "evb/measurement.hpp"
#include "evb/model.hpp"
#include "evb/reporting.hpp"
#include "evb/repository.hpp"
#include "support.hpp"

using namespace evb;

namespace {

// Collects failed expectations; the first few are printed with the verdict.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  int total() const { return total_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  int total_ = 0;
  std::vector<std::string> failures_;
};

template <typename F>
std::optional<ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

Store fixture_store(const std::filesystem::path& root) {
  auto store = Store::open(root);
  for (const auto* name : test::kFixtureFiles) {
    for (const auto& e : dsl::parse(test::fixture_text(name)).document.elements) store.put(e);
  }
  return store;
}

IndicatorDef by_phase() {
  return IndicatorDef{"dist", IndicatorKind::cumulative_distribution, "effort", "phase", std::nullopt};
}

MeasurementDataset random_dataset(std::mt19937_64& rng) {
  static const std::vector<std::string> phases{"RP", "DP", "CP", "IP", "AP", "QA"};
  MeasurementDataset ds{"random", {}};
  const int n = std::uniform_int_distribution<int>(1, 20)(rng);
  for (int i = 0; i < n; ++i) {
    const auto& phase = phases[rng() % phases.size()];
    const std::int64_t h = rng() % 7 == 0 ? 0 : std::uniform_int_distribution<std::int64_t>(1, 99999)(rng);
    ds.rows.push_back(MeasurementRow{*parse_iso_date("2002-01-14"), phase, "developer",
                                     Decimal::from_hundredths(h)});
  }
  return ds;
}

bool has_effort(const MeasurementDataset& ds) {
  return std::any_of(ds.rows.begin(), ds.rows.end(),
                     [](const MeasurementRow& r) { return r.effort_hours.hundredths() > 0; });
}

// ---------------------------------------------------------------------------

void fixture_fidelity(Checks& c) {
  for (const auto* name : test::kFixtureFiles) {
    const auto text = test::fixture_text(name);
    const auto parsed = dsl::parse(text);
    c.expect(parsed.ok(), std::string(name) + " parses without errors");
    if (!parsed.ok()) continue;
    for (const auto& e : parsed.document.elements) {
      c.expect(validate_element(e).empty(), std::string(name) + " validates");
    }
    c.expect(dsl::serialize(parsed.document) == text, std::string(name) + " round-trips byte for byte");
  }
}

void indicator_oracle(Checks& c) {
  std::istringstream csv(test::fixture_text("table2_effort.csv"));
  const auto result = compute_indicator(test::table2().indicator(), ingest_csv(csv, "table2").dataset);
  const std::vector<double> hours{350, 350, 550, 150, 50};
  const std::vector<double> expected{24.14, 48.28, 86.21, 96.55, 100.00};
  double total = 0;
  for (const double h : hours) total += h;
  c.expect(result.rows.size() == hours.size(), "five phase rows");
  double running = 0;
  for (std::size_t i = 0; i < hours.size() && i < result.rows.size(); ++i) {
    running += hours[i];
    const double got = result.rows[i].cumulative_percent;
    c.expect(std::abs(got - expected[i]) <= 0.005, "cumulative " + std::to_string(i) + " = " + std::to_string(got));
    c.expect(std::abs(got - 100.0 * running / total) <= 0.005, "running-sum oracle " + std::to_string(i));
  }

  std::mt19937_64 rng(20011);
  for (int i = 0; i < 1000; ++i) {
    const auto ds = random_dataset(rng);
    if (!has_effort(ds)) continue;
    const auto r = compute_indicator(by_phase(), ds);
    // Brute force: per group, re-scan every row.
    std::vector<std::string> keys;
    double sum_all = 0;
    for (const auto& row : ds.rows) {
      if (std::find(keys.begin(), keys.end(), row.phase) == keys.end()) keys.push_back(row.phase);
      sum_all += row.effort_hours.to_double();
    }
    if (r.rows.size() != keys.size()) {
      c.expect(false, "random dataset " + std::to_string(i) + " group count");
      continue;
    }
    double percent_sum = 0;
    double cum = 0;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      double group = 0;
      for (const auto& row : ds.rows) {
        if (row.phase == keys[k]) group += row.effort_hours.to_double();
      }
      cum += group;
      c.expect(r.rows[k].key == keys[k], "group order");
      c.expect(std::abs(r.rows[k].percent - 100.0 * group / sum_all) < 1e-9, "group percent");
      c.expect(std::abs(r.rows[k].cumulative_percent - 100.0 * cum / sum_all) < 1e-9, "group cumulative");
      if (k > 0) c.expect(r.rows[k].cumulative_percent >= r.rows[k - 1].cumulative_percent, "non-decreasing");
      percent_sum += r.rows[k].percent;
    }
    c.expect(std::abs(percent_sum - 100.0) <= 1e-9, "percents sum to 100");
  }
}

void scale_equivariance(Checks& c) {
  // k ranges over the hundredths grid in (0, 100]; integral base hours keep
  // every scaled value representable with two decimals.
  std::mt19937_64 rng(4242);
  int cases = 0;
  while (cases < 500) {
    auto ds = random_dataset(rng);
    for (auto& r : ds.rows) r.effort_hours = Decimal::from_integer(r.effort_hours.hundredths() / 100);
    if (!has_effort(ds)) continue;
    ++cases;
    const std::int64_t k = std::uniform_int_distribution<std::int64_t>(1, 10000)(rng);
    auto scaled = ds;
    for (auto& r : scaled.rows) {
      r.effort_hours = Decimal::from_hundredths(r.effort_hours.hundredths() / 100 * k);
    }
    const auto a = compute_indicator(by_phase(), ds);
    const auto b = compute_indicator(by_phase(), scaled);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      c.expect(std::abs(a.rows[i].percent - b.rows[i].percent) <= 1e-9, "percent unchanged");
      c.expect(std::abs(a.rows[i].cumulative_percent - b.rows[i].cumulative_percent) <= 1e-9,
               "cumulative unchanged");
    }
  }
}

std::vector<std::string> ids(const std::vector<KeywordHit>& hits) {
  std::vector<std::string> out;
  for (const auto& h : hits) out.push_back(h.id);
  std::sort(out.begin(), out.end());
  return out;
}

void retrieval(Checks& c) {
  test::TempDir dir;
  auto store = Store::open(dir.path());
  store.put(test::table3());
  store.put(test::table4());
  c.expect(ids(store.find_by_keywords({"J2ME"})) == std::vector<std::string>{"LL1PX11", "LL1PXI2"},
           "J2ME returns both lessons");
  c.expect(ids(store.find_by_keywords({"push"})) == std::vector<std::string>{"LL1PXI2"},
           "push returns only the observation lesson");
  c.expect(store.find_by_keywords({"Symbian"}).empty(), "absent term returns nothing");
}

CharacterizationVector random_vector(std::mt19937_64& rng, std::string id) {
  CharacterizationVector cv{std::move(id), {}};
  for (int f = 0; f < 6; ++f) {
    if (rng() % 2 == 0) continue;
    cv.factors.push_back(Factor{f < 3 ? "Domain" : "Development", "F" + std::to_string(f),
                                std::string(1, static_cast<char>('a' + rng() % 3))});
  }
  if (cv.factors.empty()) cv.factors.push_back(Factor{"Domain", "F0", "a"});
  return cv;
}

void context_matching(Checks& c) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 25; ++round) {
    test::TempDir dir;
    auto store = Store::open(dir.path());
    std::vector<std::string> candidates;
    for (int i = 0; i < 8; ++i) {
      const auto cv = random_vector(rng, "CV" + std::to_string(i));
      store.put(cv);
      auto ll = test::table3();
      ll.id = "LL" + std::to_string(i);
      ll.context = cv.id;
      ll.significance = Significance{static_cast<SignificanceKind>(rng() % 3), 1 + static_cast<int>(rng() % 4)};
      store.put(ll);
      candidates.push_back(cv.id);
      candidates.push_back(ll.id);
    }
    for (int i = 0; i < 8; ++i) {
      const auto& self = std::get<CharacterizationVector>(*store.find("CV" + std::to_string(i)));
      c.expect(store.match_context(self, {self.id}).at(0).score == 1.0, "self match is 1.0");
    }
    const CharacterizationVector disjoint{"D", {Factor{"Other", "G", "z"}}};
    for (const auto& s : store.match_context(disjoint, candidates)) {
      c.expect(s.score == 0.0, "disjoint vector scores 0.0");
    }
    const auto query = random_vector(rng, "Q");
    const auto ranked = store.match_context(query, candidates);
    for (const auto& s : ranked) c.expect(s.score >= 0.0 && s.score <= 1.0, "score in [0,1]");
    for (int p = 0; p < 20; ++p) {
      std::shuffle(candidates.begin(), candidates.end(), rng);
      c.expect(store.match_context(query, candidates) == ranked, "ranking independent of candidate order");
    }
  }
}

void reference_integrity(Checks& c) {
  test::TempDir dir;
  auto store = Store::open(dir.path());
  store.put(test::table1());
  store.put(test::table2());
  const auto dangling = store.check_references();
  c.expect(dangling.size() == 1, "exactly one dangling reference");
  c.expect(!dangling.empty() && dangling[0] == DanglingReference{"WISE-QM3PX11", "PM1PX11"},
           "the dangling reference is PM1PX11");
  store.put(test::pm1px11());
  c.expect(store.check_references().empty(), "adding the stub clears it");
}

void lifecycle(Checks& c) {
  static_assert(!std::is_default_constructible_v<MeasurementProgram>);
  using Clock = MeasurementProgram::Clock;
  const auto t0 = Clock::time_point{};
  auto p = MeasurementProgram::begin("MP", "WISE-QM3PX11", t0);
  c.expect(p.step() == 1, "programs begin at step 1");
  for (int step = 1; step <= 6; ++step) {
    c.expect(p.step() == step, "at step " + std::to_string(step));
    c.expect(static_cast<int>(p.history().size()) == step, "history length");
    for (std::size_t i = 0; i < p.history().size(); ++i) {
      c.expect(p.history()[i].step == static_cast<int>(i) + 1, "no skipped step in history");
    }
    if (step < 6) {
      const auto next = advance_program(p, t0 + std::chrono::hours(step));
      c.expect(next.step() == step + 1, "advance moves exactly one step");
      c.expect(p.step() == step, "advance leaves the input untouched");
      p = next;
    } else {
      c.expect(error_code([&] { advance_program(p, t0); }) == ErrorCode::already_packaged,
               "advancing past step 6 is rejected");
    }
  }
}

void significance_algebra(Checks& c) {
  std::mt19937_64 rng(808);
  const auto random_sig = [&] {
    return Significance{static_cast<SignificanceKind>(rng() % 3), 1 + static_cast<int>(rng() % 50)};
  };
  for (int i = 0; i < 500; ++i) {
    const auto a = random_sig(), b = random_sig(), cc = random_sig();
    const auto ra = significance_rank(a), rb = significance_rank(b), rc = significance_rank(cc);
    c.expect((ra < rb) + (rb < ra) + (ra == rb) == 1, "trichotomy");
    if (ra <= rb && rb <= rc) c.expect(ra <= rc, "transitivity");
    if (ra <= rb && rb <= ra) c.expect(ra == rb, "antisymmetry");

    auto b2 = b, c2 = cc;
    b2.kind = c2.kind = a.kind;
    c.expect(merge_significance(a, b2) == merge_significance(b2, a), "merge commutes");
    c.expect(merge_significance(merge_significance(a, b2), c2) ==
                 merge_significance(a, merge_significance(b2, c2)),
             "merge associates");
    if (a.kind != b.kind) {
      c.expect(error_code([&] { merge_significance(a, b); }) == ErrorCode::kind_mismatch,
               "mixed kinds rejected");
    }
  }
}

void golden_reports(Checks& c) {
  const auto golden = [](const std::string& name) { return test::read_text(test::golden_dir() / name); };
  std::istringstream csv(test::fixture_text("table2_effort.csv"));
  const auto result = compute_indicator(test::table2().indicator(), ingest_csv(csv, "table2").dataset);
  c.expect(render_quality_model(test::table2(), result).body == golden("table2_quality_model.md"),
           "quality model report");
  c.expect(render_lesson(test::table3()).body == golden("table3_lesson.md"), "observation lesson report");
  c.expect(render_lesson(test::table4()).body == golden("table4_lesson.md"), "problem/solution lesson report");

  test::TempDir dir;
  const auto store = fixture_store(dir.path());
  const Significance one{SignificanceKind::case_study, 1};
  std::string sentences;
  sentences += render_evidence_statement(store.make_evidence_statement(
                   EvidenceKind::technology_applied, "J2ME", "CV3PXI2", "WISE-QM3PX11", one)) + "\n";
  sentences += render_evidence_statement(store.make_evidence_statement(
                   EvidenceKind::process_followed, "PM1PX11", "CV1PX11", std::nullopt, one)) + "\n";
  sentences += render_evidence_statement(store.make_evidence_statement(
                   EvidenceKind::problem_solved, "LL1PX11", "CV1PX11", std::nullopt, one)) + "\n";
  c.expect(sentences == golden("evidence_statements.txt"), "evidence statements");
  c.expect(sentences.find("arose and was solved within the context") != std::string::npos,
           "problem sentence wording");
}

struct Criterion {
  const char* id;
  const char* name;
  double budget_seconds;  // 0 = no runtime bound
  std::function<void(Checks&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "fixture fidelity", 1.0, fixture_fidelity},
      {"AC2", "indicator oracle", 5.0, indicator_oracle},
      {"AC3", "scale equivariance", 0, scale_equivariance},
      {"AC4", "keyword retrieval", 0, retrieval},
      {"AC5", "context matching", 0, context_matching},
      {"AC6", "reference integrity", 0, reference_integrity},
      {"AC7", "program lifecycle", 0, lifecycle},
      {"AC8", "significance algebra", 0, significance_algebra},
      {"AC9", "golden reports", 0, golden_reports},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    std::string crash;
    try {
      criterion.run(checks);
    } catch (const std::exception& e) {
      crash = e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = criterion.budget_seconds == 0 || seconds < criterion.budget_seconds;
    const bool pass = checks.ok() && crash.empty() && in_time;
    if (!pass) ++failed;

    std::cout << (pass ? "[PASS] " : "[FAIL] ") << criterion.id << " " << criterion.name << ": "
              << checks.total() - static_cast<int>(checks.failures().size()) << "/" << checks.total()
              << " checks, " << std::fixed << std::setprecision(3) << seconds << " s";
    if (criterion.budget_seconds > 0) std::cout << " (limit " << criterion.budget_seconds << " s)";
    std::cout << "\n";
    if (!crash.empty()) std::cout << "       exception: " << crash << "\n";
    if (!in_time) std::cout << "       over the time limit\n";
    for (std::size_t i = 0; i < checks.failures().size() && i < 5; ++i) {
      std::cout << "       failed: " << checks.failures()[i] << "\n";
    }
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
