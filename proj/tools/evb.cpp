// evb: command-line front end for the experience base.
//
// Exit codes: 0 success, 1 validation or parse failures, 2 usage error,
// 3 I/O or store error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "evb/dsl.hpp"
#include "evb/errors.hpp"
#include "evb/measurement.hpp"
#include "evb/reporting.hpp"
#include "evb/repository.hpp"
#include "evb/strings.hpp"

namespace {

enum Exit : int { kOk = 0, kInvalid = 1, kUsage = 2, kStoreError = 3 };

std::string default_store() {
  if (const char* env = std::getenv("EVB_STORE"); env != nullptr && *env != '\0') return env;
  return "./evb-store";
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buf.str();
}

// Library errors that stem from bad input map to 1; the rest are store or
// I/O trouble.
int exit_for(const evb::Error& e) {
  switch (e.code()) {
    case evb::ErrorCode::io_error:
    case evb::ErrorCode::parse_failed:
    case evb::ErrorCode::duplicate_id:
    case evb::ErrorCode::not_found:
      return kStoreError;
    default:
      return kInvalid;
  }
}

int fail(const evb::Error& e) {
  std::cerr << "evb: " << evb::to_string(e.code()) << ": " << e.what() << "\n";
  return exit_for(e);
}

int cmd_validate(const std::vector<std::string>& paths) {
  bool unreadable = false;
  std::size_t problems = 0;
  for (const auto& path : paths) {
    const auto text = read_file(path);
    if (!text) {
      std::cerr << path << ": cannot read file\n";
      unreadable = true;
      continue;
    }
    const auto parsed = evb::dsl::parse(*text);
    for (const auto& err : parsed.errors) std::cerr << evb::dsl::format_error(path, err) << "\n";
    problems += parsed.errors.size();
  }
  if (unreadable) return kStoreError;
  return problems == 0 ? kOk : kInvalid;
}

int cmd_ingest(const std::string& csv, const std::string& dataset_id, const std::string& root,
               bool overwrite) {
  std::ifstream in(csv, std::ios::binary);
  if (!in) {
    std::cerr << csv << ": cannot read file\n";
    return kStoreError;
  }
  if (!evb::is_valid_id(dataset_id)) {
    std::cerr << "evb: invalid dataset id '" << dataset_id << "'\n";
    return kInvalid;
  }
  evb::IngestResult ingested;
  try {
    ingested = evb::ingest_csv(in, dataset_id);
  } catch (const evb::Error& e) {
    std::cerr << csv << ":1: " << e.what() << "\n";
    return kInvalid;
  }
  for (const auto& err : ingested.errors) {
    std::cerr << csv << ":" << err.line << ": " << err.message << "\n";
  }
  try {
    auto store = evb::Store::open(root);
    store.put_dataset(ingested.dataset, overwrite);
  } catch (const evb::Error& e) {
    return fail(e);
  }
  std::cout << dataset_id << "\t" << ingested.dataset.rows.size() << " rows\n";
  return ingested.errors.empty() ? kOk : kInvalid;
}

const evb::QualityModel* find_model(const evb::Store& store, const std::string& id) {
  const auto* element = store.find(id);
  return element ? std::get_if<evb::QualityModel>(element) : nullptr;
}

int cmd_indicator(const std::string& model_id, const std::string& dataset_id,
                  const std::string& root) {
  try {
    const auto store = evb::Store::open(root);
    const auto* qm = find_model(store, model_id);
    if (qm == nullptr) {
      std::cerr << "evb: no quality model " << model_id << " in " << root << "\n";
      return kStoreError;
    }
    const auto ds = store.dataset(dataset_id);
    if (!ds) {
      std::cerr << "evb: no dataset " << dataset_id << " in " << root << "\n";
      return kStoreError;
    }
    const auto answer = evb::evaluate_question(*qm, *ds);
    std::cout << "# " << answer.question << "\n";
    std::cout << "key\tvalue\tpercent\tcumulative_percent\n";
    for (const auto& row : answer.result.rows) {
      std::cout << row.key << "\t" << evb::format_fixed2(row.value) << "\t"
                << evb::format_fixed2(row.percent) << "\t"
                << evb::format_fixed2(row.cumulative_percent) << "\n";
    }
    return kOk;
  } catch (const evb::Error& e) {
    return fail(e);
  }
}

int cmd_put(const std::string& path, const std::string& root, bool overwrite) {
  const auto text = read_file(path);
  if (!text) {
    std::cerr << path << ": cannot read file\n";
    return kStoreError;
  }
  const auto parsed = evb::dsl::parse(*text);
  for (const auto& err : parsed.errors) std::cerr << evb::dsl::format_error(path, err) << "\n";
  if (!parsed.ok()) return kInvalid;
  try {
    auto store = evb::Store::open(root);
    if (!overwrite) {
      for (const auto& element : parsed.document.elements) {
        if (store.find(evb::id_of(element))) {
          std::cerr << "evb: DuplicateId: element " << evb::id_of(element)
                    << " already exists (use --overwrite)\n";
          return kStoreError;
        }
      }
    }
    for (const auto& element : parsed.document.elements) {
      std::cout << store.put(element, overwrite) << "\n";
    }
    return kOk;
  } catch (const evb::Error& e) {
    return fail(e);
  }
}

int cmd_query(const std::string& keywords, const std::string& context_id, std::size_t top,
              const std::string& root) {
  if (keywords.empty() && context_id.empty()) {
    std::cerr << "evb query: one of --keywords or --context is required\n";
    return kUsage;
  }
  try {
    const auto store = evb::Store::open(root);
    std::vector<std::pair<std::string, double>> lines;

    std::optional<std::vector<std::string>> candidates;
    if (!keywords.empty()) {
      std::vector<std::string> terms;
      std::set<std::string> distinct;
      for (const auto& k : evb::split(keywords, ',')) {
        if (evb::is_blank(k)) continue;
        terms.push_back(k);
        distinct.insert(evb::join(evb::lower_tokens(k), " "));
      }
      if (terms.empty()) {
        std::cerr << "evb query: --keywords needs at least one keyword\n";
        return kUsage;
      }
      candidates.emplace();
      for (const auto& hit : store.find_by_keywords(terms)) {
        candidates->push_back(hit.id);
        lines.emplace_back(hit.id, static_cast<double>(hit.matched) /
                                       static_cast<double>(distinct.size()));
      }
    }

    if (!context_id.empty()) {
      const auto* element = store.find(context_id);
      const auto* query = element ? std::get_if<evb::CharacterizationVector>(element) : nullptr;
      if (query == nullptr) {
        std::cerr << "evb: no characterization vector " << context_id << " in " << root << "\n";
        return kStoreError;
      }
      if (!candidates) {
        candidates.emplace();
        for (const auto& id : store.ids()) {
          const auto kind = evb::kind_of(*store.find(id));
          if (kind == evb::ElementKind::quality_model || kind == evb::ElementKind::lesson) {
            candidates->push_back(id);
          }
        }
      }
      std::vector<std::string> resolvable;
      for (const auto& id : *candidates) {
        const auto ctx = evb::context_of(*store.find(id));
        const auto* cv = ctx ? store.find(*ctx) : nullptr;
        if (cv != nullptr && std::holds_alternative<evb::CharacterizationVector>(*cv)) {
          resolvable.push_back(id);
        } else {
          std::cerr << "evb: skipping " << id << ": context does not resolve\n";
        }
      }
      lines.clear();
      for (const auto& score : store.match_context(*query, resolvable)) {
        lines.emplace_back(score.id, score.score);
      }
    }

    if (top > 0 && lines.size() > top) lines.resize(top);
    for (const auto& [id, score] : lines) {
      std::cout << id << "\t" << evb::format_fixed2(score) << "\n";
    }
    return kOk;
  } catch (const evb::Error& e) {
    return fail(e);
  }
}

int cmd_report(const std::string& id, const std::string& out_path, const std::string& dataset_id,
               const std::string& root) {
  try {
    const auto store = evb::Store::open(root);
    const auto* element = store.find(id);
    if (element == nullptr) {
      std::cerr << "evb: no element " << id << " in " << root << "\n";
      return kStoreError;
    }
    evb::Report report;
    if (const auto* qm = std::get_if<evb::QualityModel>(element)) {
      std::optional<evb::IndicatorResult> result;
      if (!dataset_id.empty()) {
        const auto ds = store.dataset(dataset_id);
        if (!ds) {
          std::cerr << "evb: no dataset " << dataset_id << " in " << root << "\n";
          return kStoreError;
        }
        result = evb::evaluate_question(*qm, *ds).result;
      }
      report = evb::render_quality_model(*qm, result);
    } else if (const auto* ll = std::get_if<evb::LessonLearned>(element)) {
      report = evb::render_lesson(*ll);
    } else if (const auto* cv = std::get_if<evb::CharacterizationVector>(element)) {
      report = evb::render_vector(*cv);
    } else {
      report = evb::render_process_model(std::get<evb::ProcessModelStub>(*element));
    }

    if (out_path.empty()) {
      std::cout << report.body;
      return kOk;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    out << report.body;
    if (!out) {
      std::cerr << out_path << ": cannot write file\n";
      return kStoreError;
    }
    return kOk;
  } catch (const evb::Error& e) {
    return fail(e);
  }
}

int cmd_refs(const std::string& root) {
  try {
    const auto store = evb::Store::open(root);
    const auto dangling = store.check_references();
    for (const auto& d : dangling) std::cout << d.source << "\t" << d.missing << "\n";
    return dangling.empty() ? kOk : kInvalid;
  } catch (const evb::Error& e) {
    return fail(e);
  }
}

int cmd_retro() {
  for (const auto q : evb::retrospective_questions()) std::cout << q << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experience base: capture, validate, evaluate and retrieve evidence"};
  app.require_subcommand(1);

  std::string store = default_store();
  const auto add_store = [&store](CLI::App* cmd) {
    cmd->add_option("--store", store, "Store root (default: $EVB_STORE or ./evb-store)");
  };

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "Parse and validate .evb files");
  validate->add_option("paths", validate_paths, ".evb files")->required();

  std::string csv;
  std::string dataset;
  bool overwrite = false;
  auto* ingest = app.add_subcommand("ingest", "Load a data-collection CSV into the store");
  ingest->add_option("--csv", csv, "CSV file with header date,phase,role,effort_hours")->required();
  ingest->add_option("--dataset", dataset, "Dataset id")->required();
  ingest->add_flag("--overwrite", overwrite, "Replace an existing dataset");
  add_store(ingest);

  std::string model;
  auto* indicator = app.add_subcommand("indicator", "Evaluate a quality model's indicator");
  indicator->add_option("--model", model, "Quality model id")->required();
  indicator->add_option("--dataset", dataset, "Dataset id")->required();
  add_store(indicator);

  std::string put_path;
  auto* put = app.add_subcommand("put", "Store every element of an .evb file");
  put->add_option("path", put_path, ".evb file")->required();
  put->add_flag("--overwrite", overwrite, "Replace elements with the same id");
  add_store(put);

  std::string keywords;
  std::string context;
  std::size_t top = 0;
  auto* query = app.add_subcommand("query", "Search lessons by keyword and/or rank by context");
  query->add_option("--keywords", keywords, "Comma-separated topic keywords");
  query->add_option("--context", context, "Characterization vector id to match against");
  query->add_option("--top", top, "Print at most N hits")->check(CLI::PositiveNumber);
  add_store(query);

  std::string report_id;
  std::string out_path;
  auto* report = app.add_subcommand("report", "Render an element as Markdown");
  report->add_option("--id", report_id, "Element id")->required();
  report->add_option("--out", out_path, "Write to this file instead of standard output");
  report->add_option("--dataset", dataset, "Dataset for a quality model's indicator table");
  add_store(report);

  auto* refs = app.add_subcommand("refs", "List references that resolve to no stored element");
  add_store(refs);

  auto* retro = app.add_subcommand("retro", "Print the retrospective questions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (validate->parsed()) return cmd_validate(validate_paths);
  if (ingest->parsed()) return cmd_ingest(csv, dataset, store, overwrite);
  if (indicator->parsed()) return cmd_indicator(model, dataset, store);
  if (put->parsed()) return cmd_put(put_path, store, overwrite);
  if (query->parsed()) return cmd_query(keywords, context, top, store);
  if (report->parsed()) return cmd_report(report_id, out_path, dataset, store);
  if (refs->parsed()) return cmd_refs(store);
  if (retro->parsed()) return cmd_retro();
  return kUsage;
}
