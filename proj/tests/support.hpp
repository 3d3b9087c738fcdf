#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "evb/dsl.hpp"
#include "evb/model.hpp"

namespace evb::test {

inline std::filesystem::path fixture_dir() { return EVB_FIXTURE_DIR; }
inline std::filesystem::path golden_dir() { return EVB_GOLDEN_DIR; }

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string fixture_text(const std::string& name) { return read_text(fixture_dir() / name); }

// Parses a fixture file holding exactly one element of type T.
template <typename T>
T fixture(const std::string& name) {
  auto parsed = dsl::parse(fixture_text(name));
  if (!parsed.ok()) {
    throw std::runtime_error(dsl::format_error(name, parsed.errors.front()));
  }
  return std::get<T>(parsed.document.elements.at(0));
}

inline CharacterizationVector table1() { return fixture<CharacterizationVector>("table1_context.evb"); }
inline CharacterizationVector pilot_x_iteration2() {
  return fixture<CharacterizationVector>("pilot_x_iteration2_context.evb");
}
inline QualityModel table2() { return fixture<QualityModel>("table2_quality_model.evb"); }
inline LessonLearned table3() { return fixture<LessonLearned>("table3_observation.evb"); }
inline LessonLearned table4() { return fixture<LessonLearned>("table4_problem_solution.evb"); }
inline ProcessModelStub pm1px11() { return fixture<ProcessModelStub>("process_model_pm1px11.evb"); }

inline const char* const kFixtureFiles[] = {
    "table1_context.evb",        "table2_quality_model.evb",   "table3_observation.evb",
    "table4_problem_solution.evb", "pilot_x_iteration2_context.evb", "process_model_pm1px11.evb",
};

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("evb-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace evb::test
