#pragma once

// Markdown renderings laid out like the packaging templates: a two-column
// Field | Value table per element. Output is deterministic.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "evb/measurement.hpp"
#include "evb/model.hpp"

namespace evb {

struct Report {
  std::string title;
  std::string body;  // Markdown, LF line endings
};

// When `result` is given the Indicator row embeds its table (key, value,
// cumulated percent); otherwise it carries the question alone.
Report render_quality_model(const QualityModel& qm,
                            const std::optional<IndicatorResult>& result = std::nullopt);
Report render_lesson(const LessonLearned& ll);
Report render_vector(const CharacterizationVector& cv);
Report render_process_model(const ProcessModelStub& pm);

std::string render_evidence_statement(const EvidenceStatement& es);

// Kerth's retrospective questions, in order.
const std::array<std::string_view, 4>& retrospective_questions();

}  // namespace evb
