#pragma once

// Textual interchange format for experience elements (`.evb` files).
//
//   document := element*
//   element  := context | quality_model | lesson | process_model
//
//   context "CV1PX11" {
//     "Domain characteristics" / "Application type": "Computation-intensive system"
//   }
//
//   quality_model "WISE-QM3PX11" {
//     name: "..."
//     type: process_oriented "effort model"
//     significance: case_study(1)
//     period: 2001-07-22 .. 2002-12-31
//     goal { object: "..." purpose: "..." [quality_focus: "..."] viewpoint: "..." context: @CV1PX11 }
//     question "..." {
//       metric phase: category
//       metric effort: hours
//       indicator effort_distribution = cumulative_distribution(effort, by: phase, order: [RP, DP])
//     }
//     observation O1: "..."
//     interpretation I1 from O1: "..."
//     consequence C1 from I1: "..."
//     references: [@PM1PX11]
//     docs: ["..."]
//   }
//
//   lesson "LL1" {
//     topic: [J2ME, WAP 1.0, Push technology]
//     situation: "..."
//     significance: case_study(1)
//     context: @CV3PXI2
//     observation: "..."          | problem: "..." cause: "..." [solution_reactive: "..."]
//                                   [solution_preventive: "..."] [log: "..."]
//     references: [@...]
//     docs: ["..."]
//   }
//
//   process_model "PM1PX11" { name: "..." phases: [RP, DP, CP, IP, AP] }
//
// Strings are double-quoted with backslash escapes. Bare list items (topic,
// phases, order) run to the next ',' or ']' and are trimmed; quote them when
// they contain those characters. '#' starts a comment that runs to end of line.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evb/model.hpp"

namespace evb::dsl {

// Line and column are 1-based and count Unicode code points; length is in
// code points too.
struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;

  bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
  SourceSpan span;
  std::string message;
  std::optional<std::string> expected;
};

struct Document {
  std::vector<Element> elements;

  bool operator==(const Document&) const = default;
};

// Exactly one of the two is meaningful: on success `errors` is empty and
// `document` holds every element; on failure `document` is empty.
struct ParseResult {
  Document document;
  std::vector<ParseError> errors;

  bool ok() const { return errors.empty(); }
};

ParseResult parse(std::string_view text);

// Canonical form: fixed field order per element kind, two-space indentation,
// one blank line between elements, LF line endings.
std::string serialize(const Document& doc);
std::string serialize(const Element& element);

// "path:line:column: message (expected ...)"
std::string format_error(std::string_view path, const ParseError& error);

}  // namespace evb::dsl
