#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace evb {

std::string_view trim(std::string_view text);
bool is_blank(std::string_view text);
std::string to_lower_ascii(std::string_view text);

// Splits on every occurrence of sep; an empty input yields one empty field.
std::vector<std::string> split(std::string_view text, char sep);

// Whitespace-separated tokens, lowercased.
std::vector<std::string> lower_tokens(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace evb
