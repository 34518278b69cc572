#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace ofdmse::detail {

/// Splits a line into whitespace-separated tokens, dropping any '#' comment.
inline std::vector<std::string> tokenize(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

/// Iterates non-blank records of a text stream with their 1-based line numbers.
template <class F>
void for_each_record(std::istream& in, F&& f) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        auto tokens = tokenize(line);
        if (!tokens.empty()) f(number, tokens);
    }
}

}  // namespace ofdmse::detail
