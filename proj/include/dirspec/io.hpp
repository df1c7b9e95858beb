#pragma once

#include <string>
#include <vector>

#include "dirspec/core.hpp"

namespace dirspec {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// ASCII grid format: p lines, each with p whitespace-separated values; a
// value is an integer or "a/b". File row r holds the cells with y = r, column
// c the cells with x = c. Blank lines and trailing whitespace are ignored.
std::string write_ascii(const RatGrid& g);
std::string write_ascii(const IntGrid& g);
RatGrid parse_ascii_grid(const std::string& text);
// Same, but rejects non-integer entries.
IntGrid parse_ascii_int_grid(const std::string& text);

// JSON grid format: {"p": <int>, "grid": [[...]]} with integer entries or
// rational strings "a/b". Round-trips bit-exactly through write/parse.
std::string write_json(const RatGrid& g);
std::string write_json(const IntGrid& g);
RatGrid parse_json_grid(const std::string& text);
IntGrid parse_json_int_grid(const std::string& text);

// Accepts either format: JSON when the first non-space byte is '{'.
RatGrid parse_grid_auto(const std::string& text);

// Raw whitespace-separated integer rows, not necessarily square. Used for
// partial tables that are not valid grids.
std::vector<std::vector<long long>> parse_int_rows(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dirspec
