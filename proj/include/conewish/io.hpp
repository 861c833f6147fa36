#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "conewish/cone.hpp"

namespace conewish::io {

/// Text form: one "a < b" cover per line, "#" starts a comment, a line with
/// a single label declares an isolated element. Chains "a < b < c" are
/// accepted. Labels are declared in order of first appearance.
Poset parse_poset_text(const std::string& text);
/// JSON form: {"labels": [...], "covers": [[a, b], ...]}.
Poset parse_poset_json(const nlohmann::json& j);
/// Dispatches on content: JSON when the first non-blank character is '{'.
Poset parse_poset(const std::string& text);
Poset read_poset(const std::string& path);

std::string read_file(const std::string& path);

nlohmann::json poset_to_json(const Poset& p);

/// Dense CSV, header row of labels (any order), one row per label in header
/// order. Entries outside the mask must be zero.
StructuredMatrix parse_matrix_csv(const std::string& text, const PosetPtr& poset);
/// {"labels": [...], "values": [[...], ...]}.
StructuredMatrix parse_matrix_json(const nlohmann::json& j, const PosetPtr& poset);
StructuredMatrix parse_matrix(const std::string& text, const PosetPtr& poset);
StructuredMatrix read_matrix(const std::string& path, const PosetPtr& poset);

nlohmann::json matrix_to_json(const StructuredMatrix& m);
std::string matrix_to_csv(const StructuredMatrix& m);

/// Comma-separated numbers, e.g. "1,1,2,1".
std::vector<double> parse_number_list(const std::string& text);

/// Column names x_<i>_<j> for comparable j <= i in linear-extension order.
std::vector<std::string> sample_columns(const Poset& p);
void write_sample_header(std::ostream& os, const Poset& p);
void write_sample_row(std::ostream& os, const StructuredMatrix& x);

}  // namespace conewish::io
