#include "conewish/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "conewish/error.hpp"

namespace conewish::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

bool valid_label(const std::string& s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == ','; });
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("malformed number '" + s + "'", line);
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed number '" + s + "'", line);
  } catch (const std::out_of_range&) {
    throw ParseError("number out of range '" + s + "'", line);
  }
}

std::string json_label(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError("labels must be strings or integers");
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Poset parse_poset_text(const std::string& text) {
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::string>> edges;
  auto declare = [&labels](const std::string& l) {
    if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
  };
  std::istringstream is(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const std::string body = trim(raw.substr(0, raw.find('#')));
    if (body.empty()) continue;
    const auto parts = split(body, '<');
    for (const auto& part : parts)
      if (!valid_label(part)) throw ParseError("expected 'a < b' or a single label, got '" + body + "'", line);
    for (const auto& part : parts) declare(part);
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) edges.emplace_back(parts[k], parts[k + 1]);
  }
  if (labels.empty()) throw ParseError("poset declares no elements");
  return Poset::FromCoverEdges(labels, edges);
}

Poset parse_poset_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("labels")) throw ParseError("poset JSON needs a \"labels\" array");
  std::vector<std::string> labels;
  for (const auto& v : j.at("labels")) labels.push_back(json_label(v));
  std::vector<std::pair<std::string, std::string>> edges;
  if (j.contains("covers"))
    for (const auto& e : j.at("covers")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("each cover must be a pair [lower, upper]");
      edges.emplace_back(json_label(e[0]), json_label(e[1]));
    }
  return Poset::FromCoverEdges(labels, edges);
}

Poset parse_poset(const std::string& text) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    try {
      return parse_poset_json(nlohmann::json::parse(t));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid poset JSON: ") + e.what());
    }
  }
  return parse_poset_text(text);
}

Poset read_poset(const std::string& path) { return parse_poset(read_file(path)); }

nlohmann::json poset_to_json(const Poset& p) {
  nlohmann::json covers = nlohmann::json::array();
  for (const auto& [a, b] : p.cover_edges()) covers.push_back({p.label(a), p.label(b)});
  return {{"labels", p.labels()}, {"covers", covers}};
}

namespace {

StructuredMatrix from_labelled(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                               const PosetPtr& poset) {
  const Poset& p = *poset;
  if (header.size() != p.size())
    throw ParseError("matrix has " + std::to_string(header.size()) + " columns, poset has " +
                     std::to_string(p.size()) + " elements");
  if (rows.size() != header.size()) throw ParseError("matrix must be square");
  std::vector<Index> idx;
  for (const auto& l : header) idx.push_back(p.index_of(l));
  std::vector<Index> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ParseError("repeated label in header");
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd dense(n, n);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (rows[a].size() != header.size()) throw ParseError("row " + std::to_string(a + 1) + " has wrong length");
    for (std::size_t b = 0; b < rows[a].size(); ++b) dense(idx[a], idx[b]) = rows[a][b];
  }
  return StructuredMatrix(poset, std::move(dense));
}

}  // namespace

StructuredMatrix parse_matrix_csv(const std::string& text, const PosetPtr& poset) {
  std::istringstream is(text);
  std::string raw;
  std::size_t line = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, raw)) {
    ++line;
    const std::string body = trim(raw);
    if (body.empty() || body.front() == '#') continue;
    auto cells = split(body, ',');
    if (header.empty()) {
      header = cells;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c, line));
    rows.push_back(std::move(row));
  }
  return from_labelled(header, rows, poset);
}

StructuredMatrix parse_matrix_json(const nlohmann::json& j, const PosetPtr& poset) {
  if (!j.is_object() || !j.contains("values")) throw ParseError("matrix JSON needs a \"values\" array");
  std::vector<std::string> header;
  if (j.contains("labels"))
    for (const auto& v : j.at("labels")) header.push_back(json_label(v));
  else
    header = poset->labels();
  std::vector<std::vector<double>> rows;
  for (const auto& r : j.at("values")) rows.push_back(r.get<std::vector<double>>());
  return from_labelled(header, rows, poset);
}

StructuredMatrix parse_matrix(const std::string& text, const PosetPtr& poset) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    try {
      return parse_matrix_json(nlohmann::json::parse(t), poset);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid matrix JSON: ") + e.what());
    }
  }
  return parse_matrix_csv(text, poset);
}

StructuredMatrix read_matrix(const std::string& path, const PosetPtr& poset) {
  return parse_matrix(read_file(path), poset);
}

nlohmann::json matrix_to_json(const StructuredMatrix& m) {
  nlohmann::json values = nlohmann::json::array();
  for (Index i = 0; i < m.size(); ++i) {
    std::vector<double> row;
    for (Index j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    values.push_back(row);
  }
  return {{"labels", m.poset()->labels()}, {"values", values}};
}

std::string matrix_to_csv(const StructuredMatrix& m) {
  std::ostringstream os;
  os << std::setprecision(17);
  const auto& labels = m.poset()->labels();
  for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? "," : "") << labels[i];
  os << '\n';
  for (Index i = 0; i < m.size(); ++i) {
    for (Index j = 0; j < m.size(); ++j) os << (j ? "," : "") << m(i, j);
    os << '\n';
  }
  return os.str();
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& cell : split(text, ',')) {
    if (cell.empty()) throw ParseError("empty entry in number list '" + text + "'");
    out.push_back(parse_double(cell, 0));
  }
  return out;
}

std::vector<std::string> sample_columns(const Poset& p) {
  std::vector<std::string> cols;
  for (Index i = 0; i < p.size(); ++i)
    for (Index j = 0; j <= i; ++j)
      if (p.leq(j, i)) cols.push_back("x_" + p.label(i) + "_" + p.label(j));
  return cols;
}

void write_sample_header(std::ostream& os, const Poset& p) {
  const auto cols = sample_columns(p);
  for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
  os << '\n';
}

void write_sample_row(std::ostream& os, const StructuredMatrix& x) {
  const Poset& p = *x.poset();
  bool first = true;
  os << std::setprecision(17);
  for (Index i = 0; i < p.size(); ++i)
    for (Index j = 0; j <= i; ++j)
      if (p.leq(j, i)) {
        os << (first ? "" : ",") << x(i, j);
        first = false;
      }
  os << '\n';
}

}  // namespace conewish::io
