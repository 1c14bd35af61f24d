#include "shadowlp/instance_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace shadowlp {

using nlohmann::json;

namespace {

std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

Index read_count(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + name + "': expected an integer");
  const auto x = v.get<long long>();
  if (x <= 0) throw ParseError(std::string("field '") + name + "': must be positive");
  return static_cast<Index>(x);
}

VectorXd read_vector(const json& v, Index size, const std::string& what) {
  if (!v.is_array()) throw ParseError(what + ": expected an array");
  if (static_cast<Index>(v.size()) != size)
    throw ParseError(what + ": expected " + std::to_string(size) + " numbers, got " + std::to_string(v.size()));
  VectorXd out(size);
  for (Index i = 0; i < size; ++i) {
    const json& e = v[static_cast<std::size_t>(i)];
    if (!e.is_number()) throw ParseError(what + " entry " + std::to_string(i) + ": expected a number");
    out(i) = e.get<double>();
  }
  return out;
}

}  // namespace

LP parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("instance JSON syntax error at " + position(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance must be a JSON object");
  const Index d = read_count(doc, "d");
  const Index n = read_count(doc, "n");
  const json& a = field(doc, "A");
  if (!a.is_array() || static_cast<Index>(a.size()) != n)
    throw ParseError("field 'A': expected " + std::to_string(n) + " rows");
  LP lp;
  lp.A.resize(n, d);
  for (Index i = 0; i < n; ++i)
    lp.A.row(i) = read_vector(a[static_cast<std::size_t>(i)], d, "field 'A' row " + std::to_string(i)).transpose();
  lp.b = read_vector(field(doc, "b"), n, "field 'b'");
  lp.z = read_vector(field(doc, "z"), d, "field 'z'");
  try {
    lp.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return lp;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LP load_instance(const std::filesystem::path& path) { return parse_instance(read_file(path)); }

std::string instance_to_json(const LP& lp) {
  json doc;
  doc["d"] = lp.d();
  doc["n"] = lp.n();
  json rows = json::array();
  for (Index i = 0; i < lp.n(); ++i) {
    json row = json::array();
    for (Index j = 0; j < lp.d(); ++j) row.push_back(lp.A(i, j));
    rows.push_back(row);
  }
  doc["A"] = rows;
  doc["b"] = std::vector<double>(lp.b.data(), lp.b.data() + lp.b.size());
  doc["z"] = std::vector<double>(lp.z.data(), lp.z.data() + lp.z.size());
  return doc.dump();
}

std::string format_report(const LP& lp, const LPResult& r) {
  std::ostringstream out;
  out.precision(17);
  out << "status: " << to_string(r.status) << "\n";
  if (r.status == LPStatus::Optimal) {
    out << "basis:";
    for (Index k : r.basis) out << " " << k;
    out << "\nx_opt:";
    for (Index j = 0; j < r.x_opt.size(); ++j) out << " " << r.x_opt(j);
    out << "\nobjective: " << r.objective(lp) << "\n";
  }
  out << "pivots_phase1: " << r.pivots_phase1 << "\n"
      << "pivots_phase2: " << r.pivots_phase2 << "\n"
      << "phase1_iterations: " << r.phase1_iterations << "\n";
  return out.str();
}

}  // namespace shadowlp
