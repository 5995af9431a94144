#include "esstri/io.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace esstri::tri {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

// Face index for table column j: faces 012, 013, 023, 123.
constexpr int kColumnFace[4] = {3, 2, 1, 0};

std::array<int, 3> face_vertices(int f) {
  std::array<int, 3> out{};
  std::size_t k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != f) out[k++] = v;
  return out;
}

class Cursor {
 public:
  Cursor(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  std::size_t number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stoul(std::string(s_.substr(start, pos_ - start)));
  }
  std::string_view word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  std::string rest() {
    skip_ws();
    std::string out(s_.substr(pos_));
    pos_ = s_.size();
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    return out;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, pos_ + 1); }
  std::size_t column() const { return pos_ + 1; }
  std::size_t line() const { return line_; }
  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }
  char raw() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

struct TableRows {
  std::size_t tets = 0;
  // Per row: up to four optional (tet, perm) and an optional shape string.
  std::vector<std::array<std::optional<Gluing>, 4>> faces;
  std::vector<std::optional<std::string>> shapes;
};

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

TableRows read_table(std::string_view text) {
  TableRows rows;
  bool have_header = false;
  std::vector<bool> row_seen;
  // (tet, face) already claimed as a gluing target, with the claiming face.
  std::set<std::pair<std::size_t, int>> claimed;
  auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = lines[ln];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    Cursor cur(line, ln + 1);
    if (cur.at_end()) continue;
    if (!have_header) {
      if (cur.word() != "tets") cur.fail("expected header 'tets: N'");
      cur.expect(':');
      rows.tets = cur.number();
      if (!cur.at_end()) cur.fail("unexpected text after header");
      rows.faces.assign(rows.tets, {});
      rows.shapes.assign(rows.tets, std::nullopt);
      row_seen.assign(rows.tets, false);
      have_header = true;
      continue;
    }
    std::size_t row = cur.number();
    if (row >= rows.tets) cur.fail("tetrahedron index " + std::to_string(row) + " out of range");
    if (row_seen[row]) cur.fail("duplicate face assignment: row " + std::to_string(row) + " given twice");
    row_seen[row] = true;
    cur.expect(':');
    for (int col = 0; col < 4; ++col) {
      if (col > 0) cur.expect('|');
      const int f = kColumnFace[col];
      if (cur.accept('-')) continue;
      std::size_t target = cur.number();
      if (target >= rows.tets) cur.fail("gluing target " + std::to_string(target) + " out of range");
      cur.expect('(');
      cur.skip_ws();
      std::array<int, 3> labels{};
      for (int k = 0; k < 3; ++k) {
        cur.skip_ws();
        char c = cur.raw();
        if (!std::isdigit(static_cast<unsigned char>(c))) cur.fail("expected a vertex label");
        if (c > '3') cur.fail(std::string("vertex label '") + c + "' out of range");
        labels[static_cast<std::size_t>(k)] = c - '0';
        cur.advance();
      }
      cur.expect(')');
      std::array<int, 4> img{-1, -1, -1, -1};
      auto verts = face_vertices(f);
      std::array<bool, 4> used{};
      for (std::size_t k = 0; k < 3; ++k) {
        img[static_cast<std::size_t>(verts[k])] = labels[k];
        if (used[static_cast<std::size_t>(labels[k])]) cur.fail("repeated vertex label in gluing");
        used[static_cast<std::size_t>(labels[k])] = true;
      }
      for (int v = 0; v < 4; ++v)
        if (!used[static_cast<std::size_t>(v)]) img[static_cast<std::size_t>(f)] = v;
      auto perm = Perm4::from_images(img);
      if (!perm) cur.fail("gluing is not a permutation");
      int target_face = (*perm)[f];
      if (!claimed.emplace(target, target_face).second)
        cur.fail("duplicate face assignment: face " + std::to_string(target_face) + " of tetrahedron " +
                 std::to_string(target) + " claimed twice");
      rows.faces[row][static_cast<std::size_t>(f)] = Gluing{target, *perm};
    }
    if (cur.accept('|')) {
      std::string shape = cur.rest();
      if (shape.empty()) cur.fail("empty shape column");
      rows.shapes[row] = shape;
    }
    if (!cur.at_end()) cur.fail("unexpected text after row");
  }
  if (!have_header) throw ParseError("missing header 'tets: N'", lines.size(), 1);
  for (std::size_t r = 0; r < rows.tets; ++r)
    if (!row_seen[r]) throw ParseError("missing row for tetrahedron " + std::to_string(r), lines.size(), 1);
  return rows;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Triangulation parse_table(std::string_view text) {
  TableRows rows = read_table(text);
  Triangulation t(rows.tets);
  for (std::size_t r = 0; r < rows.tets; ++r)
    for (int f = 0; f < 4; ++f) t.set_one_side(r, f, rows.faces[r][static_cast<std::size_t>(f)]);
  return t;
}

std::optional<std::vector<std::string>> parse_table_shapes(std::string_view text) {
  TableRows rows = read_table(text);
  std::vector<std::string> out;
  for (const auto& s : rows.shapes) {
    if (!s) return std::nullopt;
    out.push_back(*s);
  }
  return out;
}

Triangulation parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(std::string("invalid JSON: ") + e.what(), line, col);
  }
  auto fail = [](const std::string& what) -> ParseError { return ParseError(what, 0, 0); };
  if (!doc.is_object() || !doc.contains("tets") || !doc["tets"].is_number_unsigned())
    throw fail("expected an object with an unsigned \"tets\" field");
  const std::size_t n = doc["tets"].get<std::size_t>();
  const auto& gl = doc.contains("gluings") ? doc["gluings"] : nlohmann::json::array();
  if (!gl.is_array() || gl.size() != n) throw fail("\"gluings\" must hold one entry per tetrahedron");
  Triangulation t(n);
  std::set<std::pair<std::size_t, int>> claimed;
  for (std::size_t tet = 0; tet < n; ++tet) {
    const auto& row = gl[tet];
    if (!row.is_array() || row.size() != 4) throw fail("tetrahedron " + std::to_string(tet) + ": expected 4 faces");
    for (int f = 0; f < 4; ++f) {
      const auto& entry = row[static_cast<std::size_t>(f)];
      if (entry.is_null()) continue;
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_unsigned() || !entry[1].is_array())
        throw fail("tetrahedron " + std::to_string(tet) + " face " + std::to_string(f) + ": expected [t, [p0..p3]]");
      std::size_t target = entry[0].get<std::size_t>();
      if (target >= n) throw fail("gluing target " + std::to_string(target) + " out of range");
      std::vector<int> img;
      for (const auto& v : entry[1]) {
        if (!v.is_number_integer()) throw fail("permutation entries must be integers");
        img.push_back(v.get<int>());
      }
      auto perm = Perm4::from_images(img);
      if (!perm) throw fail("tetrahedron " + std::to_string(tet) + " face " + std::to_string(f) + ": not a permutation");
      if (!claimed.emplace(target, (*perm)[f]).second) throw fail("duplicate face assignment");
      t.set_one_side(tet, f, Gluing{target, *perm});
    }
  }
  if (doc.contains("label") && doc["label"].is_string()) t.set_label(doc["label"].get<std::string>());
  return t;
}

Format detect_format(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? Format::json : Format::table;
  }
  return Format::table;
}

Triangulation parse_triangulation(std::string_view text) {
  return detect_format(text) == Format::json ? parse_json(text) : parse_table(text);
}

std::string to_table(const Triangulation& t) {
  std::ostringstream os;
  os << "tets: " << t.size() << "\n";
  for (std::size_t tet = 0; tet < t.size(); ++tet) {
    os << tet << ":";
    for (int col = 0; col < 4; ++col) {
      const int f = kColumnFace[col];
      os << (col == 0 ? " " : " | ");
      const auto& g = t.gluing(tet, f);
      if (!g) {
        os << "-";
        continue;
      }
      os << g->tet << " (";
      for (int v : face_vertices(f)) os << g->perm[v];
      os << ")";
    }
    os << "\n";
  }
  return os.str();
}

std::string to_json(const Triangulation& t) {
  nlohmann::json doc;
  doc["tets"] = t.size();
  nlohmann::json gl = nlohmann::json::array();
  for (std::size_t tet = 0; tet < t.size(); ++tet) {
    nlohmann::json row = nlohmann::json::array();
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(tet, f);
      if (!g)
        row.push_back(nullptr);
      else
        row.push_back(nlohmann::json::array({g->tet, g->perm.images()}));
    }
    gl.push_back(row);
  }
  doc["gluings"] = gl;
  if (!t.label().empty()) doc["label"] = t.label();
  return doc.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Triangulation read_triangulation_file(const std::string& path) {
  Triangulation t = parse_triangulation(read_file(path));
  if (t.label().empty()) t.set_label(path);
  return t;
}

}  // namespace esstri::tri

namespace esstri::tri {

SkeletonSummary summarize(const Skeleton& sk) {
  SkeletonSummary s;
  s.tets = sk.tet_count;
  s.vertex_count = sk.vertex_count();
  for (const auto& e : sk.edges) s.edges.push_back(e.corners);
  s.face_count = sk.faces.size();
  for (const auto& v : sk.vertices)
    s.links.push_back({to_string(v.kind), v.euler_characteristic, v.orientable, v.triangle_count});
  s.euler_characteristic = sk.euler_characteristic();
  s.classification = to_string(sk.classification);
  return s;
}

std::string format_corner(const Corner& c) {
  return std::to_string(c.tet) + "(" + std::to_string(c.a) + std::to_string(c.b) + ")";
}

std::string summary_json(const SkeletonSummary& s) {
  nlohmann::json j;
  j["tets"] = s.tets;
  j["vertices"] = s.vertex_count;
  j["faces"] = s.face_count;
  j["euler_characteristic"] = s.euler_characteristic;
  j["classification"] = s.classification;
  j["edges"] = nlohmann::json::array();
  for (std::size_t e = 0; e < s.edges.size(); ++e) {
    nlohmann::json cyc = nlohmann::json::array();
    for (const auto& c : s.edges[e]) cyc.push_back({c.tet, c.a, c.b});
    j["edges"].push_back({{"edge", e}, {"degree", s.edges[e].size()}, {"cycle", cyc}});
  }
  j["links"] = nlohmann::json::array();
  for (const auto& l : s.links)
    j["links"].push_back({{"kind", l.kind},
                          {"euler_characteristic", l.euler_characteristic},
                          {"orientable", l.orientable},
                          {"triangles", l.triangles}});
  return j.dump(2);
}

SkeletonSummary parse_summary_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    SkeletonSummary s;
    s.tets = j.at("tets").get<std::size_t>();
    s.vertex_count = j.at("vertices").get<std::size_t>();
    s.face_count = j.at("faces").get<std::size_t>();
    s.euler_characteristic = j.at("euler_characteristic").get<long>();
    s.classification = j.at("classification").get<std::string>();
    for (const auto& e : j.at("edges")) {
      std::vector<Corner> cyc;
      for (const auto& c : e.at("cycle")) cyc.push_back({c.at(0).get<std::size_t>(), c.at(1).get<int>(), c.at(2).get<int>()});
      s.edges.push_back(cyc);
    }
    for (const auto& l : j.at("links"))
      s.links.push_back({l.at("kind").get<std::string>(), l.at("euler_characteristic").get<long>(),
                         l.at("orientable").get<bool>(), l.at("triangles").get<std::size_t>()});
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad summary JSON: ") + e.what(), 1, 1);
  }
}

std::string summary_text(const SkeletonSummary& s) {
  std::ostringstream os;
  os << "tetrahedra: " << s.tets << "\n";
  os << "vertices: " << s.vertex_count << "  edges: " << s.edges.size() << "  faces: " << s.face_count
     << "  euler characteristic: " << s.euler_characteristic << "\n";
  os << "classification: " << s.classification << "\n";
  os << "edge  degree  cycle\n";
  for (std::size_t e = 0; e < s.edges.size(); ++e) {
    os << std::to_string(e) << std::string(6 - std::min<std::size_t>(5, std::to_string(e).size()), ' ')
       << s.edges[e].size() << std::string(8 - std::min<std::size_t>(7, std::to_string(s.edges[e].size()).size()), ' ');
    for (std::size_t i = 0; i < s.edges[e].size(); ++i) os << (i ? " " : "") << format_corner(s.edges[e][i]);
    os << "\n";
  }
  for (std::size_t v = 0; v < s.links.size(); ++v)
    os << "vertex " << v << ": " << s.links[v].kind << " link, " << s.links[v].triangles << " triangles, chi "
       << s.links[v].euler_characteristic << (s.links[v].orientable ? "" : ", non-orientable") << "\n";
  return os.str();
}

}  // namespace esstri::tri
