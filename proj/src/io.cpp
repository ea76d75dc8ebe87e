#include "fuzztree/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace fuzztree {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok { Name, Number, Equals, Comma, Semicolon, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // name or raw number
  double number = 0.0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws_and_comments();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    if (c == ';') return advance(t, Tok::Semicolon);
    if (c == '=') return advance(t, Tok::Equals);
    if (c == ',') return advance(t, Tok::Comma);
    if (c == '"') return quoted_name(t);
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      return number(t);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return bare_name(t);
    throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
  }

 private:
  Token advance(Token t, Tok kind) {
    t.kind = kind;
    t.text = src_[pos_];
    bump();
    return t;
  }

  Token quoted_name(Token t) {
    bump();  // opening quote
    std::string out;
    while (pos_ < src_.size() && src_[pos_] != '"') {
      if (src_[pos_] == '\n') throw ParseError(t.line, t.col, "unterminated string");
      out += src_[pos_];
      bump();
    }
    if (pos_ >= src_.size()) throw ParseError(t.line, t.col, "unterminated string");
    bump();  // closing quote
    t.kind = Tok::Name;
    t.text = std::move(out);
    return t;
  }

  Token bare_name(Token t) {
    std::string out;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-') {
        out += c;
        bump();
      } else {
        break;
      }
    }
    t.kind = Tok::Name;
    t.text = std::move(out);
    return t;
  }

  Token number(Token t) {
    const std::size_t start = pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' ||
          c == '-' || c == '+') {
        bump();
      } else {
        break;
      }
    }
    t.kind = Tok::Number;
    t.text = std::string(src_.substr(start, pos_ - start));
    try {
      std::size_t used = 0;
      t.number = std::stod(t.text, &used);
      if (used != t.text.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError(t.line, t.col, "malformed number '" + t.text + "'");
    }
    return t;
  }

  void skip_ws_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct RawNode {
  bool is_gate = false;
  NodeKind kind = NodeKind::BasicEvent;
  std::vector<std::string> children;
  double prob = 0.0;
  std::optional<ShapeSpec> annotation;
  int line = 0, col = 0;
};

ShapeSpec make_annotation(const std::string& key, const std::vector<double>& v, int line, int col) {
  auto need = [&](std::size_t n) {
    if (v.size() != n) {
      throw ParseError(line, col,
                       key + "= takes " + std::to_string(n) + " comma-separated numbers");
    }
  };
  ShapeSpec shape;
  if (key == "tri") {
    need(3);
    shape = Triangular{v[0], v[1], v[2]};
  } else if (key == "trap") {
    need(4);
    shape = Trapezoidal{v[0], v[1], v[2], v[3]};
  } else if (key == "interval") {
    need(2);
    shape = IntervalShape{v[0], v[1]};
  } else if (key == "gauss") {
    need(2);
    shape = TruncGaussian{v[0], v[1], 0.0, 1.0};
  } else {
    throw ParseError(line, col, "unknown annotation '" + key + "'");
  }
  try {
    check_shape(shape);
  } catch (const Error& e) {
    throw ParseError(line, col, e.what());
  }
  if (!shape_in_unit_interval(shape)) {
    throw ParseError(line, col, "fuzzy probability annotation outside [0, 1]");
  }
  return shape;
}

}  // namespace

bool ParsedModel::has_fuzzy() const {
  return std::any_of(annotations.begin(), annotations.end(),
                     [](const auto& a) { return a.has_value(); });
}

FuzzyProbVector ParsedModel::fuzzy(int n_cuts) const {
  std::vector<AlphaFuzzy> entries;
  entries.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (annotations[i]) {
      entries.push_back(discretize(*annotations[i], n_cuts));
    } else {
      entries.push_back(AlphaFuzzy::crisp(probs[i], n_cuts));
    }
  }
  return FuzzyProbVector(std::move(entries));
}

ParsedModel parse_ft(std::string_view text) {
  Lexer lex(text);
  Token tok = lex.next();

  auto expect = [&](Tok kind, const char* what) {
    if (tok.kind != kind) throw ParseError(tok.line, tok.col, std::string("expected ") + what);
    Token t = tok;
    tok = lex.next();
    return t;
  };

  std::optional<std::string> toplevel;
  int toplevel_line = 0;
  std::vector<std::pair<std::string, RawNode>> defs;  // in file order
  std::unordered_map<std::string, std::size_t> index;

  while (tok.kind != Tok::End) {
    Token head = expect(Tok::Name, "a node name or 'toplevel'");
    if (head.text == "toplevel") {
      Token name = expect(Tok::Name, "the toplevel node name");
      if (toplevel) {
        throw ParseError(name.line, name.col, "toplevel declared more than once");
      }
      toplevel = name.text;
      toplevel_line = name.line;
      expect(Tok::Semicolon, "';'");
      continue;
    }

    RawNode node;
    node.line = head.line;
    node.col = head.col;
    if (tok.kind == Tok::Name && (tok.text == "and" || tok.text == "or")) {
      node.is_gate = true;
      node.kind = tok.text == "and" ? NodeKind::And : NodeKind::Or;
      tok = lex.next();
      while (tok.kind == Tok::Name) {
        node.children.push_back(tok.text);
        tok = lex.next();
      }
      if (node.children.empty()) {
        throw ParseError(head.line, head.col, "gate '" + head.text + "' lists no children");
      }
      expect(Tok::Semicolon, "';'");
    } else if (tok.kind == Tok::Name && tok.text == "prob") {
      tok = lex.next();
      expect(Tok::Equals, "'=' after prob");
      Token num = expect(Tok::Number, "a probability");
      if (!(num.number >= 0.0 && num.number <= 1.0)) {
        throw ParseError(num.line, num.col, "probability out of [0, 1]");
      }
      node.prob = num.number;
      if (tok.kind == Tok::Name && tok.text != "and" && tok.text != "or") {
        const Token key = tok;
        tok = lex.next();
        expect(Tok::Equals, "'=' after annotation name");
        std::vector<double> values;
        values.push_back(expect(Tok::Number, "a number").number);
        while (tok.kind == Tok::Comma) {
          tok = lex.next();
          values.push_back(expect(Tok::Number, "a number").number);
        }
        node.annotation = make_annotation(key.text, values, key.line, key.col);
      }
      expect(Tok::Semicolon, "';'");
    } else {
      throw ParseError(tok.line, tok.col,
                       "expected 'and', 'or' or 'prob=' after node name '" + head.text + "'");
    }

    if (index.contains(head.text)) {
      throw ParseError(head.line, head.col, "node '" + head.text + "' defined more than once");
    }
    index.emplace(head.text, defs.size());
    defs.emplace_back(head.text, std::move(node));
  }

  if (!toplevel) throw ParseError(1, 1, "missing toplevel declaration");
  if (!index.contains(*toplevel)) {
    throw ParseError(toplevel_line, 1, "toplevel names undefined node '" + *toplevel + "'");
  }

  ParsedModel model;
  model.tree.kinds.reserve(defs.size());
  model.tree.children.resize(defs.size());
  for (const auto& [name, node] : defs) {
    model.tree.kinds.push_back(node.is_gate ? node.kind : NodeKind::BasicEvent);
    model.tree.names.push_back(name);
  }
  for (std::size_t i = 0; i < defs.size(); ++i) {
    const RawNode& node = defs[i].second;
    for (const std::string& child : node.children) {
      auto it = index.find(child);
      if (it == index.end()) {
        throw ParseError(node.line, node.col,
                         "node '" + defs[i].first + "' references undefined node '" + child + "'");
      }
      model.tree.children[i].push_back(static_cast<NodeId>(it->second));
    }
  }
  model.tree.root = static_cast<NodeId>(index.at(*toplevel));

  require_valid(model.tree);

  for (const auto& [name, node] : defs) {
    if (node.is_gate) continue;
    model.probs.push_back(node.prob);
    model.annotations.push_back(node.annotation);
  }
  return model;
}

ParsedModel load_ft(const std::filesystem::path& path) {
  return parse_ft(read_text_file(path));
}

std::string serialize_ft(const FaultTree& t, std::span<const double> probs,
                         std::span<const std::optional<ShapeSpec>> annotations) {
  require_valid(t);
  const auto slots = be_slot_by_node(t);
  std::size_t be_count = 0;
  for (NodeId s : slots) be_count += (s != kNoNode);
  if (probs.size() != be_count) {
    throw Error("probability vector length differs from basic event count");
  }
  if (!annotations.empty() && annotations.size() != be_count) {
    throw Error("annotation vector length differs from basic event count");
  }

  std::vector<std::string> names = t.names;
  if (names.empty()) {
    names.resize(t.node_count());
    for (NodeId v = 0; v < t.node_count(); ++v) names[v] = "n" + std::to_string(v);
  } else {
    std::map<std::string_view, int> seen;
    for (const std::string& n : names) {
      if (n.empty()) throw Error("cannot serialize a tree with empty node names");
      if (++seen[n] > 1) throw Error("cannot serialize a tree with duplicate node name '" + n + "'");
    }
  }

  std::string out;
  out += "toplevel \"" + names[t.root] + "\";\n";
  for (NodeId v = 0; v < t.node_count(); ++v) {
    out += "\"" + names[v] + "\"";
    if (t.is_gate(v)) {
      out += t.kinds[v] == NodeKind::And ? " and" : " or";
      for (NodeId c : t.children[v]) out += " \"" + names[c] + "\"";
    } else {
      out += " prob=" + fmt17(probs[slots[v]]);
      if (!annotations.empty() && annotations[slots[v]]) {
        const ShapeSpec& s = *annotations[slots[v]];
        if (const auto* tri = std::get_if<Triangular>(&s)) {
          out += " tri=" + fmt17(tri->a) + "," + fmt17(tri->b) + "," + fmt17(tri->d);
        } else if (const auto* trap = std::get_if<Trapezoidal>(&s)) {
          out += " trap=" + fmt17(trap->a) + "," + fmt17(trap->b) + "," + fmt17(trap->c) + "," +
                 fmt17(trap->d);
        } else if (const auto* iv = std::get_if<IntervalShape>(&s)) {
          out += " interval=" + fmt17(iv->a) + "," + fmt17(iv->b);
        } else if (const auto* g = std::get_if<TruncGaussian>(&s)) {
          out += " gauss=" + fmt17(g->mean) + "," + fmt17(g->stddev);
        }
      }
    }
    out += ";\n";
  }
  return out;
}

void save_ft(const std::filesystem::path& path, const FaultTree& t, std::span<const double> probs,
             std::span<const std::optional<ShapeSpec>> annotations) {
  write_text_file(path, serialize_ft(t, probs, annotations));
}

std::string result_to_json(const AnalysisResult& r) {
  // Re-check the output invariants at write time.
  (void)AlphaFuzzy::from_cuts(r.lower, r.upper);
  auto array = [](std::span<const double> xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ", ";
      s += fmt17(xs[i]);
    }
    return s + "]";
  };
  std::string out = "{\n";
  out += "  \"engine\": \"" + to_string(r.engine) + "\",\n";
  out += "  \"n_cuts\": " + std::to_string(r.n_cuts) + ",\n";
  out += "  \"alpha\": " + array(r.alpha) + ",\n";
  out += "  \"lower\": " + array(r.lower) + ",\n";
  out += "  \"upper\": " + array(r.upper) + ",\n";
  if (r.apex_degenerate()) {
    out += "  \"crisp_value\": " + fmt17(r.crisp_value()) + ",\n";
  }
  out += "  \"wall_time_ms\": " + fmt17(r.wall_total_s * 1e3) + "\n";
  out += "}\n";
  return out;
}

AnalysisResult result_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed result file: ") + e.what());
  }
  AnalysisResult r;
  try {
    const auto engine = engine_from_string(j.at("engine").get<std::string>());
    if (!engine) throw Error("unknown engine in result file");
    r.engine = *engine;
    r.n_cuts = j.at("n_cuts").get<int>();
    r.alpha = j.at("alpha").get<std::vector<double>>();
    r.lower = j.at("lower").get<std::vector<double>>();
    r.upper = j.at("upper").get<std::vector<double>>();
    r.wall_total_s = j.at("wall_time_ms").get<double>() * 1e-3;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed result file: ") + e.what());
  }
  if (r.n_cuts <= 0 || r.alpha.size() != static_cast<std::size_t>(r.n_cuts) ||
      r.lower.size() != r.alpha.size() || r.upper.size() != r.alpha.size()) {
    throw Error("result file arrays inconsistent with n_cuts");
  }
  (void)AlphaFuzzy::from_cuts(r.lower, r.upper);  // invariant re-check on read
  return r;
}

std::string curve_csv(const AlphaFuzzy& cuts, CurveInterp interp) {
  std::string out = interp == CurveInterp::Step ? "# interp=step\n" : "# interp=linear\n";
  out += "x,membership\n";
  if (interp == CurveInterp::Step) {
    std::vector<double> xs;
    xs.reserve(2 * static_cast<std::size_t>(cuts.n_cuts()));
    for (int k = 0; k < cuts.n_cuts(); ++k) {
      xs.push_back(cuts.lo(k));
      xs.push_back(cuts.hi(k));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double x : xs) out += fmt17(x) + "," + fmt17(membership_at(cuts, x)) + "\n";
  } else {
    for (int k = 0; k < cuts.n_cuts(); ++k) {
      out += fmt17(cuts.lo(k)) + "," + fmt17(cuts.level(k)) + "\n";
    }
    for (int k = cuts.n_cuts() - 1; k >= 0; --k) {
      out += fmt17(cuts.hi(k)) + "," + fmt17(cuts.level(k)) + "\n";
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace fuzztree
