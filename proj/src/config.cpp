#include "remest/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "remest/errors.hpp"

namespace remest {

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  int line = 1;

  bool done() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }
  void advance() {
    if (s[pos] == '\n') ++line;
    ++pos;
  }
  void skip_ws_inline() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
};

std::string parse_ident(Cursor& c) {
  c.skip_ws_inline();
  std::size_t start = c.pos;
  while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_' ||
                       c.peek() == '-' || c.peek() == '.'))
    c.advance();
  if (c.pos == start) throw ConfigError("expected a key", c.line);
  return c.s.substr(start, c.pos - start);
}

double parse_number(Cursor& c) {
  c.skip_ws_inline();
  std::size_t start = c.pos;
  while (!c.done() && (std::isdigit(static_cast<unsigned char>(c.peek())) || c.peek() == '+' ||
                       c.peek() == '-' || c.peek() == '.' || c.peek() == 'e' || c.peek() == 'E'))
    c.advance();
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(c.s.data() + start, c.s.data() + c.pos, out);
  if (ec != std::errc() || ptr != c.s.data() + c.pos || c.pos == start)
    throw ConfigError("malformed number", c.line);
  return out;
}

ConfigValue parse_value(Cursor& c);

ConfigValue parse_string(Cursor& c) {
  ConfigValue v;
  v.kind = ConfigValue::Kind::String;
  v.line = c.line;
  c.advance();  // opening quote
  std::size_t start = c.pos;
  while (!c.done() && c.peek() != '"') {
    if (c.peek() == '\n') throw ConfigError("unterminated string", v.line);
    c.advance();
  }
  if (c.done()) throw ConfigError("unterminated string", v.line);
  v.str = c.s.substr(start, c.pos - start);
  c.advance();  // closing quote
  return v;
}

ConfigValue parse_list(Cursor& c) {
  ConfigValue v;
  v.kind = ConfigValue::Kind::List;
  v.line = c.line;
  c.advance();  // '['
  c.skip_ws_inline();
  if (!c.done() && c.peek() == ']') {
    c.advance();
    return v;
  }
  for (;;) {
    v.list.push_back(parse_number(c));
    c.skip_ws_inline();
    if (c.done()) throw ConfigError("unterminated list", v.line);
    if (c.peek() == ']') {
      c.advance();
      return v;
    }
    if (c.peek() != ',') throw ConfigError("expected ',' or ']' in list", c.line);
    c.advance();
  }
}

ConfigValue parse_table(Cursor& c) {
  ConfigValue v;
  v.kind = ConfigValue::Kind::Table;
  v.line = c.line;
  c.advance();  // '{'
  c.skip_ws_inline();
  if (!c.done() && c.peek() == '}') {
    c.advance();
    return v;
  }
  for (;;) {
    std::string key = parse_ident(c);
    c.skip_ws_inline();
    if (c.done() || c.peek() != '=') throw ConfigError("expected '=' after key '" + key + "'", c.line);
    c.advance();
    v.table[key] = parse_value(c);
    c.skip_ws_inline();
    if (c.done()) throw ConfigError("unterminated table", v.line);
    if (c.peek() == '}') {
      c.advance();
      return v;
    }
    if (c.peek() != ',') throw ConfigError("expected ',' or '}' in table", c.line);
    c.advance();
  }
}

ConfigValue parse_value(Cursor& c) {
  c.skip_ws_inline();
  if (c.done()) throw ConfigError("expected a value", c.line);
  char ch = c.peek();
  if (ch == '"') return parse_string(c);
  if (ch == '[') return parse_list(c);
  if (ch == '{') return parse_table(c);
  ConfigValue v;
  v.kind = ConfigValue::Kind::Number;
  v.line = c.line;
  v.number = parse_number(c);
  return v;
}

const ConfigValue* find(const std::map<std::string, ConfigValue>& t, const std::string& key) {
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

double need_number(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::Number)
    throw ConfigError("'" + key + "' must be a number", v.line);
  return v.number;
}

std::string need_string(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::String)
    throw ConfigError("'" + key + "' must be a quoted string", v.line);
  return v.str;
}

}  // namespace

std::map<std::string, ConfigValue> parse_config_text(const std::string& text) {
  std::map<std::string, ConfigValue> doc;
  Cursor c{text};
  while (!c.done()) {
    c.skip_ws_inline();
    if (c.done()) break;
    if (c.peek() == '\n') {
      c.advance();
      continue;
    }
    if (c.peek() == '#') {
      while (!c.done() && c.peek() != '\n') c.advance();
      continue;
    }
    std::string key = parse_ident(c);
    c.skip_ws_inline();
    if (c.done() || c.peek() != '=')
      throw ConfigError("expected '=' after key '" + key + "'", c.line);
    c.advance();
    doc[key] = parse_value(c);
    c.skip_ws_inline();
    if (!c.done() && c.peek() != '\n' && c.peek() != '#')
      throw ConfigError("trailing characters after value for '" + key + "'", c.line);
  }
  return doc;
}

std::map<std::string, ConfigValue> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

MarkovSource SourceSpec::make() const {
  if (kind == "birth-death") return MarkovSource::birth_death(p);
  if (kind == "banded") {
    if (tail.empty()) throw ConfigError("banded source needs a 'tail' list");
    return MarkovSource::banded(tail);
  }
  throw ConfigError("unknown source kind '" + kind + "' (use birth-death or banded)");
}

Distortion DistortionConfig::make() const {
  if (kind == "absolute") return Distortion::absolute_error();
  if (kind == "hamming") return Distortion::hamming();
  if (kind == "power") return Distortion::power(exponent);
  if (kind == "table") {
    if (values.empty()) throw ConfigError("table distortion needs a 'values' list");
    return Distortion::table(values);
  }
  throw ConfigError("unknown distortion kind '" + kind +
                    "' (use absolute, hamming, power, or table)");
}

std::string RunConfig::canonical() const {
  std::ostringstream ss;
  ss.precision(17);
  ss << "source=" << source.kind << ";p=" << source.p << ";tail=[";
  for (std::size_t i = 0; i < source.tail.size(); ++i)
    ss << (i ? "," : "") << source.tail[i];
  ss << "];distortion=" << distortion.kind << ";r=" << distortion.exponent << ";values=[";
  for (std::size_t i = 0; i < distortion.values.size(); ++i)
    ss << (i ? "," : "") << distortion.values[i];
  ss << "];beta=" << beta;
  if (alpha) ss << ";alpha=" << *alpha;
  if (lambda) ss << ";lambda=" << *lambda;
  ss << ";k=" << k_min << ".." << k_max << ";horizon=" << horizon
     << ";replicates=" << replicates << ";seed=" << seed << ";samples=" << samples
     << ";strategy=" << strategy;
  return ss.str();
}

void RunConfig::apply(const std::map<std::string, ConfigValue>& doc) {
  if (const auto* v = find(doc, "source")) {
    if (v->kind != ConfigValue::Kind::Table)
      throw ConfigError("'source' must be a table like { kind = \"birth-death\", p = 0.3 }",
                        v->line);
    if (const auto* kv = find(v->table, "kind")) source.kind = need_string(*kv, "source.kind");
    if (const auto* pv = find(v->table, "p")) source.p = need_number(*pv, "source.p");
    if (const auto* tv = find(v->table, "tail")) {
      if (tv->kind != ConfigValue::Kind::List)
        throw ConfigError("'source.tail' must be a list", tv->line);
      source.tail = tv->list;
    }
  }
  if (const auto* v = find(doc, "distortion")) {
    if (v->kind != ConfigValue::Kind::Table)
      throw ConfigError("'distortion' must be a table like { kind = \"absolute\" }", v->line);
    if (const auto* kv = find(v->table, "kind"))
      distortion.kind = need_string(*kv, "distortion.kind");
    if (const auto* rv = find(v->table, "r")) distortion.exponent = need_number(*rv, "distortion.r");
    if (const auto* vv = find(v->table, "values")) {
      if (vv->kind != ConfigValue::Kind::List)
        throw ConfigError("'distortion.values' must be a list", vv->line);
      distortion.values = vv->list;
    }
  }
  if (const auto* v = find(doc, "beta")) beta = need_number(*v, "beta");
  if (const auto* v = find(doc, "alpha")) alpha = need_number(*v, "alpha");
  if (const auto* v = find(doc, "lambda")) lambda = need_number(*v, "lambda");
  if (const auto* v = find(doc, "k_min")) k_min = static_cast<int>(need_number(*v, "k_min"));
  if (const auto* v = find(doc, "k_max")) k_max = static_cast<int>(need_number(*v, "k_max"));
  if (const auto* v = find(doc, "horizon"))
    horizon = static_cast<long long>(need_number(*v, "horizon"));
  if (const auto* v = find(doc, "replicates"))
    replicates = static_cast<std::size_t>(need_number(*v, "replicates"));
  if (const auto* v = find(doc, "seed")) seed = static_cast<std::uint64_t>(need_number(*v, "seed"));
  if (const auto* v = find(doc, "workers"))
    workers = static_cast<unsigned>(need_number(*v, "workers"));
  if (const auto* v = find(doc, "samples")) samples = static_cast<int>(need_number(*v, "samples"));
  if (const auto* v = find(doc, "format")) format = need_string(*v, "format");
  if (const auto* v = find(doc, "out")) out = need_string(*v, "out");
  if (const auto* v = find(doc, "strategy")) strategy = need_string(*v, "strategy");
  if (const auto* v = find(doc, "trace")) trace = need_string(*v, "trace");
}

}  // namespace remest
