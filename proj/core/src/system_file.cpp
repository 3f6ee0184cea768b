#include "dpass/system_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "dpass/format.hpp"

namespace dpass {

ParseContext SystemFile::context() const {
  ParseContext ctx;
  ctx.naming = naming();
  ctx.independents = vars.size();
  ctx.unknowns = unknowns.size();
  for (const auto& c : constants) {
    if (auto it = bindings.find(c); it != bindings.end()) {
      ctx.definitions.emplace(c, Expr(it->second));
    } else {
      ctx.constants.insert(c);
    }
  }
  return ctx;
}

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& message, std::size_t offset) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw SystemFileError(message, line, column);
  }

  std::string_view text() const { return text_; }

 private:
  std::string_view text_;
};

// A header line split into words with their offsets.
struct Word {
  std::string text;
  std::size_t offset;
};

std::vector<Word> split_words(std::string_view line, std::size_t base) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    words.push_back(Word{std::string(line.substr(start, i - start)), base + start});
  }
  return words;
}

void check_name(const Reader& reader, const Word& w, const std::set<std::string>& taken) {
  if (w.text.empty() || !is_name_start(w.text[0]) ||
      !std::all_of(w.text.begin(), w.text.end(), is_name_char)) {
    reader.fail("invalid name '" + w.text + "'", w.offset);
  }
  static const std::set<std::string> reserved{"sinh", "cosh", "tanh", "exp", "log"};
  if (reserved.contains(w.text)) reader.fail("'" + w.text + "' is a reserved function name", w.offset);
  if (w.text.size() >= 2 && w.text[0] == 'D' &&
      std::all_of(w.text.begin() + 1, w.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    reader.fail("'" + w.text + "' is reserved for total derivatives", w.offset);
  }
  if (taken.contains(w.text)) reader.fail("name '" + w.text + "' declared twice", w.offset);
}

Ranking parse_ranking(const Reader& reader, std::string_view clause, std::size_t base,
                      const std::vector<std::string>& vars) {
  std::vector<std::vector<unsigned>> blocks;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < clause.size() && std::isspace(static_cast<unsigned char>(clause[i]))) ++i;
  };
  auto word = [&] {
    skip();
    std::size_t start = i;
    while (i < clause.size() && is_name_char(clause[i])) ++i;
    return std::pair{std::string(clause.substr(start, i - start)), base + start};
  };
  while (true) {
    auto [w, at] = word();
    if (w == "elim") {
      skip();
      if (i >= clause.size() || clause[i] != '(') reader.fail("expected '(' after elim", base + i);
      ++i;
      std::vector<unsigned> block(vars.size(), 0);
      while (true) {
        auto [name, name_at] = word();
        auto it = std::find(vars.begin(), vars.end(), name);
        if (it == vars.end()) reader.fail("unknown independent variable '" + name + "' in ranking", name_at);
        unsigned weight = 1;
        skip();
        if (i < clause.size() && clause[i] == ':') {
          ++i;
          skip();
          std::size_t start = i;
          while (i < clause.size() && std::isdigit(static_cast<unsigned char>(clause[i]))) ++i;
          if (start == i) reader.fail("expected a weight", base + i);
          weight = static_cast<unsigned>(std::stoul(std::string(clause.substr(start, i - start))));
          if (weight == 0) reader.fail("weights must be positive", base + start);
        }
        block[static_cast<std::size_t>(it - vars.begin())] = weight;
        skip();
        if (i < clause.size() && clause[i] == ',') {
          ++i;
          continue;
        }
        if (i < clause.size() && clause[i] == ')') {
          ++i;
          break;
        }
        reader.fail("expected ',' or ')' in elim clause", base + i);
      }
      blocks.push_back(std::move(block));
      continue;
    }
    Ranking::TieBreak tie;
    if (w == "deglex") {
      tie = Ranking::TieBreak::Lex;
    } else if (w == "degrevlex") {
      tie = Ranking::TieBreak::RevLex;
    } else {
      reader.fail(w.empty() ? "expected deglex or degrevlex" : "unknown ranking keyword '" + w + "'", at);
    }
    skip();
    if (i != clause.size()) reader.fail("unexpected text after ranking clause", base + i);
    return Ranking(vars.size(), std::move(blocks), tie);
  }
}

Rational parse_rational(const Reader& reader, std::string_view text, std::size_t offset) {
  try {
    auto v = parse(text, ParseContext{}).as_rational();
    if (v) return *v;
  } catch (const ParseError& e) {
    reader.fail(e.message(), offset + e.position());
  } catch (const Error&) {
  }
  reader.fail("expected a rational value", offset);
}

}  // namespace

SystemFile parse_system_file(std::string_view source) {
  // Blank out comments so offsets stay valid for diagnostics.
  std::string text(source);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '#') continue;
    while (i < text.size() && text[i] != '\n') text[i++] = ' ';
  }
  Reader reader(text);

  SystemFile file;
  bool have_vars = false;
  bool have_unknowns = false;
  bool have_ranking = false;
  std::optional<std::pair<std::string, std::size_t>> pending_ranking;
  bool in_body = false;
  std::set<std::string> names;
  std::set<std::string> equation_names;

  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t line_end = text.find('\n', pos);
    if (line_end == std::string::npos) line_end = text.size();
    std::string_view line(text.data() + pos, line_end - pos);
    auto words = split_words(line, pos);
    const std::string& keyword = words.front().text;

    if (keyword == "vars" || keyword == "unknowns" || keyword == "const" || keyword == "ranking") {
      if (in_body) reader.fail("header line '" + keyword + "' after the first equation", pos);
      if (keyword == "vars") {
        if (have_vars) reader.fail("duplicate vars line", pos);
        if (words.size() < 2) reader.fail("vars needs at least one name", pos + line.size());
        have_vars = true;
        file.vars.clear();
        for (std::size_t k = 1; k < words.size(); ++k) {
          check_name(reader, words[k], names);
          names.insert(words[k].text);
          file.vars.push_back(words[k].text);
        }
      } else if (keyword == "unknowns") {
        if (have_unknowns) reader.fail("duplicate unknowns line", pos);
        if (words.size() < 2) reader.fail("unknowns needs at least one name", pos + line.size());
        have_unknowns = true;
        file.unknowns.clear();
        for (std::size_t k = 1; k < words.size(); ++k) {
          check_name(reader, words[k], names);
          names.insert(words[k].text);
          file.unknowns.push_back(words[k].text);
        }
      } else if (keyword == "const") {
        for (std::size_t k = 1; k < words.size(); ++k) {
          Word w = words[k];
          std::string value;
          std::size_t value_at = 0;
          if (auto eq = w.text.find('='); eq != std::string::npos) {
            value = w.text.substr(eq + 1);
            value_at = w.offset + eq + 1;
            w.text.resize(eq);
          }
          check_name(reader, w, names);
          names.insert(w.text);
          file.constants.push_back(w.text);
          if (!value.empty() || value_at != 0) {
            file.bindings[w.text] = parse_rational(reader, value, value_at);
          }
        }
      } else {
        if (have_ranking) reader.fail("duplicate ranking line", pos);
        have_ranking = true;
        std::size_t clause_at = words.size() > 1 ? words[1].offset : pos + line.size();
        pending_ranking.emplace(std::string(text.substr(clause_at, line_end - clause_at)), clause_at);
      }
      pos = line_end;
      continue;
    }

    // Equation: name ':' expr ';'
    in_body = true;
    std::size_t colon = text.find(':', pos);
    std::size_t semi = text.find(';', pos);
    if (colon == std::string::npos || (semi != std::string::npos && semi < colon)) {
      reader.fail("expected 'name:' to start an equation", pos);
    }
    std::size_t name_end = colon;
    while (name_end > pos && std::isspace(static_cast<unsigned char>(text[name_end - 1]))) --name_end;
    Word name{text.substr(pos, name_end - pos), pos};
    if (name.text.empty() || !is_name_start(name.text[0]) ||
        !std::all_of(name.text.begin(), name.text.end(), is_name_char)) {
      reader.fail("invalid equation name '" + name.text + "'", pos);
    }
    if (!equation_names.insert(name.text).second) reader.fail("duplicate equation name '" + name.text + "'", pos);
    if (semi == std::string::npos) {
      // Point just past the last non-blank character of the equation.
      std::size_t end = text.size();
      while (end > colon + 1 && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
      reader.fail("missing ';' after equation '" + name.text + "'", end);
    }

    if (pending_ranking) {
      file.ranking = parse_ranking(reader, pending_ranking->first, pending_ranking->second, file.vars);
      pending_ranking.reset();
    } else if (!have_ranking) {
      file.ranking = Ranking::default_for(file.vars.size());
    }

    std::size_t body_at = colon + 1;
    std::string_view body(text.data() + body_at, semi - body_at);
    ParseContext ctx = file.context();
    auto parse_part = [&](std::string_view part, std::size_t at) {
      try {
        return parse(part, ctx);
      } catch (const ParseError& e) {
        reader.fail(e.message(), at + e.position());
      }
    };
    Expr e;
    if (auto eq = body.find('='); eq != std::string_view::npos) {
      if (body.find('=', eq + 1) != std::string_view::npos) reader.fail("more than one '='", body_at + eq);
      e = parse_part(body.substr(0, eq), body_at) - parse_part(body.substr(eq + 1), body_at + eq + 1);
    } else {
      e = parse_part(body, body_at);
    }
    file.equations.emplace_back(name.text, e);
    pos = semi + 1;
  }
  if (pending_ranking) {
    file.ranking = parse_ranking(reader, pending_ranking->first, pending_ranking->second, file.vars);
  } else if (!have_ranking) {
    file.ranking = Ranking::default_for(file.vars.size());
  }
  if (file.equations.empty()) reader.fail("no equations", text.size());
  return file;
}

SystemFile load_system_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_system_file(buffer.str());
}

SystemFile bind_constants(SystemFile file, const std::map<std::string, Rational>& values) {
  std::map<Atom, Expr> replacements;
  for (const auto& [name, value] : values) {
    if (std::find(file.constants.begin(), file.constants.end(), name) == file.constants.end()) {
      throw Error("cannot bind '" + name + "': not a declared constant");
    }
    file.bindings[name] = value;
    replacements.emplace(Atom::constant(name), Expr(value));
  }
  for (auto& [name, e] : file.equations) e = substitute(e, replacements);
  return file;
}

std::pair<std::string, Rational> parse_binding(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) throw Error("binding must look like name=value");
  std::string name(text.substr(0, eq));
  auto value = parse(text.substr(eq + 1), ParseContext{}).as_rational();
  if (!value) throw Error("binding value for '" + name + "' is not a rational number");
  return {name, *value};
}

DiffSystem to_system(const SystemFile& file) {
  std::vector<Equation> eqs;
  for (const auto& [name, e] : file.equations) {
    if (auto lt = leading_term(e, file.ranking)) {
      eqs.push_back(Equation{name, lt->lead, lt->tail});
      continue;
    }
    if (auto m = monicize(e, file.ranking)) {
      eqs.push_back(Equation{name, m->lead, m->tail});
      continue;
    }
    throw InvalidSystemError("equation '" + name + "' is not orderly solvable under " +
                             file.ranking.describe(file.naming()));
  }
  return DiffSystem(std::move(eqs), file.ranking, file.unknowns.size());
}

Expr parse_in(const SystemFile& file, std::string_view text) { return parse(text, file.context()); }

std::string write_system_file(const DiffSystem& system, const SystemFile& header) {
  Naming naming = header.naming();
  std::ostringstream out;
  out << "vars";
  for (const auto& v : header.vars) out << ' ' << v;
  out << "\nunknowns";
  for (const auto& u : header.unknowns) out << ' ' << u;
  out << "\nranking " << system.ranking().describe(naming) << '\n';
  if (!header.constants.empty()) {
    out << "const";
    for (const auto& c : header.constants) {
      out << ' ' << c;
      if (auto it = header.bindings.find(c); it != header.bindings.end()) out << '=' << format(Expr(it->second));
    }
    out << '\n';
  }
  for (const auto& eq : system.equations()) {
    out << eq.name << ": " << format(Expr::jet(eq.lead), naming);
    if (!eq.tail.is_zero_literal()) out << " = " << format(-eq.tail, naming);
    out << ";\n";
  }
  return out.str();
}

}  // namespace dpass
