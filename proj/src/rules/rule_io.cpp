#include "kgr/rules/rule_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

namespace kgr::rules {

namespace {

std::string variable_name(std::uint32_t index) {
  if (index < 26) return std::string(1, static_cast<char>('a' + index));
  return "v" + std::to_string(index);
}

void append_term(std::string& out, const Term& t, const Vocabulary& vocab) {
  if (t.is_variable()) {
    out += '?';
    out += variable_name(t.value);
  } else {
    out += '<';
    out += vocab.entity_label(t.value);
    out += '>';
  }
}

void append_atom(std::string& out, const Atom& a, const Vocabulary& vocab) {
  append_term(out, a.subject, vocab);
  out += " <";
  out += vocab.relation_label(a.relation);
  out += "> ";
  append_term(out, a.object, vocab);
}

class RuleParser {
 public:
  RuleParser(std::string_view text, const Vocabulary& vocab) : text_(text), vocab_(vocab) {}

  Rule parse() {
    std::vector<Atom> body;
    skip_space();
    while (!at_arrow()) {
      if (pos_ >= text_.size()) fail("expected '=>'");
      body.push_back(atom());
      skip_space();
    }
    if (body.empty()) fail("rule has no body atoms");
    pos_ += 2;
    skip_space();
    const Atom head = atom();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters after head atom");
    return Rule(std::move(body), head);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw RuleSyntaxError(pos_, what); }

  void skip_space() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }
  bool at_arrow() const { return text_.substr(pos_, 2) == "=>"; }

  std::string_view bracketed() {
    if (pos_ >= text_.size() || text_[pos_] != '<') fail("expected '<'");
    const auto close = text_.find('>', pos_ + 1);
    if (close == std::string_view::npos) fail("unterminated '<'");
    auto label = text_.substr(pos_ + 1, close - pos_ - 1);
    pos_ = close + 1;
    return label;
  }

  Term term() {
    if (pos_ < text_.size() && text_[pos_] == '?') {
      const auto start = ++pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      if (pos_ == start) fail("empty variable name");
      const std::string name(text_.substr(start, pos_ - start));
      auto [it, inserted] = vars_.try_emplace(name, static_cast<std::uint32_t>(vars_.size()));
      return Term::var(it->second);
    }
    if (pos_ < text_.size() && text_[pos_] == '<') return Term::constant(vocab_.entity_id(bracketed()));
    fail("expected a variable '?x' or a constant '<label>'");
  }

  Atom atom() {
    Atom a;
    a.subject = term();
    skip_space();
    a.relation = vocab_.relation_id(bracketed());
    skip_space();
    a.object = term();
    return a;
  }

  std::string_view text_;
  const Vocabulary& vocab_;
  std::size_t pos_ = 0;
  std::map<std::string, std::uint32_t> vars_;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s, const std::string& source, std::size_t line) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError(source, line, "bad number '" + std::string(s) + "'");
  }
}

}  // namespace

std::string format_rule(const Rule& rule, const Vocabulary& vocab) {
  // The stored order depends on ids; the text must depend only on labels,
  // so take the smallest rendering over all body orders.
  const auto& body = rule.body();
  std::vector<std::size_t> order(body.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::string best;
  do {
    std::map<std::uint32_t, std::uint32_t> names;
    auto rename = [&](const Term& t) {
      if (t.is_constant()) return t;
      auto [it, inserted] = names.try_emplace(t.value, static_cast<std::uint32_t>(names.size()));
      return Term::var(it->second);
    };
    std::string out;
    for (std::size_t i : order) {
      append_atom(out, {body[i].relation, rename(body[i].subject), rename(body[i].object)}, vocab);
      out += ' ';
    }
    out += "=> ";
    const auto& h = rule.head();
    append_atom(out, {h.relation, rename(h.subject), rename(h.object)}, vocab);
    if (best.empty() || out < best) best = std::move(out);
  } while (order.size() <= 6 && std::next_permutation(order.begin(), order.end()));
  return best;
}

Rule parse_rule(std::string_view text, const Vocabulary& vocab) { return RuleParser(text, vocab).parse(); }

RuleRecord to_record(const MinedRule& mined) {
  const auto& m = mined.metrics;
  return {mined.rule, m.support, m.head_coverage().to_double(), m.std_confidence().to_double(),
          m.pca_confidence().to_double()};
}

void write_rules_tsv(std::ostream& out, std::span<const RuleRecord> rules, const Vocabulary& vocab,
                     std::span<const std::string> header) {
  for (const auto& h : header) out << "# " << h << '\n';
  for (const auto& r : rules) {
    out << format_rule(r.rule, vocab) << '\t' << r.support << '\t' << format_double(r.head_coverage) << '\t'
        << format_double(r.std_confidence) << '\t' << format_double(r.pca_confidence) << '\n';
  }
}

std::vector<RuleRecord> read_rules_tsv(std::istream& in, const Vocabulary& vocab, const std::string& source_name) {
  std::vector<RuleRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 5) throw ParseError(source_name, line_no, "expected 5 tab-separated fields");
    RuleRecord rec;
    try {
      rec.rule = parse_rule(fields[0], vocab);
    } catch (const RuleSyntaxError& e) {
      throw ParseError(source_name, line_no, e.what());
    }
    std::uint64_t support = 0;
    const auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), support);
    if (ec != std::errc{} || ptr != fields[1].data() + fields[1].size())
      throw ParseError(source_name, line_no, "bad support '" + std::string(fields[1]) + "'");
    rec.support = support;
    rec.head_coverage = parse_double(fields[2], source_name, line_no);
    rec.std_confidence = parse_double(fields[3], source_name, line_no);
    rec.pca_confidence = parse_double(fields[4], source_name, line_no);
    out.push_back(std::move(rec));
  }
  return out;
}

void sort_canonical(std::vector<RuleRecord>& rules, const Vocabulary& vocab) {
  std::vector<std::pair<std::string, RuleRecord>> keyed;
  keyed.reserve(rules.size());
  for (auto& r : rules) keyed.emplace_back(format_rule(r.rule, vocab), std::move(r));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  rules.clear();
  for (auto& [text, r] : keyed) rules.push_back(std::move(r));
}

}  // namespace kgr::rules
