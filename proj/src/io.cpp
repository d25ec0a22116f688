#include "multmodel/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "multmodel/builders.hpp"
#include "multmodel/errors.hpp"

namespace multmodel {

namespace {

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  std::optional<std::string_view> next() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= text_.size()) return std::nullopt;
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  std::string_view expect(const char* what) {
    auto token = next();
    if (!token) {
      throw ParseError(line_, std::string("unexpected end of input, wanted ") +
                                  what);
    }
    return *token;
  }

  long expect_int(const char* what) {
    const auto token = expect(what);
    long value = 0;
    const auto [end, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size()) {
      throw ParseError(line_, std::string("expected ") + what + ", got '" +
                                  std::string(token) + "'");
    }
    return value;
  }

  double expect_double(const char* what) {
    const auto token = expect(what);
    double value = 0;
    const auto [end, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size()) {
      throw ParseError(line_, std::string("expected ") + what + ", got '" +
                                  std::string(token) + "'");
    }
    return value;
  }

  int line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

// var:{j|j|...}
std::pair<VarId, std::vector<Value>> parse_constraint(Tokenizer& tokens) {
  const auto token = tokens.expect("a var:{values} constraint");
  const auto colon = token.find(':');
  if (colon == std::string_view::npos || colon + 2 >= token.size() ||
      token[colon + 1] != '{' || token.back() != '}') {
    throw ParseError(tokens.line(), "malformed constraint '" +
                                        std::string(token) + "'");
  }
  auto parse_int = [&](std::string_view s) {
    int value = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(),
                                           value);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw ParseError(tokens.line(), "malformed constraint '" +
                                          std::string(token) + "'");
    }
    return value;
  };
  const VarId var = parse_int(token.substr(0, colon));
  std::vector<Value> values;
  std::string_view body = token.substr(colon + 2, token.size() - colon - 3);
  while (!body.empty()) {
    const auto bar = body.find('|');
    values.push_back(parse_int(body.substr(0, bar)));
    if (bar == std::string_view::npos) break;
    body = body.substr(bar + 1);
  }
  if (values.empty()) {
    throw ParseError(tokens.line(), "empty value set in '" +
                                        std::string(token) + "'");
  }
  return {var, values};
}

std::vector<VarId> parse_scope(Tokenizer& tokens, std::size_t n) {
  const long count = tokens.expect_int("a scope size");
  if (count < 0 || static_cast<std::size_t>(count) > n) {
    throw ParseError(tokens.line(), "bad scope size " + std::to_string(count));
  }
  std::vector<VarId> scope;
  scope.reserve(count);
  for (long i = 0; i < count; ++i) {
    scope.push_back(static_cast<VarId>(tokens.expect_int("a variable id")));
  }
  return scope;
}

// gamma m var:{...} x m
std::vector<Element> parse_elements(Tokenizer& tokens, const DomainTable& doms,
                                    std::size_t count) {
  std::vector<Element> elements;
  elements.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double gamma = tokens.expect_double("a parameter");
    const long arity = tokens.expect_int("a constraint count");
    std::vector<std::pair<VarId, std::vector<Value>>> raw;
    raw.reserve(arity);
    for (long j = 0; j < arity; ++j) {
      raw.push_back(parse_constraint(tokens));
    }
    elements.push_back(Element{Clause::canonicalize(doms, raw), gamma});
  }
  return elements;
}

Network parse_multmodel(Tokenizer& tokens) {
  if (tokens.expect_int("a format version") != 1) {
    throw ParseError(tokens.line(), "unsupported format version");
  }
  if (tokens.expect("VARS") != "VARS") {
    throw ParseError(tokens.line(), "expected VARS");
  }
  const long n = tokens.expect_int("the variable count");
  if (n < 0) throw ParseError(tokens.line(), "negative variable count");
  if (tokens.expect("DOMS") != "DOMS") {
    throw ParseError(tokens.line(), "expected DOMS");
  }
  std::vector<int> cards;
  cards.reserve(n);
  for (long i = 0; i < n; ++i) {
    const long card = tokens.expect_int("a cardinality");
    if (card < 1) throw ParseError(tokens.line(), "cardinality must be >= 1");
    cards.push_back(static_cast<int>(card));
  }

  Network net;
  net.domains = DomainTable(std::move(cards));

  while (auto block = tokens.next()) {
    const int block_line = tokens.line();
    try {
      if (*block == "TABLE") {
        auto scope = parse_scope(tokens, n);
        const std::uint64_t joint = net.domains.joint_size(scope);
        if (joint > (std::uint64_t{1} << 28)) {
          throw TooLarge("table block too large to load");
        }
        std::vector<double> values(joint);
        for (auto& v : values) v = tokens.expect_double("a table value");
        net.factors.push_back(from_table(net.domains, scope, values));
      } else if (*block == "MULT" || *block == "DGRAPH") {
        auto scope = parse_scope(tokens, n);
        const long count = tokens.expect_int("an element count");
        if (count < 0) {
          throw ParseError(tokens.line(), "negative element count");
        }
        auto elements = parse_elements(tokens, net.domains, count);
        if (*block == "DGRAPH") {
          std::vector<std::pair<Clause, double>> paths;
          paths.reserve(elements.size());
          for (auto& e : elements) paths.emplace_back(e.clause, e.gamma);
          net.factors.push_back(from_decision_graph(
              net.domains, DecisionGraphSpec{scope, std::move(paths)}));
        } else {
          net.factors.emplace_back(net.domains, scope, std::move(elements),
                                   ModelKind::general);
        }
      } else if (*block == "NOISYOR") {
        NoisyOrSpec spec;
        spec.child = static_cast<VarId>(tokens.expect_int("the child id"));
        const long m = tokens.expect_int("the parent count");
        if (m < 0) throw ParseError(tokens.line(), "negative parent count");
        for (long i = 0; i < m; ++i) {
          spec.parents.push_back(
              static_cast<VarId>(tokens.expect_int("a parent id")));
        }
        spec.leak = tokens.expect_double("the leak");
        for (long i = 0; i < m; ++i) {
          spec.inhibitors.push_back(tokens.expect_double("an inhibitor"));
        }
        net.factors.push_back(from_noisy_or(net.domains, spec));
      } else if (*block == "LOGLIN") {
        LogLinearSpec spec;
        spec.scope = parse_scope(tokens, n);
        const long terms = tokens.expect_int("a term count");
        if (terms < 0) throw ParseError(tokens.line(), "negative term count");
        bool saw_mu = false;
        for (long t = 0; t < terms; ++t) {
          const double lambda = tokens.expect_double("a weight");
          const long lits = tokens.expect_int("a literal count");
          if (lits == 0) {
            if (saw_mu) throw DuplicateTerm("repeated constant term");
            saw_mu = true;
            spec.mu = lambda;
            continue;
          }
          std::vector<std::pair<VarId, Value>> items;
          for (long j = 0; j < lits; ++j) {
            auto [var, values] = parse_constraint(tokens);
            if (values.size() != 1) {
              throw ParseError(tokens.line(),
                               "log-linear literals take a single value");
            }
            items.emplace_back(var, values.front());
          }
          spec.terms.push_back(LogLinearTerm{
              Instance::from_pairs(net.domains, items), lambda});
        }
        net.factors.push_back(from_loglinear(net.domains, spec));
      } else {
        throw ParseError(block_line,
                         "unknown block '" + std::string(*block) + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const TooLarge&) {
      throw;
    } catch (const TooManyParents&) {
      throw;
    } catch (const Error& e) {
      throw FormatError("block starting near line " +
                        std::to_string(block_line) + ": " + e.what());
    }
  }
  return net;
}

Network parse_uai(Tokenizer& tokens) {
  const long n = tokens.expect_int("the variable count");
  if (n < 0) throw ParseError(tokens.line(), "negative variable count");
  std::vector<int> cards;
  cards.reserve(n);
  for (long i = 0; i < n; ++i) {
    cards.push_back(static_cast<int>(tokens.expect_int("a cardinality")));
  }
  Network net;
  try {
    net.domains = DomainTable(std::move(cards));
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
  const long factors = tokens.expect_int("the factor count");
  std::vector<std::vector<VarId>> scopes;
  scopes.reserve(factors);
  for (long i = 0; i < factors; ++i) {
    scopes.push_back(parse_scope(tokens, n));
  }
  for (long i = 0; i < factors; ++i) {
    const long count = tokens.expect_int("a table size");
    std::vector<double> values(count);
    for (auto& v : values) v = tokens.expect_double("a table value");
    try {
      net.factors.push_back(from_table(net.domains, scopes[i], values));
    } catch (const Error& e) {
      throw FormatError("factor " + std::to_string(i) + ": " + e.what());
    }
  }
  return net;
}

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

void write_constraints(std::ostream& os, const Clause& clause) {
  os << ' ' << clause.arity();
  for (const auto& constraint : clause.constraints()) {
    os << ' ' << constraint.var << ":{";
    for (std::size_t i = 0; i < constraint.values.size(); ++i) {
      if (i > 0) os << '|';
      os << constraint.values[i];
    }
    os << '}';
  }
}

void write_mult_block(std::ostream& os, const char* name,
                      const MultiplicativeModel& factor) {
  os << name << ' ' << factor.scope().size();
  for (VarId v : factor.scope()) os << ' ' << v;
  os << ' ' << factor.elements().size() << '\n';
  for (const auto& element : factor.elements()) {
    os << fmt(element.gamma);
    write_constraints(os, element.clause);
    os << '\n';
  }
}

// Full instance grid over the scope, one element per cell?
bool is_structural_table(const DomainTable& doms,
                         const MultiplicativeModel& factor) {
  const auto joint = doms.try_joint_size(factor.scope());
  if (!joint || factor.elements().size() != *joint) return false;
  std::vector<VarId> constrained;
  for (VarId v : factor.scope()) {
    if (doms.card(v) > 1) constrained.push_back(v);
  }
  for (const auto& element : factor.elements()) {
    if (element.clause.arity() != constrained.size()) return false;
    for (const auto& c : element.clause.constraints()) {
      if (c.values.size() != 1) return false;
    }
  }
  return true;
}

bool write_table_block(std::ostream& os, const DomainTable& doms,
                       const MultiplicativeModel& factor) {
  if (!is_structural_table(doms, factor)) return false;
  os << "TABLE " << factor.scope().size();
  for (VarId v : factor.scope()) os << ' ' << v;
  os << '\n';
  for (double v : to_table(doms, factor)) os << fmt(v) << '\n';
  return true;
}

bool write_noisy_or_block(std::ostream& os, const DomainTable& doms,
                          const MultiplicativeModel& factor) {
  VarId child = -1;
  double leak = 1.0;
  for (const auto& element : factor.elements()) {
    const auto constraints = element.clause.constraints();
    if (constraints.size() == 1 && constraints[0].values ==
                                       std::vector<Value>{0}) {
      if (child != -1) return false;
      child = constraints[0].var;
      leak = element.gamma;
    }
  }
  if (child == -1 || doms.card(child) != 2) return false;
  std::vector<VarId> parents;
  for (VarId v : factor.scope()) {
    if (v != child) parents.push_back(v);
  }
  const std::size_t m = parents.size();
  if (m > 63 ||
      factor.elements().size() != (std::uint64_t{1} << m) + m + 1) {
    return false;
  }
  std::vector<double> inhibitors(m, -1.0);
  for (const auto& element : factor.elements()) {
    const auto constraints = element.clause.constraints();
    if (constraints.size() != 2) continue;
    const auto* child_values = element.clause.allowed(child);
    if (child_values == nullptr || *child_values != std::vector<Value>{0}) {
      continue;
    }
    for (const auto& c : constraints) {
      if (c.var == child) continue;
      if (c.values != std::vector<Value>{1}) return false;
      const auto it = std::find(parents.begin(), parents.end(), c.var);
      inhibitors[it - parents.begin()] = element.gamma;
    }
  }
  for (double q : inhibitors) {
    if (q < 0) return false;
  }
  os << "NOISYOR " << child << ' ' << m;
  for (VarId p : parents) os << ' ' << p;
  os << ' ' << fmt(leak);
  for (double q : inhibitors) os << ' ' << fmt(q);
  os << '\n';
  return true;
}

bool write_loglinear_block(std::ostream& os,
                           const MultiplicativeModel& factor) {
  double mu = 0.0;
  bool saw_top = false;
  std::vector<std::pair<const Element*, double>> terms;
  for (const auto& element : factor.elements()) {
    if (!(element.gamma > 0)) return false;
    const double weight = std::log(element.gamma);
    // The block stores log weights; only usable when exponentiating the
    // written weight reproduces the parameter bit-exactly.
    if (std::exp(weight) != element.gamma) return false;
    if (element.clause.is_top()) {
      saw_top = true;
      mu = weight;
      continue;
    }
    for (const auto& c : element.clause.constraints()) {
      if (c.values.size() != 1) return false;
    }
    terms.emplace_back(&element, weight);
  }
  if (!saw_top) return false;
  os << "LOGLIN " << factor.scope().size();
  for (VarId v : factor.scope()) os << ' ' << v;
  os << ' ' << terms.size() + 1 << '\n';
  os << fmt(mu) << " 0\n";
  for (const auto& [element, lambda] : terms) {
    os << fmt(lambda);
    write_constraints(os, element->clause);
    os << '\n';
  }
  return true;
}

}  // namespace

Network parse_model(std::string_view text) {
  Tokenizer tokens(text);
  const auto head = tokens.next();
  if (!head) throw ParseError(1, "empty input");
  if (*head == "MULTMODEL") return parse_multmodel(tokens);
  if (*head == "MARKOV" || *head == "BAYES") return parse_uai(tokens);
  throw ParseError(tokens.line(),
                   "unknown header '" + std::string(*head) + "'");
}

Network parse_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

std::string write_model(const Network& net) {
  std::ostringstream os;
  os << "MULTMODEL 1\n";
  os << "VARS " << net.domains.num_vars() << '\n';
  os << "DOMS";
  for (int card : net.domains.cards()) os << ' ' << card;
  os << '\n';
  for (const auto& factor : net.factors) {
    switch (factor.kind()) {
      case ModelKind::table:
        if (write_table_block(os, net.domains, factor)) continue;
        break;
      case ModelKind::decision_graph:
        write_mult_block(os, "DGRAPH", factor);
        continue;
      case ModelKind::noisy_or:
        if (write_noisy_or_block(os, net.domains, factor)) continue;
        break;
      case ModelKind::log_linear:
        if (write_loglinear_block(os, factor)) continue;
        break;
      default:
        break;
    }
    write_mult_block(os, "MULT", factor);
  }
  return os.str();
}

bool structurally_equal(const Network& a, const Network& b,
                        bool compare_kind) {
  if (a.domains != b.domains || a.factors.size() != b.factors.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    const auto& fa = a.factors[i];
    const auto& fb = b.factors[i];
    if (fa.scope() != fb.scope() || fa.elements() != fb.elements()) {
      return false;
    }
    if (compare_kind && fa.kind() != fb.kind()) return false;
  }
  return true;
}

}  // namespace multmodel
