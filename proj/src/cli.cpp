#include "multmodel/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "multmodel/builders.hpp"
#include "multmodel/engine.hpp"
#include "multmodel/errors.hpp"
#include "multmodel/generator.hpp"
#include "multmodel/io.hpp"
#include "multmodel/oracle.hpp"
#include "multmodel/table_engine.hpp"

namespace multmodel {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<VarId> parse_id_list(const std::string& text) {
  std::vector<VarId> ids;
  if (text.empty()) return ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      ids.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad variable id '" + item + "'");
    }
  }
  return ids;
}

Instance parse_evidence(const std::string& text, const DomainTable& doms) {
  std::vector<std::pair<VarId, Value>> items;
  if (text.empty()) return Instance();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw UsageError("evidence must look like var=value, got '" + item +
                       "'");
    }
    try {
      items.emplace_back(std::stoi(item.substr(0, eq)),
                         std::stoi(item.substr(eq + 1)));
    } catch (const std::exception&) {
      throw UsageError("bad evidence entry '" + item + "'");
    }
  }
  return Instance::from_pairs(doms, items);
}

OrderingHeuristic parse_heuristic(const std::string& name) {
  if (name == "given") return OrderingHeuristic::given;
  if (name == "min-degree") return OrderingHeuristic::min_degree;
  if (name == "min-fill") return OrderingHeuristic::min_fill;
  throw UsageError("unknown heuristic '" + name + "'");
}

Network with_zeros_replaced(const Network& net, double epsilon) {
  Network out;
  out.domains = net.domains;
  for (const auto& factor : net.factors) {
    std::vector<Element> elements = factor.elements();
    for (auto& element : elements) {
      if (element.gamma == 0.0) element.gamma = epsilon;
    }
    out.factors.push_back(MultiplicativeModel::unchecked(
        factor.scope(), std::move(elements), factor.kind()));
  }
  return out;
}

void print_values(std::ostream& out, const DomainTable& doms,
                  std::span<const VarId> query,
                  std::span<const double> values) {
  const auto old_precision = out.precision(12);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Instance q = instance_at(doms, query, i);
    out << "  " << q.str() << "  " << values[i] << '\n';
  }
  out.precision(old_precision);
}

void print_trace(std::ostream& out, const EliminationTrace& trace) {
  for (const auto& step : trace.steps) {
    out << "  eliminate " << step.var << ": candidates=" << step.candidate_count
        << " emitted=" << step.emitted_count
        << " mults=" << step.multiplications << " adds=" << step.additions
        << " closures=[";
    for (std::size_t i = 0; i < step.closure_sizes.size(); ++i) {
      if (i > 0) out << ' ';
      out << step.closure_sizes[i];
    }
    out << "] table-path=" << (step.table_path ? "yes" : "no") << '\n';
  }
  out << "  totals: mults=" << trace.total_multiplications()
      << " adds=" << trace.total_additions() << '\n';
}

double max_rel_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

struct QueryArgs {
  std::string model;
  std::string query;
  std::string evidence;
  std::string heuristic = "min-degree";
  std::string order;
  double epsilon_zero = 0.0;
  bool no_table_path = false;
};

int cmd_query(const QueryArgs& args, std::ostream& out) {
  const Network net = parse_model_file(args.model);
  const std::vector<VarId> query = parse_id_list(args.query);
  if (query.empty()) throw UsageError("--query must name a variable");
  const Instance evidence = parse_evidence(args.evidence, net.domains);

  EngineOptions options;
  options.heuristic = parse_heuristic(args.heuristic);
  options.order = parse_id_list(args.order);
  options.eliminate.table_specialization = !args.no_table_path;

  QueryResult result;
  try {
    result = run_query(net, query, evidence, options);
  } catch (const DegenerateZero&) {
    if (!(args.epsilon_zero > 0)) throw;
    result = run_query(with_zeros_replaced(net, args.epsilon_zero), query,
                       evidence, options);
  }

  out << "elimination trace:\n";
  print_trace(out, result.trace);
  out << "unnormalized:\n";
  print_values(out, net.domains, result.query, result.values);
  out << "normalizer: " << result.normalizer << '\n';
  const QueryResult normalized = normalize(result);
  out << "normalized:\n";
  print_values(out, net.domains, normalized.query, normalized.values);
  return 0;
}

int cmd_convert(const std::string& model_path, const std::string& to,
                double tol, const std::string& output, std::ostream& out) {
  const Network net = parse_model_file(model_path);
  Network converted;
  converted.domains = net.domains;
  for (const auto& factor : net.factors) {
    if (to == "table") {
      converted.factors.push_back(from_table(
          net.domains, factor.scope(), to_table(net.domains, factor)));
    } else if (to == "positive") {
      converted.factors.push_back(to_positive(net.domains, factor, tol));
    } else if (to == "mult") {
      converted.factors.push_back(MultiplicativeModel::unchecked(
          factor.scope(), factor.elements(), ModelKind::general));
    } else {
      throw UsageError("--to must be table, positive, or mult");
    }
  }
  const std::string text = write_model(converted);
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream file(output, std::ios::binary);
    if (!file) throw Error("cannot write " + output);
    file << text;
  }
  return 0;
}

int cmd_stats(const std::string& model_path, std::ostream& out) {
  const Network net = parse_model_file(model_path);
  out << "variables: " << net.domains.num_vars() << '\n';
  out << "factors: " << net.factors.size() << '\n';
  for (std::size_t i = 0; i < net.factors.size(); ++i) {
    const auto& factor = net.factors[i];
    const ModelStats s = stats(net.domains, factor);
    out << "factor " << i << ": kind=" << to_string(factor.kind())
        << " scope=" << s.scope_size << " elements=" << s.element_count
        << " max-arity=" << s.max_arity << " naive-ops=" << s.naive_op_count
        << (s.naive_op_count_is_bound ? " (upper bound)" : "") << '\n';
  }
  // interaction graph: an edge joins two variables co-constrained by some
  // element
  std::vector<std::set<VarId>> adjacent(net.domains.num_vars());
  for (const auto& factor : net.factors) {
    for (const auto& element : factor.elements()) {
      const auto vars = element.clause.constrained_vars();
      for (std::size_t a = 0; a < vars.size(); ++a) {
        for (std::size_t b = a + 1; b < vars.size(); ++b) {
          adjacent[vars[a]].insert(vars[b]);
          adjacent[vars[b]].insert(vars[a]);
        }
      }
    }
  }
  std::size_t edges = 0;
  std::size_t max_degree = 0;
  for (const auto& n : adjacent) {
    edges += n.size();
    max_degree = std::max(max_degree, n.size());
  }
  out << "interaction graph: edges=" << edges / 2
      << " max-degree=" << max_degree << '\n';
  return 0;
}

int cmd_validate(const std::string& model_path, std::ostream& out) {
  const Network net = parse_model_file(model_path);
  bool ok = true;
  for (std::size_t i = 0; i < net.factors.size(); ++i) {
    const auto& factor = net.factors[i];
    std::string partition;
    try {
      partition = validate_partition(net.domains, factor) ? "yes" : "no";
    } catch (const ValidationSkipped&) {
      partition = "skipped";
    }
    bool finite = true;
    for (const auto& element : factor.elements()) {
      if (!std::isfinite(element.gamma)) finite = false;
    }
    if (!finite) ok = false;
    if (factor.kind() == ModelKind::decision_graph && partition == "no") {
      ok = false;
    }
    out << "factor " << i << ": kind=" << to_string(factor.kind())
        << " partition=" << partition
        << " finite-parameters=" << (finite ? "yes" : "no") << '\n';
  }
  out << (ok ? "model ok\n" : "model invalid\n");
  return ok ? 0 : 3;
}

struct BenchArgs {
  std::string model;
  std::string gen;
  std::uint64_t seed = 1;
  int vars = 8;
  int factors = 6;
  int diseases = 10;
  int findings = 15;
  int parents_min = 4;
  int parents_max = 8;
  bool windowed = false;
  std::string query;
  std::string evidence;
  std::string save;
};

int cmd_bench(const BenchArgs& args, std::ostream& out) {
  Network net;
  std::vector<VarId> query;
  Instance evidence;
  if (!args.model.empty()) {
    net = parse_model_file(args.model);
    query = parse_id_list(args.query.empty() ? "0" : args.query);
    evidence = parse_evidence(args.evidence, net.domains);
  } else if (args.gen == "tables") {
    RandomNetworkParams params;
    params.min_vars = params.max_vars = args.vars;
    params.min_factors = params.max_factors = args.factors;
    params.tables_only = true;
    net = random_network(args.seed, params);
    query = parse_id_list(args.query.empty() ? "0" : args.query);
    evidence = parse_evidence(args.evidence, net.domains);
  } else if (args.gen == "noisyor") {
    BipartiteNoisyOrParams params;
    params.diseases = args.diseases;
    params.findings = args.findings;
    params.parents_min = args.parents_min;
    params.parents_max = args.parents_max;
    params.windowed = args.windowed;
    net = noisy_or_bipartite(args.seed, params);
    query = parse_id_list(args.query.empty() ? "0" : args.query);
    if (args.evidence.empty()) {
      std::vector<std::pair<VarId, Value>> negatives;
      for (int j = 0; j < args.findings; ++j) {
        negatives.emplace_back(args.diseases + j, 0);
      }
      evidence = Instance::from_pairs(net.domains, negatives);
    } else {
      evidence = parse_evidence(args.evidence, net.domains);
    }
  } else {
    throw UsageError("bench needs --model or --gen tables|noisyor");
  }
  if (!args.save.empty()) {
    std::ofstream file(args.save, std::ios::binary);
    if (!file) throw Error("cannot write " + args.save);
    file << write_model(net);
  }

  const QueryResult mult = run_query(net, query, evidence, EngineOptions());
  std::vector<VarId> order;
  for (const auto& step : mult.trace.steps) order.push_back(step.var);
  const TableVeResult table = table_ve(net, query, evidence, order);

  const double diff = max_rel_diff(mult.values, table.values);
  out << "order:";
  for (VarId v : order) out << ' ' << v;
  out << '\n';
  out << "multiplicative engine:\n";
  print_trace(out, mult.trace);
  out << "table engine:\n";
  for (const auto& step : table.steps) {
    out << "  eliminate " << step.var << ": cells=" << step.merged_joint
        << " mults=" << step.multiplications << " adds=" << step.additions
        << '\n';
  }
  out << "  totals: mults=" << table.total_multiplications()
      << " adds=" << table.total_additions() << '\n';
  out << "max relative value difference: " << diff << '\n';
  out << "values agree <= 1e-12: " << (diff <= 1e-12 ? "yes" : "no") << '\n';
  bool candidates_equal = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (mult.trace.steps[i].candidate_count != table.steps[i].merged_joint) {
      candidates_equal = false;
    }
  }
  out << "candidate counts equal: " << (candidates_equal ? "yes" : "no")
      << '\n';
  return 0;
}

int cmd_oracle(const std::string& model_path, const std::string& query_csv,
               const std::string& evidence_csv, std::ostream& out) {
  const Network net = parse_model_file(model_path);
  std::vector<VarId> query = parse_id_list(query_csv);
  if (query.empty()) throw UsageError("--query must name a variable");
  const Instance evidence = parse_evidence(evidence_csv, net.domains);
  const std::vector<double> values = marginal(net, query, evidence);
  std::sort(query.begin(), query.end());
  query.erase(std::unique(query.begin(), query.end()), query.end());
  out << "unnormalized:\n";
  print_values(out, net.domains, query, values);
  double total = 0.0;
  for (double v : values) total += v;
  out << "normalizer: " << total << '\n';
  if (total == 0.0) {
    throw ZeroEvidenceProbability("query result sums to zero");
  }
  std::vector<double> normalized = values;
  for (double& v : normalized) v /= total;
  out << "normalized:\n";
  print_values(out, net.domains, query, normalized);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact inference for product-form factor models"};
  app.require_subcommand(1);

  QueryArgs query_args;
  auto* query_cmd =
      app.add_subcommand("query", "posterior of query variables");
  query_cmd->add_option("--model", query_args.model, "model file")->required();
  query_cmd->add_option("--query", query_args.query, "query ids, e.g. 1,2")
      ->required();
  query_cmd->add_option("--evidence", query_args.evidence,
                        "evidence, e.g. 0=1,3=0");
  query_cmd->add_option("--heuristic", query_args.heuristic,
                        "given | min-degree | min-fill");
  query_cmd->add_option("--order", query_args.order,
                        "explicit elimination order for --heuristic given");
  query_cmd->add_option("--epsilon-zero", query_args.epsilon_zero,
                        "replace exact-zero parameters with this value and "
                        "retry on a degenerate division (try 1e-300)");
  query_cmd->add_flag("--no-table-path", query_args.no_table_path,
                      "disable the dense fast path for full-table buckets");

  std::string convert_model, convert_to, convert_output;
  double convert_tol = 1e-9;
  auto* convert_cmd =
      app.add_subcommand("convert", "rewrite factors to another kind");
  convert_cmd->add_option("--model", convert_model, "model file")->required();
  convert_cmd->add_option("--to", convert_to, "table | positive | mult")
      ->required();
  convert_cmd->add_option("--tol", convert_tol,
                          "unit-pruning tolerance for positive");
  convert_cmd->add_option("--output", convert_output,
                          "output path (default stdout)");

  std::string stats_model;
  auto* stats_cmd = app.add_subcommand("stats", "per-factor statistics");
  stats_cmd->add_option("--model", stats_model, "model file")->required();

  std::string validate_model;
  auto* validate_cmd =
      app.add_subcommand("validate", "partition and domain checks");
  validate_cmd->add_option("--model", validate_model, "model file")
      ->required();

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand(
      "bench", "compare against the reference table engine");
  bench_cmd->add_option("--model", bench_args.model, "model file");
  bench_cmd->add_option("--gen", bench_args.gen,
                        "generate a network: tables | noisyor");
  bench_cmd->add_option("--seed", bench_args.seed, "generator seed");
  bench_cmd->add_option("--vars", bench_args.vars, "variables (tables)");
  bench_cmd->add_option("--factors", bench_args.factors, "factors (tables)");
  bench_cmd->add_option("--diseases", bench_args.diseases,
                        "diseases (noisyor)");
  bench_cmd->add_option("--findings", bench_args.findings,
                        "findings (noisyor)");
  bench_cmd->add_option("--parents-min", bench_args.parents_min,
                        "min parents per finding");
  bench_cmd->add_option("--parents-max", bench_args.parents_max,
                        "max parents per finding");
  bench_cmd->add_flag("--windowed", bench_args.windowed,
                      "deterministic windows of exactly --parents-min");
  bench_cmd->add_option("--query", bench_args.query, "query ids");
  bench_cmd->add_option("--evidence", bench_args.evidence, "evidence");
  bench_cmd->add_option("--save", bench_args.save,
                        "write the generated model here");

  std::string oracle_model, oracle_query, oracle_evidence;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "brute-force reference marginal");
  oracle_cmd->add_option("--model", oracle_model, "model file")->required();
  oracle_cmd->add_option("--query", oracle_query, "query ids")->required();
  oracle_cmd->add_option("--evidence", oracle_evidence, "evidence");

  try {
    app.parse(argc, argv);
    if (query_cmd->parsed()) return cmd_query(query_args, out);
    if (convert_cmd->parsed()) {
      return cmd_convert(convert_model, convert_to, convert_tol,
                         convert_output, out);
    }
    if (stats_cmd->parsed()) return cmd_stats(stats_model, out);
    if (validate_cmd->parsed()) return cmd_validate(validate_model, out);
    if (bench_cmd->parsed()) return cmd_bench(bench_args, out);
    if (oracle_cmd->parsed()) {
      return cmd_oracle(oracle_model, oracle_query, oracle_evidence, out);
    }
    err << "no command given\n";
    return 1;
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const OrderError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateZero& e) {
    err << "numeric degeneracy: " << e.what() << '\n';
    return 4;
  } catch (const ZeroEvidenceProbability& e) {
    err << "numeric degeneracy: " << e.what() << '\n';
    return 4;
  } catch (const TooLarge& e) {
    err << "capacity: " << e.what() << '\n';
    return 5;
  } catch (const CapacityExceeded& e) {
    err << "capacity: " << e.what() << '\n';
    return 5;
  } catch (const ValidationSkipped& e) {
    err << "capacity: " << e.what() << '\n';
    return 5;
  } catch (const TooManyParents& e) {
    err << "invalid model: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "invalid model: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace multmodel
