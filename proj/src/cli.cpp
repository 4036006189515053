#include "sqfree/cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqfree/collision_stats.hpp"
#include "sqfree/error.hpp"
#include "sqfree/local_density.hpp"
#include "sqfree/polynomial.hpp"
#include "sqfree/quad_diophantine.hpp"
#include "sqfree/squarefree_count.hpp"
#include "sqfree/verify.hpp"

namespace sqfree::cli {

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string command;
  std::string poly;
  std::size_t arity = 0;
  std::string box;
  std::string boxes;
  std::string P;
  std::string modulus;
  std::string coeffs;
  std::string c = "1";
  unsigned k = 3;
  std::string cstar;
  std::uint64_t cutoff = 1000;
  std::string method = "exact";
  std::string format;
  std::string out;
  std::string histogram;
  std::string suite = "all";
  std::uint64_t max_points = 100'000'000;
  std::string max_value = "100000000000000";
  double threshold = 1e-3;
  unsigned threads = 1;
  bool brute = false;
  bool allow_degenerate = false;
  bool diagnostic = false;
};

void require(bool present, const std::string& what) {
  if (!present) throw ParseError("missing required option " + what, 0);
}

std::vector<i128> parse_list(const std::string& text, char sep = ',') {
  std::vector<i128> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) values.push_back(parse_i128(item));
  if (values.empty()) throw ParseError("empty list '" + text + "'", 0);
  return values;
}

Polynomial polynomial_of(const Options& o) {
  require(!o.poly.empty(), "--poly");
  if (o.arity != 0) return parse_polynomial(o.poly, o.arity);
  return parse_polynomial(o.poly);
}

Box box_of(const std::string& text, std::size_t num_vars) {
  auto bounds = parse_list(text);
  if (bounds.size() == 1) bounds.assign(num_vars, bounds[0]);
  if (bounds.size() != num_vars) {
    throw DimensionError("box has " + std::to_string(bounds.size()) + " bounds for " + std::to_string(num_vars) +
                         " variables");
  }
  for (i128 b : bounds) {
    if (b < 1) throw PreconditionError("box bounds must be positive");
  }
  return Box(bounds);
}

CountConfig count_config(const Options& o) {
  CountConfig config;
  config.max_points = o.max_points;
  config.max_value = static_cast<u128>(parse_i128(o.max_value));
  config.threads = o.threads;
  return config;
}

std::string format_of(const Options& o, const char* fallback) { return o.format.empty() ? fallback : o.format; }

std::string cmd_rho(const Options& o) {
  const Polynomial p = polynomial_of(o);
  require(!o.modulus.empty(), "--modulus");
  const i128 d = parse_i128(o.modulus);
  if (d < 1) throw PreconditionError("modulus must be positive");
  DensityConfig config;
  config.max_points = o.max_points;
  config.threads = o.threads;
  const auto r = o.brute ? rho_bruteforce(p, static_cast<u128>(d), config) : rho(p, static_cast<u128>(d), config);
  if (format_of(o, "json") == "csv") {
    return "modulus,count,method\n" + to_string(r.modulus) + "," + to_string(r.count) + "," + to_string(r.method) + "\n";
  }
  json j;
  j["polynomial"] = render(p);
  j["modulus"] = to_string(r.modulus);
  j["count"] = to_string(r.count);
  j["method"] = to_string(r.method);
  return j.dump(2) + "\n";
}

std::string cmd_series(const Options& o) {
  const Polynomial p = polynomial_of(o);
  const auto report = singular_series(p, o.cutoff, count_config(o).density());
  if (format_of(o, "json") == "csv") {
    std::string out = "p,rho_p2\n";
    for (const auto& f : report.factors) out += std::to_string(f.prime) + "," + to_string(f.rho_p2) + "\n";
    return out;
  }
  return to_json(report) + "\n";
}

std::string cmd_count(const Options& o, bool with_series) {
  const Polynomial p = polynomial_of(o);
  require(!o.box.empty(), "--box");
  const Box box = box_of(o.box, p.num_vars());
  const CountConfig config = count_config(o);
  const CountReport report = o.method == "sieve" ? count_sieve(p, box, config)
                             : with_series        ? asymptotic_report(p, box, o.cutoff, config)
                                                  : count_exact(p, box, config);
  if (!o.histogram.empty()) {
    std::ofstream h(o.histogram);
    if (!h) throw PreconditionError("cannot open " + o.histogram);
    h << histogram_csv(build_value_table(p, box, config.enumeration()));
  }
  if (format_of(o, "json") == "csv") {
    std::string out = "method,exact_count,total_points,zero_value_points,predicted,relative_error\n";
    out += std::string(to_string(report.method)) + "," + to_string(report.exact_count) + "," +
           to_string(report.total_points) + "," + to_string(report.zero_value_points) + ",";
    if (report.cutoff) out += decimal(report.predicted) + "," + decimal(report.relative_error);
    else out += ",";
    return out + "\n";
  }
  return to_json(report) + "\n";
}

QuadInstance quad_of(const Options& o) {
  require(!o.coeffs.empty(), "--coeffs");
  const auto c = parse_list(o.coeffs);
  if (c.size() != 6) throw DimensionError("--coeffs needs exactly six values a,b,c,d,e,f");
  return {c[0], c[1], c[2], c[3], c[4], c[5]};
}

i128 single_P(const Options& o) {
  require(!o.P.empty(), "--P");
  const auto values = parse_list(o.P);
  if (values.size() != 1) throw DimensionError("--P takes one value here");
  return values[0];
}

std::string cmd_quadcount(const Options& o) {
  const QuadInstance q = quad_of(o);
  const i128 P = single_P(o);
  const auto r = count_solutions(q, P);
  const std::string brute = o.brute ? to_string(count_solutions_bruteforce(q, P)) : "";
  if (format_of(o, "csv") == "json") {
    json j;
    j["coeffs"] = {to_string(q.a), to_string(q.b), to_string(q.c), to_string(q.d), to_string(q.e), to_string(q.f)};
    j["P"] = to_string(P);
    j["case"] = to_string(r.qcase.tag);
    j["count"] = to_string(r.count);
    if (o.brute) j["brute_count"] = brute;
    return j.dump(2) + "\n";
  }
  std::string out = o.brute ? "a,b,c,d,e,f,P,case,count,brute_count\n" : "a,b,c,d,e,f,P,case,count\n";
  for (i128 v : {q.a, q.b, q.c, q.d, q.e, q.f, P}) out += to_string(v) + ",";
  out += std::string(to_string(r.qcase.tag)) + "," + to_string(r.count);
  if (o.brute) out += "," + brute;
  return out + "\n";
}

std::string cmd_quadsolve(const Options& o) {
  const QuadInstance q = quad_of(o);
  const i128 P = single_P(o);
  const auto solutions = list_solutions(q, P);
  if (format_of(o, "json") == "csv") {
    std::string out = "x,y\n";
    for (const auto& [x, y] : solutions) out += to_string(x) + "," + to_string(y) + "\n";
    return out;
  }
  json j;
  j["case"] = to_string(classify(q).tag);
  j["count"] = solutions.size();
  json rows = json::array();
  for (const auto& [x, y] : solutions) rows.push_back({to_string(x), to_string(y)});
  j["solutions"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string cmd_collisions(const Options& o) {
  require(!o.P.empty(), "--P");
  EnumerationConfig config{o.max_points, o.threads};
  std::vector<std::pair<i128, u128>> samples;
  std::size_t s = 0;
  const bool mixed = !o.cstar.empty();
  const Polynomial cstar = mixed ? parse_polynomial(o.cstar, o.arity ? std::optional(o.arity) : std::nullopt)
                                 : polynomial_of(o);
  for (i128 P : parse_list(o.P)) {
    const auto r = mixed ? collision_count_L(parse_i128(o.c), o.k, cstar, P, config)
                         : collision_count_M(cstar, P, o.allow_degenerate, config);
    s = r.box.size();
    samples.emplace_back(P, r.count);
  }
  if (format_of(o, "json") == "csv") return exponent_csv(samples);
  json j;
  j["statistic"] = mixed ? "L" : "M";
  json rows = json::array();
  for (const auto& [P, count] : samples) rows.push_back({{"P", to_string(P)}, {"count", to_string(count)}});
  j["samples"] = std::move(rows);
  if (samples.size() >= 3) {
    const double reference = 2.0 * static_cast<double>(s) - (mixed ? 3.0 : 2.0);
    j["fit"] = json::parse(to_json(exponent_fit(samples, reference)));
  }
  return j.dump(2) + "\n";
}

std::string cmd_thm13(const Options& o) {
  const Polynomial p = polynomial_of(o);
  require(!o.boxes.empty(), "--boxes");
  std::vector<Box> boxes;
  std::stringstream ss(o.boxes);
  std::string item;
  while (std::getline(ss, item, ';')) boxes.push_back(box_of(item, p.num_vars()));
  const auto table = theorem13_experiment(p, boxes, o.cutoff, o.threshold, count_config(o));
  if (format_of(o, "json") == "csv") {
    std::string out = "box,count,total_points,density,upper_bound\n";
    for (const auto& r : table.rows) {
      std::string b;
      for (i128 v : r.box.bounds()) b += (b.empty() ? "" : " ") + to_string(v);
      out += b + "," + to_string(r.count) + "," + to_string(r.total_points) + "," + decimal(r.density) + "," +
             decimal(r.upper_bound) + "\n";
    }
    return out;
  }
  return to_json(table) + "\n";
}

std::string cmd_thm14(const Options& o) {
  require(!o.cstar.empty(), "--cstar");
  require(!o.P.empty(), "--P");
  const Polynomial cstar = parse_polynomial(o.cstar, o.arity ? std::optional(o.arity) : std::nullopt);
  const auto table =
      theorem14_experiment(parse_i128(o.c), o.k, cstar, parse_list(o.P), o.cutoff, o.diagnostic, count_config(o));
  if (format_of(o, "csv") == "json") return to_json(table) + "\n";
  return theorem14_csv(table);
}

int cmd_verify(const Options& o, std::string& body) {
  std::vector<std::string> names;
  if (o.suite == "all") names = suite_names();
  else names.push_back(o.suite);
  bool all = true;
  for (const auto& name : names) {
    const auto r = run_suite(name, o.threads);
    all = all && r.passed;
    body += std::string(r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail + "\n";
  }
  return all ? 0 : 1;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return 2;
    case ErrorKind::Guard:
    case ErrorKind::Overflow: return 3;
    case ErrorKind::Precondition:
    case ErrorKind::Dimension: return 4;
  }
  return 1;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Squarefree values of polynomials: local densities, exact counts and collision statistics", "sqfree"};
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "Read options from a key=value file; flags given on the command line win");
  app.add_option("command", o.command, "rho, series, count, quadcount, quadsolve, collisions, thm13, thm14 or verify")
      ->required()
      ->check(CLI::IsMember({"rho", "series", "count", "quadcount", "quadsolve", "collisions", "thm13", "thm14",
                             "verify"}));
  app.add_option("--poly", o.poly, "Polynomial such as \"x1^3 + 2*x2^3\"");
  app.add_option("--vars", o.arity, "Number of variables (default: largest index in the polynomial)");
  app.add_option("--box", o.box, "Box half-widths P1,...,Ps or one value for a cube");
  app.add_option("--boxes", o.boxes, "Semicolon-separated boxes for thm13");
  app.add_option("--P", o.P, "Half-width, or a comma-separated list");
  app.add_option("--modulus", o.modulus, "Modulus d for rho");
  app.add_option("--coeffs", o.coeffs, "Quadratic coefficients a,b,c,d,e,f");
  app.add_option("--c", o.c, "Coefficient c of c*x1^k");
  app.add_option("--k", o.k, "Exponent k (3 or 4)");
  app.add_option("--cstar", o.cstar, "Cubic form in x2..xs");
  auto* cutoff = app.add_option("--cutoff", o.cutoff, "Largest prime in the truncated singular series");
  app.add_option("--method", o.method, "Counting method")->check(CLI::IsMember({"exact", "sieve"}));
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out, "Write the report here instead of stdout");
  app.add_option("--histogram", o.histogram, "Also write the value histogram as CSV");
  app.add_option("--suite", o.suite, "Verification suite name or all");
  app.add_option("--max-points", o.max_points, "Enumeration guard")->envname("SQFREE_MAX_POINTS");
  app.add_option("--max-value", o.max_value, "Largest |P(x)| the sieve accepts");
  app.add_option("--threshold", o.threshold, "thm13: accept inputs whose truncated series is below this");
  app.add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_flag("--brute", o.brute, "Also run (or only run) the exhaustive method");
  app.add_flag("--allow-degenerate", o.allow_degenerate, "Permit cube-of-linear-form inputs for collisions");
  app.add_flag("--diagnostic", o.diagnostic, "thm14: add the prime band table");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "Parse", e.what());
    return 2;
  }

  try {
    std::string body;
    int status = 0;
    if (o.command == "rho") body = cmd_rho(o);
    else if (o.command == "series") body = cmd_series(o);
    else if (o.command == "count") body = cmd_count(o, cutoff->count() > 0);
    else if (o.command == "quadcount") body = cmd_quadcount(o);
    else if (o.command == "quadsolve") body = cmd_quadsolve(o);
    else if (o.command == "collisions") body = cmd_collisions(o);
    else if (o.command == "thm13") body = cmd_thm13(o);
    else if (o.command == "thm14") body = cmd_thm14(o);
    else status = cmd_verify(o, body);
    if (o.out.empty()) {
      out << body;
    } else {
      std::ofstream f(o.out);
      if (!f) throw PreconditionError("cannot open " + o.out);
      f << body;
    }
    return status;
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error(err, "Internal", e.what());
    return 1;
  }
}

}  // namespace sqfree::cli
