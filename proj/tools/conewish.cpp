// Command-line front end: poset inspection, axiom checks, cone factorizations,
// Wishart sampling/evaluation and the characterization suite.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <tuple>

#include "conewish/algebra.hpp"
#include "conewish/characterize.hpp"
#include "conewish/cone.hpp"
#include "conewish/error.hpp"
#include "conewish/io.hpp"
#include "conewish/wishart.hpp"

namespace {

using namespace conewish;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitCheckFailed = 3;

struct RunConfig {
  std::string command;
  std::string poset_path;
  std::string lambda;
  std::string lambda_prime;
  std::string sigma = "standard";
  std::uint64_t seed = 1;
  std::size_t draws = 1000;
  std::size_t trials = 100;
  std::string out;
  double tolerance = -1.0;
  std::string suite = "standard";
  std::string theta = "0";
  std::vector<std::string> points;
  std::string matrix;
};

json config_json(const RunConfig& c, const Poset& p) {
  return {{"command", c.command},     {"poset", io::poset_to_json(p)}, {"poset_hash", p.content_hash()},
          {"lambda", c.lambda},       {"lambda_prime", c.lambda_prime}, {"sigma", c.sigma},
          {"seed", c.seed},           {"draws", c.draws},             {"trials", c.trials},
          {"tolerance", c.tolerance}, {"suite", c.suite}};
}

std::string set_string(const Poset& p, const std::vector<Index>& xs) {
  std::string s = "{";
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? "," : "") + p.label(xs[k]);
  return s + "}";
}

PosetPtr load_poset(const RunConfig& c) { return share(io::read_poset(c.poset_path)); }

Multiplier load_multiplier(const PosetPtr& poset, const std::string& text) {
  const auto values = io::parse_number_list(text);
  return Multiplier(poset, Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
}

WishartModel load_model(const RunConfig& c, const PosetPtr& poset) {
  Multiplier chi = load_multiplier(poset, c.lambda);
  if (c.sigma == "standard") return WishartModel::Standard(std::move(chi));
  return WishartModel(std::move(chi), ConePoint(io::read_matrix(c.sigma, poset)));
}

void emit(const RunConfig& c, const std::string& name, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::filesystem::create_directories(c.out);
  std::ofstream(std::filesystem::path(c.out) / name) << content << '\n';
}

int cmd_poset(const RunConfig& c, bool describe) {
  const PosetPtr poset = load_poset(c);
  const Poset& p = *poset;
  const auto witness = check_condition_f(p);
  std::vector<std::string> constraints = multiplier_constraints(p);
  std::string x;
  for (std::size_t k = 0; k < constraints.size(); ++k) x += (k ? ", " : "") + constraints[k];
  std::string f = "ok";
  if (witness)
    f = "violated between " + p.label(witness->lower) + " and " + p.label(witness->upper) + " (" +
        format_path(p, witness->first_path) + " | " + format_path(p, witness->second_path) + ")";
  std::cout << "F: " << f << "; sources: " << set_string(p, p.sources()) << "; X: " << x << '\n';
  if (describe) {
    const Separators s = separators(p);
    const PosetDims d = dims(p);
    std::cout << "elements (linear extension): " << set_string(p, [&] {
      std::vector<Index> all(p.size());
      for (Index i = 0; i < p.size(); ++i) all[i] = i;
      return all;
    }()) << '\n';
    std::cout << "covers:";
    for (const auto& [a, b] : p.cover_edges()) std::cout << ' ' << p.label(a) << '<' << p.label(b);
    std::cout << '\n';
    std::cout << "minimal (℘): " << set_string(p, p.minimal_elements()) << '\n';
    std::cout << "maximal: " << set_string(p, p.maximal_elements()) << '\n';
    std::cout << "separators: " << set_string(p, s.separators) << '\n';
    std::cout << "S: " << set_string(p, s.minimal) << '\n';
    std::cout << "standard multiplication: " << (is_standard_mult_equivalent(p) ? "yes" : "no") << '\n';
    std::cout << std::left << std::setw(10) << "element" << std::setw(8) << "n_.i" << std::setw(8) << "n_i."
              << std::setw(8) << "n_i" << "S_i\n";
    for (Index i = 0; i < p.size(); ++i)
      std::cout << std::setw(10) << p.label(i) << std::setw(8) << d.n_dot_i[i] << std::setw(8) << d.n_i_dot[i]
                << std::setw(8) << d.n_i[i] << set_string(p, s.per_element[i]) << '\n';
    std::cout << "n_..: " << d.n_dotdot << '\n';
  }
  return witness ? kExitDomain : kExitOk;
}

int cmd_algebra_verify(const RunConfig& c) {
  const PosetPtr poset = load_poset(c);
  const double tol = c.tolerance > 0 ? c.tolerance : kAxiomTolerance;
  const AxiomReport r = verify_axioms(poset, c.trials, c.seed, tol);
  static const char* const kNames[] = {"i   tr(AA*) > 0", "ii  (AB)* = B*A*", "iii tr(AB) = tr(BA)",
                                       "iv  tr(A(BC)) = tr((AB)C)", "v   (ST)U = S(TU)", "vi  T(UU*) = (TU)U*"};
  json report = {{"config", config_json(c, *poset)}, {"axioms", json::array()}};
  std::ostringstream text;
  text << std::left;
  for (int a = 0; a < 6; ++a) {
    const AxiomCheck& ax = r.axioms[a];
    text << (ax.passed ? "PASS " : "FAIL ") << std::setw(28) << kNames[a] << " max residual " << std::scientific
         << std::setprecision(3) << ax.max_residual << std::defaultfloat;
    json entry = {{"axiom", a + 1}, {"passed", ax.passed}, {"max_residual", ax.max_residual}};
    if (ax.witness_entry) {
      const auto [i, j] = *ax.witness_entry;
      text << "  first failure: trial " << *ax.failing_trial << " entry (" << poset->label(i) << ","
           << poset->label(j) << ")";
      entry["failing_trial"] = *ax.failing_trial;
      entry["witness"] = {poset->label(i), poset->label(j)};
    }
    text << '\n';
    report["axioms"].push_back(entry);
  }
  std::cout << text.str();
  if (!c.out.empty()) emit(c, "axioms.json", report.dump(2));
  return r.all_passed() ? kExitOk : kExitCheckFailed;
}

int cmd_cone(const RunConfig& c, bool components) {
  const PosetPtr poset = load_poset(c);
  require_condition_f(*poset);
  const ConePoint x(io::read_matrix(c.matrix, poset), c.tolerance > 0 ? c.tolerance : kConeTolerance);
  json out = {{"poset_hash", poset->content_hash()}};
  if (!components) {
    out["unit_lower"] = io::matrix_to_json(x.factor().unit_lower);
    json d = json::object();
    for (Index i = 0; i < poset->size(); ++i) d[poset->label(i)] = x.generalized_power(i);
    out["D"] = d;
    out["T"] = io::matrix_to_json(x.lower_factor());
  } else {
    const ComponentDecomposition dec = component_decomposition(x);
    json list = json::array();
    for (const auto& comp : dec.components)
      list.push_back({{"element", poset->label(comp.element)},
                      {"kind", comp.kind == Component::Kind::Minimal ? "minimal" : "separator"},
                      {"value", io::matrix_to_json(comp.value)}});
    out["components"] = list;
    out["reconstruction_residual"] = (dec.sum() - x.matrix()).max_abs();
  }
  emit(c, components ? "components.json" : "decomposition.json", out.dump(2));
  return kExitOk;
}

int cmd_wishart_sample(const RunConfig& c) {
  const PosetPtr poset = load_poset(c);
  const WishartModel model = load_model(c, poset);
  std::ostringstream csv;
  io::write_sample_header(csv, *poset);
  for (std::size_t k = 0; k < c.draws; ++k) {
    Rng rng(c.seed, k);
    io::write_sample_row(csv, model.sample(rng).matrix());
  }
  if (c.out.empty()) {
    std::cout << csv.str();
    return kExitOk;
  }
  emit(c, "samples.csv", csv.str());
  emit(c, "manifest.json", config_json(c, *poset).dump(2));
  return kExitOk;
}

int cmd_wishart_density(const RunConfig& c) {
  const PosetPtr poset = load_poset(c);
  const WishartModel model = load_model(c, poset);
  if (c.points.empty()) throw ParseError("density needs at least one --point file");
  json out = json::array();
  for (const auto& path : c.points) {
    const ConePoint x(io::read_matrix(path, poset));
    const double ld = model.log_density(x);
    out.push_back({{"point", path}, {"log_density", ld}, {"density", std::exp(ld)}});
    std::cout << std::setprecision(17) << path << " log_density " << ld << '\n';
  }
  if (!c.out.empty()) emit(c, "density.json", json{{"config", config_json(c, *poset)}, {"results", out}}.dump(2));
  return kExitOk;
}

int cmd_wishart_laplace(const RunConfig& c) {
  const PosetPtr poset = load_poset(c);
  const WishartModel model = load_model(c, poset);
  const StructuredMatrix theta = c.theta == "0" ? StructuredMatrix(poset) : io::read_matrix(c.theta, poset);
  const double l = model.laplace_transform(theta);
  std::cout << std::setprecision(17) << l << '\n';
  if (!c.out.empty())
    emit(c, "laplace.json", json{{"config", config_json(c, *poset)}, {"theta", c.theta}, {"laplace", l}}.dump(2));
  return kExitOk;
}

int cmd_characterize(const RunConfig& c) {
  const PosetPtr poset = load_poset(c);
  const Multiplier chi = load_multiplier(poset, c.lambda);
  const Multiplier chi_prime = load_multiplier(poset, c.lambda_prime.empty() ? c.lambda : c.lambda_prime);
  CharacterizeConfig cfg;
  cfg.draws = c.draws;
  cfg.seed = c.seed;
  if (c.tolerance > 0) cfg.level = c.tolerance;
  const auto reports = run_suite(c.suite, chi, chi_prime, cfg);
  std::size_t failed = 0;
  for (const auto& r : reports) {
    std::cout << summary_line(r) << '\n';
    failed += r.passed ? 0 : 1;
  }
  std::cout << (failed ? "suite FAILED: " + std::to_string(failed) + " of " : "suite passed: all ")
            << reports.size() << " reports\n";
  if (!c.out.empty()) {
    json all = json::array();
    for (const auto& r : reports) all.push_back(to_json(r));
    emit(c, "report.json", json{{"config", config_json(c, *poset)}, {"reports", all}, {"passed", failed == 0}}.dump(2));
  }
  return failed ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conewish: Wishart laws on homogeneous cones over posets"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_poset = [&](CLI::App* s) { s->add_option("--poset", cfg.poset_path, "poset file (text or JSON)")->required(); };
  auto add_model = [&](CLI::App* s) {
    add_poset(s);
    s->add_option("--lambda", cfg.lambda, "comma-separated lambda_i in linear-extension order")->required();
    s->add_option("--sigma", cfg.sigma, "sigma matrix file, or 'standard' for e^chi");
  };

  auto* poset = app.add_subcommand("poset", "inspect a poset");
  poset->require_subcommand(1);
  auto* poset_check = poset->add_subcommand("check", "condition (F), sources and multiplier constraints");
  auto* poset_describe = poset->add_subcommand("describe", "full structural report");
  add_poset(poset_check);
  add_poset(poset_describe);

  auto* algebra = app.add_subcommand("algebra", "Vinberg algebra checks");
  algebra->require_subcommand(1);
  auto* verify = algebra->add_subcommand("verify", "randomized check of axioms i-vi");
  add_poset(verify);
  verify->add_option("--trials", cfg.trials, "random triples")->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed);
  verify->add_option("--tolerance", cfg.tolerance, "relative residual tolerance");
  verify->add_option("--out", cfg.out, "output directory");

  auto* cone = app.add_subcommand("cone", "cone factorizations");
  cone->require_subcommand(1);
  auto* decompose_cmd = cone->add_subcommand("decompose", "X = T1 D T1*");
  auto* components_cmd = cone->add_subcommand("components", "Z = sum of Z_i");
  for (auto* s : {decompose_cmd, components_cmd}) {
    add_poset(s);
    s->add_option("--matrix,--point", cfg.matrix, "matrix file (CSV or JSON)")->required();
    s->add_option("--tolerance", cfg.tolerance, "relative pivot tolerance");
    s->add_option("--out", cfg.out, "output directory");
  }

  auto* wishart = app.add_subcommand("wishart", "Wishart sampling and evaluation");
  wishart->require_subcommand(1);
  auto* sample_cmd = wishart->add_subcommand("sample", "draw samples");
  auto* density_cmd = wishart->add_subcommand("density", "log density at points");
  auto* laplace_cmd = wishart->add_subcommand("laplace", "Laplace transform at theta");
  for (auto* s : {sample_cmd, density_cmd, laplace_cmd}) {
    add_model(s);
    s->add_option("--out", cfg.out, "output directory");
  }
  sample_cmd->add_option("--seed", cfg.seed);
  sample_cmd->add_option("--draws", cfg.draws)->check(CLI::PositiveNumber);
  density_cmd->add_option("--point", cfg.points, "matrix file(s)")->required();
  laplace_cmd->add_option("--theta", cfg.theta, "theta matrix file, or 0");

  auto* characterize = app.add_subcommand("characterize", "Monte-Carlo characterization suites");
  characterize->require_subcommand(1);
  auto* run = characterize->add_subcommand("run", "run a suite");
  add_poset(run);
  run->add_option("--lambda", cfg.lambda, "lambda for X")->required();
  run->add_option("--lambda-prime", cfg.lambda_prime, "lambda for Y (defaults to --lambda)");
  run->add_option("--suite", cfg.suite, "suite name")->check(CLI::IsMember({"standard"}));
  run->add_option("--seed", cfg.seed);
  run->add_option("--draws", cfg.draws, "draws per test")->check(CLI::Range(100, 100000000));
  run->add_option("--tolerance", cfg.tolerance, "test level (default 0.01)");
  run->add_option("--out", cfg.out, "output directory");
  run->callback([&] {
    if (run->count("--draws") == 0) cfg.draws = 10000;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::vector<std::tuple<CLI::App*, const char*, std::function<int()>>> commands{
        {poset_check, "poset check", [&] { return cmd_poset(cfg, false); }},
        {poset_describe, "poset describe", [&] { return cmd_poset(cfg, true); }},
        {verify, "algebra verify", [&] { return cmd_algebra_verify(cfg); }},
        {decompose_cmd, "cone decompose", [&] { return cmd_cone(cfg, false); }},
        {components_cmd, "cone components", [&] { return cmd_cone(cfg, true); }},
        {sample_cmd, "wishart sample", [&] { return cmd_wishart_sample(cfg); }},
        {density_cmd, "wishart density", [&] { return cmd_wishart_density(cfg); }},
        {laplace_cmd, "wishart laplace", [&] { return cmd_wishart_laplace(cfg); }},
        {run, "characterize run", [&] { return cmd_characterize(cfg); }},
    };
    for (const auto& [sub, name, fn] : commands)
      if (sub->parsed()) {
        cfg.command = name;
        return fn();
      }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnknownLabel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DuplicateLabel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CycleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StructuralZeroViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotInCone& e) {
    std::cerr << "error: " << e.what() << " (index " << e.index() << ")\n";
    return kExitDomain;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}
