// transduce-lab: parameter sweeps over the purifier, QSP and majority voting.

#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "transduce/adversary.hpp"
#include "transduce/majority.hpp"
#include "transduce/oracles.hpp"
#include "transduce/purifier.hpp"
#include "transduce/qsp.hpp"

using nlohmann::json;
using namespace tlab;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// ---- config ----

struct Settings {
  json section;  // the subcommand's block, possibly empty
  std::uint64_t seed = 1;
  double tol = 1e-9;
};

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<double> grid(const json& j, const char* key, std::vector<double> fallback) {
  return get_or<std::vector<double>>(j, key, std::move(fallback));
}

std::size_t positive(const json& j, const char* key, std::size_t fallback) {
  const auto v = get_or<long long>(j, key, static_cast<long long>(fallback));
  if (v <= 0) throw ConfigError(std::string("'") + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  return j;
}

// ---- sweeps ----

// Cells run concurrently; rows come back in grid order.
template <class F>
std::vector<std::vector<Cell>> run_cells(std::size_t n, F f) {
  std::vector<std::future<std::vector<Cell>>> fs;
  fs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) fs.push_back(std::async(std::launch::async, f, i));
  std::vector<std::vector<Cell>> rows;
  for (auto& fut : fs) rows.push_back(fut.get());
  return rows;
}

// Numerical give-ups are reported in the row; anything else propagates.
template <class F>
std::string guarded(F&& f) {
  try {
    f();
    return "ok";
  } catch (const NearSingularError&) {
    return "near_singular";
  } catch (const DegreeCapError&) {
    return "degree_cap";
  } catch (const CompletionError&) {
    return "completion_failed";
  } catch (const StrippingError&) {
    return "stripping_failed";
  }
}

Table cmd_purify(const Settings& s) {
  const auto ps = grid(s.section, "p", {0.05, 0.1, 0.25, 0.4, 0.45, 0.6, 0.75, 0.9});
  const std::size_t D = positive(s.section, "D", kDefaultDepth);
  const std::size_t K = positive(s.section, "K", 200);
  check_depth(D);
  Table t;
  t.columns = {"p", "D", "K", "r", "L", "W", "tau_error", "bound_2sqrtWK", "measured_action_error",
               "half_inverse_delta", "status"};
  const Transducer T = build_simple(D);
  t.rows = run_cells(ps.size(), [&](std::size_t i) {
    const double p = ps[i];
    TransductionReport rep;
    double action_err = kNaN;
    const std::string status = guarded([&] {
      rep = verify_transduction(p, D, s.tol);
      const StateVector xi = StateVector::basis(T.public_space(), 0);
      const ActionResult a = implement_action(T, simple_oracle(p), xi, K);
      action_err = (a.tau_prime - xi * (rep.r == 1 ? -1.0 : 1.0)).norm();
    });
    const bool ok = status == "ok";
    return std::vector<Cell>{p,
                             static_cast<long long>(D),
                             static_cast<long long>(K),
                             static_cast<long long>(p > 0.5 ? 1 : 0),
                             ok ? rep.L : kNaN,
                             ok ? rep.W : kNaN,
                             ok ? rep.tau_error : kNaN,
                             ok ? 2.0 * std::sqrt(rep.W / static_cast<double>(K)) : kNaN,
                             action_err,
                             0.5 / std::abs(0.5 - p),
                             status};
  });
  return t;
}

Table cmd_qsp(const Settings& s) {
  const double delta = get_or<double>(s.section, "delta", 0.3);
  const auto epss = grid(s.section, "eps", {0.3, 0.1});
  const auto ps = grid(s.section, "p", {0.0, 0.1, 0.2, 0.8, 0.9, 1.0});
  const std::size_t dW = positive(s.section, "dW", 2);
  const std::size_t trials = positive(s.section, "trials", 10);
  Table t;
  t.columns = {"delta", "eps", "p", "r", "degree", "eps_prime", "final_error", "target_eps",
               "main_residual", "condition_residual", "status"};
  t.rows = run_cells(epss.size() * ps.size(), [&](std::size_t i) {
    const double eps = epss[i / ps.size()];
    const double p = ps[i % ps.size()];
    Rng rng(s.seed + i);
    const OracleSpec spec = OracleSpec::random(p, dW, rng);
    QspReduction red;
    double worst = kNaN, main_res = kNaN;
    const std::string status = guarded([&] {
      red = qsp_error_reduction(general_reflecting_oracle(spec), spec, delta, eps);
      main_res = qsp_main_residual(red.alpha, red.PQ);
      worst = 0.0;
      const double sign = spec.r() == 1 ? -1.0 : 1.0;
      for (std::size_t k = 0; k < trials; ++k) {
        const Vec c = random_unit(2, rng);
        const Vec phi = c(0) * spec.target().amp() + c(1) * spec.negated().amp();
        worst = std::max(worst, (red.U.mat() * phi - sign * phi).norm());
      }
    });
    const bool ok = status == "ok";
    return std::vector<Cell>{delta,
                             eps,
                             p,
                             static_cast<long long>(spec.r()),
                             ok ? static_cast<long long>(red.degree) : -1LL,
                             eps * eps / 6.0,
                             worst,
                             eps,
                             main_res,
                             ok ? red.PQ.condition_residual() : kNaN,
                             status};
  });
  return t;
}

Table cmd_majority(const Settings& s) {
  const auto ells = get_or<std::vector<long long>>(s.section, "ell", {1, 3, 5, 7});
  const auto ps = grid(s.section, "p", {0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45});
  const std::size_t dW = positive(s.section, "dW", 1);
  const bool simulate = get_or<bool>(s.section, "simulate", true);
  for (long long l : ells) {
    if (l <= 0) throw ConfigError("'ell' entries must be positive");
  }
  Table t;
  t.columns = {"ell", "p", "dW", "imprecision_exact", "imprecision_simulated", "hoeffding_bound",
               "qubits_used", "queries"};
  // One circuit per ell, shared by its p cells.
  std::vector<std::optional<MajorityCircuit>> circuits(ells.size());
  if (simulate) {
    for (std::size_t i = 0; i < ells.size(); ++i) circuits[i] = build_majority(static_cast<std::size_t>(ells[i]), dW);
  }
  t.rows = run_cells(ells.size() * ps.size(), [&](std::size_t i) {
    const auto ell = static_cast<std::size_t>(ells[i / ps.size()]);
    const double p = ps[i % ps.size()];
    double sim = kNaN;
    if (simulate) {
      Rng rng(s.seed + i);
      const OracleSpec spec = dW == 1 ? OracleSpec::simple(p) : OracleSpec::random(p, dW, rng);
      sim = simulate_majority(*circuits[i / ps.size()], spec).imprecision;
    }
    return std::vector<Cell>{static_cast<long long>(ell),
                             p,
                             static_cast<long long>(dW),
                             imprecision_exact(ell, p),
                             sim,
                             hoeffding_bound(ell, p),
                             static_cast<long long>(majority_qubits(ell, dW)),
                             static_cast<long long>(2 * ell)};
  });
  return t;
}

Table cmd_adversary(const Settings& s) {
  const auto deltas = grid(s.section, "delta", {0.2, 0.25, 0.3, 0.4});
  const std::size_t D = positive(s.section, "D", kDefaultDepth);
  check_depth(D);
  Table t;
  t.columns = {"delta", "lower_bound", "purifier_objective", "gap", "feasible", "max_residual",
               "status"};
  const Transducer T = build_simple(D);
  t.rows = run_cells(deltas.size(), [&](std::size_t i) {
    const double delta = deltas[i];
    const double lb = two_oracle_bound(delta);
    FeasibilityReport rep;
    const std::string status = guarded([&] {
      const StateConversionProblem pr = two_oracle_problem(delta);
      rep = check_feasible(pr, transducer_to_candidate(T, pr, false, s.tol));
    });
    const bool ok = status == "ok";
    return std::vector<Cell>{delta,
                             lb,
                             ok ? rep.objective : kNaN,
                             ok ? rep.objective - lb : kNaN,
                             static_cast<long long>(ok && rep.feasible),
                             ok ? rep.max_residual : kNaN,
                             status};
  });
  return t;
}

// Smallest odd ell with imprecision_exact <= eps; 0 if none below the cap.
std::size_t majority_ell_for(double p, double eps, std::size_t cap) {
  for (std::size_t ell = 1; ell <= cap; ell += 2) {
    if (imprecision_exact(ell, p) <= eps) return ell;
  }
  return 0;
}

Table cmd_compare(const Settings& s) {
  const auto deltas = grid(s.section, "delta", {0.1, 0.25, 0.4});
  const auto epss = grid(s.section, "eps", {0.1, 0.01});
  const std::size_t D = positive(s.section, "D", kDefaultDepth);
  const std::size_t ell_cap = positive(s.section, "max_ell", 100001);
  check_depth(D);
  Table t;
  t.columns = {"delta", "eps", "purifier_L", "purifier_W", "qsp_degree", "majority_ell",
               "majority_queries", "status"};
  t.rows = run_cells(deltas.size() * epss.size(), [&](std::size_t i) {
    const double delta = deltas[i / epss.size()];
    const double eps = epss[i % epss.size()];
    const double p = 0.5 - delta;
    TransductionReport rep;
    QspReduction red;
    std::string status = guarded([&] { rep = verify_transduction(p, D, s.tol); });
    const bool pur_ok = status == "ok";
    const std::string qsp_status =
        guarded([&] { red = qsp_error_reduction(simple_oracle(p), OracleSpec::simple(p), delta, eps); });
    if (status == "ok") status = qsp_status;
    const std::size_t ell = majority_ell_for(p, eps, ell_cap);
    return std::vector<Cell>{delta,
                             eps,
                             pur_ok ? rep.L : kNaN,
                             pur_ok ? rep.W : kNaN,
                             qsp_status == "ok" ? static_cast<long long>(red.degree) : -1LL,
                             static_cast<long long>(ell),
                             ell == 0 ? -1LL : static_cast<long long>(2 * ell),
                             status};
  });
  return t;
}

// ---- output ----

std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isnan(*d)) return "nan";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << *d;
    return os.str();
  }
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_cell(row[c]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& t) {
  json out = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
              r[t.columns[c]] = std::isnan(v) ? json(nullptr) : json(v);
            } else {
              r[t.columns[c]] = v;
            }
          },
          row[c]);
    }
    out.push_back(std::move(r));
  }
  os << out.dump(2) << '\n';
}

const char* kColumnsHelp = R"(Columns:
  purify     p,D,K,r,L,W,tau_error,bound_2sqrtWK,measured_action_error,half_inverse_delta,status
  qsp        delta,eps,p,r,degree,eps_prime,final_error,target_eps,main_residual,condition_residual,status
  majority   ell,p,dW,imprecision_exact,imprecision_simulated,hoeffding_bound,qubits_used,queries
  adversary  delta,lower_bound,purifier_objective,gap,feasible,max_residual,status
  compare    delta,eps,purifier_L,purifier_W,qsp_degree,majority_ell,majority_queries,status
Config keys (JSON object, one block per subcommand, plus top-level seed and tol):
  purify {p[], D, K}  qsp {delta, eps[], p[], dW, trials}  majority {ell[], p[], dW, simulate}
  adversary {delta[], D}  compare {delta[], eps[], D, max_ell}
Exit status: 0 success, 1 contract violation, 2 config error.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sweeps over transducer-based error reduction, QSP and majority voting"};
  app.footer(kColumnsHelp);
  std::string config_path, format = "csv", out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--seed", seed, "seed for random workspace states");
  app.add_option("--tol", tol, "transduction residual tolerance");
  std::string command;
  // Global options may also follow the subcommand.
  app.fallthrough();
  for (const char* name : {"purify", "qsp", "majority", "adversary", "compare"}) {
    app.add_subcommand(name, std::string("run the ") + name + " sweep")->callback([&command, name] {
      command = name;
    });
  }
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const json cfg = load_config(config_path);
    Settings s;
    s.section = cfg.contains(command) ? cfg.at(command) : json::object();
    if (!s.section.is_object()) throw ConfigError("'" + command + "' block must be an object");
    s.seed = seed ? *seed : get_or<std::uint64_t>(cfg, "seed", 1);
    s.tol = tol ? *tol : get_or<double>(cfg, "tol", 1e-9);
    if (!(s.tol > 0.0)) throw ConfigError("tol must be positive");

    Table t;
    if (command == "purify") t = cmd_purify(s);
    else if (command == "qsp") t = cmd_qsp(s);
    else if (command == "majority") t = cmd_majority(s);
    else if (command == "adversary") t = cmd_adversary(s);
    else t = cmd_compare(s);

    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw ConfigError("cannot write " + out_path);
    }
    std::ostream& os = out_path.empty() ? std::cout : file;
    if (format == "json") write_json(os, t);
    else write_csv(os, t);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return 1;
  }
}
