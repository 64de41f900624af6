#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lpsieve/covering.hpp"
#include "lpsieve/cvp.hpp"
#include "lpsieve/io.hpp"
#include "lpsieve/oracle.hpp"
#include "lpsieve/reduce.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using namespace lpsieve;
using lpsieve::cli::Json;

namespace {

enum Exit { kOk = 0, kParse = 2, kRank = 3, kSolver = 4, kResource = 5 };

constexpr std::size_t kOracleCliMaxDim = 8;

struct Options {
  std::string input;
  std::string output;
  std::string p = "2";
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  unsigned retries = 8;
  unsigned inner_retries = 1;
  unsigned jobs = 1;
  bool oracle = false;
  bool pretty = false;
  std::size_t cap_samples = std::size_t{1} << 16;
  std::size_t cap_list = std::size_t{1} << 16;
  std::size_t cap_targets = std::size_t{1} << 12;
  std::size_t cap_rejection = std::size_t{1} << 20;
  std::string delta = "3/4";
  std::optional<double> xi;
  std::optional<double> c;
  std::optional<double> a;
  // cover
  std::string mode;
  std::vector<double> a_values;
  std::vector<double> eps_values;
  int n = 2;
  std::string format = "json";
};

struct Failure {
  int code;
  std::string message;
};

std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kParse, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(Options const& opt, std::string const& text) {
  if (opt.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.output, std::ios::binary);
  if (!out) throw Failure{kParse, "cannot write " + opt.output};
  out << text;
}

std::string dump(Json const& j, bool pretty) {
  return (pretty ? j.dump(2) : j.dump()) + "\n";
}

Scalar parse_delta(std::string const& text) {
  auto d = parse_rational(text);
  if (!d) throw Failure{kParse, "malformed --delta '" + text + "'"};
  return *d;
}

SolverConfig make_config(Options const& opt) {
  SolverConfig cfg;
  cfg.epsilon = opt.epsilon;
  cfg.retries = opt.retries;
  cfg.inner_retries = opt.inner_retries;
  cfg.seed = opt.seed;
  cfg.sample_cap = opt.cap_samples;
  cfg.list_cap = opt.cap_list;
  cfg.target_cap = opt.cap_targets;
  cfg.rejection_cap = opt.cap_rejection;
  cfg.jobs = opt.jobs;
  cfg.a = opt.a;
  cfg.sieve.xi = opt.xi;
  cfg.sieve.c = opt.c;
  cfg.lll.delta = parse_delta(opt.delta);
  cfg.lll.validate();
  cfg.sieve_params(Scalar(1), cfg.seed);
  return cfg;
}

// Runs one solve command on one instance; throws on failure.
Json solve_one(std::string const& command, std::string const& path,
               Options const& opt, unsigned solver_jobs) {
  std::string const text = read_file(path);
  Instance inst = parse_instance(text);
  NormKind const p = NormKind::parse(opt.p);
  SolverConfig cfg = make_config(opt);
  cfg.jobs = solver_jobs;

  Json out;
  out["command"] = command;
  out["instance"] = {{"path", path},
                     {"hash", git_blob_hash(text)},
                     {"dim", inst.basis.dim()}};
  out["config"] = cli::config_json(cfg, p);
  out["constants"] = {{"a_eps_linf_0.401", solve_a_eps_linf(0.401)},
                      {"a_eps_l1", solve_a_eps_l1(cfg.epsilon)}};

  SolveReport report;
  if (command == "svp") {
    report = solve_svp(SvpQuery{inst.basis, p, cfg});
  } else {
    if (!inst.target) throw Failure{kParse, path + ": cvp needs a target line 't: ...'"};
    report = solve_cvp(CvpQuery{inst.basis, *inst.target, p, cfg});
  }
  out["result"] = cli::report_json(report, p);

  if (opt.oracle) {
    if (inst.basis.dim() > kOracleCliMaxDim) {
      out["oracle"] = {{"skipped", "dimension above " + std::to_string(kOracleCliMaxDim)}};
    } else {
      OracleAnswer const answer = command == "svp"
                                      ? exact_svp(inst.basis, p)
                                      : exact_cvp(inst.basis, *inst.target, p);
      out["oracle"] = cli::oracle_json(answer, report.achieved);
    }
  }
  return out;
}

int code_for(std::exception_ptr e, std::string& message) {
  try {
    std::rethrow_exception(e);
  } catch (Failure const& f) {
    message = f.message;
    return f.code;
  } catch (ParseError const& err) {
    message = std::string("parse error: ") + err.what();
    return kParse;
  } catch (RankDeficient const& err) {
    message = std::string("rank deficient: ") + err.what();
    return kRank;
  } catch (SolverFailed const& err) {
    message = std::string("solver failed: ") + err.what();
    return kSolver;
  } catch (AllZero const& err) {
    message = std::string("solver failed: ") + err.what();
    return kSolver;
  } catch (GroundSetTooLarge const& err) {
    message = std::string("resource guard: ") + err.what();
    return kResource;
  } catch (DimensionTooLarge const& err) {
    message = std::string("resource guard: ") + err.what();
    return kResource;
  } catch (RejectionBudgetExceeded const& err) {
    message = std::string("resource guard: ") + err.what();
    return kResource;
  } catch (ListCapExceeded const& err) {
    message = std::string("resource guard: ") + err.what();
    return kResource;
  } catch (QuadratureFailure const& err) {
    message = std::string("resource guard: ") + err.what();
    return kResource;
  } catch (std::invalid_argument const& err) {
    message = std::string("invalid argument: ") + err.what();
    return kParse;
  } catch (std::exception const& err) {
    message = std::string("internal error: ") + err.what();
    return 1;
  }
}

std::vector<std::string> batch_files(std::string const& dir) {
  std::vector<std::string> files;
  for (auto const& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

int run_solve(std::string const& command, Options const& opt) {
  if (!fs::is_directory(opt.input)) {
    Json const out = solve_one(command, opt.input, opt, opt.jobs);
    write_output(opt, dump(out, opt.pretty));
    return kOk;
  }
  std::vector<std::string> const files = batch_files(opt.input);
  std::vector<std::string> lines(files.size());
  std::vector<int> codes(files.size(), kOk);
  auto work = [&](std::size_t i) {
    try {
      lines[i] = solve_one(command, files[i], opt, 1).dump();
    } catch (...) {
      std::string message;
      codes[i] = code_for(std::current_exception(), message);
      Json err{{"command", command},
               {"instance", {{"path", files[i]}}},
               {"error", {{"exit_code", codes[i]}, {"message", message}}}};
      lines[i] = err.dump();
    }
  };
  unsigned const workers =
      std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(files.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < files.size(); i += workers) work(i);
    });
  }
  for (auto& t : pool) t.join();
  std::string text;
  for (auto const& l : lines) text += l + "\n";
  write_output(opt, text);
  int worst = kOk;
  for (int c : codes) worst = std::max(worst, c);
  return worst;
}

int run_reduce(Options const& opt) {
  std::string const text = read_file(opt.input);
  Instance const inst = parse_instance(text);
  LllParams params;
  params.delta = parse_delta(opt.delta);
  params.validate();
  Basis const reduced = lll_reduce(inst.basis, params);
  write_output(opt, emit_instance(reduced, inst.target));
  return kOk;
}

std::string csv_cell(Json const& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

int run_cover(Options const& opt) {
  Json rows = Json::array();
  std::vector<double> a_values = opt.a_values;
  std::vector<double> eps_values = opt.eps_values;
  if (eps_values.empty()) eps_values = {0.401};
  if (a_values.empty()) a_values = {0.5, 1, 2, 4, 8, 16, 32, 64};

  if (opt.mode == "phi") {
    for (double a : a_values) {
      double const phi = solve_phi(a);
      double const rhs = 2.0 * a * a / M_PI;
      rows.push_back({{"a", a},
                      {"phi", phi},
                      {"residual", (1.0 - phi * phi) / (phi * phi * phi) - rhs},
                      {"phi_bound", std::cbrt(M_PI / 2.0) * std::pow(a, -2.0 / 3.0)}});
    }
  } else if (opt.mode == "exponent-linf") {
    for (double a : a_values) {
      CoveringBound const b = covering_bound_linf(a);
      rows.push_back({{"a", a}, {"phi", b.phi}, {"exponent", b.exponent}});
    }
  } else if (opt.mode == "exponent-l1") {
    for (double c : a_values) {
      L1Exponent const e = covering_exponent_l1_detail(c);
      rows.push_back({{"a", c}, {"phi", e.phi}, {"exponent", e.value}});
    }
  } else if (opt.mode == "a-eps") {
    for (double eps : eps_values) {
      rows.push_back({{"eps", eps},
                      {"a_linf", solve_a_eps_linf(eps)},
                      {"a_l1", solve_a_eps_l1(eps)}});
    }
  } else if (opt.mode == "grid-cover") {
    for (double a : a_values) {
      GridCover const cover = greedy_grid_cover(opt.n, a);
      Json centers = Json::array();
      for (std::size_t i = 0; i < cover.centers.size(); ++i) {
        centers.push_back(cli::rational_array(cover.center(i)));
      }
      Json row{{"n", cover.n},
               {"a", cover.a},
               {"grid_step", format_rational(cover.grid_step)},
               {"half_width_steps", cover.half_width_steps},
               {"covering_half_width", cover.covering_half_width},
               {"ground_set_size", cover.ground_set_size},
               {"center_count", cover.centers.size()},
               {"verified", covers_ground_set(cover)}};
      if (opt.format == "json") row["centers"] = centers;
      rows.push_back(row);
    }
  } else {
    throw Failure{kParse, "unknown --mode '" + opt.mode + "'"};
  }

  if (opt.format == "csv") {
    std::string text;
    if (!rows.empty()) {
      bool first = true;
      for (auto const& [key, _] : rows[0].items()) {
        text += (first ? "" : ",") + key;
        first = false;
      }
      text += "\n";
      for (auto const& row : rows) {
        first = true;
        for (auto const& [key, value] : row.items()) {
          text += (first ? "" : ",") + csv_cell(value);
          first = false;
        }
        text += "\n";
      }
    }
    write_output(opt, text);
  } else {
    Json out{{"command", "cover"}, {"mode", opt.mode}, {"rows", rows}};
    write_output(opt, dump(out, opt.pretty));
  }
  return kOk;
}

void add_solver_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("instance", opt.input, "Instance file, or a directory for batch mode")
      ->required();
  cmd->add_option("--p", opt.p, "Norm exponent: 1, 1.5, 2, inf, ...");
  cmd->add_option("--eps", opt.epsilon, "Epsilon");
  cmd->add_option("--seed", opt.seed, "Random seed");
  cmd->add_option("--retries", opt.retries, "Independent retries");
  cmd->add_option("--inner-retries", opt.inner_retries, "Retries of inner CVP_2 calls (p < 2)");
  cmd->add_option("--jobs", opt.jobs, "Worker threads");
  cmd->add_flag("--oracle", opt.oracle, "Append the exact optimum (n <= 8)");
  cmd->add_flag("--pretty", opt.pretty, "Indented JSON");
  cmd->add_option("--cap-samples", opt.cap_samples, "Cap on sieve samples per run");
  cmd->add_option("--cap-list", opt.cap_list, "Cap on the sieve list size");
  cmd->add_option("--cap-targets", opt.cap_targets, "Cap on cover targets per guess");
  cmd->add_option("--cap-rejection", opt.cap_rejection, "Proposals per cover target");
  cmd->add_option("--delta", opt.delta, "LLL parameter");
  cmd->add_option("--xi", opt.xi, "Sampling radius factor");
  cmd->add_option("--c", opt.c, "Sieve approximation constant");
  cmd->add_option("--a", opt.a, "Covering radius override (p < 2)");
  cmd->add_option("-o,--output", opt.output, "Output file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lpsieve: approximate SVP/CVP in lp norms by l2 sieving and coverings"};
  app.require_subcommand(1);
  Options opt;

  auto* reduce = app.add_subcommand("reduce", "LLL-reduce an instance");
  reduce->add_option("instance", opt.input, "Instance file")->required();
  reduce->add_option("--delta", opt.delta, "LLL parameter");
  reduce->add_option("-o,--output", opt.output, "Output file");

  auto* svp = app.add_subcommand("svp", "Approximate shortest vector");
  add_solver_flags(svp, opt);
  auto* cvp = app.add_subcommand("cvp", "Approximate closest vector");
  add_solver_flags(cvp, opt);

  auto* cover = app.add_subcommand("cover", "Covering constants and grid covers");
  cover->add_option("--mode", opt.mode, "phi | exponent-linf | exponent-l1 | a-eps | grid-cover")
      ->required();
  cover->add_option("--a", opt.a_values, "Values of a (comma separated)")->delimiter(',');
  cover->add_option("--eps", opt.eps_values, "Values of epsilon (comma separated)")
      ->delimiter(',');
  cover->add_option("--n", opt.n, "Dimension for grid-cover");
  cover->add_option("--format", opt.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cover->add_flag("--pretty", opt.pretty, "Indented JSON");
  cover->add_option("-o,--output", opt.output, "Output file");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (reduce->parsed()) return run_reduce(opt);
    if (svp->parsed()) return run_solve("svp", opt);
    if (cvp->parsed()) return run_solve("cvp", opt);
    return run_cover(opt);
  } catch (...) {
    std::string message;
    int const code = code_for(std::current_exception(), message);
    std::cerr << "lpsieve: " << message << "\n";
    return code;
  }
}
