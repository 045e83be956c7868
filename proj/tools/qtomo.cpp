// Copyright 2026 The qtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qtomo/charts.hpp"
#include "qtomo/dataset_io.hpp"
#include "qtomo/errors.hpp"
#include "qtomo/inference.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/run_config.hpp"
#include "qtomo/selection.hpp"
#include "qtomo/states.hpp"
#include "qtomo/stats.hpp"
#include "qtomo/study.hpp"

namespace {

using Json = nlohmann::ordered_json;
using qtomo::format_double;
using qtomo::RunConfig;

enum class Format { kJson, kTable };

struct Output {
  RunConfig config;
  Json result = Json::object();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // Scalar results printed after the table as comment lines.
  std::vector<std::pair<std::string, std::string>> notes;
};

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

void emit(const Output& out, Format format) {
  const std::string hash = out.config.hash();
  if (format == Format::kJson) {
    Json doc;
    doc["config_hash"] = hash;
    Json cfg = Json::object();
    for (const auto& [k, v] : out.config.entries()) cfg[k] = v;
    doc["config"] = cfg;
    doc["result"] = out.result;
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::cout << "# config_hash = " << hash << '\n';
  for (const auto& [k, v] : out.config.entries()) std::cout << "# " << k << " = " << v << '\n';
  auto line = [](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) std::cout << (i ? "," : "") << fields[i];
    std::cout << '\n';
  };
  line(out.header);
  for (const auto& r : out.rows) line(r);
  for (const auto& [k, v] : out.notes) std::cout << "# " << k << " = " << v << '\n';
}

Json eigenvalues_json(const qtomo::DensityMatrix& rho) {
  Json a = Json::array();
  const qtomo::RealVector ev = rho.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) a.push_back(number(ev(i)));
  return a;
}

void write_state(const qtomo::DensityMatrix& rho, const std::string& path) {
  Json re = Json::array(), im = Json::array();
  for (int i = 0; i < rho.dim(); ++i) {
    Json rr = Json::array(), ir = Json::array();
    for (int j = 0; j < rho.dim(); ++j) {
      rr.push_back(rho(i, j).real());
      ir.push_back(rho(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw qtomo::ValidationError("cannot write " + path);
  f << Json{{"dim", rho.dim()}, {"real", re}, {"imag", im}}.dump(1) << '\n';
}

qtomo::CountsDataset load_complete(const std::string& path) {
  qtomo::CountsDataset data = qtomo::load_dataset(path);
  data.require_complete();
  return data;
}

// --- subcommands -----------------------------------------------------------

struct SimulateArgs {
  int k = 1;
  int rank = 1;
  std::int64_t n = 100;
  std::uint64_t seed = 1;
  std::string out;
  std::string truth_out;
};

Output run_simulate(const SimulateArgs& a) {
  Output o;
  o.config.set("command", "simulate");
  o.config.set("k", a.k);
  o.config.set("rank", a.rank);
  o.config.set("n", a.n);
  o.config.set("seed", a.seed);
  o.config.set("out", a.out);
  if (a.k < 1 || a.k > 10) throw qtomo::ValidationError("k must lie in [1, 10]");
  if (a.rank < 1 || a.rank > qtomo::pow2(a.k)) throw qtomo::ValidationError("rank must lie in [1, 2^k]");
  const qtomo::DensityMatrix truth = qtomo::random_state(a.k, a.rank, a.seed);
  const qtomo::CountsDataset data = qtomo::simulate_dataset(truth, a.n, qtomo::derive_seed(a.seed, {1}));
  qtomo::save_dataset(data, a.out);
  if (!a.truth_out.empty()) write_state(truth, a.truth_out);
  o.result["out"] = a.out;
  o.result["total_counts"] = data.total();
  o.result["truth_eigenvalues"] = eigenvalues_json(truth);
  o.header = {"out", "k", "rank", "n", "total_counts"};
  o.rows.push_back({a.out, std::to_string(a.k), std::to_string(a.rank), std::to_string(a.n),
                    std::to_string(data.total())});
  return o;
}

struct FitArgs {
  std::string in;
  int rank = 1;
  int restarts = 5;
  std::uint64_t seed = 1;
  int max_iter = 2000;
  double grad_tol = 1e-6;
  std::string state_out;
};

qtomo::FitOptions fit_options(int restarts, std::uint64_t seed, int max_iter, double grad_tol) {
  qtomo::FitOptions fo;
  fo.restarts = restarts;
  fo.seed = seed;
  fo.max_iterations = max_iter;
  fo.grad_tol = grad_tol;
  fo.parallel = true;
  return fo;
}

Output run_fit(const FitArgs& a) {
  Output o;
  o.config.set("command", "fit");
  o.config.set("in", a.in);
  o.config.set("rank", a.rank);
  o.config.set("restarts", a.restarts);
  o.config.set("seed", a.seed);
  o.config.set("max_iter", a.max_iter);
  o.config.set("grad_tol", a.grad_tol);
  const qtomo::CountsDataset data = load_complete(a.in);
  const qtomo::ModelFit fit = qtomo::fit_rank(data, a.rank, fit_options(a.restarts, a.seed, a.max_iter, a.grad_tol));
  const qtomo::InformationCriteria ic = qtomo::information_criteria(fit, data);
  const qtomo::DensityMatrix rho = fit.state();
  if (!a.state_out.empty()) write_state(rho, a.state_out);
  o.result = {{"rank", fit.rank},
              {"loglik", number(fit.loglik)},
              {"aic", number(ic.aic)},
              {"bic", number(ic.bic)},
              {"converged", fit.converged},
              {"grad_norm", number(fit.grad_norm)},
              {"tolerance", number(fit.tolerance)},
              {"iterations", fit.iterations},
              {"restarts_used", fit.restarts_used},
              {"status", fit.status},
              {"eigenvalues", eigenvalues_json(rho)}};
  o.header = {"rank", "loglik", "aic", "bic", "converged", "grad_norm"};
  o.rows.push_back({std::to_string(fit.rank), cell(fit.loglik), cell(ic.aic), cell(ic.bic), fit.converged ? "1" : "0",
                    cell(fit.grad_norm)});
  return o;
}

struct SelectArgs {
  std::string in;
  int max_rank = 0;
  std::string criterion = "both";
  int restarts = 5;
  std::uint64_t seed = 1;
  int patience = 2;
};

Output run_select(const SelectArgs& a, std::string& error) {
  Output o;
  o.config.set("command", "select");
  o.config.set("in", a.in);
  o.config.set("max_rank", a.max_rank);
  o.config.set("criterion", a.criterion);
  o.config.set("restarts", a.restarts);
  o.config.set("seed", a.seed);
  o.config.set("patience", a.patience);
  const qtomo::CountsDataset data = load_complete(a.in);
  qtomo::ScanOptions so;
  so.max_rank = a.max_rank;
  so.stop_after_increases = a.patience;
  so.fit = fit_options(a.restarts, a.seed, 2000, 1e-6);
  const qtomo::RankScan scan = qtomo::scan_ranks(data, so);
  Json ranks = Json::array();
  o.header = {"rank", "loglik", "aic", "bic", "converged"};
  for (const auto& e : scan.entries) {
    ranks.push_back({{"rank", e.rank},
                     {"loglik", number(e.loglik)},
                     {"aic", number(e.aic)},
                     {"bic", number(e.bic)},
                     {"converged", e.converged}});
    o.rows.push_back({std::to_string(e.rank), cell(e.loglik), cell(e.aic), cell(e.bic), e.converged ? "1" : "0"});
  }
  o.result["ranks"] = ranks;
  if (a.criterion != "bic") o.result["selected_rank_aic"] = scan.selected_rank_aic;
  if (a.criterion != "aic") o.result["selected_rank_bic"] = scan.selected_rank_bic;
  o.result["stop_rank"] = scan.stop_rank;
  if (a.criterion != "bic") o.notes.emplace_back("selected_rank_aic", std::to_string(scan.selected_rank_aic));
  if (a.criterion != "aic") o.notes.emplace_back("selected_rank_bic", std::to_string(scan.selected_rank_bic));
  if (!scan.error.empty()) o.result["error"] = scan.error;
  error = scan.error;
  return o;
}

struct TestArgs {
  std::string in;
  int rank = 1;
  int bootstrap = 100;
  double alpha = 0.05;
  int restarts = 5;
  std::uint64_t seed = 1;
};

Output run_test(const TestArgs& a) {
  Output o;
  o.config.set("command", "test");
  o.config.set("in", a.in);
  o.config.set("rank", a.rank);
  o.config.set("bootstrap", a.bootstrap);
  o.config.set("alpha", a.alpha);
  o.config.set("restarts", a.restarts);
  o.config.set("seed", a.seed);
  const qtomo::CountsDataset data = load_complete(a.in);
  qtomo::TestResult r;
  if (a.bootstrap > 0) {
    qtomo::BootstrapOptions bo;
    bo.samples = a.bootstrap;
    bo.alpha = a.alpha;
    bo.seed = a.seed;
    bo.fit = fit_options(a.restarts, a.seed, 2000, 1e-6);
    bo.fit.parallel = false;
    r = qtomo::bootstrap_pearson(data, a.rank, bo);
  } else {
    const qtomo::ModelFit fit = qtomo::fit_rank(data, a.rank, fit_options(a.restarts, a.seed, 2000, 1e-6));
    r = qtomo::pearson_test(data, fit, a.alpha);
  }
  Json samples = Json::array();
  for (double t : r.bootstrap_samples) samples.push_back(number(t));
  o.result = {{"method", qtomo::to_string(r.method)},
              {"statistic", number(r.statistic)},
              {"df", r.df},
              {"p_value", number(r.p_value)},
              {"threshold", number(r.threshold)},
              {"chi2_threshold", number(r.chi2_threshold)},
              {"reject", r.reject},
              {"alpha", r.alpha},
              {"dropped", r.dropped},
              {"loglik", number(r.fit.loglik)},
              {"bootstrap_samples", samples}};
  o.header = {"method", "rank", "statistic", "df", "p_value", "threshold", "chi2_threshold", "reject"};
  o.rows.push_back({qtomo::to_string(r.method), std::to_string(a.rank), cell(r.statistic), std::to_string(r.df),
                    cell(r.p_value), cell(r.threshold), cell(r.chi2_threshold), r.reject ? "reject" : "accept"});
  return o;
}

struct BoundArgs {
  int k = 1;
  double n = 100;
  std::optional<std::uint64_t> pure_seed;
};

Output run_bound(const BoundArgs& a) {
  Output o;
  o.config.set("command", "bound");
  o.config.set("k", a.k);
  o.config.set("n", a.n);
  const double q = qtomo::qmse_bound(a.k, a.n);
  o.result["qmse_bound"] = q;
  o.header = {"k", "n", "qmse_bound"};
  std::vector<std::string> row{std::to_string(a.k), cell(a.n), cell(q)};
  if (a.pure_seed) {
    o.config.set("pure_seed", *a.pure_seed);
    const qtomo::PureStateChart chart(qtomo::haar_random_vector(a.k, *a.pure_seed));
    const double mse = qtomo::asymptotic_mse(chart, a.n);
    o.result["asymptotic_mse"] = mse;
    o.header.push_back("asymptotic_mse");
    row.push_back(cell(mse));
  }
  o.rows.push_back(row);
  return o;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw qtomo::ValidationError("malformed integer list '" + s + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

Output run_study1(const qtomo::Study1Config& c, const std::string& out_dir, bool resume) {
  const qtomo::Study1Report rep = qtomo::run_study1(c, qtomo::StudyOutput{out_dir, resume});
  Output o;
  o.config = c.to_config();
  o.result = {{"out", out_dir},
              {"completed", rep.records.size()},
              {"failed", rep.failures.size()},
              {"aic_table", rep.aic_table},
              {"bic_table", rep.bic_table}};
  o.header = {"criterion", "true_rank"};
  for (int r = 1; r <= c.max_rank; ++r) o.header.push_back("rank_" + std::to_string(r));
  for (int crit = 0; crit < 2; ++crit) {
    const auto& t = crit == 0 ? rep.aic_table : rep.bic_table;
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::vector<std::string> row{crit == 0 ? "AIC" : "BIC", std::to_string(c.true_ranks[i])};
      for (int v : t[i]) row.push_back(std::to_string(v));
      o.rows.push_back(row);
    }
  }
  return o;
}

Output run_study2(const qtomo::Study2Config& c, const std::string& out_dir, bool resume) {
  const qtomo::Study2Report rep = qtomo::run_study2(c, qtomo::StudyOutput{out_dir, resume});
  Output o;
  o.config = c.to_config();
  Json cells = Json::array();
  o.header = {"state", "n", "replicates", "bic_correct", "aic_correct", "mse_rank1", "mse_rank2"};
  for (const auto& cell_ : rep.cells) {
    cells.push_back({{"state", cell_.state + 1},
                     {"n", cell_.n},
                     {"replicates", cell_.replicates},
                     {"bic_correct", cell_.bic_correct},
                     {"aic_correct", cell_.aic_correct},
                     {"mse_rank1", number(cell_.mse_mean.at(0))},
                     {"mse_rank2", number(cell_.mse_mean.at(1))}});
    o.rows.push_back({std::to_string(cell_.state + 1), std::to_string(cell_.n), std::to_string(cell_.replicates),
                      std::to_string(cell_.bic_correct), std::to_string(cell_.aic_correct),
                      cell(cell_.mse_mean.at(0)), cell(cell_.mse_mean.at(1))});
  }
  o.result = {{"out", out_dir}, {"completed", rep.records.size()}, {"failed", rep.failures.size()}, {"cells", cells}};
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtomo: rank selection for multi-qubit Pauli tomography"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format_name = "json";
  app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"json", "table"}));

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate Pauli counts from a random rank-r state");
  c_sim->add_option("--k", sim.k, "Number of qubits")->required();
  c_sim->add_option("--rank", sim.rank, "Rank of the random true state")->required();
  c_sim->add_option("--n", sim.n, "Repetitions per setting")->required();
  c_sim->add_option("--seed", sim.seed, "Random seed");
  c_sim->add_option("--out", sim.out, "Output dataset (.json or .csv)")->required();
  c_sim->add_option("--truth-out", sim.truth_out, "Write the true density matrix as JSON");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Maximum-likelihood fit at a fixed rank");
  c_fit->add_option("--in", fit.in, "Dataset (.json or .csv)")->required();
  c_fit->add_option("--rank", fit.rank, "Model rank")->required();
  c_fit->add_option("--restarts", fit.restarts, "Random restarts");
  c_fit->add_option("--seed", fit.seed, "Random seed");
  c_fit->add_option("--max-iter", fit.max_iter, "Optimizer iteration limit");
  c_fit->add_option("--grad-tol", fit.grad_tol, "Stationarity tolerance per count");
  c_fit->add_option("--state-out", fit.state_out, "Write the fitted density matrix as JSON");

  SelectArgs sel;
  auto* c_sel = app.add_subcommand("select", "Rank scan with AIC/BIC selection");
  c_sel->add_option("--in", sel.in, "Dataset (.json or .csv)")->required();
  c_sel->add_option("--max-rank", sel.max_rank, "Largest rank to fit (0 = 2^k)");
  c_sel->add_option("--criterion", sel.criterion, "Criteria to report")->check(CLI::IsMember({"both", "aic", "bic"}));
  c_sel->add_option("--restarts", sel.restarts, "Random restarts per rank");
  c_sel->add_option("--seed", sel.seed, "Random seed");
  c_sel->add_option("--patience", sel.patience, "Stop after this many consecutive increases of both criteria");

  TestArgs tst;
  auto* c_tst = app.add_subcommand("test", "Pearson chi-square goodness-of-fit test at a rank");
  c_tst->add_option("--in", tst.in, "Dataset (.json or .csv)")->required();
  c_tst->add_option("--rank", tst.rank, "Model rank")->required();
  c_tst->add_option("--bootstrap", tst.bootstrap, "Bootstrap replicates (0 = chi-square approximation)");
  c_tst->add_option("--alpha", tst.alpha, "Test level");
  c_tst->add_option("--restarts", tst.restarts, "Random restarts per fit");
  c_tst->add_option("--seed", tst.seed, "Random seed");

  BoundArgs bnd;
  std::uint64_t pure_seed = 0;
  auto* c_bnd = app.add_subcommand("bound", "Quantum MSE bound 2(2^k-1)/(3^k n)");
  c_bnd->add_option("--k", bnd.k, "Number of qubits")->required();
  c_bnd->add_option("--n", bnd.n, "Repetitions per setting")->required();
  auto* o_pure = c_bnd->add_option("--pure-seed", pure_seed,
                                   "Also report Tr(G I^-1)/n at a Haar-random pure state drawn with this seed");

  qtomo::Study1Config s1;
  s1.threads = 0;
  std::string s1_ranks = "1,2,3", s1_out = "study1_out";
  bool s1_fresh = false;
  auto* c_s1 = app.add_subcommand("study1", "Rank selection for random low-rank k-qubit states");
  c_s1->add_option("--replicates", s1.replicates, "Datasets per true state");
  c_s1->add_option("--n", s1.n, "Repetitions per setting");
  c_s1->add_option("--seed", s1.seed, "Random seed");
  c_s1->add_option("--k", s1.qubits, "Number of qubits");
  c_s1->add_option("--ranks", s1_ranks, "Comma-separated true ranks");
  c_s1->add_option("--max-rank", s1.max_rank, "Largest rank fitted");
  c_s1->add_option("--restarts", s1.restarts, "Random restarts per fit");
  c_s1->add_option("--threads", s1.threads, "Worker threads (0 = all cores)");
  c_s1->add_option("--out", s1_out, "Output directory");
  c_s1->add_flag("--fresh", s1_fresh, "Ignore an existing manifest instead of resuming");

  qtomo::Study2Config s2;
  std::string s2_ns = "10,50,100,250,500", s2_out = "study2_out";
  bool s2_fresh = false;
  auto* c_s2 = app.add_subcommand("study2", "One-qubit rank selection versus repetitions");
  c_s2->add_option("--replicates", s2.replicates, "Datasets per (state, n) cell");
  c_s2->add_option("--seed", s2.seed, "Random seed");
  c_s2->add_option("--ns", s2_ns, "Comma-separated repetition counts");
  c_s2->add_option("--restarts", s2.restarts, "Random restarts per fit");
  c_s2->add_option("--threads", s2.threads, "Worker threads (0 = all cores)");
  c_s2->add_option("--out", s2_out, "Output directory");
  c_s2->add_flag("--fresh", s2_fresh, "Ignore an existing manifest instead of resuming");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const Format format = format_name == "table" ? Format::kTable : Format::kJson;
  try {
    if (c_sim->parsed()) {
      emit(run_simulate(sim), format);
    } else if (c_fit->parsed()) {
      emit(run_fit(fit), format);
    } else if (c_sel->parsed()) {
      std::string error;
      emit(run_select(sel, error), format);
      if (!error.empty()) {
        std::cerr << "error: rank scan stopped early: " << error << '\n';
        return 3;
      }
    } else if (c_tst->parsed()) {
      emit(run_test(tst), format);
    } else if (c_bnd->parsed()) {
      if (o_pure->count() > 0) bnd.pure_seed = pure_seed;
      emit(run_bound(bnd), format);
    } else if (c_s1->parsed()) {
      s1.true_ranks = parse_int_list(s1_ranks);
      emit(run_study1(s1, s1_out, !s1_fresh), format);
    } else if (c_s2->parsed()) {
      std::vector<std::int64_t> ns;
      for (int v : parse_int_list(s2_ns)) ns.push_back(v);
      s2.ns = ns;
      emit(run_study2(s2, s2_out, !s2_fresh), format);
    }
  } catch (const qtomo::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const qtomo::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
