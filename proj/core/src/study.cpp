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

#include "qtomo/study.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qtomo/dataset.hpp"
#include "qtomo/errors.hpp"
#include "qtomo/parallel.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/states.hpp"
#include "qtomo/stats.hpp"

namespace qtomo {
namespace {

using Json = nlohmann::ordered_json;

// JSON has no infinities; keep them as strings so records round-trip.
Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

Json ranks_to_json(const std::vector<RankEntry>& ranks) {
  Json a = Json::array();
  for (const RankEntry& e : ranks)
    a.push_back({{"rank", e.rank},
                 {"loglik", number(e.loglik)},
                 {"aic", number(e.aic)},
                 {"bic", number(e.bic)},
                 {"converged", e.converged}});
  return a;
}

std::vector<RankEntry> ranks_from_json(const Json& a) {
  std::vector<RankEntry> out;
  for (const Json& j : a)
    out.push_back({j.at("rank").get<int>(), number(j.at("loglik")), number(j.at("aic")), number(j.at("bic")),
                   j.at("converged").get<bool>()});
  return out;
}

Json doubles_to_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::vector<double> doubles_from_json(const Json& a) {
  std::vector<double> out;
  for (const Json& j : a) out.push_back(number(j));
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("failed writing " + path.string());
}

Json failures_to_json(const std::vector<StudyFailure>& failures) {
  Json a = Json::array();
  for (const auto& f : failures) a.push_back({{"job", f.job}, {"key", f.key}, {"message", f.message}});
  return a;
}

// Runs jobs [0, count) in parallel. With an output directory, each finished
// record is appended to manifest.jsonl together with the config hash, and
// records already in the manifest are loaded instead of recomputed.
template <typename Record, typename Job, typename Key, typename ToJson, typename FromJson>
std::vector<std::optional<Record>> run_jobs(std::size_t count, Job&& job, Key&& key_of, ToJson&& to_json,
                                            FromJson&& from_json, const std::string& hash, const RunConfig& config,
                                            const std::optional<StudyOutput>& output, unsigned threads,
                                            std::vector<StudyFailure>& failures) {
  std::vector<std::optional<Record>> records(count);
  std::ofstream manifest;
  if (output) {
    std::filesystem::create_directories(output->dir);
    const auto path = output->dir / "manifest.jsonl";
    if (std::filesystem::exists(path) && output->resume) {
      std::ifstream in(path);
      std::string line;
      while (std::getline(in, line)) {
        Json j;
        try {
          j = Json::parse(line);
        } catch (const Json::parse_error&) {
          continue;  // a line cut short by an interruption
        }
        if (j.at("config_hash").get<std::string>() != hash)
          throw ValidationError("output directory " + output->dir.string() +
                                " holds a run with a different config; use a fresh directory or disable resume");
        const auto idx = j.at("job").get<std::size_t>();
        if (idx < count) records[idx] = from_json(j.at("record"));
      }
    } else {
      std::filesystem::remove(path);
    }
    write_text(output->dir / "config.txt", "# config_hash = " + hash + "\n" + config.to_text());
    manifest.open(path, std::ios::app | std::ios::binary);
    if (!manifest) throw ValidationError("cannot write " + path.string());
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < count; ++i)
    if (!records[i]) pending.push_back(i);

  std::mutex mutex;
  parallel_for(
      pending.size(),
      [&](std::size_t p) {
        const std::size_t i = pending[p];
        try {
          Record r = job(i);
          std::lock_guard lock(mutex);
          if (manifest.is_open()) {
            Json line;
            line["config_hash"] = hash;
            line["job"] = i;
            line["record"] = to_json(r);
            manifest << line.dump() << '\n';
            manifest.flush();
          }
          records[i] = std::move(r);
        } catch (const std::exception& e) {
          std::lock_guard lock(mutex);
          failures.push_back({i, key_of(i), e.what()});
        }
      },
      threads);
  std::sort(failures.begin(), failures.end(), [](const auto& a, const auto& b) { return a.job < b.job; });
  return records;
}

void fill_fit_summary(const RankScan& scan, const DensityMatrix& truth, std::vector<RankEntry>& ranks,
                      std::vector<double>& mse, int& aic, int& bic) {
  if (!scan.error.empty()) throw NumericalError(scan.error);
  ranks = scan.entries;
  mse.clear();
  for (const ModelFit& f : scan.fits) mse.push_back(hs_distance_sq(f.state(), truth));
  aic = scan.selected_rank_aic;
  bic = scan.selected_rank_bic;
}

// --- study 1 ---------------------------------------------------------------

void validate(const Study1Config& c) {
  if (c.qubits < 1) throw ValidationError("study1 needs k >= 1");
  const int d = pow2(c.qubits);
  if (c.true_ranks.empty()) throw ValidationError("study1 needs at least one true rank");
  for (int r : c.true_ranks)
    if (r < 1 || r > d) throw ValidationError("study1 true rank out of range");
  if (c.max_rank < 1 || c.max_rank > d) throw ValidationError("study1 max rank out of range");
  if (c.n < 1) throw ValidationError("study1 needs n >= 1");
  if (c.replicates < 1) throw ValidationError("study1 needs at least one replicate");
  if (c.restarts < 0) throw ValidationError("restarts must be non-negative");
}

Json to_json(const Study1Record& r) {
  return {{"true_rank", r.true_rank},         {"replicate", r.replicate},  {"seed", r.seed},
          {"ranks", ranks_to_json(r.ranks)},  {"mse", doubles_to_json(r.mse)},
          {"selected_aic", r.selected_aic},   {"selected_bic", r.selected_bic},
          {"kl_rank1", number(r.kl_rank1)}};
}

Study1Record study1_from_json(const Json& j) {
  Study1Record r;
  r.true_rank = j.at("true_rank").get<int>();
  r.replicate = j.at("replicate").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.ranks = ranks_from_json(j.at("ranks"));
  r.mse = doubles_from_json(j.at("mse"));
  r.selected_aic = j.at("selected_aic").get<int>();
  r.selected_bic = j.at("selected_bic").get<int>();
  r.kl_rank1 = number(j.at("kl_rank1"));
  return r;
}

void write_study1(const Study1Report& rep, const std::filesystem::path& dir) {
  const std::string& h = rep.config_hash;
  std::ostringstream records;
  records << "config_hash,seed,true_rank,replicate,rank,loglik,aic,bic,converged,mse,selected_aic,selected_bic\n";
  std::ostringstream lambdas;
  lambdas << "config_hash,seed,true_rank,replicate,rank_hi,rank_lo,lambda,kl_rank1\n";
  for (const auto& r : rep.records) {
    for (std::size_t i = 0; i < r.ranks.size(); ++i) {
      const RankEntry& e = r.ranks[i];
      records << h << ',' << r.seed << ',' << r.true_rank << ',' << r.replicate << ',' << e.rank << ','
              << fmt(e.loglik) << ',' << fmt(e.aic) << ',' << fmt(e.bic) << ',' << (e.converged ? 1 : 0) << ','
              << fmt(r.mse[i]) << ',' << r.selected_aic << ',' << r.selected_bic << '\n';
    }
    for (std::size_t i = 0; i + 1 < r.ranks.size(); ++i)
      lambdas << h << ',' << r.seed << ',' << r.true_rank << ',' << r.replicate << ',' << i + 2 << ',' << i + 1
              << ',' << fmt(r.lambda(static_cast<int>(i) + 1)) << ',' << fmt(r.kl_rank1) << '\n';
  }
  std::ostringstream table;
  table << "config_hash,seed,criterion,true_rank";
  for (int r = 1; r <= rep.config.max_rank; ++r) table << ",rank_" << r;
  table << '\n';
  for (const char* crit : {"AIC", "BIC"}) {
    const auto& t = std::string(crit) == "AIC" ? rep.aic_table : rep.bic_table;
    for (std::size_t i = 0; i < t.size(); ++i) {
      table << h << ',' << rep.config.seed << ',' << crit << ',' << rep.config.true_ranks[i];
      for (int c : t[i]) table << ',' << c;
      table << '\n';
    }
  }
  Json summary;
  summary["config_hash"] = h;
  summary["seed"] = rep.config.seed;
  Json truths = Json::array();
  for (std::size_t i = 0; i < rep.truths.size(); ++i) {
    const RealVector ev = rep.truths[i].eigenvalues();
    std::vector<double> top(ev.data(), ev.data() + rep.config.true_ranks[i]);
    truths.push_back({{"rank", rep.config.true_ranks[i]}, {"eigenvalues", doubles_to_json(top)}});
  }
  summary["truths"] = truths;
  summary["aic_table"] = rep.aic_table;
  summary["bic_table"] = rep.bic_table;
  summary["completed"] = rep.records.size();
  summary["failed"] = rep.failures.size();

  write_text(dir / "records.csv", records.str());
  write_text(dir / "lambda.csv", lambdas.str());
  write_text(dir / "table1.csv", table.str());
  write_text(dir / "summary.json", summary.dump(1) + "\n");
  write_text(dir / "failures.json", failures_to_json(rep.failures).dump(1) + "\n");
}

// --- study 2 ---------------------------------------------------------------

void validate(const Study2Config& c) {
  if (c.ns.empty()) throw ValidationError("study2 needs at least one n");
  for (auto n : c.ns)
    if (n < 1) throw ValidationError("study2 needs n >= 1");
  if (c.minor_eigenvalues.empty()) throw ValidationError("study2 needs at least one state");
  for (double m : c.minor_eigenvalues)
    if (!(m >= 0.0 && m <= 0.5)) throw ValidationError("study2 minor eigenvalues must lie in [0, 0.5]");
  if (c.replicates < 1) throw ValidationError("study2 needs at least one replicate");
  if (c.restarts < 0) throw ValidationError("restarts must be non-negative");
}

Json to_json(const Study2Record& r) {
  return {{"state", r.state},
          {"n", r.n},
          {"replicate", r.replicate},
          {"seed", r.seed},
          {"ranks", ranks_to_json(r.ranks)},
          {"mse", doubles_to_json(r.mse)},
          {"selected_aic", r.selected_aic},
          {"selected_bic", r.selected_bic}};
}

Study2Record study2_from_json(const Json& j) {
  Study2Record r;
  r.state = j.at("state").get<int>();
  r.n = j.at("n").get<std::int64_t>();
  r.replicate = j.at("replicate").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.ranks = ranks_from_json(j.at("ranks"));
  r.mse = doubles_from_json(j.at("mse"));
  r.selected_aic = j.at("selected_aic").get<int>();
  r.selected_bic = j.at("selected_bic").get<int>();
  return r;
}

void write_study2(const Study2Report& rep, const std::filesystem::path& dir) {
  const std::string& h = rep.config_hash;
  const auto seed = rep.config.seed;
  std::ostringstream records;
  records << "config_hash,seed,state,n,replicate,rank,loglik,aic,bic,converged,mse,selected_aic,selected_bic\n";
  for (const auto& r : rep.records)
    for (std::size_t i = 0; i < r.ranks.size(); ++i) {
      const RankEntry& e = r.ranks[i];
      records << h << ',' << r.seed << ',' << r.state + 1 << ',' << r.n << ',' << r.replicate << ',' << e.rank << ','
              << fmt(e.loglik) << ',' << fmt(e.aic) << ',' << fmt(e.bic) << ',' << (e.converged ? 1 : 0) << ','
              << fmt(r.mse[i]) << ',' << r.selected_aic << ',' << r.selected_bic << '\n';
    }
  std::ostringstream table;
  table << "config_hash,seed,state,true_rank,criterion,n,correct,replicates\n";
  for (const char* crit : {"BIC", "AIC"})
    for (const auto& c : rep.cells)
      table << h << ',' << seed << ',' << c.state + 1 << ',' << rep.true_ranks[static_cast<std::size_t>(c.state)]
            << ',' << crit << ',' << c.n << ',' << (std::string(crit) == "BIC" ? c.bic_correct : c.aic_correct) << ','
            << c.replicates << '\n';
  std::ostringstream mse;
  mse << "config_hash,seed,state,n,rank,mse_mean,mse_stderr,replicates\n";
  for (const auto& c : rep.cells)
    for (std::size_t r = 0; r < c.mse_mean.size(); ++r)
      mse << h << ',' << seed << ',' << c.state + 1 << ',' << c.n << ',' << r + 1 << ',' << fmt(c.mse_mean[r]) << ','
          << fmt(c.mse_stderr[r]) << ',' << c.replicates << '\n';

  Json summary;
  summary["config_hash"] = h;
  summary["seed"] = seed;
  Json cells = Json::array();
  for (const auto& c : rep.cells)
    cells.push_back({{"state", c.state + 1},
                     {"n", c.n},
                     {"replicates", c.replicates},
                     {"bic_correct", c.bic_correct},
                     {"aic_correct", c.aic_correct},
                     {"mse_mean", doubles_to_json(c.mse_mean)}});
  summary["cells"] = cells;
  summary["completed"] = rep.records.size();
  summary["failed"] = rep.failures.size();

  write_text(dir / "records.csv", records.str());
  write_text(dir / "table2.csv", table.str());
  write_text(dir / "mse.csv", mse.str());
  write_text(dir / "summary.json", summary.dump(1) + "\n");
  write_text(dir / "failures.json", failures_to_json(rep.failures).dump(1) + "\n");
}

}  // namespace

double Study1Record::lambda(int rank_lo) const {
  if (rank_lo < 1 || rank_lo + 1 > static_cast<int>(ranks.size()))
    throw ValidationError("likelihood ratio needs both ranks fitted");
  return 2.0 * (ranks[static_cast<std::size_t>(rank_lo)].loglik - ranks[static_cast<std::size_t>(rank_lo - 1)].loglik);
}

RunConfig Study1Config::to_config() const {
  RunConfig c;
  c.set("command", "study1");
  c.set("k", qubits);
  std::string ranks;
  for (int r : true_ranks) ranks += (ranks.empty() ? "" : ",") + std::to_string(r);
  c.set("true_ranks", ranks);
  c.set("n", n);
  c.set("replicates", replicates);
  c.set("max_rank", max_rank);
  c.set("seed", seed);
  c.set("restarts", restarts);
  c.set("min_eigen_ratio", min_eigen_ratio);
  return c;
}

DensityMatrix study1_truth(const Study1Config& config, int rank) {
  return random_significant_state(config.qubits, rank,
                                  derive_seed(config.seed, {0x7e57ULL, static_cast<std::uint64_t>(rank)}),
                                  config.min_eigen_ratio);
}

Study1Report run_study1(const Study1Config& config, const std::optional<StudyOutput>& output) {
  validate(config);
  Study1Report rep;
  rep.config = config;
  const RunConfig rc = config.to_config();
  rep.config_hash = rc.hash();
  for (int r : config.true_ranks) rep.truths.push_back(study1_truth(config, r));

  const auto reps = static_cast<std::size_t>(config.replicates);
  const std::size_t count = config.true_ranks.size() * reps;
  auto job = [&](std::size_t i) {
    const std::size_t state = i / reps;
    Study1Record r;
    r.true_rank = config.true_ranks[state];
    r.replicate = static_cast<int>(i % reps);
    r.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(r.true_rank), static_cast<std::uint64_t>(r.replicate)});
    const DensityMatrix& truth = rep.truths[state];
    const CountsDataset data = simulate_dataset(truth, config.n, r.seed);
    ScanOptions so;
    so.max_rank = config.max_rank;
    so.fit.restarts = config.restarts;
    so.fit.seed = derive_seed(r.seed, {1});
    const RankScan scan = scan_ranks(data, so);
    fill_fit_summary(scan, truth, r.ranks, r.mse, r.selected_aic, r.selected_bic);
    r.kl_rank1 = kl_measurement(truth, scan.fit(1).state());
    return r;
  };
  auto key = [&](std::size_t i) {
    return "true_rank=" + std::to_string(config.true_ranks[i / reps]) + " replicate=" + std::to_string(i % reps);
  };
  auto done = run_jobs<Study1Record>(
      count, job, key, [](const Study1Record& r) { return to_json(r); }, study1_from_json, rep.config_hash, rc, output,
      config.threads, rep.failures);

  rep.aic_table.assign(config.true_ranks.size(), std::vector<int>(static_cast<std::size_t>(config.max_rank), 0));
  rep.bic_table = rep.aic_table;
  for (std::size_t i = 0; i < count; ++i) {
    if (!done[i]) continue;
    const std::size_t state = i / reps;
    rep.aic_table[state][static_cast<std::size_t>(done[i]->selected_aic - 1)]++;
    rep.bic_table[state][static_cast<std::size_t>(done[i]->selected_bic - 1)]++;
    rep.records.push_back(std::move(*done[i]));
  }
  if (output) write_study1(rep, output->dir);
  return rep;
}

RunConfig Study2Config::to_config() const {
  RunConfig c;
  c.set("command", "study2");
  std::string list;
  for (auto n : ns) list += (list.empty() ? "" : ",") + std::to_string(n);
  c.set("ns", list);
  list.clear();
  for (double m : minor_eigenvalues) list += (list.empty() ? "" : ",") + format_double(m);
  c.set("minor_eigenvalues", list);
  c.set("replicates", replicates);
  c.set("seed", seed);
  c.set("restarts", restarts);
  c.set("bloch_theta", bloch_theta);
  c.set("bloch_phi", bloch_phi);
  return c;
}

DensityMatrix study2_truth(const Study2Config& config, int state) {
  const double minor = config.minor_eigenvalues.at(static_cast<std::size_t>(state));
  const double c = std::cos(config.bloch_theta / 2.0);
  const double s = std::sin(config.bloch_theta / 2.0);
  const Complex phase = std::polar(1.0, config.bloch_phi);
  Vector psi(2), perp(2);
  psi << c, phase * s;
  perp << -std::conj(phase) * s, c;
  Matrix rho = (1.0 - minor) * psi * psi.adjoint() + minor * perp * perp.adjoint();
  return DensityMatrix(rho);
}

const Study2Cell& Study2Report::cell(int state, std::int64_t n) const {
  for (const auto& c : cells)
    if (c.state == state && c.n == n) return c;
  throw ValidationError("no study2 cell for that state and n");
}

Study2Report run_study2(const Study2Config& config, const std::optional<StudyOutput>& output) {
  validate(config);
  Study2Report rep;
  rep.config = config;
  const RunConfig rc = config.to_config();
  rep.config_hash = rc.hash();
  for (std::size_t s = 0; s < config.minor_eigenvalues.size(); ++s) {
    rep.truths.push_back(study2_truth(config, static_cast<int>(s)));
    rep.true_ranks.push_back(config.minor_eigenvalues[s] > 0.0 ? 2 : 1);
  }

  const auto reps = static_cast<std::size_t>(config.replicates);
  const std::size_t per_state = config.ns.size() * reps;
  const std::size_t count = config.minor_eigenvalues.size() * per_state;
  auto job = [&](std::size_t i) {
    Study2Record r;
    r.state = static_cast<int>(i / per_state);
    r.n = config.ns[(i % per_state) / reps];
    r.replicate = static_cast<int>(i % reps);
    r.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(r.state), static_cast<std::uint64_t>(r.n),
                                       static_cast<std::uint64_t>(r.replicate)});
    const DensityMatrix& truth = rep.truths[static_cast<std::size_t>(r.state)];
    const CountsDataset data = simulate_dataset(truth, r.n, r.seed);
    ScanOptions so;
    so.max_rank = 2;
    so.fit.restarts = config.restarts;
    so.fit.seed = derive_seed(r.seed, {1});
    fill_fit_summary(scan_ranks(data, so), truth, r.ranks, r.mse, r.selected_aic, r.selected_bic);
    return r;
  };
  auto key = [&](std::size_t i) {
    return "state=" + std::to_string(i / per_state + 1) + " n=" + std::to_string(config.ns[(i % per_state) / reps]) +
           " replicate=" + std::to_string(i % reps);
  };
  auto done = run_jobs<Study2Record>(
      count, job, key, [](const Study2Record& r) { return to_json(r); }, study2_from_json, rep.config_hash, rc, output,
      config.threads, rep.failures);

  for (std::size_t s = 0; s < config.minor_eigenvalues.size(); ++s) {
    for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
      Study2Cell cell;
      cell.state = static_cast<int>(s);
      cell.n = config.ns[ni];
      std::vector<std::vector<double>> mse(2);
      for (std::size_t j = 0; j < reps; ++j) {
        auto& rec = done[s * per_state + ni * reps + j];
        if (!rec) continue;
        ++cell.replicates;
        if (rec->selected_aic == rep.true_ranks[s]) ++cell.aic_correct;
        if (rec->selected_bic == rep.true_ranks[s]) ++cell.bic_correct;
        for (std::size_t r = 0; r < rec->mse.size() && r < 2; ++r) mse[r].push_back(rec->mse[r]);
        rep.records.push_back(std::move(*rec));
      }
      for (const auto& v : mse) {
        const auto m = static_cast<double>(v.size());
        double mean = 0.0, var = 0.0;
        for (double x : v) mean += x;
        mean = v.empty() ? std::numeric_limits<double>::quiet_NaN() : mean / m;
        for (double x : v) var += (x - mean) * (x - mean);
        cell.mse_mean.push_back(mean);
        cell.mse_stderr.push_back(v.size() > 1 ? std::sqrt(var / (m - 1.0) / m) : 0.0);
      }
      rep.cells.push_back(std::move(cell));
    }
  }
  if (output) write_study2(rep, output->dir);
  return rep;
}

}  // namespace qtomo
