#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mertens/coefficients.hpp"
#include "mertens/engine.hpp"
#include "mertens/errors.hpp"
#include "mertens/proof.hpp"
#include "mertens/rational.hpp"
#include "mertens/report.hpp"
#include "mertens/sieve.hpp"
#include "mertens/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace mertens;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + out_path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write failed for '" + out_path + "'");
}

std::pair<uint64_t, uint64_t> lambda_from_string(const std::string& s) {
  const Rational lam = parse_rational(s);
  if (lam <= 0 || lam >= 1)
    throw DomainError("lambda must satisfy 0 < lambda < 1, got '" + s + "'");
  if (!lam.get_num().fits_ulong_p() || !lam.get_den().fits_ulong_p())
    throw DomainError("lambda numerator/denominator too large: '" + s + "'");
  return {lam.get_num().get_ui(), lam.get_den().get_ui()};
}

int cmd_sieve(uint64_t limit, uint64_t capacity, const std::string& format,
              const std::string& out_path) {
  const MobiusTable mob = build_mobius(limit, capacity);
  const MertensTable mert = build_mertens(mob);
  const TotientTable tot = build_totient(limit, capacity);
  uint64_t neg = 0, zero = 0, pos = 0;
  for (uint64_t i = 1; i <= limit; ++i) {
    const int v = mob.mu[i];
    if (v < 0) ++neg;
    else if (v == 0) ++zero;
    else ++pos;
  }
  const int64_t identity = check_sum_identity(mert, limit);
  if (format == "csv") {
    std::string text =
        "limit,mertens,phi_sum,mu_negative,mu_zero,mu_positive,sum_identity\n";
    text += std::to_string(limit) + "," + std::to_string(mert.mertens_at(limit)) +
            "," + std::to_string(tot.phi_sum_at(limit)) + "," +
            std::to_string(neg) + "," + std::to_string(zero) + "," +
            std::to_string(pos) + "," + std::to_string(identity) + "\n";
    emit(text, out_path);
  } else {
    ordered_json j;
    j["limit"] = limit;
    j["mertens"] = mert.mertens_at(limit);
    j["phi_sum"] = tot.phi_sum_at(limit);
    j["mu_negative"] = neg;
    j["mu_zero"] = zero;
    j["mu_positive"] = pos;
    j["sum_identity"] = identity;
    emit(j.dump(2) + "\n", out_path);
  }
  return identity == 1 ? 0 : 1;
}

int cmd_mertens(uint64_t x, uint64_t threshold, const std::string& cache_path,
                const std::string& save_path, const std::string& format,
                const std::string& out_path) {
  MertensOracle oracle = cache_path.empty()
                             ? MertensOracle(threshold ? threshold
                                                       : default_threshold(x))
                             : MertensOracle::load_cache(cache_path);
  if (!cache_path.empty() && threshold) oracle.set_threshold(threshold);
  const auto t0 = std::chrono::steady_clock::now();
  const int64_t value = oracle.mertens(x);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (!save_path.empty()) oracle.save_cache(save_path);
  const auto stats = oracle.stats();
  if (format == "csv") {
    std::string text = "x,mertens,threshold,dense_hits,memo_hits,computed,seconds\n";
    text += std::to_string(x) + "," + std::to_string(value) + "," +
            std::to_string(oracle.threshold()) + "," +
            std::to_string(stats.dense_hits) + "," +
            std::to_string(stats.memo_hits) + "," +
            std::to_string(stats.computed) + "," + std::to_string(seconds) + "\n";
    emit(text, out_path);
  } else {
    ordered_json j;
    j["x"] = x;
    j["mertens"] = value;
    j["threshold"] = oracle.threshold();
    j["dense_hits"] = stats.dense_hits;
    j["memo_hits"] = stats.memo_hits;
    j["computed"] = stats.computed;
    j["seconds"] = seconds;
    emit(j.dump(2) + "\n", out_path);
  }
  return 0;
}

int cmd_coeffs(uint64_t n, const std::string& format,
               const std::string& out_path) {
  if (n < 2) throw DomainError("coeffs: n must be >= 2");
  if (n > 1000000) throw DomainError("coeffs: n is capped at 1000000 for output");
  const MertensOracle oracle(default_threshold(n));
  const CoefficientVector cv = coefficients(oracle, n);
  if (format == "csv") {
    std::string text = "kind,index,value\n";
    for (uint64_t j = 0; j <= n; ++j)
      text += "d," + std::to_string(j) + "," + std::to_string(cv.d[j]) + "\n";
    for (uint64_t r = 1; r <= n - 1; ++r)
      text += "f," + std::to_string(r) + "," + std::to_string(cv.f[r]) + "\n";
    emit(text, out_path);
  } else {
    ordered_json j;
    j["n"] = n;
    j["d"] = cv.d;
    j["f"] = std::vector<int64_t>(cv.f.begin() + 1, cv.f.end());
    emit(j.dump(2) + "\n", out_path);
  }
  return 0;
}

int cmd_verify(const std::string& suite, uint64_t n_min, uint64_t n_max,
               uint64_t grid_q, const std::vector<std::string>& lambda_strs,
               uint64_t threshold, unsigned threads, uint64_t g_samples,
               const std::string& format, const std::string& out_path) {
  ReportConfig cfg;
  cfg.suite = suite;
  cfg.n_min = n_min;
  cfg.n_max = n_max;
  cfg.grid_q = grid_q;
  for (const auto& s : lambda_strs) cfg.lambdas.push_back(lambda_from_string(s));
  cfg.threshold = threshold;
  cfg.threads = threads;
  cfg.g_samples = g_samples;
  const VerificationReport report = run_sweep(cfg);
  emit(format == "csv" ? render_csv(report) : render_json(report), out_path);
  uint64_t failures = 0;
  for (const auto& c : report.claims)
    if (!c.pass) ++failures;
  std::cerr << "claims: " << report.claims.size() << ", failures: " << failures
            << "\n";
  return report.all_pass() ? 0 : 1;
}

int cmd_bench(const std::vector<uint64_t>& xs,
              const std::vector<uint64_t>& thresholds, uint64_t sieve_check_max,
              const std::string& format, const std::string& out_path) {
  const auto results = run_bench(xs, thresholds, sieve_check_max);
  bool all_agree = true;
  if (format == "csv") {
    std::string text = "x,threshold,mertens,seconds,agree\n";
    for (const auto& r : results) {
      text += std::to_string(r.x) + "," + std::to_string(r.threshold) + "," +
              std::to_string(r.value) + "," + std::to_string(r.seconds) + "," +
              (r.agree ? "true" : "false") + "\n";
      all_agree = all_agree && r.agree;
    }
    emit(text, out_path);
  } else {
    ordered_json arr = ordered_json::array();
    for (const auto& r : results) {
      ordered_json j;
      j["x"] = r.x;
      j["threshold"] = r.threshold;
      j["mertens"] = r.value;
      j["seconds"] = r.seconds;
      j["agree"] = r.agree;
      arr.push_back(std::move(j));
      all_agree = all_agree && r.agree;
    }
    emit(arr.dump(2) + "\n", out_path);
  }
  return all_agree ? 0 : 1;
}

void print_cache_summary(const MertensOracle& oracle, const std::string& path,
                         const std::string& format,
                         const std::string& out_path) {
  const auto memo = oracle.memo_snapshot();
  if (format == "csv") {
    std::string text = "path,threshold,entries,min_x,max_x\n";
    text += path + "," + std::to_string(oracle.threshold()) + "," +
            std::to_string(memo.size()) + ",";
    text += memo.empty() ? "" : std::to_string(memo.begin()->first);
    text += ",";
    text += memo.empty() ? "" : std::to_string(memo.rbegin()->first);
    text += "\n";
    emit(text, out_path);
  } else {
    ordered_json j;
    j["path"] = path;
    j["threshold"] = oracle.threshold();
    j["entries"] = memo.size();
    if (memo.empty()) {
      j["min_x"] = nullptr;
      j["max_x"] = nullptr;
    } else {
      j["min_x"] = memo.begin()->first;
      j["max_x"] = memo.rbegin()->first;
    }
    emit(j.dump(2) + "\n", out_path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mertens function computation and polynomial positivity checks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  std::string out_path;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "write output to this file instead of stdout");

  auto* sieve_cmd = app.add_subcommand("sieve", "build dense tables and summarize them");
  uint64_t sieve_limit = 1000000;
  uint64_t sieve_capacity = kDefaultCapacity;
  sieve_cmd->add_option("--limit", sieve_limit, "table size")->capture_default_str();
  sieve_cmd->add_option("--capacity", sieve_capacity, "table entry ceiling")
      ->capture_default_str();

  auto* mertens_cmd = app.add_subcommand("mertens", "compute M(x)");
  uint64_t mx = 0;
  uint64_t mthreshold = 0;
  std::string mcache, msave;
  mertens_cmd->add_option("--x", mx, "argument")->required();
  mertens_cmd->add_option("--threshold", mthreshold,
                          "dense table size (default: automatic)");
  mertens_cmd->add_option("--cache", mcache, "load memo cache from this file");
  mertens_cmd->add_option("--save-cache", msave, "save memo cache to this file");

  auto* coeffs_cmd = app.add_subcommand("coeffs", "print polynomial coefficients");
  uint64_t cn = 0;
  coeffs_cmd->add_option("--n", cn, "polynomial degree")->required();

  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->require_subcommand(1);
  uint64_t v_nmin = 2, v_nmax = 50, v_grid = 100, v_threshold = 0;
  uint64_t v_gsamples = 100000;
  unsigned v_threads = 1;
  std::vector<std::string> v_lambdas;
  for (const char* name : {"theorem1", "theorem2", "proof", "all"}) {
    auto* sub = verify_cmd->add_subcommand(name);
    sub->add_option("--n-min", v_nmin, "smallest degree")->capture_default_str();
    sub->add_option("--n-max", v_nmax, "largest degree")->capture_default_str();
    sub->add_option("--grid", v_grid, "lambda grid denominator")
        ->capture_default_str();
    sub->add_option("--lambda", v_lambdas,
                    "lambda sample as p/q (repeatable; default set if omitted)");
    sub->add_option("--threshold", v_threshold,
                    "dense table size (default: automatic)");
    sub->add_option("--threads", v_threads, "worker threads")
        ->capture_default_str();
    sub->add_option("--g-samples", v_gsamples, "interior samples for the g audit")
        ->capture_default_str();
  }

  auto* bench_cmd = app.add_subcommand("bench", "time M(x) across thresholds");
  std::vector<uint64_t> b_xs = {1000000, 10000000};
  std::vector<uint64_t> b_thresholds = {10000, 100000, 1000000};
  uint64_t b_sieve_max = 10000000;
  bench_cmd->add_option("--x", b_xs, "arguments to time")->capture_default_str();
  bench_cmd->add_option("--thresholds", b_thresholds, "dense table sizes")
      ->capture_default_str();
  bench_cmd->add_option("--sieve-check-max", b_sieve_max,
                        "cross-check against a dense sieve up to this x")
      ->capture_default_str();

  auto* cache_cmd = app.add_subcommand("cache", "memo cache files");
  cache_cmd->require_subcommand(1);
  auto* cache_save = cache_cmd->add_subcommand("save", "build and save a cache");
  std::string cs_file;
  uint64_t cs_threshold = 10000;
  std::vector<uint64_t> cs_warm;
  cache_save->add_option("--file", cs_file, "output path")->required();
  cache_save->add_option("--threshold", cs_threshold, "dense table size")
      ->capture_default_str();
  cache_save->add_option("--warm", cs_warm, "compute M(x) for these x first");
  auto* cache_load = cache_cmd->add_subcommand("load", "validate a cache file");
  auto* cache_info = cache_cmd->add_subcommand("info", "describe a cache file");
  std::string cl_file, ci_file;
  cache_load->add_option("--file", cl_file, "cache path")->required();
  cache_info->add_option("--file", ci_file, "cache path")->required();

  try {
    app.parse(argc, argv);

    if (sieve_cmd->parsed())
      return cmd_sieve(sieve_limit, sieve_capacity, format, out_path);
    if (mertens_cmd->parsed())
      return cmd_mertens(mx, mthreshold, mcache, msave, format, out_path);
    if (coeffs_cmd->parsed()) return cmd_coeffs(cn, format, out_path);
    if (verify_cmd->parsed()) {
      const std::string suite = verify_cmd->get_subcommands().front()->get_name();
      return cmd_verify(suite, v_nmin, v_nmax, v_grid, v_lambdas, v_threshold,
                        v_threads, v_gsamples, format, out_path);
    }
    if (bench_cmd->parsed())
      return cmd_bench(b_xs, b_thresholds, b_sieve_max, format, out_path);
    if (cache_cmd->parsed()) {
      if (cache_save->parsed()) {
        MertensOracle oracle(cs_threshold);
        for (const uint64_t x : cs_warm) oracle.mertens(x);
        oracle.save_cache(cs_file);
        print_cache_summary(oracle, cs_file, format, out_path);
        return 0;
      }
      const std::string& path = cache_load->parsed() ? cl_file : ci_file;
      const MertensOracle oracle = MertensOracle::load_cache(path);
      print_cache_summary(oracle, path, format, out_path);
      return 0;
    }
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const CorruptCacheError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
