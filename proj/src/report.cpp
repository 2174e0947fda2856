#include "mertens/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <iterator>
#include <numeric>
#include <utility>

#include "json.hpp"
#include "mertens/coefficients.hpp"
#include "mertens/engine.hpp"
#include "mertens/errors.hpp"
#include "mertens/parallel.hpp"
#include "mertens/proof.hpp"
#include "mertens/version.hpp"

namespace mertens {

namespace {

using nlohmann::ordered_json;

constexpr std::pair<uint64_t, uint64_t> kDefaultLambdas[] = {
    {1, 10}, {1, 3}, {1, 2}, {2, 3}, {9, 10}};

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  uint64_t micros() const {
    return static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::steady_clock::now() - t0)
            .count());
  }
};

std::string lambda_string(uint64_t p, uint64_t q) {
  return std::to_string(p) + "/" + std::to_string(q);
}

void set_lambda(ClaimRecord& c, uint64_t p, uint64_t q) {
  const uint64_t g = std::gcd(p, q);
  c.has_lambda = true;
  c.lambda_num = p / g;
  c.lambda_den = q / g;
}

void theorem1_claims(const MertensOracle& oracle, uint64_t n, uint64_t grid_q,
                     std::vector<ClaimRecord>& out) {
  Timer timer;
  const auto points = verify_theorem1(oracle, n, grid_q);
  const uint64_t share = timer.micros() / (2 * points.size());
  for (const auto& pt : points) {
    ClaimRecord nn;
    nn.claim_id = "th1.nonneg";
    nn.n = n;
    set_lambda(nn, pt.i, pt.grid_q);
    nn.pass = pt.nonneg_ok;
    nn.margin = margin_from(pt.value);
    nn.micros = share;
    ClaimRecord rm = nn;
    rm.claim_id = "th1.remark";
    rm.pass = pt.remark_ok;
    rm.margin = margin_from(pt.remark_margin);
    out.push_back(std::move(nn));
    out.push_back(std::move(rm));
  }
}

void theorem2_claims(const MertensOracle& oracle, uint64_t n,
                     const std::vector<std::pair<uint64_t, uint64_t>>& lambdas,
                     std::vector<ClaimRecord>& out) {
  for (const auto& [p, q] : lambdas) {
    Timer timer;
    Rational lam{mpz_class(p), mpz_class(q)};
    lam.canonicalize();
    const Theorem2Point pt = verify_theorem2(oracle, n, lam);
    const uint64_t share = timer.micros() / 2;
    ClaimRecord st;
    st.claim_id = "th2.strict";
    st.n = n;
    set_lambda(st, p, q);
    st.pass = pt.strict_ok;
    st.margin = margin_from(pt.strict_margin);
    st.micros = share;
    ClaimRecord sg = st;
    sg.claim_id = "th2.strong";
    sg.pass = pt.strengthened_ok;
    sg.margin = margin_from(pt.strengthened_margin);
    out.push_back(std::move(st));
    out.push_back(std::move(sg));
  }
}

void proof_claims(const MertensOracle& oracle, const TotientTable& tot,
                  uint64_t n, uint64_t grid_q, std::vector<ClaimRecord>& out) {
  auto push = [&](const char* id, bool pass, MarginValue margin, uint64_t us) {
    ClaimRecord c;
    c.claim_id = id;
    c.n = n;
    c.pass = pass;
    c.margin = std::move(margin);
    c.micros = us;
    out.push_back(std::move(c));
  };

  const uint64_t m = n - 1;
  {
    Timer timer;
    const SumDecomposition sd = sum_decomposition(oracle, tot, m);
    const TotientBound tb = check_totient_bound(tot, m);
    const uint64_t share = timer.micros() / 2;
    push("proof.decomp", sd.ok(), margin_from(sd.coeff_sum), share);
    push("proof.totient", tb.ok && tb.sharper_ok, margin_from(tb.margin), share);
  }
  if (n <= 94) {
    Timer timer;
    const SmallNAudit sa = check_small_n(oracle, n);
    push("proof.small_n", sa.ok(), margin_from(sa.min_margin), timer.micros());
    return;
  }
  Timer timer;
  const ProofAudit audit = audit_proof(oracle, n, grid_q);
  const uint64_t share = timer.micros() / 6;
  const int64_t sn = static_cast<int64_t>(n);
  push("proof.partition", audit.partition.a_lower_ok,
       margin_from(8 * audit.partition.a - (sn * sn - 4 * sn + 3)), share);
  push("proof.chains", audit.chains.ok(),
       margin_from(audit.chains.min_window), share);
  push("proof.b4_sum", audit.b4.sum_positive,
       margin_from(audit.b4.sum_margin), share);
  push("proof.b4_quad", audit.b4.four_a_greater,
       margin_from(audit.b4.four_a_margin), share);
  push("proof.b4_grid", audit.b4.lambda_form_ok,
       margin_from(audit.b4.lambda_form_min), share);
  push("proof.tail", audit.tail.ok(),
       margin_from(0.342 - audit.tail.ratio), share);
}

void g_claims(uint64_t samples, uint64_t grid_q, std::vector<ClaimRecord>& out) {
  Timer timer;
  const GAudit ga = check_g(samples, grid_q);
  ClaimRecord c;
  c.claim_id = "proof.g";
  c.pass = ga.ok();
  c.margin = margin_from(ga.min_g);
  c.micros = timer.micros();
  out.push_back(std::move(c));
}

std::pair<uint64_t, uint64_t> parse_lambda_pair(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == s.size())
    throw IoError("report parse: malformed lambda '" + s + "'");
  try {
    return {std::stoull(s.substr(0, slash)), std::stoull(s.substr(slash + 1))};
  } catch (const std::exception&) {
    throw IoError("report parse: malformed lambda '" + s + "'");
  }
}

}  // namespace

MarginValue margin_from(const Rational& v) {
  const DecimalString d = to_decimal(v);
  return {d.digits, d.exact};
}

MarginValue margin_from(double v) {
  const DecimalString d = to_decimal(v);
  return {d.digits, d.exact};
}

MarginValue margin_from(int64_t v) {
  return margin_from(Rational(static_cast<long>(v)));
}

bool VerificationReport::all_pass() const {
  return std::all_of(claims.begin(), claims.end(),
                     [](const ClaimRecord& c) { return c.pass; });
}

void VerificationReport::sort_claims() {
  std::stable_sort(
      claims.begin(), claims.end(),
      [](const ClaimRecord& a, const ClaimRecord& b) {
        if (a.claim_id != b.claim_id) return a.claim_id < b.claim_id;
        if (a.n != b.n) return a.n < b.n;
        if (a.has_lambda != b.has_lambda) return !a.has_lambda;
        if (a.has_lambda) {
          const auto lhs =
              static_cast<unsigned __int128>(a.lambda_num) * b.lambda_den;
          const auto rhs =
              static_cast<unsigned __int128>(b.lambda_num) * a.lambda_den;
          if (lhs != rhs) return lhs < rhs;
        }
        return false;
      });
}

std::string render_json(const VerificationReport& report) {
  ordered_json j;
  j["version"] = report.version;
  j["timestamp"] = report.timestamp;
  ordered_json cfg;
  cfg["suite"] = report.config.suite;
  cfg["n_min"] = report.config.n_min;
  cfg["n_max"] = report.config.n_max;
  cfg["grid_q"] = report.config.grid_q;
  ordered_json lams = ordered_json::array();
  for (const auto& [p, q] : report.config.lambdas)
    lams.push_back(lambda_string(p, q));
  cfg["lambdas"] = std::move(lams);
  cfg["threshold"] = report.config.threshold;
  cfg["threads"] = report.config.threads;
  cfg["g_samples"] = report.config.g_samples;
  j["config"] = std::move(cfg);
  ordered_json claims = ordered_json::array();
  for (const auto& c : report.claims) {
    ordered_json jc;
    jc["claim_id"] = c.claim_id;
    jc["n"] = c.n;
    if (c.has_lambda)
      jc["lambda"] = lambda_string(c.lambda_num, c.lambda_den);
    else
      jc["lambda"] = nullptr;
    jc["pass"] = c.pass;
    jc["margin"] = c.margin.decimal;
    jc["exact"] = c.margin.exact;
    jc["micros"] = c.micros;
    claims.push_back(std::move(jc));
  }
  j["claims"] = std::move(claims);
  return j.dump(2) + "\n";
}

std::string render_csv(const VerificationReport& report) {
  std::string out = "claim_id,n,lambda,pass,margin,exact,micros\n";
  for (const auto& c : report.claims) {
    out += c.claim_id;
    out += ',';
    out += std::to_string(c.n);
    out += ',';
    if (c.has_lambda) out += lambda_string(c.lambda_num, c.lambda_den);
    out += ',';
    out += c.pass ? "true" : "false";
    out += ',';
    out += c.margin.decimal;
    out += ',';
    out += c.margin.exact ? "true" : "false";
    out += ',';
    out += std::to_string(c.micros);
    out += '\n';
  }
  return out;
}

VerificationReport parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("report parse: ") + e.what());
  }
  try {
    VerificationReport r;
    r.version = j.at("version").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    const auto& cfg = j.at("config");
    r.config.suite = cfg.at("suite").get<std::string>();
    r.config.n_min = cfg.at("n_min").get<uint64_t>();
    r.config.n_max = cfg.at("n_max").get<uint64_t>();
    r.config.grid_q = cfg.at("grid_q").get<uint64_t>();
    for (const auto& item : cfg.at("lambdas"))
      r.config.lambdas.push_back(parse_lambda_pair(item.get<std::string>()));
    r.config.threshold = cfg.at("threshold").get<uint64_t>();
    r.config.threads = cfg.at("threads").get<unsigned>();
    r.config.g_samples = cfg.at("g_samples").get<uint64_t>();
    for (const auto& item : j.at("claims")) {
      ClaimRecord c;
      c.claim_id = item.at("claim_id").get<std::string>();
      c.n = item.at("n").get<uint64_t>();
      if (!item.at("lambda").is_null()) {
        const auto [p, q] = parse_lambda_pair(item.at("lambda").get<std::string>());
        c.has_lambda = true;
        c.lambda_num = p;
        c.lambda_den = q;
      }
      c.pass = item.at("pass").get<bool>();
      c.margin.decimal = item.at("margin").get<std::string>();
      c.margin.exact = item.at("exact").get<bool>();
      c.micros = item.at("micros").get<uint64_t>();
      r.claims.push_back(std::move(c));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("report parse: ") + e.what());
  }
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

VerificationReport run_sweep(const ReportConfig& config) {
  ReportConfig cfg = config;
  if (cfg.suite != "theorem1" && cfg.suite != "theorem2" &&
      cfg.suite != "proof" && cfg.suite != "all")
    throw DomainError("run_sweep: unknown suite '" + cfg.suite + "'");
  if (cfg.n_min < 2) throw DomainError("run_sweep: n_min must be >= 2");
  if (cfg.n_max < cfg.n_min) throw DomainError("run_sweep: n_max < n_min");
  if (cfg.grid_q < 1) throw DomainError("run_sweep: grid_q must be >= 1");
  if (cfg.threads < 1) cfg.threads = 1;

  const bool want_t1 = cfg.suite == "theorem1" || cfg.suite == "all";
  const bool want_t2 = cfg.suite == "theorem2" || cfg.suite == "all";
  const bool want_proof = cfg.suite == "proof" || cfg.suite == "all";
  if (want_t2) {
    if (cfg.lambdas.empty())
      cfg.lambdas.assign(std::begin(kDefaultLambdas), std::end(kDefaultLambdas));
    for (auto& [p, q] : cfg.lambdas) {
      if (q == 0 || p == 0 || p >= q)
        throw DomainError("run_sweep: lambda must satisfy 0 < p/q < 1");
      const uint64_t g = std::gcd(p, q);
      p /= g;
      q /= g;
    }
  }
  if (cfg.threshold == 0) cfg.threshold = default_threshold(cfg.n_max);

  MertensOracle oracle(cfg.threshold);
  TotientTable tot;
  if (want_proof) tot = build_totient(std::max<uint64_t>(cfg.n_max - 1, 1));

  std::vector<std::vector<ClaimRecord>> buffers(cfg.threads);
  parallel_for_u64(cfg.n_min, cfg.n_max + 1, cfg.threads,
                   [&](uint64_t n, unsigned w) {
                     auto& buf = buffers[w];
                     if (want_t1) theorem1_claims(oracle, n, cfg.grid_q, buf);
                     if (want_t2) theorem2_claims(oracle, n, cfg.lambdas, buf);
                     if (want_proof) proof_claims(oracle, tot, n, cfg.grid_q, buf);
                   });

  VerificationReport report;
  report.version = kVersion;
  report.timestamp = iso8601_utc_now();
  report.config = cfg;
  size_t total = 1;
  for (const auto& b : buffers) total += b.size();
  report.claims.reserve(total);
  for (auto& b : buffers)
    for (auto& c : b) report.claims.push_back(std::move(c));
  if (want_proof) g_claims(cfg.g_samples, cfg.grid_q, report.claims);
  report.sort_claims();
  return report;
}

std::vector<BenchResult> run_bench(const std::vector<uint64_t>& xs,
                                   const std::vector<uint64_t>& thresholds,
                                   uint64_t sieve_check_max) {
  if (xs.empty() || thresholds.empty())
    throw DomainError("run_bench: need at least one x and one threshold");
  for (const uint64_t t : thresholds)
    if (t < 1) throw DomainError("run_bench: threshold must be >= 1");
  uint64_t dense_limit = 0;
  for (const uint64_t x : xs) {
    if (x < 1) throw DomainError("run_bench: x must be >= 1");
    if (x <= sieve_check_max) dense_limit = std::max(dense_limit, x);
  }
  MertensTable check;
  if (dense_limit) check = build_mertens(build_mobius(dense_limit));

  std::vector<BenchResult> results;
  results.reserve(xs.size() * thresholds.size());
  for (const uint64_t x : xs) {
    const size_t first = results.size();
    for (const uint64_t t : thresholds) {
      MertensOracle oracle(t);
      const auto t0 = std::chrono::steady_clock::now();
      const int64_t v = oracle.mertens(x);
      const auto t1 = std::chrono::steady_clock::now();
      results.push_back(
          {x, t, v, std::chrono::duration<double>(t1 - t0).count(), true});
    }
    bool agree = true;
    for (size_t i = first + 1; i < results.size(); ++i)
      if (results[i].value != results[first].value) agree = false;
    if (dense_limit && x <= dense_limit &&
        check.mertens_at(x) != results[first].value)
      agree = false;
    for (size_t i = first; i < results.size(); ++i) results[i].agree = agree;
  }
  return results;
}

}  // namespace mertens
