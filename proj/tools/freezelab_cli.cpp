// freezelab command line tool: compute zero sets and frozen covariances,
// draw reproducible sample batches, run the verification suites, and sweep
// multiplicities for convergence tables.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "freezelab/batch_io.hpp"
#include "freezelab/ensembles.hpp"
#include "freezelab/freezing.hpp"
#include "freezelab/linalg.hpp"
#include "freezelab/orthopoly.hpp"
#include "freezelab/rng.hpp"
#include "freezelab/sampling.hpp"
#include "freezelab/stats.hpp"

namespace {

using nlohmann::ordered_json;
using namespace freezelab;

constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Effective run configuration: flags win over --config values, which win over
// the FREEZELAB_SEED environment default.
struct RunConfig {
  std::string command;
  std::string system;
  std::string family;
  std::string law;
  std::string suite;
  std::string mode;
  std::string flavor;
  std::string format;
  std::string out;
  int n = 0;
  double k = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double nu = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  double t = 1.0;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
  int permutations = 200;
  bool verify = false;
  std::vector<double> k_grid;

  std::set<std::string> given;  // keys fixed by flags or config

  bool has(const std::string& key) const { return given.count(key) != 0; }
};

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys = {
      "command", "system", "family", "law",  "suite", "mode",  "flavor", "format",
      "out",     "n",      "k",      "k1",   "k2",    "nu",    "beta",
      "alpha",   "t",      "count",  "seed", "permutations",   "verify",
      "k_grid"};
  return keys;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    if (!config_keys().count(key)) throw UsageError("unknown config key: " + key);
    if (cfg.has(key)) continue;  // flags win
    const auto& v = item.value();
    try {
      if (key == "command") {
        if (v.get<std::string>() != cfg.command)
          throw UsageError("config command '" + v.get<std::string>() +
                           "' does not match subcommand '" + cfg.command + "'");
      } else if (key == "system") cfg.system = v.get<std::string>();
      else if (key == "family") cfg.family = v.get<std::string>();
      else if (key == "law") cfg.law = v.get<std::string>();
      else if (key == "suite") cfg.suite = v.get<std::string>();
      else if (key == "mode") cfg.mode = v.get<std::string>();
      else if (key == "flavor") cfg.flavor = v.get<std::string>();
      else if (key == "format") cfg.format = v.get<std::string>();
      else if (key == "out") cfg.out = v.get<std::string>();
      else if (key == "n") cfg.n = v.get<int>();
      else if (key == "k") cfg.k = v.get<double>();
      else if (key == "k1") cfg.k1 = v.get<double>();
      else if (key == "k2") cfg.k2 = v.get<double>();
      else if (key == "nu") cfg.nu = v.get<double>();
      else if (key == "beta") cfg.beta = v.get<double>();
      else if (key == "alpha") cfg.alpha = v.get<double>();
      else if (key == "t") cfg.t = v.get<double>();
      else if (key == "count") cfg.count = v.get<std::uint64_t>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "permutations") cfg.permutations = v.get<int>();
      else if (key == "verify") cfg.verify = v.get<bool>();
      else if (key == "k_grid") cfg.k_grid = v.get<std::vector<double>>();
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("config key '" + key + "' has the wrong type");
    }
    if (key != "command") cfg.given.insert(key);
  }
}

void apply_seed_env(RunConfig& cfg) {
  if (cfg.has("seed")) return;
  const char* env = std::getenv("FREEZELAB_SEED");
  if (!env || !*env) return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') throw UsageError("FREEZELAB_SEED is not an integer");
  cfg.seed = v;
  cfg.given.insert("seed");
}

// Output sink: --out opens a file (failure is an I/O error), otherwise stdout.
class Sink {
 public:
  explicit Sink(const RunConfig& cfg) {
    if (!cfg.out.empty()) {
      file_.open(cfg.out, std::ios::binary);
      if (!file_) throw IoError("cannot open output file: " + cfg.out);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failure");
  }

 private:
  std::ofstream file_;
};

std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json matrix_json(const SymMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.dim(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

RootSystem parse_system(const std::string& s) {
  if (s == "A" || s == "a") return RootSystem::A;
  if (s == "B" || s == "b") return RootSystem::B;
  if (s == "D" || s == "d") return RootSystem::D;
  throw UsageError("unknown system: " + s);
}

Flavor parse_flavor(const std::string& s) {
  if (s == "bessel") return Flavor::Bessel;
  if (s == "cauchy") return Flavor::Cauchy;
  throw UsageError("unknown flavor: " + s);
}

// ---------------------------------------------------------------------------
// zeros

int run_zeros(RunConfig& cfg) {
  if (cfg.family != "hermite" && cfg.family != "laguerre")
    throw UsageError("zeros: --family must be hermite or laguerre");
  if (cfg.n < 1) throw UsageError("zeros: --n must be at least 1");
  if (!cfg.has("format")) cfg.format = "csv";
  if (cfg.format != "csv") throw UsageError("zeros: only csv output is supported");

  ZeroSet zs;
  try {
    zs = cfg.family == "hermite" ? hermite_zeros(cfg.n) : laguerre_zeros(cfg.n, cfg.alpha);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ordered_json echo;
  echo["command"] = "zeros";
  echo["family"] = cfg.family;
  echo["n"] = cfg.n;
  if (cfg.family == "laguerre") echo["alpha"] = cfg.alpha;
  echo["verify"] = cfg.verify;
  echo["format"] = cfg.format;
  if (!cfg.out.empty()) echo["out"] = cfg.out;

  Sink sink(cfg);
  std::ostream& out = sink.stream();
  out << "# " << echo.dump() << "\n";
  out << "index,zero\n";
  for (int i = 0; i < cfg.n; ++i)
    out << (i + 1) << ',' << csv_double(zs.zeros[cfg.n - 1 - i]) << "\n";

  bool pass = true;
  if (cfg.verify) {
    ZeroIdentityReport rep;
    try {
      rep = cfg.family == "hermite" ? hermite_identity_report(cfg.n)
                                    : laguerre_identity_report(cfg.n, cfg.alpha + 1.0);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    ordered_json jrep;
    ordered_json entries = ordered_json::array();
    for (const auto& e : rep.entries) {
      ordered_json je;
      je["name"] = e.name;
      je["value"] = e.value;
      je["target"] = e.target;
      je["deviation"] = e.deviation;
      je["informational"] = e.informational;
      entries.push_back(je);
    }
    pass = rep.max_deviation() <= 1e-8;
    jrep["identities"] = entries;
    jrep["max_deviation"] = rep.max_deviation();
    jrep["pass"] = pass;
    out << "# " << jrep.dump() << "\n";
  }
  sink.finish();
  return pass ? 0 : kExitVerification;
}

// ---------------------------------------------------------------------------
// cov

int run_cov(RunConfig& cfg) {
  if (!cfg.has("system")) throw UsageError("cov: --system is required");
  const RootSystem system = parse_system(cfg.system);
  const Flavor fl = cfg.has("flavor") ? parse_flavor(cfg.flavor) : Flavor::Bessel;
  if (cfg.n < 1) throw UsageError("cov: --n must be at least 1");
  if (system == RootSystem::B && !cfg.has("nu")) throw UsageError("cov: system B needs --nu");
  if (!cfg.has("format")) cfg.format = "json";
  if (cfg.format != "json") throw UsageError("cov: only json output is supported");

  FrozenCovariance fc;
  try {
    fc = frozen_covariance(system, fl, cfg.n, cfg.nu);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const int n = cfg.n;
  std::vector<double> claim;
  double claim_det = 1.0;
  if (system == RootSystem::A && fl == Flavor::Bessel) {
    for (int i = 1; i <= n; ++i) claim.push_back(i);
  } else if (system == RootSystem::A && fl == Flavor::Cauchy) {
    for (int i = 1; i <= n; ++i) claim.push_back((i == 2 ? 4.0 : double(i)) * (n + 1.0));
  } else if (system == RootSystem::B) {
    for (int i = 1; i <= n; ++i) claim.push_back(2.0 * i);
  }
  std::sort(claim.begin(), claim.end());
  for (double v : claim) claim_det *= v;

  double deviation = 0.0;
  ordered_json doc;
  ordered_json echo;
  echo["command"] = "cov";
  echo["system"] = to_string(system);
  echo["flavor"] = to_string(fl);
  echo["n"] = n;
  if (system == RootSystem::B) echo["nu"] = cfg.nu;
  echo["format"] = cfg.format;
  if (!cfg.out.empty()) echo["out"] = cfg.out;
  doc["config"] = echo;
  doc["sigma_inv"] = matrix_json(fc.sigma_inv);
  doc["sigma"] = matrix_json(fc.sigma);
  doc["eigenvalues"] = fc.eigen.values;
  double det = 1.0;
  for (double v : fc.eigen.values) det *= v;
  doc["determinant"] = det;

  if (!claim.empty()) {
    for (int i = 0; i < n; ++i)
      deviation = std::max(deviation, std::abs(fc.eigen.values[i] - claim[i]));
    deviation = std::max(deviation, std::abs(det / claim_det - 1.0));
    doc["claimed_eigenvalues"] = claim;
    doc["claimed_determinant"] = claim_det;
  }
  if (system == RootSystem::D) {
    const double snn = fc.sigma_inv(n - 1, n - 1);
    double off = 0.0;
    for (int j = 0; j + 1 < n; ++j) off = std::max(off, std::abs(fc.sigma_inv(n - 1, j)));
    doc["s_nn"] = snn;
    doc["s_nn_claim"] = double(n);
    doc["off_block_max"] = off;
    deviation = std::max(std::abs(snn - n), off);
  }
  if (system == RootSystem::A && fl == Flavor::Cauchy) {
    const SymMatrix sub = sigma_cauchy_a_subtraction(n);
    const SymMatrix printed = sigma_cauchy_a_printed(n);
    double direct = 0.0, variant = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        direct = std::max(direct, std::abs(sub(i, j) - fc.sigma(i, j)));
        variant = std::max(variant, std::abs(printed(i, j) - sub(i, j)));
      }
    deviation = std::max(deviation, direct);
    doc["printed_variant_deviation"] = variant;  // recorded, not asserted
  }
  const bool pass = deviation <= 1e-8;
  doc["deviation"] = deviation;
  doc["pass"] = pass;

  Sink sink(cfg);
  sink.stream() << doc.dump(2) << "\n";
  sink.finish();
  return pass ? 0 : kExitVerification;
}

// ---------------------------------------------------------------------------
// sample

LawSpec resolve_law(const RunConfig& cfg) {
  const std::string& name = cfg.law;
  const int n = cfg.n;
  if (n < 1) throw UsageError("--n must be at least 1");
  auto need = [&](const char* key) {
    if (!cfg.has(key)) throw UsageError(std::string("law ") + name + " needs --" + key);
  };
  auto reject = [&](const char* key) {
    if (cfg.has(key)) throw UsageError(std::string("law ") + name + " does not take --" + key);
  };
  try {
    if (name == "bessel-a" || name == "cauchy-a" || name == "bessel-d" || name == "cauchy-d") {
      need("k");
      reject("k1");
      reject("k2");
      reject("nu");
      reject("beta");
      const Flavor fl = name[0] == 'b' ? Flavor::Bessel : Flavor::Cauchy;
      const MultiplicitySpec ms =
          name.back() == 'a' ? multiplicity_a(n, cfg.k) : multiplicity_d(n, cfg.k);
      return ensemble_law_spec(ms, fl, cfg.t);
    }
    if (name == "bessel-b" || name == "cauchy-b") {
      reject("k");
      const bool pair = cfg.has("k1") || cfg.has("k2");
      const bool ratio = cfg.has("nu") || cfg.has("beta");
      if (pair && ratio) throw UsageError("give either --k1/--k2 or --nu/--beta, not both");
      MultiplicitySpec ms;
      if (pair) {
        need("k1");
        need("k2");
        ms = multiplicity_b(n, cfg.k1, cfg.k2);
      } else {
        need("nu");
        need("beta");
        ms = multiplicity_b_nu_beta(n, cfg.nu, cfg.beta);
      }
      return ensemble_law_spec(ms, name[0] == 'b' ? Flavor::Bessel : Flavor::Cauchy, cfg.t);
    }
    reject("k");
    reject("k1");
    reject("k2");
    reject("beta");
    if (name == "limit-b") {
      need("nu");
      return limit_law_spec(LimitSystem::B, n, cfg.nu);
    }
    reject("nu");
    if (name == "limit-a") return limit_law_spec(LimitSystem::A, n);
    if (name == "limit-d") return limit_law_spec(LimitSystem::D, n);
    if (name == "limit-b-one-sided") return limit_law_spec(LimitSystem::BOneSided, n);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown law: " + name);
}

int run_sample(RunConfig& cfg) {
  if (!cfg.has("law")) throw UsageError("sample: --law is required");
  if (!cfg.has("count") || cfg.count < 1) throw UsageError("sample: --count must be at least 1");
  if (cfg.has("t") && !(cfg.t > 0.0)) throw UsageError("sample: --t must be positive");
  if (!cfg.has("format")) cfg.format = "jsonl";
  if (cfg.format != "jsonl" && cfg.format != "csv")
    throw UsageError("sample: --format must be jsonl or csv");

  const LawSpec law = resolve_law(cfg);
  const SampleBatch batch = sample_batch(law, cfg.count, cfg.seed, 0);

  ordered_json echo;
  echo["command"] = "sample";
  echo["law"] = cfg.law;
  echo["n"] = cfg.n;
  if (cfg.has("k")) echo["k"] = cfg.k;
  if (cfg.has("k1")) echo["k1"] = cfg.k1;
  if (cfg.has("k2")) echo["k2"] = cfg.k2;
  if (cfg.has("nu")) echo["nu"] = cfg.nu;
  if (cfg.has("beta")) echo["beta"] = cfg.beta;
  if (law.kind == LawSpec::Kind::Ensemble) echo["t"] = law.t;
  echo["count"] = cfg.count;
  echo["seed"] = cfg.seed;
  echo["format"] = cfg.format;
  if (!cfg.out.empty()) echo["out"] = cfg.out;

  Sink sink(cfg);
  if (cfg.format == "jsonl")
    write_jsonl(sink.stream(), batch, echo);
  else
    write_csv(sink.stream(), batch, echo);
  sink.finish();
  return 0;
}

// ---------------------------------------------------------------------------
// verify

std::vector<double> gaussian_rows(RngStream& rng, const Matrix& chol, int n, std::size_t count) {
  std::vector<double> out(count * n);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& v : g) v = rng.normal();
    for (int r = 0; r < n; ++r) {
      double s = 0.0;
      for (int c = 0; c <= r; ++c) s += chol(r, c) * g[c];
      out[i * n + r] = s;
    }
  }
  return out;
}

TestReport identity_scan(const std::string& name, int n_max,
                         const std::function<double(int)>& worst_for, double tol) {
  TestReport rep;
  rep.name = name;
  rep.threshold = tol;
  for (int n = 2; n <= n_max; ++n) rep.statistic = std::max(rep.statistic, worst_for(n));
  rep.pass = rep.statistic <= tol;
  rep.metadata["n_max"] = n_max;
  return rep;
}

void suite_identities(const RunConfig& cfg, std::vector<TestReport>& out) {
  const int n_zero = cfg.has("n") ? cfg.n : 50;
  const int n_lag = std::min(n_zero, 30);
  const int n_cov = std::min(n_zero, 30);
  const int n_closed = std::min(n_zero, 20);

  out.push_back(identity_scan("hermite-zero-identities", n_zero,
                              [](int n) { return hermite_identity_report(n).max_deviation(); },
                              1e-8));
  {
    TestReport rep;
    rep.name = "laguerre-inverse-zero-sum";
    rep.threshold = 1e-10;
    for (double alpha : {0.0, 1.0, 2.0, 0.5})
      for (int n = 1; n <= n_zero; ++n)
        rep.statistic = std::max(
            rep.statistic, std::abs(inverse_zero_sum(n, alpha) - n / (alpha + 1.0)));
    rep.pass = rep.statistic <= rep.threshold;
    rep.metadata["n_max"] = n_zero;
    out.push_back(rep);
  }
  {
    TestReport rep;
    rep.name = "laguerre-peak-identities";
    rep.threshold = 1e-8;
    for (double nu : {0.5, 1.0, 2.0, 5.0})
      for (int n = 1; n <= n_lag; ++n)
        rep.statistic = std::max(rep.statistic, laguerre_identity_report(n, nu).max_deviation());
    rep.pass = rep.statistic <= rep.threshold;
    rep.metadata["n_max"] = n_lag;
    out.push_back(rep);
  }
  out.push_back(identity_scan(
      "covariance-spectra", n_cov,
      [](int n) {
        double worst = 0.0;
        {
          const FrozenCovariance fc = frozen_covariance(RootSystem::A, Flavor::Bessel, n);
          for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(fc.eigen.values[i] - (i + 1.0)));
        }
        {
          const FrozenCovariance fc = frozen_covariance(RootSystem::A, Flavor::Cauchy, n);
          std::vector<double> claim;
          for (int i = 1; i <= n; ++i) claim.push_back((i == 2 ? 4.0 : double(i)) * (n + 1.0));
          std::sort(claim.begin(), claim.end());
          for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(fc.eigen.values[i] - claim[i]));
        }
        for (double nu : {0.5, 1.0, 2.0, 5.0}) {
          const FrozenCovariance fc = frozen_covariance(RootSystem::B, Flavor::Bessel, n, nu);
          for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(fc.eigen.values[i] - 2.0 * (i + 1.0)));
        }
        {
          const FrozenCovariance fc = frozen_covariance(RootSystem::D, Flavor::Bessel, n);
          worst = std::max(worst, std::abs(fc.sigma_inv(n - 1, n - 1) - n));
          for (int j = 0; j + 1 < n; ++j)
            worst = std::max(worst, std::abs(fc.sigma_inv(n - 1, j)));
        }
        return worst;
      },
      1e-8));
  out.push_back(identity_scan(
      "covariance-closed-forms", n_closed,
      [](int n) {
        double worst = 0.0;
        {
          const FrozenCovariance fc = frozen_covariance(RootSystem::A, Flavor::Bessel, n);
          const SymMatrix closed = sigma_closed_a(n);
          double fro = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              const double d = closed(i, j) - fc.sigma(i, j);
              fro += d * d;
            }
          worst = std::max(worst, std::sqrt(fro));
        }
        {
          const FrozenCovariance fc = frozen_covariance(RootSystem::A, Flavor::Cauchy, n);
          const SymMatrix sub = sigma_cauchy_a_subtraction(n);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              worst = std::max(worst, std::abs(sub(i, j) - fc.sigma(i, j)));
        }
        return worst;
      },
      1e-8));
}

void suite_normalization(const RunConfig& cfg, std::vector<TestReport>& out) {
  const std::size_t count = cfg.has("count") ? cfg.count : 100000;
  const double sqrt2 = std::sqrt(2.0);
  std::vector<LawSpec> laws;
  for (int n : {1, 2, 3}) {
    for (Flavor fl : {Flavor::Bessel, Flavor::Cauchy}) {
      const double t = fl == Flavor::Bessel ? 1.0 : sqrt2;
      laws.push_back(ensemble_law_spec(multiplicity_a(n, 1.0), fl, t));
      laws.push_back(ensemble_law_spec(multiplicity_b_nu_beta(n, 2.0, 1.0), fl, t));
      laws.push_back(ensemble_law_spec(multiplicity_d(n, 1.0), fl, t));
    }
  }
  for (int n : {2, 3}) {
    laws.push_back(limit_law_spec(LimitSystem::A, n));
    laws.push_back(limit_law_spec(LimitSystem::B, n, 2.0));
    laws.push_back(limit_law_spec(LimitSystem::D, n));
    laws.push_back(limit_law_spec(LimitSystem::BOneSided, n));
  }
  std::uint64_t stream = 0;
  for (const LawSpec& law : laws) {
    RngStream rng(cfg.seed, 100 + stream++);
    const McNormalization mc =
        mc_normalize(make_log_density(law), make_proposal(law), count, rng);
    std::ostringstream name;
    name << "normalization-" << law.name() << "-n" << law.dim();
    out.push_back(mc_normalization_report(name.str(), mc));
  }
}

void suite_clt(const RunConfig& cfg, std::vector<TestReport>& out) {
  const std::size_t count = cfg.has("count") ? cfg.count : 10000;
  const int perms = cfg.permutations;
  const int n = cfg.has("n") ? cfg.n : 2;
  const double k = cfg.has("k") ? cfg.k : 200.0;
  const double nu = cfg.has("nu") ? cfg.nu : 2.0;
  const double sqrt2 = std::sqrt(2.0);
  std::vector<RootSystem> systems;
  if (cfg.has("system"))
    systems.push_back(parse_system(cfg.system));
  else
    systems = {RootSystem::A, RootSystem::B, RootSystem::D};

  {
    TestReport rep;
    rep.name = "subordinator-cdf";
    rep.threshold = 0.0;
    rep.pass = true;
    double worst = 0.0;
    for (double t : {1.0, sqrt2, 3.0}) {
      RngStream rng(cfg.seed, 11);
      std::vector<double> draws(count);
      for (auto& s : draws) s = sample_subordinator(rng, t);
      TestReport ks = ks_one_sample("sub", std::move(draws),
                                    [t](double s) { return subordinator_cdf(t, s); }, 0.01);
      worst = std::max(worst, ks.statistic / ks.threshold);
      rep.threshold = 1.0;
      rep.pass = rep.pass && ks.pass;
    }
    rep.statistic = worst;
    rep.n1 = count;
    rep.metadata["t_grid"] = std::vector<double>{1.0, sqrt2, 3.0};
    out.push_back(rep);
  }

  int salt = 0;
  for (RootSystem system : systems) {
    const std::string tag = to_string(system);
    MultiplicitySpec ms;
    PeakVector peak;
    double mode_coeff = 0.0;  // Bessel-flavor mode is mode_coeff * peak at t = 1
    switch (system) {
      case RootSystem::A:
        ms = multiplicity_a(n, k);
        peak = peak_vector(RootSystem::A, n);
        mode_coeff = std::sqrt(2.0 * k);
        break;
      case RootSystem::B:
        ms = multiplicity_b_nu_beta(n, nu, k);
        peak = peak_vector(RootSystem::B, n, nu);
        mode_coeff = std::sqrt(k);
        break;
      default:
        ms = multiplicity_d(n, k);
        peak = peak_vector(RootSystem::D, n);
        mode_coeff = std::sqrt(k);
        break;
    }

    if (system == RootSystem::A) {
      const LawSpec law = ensemble_law_spec(multiplicity_a(n, k), Flavor::Cauchy, sqrt2);
      SampleBatch b = sample_batch(law, count, cfg.seed, 20 + salt);
      std::vector<double> cog(b.count);
      for (std::size_t i = 0; i < b.count; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += b.row(i)[j];
        cog[i] = s / std::sqrt(double(n));
      }
      out.push_back(
          ks_one_sample("center-of-gravity-cauchy", std::move(cog), cog_marginal_cdf, 0.01));
    }

    {
      const LawSpec law = ensemble_law_spec(ms, Flavor::Bessel, 1.0);
      SampleBatch b = sample_batch(law, count, cfg.seed, 30 + salt);
      std::vector<double> x(b.data);
      for (std::size_t i = 0; i < b.count; ++i)
        for (int j = 0; j < n; ++j) x[i * n + j] -= mode_coeff * peak.coords[j];
      const FrozenCovariance fc = frozen_covariance(system, Flavor::Bessel, n, nu);
      RngStream grng(cfg.seed, 40 + salt);
      const std::vector<double> y = gaussian_rows(grng, cholesky(fc.sigma), n, count);
      RngStream prng(cfg.seed, 50 + salt);
      out.push_back(
          energy_two_sample("freezing-clt-" + tag, x, y, n, perms, 0.01, prng));
    }

    {
      const LawSpec law = ensemble_law_spec(ms, Flavor::Cauchy, sqrt2);
      SampleBatch b = sample_batch(law, count, cfg.seed, 60 + salt);
      std::vector<double> x(b.data);
      for (std::size_t i = 0; i < b.count; ++i) {
        std::vector<double> row(x.begin() + i * n, x.begin() + (i + 1) * n);
        const std::vector<double> mapped = rescale(
            row, system == RootSystem::B ? ms.k2 : ms.k(), peak, RescaleDirection::Forward);
        for (int j = 0; j < n; ++j) x[i * n + j] = mapped[j];
      }
      LawSpec lim;
      switch (system) {
        case RootSystem::A: lim = limit_law_spec(LimitSystem::A, n); break;
        case RootSystem::B: lim = limit_law_spec(LimitSystem::B, n, nu); break;
        default: lim = limit_law_spec(LimitSystem::D, n); break;
      }
      SampleBatch lb = sample_batch(lim, count, cfg.seed, 70 + salt);
      RngStream prng(cfg.seed, 80 + salt);
      out.push_back(
          energy_two_sample("weak-limit-" + tag, x, lb.data, n, perms, 0.01, prng));
    }
    ++salt;
  }
}

int run_verify(RunConfig& cfg) {
  if (!cfg.has("suite")) throw UsageError("verify: --suite is required");
  if (!cfg.has("format")) cfg.format = "json";
  if (cfg.format != "json") throw UsageError("verify: only json output is supported");
  std::vector<TestReport> reports;
  if (cfg.suite == "identities")
    suite_identities(cfg, reports);
  else if (cfg.suite == "normalization")
    suite_normalization(cfg, reports);
  else if (cfg.suite == "clt")
    suite_clt(cfg, reports);
  else if (cfg.suite == "all") {
    suite_identities(cfg, reports);
    suite_normalization(cfg, reports);
    suite_clt(cfg, reports);
  } else
    throw UsageError("verify: unknown suite: " + cfg.suite);

  bool pass = true;
  ordered_json arr = ordered_json::array();
  for (const TestReport& r : reports) {
    pass = pass && r.pass;
    arr.push_back(r.to_json());
  }
  ordered_json echo;
  echo["command"] = "verify";
  echo["suite"] = cfg.suite;
  if (cfg.has("system")) echo["system"] = cfg.system;
  if (cfg.has("n")) echo["n"] = cfg.n;
  if (cfg.has("k")) echo["k"] = cfg.k;
  if (cfg.has("nu")) echo["nu"] = cfg.nu;
  if (cfg.has("count")) echo["count"] = cfg.count;
  echo["permutations"] = cfg.permutations;
  echo["seed"] = cfg.seed;
  echo["format"] = cfg.format;
  if (!cfg.out.empty()) echo["out"] = cfg.out;
  ordered_json doc;
  doc["config"] = echo;
  doc["reports"] = arr;
  doc["pass"] = pass;

  Sink sink(cfg);
  sink.stream() << doc.dump(2) << "\n";
  sink.finish();
  return pass ? 0 : kExitVerification;
}

// ---------------------------------------------------------------------------
// converge

int run_converge(RunConfig& cfg) {
  if (!cfg.has("mode")) throw UsageError("converge: --mode is required");
  if (cfg.k_grid.empty()) throw UsageError("converge: --k-grid must be non-empty");
  for (double k : cfg.k_grid)
    if (!(k >= 1.0)) throw UsageError("converge: --k-grid values must be at least 1");
  for (std::size_t i = 0; i + 1 < cfg.k_grid.size(); ++i)
    if (!(cfg.k_grid[i] < cfg.k_grid[i + 1]))
      throw UsageError("converge: --k-grid must be strictly ascending");
  if (!cfg.has("format")) cfg.format = "csv";
  if (cfg.format != "csv") throw UsageError("converge: only csv output is supported");
  const int n = cfg.has("n") ? cfg.n : 2;
  if (n < 2) throw UsageError("converge: --n must be at least 2");

  ordered_json echo;
  echo["command"] = "converge";
  echo["mode"] = cfg.mode;
  echo["system"] = cfg.has("system") ? cfg.system : "A";
  echo["n"] = n;
  if (cfg.has("nu")) echo["nu"] = cfg.nu;
  echo["k_grid"] = cfg.k_grid;

  if (cfg.mode == "ratio") {
    if (cfg.has("system") && parse_system(cfg.system) != RootSystem::A)
      throw UsageError("converge: ratio mode is defined for system A");
    echo["format"] = cfg.format;
    if (!cfg.out.empty()) echo["out"] = cfg.out;

    // Offsets orthogonal to the peak: 0 and two steps along (1,...,1)/sqrt(n).
    std::vector<std::vector<double>> offsets;
    offsets.emplace_back(n, 0.0);
    for (double step : {0.35, 0.7}) {
      std::vector<double> x(n, step / std::sqrt(double(n)));
      offsets.push_back(x);
    }

    Sink sink(cfg);
    std::ostream& out = sink.stream();
    out << "# " << echo.dump() << "\n";
    out << "k,ratio_at_0,ratio_offset_1,ratio_offset_2\n";
    for (double k : cfg.k_grid) {
      out << csv_double(k);
      for (const auto& x : offsets) out << ',' << csv_double(ratio_constant_a(n, k, x));
      out << "\n";
    }
    sink.finish();
    return 0;
  }

  if (cfg.mode != "weak") throw UsageError("converge: unknown mode: " + cfg.mode);
  const RootSystem system = cfg.has("system") ? parse_system(cfg.system) : RootSystem::A;
  if (system == RootSystem::B && !cfg.has("nu")) throw UsageError("converge: system B needs --nu");
  const std::size_t count = cfg.has("count") ? cfg.count : 10000;
  const double sqrt2 = std::sqrt(2.0);
  echo["count"] = count;
  echo["permutations"] = cfg.permutations;
  echo["seed"] = cfg.seed;
  echo["format"] = cfg.format;
  if (!cfg.out.empty()) echo["out"] = cfg.out;

  Sink sink(cfg);
  std::ostream& out = sink.stream();
  out << "# " << echo.dump() << "\n";
  out << "k,energy,p_value,pass\n";
  std::uint64_t row = 0;
  for (double k : cfg.k_grid) {
    MultiplicitySpec ms;
    PeakVector peak;
    LawSpec lim;
    switch (system) {
      case RootSystem::A:
        ms = multiplicity_a(n, k);
        peak = peak_vector(RootSystem::A, n);
        lim = limit_law_spec(LimitSystem::A, n);
        break;
      case RootSystem::B:
        ms = multiplicity_b_nu_beta(n, cfg.nu, k);
        peak = peak_vector(RootSystem::B, n, cfg.nu);
        lim = limit_law_spec(LimitSystem::B, n, cfg.nu);
        break;
      default:
        ms = multiplicity_d(n, k);
        peak = peak_vector(RootSystem::D, n);
        lim = limit_law_spec(LimitSystem::D, n);
        break;
    }
    SampleBatch b = sample_batch(ensemble_law_spec(ms, Flavor::Cauchy, sqrt2), count, cfg.seed,
                                 2 * row);
    std::vector<double> x(b.data);
    for (std::size_t i = 0; i < b.count; ++i) {
      std::vector<double> rowv(x.begin() + i * n, x.begin() + (i + 1) * n);
      const std::vector<double> mapped = rescale(rowv, k, peak, RescaleDirection::Forward);
      for (int j = 0; j < n; ++j) x[i * n + j] = mapped[j];
    }
    SampleBatch lb = sample_batch(lim, count, cfg.seed, 2 * row + 1);
    RngStream prng(cfg.seed, 1000 + row);
    const TestReport rep =
        energy_two_sample("weak", x, lb.data, n, cfg.permutations, 0.01, prng);
    out << csv_double(k) << ',' << csv_double(rep.statistic) << ',' << csv_double(rep.p_value)
        << ',' << (rep.pass ? 1 : 0) << "\n";
    ++row;
  }
  sink.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beta ensembles, Cauchy-Bessel laws, and their freezing limits"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags win over its values");
    sub->add_option("--seed", cfg.seed, "RNG seed (default: FREEZELAB_SEED or 0)");
    sub->add_option("--out", cfg.out, "output path (default: stdout)");
    sub->add_option("--format", cfg.format, "output format");
  };

  CLI::App* zeros = app.add_subcommand("zeros", "zeros of the orthogonal polynomials as CSV");
  zeros->add_option("--family", cfg.family, "hermite or laguerre");
  zeros->add_option("--n", cfg.n, "polynomial degree");
  zeros->add_option("--alpha", cfg.alpha, "Laguerre parameter (default 0)");
  zeros->add_flag("--verify", cfg.verify, "append the zero-identity report");
  add_common(zeros);

  CLI::App* cov = app.add_subcommand("cov", "frozen covariance matrices as JSON");
  cov->add_option("--system", cfg.system, "root system: A, B, or D");
  cov->add_option("--flavor", cfg.flavor, "bessel or cauchy (default bessel)");
  cov->add_option("--n", cfg.n, "dimension");
  cov->add_option("--nu", cfg.nu, "B multiplicity ratio");
  add_common(cov);

  CLI::App* sample = app.add_subcommand("sample", "reproducible sample batches as JSONL/CSV");
  sample->add_option("--law", cfg.law,
                     "bessel-a/b/d, cauchy-a/b/d, limit-a/b/d, limit-b-one-sided");
  sample->add_option("--n", cfg.n, "dimension");
  sample->add_option("--k", cfg.k, "multiplicity (systems A and D)");
  sample->add_option("--k1", cfg.k1, "B short-root multiplicity");
  sample->add_option("--k2", cfg.k2, "B long-root multiplicity");
  sample->add_option("--nu", cfg.nu, "B multiplicity ratio");
  sample->add_option("--beta", cfg.beta, "B multiplicity scale");
  sample->add_option("--t", cfg.t, "ensemble time parameter (default 1)");
  sample->add_option("--count", cfg.count, "number of samples");
  add_common(sample);

  CLI::App* verify = app.add_subcommand("verify", "verification suites as a JSON report");
  verify->add_option("--suite", cfg.suite, "identities, normalization, clt, or all");
  verify->add_option("--system", cfg.system, "restrict clt suite to one system");
  verify->add_option("--n", cfg.n, "dimension / degree budget");
  verify->add_option("--k", cfg.k, "freezing multiplicity (default 200)");
  verify->add_option("--nu", cfg.nu, "B multiplicity ratio (default 2)");
  verify->add_option("--count", cfg.count, "sample budget");
  verify->add_option("--permutations", cfg.permutations, "energy-test permutations");
  add_common(verify);

  CLI::App* converge = app.add_subcommand("converge", "multiplicity sweeps as CSV");
  converge->add_option("--mode", cfg.mode, "ratio or weak");
  converge->add_option("--system", cfg.system, "root system (default A)");
  converge->add_option("--n", cfg.n, "dimension (default 2)");
  converge->add_option("--nu", cfg.nu, "B multiplicity ratio");
  converge->add_option("--k-grid", cfg.k_grid, "ascending multiplicities")
      ->delimiter(',');
  converge->add_option("--count", cfg.count, "samples per grid point (weak mode)");
  converge->add_option("--permutations", cfg.permutations, "energy-test permutations");
  add_common(converge);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  try {
    // Record which keys came from flags before folding in config and env.
    for (const auto& key : {"system", "family", "law", "suite", "mode", "flavor", "format",
                            "out", "n", "k", "k1", "k2", "nu", "beta", "alpha", "t", "count",
                            "seed", "permutations", "verify"}) {
      const CLI::Option* opt = sub->get_option_no_throw(std::string("--") + key);
      if (opt && opt->count() > 0) cfg.given.insert(key);
    }
    {
      const CLI::Option* opt = sub->get_option_no_throw("--k-grid");
      if (opt && opt->count() > 0) cfg.given.insert("k_grid");
    }
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    apply_seed_env(cfg);

    if (cfg.command == "zeros") return run_zeros(cfg);
    if (cfg.command == "cov") return run_cov(cfg);
    if (cfg.command == "sample") return run_sample(cfg);
    if (cfg.command == "verify") return run_verify(cfg);
    return run_converge(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
