#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "maxwin/empirical.hpp"
#include "maxwin/errors.hpp"
#include "maxwin/evt_scaling.hpp"
#include "maxwin/fixture.hpp"
#include "maxwin/gaussian.hpp"
#include "maxwin/limit_engine.hpp"
#include "maxwin/mc_lab.hpp"
#include "maxwin_cli/cli.hpp"

namespace maxwin::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";
constexpr const char* kStudyHeader = "n2,n1,sigma,c,p_hat,std_err,p_limit,p_exact";

std::string num(double v) {
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  return fmt::format("{}", v);
}

ordered_json jnum(double v) {
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  return v;
}

ordered_json jarray(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

std::string scalar_text(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + scalar_text(v[i]);
    return s;
  }
  return v.dump();
}

enum class Format { kCsv, kJson };

struct Common {
  std::string format = "csv";
  bool json = false;
  std::string output;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  unsigned threads = 0;
  CLI::Option* seed_opt = nullptr;

  Format resolved_format() const { return json || format == "json" ? Format::kJson : Format::kCsv; }
  std::uint64_t resolved_seed() const { return seed_opt != nullptr && seed_opt->count() > 0 ? seed : default_seed(); }
};

void add_output_flags(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--json", c.json, "Shorthand for --format json");
  sub->add_option("--output,-o", c.output, "Write to this file instead of stdout");
}

void add_rng_flags(CLI::App* sub, Common& c) {
  c.seed_opt = sub->add_option("--seed", c.seed, "64-bit seed (default $MAXWIN_SEED or 20260221)");
  sub->add_option("--stream", c.stream, "Base stream id");
  sub->add_option("--threads", c.threads, "Worker threads (0 = all); never changes results");
}

/// A rendered artifact: the document for JSON, the `#` metadata block plus
/// table for CSV.
struct Artifact {
  ordered_json doc;
  std::vector<std::string> comments;
  std::string table;
  int exit_code = kOk;
};

ordered_json header(const std::string& command, ordered_json config) {
  ordered_json doc;
  doc["command"] = command;
  doc["version"] = kVersion;
  doc["config"] = std::move(config);
  return doc;
}

std::string render(const Artifact& a, Format f) {
  if (f == Format::kJson) {
    return a.doc.dump(2) + "\n";
  }
  std::string s = fmt::format("# maxwin {} {}\n", kVersion, a.doc["command"].get<std::string>());
  for (const auto& [key, value] : a.doc["config"].items()) {
    s += fmt::format("# {}: {}\n", key, scalar_text(value));
  }
  for (const auto& c : a.comments) {
    s += "# " + c + "\n";
  }
  return s + a.table;
}

void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw IoError("cannot open '" + tmp + "' for writing");
    }
    f << text;
    f.flush();
    if (!f) {
      std::remove(tmp.c_str());
      throw IoError("write to '" + tmp + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoError("cannot move output into '" + path + "': " + ec.message());
  }
}

std::string study_csv(const std::vector<StudyRow>& rows) {
  std::string s = std::string(kStudyHeader) + "\n";
  for (const auto& r : rows) {
    const std::string n1 = r.n1_floor ? fmt::format("{}", *r.n1_floor) : num(r.n1);
    const std::string exact = r.p_exact ? num(*r.p_exact) : "";
    s += fmt::format("{},{},{},{},{},{},{},{}\n", num(r.n2), n1, num(r.sigma), num(r.c), num(r.p_hat),
                     num(r.std_err), num(r.p_limit), exact);
  }
  return s;
}

ordered_json study_json(const std::vector<StudyRow>& rows) {
  ordered_json a = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json j;
    j["n2"] = r.n2;
    if (r.n1_floor) {
      j["n1"] = *r.n1_floor;
    } else {
      j["n1"] = r.n1;
    }
    j["n1_is_floor"] = r.n1_floor.has_value();
    j["sigma"] = r.sigma;
    j["c"] = r.c;
    j["p_hat"] = r.p_hat;
    j["std_err"] = r.std_err;
    j["p_limit"] = r.p_limit;
    j["p_limit_abs_err"] = r.p_limit_err;
    j["p_exact"] = r.p_exact ? ordered_json(*r.p_exact) : ordered_json(nullptr);
    a.push_back(std::move(j));
  }
  return a;
}

// ---------------------------------------------------------------- limit

struct LimitArgs {
  Common common;
  bool two_group = false;
  bool multi = false;
  std::string c = "1";
  std::string sigma = "1.5";
  std::vector<std::string> groups;
};

LimitGroup parse_group(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || text.find(':', colon + 1) != std::string::npos) {
    throw UsageError("--group expects C:sigma, got '" + text + "'");
  }
  const auto c = parse_grid(text.substr(0, colon));
  const auto s = parse_grid(text.substr(colon + 1));
  if (c.size() != 1 || s.size() != 1) {
    throw UsageError("--group expects single values, got '" + text + "'");
  }
  return {ExtendedReal::from_double(c[0]), s[0]};
}

Artifact cmd_limit(const LimitArgs& a) {
  Artifact art;
  if (a.multi) {
    std::vector<LimitGroup> groups;
    std::vector<std::string> specs;
    for (const auto& g : a.groups) {
      groups.push_back(parse_group(g));
      specs.push_back(num(groups.back().c.to_double()) + ":" + num(groups.back().sigma));
    }
    const LimitSpecK spec = LimitSpecK::with_detected_baseline(groups);
    const MultiLimitResult res = multi_group_limits(spec);

    double sum = 0.0;
    for (const auto& p : res.probabilities) sum += p.value;

    ordered_json config;
    config["mode"] = "multi";
    config["groups"] = specs;
    art.doc = header("limit", config);
    art.doc["baseline"] = spec.baseline() + 1;
    art.doc["shared_sigma"] = res.shared_sigma;
    art.doc["sum"] = sum;
    ordered_json rows = ordered_json::array();
    art.table = "group,c,sigma,kappa,p,abs_err\n";
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const auto& g = spec.groups()[k];
      const auto& p = res.probabilities[k];
      ordered_json j;
      j["group"] = k + 1;
      j["c"] = jnum(g.c.to_double());
      j["sigma"] = g.sigma;
      j["kappa"] = res.kappas[k];
      j["p"] = p.value;
      j["abs_err"] = p.abs_err;
      rows.push_back(std::move(j));
      art.table += fmt::format("{},{},{},{},{},{}\n", k + 1, num(g.c.to_double()), num(g.sigma),
                               num(res.kappas[k]), num(p.value), num(p.abs_err));
    }
    art.doc["groups"] = std::move(rows);
    art.comments.push_back(fmt::format("baseline: {}", spec.baseline() + 1));
    art.comments.push_back(fmt::format("shared_sigma: {}", res.shared_sigma));
    art.comments.push_back("sum: " + num(sum));
    return art;
  }

  const auto cs = parse_grid(a.c);
  const auto sigmas = parse_grid(a.sigma);
  ordered_json config;
  config["mode"] = "two-group";
  config["c"] = jarray(cs);
  config["sigma"] = jarray(sigmas);
  art.doc = header("limit", config);
  ordered_json rows = ordered_json::array();
  art.table = "c,sigma,kappa,p,abs_err,regime\n";
  for (double s : sigmas) {
    for (double c : cs) {
      const ScalingLaw law(ExtendedReal::from_double(c), s);
      const ExtendedReal k = kappa(law);
      const QuadResult r = two_group_limit(law);
      const char* regime = k.is_finite() ? "critical" : "degenerate";
      ordered_json j;
      j["c"] = jnum(c);
      j["sigma"] = s;
      j["kappa"] = jnum(k.to_double());
      j["p"] = r.value;
      j["abs_err"] = r.abs_err;
      j["regime"] = regime;
      rows.push_back(std::move(j));
      art.table += fmt::format("{},{},{},{},{},{}\n", num(c), num(s), num(k.to_double()), num(r.value),
                               num(r.abs_err), regime);
    }
  }
  art.doc["rows"] = std::move(rows);
  return art;
}

// ---------------------------------------------------------------- scale

struct ScaleArgs {
  Common common;
  std::string n2 = "100";
  std::string sigma = "1.5";
  std::string c = "1";
};

Artifact cmd_scale(const ScaleArgs& a) {
  const auto n2s = parse_grid(a.n2);
  const auto sigmas = parse_grid(a.sigma);
  const auto cs = parse_grid(a.c);
  ordered_json config;
  config["n2"] = jarray(n2s);
  config["sigma"] = jarray(sigmas);
  config["c"] = jarray(cs);

  Artifact art;
  art.doc = header("scale", config);
  ordered_json rows = ordered_json::array();
  art.table = "n2,sigma,c,log_f,f,n1,n1_real,log_n1,beta,centering_gap,kappa\n";
  for (double s : sigmas) {
    for (double c : cs) {
      if (!(c > 0.0) || !std::isfinite(c)) {
        throw DomainError("scale: C must be finite and > 0");
      }
      const ExtendedReal k = kappa(ScalingLaw(ExtendedReal::finite(c), s));
      for (double n2 : n2s) {
        const CriticalScale f = critical_scale(n2, s);
        const CriticalN1 n1 = critical_n1(n2, s, c);
        const double b = beta_from_log(n1.log_real_value, n2, s);
        const double gap = centering_gap_from_log(n1.log_real_value, n2, s);
        ordered_json j;
        j["n2"] = n2;
        j["sigma"] = s;
        j["c"] = c;
        j["log_f"] = f.log_value;
        j["f"] = jnum(f.value());
        j["n1"] = n1.floor_value ? ordered_json(*n1.floor_value) : ordered_json(nullptr);
        j["n1_real"] = jnum(n1.real_value);
        j["log_n1"] = n1.log_real_value;
        j["beta"] = b;
        j["centering_gap"] = gap;
        j["kappa"] = k.value();
        rows.push_back(std::move(j));
        art.table += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", num(n2), num(s), num(c), num(f.log_value),
                                 num(f.value()), n1.floor_value ? fmt::format("{}", *n1.floor_value) : "",
                                 num(n1.real_value), num(n1.log_real_value), num(b), num(gap), num(k.value()));
      }
    }
  }
  art.doc["rows"] = std::move(rows);
  return art;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  Common common;
  std::string sigma = "1.5";
  std::string c = "0.1,1,5";
  std::string n2 = "1e2:1e6";
  std::uint64_t trials = 100'000;
  bool exact = false;
};

Artifact cmd_simulate(const SimulateArgs& a) {
  const auto sigmas = parse_grid(a.sigma);
  const auto cs = parse_grid(a.c);
  const auto n2s = parse_size_grid(a.n2);
  const std::uint64_t seed = a.common.resolved_seed();

  ordered_json config;
  config["sigma"] = jarray(sigmas);
  config["c"] = jarray(cs);
  config["n2"] = jarray(n2s);
  config["trials"] = a.trials;
  config["seed"] = seed;
  config["stream"] = a.common.stream;
  config["exact"] = a.exact;

  std::vector<StudyRow> rows;
  const std::uint64_t per_sigma = cs.size() * n2s.size();
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    StudyConfig sc;
    sc.sigma = sigmas[i];
    sc.c_values = cs;
    sc.n2_grid = n2s;
    sc.trials = a.trials;
    sc.rng = RngStream{seed, a.common.stream + i * per_sigma};
    sc.exact = a.exact;
    sc.threads = a.common.threads;
    auto part = convergence_study(sc);
    rows.insert(rows.end(), part.begin(), part.end());
  }

  Artifact art;
  art.doc = header("simulate", config);
  art.doc["rows"] = study_json(rows);
  art.table = study_csv(rows);
  return art;
}

// ---------------------------------------------------------------- empirical

struct EmpiricalArgs {
  Common common;
  std::string input;
  std::string c = "0.1,0.6,3.0";
  std::string n2 = "5:150";
  std::uint64_t b = 10'000;
  std::uint64_t n1_cap = 10'000'000;
  StationFilter filter;
  std::string start = "1980-01";
  std::string end = "2025-12";
};

YearMonth parse_year_month(const std::string& text) {
  int y = 0;
  int m = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d-%d%c", &y, &m, &extra) != 2 || m < 1 || m > 12) {
    throw UsageError("expected YYYY-MM, got '" + text + "'");
  }
  return {y, m};
}

const char* label_name(PoolLabel l) { return l == PoolLabel::kLowVariance ? "low" : "high"; }

Artifact cmd_empirical(const EmpiricalArgs& a) {
  StationFilter filter = a.filter;
  filter.start = parse_year_month(a.start);
  filter.end = parse_year_month(a.end);
  const auto cs = parse_grid(a.c);
  const auto n2s = parse_size_grid(a.n2);
  const std::uint64_t seed = a.common.resolved_seed();

  ordered_json config;
  config["input"] = a.input;
  config["c"] = jarray(cs);
  config["n2"] = jarray(n2s);
  config["b"] = a.b;
  config["seed"] = seed;
  config["stream"] = a.common.stream;
  config["n1_cap"] = a.n1_cap;
  config["lat_min"] = filter.lat_min;
  config["lat_max"] = filter.lat_max;
  config["lon_min"] = filter.lon_min;
  config["lon_max"] = filter.lon_max;
  config["start"] = a.start;
  config["end"] = a.end;
  config["min_months"] = filter.min_present_months;

  const LoadReport report = load_stations(a.input, filter);
  EmpiricalStudyConfig sc;
  sc.c_values = cs;
  sc.n2_grid = n2s;
  sc.b = a.b;
  sc.rng = RngStream{seed, a.common.stream};
  sc.bootstrap.n1_cap = a.n1_cap;
  sc.bootstrap.threads = a.common.threads;
  const EmpiricalResult res = run_empirical_pipeline(report.stations, sc);

  Artifact art;
  art.doc = header("empirical", config);
  art.doc["ingest"] = {{"rows_read", report.rows_read},
                       {"stations_seen", report.stations_seen},
                       {"dropped_outside_box", report.dropped_outside_box},
                       {"dropped_incomplete", report.dropped_incomplete},
                       {"stations_kept", report.stations.size()}};
  art.comments.push_back(fmt::format("ingest: rows_read={} stations_seen={} dropped_outside_box={} "
                                     "dropped_incomplete={} stations_kept={}",
                                     report.rows_read, report.stations_seen, report.dropped_outside_box,
                                     report.dropped_incomplete, report.stations.size()));

  ordered_json stations = ordered_json::array();
  for (const auto& s : res.stations) {
    stations.push_back({{"station_id", s.station_id},
                        {"phi", s.phi},
                        {"innovation_sd", s.innovation_sd},
                        {"n_used", s.n_used},
                        {"cluster", label_name(s.cluster)}});
    art.comments.push_back(fmt::format("station: id={} phi={} innovation_sd={} n_used={} cluster={}", s.station_id,
                                       num(s.phi), num(s.innovation_sd), s.n_used, label_name(s.cluster)));
  }
  art.doc["stations"] = std::move(stations);

  const auto& p = res.pools;
  art.doc["split"] = {{"low_center", res.split.low_center},
                      {"high_center", res.split.high_center},
                      {"sse", res.split.sse},
                      {"n_low", res.split.low.size()},
                      {"n_high", res.split.high.size()}};
  art.doc["pools"] = {{"low_sd", p.low.sd},
                      {"high_sd", p.high.sd},
                      {"low_size", p.low.values.size()},
                      {"high_size", p.high.values.size()},
                      {"sigma_ratio", p.sigma_ratio}};
  art.comments.push_back(fmt::format("split: low_center={} high_center={} sse={} n_low={} n_high={}",
                                     num(res.split.low_center), num(res.split.high_center), num(res.split.sse),
                                     res.split.low.size(), res.split.high.size()));
  art.comments.push_back(fmt::format("pools: low_sd={} high_sd={} low_size={} high_size={}", num(p.low.sd),
                                     num(p.high.sd), p.low.values.size(), p.high.values.size()));
  art.comments.push_back("sigma_ratio: " + num(p.sigma_ratio));

  art.doc["rows"] = study_json(res.rows);
  art.table = study_csv(res.rows);
  return art;
}

// ---------------------------------------------------------------- selftest

struct SelftestArgs {
  Common common;
  double mutate_kappa = 0.0;
};

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool passed() const { return value <= tolerance; }
};

Artifact cmd_selftest(const SelftestArgs& a) {
  std::vector<Check> checks;

  double worst = 0.0;
  for (double lp = -12.0 * std::log(10.0); lp <= std::log(0.5); lp += 0.25) {
    const double p = std::exp(lp);
    for (double q : {p, 1.0 - p}) {
      worst = std::max(worst, std::fabs(std_normal_cdf(std_normal_quantile(UnitProb(q))) - q));
    }
  }
  checks.push_back({"quantile_round_trip", worst, 1e-12});

  worst = 0.0;
  for (double lq = -1e5; lq <= std::log(0.5); lq = lq < -10.0 ? lq * 0.8 : lq + 0.37) {
    const double x = upper_tail_quantile(TailProb(lq));
    worst = std::max(worst, std::fabs(log_std_normal_sf(x) - lq) / std::fabs(lq));
  }
  checks.push_back({"tail_round_trip", worst, 1e-8});

  worst = 0.0;
  for (int n1 = 1; n1 <= 6; ++n1) {
    for (int n2 = 1; n2 <= 6; ++n2) {
      const double p = finite_n_winner({double(n1), 1.0}, {double(n2), 1.0}).value;
      worst = std::max(worst, std::fabs(p - double(n1) / double(n1 + n2)));
    }
  }
  checks.push_back({"symmetric_finite_n", worst, 1e-10});

  worst = 0.0;
  const std::vector<std::vector<LimitGroup>> specs = {
      {{ExtendedReal::finite(1), 1.0}, {ExtendedReal::finite(1), 1.5}, {ExtendedReal::finite(2), 2.0}},
      {{ExtendedReal::finite(1), 1.0}, {ExtendedReal::finite(0.1), 1.2}, {ExtendedReal::finite(5), 3.0},
       {ExtendedReal::finite(0.5), 1.7}}};
  for (const auto& g : specs) {
    double sum = 0.0;
    for (const auto& p : multi_group_limits(LimitSpecK::with_detected_baseline(g)).probabilities) sum += p.value;
    worst = std::max(worst, std::fabs(sum - 1.0));
  }
  checks.push_back({"sum_to_one", worst, 1e-8});

  // Two-group side goes through kappa so a perturbed kappa shows up here.
  worst = 0.0;
  for (double c : {0.1, 1.0, 5.0}) {
    for (double s : {1.2, 1.5, 2.0}) {
      const double k = kappa(ScalingLaw(ExtendedReal::finite(c), s)).value() + a.mutate_kappa;
      const double two = two_group_limit_from_kappa(ExtendedReal::finite(k), s).value;
      const auto multi =
          multi_group_limits(LimitSpecK({{ExtendedReal::finite(1), 1.0}, {ExtendedReal::finite(c), s}}, 0));
      worst = std::max({worst, std::fabs(multi.probabilities[0].value - two),
                        std::fabs(multi.probabilities[1].value - (1.0 - two))});
    }
  }
  checks.push_back({"k2_reduction", worst, 1e-9});

  worst = 0.0;
  for (const auto& [g1, g2] : std::vector<std::pair<GroupSpec, GroupSpec>>{
           {{4659, 1.0}, {100, std::sqrt(2.0)}}, {{10, 1.0}, {10, 1.5}}, {{3, 2.0}, {700, 1.0}}}) {
    const double p1 = finite_n_winner(g1, g2).value;
    const double p2 = finite_n_winner_multi({g1, g2}, 1).value;
    worst = std::max(worst, std::fabs(p1 + p2 - 1.0));
  }
  checks.push_back({"complement", worst, 1e-9});

  const double lo = two_group_limit(0.0, 2.0).value;
  const double hi = two_group_limit(std::numeric_limits<double>::infinity(), 2.0).value;
  checks.push_back({"degenerate_endpoints", std::fabs(lo) + std::fabs(hi - 1.0), 0.0});

  Artifact art;
  ordered_json config = ordered_json::object();
  if (a.mutate_kappa != 0.0) {
    config["mutate_kappa"] = a.mutate_kappa;
  }
  art.doc = header("selftest", config);
  ordered_json list = ordered_json::array();
  bool all = true;
  art.table = "check,status,value,tolerance\n";
  for (const auto& c : checks) {
    all = all && c.passed();
    list.push_back({{"name", c.name}, {"passed", c.passed()}, {"value", c.value}, {"tolerance", c.tolerance}});
    art.table += fmt::format("{},{},{},{}\n", c.name, c.passed() ? "PASS" : "FAIL", num(c.value), num(c.tolerance));
  }
  art.doc["checks"] = std::move(list);
  art.doc["passed"] = all;
  art.exit_code = all ? kOk : kDomain;
  return art;
}

// ---------------------------------------------------------------- fixture

struct FixtureArgs {
  Common common;
  FixtureSpec spec;
  std::string start = "1980-01";
  std::string end = "2025-12";
};

std::string cmd_fixture(const FixtureArgs& a) {
  FixtureSpec spec = a.spec;
  spec.start = parse_year_month(a.start);
  spec.end = parse_year_month(a.end);
  spec.rng = RngStream{a.common.resolved_seed(), a.common.stream};
  std::ostringstream os;
  write_fixture(os, spec);
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Winning probabilities of heterogeneous Gaussian maxima", "maxwin"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  LimitArgs limit;
  auto* limit_cmd = app.add_subcommand("limit", "Limiting winning probabilities (two-group or K-group)");
  auto* tg = limit_cmd->add_flag("--two-group", limit.two_group, "Two-group limit for each (C, sigma)");
  auto* mg = limit_cmd->add_flag("--multi", limit.multi, "K-group limit from --group C:sigma specs");
  tg->excludes(mg);
  limit_cmd->add_option("--c", limit.c, "C grid (inf allowed)");
  limit_cmd->add_option("--sigma", limit.sigma, "sigma grid");
  limit_cmd->add_option("--group", limit.groups, "C:sigma; repeat, one group must have sigma 1");
  add_output_flags(limit_cmd, limit.common);

  ScaleArgs scale;
  auto* scale_cmd = app.add_subcommand("scale", "Critical scale, n1, beta, centering gap and kappa");
  scale_cmd->add_option("--n2", scale.n2, "n2 grid");
  scale_cmd->add_option("--sigma", scale.sigma, "sigma grid");
  scale_cmd->add_option("--c", scale.c, "C grid");
  add_output_flags(scale_cmd, scale.common);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo convergence study along the critical law");
  sim_cmd->add_option("--sigma", sim.sigma, "sigma grid");
  sim_cmd->add_option("--c", sim.c, "C grid");
  sim_cmd->add_option("--n2", sim.n2, "n2 grid (rounded to integers)");
  sim_cmd->add_option("--trials", sim.trials, "Trials per row")->check(CLI::PositiveNumber);
  sim_cmd->add_flag("--exact", sim.exact, "Add the finite-n quadrature column");
  add_rng_flags(sim_cmd, sim.common);
  add_output_flags(sim_cmd, sim.common);

  EmpiricalArgs emp;
  auto* emp_cmd = app.add_subcommand("empirical", "Bootstrap pipeline on monthly station records");
  emp_cmd->add_option("--input,-i", emp.input, "Station CSV")->required();
  emp_cmd->add_option("--c", emp.c, "C grid");
  emp_cmd->add_option("--n2", emp.n2, "n2 grid (rounded to integers)");
  emp_cmd->add_option("--b", emp.b, "Bootstrap iterations per row")->check(CLI::PositiveNumber);
  emp_cmd->add_option("--n1-cap", emp.n1_cap, "Largest n1 drawn per variable");
  emp_cmd->add_option("--lat-min", emp.filter.lat_min);
  emp_cmd->add_option("--lat-max", emp.filter.lat_max);
  emp_cmd->add_option("--lon-min", emp.filter.lon_min);
  emp_cmd->add_option("--lon-max", emp.filter.lon_max);
  emp_cmd->add_option("--start", emp.start, "First month, YYYY-MM");
  emp_cmd->add_option("--end", emp.end, "Last month, YYYY-MM");
  emp_cmd->add_option("--min-months", emp.filter.min_present_months, "Completeness floor");
  add_rng_flags(emp_cmd, emp.common);
  add_output_flags(emp_cmd, emp.common);

  SelftestArgs self;
  auto* self_cmd = app.add_subcommand("selftest", "Fast oracle checks");
  self_cmd->add_option("--mutate-kappa", self.mutate_kappa)->group("");
  add_output_flags(self_cmd, self.common);

  FixtureArgs fix;
  auto* fix_cmd = app.add_subcommand("fixture", "Write a synthetic station CSV");
  fix_cmd->add_option("--low", fix.spec.low_stations, "Stations with the low innovation sd");
  fix_cmd->add_option("--high", fix.spec.high_stations, "Stations with the high innovation sd");
  fix_cmd->add_option("--outside", fix.spec.outside_stations, "Stations outside the default box");
  fix_cmd->add_option("--sd-low", fix.spec.sd_low);
  fix_cmd->add_option("--sd-high", fix.spec.sd_high);
  fix_cmd->add_option("--phi", fix.spec.phi);
  fix_cmd->add_option("--trend", fix.spec.trend_per_decade, "Degrees per decade");
  fix_cmd->add_option("--missing", fix.spec.missing_fraction, "Fraction of missing months");
  fix_cmd->add_option("--start", fix.start, "First month, YYYY-MM");
  fix_cmd->add_option("--end", fix.end, "Last month, YYYY-MM");
  fix_cmd->add_option("--output,-o", fix.common.output, "Write to this file instead of stdout");
  add_rng_flags(fix_cmd, fix.common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    std::string text;
    const Common* common = nullptr;
    int code = kOk;
    auto finish = [&](const Artifact& art, const Common& c) {
      text = render(art, c.resolved_format());
      common = &c;
      code = art.exit_code;
    };
    if (limit_cmd->parsed()) {
      if (limit.multi == limit.two_group) {
        throw UsageError("limit: pass exactly one of --two-group or --multi");
      }
      finish(cmd_limit(limit), limit.common);
    } else if (scale_cmd->parsed()) {
      finish(cmd_scale(scale), scale.common);
    } else if (sim_cmd->parsed()) {
      finish(cmd_simulate(sim), sim.common);
    } else if (emp_cmd->parsed()) {
      finish(cmd_empirical(emp), emp.common);
    } else if (self_cmd->parsed()) {
      finish(cmd_selftest(self), self.common);
    } else {
      text = cmd_fixture(fix);
      common = &fix.common;
    }
    if (common->output.empty()) {
      out << text;
    } else {
      write_atomically(common->output, text);
    }
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const QuadratureError& e) {
    err << "quadrature error: " << e.what() << "\n";
    return kDomain;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kIo;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace maxwin::cli
